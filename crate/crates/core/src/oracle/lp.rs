//! Small dense exact simplex.
//!
//! Solves `max c·x  s.t.  A x ≤ b, x ≥ 0` with `b ≥ 0`, so the origin is a
//! feasible starting basis and no phase one is needed. Bland's rule keeps
//! the pivoting finite under degeneracy.

use num_traits::{Signed, Zero};

use crate::error::{domain, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, x: Vec<Rational> },
    Unbounded,
}

pub fn maximize(c: &[Rational], a: &[Vec<Rational>], b: &[Rational]) -> Result<LpOutcome> {
    let vars = c.len();
    let rows = a.len();
    if b.len() != rows || a.iter().any(|r| r.len() != vars) {
        return Err(domain("linear program dimensions do not match"));
    }
    if b.iter().any(Signed::is_negative) {
        return Err(domain("right-hand side must be non-negative"));
    }
    let width = vars + rows + 1;
    let mut tab: Vec<Vec<Rational>> = Vec::with_capacity(rows + 1);
    for (r, row) in a.iter().enumerate() {
        let mut line = vec![Rational::zero(); width];
        line[..vars].clone_from_slice(row);
        line[vars + r] = Rational::from_integer(1.into());
        line[width - 1] = b[r].clone();
        tab.push(line);
    }
    let mut objective = vec![Rational::zero(); width];
    for (j, cj) in c.iter().enumerate() {
        objective[j] = -cj;
    }
    tab.push(objective);
    let mut basis: Vec<usize> = (vars..vars + rows).collect();

    loop {
        let obj = &tab[rows];
        let Some(enter) = (0..width - 1).find(|&j| obj[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rational)> = None;
        for r in 0..rows {
            let coef = &tab[r][enter];
            if !coef.is_positive() {
                continue;
            }
            let ratio = &tab[r][width - 1] / coef;
            let better = match &leave {
                None => true,
                Some((lr, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*lr]),
            };
            if better {
                leave = Some((r, ratio));
            }
        }
        let Some((pivot_row, _)) = leave else {
            return Ok(LpOutcome::Unbounded);
        };
        pivot(&mut tab, pivot_row, enter);
        basis[pivot_row] = enter;
    }

    let mut x = vec![Rational::zero(); vars];
    for (r, &var) in basis.iter().enumerate() {
        if var < vars {
            x[var] = tab[r][width - 1].clone();
        }
    }
    Ok(LpOutcome::Optimal { value: tab[rows][width - 1].clone(), x })
}

fn pivot(tab: &mut [Vec<Rational>], row: usize, col: usize) {
    let p = tab[row][col].clone();
    for v in tab[row].iter_mut() {
        *v = &*v / &p;
    }
    let pivot_line = tab[row].clone();
    for (r, line) in tab.iter_mut().enumerate() {
        if r == row || line[col].is_zero() {
            continue;
        }
        let factor = line[col].clone();
        for (v, pv) in line.iter_mut().zip(&pivot_line) {
            if !pv.is_zero() {
                *v = &*v - &factor * pv;
            }
        }
    }
}
