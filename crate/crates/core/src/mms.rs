//! Exact maximin shares.
//!
//! Once an agent's indivisible goods are placed, her divisible goods form a
//! single pool of value that can be spread over the bundles at will, so the
//! best worst bundle is a water-filling level. The search therefore only
//! enumerates placements of positively valued indivisible goods, in
//! restricted-growth form so that relabelled bundles are visited once.

use num_traits::{Signed, Zero};

use crate::error::{check_cap, domain, Result};
use crate::model::Instance;
use crate::rational::Rational;

/// Default bound on `k^{|IND_i|}` for the placement enumeration.
pub const DEFAULT_MMS_CAP: u128 = 1 << 26;

/// An agent's maximin share and a partition witnessing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MmsResult {
    pub value: Rational,
    /// `k` bundles, each a fraction per good; together they cover every good.
    pub partition: Vec<Vec<Rational>>,
}

/// Largest `t` with `Σ_j max(0, t − base_j) ≤ divisible_total`.
pub fn water_fill_level(base: &[Rational], divisible_total: &Rational) -> Result<Rational> {
    if base.is_empty() {
        return Err(domain("water filling needs at least one bundle"));
    }
    if divisible_total.is_negative() || base.iter().any(Signed::is_negative) {
        return Err(domain("water filling needs non-negative inputs"));
    }
    Ok(level_of(base, divisible_total))
}

fn level_of(base: &[Rational], pool: &Rational) -> Rational {
    let mut sorted: Vec<&Rational> = base.iter().collect();
    sorted.sort();
    let mut prefix = Rational::zero();
    for p in 1..=sorted.len() {
        prefix += sorted[p - 1];
        let t = (pool + &prefix) / Rational::from_integer(p.into());
        if p == sorted.len() || t <= *sorted[p] {
            return t;
        }
    }
    unreachable!("loop returns at p == len")
}

/// Exact `MMS_agent(k, M)` with the default enumeration cap.
pub fn exact_mms(inst: &Instance, agent: usize, k: usize) -> Result<MmsResult> {
    exact_mms_capped(inst, agent, k, DEFAULT_MMS_CAP)
}

pub fn exact_mms_capped(inst: &Instance, agent: usize, k: usize, cap: u128) -> Result<MmsResult> {
    if k < 1 {
        return Err(domain("bundle count must be at least one"));
    }
    if agent >= inst.agents() {
        return Err(domain(format!("agent {agent} out of range")));
    }
    let values = inst.values(agent);
    let flags = inst.divisible_row(agent);
    let indivisible: Vec<usize> =
        (0..inst.goods()).filter(|&g| !flags[g] && values[g].is_positive()).collect();
    check_cap(k, indivisible.len(), cap)?;
    let pool: Rational = (0..inst.goods()).filter(|&g| flags[g]).map(|g| values[g].clone()).sum();

    let item_values: Vec<Rational> = indivisible.iter().map(|&g| values[g].clone()).collect();
    let mut search = PlacementSearch {
        values: &item_values,
        k,
        pool: &pool,
        current: Vec::with_capacity(item_values.len()),
        bases: vec![Rational::zero(); k],
        best: None,
    };
    search.run(0, 0);
    let (value, placement) = search.best.expect("the empty prefix always yields a placement");

    let mut partition = vec![vec![Rational::zero(); inst.goods()]; k];
    let mut bases = vec![Rational::zero(); k];
    for (&g, &b) in indivisible.iter().zip(&placement) {
        partition[b][g] = Rational::from_integer(1.into());
        bases[b] += &values[g];
    }
    for g in (0..inst.goods()).filter(|&g| !flags[g] && values[g].is_zero()) {
        partition[0][g] = Rational::from_integer(1.into());
    }
    pour_divisible(inst, agent, &value, &bases, &mut partition);
    Ok(MmsResult { value, partition })
}

/// `exact_mms` for every agent with `k = n`.
pub fn mms_all(inst: &Instance) -> Result<Vec<MmsResult>> {
    mms_all_capped(inst, DEFAULT_MMS_CAP)
}

pub fn mms_all_capped(inst: &Instance, cap: u128) -> Result<Vec<MmsResult>> {
    (0..inst.agents()).map(|i| exact_mms_capped(inst, i, inst.agents(), cap)).collect()
}

pub fn mms_values(inst: &Instance) -> Result<Vec<Rational>> {
    Ok(mms_all(inst)?.into_iter().map(|r| r.value).collect())
}

struct PlacementSearch<'a> {
    values: &'a [Rational],
    k: usize,
    pool: &'a Rational,
    current: Vec<usize>,
    bases: Vec<Rational>,
    best: Option<(Rational, Vec<usize>)>,
}

impl PlacementSearch<'_> {
    /// Restricted-growth enumeration: item `idx` may join any of the `used`
    /// bundles opened so far, or open the next one.
    fn run(&mut self, idx: usize, used: usize) {
        if idx == self.values.len() {
            let level = level_of(&self.bases, self.pool);
            if self.best.as_ref().is_none_or(|(v, _)| level > *v) {
                self.best = Some((level, self.current.clone()));
            }
            return;
        }
        let limit = (used + 1).min(self.k);
        for b in 0..limit {
            self.bases[b] += &self.values[idx];
            self.current.push(b);
            self.run(idx + 1, used.max(b + 1));
            self.current.pop();
            self.bases[b] -= &self.values[idx];
        }
    }
}

/// Fills each bundle up to `level` with divisible goods, taken in ascending
/// good index and poured into bundles in order of decreasing deficit.
fn pour_divisible(
    inst: &Instance,
    agent: usize,
    level: &Rational,
    bases: &[Rational],
    partition: &mut [Vec<Rational>],
) {
    let mut deficits: Vec<(usize, Rational)> = bases
        .iter()
        .enumerate()
        .map(|(b, base)| (b, if base < level { level - base } else { Rational::zero() }))
        .collect();
    deficits.sort_by(|(ba, da), (bb, db)| db.cmp(da).then(ba.cmp(bb)));
    let mut slot = 0;
    for g in (0..inst.goods()).filter(|&g| inst.is_divisible(agent, g)) {
        let value = inst.value(agent, g);
        let mut left = Rational::from_integer(1.into());
        while left.is_positive() {
            while slot < deficits.len() && deficits[slot].1.is_zero() {
                slot += 1;
            }
            // Deficits sum exactly to the divisible pool.
            debug_assert!(slot < deficits.len(), "divisible mass left after filling");
            let Some((bundle, deficit)) = deficits.get_mut(slot) else {
                partition[0][g] += &left;
                break;
            };
            let take = (&*deficit / value).min(left.clone());
            *deficit -= &take * value;
            partition[*bundle][g] += &take;
            left -= take;
        }
    }
}
