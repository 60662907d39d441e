//! Shared helpers: random instances and independent reference computations.
#![allow(dead_code)]

use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use subjdiv::io::{generate, GenParams};
use subjdiv::oracle::lp::{maximize, LpOutcome};
use subjdiv::rational::{rat, Rational};
use subjdiv::{Allocation, Instance};

/// Random instance from the library generator with values in `[0, 8]`.
pub fn random_instance(seed: u64, agents: usize, goods: usize) -> Instance {
    generate(&GenParams { agents, goods, seed, div_prob: rat(1, 2), max_value: 8 }).unwrap()
}

/// Proptest strategy with its own value model: integer values in
/// `[0, max_value]`, each flag drawn independently, then repaired so that
/// every good is valued and no zero is marked divisible.
pub fn arb_instance(
    agents: std::ops::RangeInclusive<usize>,
    goods: std::ops::RangeInclusive<usize>,
    max_value: i64,
) -> impl Strategy<Value = Instance> {
    (agents, goods).prop_flat_map(move |(n, m)| {
        (
            proptest::collection::vec(proptest::collection::vec(0..=max_value, m), n),
            proptest::collection::vec(proptest::collection::vec(any::<bool>(), m), n),
        )
            .prop_map(move |(mut vals, flags)| {
                for g in 0..m {
                    if vals.iter().all(|row| row[g] == 0) {
                        vals[g % n][g] = 1;
                    }
                }
                let values: Vec<Vec<Rational>> =
                    vals.iter().map(|row| row.iter().map(|&v| Rational::from_integer(v.into())).collect()).collect();
                let divisible: Vec<Vec<bool>> = (0..n)
                    .map(|i| (0..m).map(|g| flags[i][g] && vals[i][g] > 0).collect())
                    .collect();
                Instance::with_default_names(values, divisible).unwrap()
            })
    })
}

/// `MMS_agent(k, M)` by trying every labelled placement of the agent's
/// indivisible goods and solving an LP for the divisible mass.
pub fn mms_by_enumeration(inst: &Instance, agent: usize, k: usize) -> Rational {
    let m = inst.goods();
    let ind: Vec<usize> = (0..m).filter(|&g| !inst.is_divisible(agent, g)).collect();
    let div: Vec<usize> = (0..m).filter(|&g| inst.is_divisible(agent, g)).collect();
    let mut best: Option<Rational> = None;
    let mut owners = vec![0usize; ind.len()];
    loop {
        let mut base = vec![Rational::zero(); k];
        for (&g, &b) in ind.iter().zip(&owners) {
            base[b] += inst.value(agent, g);
        }
        let level = divisible_lp(inst, agent, &base, &div);
        if best.as_ref().is_none_or(|b| level > *b) {
            best = Some(level);
        }
        let mut pos = owners.len();
        loop {
            if pos == 0 {
                return best.unwrap();
            }
            pos -= 1;
            owners[pos] += 1;
            if owners[pos] < k {
                break;
            }
            owners[pos] = 0;
        }
    }
}

/// max t s.t. `t ≤ base_b + Σ_g y_bg u(g)` and `Σ_b y_bg ≤ 1`.
fn divisible_lp(inst: &Instance, agent: usize, base: &[Rational], div: &[usize]) -> Rational {
    let k = base.len();
    let vars = 1 + k * div.len();
    let col = |b: usize, d: usize| 1 + b * div.len() + d;
    let mut c = vec![Rational::zero(); vars];
    c[0] = Rational::one();
    let mut a = Vec::new();
    let mut rhs = Vec::new();
    for b in 0..k {
        let mut row = vec![Rational::zero(); vars];
        row[0] = Rational::one();
        for (d, &g) in div.iter().enumerate() {
            row[col(b, d)] = -inst.value(agent, g);
        }
        a.push(row);
        rhs.push(base[b].clone());
    }
    for d in 0..div.len() {
        let mut row = vec![Rational::zero(); vars];
        for b in 0..k {
            row[col(b, d)] = Rational::one();
        }
        a.push(row);
        rhs.push(Rational::one());
    }
    match maximize(&c, &a, &rhs).unwrap() {
        LpOutcome::Optimal { value, .. } => value,
        LpOutcome::Unbounded => panic!("bounded by construction"),
    }
}

/// Owners of an integral allocation (`None` for charity).
pub fn owners_of(alloc: &Allocation) -> Vec<Option<usize>> {
    (0..alloc.goods())
        .map(|g| (0..alloc.agents()).find(|&i| alloc.shares[i][g].is_one()))
        .collect()
}

fn bundle_of(owners: &[Option<usize>], j: usize) -> Vec<usize> {
    (0..owners.len()).filter(|&g| owners[g] == Some(j)).collect()
}

fn value(inst: &Instance, i: usize, goods: &[usize]) -> Rational {
    goods.iter().map(|&g| inst.value(i, g).clone()).sum()
}

/// Classic EF1 for an integral allocation of indivisible goods.
pub fn classic_ef1(inst: &Instance, owners: &[Option<usize>]) -> bool {
    let n = inst.agents();
    (0..n).all(|i| {
        let mine = value(inst, i, &bundle_of(owners, i));
        (0..n).filter(|&j| j != i).all(|j| {
            let other = bundle_of(owners, j);
            let theirs = value(inst, i, &other);
            mine >= theirs || other.iter().any(|&g| mine >= &theirs - inst.value(i, g))
        })
    })
}

/// Classic EFX (removing any positively valued good) for indivisible goods.
pub fn classic_efx(inst: &Instance, owners: &[Option<usize>]) -> bool {
    let n = inst.agents();
    (0..n).all(|i| {
        let mine = value(inst, i, &bundle_of(owners, i));
        (0..n).filter(|&j| j != i).all(|j| {
            let other = bundle_of(owners, j);
            let theirs = value(inst, i, &other);
            mine >= theirs
                || other
                    .iter()
                    .filter(|&&g| inst.value(i, g).is_positive())
                    .all(|&g| mine >= &theirs - inst.value(i, g))
        })
    })
}

/// Plain round-robin over all goods in agent order, each agent taking her
/// favorite remaining good (lowest index on ties) and skipping once she
/// values nothing left.
pub fn classic_round_robin(inst: &Instance) -> Vec<Option<usize>> {
    let mut owners = vec![None; inst.goods()];
    let mut left: Vec<usize> = (0..inst.goods()).collect();
    while !left.is_empty() {
        let before = left.len();
        for i in 0..inst.agents() {
            if left.is_empty() {
                break;
            }
            let Some(&g) = left
                .iter()
                .filter(|&&g| inst.value(i, g).is_positive())
                .max_by(|&&a, &&b| inst.value(i, a).cmp(inst.value(i, b)).then(b.cmp(&a)))
            else {
                continue;
            };
            owners[g] = Some(i);
            left.retain(|&h| h != g);
        }
        assert!(left.len() < before, "no agent values the rest");
    }
    owners
}
