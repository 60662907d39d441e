//! Brute-force ground truth for small instances.
//!
//! * [`best_alpha`]: the best achievable MMS ratio, by enumerating who owns
//!   each good (or whether it is shared among its divisible viewers) and
//!   solving an exact LP for the shared mass.
//! * [`exists_efm_nonwasteful`], [`mnw_integral`], [`exists_ef_with_discards`]:
//!   exhaustive searches over integral allocations.

pub mod fixtures;
pub mod lp;

use num_traits::{One, Signed, Zero};

use crate::audit::{audit, mms_ratio, MmsRatio};
use crate::error::{check_cap, invariant, Error, Result};
use crate::mms::mms_values;
use crate::model::{Allocation, Instance};
use crate::rational::Rational;

pub use fixtures::{fixture, FixtureParams, FIXTURE_NAMES};
use lp::{maximize, LpOutcome};

/// Default bound on the number of configurations an oracle may visit.
pub const DEFAULT_ORACLE_CAP: u128 = 1 << 22;

/// Who holds a good in an ownership pattern.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ownership {
    Owner(usize),
    /// Split among the good's divisible viewers.
    Shared,
}

/// One [`Ownership`] per good.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OwnershipPattern(pub Vec<Ownership>);

impl OwnershipPattern {
    pub fn is_valid(&self, inst: &Instance) -> bool {
        self.0.len() == inst.goods()
            && self.0.iter().enumerate().all(|(g, o)| match o {
                Ownership::Owner(i) => *i < inst.agents(),
                Ownership::Shared => !inst.divisible_viewers(g).is_empty(),
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BestAlpha {
    pub alpha: MmsRatio,
    pub allocation: Allocation,
    pub pattern: OwnershipPattern,
}

/// Maximum over complete allocations of `min_i u_i(A_i) / MMS_i`.
///
/// Only patterns where an owner values her good as a positive indivisible
/// good are tried; any other owner is matched or beaten by sharing the good
/// among its divisible viewers, and a worthless good can always be shared.
pub fn best_alpha(inst: &Instance, cap: u128) -> Result<BestAlpha> {
    let n = inst.agents();
    let m = inst.goods();
    check_cap(n + 1, m, cap)?;
    let mms = mms_values(inst)?;
    let options: Vec<Vec<Ownership>> = (0..m)
        .map(|g| {
            let mut opts: Vec<Ownership> = (0..n)
                .filter(|&i| !inst.is_divisible(i, g) && inst.value(i, g).is_positive())
                .map(Ownership::Owner)
                .collect();
            if !inst.divisible_viewers(g).is_empty() {
                opts.push(Ownership::Shared);
            }
            opts
        })
        .collect();
    if options.iter().any(Vec::is_empty) {
        return Err(invariant("a good has no useful holder"));
    }
    let mut suffix = vec![vec![Rational::zero(); n]; m + 1];
    for g in (0..m).rev() {
        for i in 0..n {
            suffix[g][i] = &suffix[g + 1][i] + inst.value(i, g);
        }
    }
    let mut search = AlphaSearch {
        inst,
        mms: &mms,
        options: &options,
        suffix: &suffix,
        pattern: Vec::with_capacity(m),
        sure: vec![Rational::zero(); n],
        shared_upper: vec![Rational::zero(); n],
        best: None,
    };
    search.run(0)?;
    let (alpha, allocation, pattern) = search.best.ok_or_else(|| invariant("no pattern evaluated"))?;
    Ok(BestAlpha { alpha, allocation, pattern: OwnershipPattern(pattern) })
}

struct AlphaSearch<'a> {
    inst: &'a Instance,
    mms: &'a [Rational],
    options: &'a [Vec<Ownership>],
    suffix: &'a [Vec<Rational>],
    pattern: Vec<Ownership>,
    /// Value from owned goods and from shared goods with one viewer.
    sure: Vec<Rational>,
    /// Full value of shared goods with several viewers, per viewer.
    shared_upper: Vec<Rational>,
    best: Option<(MmsRatio, Allocation, Vec<Ownership>)>,
}

impl AlphaSearch<'_> {
    fn bound(&self, next: usize) -> MmsRatio {
        let upper: Vec<Rational> = (0..self.inst.agents())
            .map(|i| &self.sure[i] + &self.shared_upper[i] + &self.suffix[next][i])
            .collect();
        mms_ratio(&upper, self.mms)
    }

    fn run(&mut self, g: usize) -> Result<()> {
        if let Some((best, _, _)) = &self.best {
            if self.bound(g) <= *best {
                return Ok(());
            }
        }
        if g == self.inst.goods() {
            let (ratio, alloc) = self.evaluate()?;
            if self.best.as_ref().is_none_or(|(b, _, _)| ratio > *b) {
                self.best = Some((ratio, alloc, self.pattern.clone()));
            }
            return Ok(());
        }
        for &opt in &self.options[g] {
            let viewers = self.inst.divisible_viewers(g);
            let value = |i: usize| self.inst.value(i, g).clone();
            match opt {
                Ownership::Owner(i) => self.sure[i] += value(i),
                Ownership::Shared if viewers.len() == 1 => self.sure[viewers[0]] += value(viewers[0]),
                Ownership::Shared => {
                    for &i in &viewers {
                        self.shared_upper[i] += value(i);
                    }
                }
            }
            self.pattern.push(opt);
            self.run(g + 1)?;
            self.pattern.pop();
            match opt {
                Ownership::Owner(i) => self.sure[i] -= value(i),
                Ownership::Shared if viewers.len() == 1 => self.sure[viewers[0]] -= value(viewers[0]),
                Ownership::Shared => {
                    for &i in &viewers {
                        self.shared_upper[i] -= value(i);
                    }
                }
            }
        }
        Ok(())
    }

    /// Best ratio and a realizing allocation for the current full pattern.
    fn evaluate(&self) -> Result<(MmsRatio, Allocation)> {
        let inst = self.inst;
        let n = inst.agents();
        let mut alloc = Allocation::empty(n, inst.goods());
        let mut split: Vec<(usize, Vec<usize>)> = Vec::new();
        for (g, opt) in self.pattern.iter().enumerate() {
            match opt {
                Ownership::Owner(i) => alloc.shares[*i][g] = Rational::one(),
                Ownership::Shared => {
                    let viewers = inst.divisible_viewers(g);
                    if viewers.len() == 1 {
                        alloc.shares[viewers[0]][g] = Rational::one();
                    } else {
                        split.push((g, viewers));
                    }
                }
            }
        }
        if split.is_empty() {
            return Ok((mms_ratio(&self.sure, self.mms), alloc));
        }
        let binding: Vec<usize> = (0..n).filter(|&i| self.mms[i].is_positive()).collect();
        if binding.is_empty() {
            for (g, viewers) in &split {
                alloc.shares[viewers[0]][*g] = Rational::one();
            }
            return Ok((MmsRatio::Unbounded, alloc));
        }

        // Variables: alpha, then x[i][g] for each split good and viewer.
        let mut columns: Vec<(usize, usize)> = Vec::new();
        for (g, viewers) in &split {
            for &i in viewers {
                columns.push((i, *g));
            }
        }
        let vars = 1 + columns.len();
        let mut c = vec![Rational::zero(); vars];
        c[0] = Rational::one();
        let mut a = Vec::new();
        let mut b = Vec::new();
        for &i in &binding {
            let mut row = vec![Rational::zero(); vars];
            row[0] = self.mms[i].clone();
            for (k, &(agent, g)) in columns.iter().enumerate() {
                if agent == i {
                    row[k + 1] = -inst.value(i, g);
                }
            }
            a.push(row);
            b.push(self.sure[i].clone());
        }
        for (g, _) in &split {
            let mut row = vec![Rational::zero(); vars];
            for (k, &(_, h)) in columns.iter().enumerate() {
                if h == *g {
                    row[k + 1] = Rational::one();
                }
            }
            a.push(row);
            b.push(Rational::one());
        }
        let LpOutcome::Optimal { value, x } = maximize(&c, &a, &b)? else {
            return Err(invariant("ratio LP is unbounded"));
        };
        for (k, &(i, g)) in columns.iter().enumerate() {
            alloc.shares[i][g] = x[k + 1].clone();
        }
        for (g, viewers) in &split {
            let taken: Rational = viewers.iter().map(|&i| alloc.shares[i][*g].clone()).sum();
            alloc.shares[viewers[0]][*g] += Rational::one() - taken;
        }
        let utilities: Vec<Rational> = (0..n).map(|i| alloc.utility_of(inst, i)).collect();
        let achieved = mms_ratio(&utilities, self.mms);
        if !achieved.at_least(&value) {
            return Err(invariant("LP witness misses its optimum"));
        }
        Ok((MmsRatio::Finite(value), alloc))
    }
}

/// Calls `visit` on every owner vector in `0..n` for `goods` goods,
/// lexicographically with the first good most significant; stops early when
/// `visit` returns `true`.
fn for_each_assignment(n: usize, goods: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    if n == 0 {
        return;
    }
    let mut owners = vec![0usize; goods];
    loop {
        if visit(&owners) {
            return;
        }
        let mut pos = goods;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            owners[pos] += 1;
            if owners[pos] < n {
                break;
            }
            owners[pos] = 0;
        }
    }
}

/// First complete integral allocation that is EFM and non-wasteful, if any.
///
/// Only instances where every good has at most one divisible viewer are
/// supported: there, non-wasteful complete allocations are integral.
pub fn exists_efm_nonwasteful(inst: &Instance, cap: u128) -> Result<Option<Allocation>> {
    if let Some(g) = (0..inst.goods()).find(|&g| inst.divisible_viewers(g).len() > 1) {
        return Err(Error::Unsupported(format!("good {g} has several divisible viewers")));
    }
    let n = inst.agents();
    check_cap(n, inst.goods(), cap)?;
    let mut found = None;
    let mut failure = None;
    for_each_assignment(n, inst.goods(), |owners| {
        let owners: Vec<Option<usize>> = owners.iter().map(|&o| Some(o)).collect();
        let alloc = Allocation::from_owners(n, &owners);
        match audit(inst, &alloc, None) {
            Ok(r) if r.efm && r.non_wasteful => {
                found = Some(alloc);
                true
            }
            Ok(_) => false,
            Err(e) => {
                failure = Some(e);
                true
            }
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(found),
    }
}

/// Nash welfare `Π_i u_i(A_i)`.
pub fn nash_welfare(inst: &Instance, alloc: &Allocation) -> Rational {
    (0..inst.agents()).map(|i| alloc.utility_of(inst, i)).product()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MnwResult {
    pub allocation: Allocation,
    /// Product over all agents.
    pub product: Rational,
    /// Number of agents with positive utility.
    pub positive_agents: usize,
    /// Product over the agents with positive utility.
    pub positive_product: Rational,
}

/// Integral allocation of maximum Nash welfare; when every allocation has
/// zero welfare, maximizes the number of positive agents and then their
/// product. Fractional allocations are not considered.
pub fn mnw_integral(inst: &Instance, cap: u128) -> Result<MnwResult> {
    let n = inst.agents();
    check_cap(n, inst.goods(), cap)?;
    let mut best: Option<(usize, Rational, Vec<usize>)> = None;
    for_each_assignment(n, inst.goods(), |owners| {
        let mut utilities = vec![Rational::zero(); n];
        for (g, &o) in owners.iter().enumerate() {
            utilities[o] += inst.value(o, g);
        }
        let positive = utilities.iter().filter(|u| u.is_positive()).count();
        let product: Rational = utilities.iter().filter(|u| u.is_positive()).cloned().product();
        let better = match &best {
            None => true,
            Some((p, q, _)) => positive > *p || (positive == *p && product > *q),
        };
        if better {
            best = Some((positive, product, owners.to_vec()));
        }
        false
    });
    let (positive_agents, positive_product, owners) =
        best.ok_or_else(|| invariant("no allocation enumerated"))?;
    let owners: Vec<Option<usize>> = owners.into_iter().map(Some).collect();
    let allocation = Allocation::from_owners(n, &owners);
    Ok(MnwResult {
        product: nash_welfare(inst, &allocation),
        allocation,
        positive_agents,
        positive_product,
    })
}

/// First envy-free integral allocation that hands out all goods except at
/// most `max_discards` of them, trying fewer discards first.
pub fn exists_ef_with_discards(
    inst: &Instance,
    max_discards: usize,
    cap: u128,
) -> Result<Option<Allocation>> {
    let n = inst.agents();
    let m = inst.goods();
    check_cap(n + 1, m, cap)?;
    for discards in 0..=max_discards.min(m) {
        for kept in subsets_of_size(m, m - discards) {
            let mut found = None;
            for_each_assignment(n, kept.len(), |owners| {
                let mut full = vec![None; m];
                for (&g, &o) in kept.iter().zip(owners) {
                    full[g] = Some(o);
                }
                let alloc = Allocation::from_owners(n, &full);
                let envy_free = (0..n).all(|i| {
                    let mine = alloc.utility_of(inst, i);
                    (0..n).all(|j| mine >= alloc.utility_of_bundle(inst, i, j))
                });
                if envy_free {
                    found = Some(alloc);
                }
                envy_free
            });
            if found.is_some() {
                return Ok(found);
            }
        }
    }
    Ok(None)
}

fn subsets_of_size(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for g in start..m {
            if m - g < k - cur.len() {
                break;
            }
            cur.push(g);
            go(g + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, m, k, &mut Vec::new(), &mut out);
    out
}
