//! Exact fairness and efficiency checks on a concrete allocation.
//!
//! A good counts as contained in `A_j` as soon as `A_j` holds positive mass
//! of it, and a hypothetical removal deletes that whole piece.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Signed;
use serde::{Serialize, Serializer};

use crate::error::{domain, Result};
use crate::model::{validate_allocation, Allocation, Instance};
use crate::rational::{format_rational, Rational};

/// `u_i(A_i) / MMS_i`; agents with a zero MMS never bind, so an instance
/// where every MMS is zero has an unbounded ratio.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MmsRatio {
    Finite(Rational),
    Unbounded,
}

impl MmsRatio {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            MmsRatio::Finite(r) => Some(r),
            MmsRatio::Unbounded => None,
        }
    }

    /// Whether the ratio is at least `alpha`.
    pub fn at_least(&self, alpha: &Rational) -> bool {
        self.finite().is_none_or(|r| r >= alpha)
    }
}

impl Ord for MmsRatio {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (MmsRatio::Finite(a), MmsRatio::Finite(b)) => a.cmp(b),
            (MmsRatio::Finite(_), MmsRatio::Unbounded) => Ordering::Less,
            (MmsRatio::Unbounded, MmsRatio::Finite(_)) => Ordering::Greater,
            (MmsRatio::Unbounded, MmsRatio::Unbounded) => Ordering::Equal,
        }
    }
}

impl PartialOrd for MmsRatio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MmsRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MmsRatio::Finite(r) => f.write_str(&format_rational(r)),
            MmsRatio::Unbounded => f.write_str("inf"),
        }
    }
}

impl Serialize for MmsRatio {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Minimum of `u_i / MMS_i` over agents with positive MMS.
pub fn mms_ratio(utilities: &[Rational], mms: &[Rational]) -> MmsRatio {
    utilities
        .iter()
        .zip(mms)
        .filter(|(_, m)| m.is_positive())
        .map(|(u, m)| u / m)
        .min()
        .map_or(MmsRatio::Unbounded, MmsRatio::Finite)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Predicate {
    Ef,
    Ef1m,
    Efm,
    Efxm,
    NonWasteful,
}

/// Why a predicate fails: agent `agent` towards `other`, or a wasted piece
/// of `good` held by `agent`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub predicate: Predicate,
    pub agent: usize,
    pub other: Option<usize>,
    pub good: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_mms: Option<MmsRatio>,
    pub ef: bool,
    pub ef1m: bool,
    pub efm: bool,
    pub efxm: bool,
    pub non_wasteful: bool,
    pub witnesses: Vec<Witness>,
}

impl AuditReport {
    pub fn holds(&self, p: Predicate) -> bool {
        match p {
            Predicate::Ef => self.ef,
            Predicate::Ef1m => self.ef1m,
            Predicate::Efm => self.efm,
            Predicate::Efxm => self.efxm,
            Predicate::NonWasteful => self.non_wasteful,
        }
    }
}

enum PairVerdict {
    Holds,
    Fails(Option<usize>),
}

/// Audits `alloc`; `alpha_mms` is filled in when `mms` is given.
pub fn audit(inst: &Instance, alloc: &Allocation, mms: Option<&[Rational]>) -> Result<AuditReport> {
    let violations = validate_allocation(inst, alloc, false)?;
    if let Some(v) = violations.first() {
        return Err(domain(format!("invalid allocation: {v}")));
    }
    if let Some(m) = mms {
        if m.len() != inst.agents() {
            return Err(domain("one MMS value per agent expected"));
        }
    }
    let n = inst.agents();
    let own: Vec<Rational> = (0..n).map(|i| alloc.utility_of(inst, i)).collect();
    let mut witnesses = Vec::new();
    let mut flags = [true; 4];
    let predicates = [Predicate::Ef, Predicate::Ef1m, Predicate::Efm, Predicate::Efxm];

    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            let verdicts = [
                pair_ef(inst, alloc, &own[i], i, j),
                pair_ef1m(inst, alloc, &own[i], i, j),
                pair_efm(inst, alloc, &own[i], i, j),
                pair_efxm(inst, alloc, &own[i], i, j),
            ];
            for (k, verdict) in verdicts.into_iter().enumerate() {
                if let PairVerdict::Fails(good) = verdict {
                    flags[k] = false;
                    witnesses.push(Witness { predicate: predicates[k], agent: i, other: Some(j), good });
                }
            }
        }
    }

    let mut non_wasteful = true;
    for i in 0..n {
        for g in alloc.support(i) {
            if !inst.piece_value(i, g, &alloc.shares[i][g]).is_positive() {
                non_wasteful = false;
                witnesses
                    .push(Witness { predicate: Predicate::NonWasteful, agent: i, other: None, good: Some(g) });
            }
        }
    }

    let [ef, ef1m, efm, efxm] = flags;
    assert!(!ef || efxm, "EF without EFXM");
    assert!(!efxm || efm, "EFXM without EFM");
    assert!(!efm || ef1m, "EFM without EF1M");
    Ok(AuditReport {
        alpha_mms: mms.map(|m| mms_ratio(&own, m)),
        ef,
        ef1m,
        efm,
        efxm,
        non_wasteful,
        witnesses,
    })
}

/// `u_i(A_j)` after deleting the piece of `g`.
fn without(inst: &Instance, alloc: &Allocation, i: usize, j: usize, g: usize) -> Rational {
    alloc.utility_of_bundle(inst, i, j) - inst.piece_value(i, g, &alloc.shares[j][g])
}

fn pair_ef(inst: &Instance, alloc: &Allocation, mine: &Rational, i: usize, j: usize) -> PairVerdict {
    if *mine >= alloc.utility_of_bundle(inst, i, j) {
        PairVerdict::Holds
    } else {
        PairVerdict::Fails(None)
    }
}

fn first_divisible(inst: &Instance, alloc: &Allocation, i: usize, j: usize) -> Option<usize> {
    alloc.support(j).into_iter().find(|&g| inst.is_divisible(i, g))
}

fn pair_efm(inst: &Instance, alloc: &Allocation, mine: &Rational, i: usize, j: usize) -> PairVerdict {
    if let PairVerdict::Holds = pair_ef(inst, alloc, mine, i, j) {
        return PairVerdict::Holds;
    }
    if let Some(g) = first_divisible(inst, alloc, i, j) {
        return PairVerdict::Fails(Some(g));
    }
    if alloc.support(j).into_iter().any(|g| *mine >= without(inst, alloc, i, j, g)) {
        PairVerdict::Holds
    } else {
        PairVerdict::Fails(None)
    }
}

fn pair_efxm(inst: &Instance, alloc: &Allocation, mine: &Rational, i: usize, j: usize) -> PairVerdict {
    if let PairVerdict::Holds = pair_ef(inst, alloc, mine, i, j) {
        return PairVerdict::Holds;
    }
    if let Some(g) = first_divisible(inst, alloc, i, j) {
        return PairVerdict::Fails(Some(g));
    }
    let offending = alloc
        .support(j)
        .into_iter()
        .filter(|&g| inst.value(i, g).is_positive())
        .find(|&g| *mine < without(inst, alloc, i, j, g));
    match offending {
        None => PairVerdict::Holds,
        Some(g) => PairVerdict::Fails(Some(g)),
    }
}

fn pair_ef1m(inst: &Instance, alloc: &Allocation, mine: &Rational, i: usize, j: usize) -> PairVerdict {
    let best = alloc
        .support(j)
        .into_iter()
        .filter(|&g| !inst.is_divisible(i, g) && inst.value(i, g).is_positive())
        .min_by(|&g, &h| without(inst, alloc, i, j, g).cmp(&without(inst, alloc, i, j, h)));
    match best {
        Some(g) if *mine >= without(inst, alloc, i, j, g) => PairVerdict::Holds,
        Some(g) => PairVerdict::Fails(Some(g)),
        None => pair_ef(inst, alloc, mine, i, j),
    }
}

/// Utilities of every agent, ready for [`mms_ratio`].
pub fn utilities(inst: &Instance, alloc: &Allocation) -> Vec<Rational> {
    (0..inst.agents()).map(|i| alloc.utility_of(inst, i)).collect()
}

/// `true` when no agent's MMS is positive or the allocation meets `alpha`.
pub fn meets_alpha(inst: &Instance, alloc: &Allocation, mms: &[Rational], alpha: &Rational) -> bool {
    mms_ratio(&utilities(inst, alloc), mms).at_least(alpha)
}
