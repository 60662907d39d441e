//! Instances, allocations and utility evaluation.
//!
//! A divisible good is homogeneous, so a piece of it is fully described by
//! its length. Allocations therefore store one fraction per (agent, good)
//! pair instead of interval unions.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{domain, Result};
use crate::rational::{format_rational, in_unit_interval, Rational};

/// A fair-division instance with per-agent subjective divisibility.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    agent_names: Vec<String>,
    good_names: Vec<String>,
    values: Vec<Vec<Rational>>,
    divisible: Vec<Vec<bool>>,
}

/// A broken instance or allocation invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoAgents,
    NegativeValue { agent: usize, good: usize },
    UnvaluedGood { good: usize },
    ZeroValuedDivisible { agent: usize, good: usize },
    ShareOutOfRange { agent: usize, good: usize },
    CharityOutOfRange { good: usize },
    Overallocated { good: usize, total: Rational },
    Incomplete { good: usize, total: Rational },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoAgents => write!(f, "instance has no agents"),
            Violation::NegativeValue { agent, good } => {
                write!(f, "agent {agent} good {good}: negative value")
            }
            Violation::UnvaluedGood { good } => write!(f, "good {good} unvalued"),
            Violation::ZeroValuedDivisible { agent, good } => {
                write!(f, "agent {agent} good {good}: zero-valued divisible")
            }
            Violation::ShareOutOfRange { agent, good } => {
                write!(f, "agent {agent} good {good}: share outside [0,1]")
            }
            Violation::CharityOutOfRange { good } => {
                write!(f, "good {good}: charity outside [0,1]")
            }
            Violation::Overallocated { good, total } => {
                write!(f, "good {good} over-allocated: total {}", format_rational(total))
            }
            Violation::Incomplete { good, total } => {
                write!(f, "good {good} incomplete: total {}", format_rational(total))
            }
        }
    }
}

impl Instance {
    /// Builds an instance after checking dimensions only. Use
    /// [`validate_instance`] (or [`Instance::new`]) for the value invariants.
    pub fn from_parts(
        agent_names: Vec<String>,
        good_names: Vec<String>,
        values: Vec<Vec<Rational>>,
        divisible: Vec<Vec<bool>>,
    ) -> Result<Self> {
        let n = agent_names.len();
        let m = good_names.len();
        if values.len() != n || divisible.len() != n {
            return Err(domain(format!(
                "expected {n} value and divisibility rows, got {} and {}",
                values.len(),
                divisible.len()
            )));
        }
        for (i, (row, flags)) in values.iter().zip(&divisible).enumerate() {
            if row.len() != m || flags.len() != m {
                return Err(domain(format!(
                    "agent {i}: expected {m} values and flags, got {} and {}",
                    row.len(),
                    flags.len()
                )));
            }
        }
        Ok(Instance { agent_names, good_names, values, divisible })
    }

    /// Builds an instance and rejects it if any invariant is violated.
    pub fn new(
        agent_names: Vec<String>,
        good_names: Vec<String>,
        values: Vec<Vec<Rational>>,
        divisible: Vec<Vec<bool>>,
    ) -> Result<Self> {
        let inst = Self::from_parts(agent_names, good_names, values, divisible)?;
        let violations = validate_instance(&inst);
        if let Some(v) = violations.first() {
            return Err(domain(v.to_string()));
        }
        Ok(inst)
    }

    /// Builds an instance with default names `a1..an` and `g1..gm`.
    pub fn with_default_names(values: Vec<Vec<Rational>>, divisible: Vec<Vec<bool>>) -> Result<Self> {
        let n = values.len();
        let m = values.first().map_or(0, Vec::len);
        Self::new(
            (1..=n).map(|i| format!("a{i}")).collect(),
            (1..=m).map(|g| format!("g{g}")).collect(),
            values,
            divisible,
        )
    }

    pub fn agents(&self) -> usize {
        self.agent_names.len()
    }

    pub fn goods(&self) -> usize {
        self.good_names.len()
    }

    pub fn agent_names(&self) -> &[String] {
        &self.agent_names
    }

    pub fn good_names(&self) -> &[String] {
        &self.good_names
    }

    pub fn value(&self, agent: usize, good: usize) -> &Rational {
        &self.values[agent][good]
    }

    pub fn values(&self, agent: usize) -> &[Rational] {
        &self.values[agent]
    }

    pub fn is_divisible(&self, agent: usize, good: usize) -> bool {
        self.divisible[agent][good]
    }

    pub fn divisible_row(&self, agent: usize) -> &[bool] {
        &self.divisible[agent]
    }

    /// Agents who regard `good` as divisible.
    pub fn divisible_viewers(&self, good: usize) -> Vec<usize> {
        (0..self.agents()).filter(|&i| self.divisible[i][good]).collect()
    }

    /// Value to `agent` of a piece of `good` of length `len`.
    pub fn piece_value(&self, agent: usize, good: usize, len: &Rational) -> Rational {
        if self.divisible[agent][good] {
            len * &self.values[agent][good]
        } else if len.is_one() {
            self.values[agent][good].clone()
        } else {
            Rational::zero()
        }
    }

    /// Total value of every good to `agent`.
    pub fn total_value(&self, agent: usize) -> Rational {
        self.values[agent].iter().sum()
    }

    /// Utility of an integral bundle given as a list of whole goods.
    pub fn set_value(&self, agent: usize, goods: &[usize]) -> Rational {
        goods.iter().map(|&g| self.values[agent][g].clone()).sum()
    }

    /// Same instance with every value of `agent` multiplied by `factor`.
    pub fn scaled(&self, agent: usize, factor: &Rational) -> Instance {
        let mut out = self.clone();
        for v in &mut out.values[agent] {
            *v = &*v * factor;
        }
        out
    }
}

/// Utility of a bundle given as one fraction per good.
pub fn utility(inst: &Instance, agent: usize, bundle: &[Rational]) -> Result<Rational> {
    if agent >= inst.agents() {
        return Err(domain(format!("agent {agent} out of range")));
    }
    if bundle.len() != inst.goods() {
        return Err(domain(format!(
            "bundle has {} entries, instance has {} goods",
            bundle.len(),
            inst.goods()
        )));
    }
    if let Some(g) = bundle.iter().position(|x| !in_unit_interval(x)) {
        return Err(domain(format!("fraction of good {g} outside [0,1]")));
    }
    Ok(bundle_value(inst, agent, bundle))
}

/// Unchecked variant of [`utility`] for internally produced bundles.
pub(crate) fn bundle_value(inst: &Instance, agent: usize, bundle: &[Rational]) -> Rational {
    bundle
        .iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(g, x)| inst.piece_value(agent, g, x))
        .sum()
}

/// Reports every violated instance invariant.
pub fn validate_instance(inst: &Instance) -> Vec<Violation> {
    let mut out = Vec::new();
    if inst.agents() == 0 {
        out.push(Violation::NoAgents);
    }
    for g in 0..inst.goods() {
        for i in 0..inst.agents() {
            let v = inst.value(i, g);
            if *v < Rational::zero() {
                out.push(Violation::NegativeValue { agent: i, good: g });
            }
        }
        if (0..inst.agents()).all(|i| *inst.value(i, g) <= Rational::zero()) {
            out.push(Violation::UnvaluedGood { good: g });
        }
        for i in 0..inst.agents() {
            if inst.is_divisible(i, g) && *inst.value(i, g) <= Rational::zero() {
                out.push(Violation::ZeroValuedDivisible { agent: i, good: g });
            }
        }
    }
    out
}

/// Per-agent per-good fractions plus the unallocated (charity) mass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Allocation {
    pub shares: Vec<Vec<Rational>>,
    pub charity: Vec<Rational>,
}

impl Allocation {
    pub fn empty(agents: usize, goods: usize) -> Self {
        Allocation {
            shares: vec![vec![Rational::zero(); goods]; agents],
            charity: vec![Rational::zero(); goods],
        }
    }

    /// Integral allocation from an owner per good (`None` leaves it to charity).
    pub fn from_owners(agents: usize, owners: &[Option<usize>]) -> Self {
        let mut alloc = Allocation::empty(agents, owners.len());
        for (g, owner) in owners.iter().enumerate() {
            match owner {
                Some(i) => alloc.shares[*i][g] = Rational::one(),
                None => alloc.charity[g] = Rational::one(),
            }
        }
        alloc
    }

    /// Integral allocation from explicit bundles; unlisted goods go to charity.
    pub fn from_bundles(goods: usize, bundles: &[Vec<usize>]) -> Self {
        let mut owners = vec![None; goods];
        for (i, bundle) in bundles.iter().enumerate() {
            for &g in bundle {
                owners[g] = Some(i);
            }
        }
        Allocation::from_owners(bundles.len(), &owners)
    }

    pub fn agents(&self) -> usize {
        self.shares.len()
    }

    pub fn goods(&self) -> usize {
        self.charity.len()
    }

    pub fn bundle(&self, agent: usize) -> &[Rational] {
        &self.shares[agent]
    }

    /// Goods of which `agent` holds positive mass.
    pub fn support(&self, agent: usize) -> Vec<usize> {
        self.shares[agent]
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(g, _)| g)
            .collect()
    }

    /// Goods with positive charity mass.
    pub fn charity_support(&self) -> Vec<usize> {
        (0..self.goods()).filter(|&g| !self.charity[g].is_zero()).collect()
    }

    pub fn utility_of(&self, inst: &Instance, agent: usize) -> Rational {
        bundle_value(inst, agent, &self.shares[agent])
    }

    /// Utility `viewer` would derive from `holder`'s bundle.
    pub fn utility_of_bundle(&self, inst: &Instance, viewer: usize, holder: usize) -> Rational {
        bundle_value(inst, viewer, &self.shares[holder])
    }

    /// Moves every unallocated mass to charity so that each good sums to one.
    pub(crate) fn close_with_charity(&mut self) {
        for g in 0..self.goods() {
            let taken: Rational = self.shares.iter().map(|row| row[g].clone()).sum();
            self.charity[g] = Rational::one() - taken;
        }
    }
}

/// Checks per-good mass constraints and, optionally, completeness.
pub fn validate_allocation(
    inst: &Instance,
    alloc: &Allocation,
    require_complete: bool,
) -> Result<Vec<Violation>> {
    if alloc.agents() != inst.agents() || alloc.goods() != inst.goods() {
        return Err(domain(format!(
            "allocation is {}x{}, instance is {}x{}",
            alloc.agents(),
            alloc.goods(),
            inst.agents(),
            inst.goods()
        )));
    }
    if alloc.shares.iter().any(|row| row.len() != inst.goods()) {
        return Err(domain("ragged share matrix"));
    }
    let mut out = Vec::new();
    for g in 0..inst.goods() {
        for i in 0..inst.agents() {
            if !in_unit_interval(&alloc.shares[i][g]) {
                out.push(Violation::ShareOutOfRange { agent: i, good: g });
            }
        }
        if !in_unit_interval(&alloc.charity[g]) {
            out.push(Violation::CharityOutOfRange { good: g });
        }
        let total: Rational =
            alloc.shares.iter().map(|row| row[g].clone()).sum::<Rational>() + &alloc.charity[g];
        if total > Rational::one() {
            out.push(Violation::Overallocated { good: g, total });
        } else if require_complete && !total.is_one() {
            out.push(Violation::Incomplete { good: g, total });
        }
    }
    Ok(out)
}

/// Append-only step log of an algorithm run.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AlgoTrace {
    entries: Vec<(String, String)>,
}

impl AlgoTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, label: impl Into<String>, payload: impl Into<String>) {
        self.entries.push((label.into(), payload.into()));
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(l, _)| l.as_str())
    }

    pub fn contains(&self, label: &str) -> bool {
        self.labels().any(|l| l == label)
    }

    /// One `label: payload` line per entry.
    pub fn lines(&self) -> Vec<String> {
        self.entries.iter().map(|(l, p)| format!("{l}: {p}")).collect()
    }
}

pub(crate) fn fmt_goods(goods: &[usize]) -> String {
    let names: Vec<String> = goods.iter().map(|g| format!("g{g}")).collect();
    format!("{{{}}}", names.join(","))
}
