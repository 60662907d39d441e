//! Envy-based algorithms.
//!
//! [`two_agent_efxm_charity`] gives two agents an EFXM, non-wasteful
//! allocation that leaves at most one good (partly) unallocated.
//! [`ef1m_nonwasteful`] handles any number of agents: goods with at most one
//! divisible viewer go through [`generalized_round_robin`], the rest are
//! split equally among the agents who see them as divisible.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::error::{domain, invariant, Result};
use crate::model::{fmt_goods, AlgoTrace, Allocation, Instance};
use crate::rational::{format_rational, Rational};

/// Output of [`two_agent_efxm_charity`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharityResult {
    pub allocation: Allocation,
    pub discarded_good: Option<usize>,
    /// Mass of `discarded_good` left unallocated; zero when nothing is.
    pub discarded_fraction: Rational,
}

/// Max-min split of `M` into two integral parts from agent `a`'s point of
/// view, so that `a` would be EFX with two copies of herself.
///
/// `P1` is the part `a` values at least as much; zero-valued goods go to
/// `P2`. Ties pick the lexicographically smallest `P1`.
pub fn efx_two_partition(inst: &Instance, a: usize) -> Result<(Vec<usize>, Vec<usize>)> {
    if a >= inst.agents() {
        return Err(domain(format!("agent {a} out of range")));
    }
    let positive: Vec<usize> = (0..inst.goods()).filter(|&g| inst.value(a, g).is_positive()).collect();
    let zeros: Vec<usize> = (0..inst.goods()).filter(|&g| inst.value(a, g).is_zero()).collect();
    if positive.len() >= 63 {
        return Err(domain("too many goods for the exact two-way split"));
    }
    let total = inst.set_value(a, &positive);
    let mut best: Option<(Rational, Vec<usize>, Vec<usize>)> = None;
    for mask in 0u64..(1u64 << positive.len()) {
        let (mut x, mut y) = (Vec::new(), Vec::new());
        for (bit, &g) in positive.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                x.push(g);
            } else {
                y.push(g);
            }
        }
        let vx = inst.set_value(a, &x);
        let vy = &total - &vx;
        let (p1, p2) = if vx > vy || (vx == vy && x <= y) { (x, y) } else { (y, x) };
        let low = vx.min(vy);
        let better = match &best {
            None => true,
            Some((v, b1, _)) => low > *v || (low == *v && p1 < *b1),
        };
        if better {
            best = Some((low, p1, p2));
        }
    }
    let (_, p1, mut p2) = best.expect("at least the empty split");
    p2.extend(zeros);
    p2.sort_unstable();

    let v2 = inst.set_value(a, &p2);
    let v1 = inst.set_value(a, &p1);
    let efx = p1.iter().all(|&g| &v1 - inst.value(a, g) <= v2);
    if v1 < v2 || !efx {
        return Err(invariant("two-way split is not EFX for its cutter"));
    }
    Ok((p1, p2))
}

fn whole(goods: usize, set: &[usize]) -> Vec<Rational> {
    let mut row = vec![Rational::zero(); goods];
    for &g in set {
        row[g] = Rational::one();
    }
    row
}

fn row_value(inst: &Instance, agent: usize, row: &[Rational]) -> Rational {
    (0..inst.goods()).filter(|&g| row[g].is_positive()).map(|g| inst.piece_value(agent, g, &row[g])).sum()
}

/// EFXM and non-wasteful allocation for two agents with at most one good
/// left to charity.
pub fn two_agent_efxm_charity(inst: &Instance) -> Result<(CharityResult, AlgoTrace)> {
    if inst.agents() != 2 {
        return Err(domain(format!("expected 2 agents, got {}", inst.agents())));
    }
    let m = inst.goods();
    let mut trace = AlgoTrace::new();
    let (p1, p2) = efx_two_partition(inst, 0)?;
    trace.push("partition", format!("P1={} P2={}", fmt_goods(&p1), fmt_goods(&p2)));
    let u1 = |s: &[usize]| inst.set_value(0, s);
    let u2 = |s: &[usize]| inst.set_value(1, s);

    let mut discarded: Option<(usize, Rational)> = None;
    let (mut a1, mut a2): (Vec<Rational>, Vec<Rational>);

    if u1(&p1) == u1(&p2) || u2(&p1) <= u2(&p2) {
        trace.push("branch", "envy-free");
        // When agent 2 is indifferent, agent 1 keeps P1.
        if u2(&p1) > u2(&p2) {
            (a1, a2) = (whole(m, &p2), whole(m, &p1));
        } else {
            (a1, a2) = (whole(m, &p1), whole(m, &p2));
        }
    } else if !p1.iter().any(|&g| inst.is_divisible(0, g)) {
        trace.push("branch", "no divisible good in P1");
        (a1, a2) = (whole(m, &p2), whole(m, &p1));
    } else if let Some(o) =
        p1.iter().copied().find(|&g| inst.is_divisible(0, g) && inst.is_divisible(1, g))
    {
        // Agent 1 cuts o so that both sides are worth the same to her.
        let rest: Vec<usize> = p1.iter().copied().filter(|&g| g != o).collect();
        let uo = inst.value(0, o);
        let f = (u1(&p2) - u1(&rest) + uo) / (uo * Rational::from_integer(2.into()));
        if !f.is_positive() || f > Rational::one() {
            return Err(invariant("equalizing cut lies outside the common good"));
        }
        trace.push("branch", format!("common divisible g{o}, cut at {}", format_rational(&f)));
        let mut left = whole(m, &rest);
        left[o] = f.clone();
        let mut right = whole(m, &p2);
        right[o] = Rational::one() - &f;
        if row_value(inst, 1, &left) >= row_value(inst, 1, &right) {
            (a1, a2) = (right, left);
        } else {
            (a1, a2) = (left, right);
        }
    } else {
        let o = p1.iter().copied().find(|&g| inst.is_divisible(0, g)).expect("checked above");
        let rest: Vec<usize> = p1.iter().copied().filter(|&g| g != o).collect();
        if u2(&rest) >= u2(&p2) {
            trace.push("branch", format!("discard g{o}"));
            (a1, a2) = (whole(m, &p2), whole(m, &rest));
            discarded = Some((o, Rational::one()));
        } else {
            let f = (u1(&p2) - u1(&rest)) / inst.value(0, o);
            if f.is_negative() || f >= Rational::one() {
                return Err(invariant("partial discard fraction outside [0,1)"));
            }
            trace.push("branch", format!("keep {} of g{o}", format_rational(&f)));
            let mut left = whole(m, &rest);
            left[o] = f.clone();
            (a1, a2) = (left, whole(m, &p2));
            discarded = Some((o, Rational::one() - f));
        }
    }

    // Each agent hands over the goods she does not value.
    let to_second: Vec<usize> =
        (0..m).filter(|&g| a1[g].is_positive() && inst.value(0, g).is_zero()).collect();
    let to_first: Vec<usize> =
        (0..m).filter(|&g| a2[g].is_positive() && inst.value(1, g).is_zero()).collect();
    for &g in &to_second {
        let x = std::mem::take(&mut a1[g]);
        a2[g] += x;
    }
    for &g in &to_first {
        let x = std::mem::take(&mut a2[g]);
        a1[g] += x;
    }
    if !to_second.is_empty() || !to_first.is_empty() {
        trace.push(
            "donate",
            format!("agent 0 gives {}, agent 1 gives {}", fmt_goods(&to_second), fmt_goods(&to_first)),
        );
    }

    let mut allocation = Allocation { shares: vec![a1, a2], charity: vec![Rational::zero(); m] };
    allocation.close_with_charity();
    let discarded = discarded.filter(|(_, x)| x.is_positive());
    let result = CharityResult {
        allocation,
        discarded_good: discarded.as_ref().map(|(g, _)| *g),
        discarded_fraction: discarded.map(|(_, x)| x).unwrap_or_else(Rational::zero),
    };
    let support = result.allocation.charity_support();
    if support.len() > 1 || support.first() != result.discarded_good.as_ref() {
        return Err(invariant("charity mass on an unexpected good"));
    }
    Ok((result, trace))
}

/// Splits goods into those with at most one divisible viewer (`S1`) and
/// the rest (`S2`).
pub fn classify_goods(inst: &Instance) -> (Vec<usize>, Vec<usize>) {
    (0..inst.goods()).partition(|&g| inst.divisible_viewers(g).len() <= 1)
}

/// Bookkeeping of the generalized round-robin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundRobinState {
    pub remaining: BTreeSet<usize>,
    /// Agents still to pick in the current round.
    pub active: Vec<usize>,
    pub round: usize,
    /// The unique divisible viewer of each good, if any.
    pub div_owner: Vec<Option<usize>>,
    /// Every `(agent, good)` assignment in order.
    pub pick_order: Vec<(usize, usize)>,
    interested: Vec<usize>,
}

impl RoundRobinState {
    pub fn new(inst: &Instance, s1: &[usize]) -> Result<Self> {
        let mut remaining = BTreeSet::new();
        let mut div_owner = vec![None; inst.goods()];
        for &g in s1 {
            if g >= inst.goods() || !remaining.insert(g) {
                return Err(domain(format!("good {g} out of range or repeated")));
            }
            match inst.divisible_viewers(g)[..] {
                [] => {}
                [d] => div_owner[g] = Some(d),
                _ => return Err(domain(format!("good {g} has more than one divisible viewer"))),
            }
        }
        let mut state = RoundRobinState {
            remaining,
            active: Vec::new(),
            round: 0,
            div_owner,
            pick_order: Vec::new(),
            interested: (0..inst.agents()).collect(),
        };
        state.interested = state.still_interested(inst, &state.interested);
        Ok(state)
    }

    fn still_interested(&self, inst: &Instance, agents: &[usize]) -> Vec<usize> {
        agents
            .iter()
            .copied()
            .filter(|&i| self.remaining.iter().any(|&g| inst.value(i, g).is_positive()))
            .collect()
    }

    /// Most valuable remaining good for `agent`, lowest index on ties.
    pub fn favorite(&self, inst: &Instance, agent: usize) -> Option<usize> {
        let mut best: Option<usize> = None;
        for &g in &self.remaining {
            if best.is_none_or(|b| inst.value(agent, g) > inst.value(agent, b)) {
                best = Some(g);
            }
        }
        best
    }

    /// Runs one round; returns its `(agent, good)` picks.
    pub fn run_round(&mut self, inst: &Instance, trace: &mut AlgoTrace) -> Result<Vec<(usize, usize)>> {
        self.round += 1;
        self.interested = self.still_interested(inst, &self.interested);
        self.active = self.interested.clone();
        let mut picks = Vec::new();
        while let Some(&start) = self.active.first() {
            let fav = |v: usize| self.favorite(inst, v).expect("interested agents see a good");
            let mut path = vec![start];
            let batch: Vec<usize> = loop {
                let v = *path.last().expect("nonempty");
                match self.div_owner[fav(v)] {
                    Some(d) if self.active.contains(&d) => {
                        if let Some(pos) = path.iter().position(|&w| w == d) {
                            break path[pos..].to_vec();
                        }
                        path.push(d);
                    }
                    _ => break path.clone(),
                }
            };
            let goods: Vec<usize> = batch.iter().map(|&i| fav(i)).collect();
            let distinct: BTreeSet<usize> = goods.iter().copied().collect();
            if distinct.len() != goods.len() {
                return Err(invariant("a good is assigned twice in one batch"));
            }
            for (&i, &g) in batch.iter().zip(&goods) {
                if let Some(d) = self.div_owner[g] {
                    if self.active.contains(&d) && !batch.contains(&d) {
                        return Err(invariant(format!("good {g} leaves its divisible viewer {d} behind")));
                    }
                }
                if !inst.value(i, g).is_positive() {
                    return Err(invariant(format!("agent {i} receives worthless good {g}")));
                }
            }
            let parts: Vec<String> = batch.iter().zip(&goods).map(|(i, g)| format!("{i}<-g{g}")).collect();
            trace.push(format!("round {}", self.round), parts.join(" "));
            for (&i, &g) in batch.iter().zip(&goods) {
                self.remaining.remove(&g);
                self.pick_order.push((i, g));
                picks.push((i, g));
            }
            let left: Vec<usize> = self.active.iter().copied().filter(|a| !batch.contains(a)).collect();
            self.active = self.still_interested(inst, &left);
        }
        for &(i, gi) in &picks {
            for &(_, gj) in &picks {
                if inst.value(i, gi) < inst.value(i, gj) && inst.is_divisible(i, gj) {
                    return Err(invariant(format!(
                        "round {}: agent {i} prefers divisible g{gj} to her pick g{gi}",
                        self.round
                    )));
                }
            }
        }
        self.interested = self.still_interested(inst, &self.interested);
        Ok(picks)
    }

    pub fn is_done(&self) -> bool {
        self.remaining.is_empty() || self.interested.is_empty()
    }
}

/// Round-robin over `s1` where an agent's favorite pulls its divisible
/// viewer into the same batch. Goods outside `s1` are left to charity.
pub fn generalized_round_robin(inst: &Instance, s1: &[usize]) -> Result<(Allocation, AlgoTrace)> {
    let mut state = RoundRobinState::new(inst, s1)?;
    let mut trace = AlgoTrace::new();
    while !state.is_done() {
        state.run_round(inst, &mut trace)?;
    }
    if !state.remaining.is_empty() {
        return Err(invariant("goods left that nobody values"));
    }
    let mut alloc = Allocation::empty(inst.agents(), inst.goods());
    for &(i, g) in &state.pick_order {
        alloc.shares[i][g] = Rational::one();
    }
    alloc.close_with_charity();
    Ok((alloc, trace))
}

/// EF1M and non-wasteful complete allocation for any number of agents.
pub fn ef1m_nonwasteful(inst: &Instance) -> Result<(Allocation, AlgoTrace)> {
    let (s1, s2) = classify_goods(inst);
    let (mut alloc, mut trace) = generalized_round_robin(inst, &s1)?;
    for &g in &s2 {
        let viewers = inst.divisible_viewers(g);
        let share = Rational::new(1.into(), viewers.len().into());
        for &i in &viewers {
            alloc.shares[i][g] = share.clone();
        }
        alloc.charity[g] = Rational::zero();
        trace.push("split", format!("g{g} among {viewers:?}"));
    }
    Ok((alloc, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::validate_allocation;
    use crate::rational::{int, one, rat, zero};

    fn thm_4_4(eps: Rational) -> Instance {
        let a = one() - &eps / int(2);
        let b = one() - &eps;
        Instance::with_default_names(
            vec![vec![a.clone(), eps.clone(), b.clone()], vec![a, b, eps]],
            vec![vec![false, true, false], vec![false, false, true]],
        )
        .unwrap()
    }

    fn example_4_10(eps: Rational) -> Instance {
        let d = rat(1, 2) + eps;
        Instance::with_default_names(
            vec![vec![one(), d.clone(), d], vec![zero(), one(), one()]],
            vec![vec![false, true, true], vec![false; 3]],
        )
        .unwrap()
    }

    fn indivisible(values: Vec<Vec<Rational>>) -> Instance {
        let flags = values.iter().map(|r| vec![false; r.len()]).collect();
        Instance::with_default_names(values, flags).unwrap()
    }

    #[test]
    fn efx_partition_examples() {
        let inst = indivisible(vec![vec![int(2), int(1), int(1)]]);
        assert_eq!(efx_two_partition(&inst, 0).unwrap(), (vec![0], vec![1, 2]));
        let inst = indivisible(vec![vec![int(5), int(1)]]);
        assert_eq!(efx_two_partition(&inst, 0).unwrap(), (vec![0], vec![1]));
        let inst = thm_4_4(rat(1, 4));
        assert_eq!(efx_two_partition(&inst, 0).unwrap(), (vec![1, 2], vec![0]));
    }

    #[test]
    fn efx_partition_zero_goods_go_second() {
        let inst = indivisible(vec![vec![int(0), int(3), int(3)], vec![int(1), int(1), int(1)]]);
        let (p1, p2) = efx_two_partition(&inst, 0).unwrap();
        assert_eq!(p1, vec![1]);
        assert_eq!(p2, vec![0, 2]);
    }

    #[test]
    fn charity_on_impossibility_fixture() {
        let inst = thm_4_4(rat(1, 4));
        let (res, trace) = two_agent_efxm_charity(&inst).unwrap();
        let a = &res.allocation;
        assert_eq!(a.shares[0], vec![zero(), rat(1, 2), one()]);
        assert_eq!(a.shares[1], vec![one(), zero(), zero()]);
        assert_eq!(res.discarded_good, Some(1));
        assert_eq!(res.discarded_fraction, rat(1, 2));
        assert_eq!(a.charity, vec![zero(), rat(1, 2), zero()]);
        assert_eq!(a.utility_of(&inst, 0), rat(7, 8));
        assert_eq!(a.utility_of(&inst, 1), rat(7, 8));
        assert!(trace.lines().iter().any(|l| l == "branch: keep 1/2 of g1"));
    }

    #[test]
    fn charity_identical_divisible_agents() {
        let inst = Instance::with_default_names(vec![vec![one(), one()]; 2], vec![vec![true; 2]; 2])
            .unwrap();
        let (res, trace) = two_agent_efxm_charity(&inst).unwrap();
        assert!(trace.lines().iter().any(|l| l == "branch: envy-free"));
        assert_eq!(res.discarded_good, None);
        assert!(res.allocation.charity.iter().all(Zero::is_zero));

        // Unequal values move to the common-divisible cut, still without charity.
        let inst = Instance::with_default_names(vec![vec![one(), int(2)]; 2], vec![vec![true; 2]; 2])
            .unwrap();
        let (res, trace) = two_agent_efxm_charity(&inst).unwrap();
        assert!(trace.lines().iter().any(|l| l.starts_with("branch: common divisible g1")));
        assert_eq!(res.discarded_good, None);
        assert_eq!(res.allocation.utility_of(&inst, 0), rat(3, 2));
        assert_eq!(res.allocation.utility_of(&inst, 1), rat(3, 2));
    }

    #[test]
    fn charity_indifferent_second_agent() {
        // Agent 1 sees P1 = {g0} and P2 = {g1} as equal, so agent 0 keeps P1.
        let inst = Instance::with_default_names(
            vec![vec![int(3), zero()], vec![int(4), int(4)]],
            vec![vec![true, false], vec![false, false]],
        )
        .unwrap();
        let (res, trace) = two_agent_efxm_charity(&inst).unwrap();
        assert!(trace.lines().iter().any(|l| l == "branch: envy-free"));
        assert_eq!(res.allocation.support(0), vec![0]);
        assert_eq!(res.allocation.support(1), vec![1]);
        assert!(crate::audit::audit(&inst, &res.allocation, None).unwrap().ef);
    }

    #[test]
    fn charity_whole_discard() {
        // P1 = {g0, g1} for agent 0 with g1 divisible only to her; agent 1
        // still prefers P1 without g1.
        let inst = Instance::with_default_names(
            vec![vec![int(2), int(1), int(2)], vec![int(3), int(1), int(1)]],
            vec![vec![false, true, false], vec![false; 3]],
        )
        .unwrap();
        let (p1, p2) = efx_two_partition(&inst, 0).unwrap();
        assert_eq!((p1, p2), (vec![0, 1], vec![2]));
        let (res, trace) = two_agent_efxm_charity(&inst).unwrap();
        assert!(trace.lines().iter().any(|l| l == "branch: discard g1"));
        assert_eq!(res.discarded_good, Some(1));
        assert_eq!(res.discarded_fraction, one());
        assert_eq!(res.allocation.support(0), vec![2]);
        assert_eq!(res.allocation.support(1), vec![0]);
    }

    #[test]
    fn charity_needs_two_agents() {
        let inst = indivisible(vec![vec![one()]]);
        assert!(matches!(two_agent_efxm_charity(&inst), Err(crate::Error::Domain(_))));
    }

    #[test]
    fn classify_examples() {
        let inst = indivisible(vec![vec![one(), one()], vec![one(), one()]]);
        assert_eq!(classify_goods(&inst), (vec![0, 1], vec![]));
        let inst = Instance::with_default_names(
            vec![vec![one(), one()], vec![one(), one()]],
            vec![vec![true, false], vec![true, true]],
        )
        .unwrap();
        assert_eq!(classify_goods(&inst), (vec![1], vec![0]));
        assert_eq!(classify_goods(&example_4_10(rat(1, 4))), (vec![0, 1, 2], vec![]));
    }

    #[test]
    fn round_robin_favorites() {
        let inst = indivisible(vec![vec![int(2), int(1)], vec![int(1), int(2)]]);
        let (alloc, _) = generalized_round_robin(&inst, &[0, 1]).unwrap();
        assert_eq!(alloc.support(0), vec![0]);
        assert_eq!(alloc.support(1), vec![1]);
    }

    #[test]
    fn round_robin_example_4_10() {
        let inst = example_4_10(rat(1, 4));
        let (alloc, trace) = generalized_round_robin(&inst, &[0, 1, 2]).unwrap();
        assert_eq!(alloc.support(0), vec![0, 2]);
        assert_eq!(alloc.support(1), vec![1]);
        assert_eq!(
            trace.lines(),
            vec!["round 1: 0<-g0", "round 1: 1<-g1", "round 2: 0<-g2"]
        );
    }

    #[test]
    fn round_robin_skips_uninterested() {
        let inst = indivisible(vec![vec![one(), one()], vec![zero(), zero()]]);
        let (alloc, _) = generalized_round_robin(&inst, &[0, 1]).unwrap();
        assert!(alloc.support(1).is_empty());
        assert_eq!(alloc.support(0), vec![0, 1]);
    }

    #[test]
    fn round_robin_cycle() {
        // Each agent's favorite is divisible for the other.
        let inst = Instance::with_default_names(
            vec![vec![int(2), int(1)], vec![int(1), int(2)]],
            vec![vec![false, true], vec![true, false]],
        )
        .unwrap();
        let (alloc, trace) = generalized_round_robin(&inst, &[0, 1]).unwrap();
        assert_eq!(alloc.support(0), vec![0]);
        assert_eq!(alloc.support(1), vec![1]);
        assert_eq!(trace.lines(), vec!["round 1: 0<-g0 1<-g1"]);
    }

    #[test]
    fn round_robin_rejects_shared_goods() {
        let inst = Instance::with_default_names(vec![vec![one()]; 2], vec![vec![true]; 2]).unwrap();
        assert!(matches!(generalized_round_robin(&inst, &[0]), Err(crate::Error::Domain(_))));
    }

    #[test]
    fn ef1m_splits_common_goods() {
        let inst = Instance::with_default_names(vec![vec![one()]; 3], vec![vec![true]; 3]).unwrap();
        let (alloc, _) = ef1m_nonwasteful(&inst).unwrap();
        for i in 0..3 {
            assert_eq!(alloc.shares[i][0], rat(1, 3));
        }
        assert!(validate_allocation(&inst, &alloc, true).unwrap().is_empty());
        assert_eq!(alloc.charity, vec![zero()]);
    }
}
