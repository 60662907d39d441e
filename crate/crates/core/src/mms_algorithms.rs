//! Maximin-share approximation algorithms.
//!
//! * [`high_valued_alloc`] hands out goods worth at least `beta · MMS` to
//!   someone, shrinking the instance.
//! * [`two_agent_two_thirds`] is an integral cut-and-choose.
//! * [`three_agent_two_thirds`] reduces three agents to two through a
//!   high-valued good or a reducible bundle, and otherwise splits a common
//!   divisible good between two agents.
//! * [`n_agent_half`] peels off 1/2-reducible bundles one agent at a time.
//!
//! MMS values are computed once on the original instance and carried in
//! [`ReducedState`]; they are never recomputed on a reduced instance.
//! Ties are broken towards the lowest index everywhere.

use num_traits::{One, Signed, Zero};

use crate::error::{domain, invariant, precondition, Result};
use crate::mms::{mms_all, MmsResult};
use crate::model::{fmt_goods, AlgoTrace, Allocation, Instance};
use crate::rational::{format_rational, rat, Rational};

/// Agents still to be served, the goods mass left, and what was handed out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedState {
    /// Active agents in ascending order.
    pub active: Vec<usize>,
    /// Mass of each good not yet handed out.
    pub remaining: Vec<Rational>,
    pub assigned: Allocation,
    /// MMS values of the original instance.
    pub mms: Vec<Rational>,
}

impl ReducedState {
    pub fn new(inst: &Instance, mms: Vec<Rational>) -> Self {
        ReducedState {
            active: (0..inst.agents()).collect(),
            remaining: vec![Rational::one(); inst.goods()],
            assigned: Allocation::empty(inst.agents(), inst.goods()),
            mms,
        }
    }

    /// Value to `agent` of what is left of `good`.
    pub fn piece_value(&self, inst: &Instance, agent: usize, good: usize) -> Rational {
        if self.remaining[good].is_zero() {
            return Rational::zero();
        }
        inst.piece_value(agent, good, &self.remaining[good])
    }

    pub fn remaining_goods(&self) -> Vec<usize> {
        (0..self.remaining.len()).filter(|&g| self.remaining[g].is_positive()).collect()
    }

    /// Value to `agent` of every remaining piece taken whole.
    pub fn remaining_value(&self, inst: &Instance, agent: usize) -> Rational {
        self.remaining_goods().into_iter().map(|g| self.piece_value(inst, agent, g)).sum()
    }

    pub fn set_value(&self, inst: &Instance, agent: usize, goods: &[usize]) -> Rational {
        goods.iter().map(|&g| self.piece_value(inst, agent, g)).sum()
    }

    /// Whether some active agent values a remaining piece at `≥ beta · MMS`.
    pub fn has_high_valued(&self, inst: &Instance, beta: &Rational) -> bool {
        self.first_high_valued(inst, beta).is_some()
    }

    fn first_high_valued(&self, inst: &Instance, beta: &Rational) -> Option<usize> {
        self.remaining_goods().into_iter().find(|&g| {
            self.active.iter().any(|&a| self.piece_value(inst, a, g) >= beta * &self.mms[a])
        })
    }

    fn give_piece(&mut self, agent: usize, good: usize, len: &Rational) {
        self.assigned.shares[agent][good] += len;
        self.remaining[good] -= len;
    }

    /// Hands `agent` the whole remaining piece of each listed good.
    fn give_whole(&mut self, agent: usize, goods: &[usize]) {
        for &g in goods {
            let len = self.remaining[g].clone();
            self.give_piece(agent, g, &len);
        }
    }

    fn retire(&mut self, agent: usize) {
        self.active.retain(|&a| a != agent);
    }

    fn check_masses(&self) -> Result<()> {
        for g in 0..self.remaining.len() {
            let total: Rational = self.assigned.shares.iter().map(|r| r[g].clone()).sum::<Rational>()
                + &self.remaining[g];
            if !total.is_one() || self.remaining[g].is_negative() {
                return Err(invariant(format!("mass of good {g} not conserved")));
            }
        }
        Ok(())
    }
}

/// Has every active agent claim the least piece of a high-valued good worth
/// `beta · MMS` to her; the smallest claim wins and leaves. A single
/// survivor then takes everything that is left.
///
/// Survivors end with `u_i(M'') ≥ |N''| · MMS_i` and every remaining piece
/// below `beta · MMS_i`.
pub fn high_valued_alloc(
    inst: &Instance,
    beta: &Rational,
    mut state: ReducedState,
    trace: &mut AlgoTrace,
) -> Result<ReducedState> {
    if beta.is_negative() || *beta > Rational::one() {
        return Err(domain("beta must lie in [0,1]"));
    }
    while state.active.len() >= 2 {
        let Some(g) = state.first_high_valued(inst, beta) else {
            break;
        };
        let mut winner: Option<(usize, Rational)> = None;
        for &a in &state.active {
            let Some(len) = least_claim(inst, &state, a, g, beta) else {
                continue;
            };
            if winner.as_ref().is_none_or(|(_, best)| len < *best) {
                winner = Some((a, len));
            }
        }
        let (agent, len) = winner.ok_or_else(|| invariant("high-valued good without a claimant"))?;
        trace.push(
            "high-valued",
            format!("agent {agent} claims {} of g{g}", format_rational(&len)),
        );
        state.give_piece(agent, g, &len);
        state.retire(agent);
    }
    if let [last] = state.active[..] {
        let rest = state.remaining_goods();
        trace.push("high-valued", format!("agent {last} takes the rest {}", fmt_goods(&rest)));
        state.give_whole(last, &rest);
        state.retire(last);
    }
    Ok(state)
}

/// Shortest piece of `good` worth `beta · MMS_agent` to `agent`, if any.
fn least_claim(
    inst: &Instance,
    state: &ReducedState,
    agent: usize,
    good: usize,
    beta: &Rational,
) -> Option<Rational> {
    let target = beta * &state.mms[agent];
    if target.is_zero() {
        return Some(Rational::zero());
    }
    if inst.is_divisible(agent, good) {
        let len = target / inst.value(agent, good);
        (len <= state.remaining[good]).then_some(len)
    } else {
        (state.piece_value(inst, agent, good) >= target).then(|| state.remaining[good].clone())
    }
}

fn ratio_to_mms(value: &Rational, mms: &Rational) -> Option<Rational> {
    (!mms.is_zero()).then(|| value / mms)
}

/// Integral cut-and-choose for two agents, using the MMS values in `state`.
///
/// Returns the complete allocation (including whatever `state` had already
/// assigned to retired agents).
pub fn two_agent_two_thirds(
    inst: &Instance,
    state: ReducedState,
    trace: &mut AlgoTrace,
) -> Result<Allocation> {
    if state.active.len() != 2 {
        return Err(domain(format!(
            "two-agent cut-and-choose needs 2 active agents, got {}",
            state.active.len()
        )));
    }
    let two_thirds = rat(2, 3);
    if state.has_high_valued(inst, &two_thirds) {
        trace.push("branch", "high-valued");
        let state = high_valued_alloc(inst, &two_thirds, state, trace)?;
        state.check_masses()?;
        return Ok(state.assigned);
    }
    let mut state = state;
    let (a, b) = (state.active[0], state.active[1]);
    let ra = ratio_to_mms(&state.remaining_value(inst, a), &state.mms[a]);
    let rb = ratio_to_mms(&state.remaining_value(inst, b), &state.mms[b]);
    // A zero MMS reads as an infinite ratio.
    let chooser_is_b = match (&ra, &rb) {
        (Some(x), Some(y)) => y < x,
        (None, Some(_)) => true,
        _ => false,
    };
    let (chooser, cutter) = if chooser_is_b { (b, a) } else { (a, b) };
    trace.push("cut-and-choose", format!("chooser {chooser}, cutter {cutter}"));

    let mut order = state.remaining_goods();
    order.sort_by(|&g, &h| {
        state.piece_value(inst, cutter, h).cmp(&state.piece_value(inst, cutter, g)).then(g.cmp(&h))
    });
    let low = &two_thirds * &state.mms[cutter];
    let high = rat(4, 3) * &state.mms[cutter];
    let mut bundle = Vec::new();
    let mut value = Rational::zero();
    for &g in &order {
        if value >= low {
            break;
        }
        value += state.piece_value(inst, cutter, g);
        bundle.push(g);
    }
    if value < low {
        return Err(precondition("cutter cannot form a bundle worth 2/3 of her MMS"));
    }
    if value > high {
        return Err(invariant("cutter bundle exceeds 4/3 of her MMS"));
    }
    bundle.sort_unstable();
    let rest: Vec<usize> = state.remaining_goods().into_iter().filter(|g| !bundle.contains(g)).collect();
    let takes_bundle =
        state.set_value(inst, chooser, &bundle) >= state.set_value(inst, chooser, &rest);
    let (mine, theirs) = if takes_bundle { (bundle, rest) } else { (rest, bundle) };
    trace.push("cut-and-choose", format!("chooser {chooser} takes {}", fmt_goods(&mine)));
    trace.push("cut-and-choose", format!("cutter {cutter} takes {}", fmt_goods(&theirs)));
    state.give_whole(chooser, &mine);
    state.give_whole(cutter, &theirs);
    state.active.clear();
    state.check_masses()?;
    Ok(state.assigned)
}

/// Convenience wrapper: MMS values, then [`two_agent_two_thirds`].
pub fn solve_two_agent(inst: &Instance) -> Result<(Allocation, AlgoTrace)> {
    if inst.agents() != 2 {
        return Err(domain(format!("expected 2 agents, got {}", inst.agents())));
    }
    let mms: Vec<Rational> = mms_all(inst)?.into_iter().map(|r| r.value).collect();
    let mut trace = AlgoTrace::new();
    trace.push("mms", fmt_values(&mms));
    let alloc = two_agent_two_thirds(inst, ReducedState::new(inst, mms), &mut trace)?;
    Ok((alloc, trace))
}

/// How a reducible bundle was found.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReducibleKind {
    PairViolation,
    Cardinality,
    SmallGoods,
    Pigeonhole,
    NotFound,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducibleFind {
    /// Whole goods, ascending.
    pub bundle: Vec<usize>,
    /// The agent who receives the bundle.
    pub agent: usize,
    pub kind: ReducibleKind,
}

/// `B` is reducible for `receiver` if it is worth `≥ 2/3 · MMS` to her while
/// one of the others keeps `≥ 2 · MMS` and the last keeps `≥ 4/3 · MMS`.
pub fn is_reducible_bundle(inst: &Instance, mms: &[Rational], bundle: &[usize], receiver: usize) -> bool {
    if inst.agents() != 3 {
        return false;
    }
    if inst.set_value(receiver, bundle) < rat(2, 3) * &mms[receiver] {
        return false;
    }
    let left = |a: usize| inst.total_value(a) - inst.set_value(a, bundle);
    let others: Vec<usize> = (0..3).filter(|&a| a != receiver).collect();
    let (x, y) = (others[0], others[1]);
    let rich = |a: usize| left(a) >= rat(2, 1) * &mms[a];
    let fine = |a: usize| left(a) >= rat(4, 3) * &mms[a];
    (rich(x) && fine(y)) || (rich(y) && fine(x))
}

/// Constructive search for a reducible bundle in a three-agent instance
/// without 2/3-high-valued goods.
///
/// The checks run in order: a pair valued `≥ 2/3 · MMS` by one agent and
/// `≤ MMS` by another; the minimum-cardinality bundle when all pairs are
/// small; an agent whose small goods add up to `≥ MMS/6`; and two
/// indivisible goods of `M̂` sharing a bundle of some agent's MMS partition.
pub fn find_reducible_bundle(
    inst: &Instance,
    state: &ReducedState,
    partitions: &[MmsResult],
) -> Result<ReducibleFind> {
    if inst.agents() != 3 || state.active != [0, 1, 2] {
        return Err(precondition("reducible bundles are defined for three active agents"));
    }
    if state.remaining.iter().any(|x| !x.is_one()) {
        return Err(precondition("reducible-bundle search needs every good whole"));
    }
    let two_thirds = rat(2, 3);
    if state.has_high_valued(inst, &two_thirds) {
        return Err(precondition("a 2/3-high-valued good remains"));
    }
    let mms = &state.mms;
    if mms.iter().any(|v| !v.is_positive()) {
        return Err(precondition("every agent needs a positive MMS"));
    }
    let m = inst.goods();
    let agents = [0usize, 1, 2];
    let found = |bundle: Vec<usize>, agent: usize, kind: ReducibleKind| -> Result<ReducibleFind> {
        if !is_reducible_bundle(inst, mms, &bundle, agent) {
            return Err(invariant(format!(
                "{kind:?} bundle {} is not reducible for agent {agent}",
                fmt_goods(&bundle)
            )));
        }
        Ok(ReducibleFind { bundle, agent, kind })
    };

    // Pairs valued at least 2/3 MMS by one agent and at most MMS by another.
    for g in 0..m {
        for h in g + 1..m {
            let pair = [g, h];
            for &i in &agents {
                if inst.set_value(i, &pair) < &two_thirds * &mms[i] {
                    continue;
                }
                if agents.iter().any(|&j| j != i && inst.set_value(j, &pair) <= mms[j]) {
                    return found(pair.to_vec(), i, ReducibleKind::PairViolation);
                }
            }
        }
    }

    let all_pairs_small = (0..m).all(|g| {
        (g + 1..m).all(|h| agents.iter().all(|&a| inst.set_value(a, &[g, h]) < &two_thirds * &mms[a]))
    });
    if all_pairs_small {
        let mut best: Option<(usize, Vec<usize>)> = None;
        for &a in &agents {
            let mut order: Vec<usize> = (0..m).collect();
            order.sort_by(|&g, &h| inst.value(a, h).cmp(inst.value(a, g)).then(g.cmp(&h)));
            let mut value = Rational::zero();
            let mut prefix = Vec::new();
            for g in order {
                if value >= mms[a] {
                    break;
                }
                value += inst.value(a, g);
                prefix.push(g);
            }
            if value < mms[a] {
                return Err(invariant(format!("agent {a} cannot reach her MMS")));
            }
            if best.as_ref().is_none_or(|(_, b)| prefix.len() < b.len()) {
                best = Some((a, prefix));
            }
        }
        let (agent, mut bundle) = best.expect("three agents");
        bundle.pop();
        bundle.sort_unstable();
        return found(bundle, agent, ReducibleKind::Cardinality);
    }

    let supporters = supported_pair(inst, mms)
        .ok_or_else(|| invariant("no pair valued above MMS by every agent"))?;

    let third = |a: usize| &mms[a] / Rational::from_integer(3.into());
    let small_violator = agents.iter().copied().find(|&a| {
        let small: Rational =
            (0..m).filter(|&g| *inst.value(a, g) <= third(a)).map(|g| inst.value(a, g).clone()).sum();
        small * Rational::from_integer(6.into()) >= mms[a]
    });
    if let Some(i) = small_violator {
        let (o1, o2) = supporters;
        let o = if inst.value(i, o2) > inst.value(i, o1) { o2 } else { o1 };
        if inst.value(i, o) * Rational::from_integer(2.into()) <= mms[i] {
            return Err(invariant("supported pair has no good above MMS/2"));
        }
        let mut bundle = vec![o];
        let mut value = inst.value(i, o).clone();
        for g in (0..m).filter(|&g| g != o && *inst.value(i, g) <= third(i)) {
            if value >= &two_thirds * &mms[i] {
                break;
            }
            value += inst.value(i, g);
            bundle.push(g);
        }
        if value < &two_thirds * &mms[i] || value > mms[i] {
            return Err(invariant("small-goods bundle outside [2/3, 1] MMS"));
        }
        bundle.sort_unstable();
        let others: Vec<usize> = agents.iter().copied().filter(|&a| a != i).collect();
        let five_thirds = |a: usize| rat(5, 3) * &mms[a];
        if let Some(&j) = others.iter().find(|&&j| inst.set_value(j, &bundle) <= five_thirds(j)) {
            let k = others.iter().copied().find(|&a| a != j).expect("two others");
            let receiver = if inst.set_value(k, &bundle) >= &two_thirds * &mms[k] { k } else { i };
            return found(bundle, receiver, ReducibleKind::SmallGoods);
        }
        let (j, k) = (others[0], others[1]);
        while inst.set_value(j, &bundle) > five_thirds(j) {
            bundle.remove(0);
        }
        let receiver = if inst.set_value(k, &bundle) >= &two_thirds * &mms[k] { k } else { j };
        return found(bundle, receiver, ReducibleKind::SmallGoods);
    }

    let hat = hat_goods(inst, mms);
    for &a in &agents {
        let heavy: Vec<usize> = hat.iter().copied().filter(|&g| !inst.is_divisible(a, g)).collect();
        if heavy.len() < 4 {
            continue;
        }
        let partition = &partitions[a].partition;
        let shared = partition.iter().find_map(|bundle| {
            let inside: Vec<usize> = heavy.iter().copied().filter(|&g| bundle[g].is_one()).collect();
            (inside.len() >= 2).then(|| vec![inside[0], inside[1]])
        });
        let Some(pair) = shared else {
            return Err(invariant(format!("agent {a} MMS partition separates four indivisible goods")));
        };
        let receiver = agents.iter().copied().find(|&r| r != a).expect("three agents");
        return found(pair, receiver, ReducibleKind::Pigeonhole);
    }

    Ok(ReducibleFind { bundle: Vec::new(), agent: 0, kind: ReducibleKind::NotFound })
}

/// Lowest pair of goods every agent values above her MMS.
fn supported_pair(inst: &Instance, mms: &[Rational]) -> Option<(usize, usize)> {
    let m = inst.goods();
    (0..m).flat_map(|g| (g + 1..m).map(move |h| (g, h))).find(|&(g, h)| {
        (0..inst.agents()).all(|a| inst.set_value(a, &[g, h]) > mms[a])
    })
}

/// Goods every agent values above a third of her MMS.
fn hat_goods(inst: &Instance, mms: &[Rational]) -> Vec<usize> {
    (0..inst.goods())
        .filter(|&g| {
            (0..inst.agents())
                .all(|a| inst.value(a, g) * Rational::from_integer(3.into()) > mms[a])
        })
        .collect()
}

/// 2/3-MMS allocation for three agents.
pub fn three_agent_two_thirds(inst: &Instance) -> Result<(Allocation, AlgoTrace)> {
    if inst.agents() != 3 {
        return Err(domain(format!("expected 3 agents, got {}", inst.agents())));
    }
    let partitions = mms_all(inst)?;
    let mms: Vec<Rational> = partitions.iter().map(|r| r.value.clone()).collect();
    let mut trace = AlgoTrace::new();
    trace.push("mms", fmt_values(&mms));
    let mut state = ReducedState::new(inst, mms);
    let two_thirds = rat(2, 3);

    if state.remaining_goods().is_empty() {
        trace.push("branch", "no goods");
        return Ok((state.assigned, trace));
    }

    if state.has_high_valued(inst, &two_thirds) {
        trace.push("branch", "high-valued");
        let state = high_valued_alloc(inst, &two_thirds, state, &mut trace)?;
        let alloc = match state.active.len() {
            0 => {
                state.check_masses()?;
                state.assigned
            }
            2 => two_agent_two_thirds(inst, state, &mut trace)?,
            k => return Err(invariant(format!("{k} agents left after high-valued allocation"))),
        };
        return Ok((alloc, trace));
    }

    let find = find_reducible_bundle(inst, &state, &partitions)?;
    if find.kind != ReducibleKind::NotFound {
        trace.push(
            "branch",
            format!("reducible {:?} {} to agent {}", find.kind, fmt_goods(&find.bundle), find.agent),
        );
        state.give_whole(find.agent, &find.bundle);
        state.retire(find.agent);
        let alloc = two_agent_two_thirds(inst, state, &mut trace)?;
        return Ok((alloc, trace));
    }

    trace.push("branch", "common-divisible");
    common_divisible_split(inst, state, &mut trace).map(|alloc| (alloc, trace))
}

/// Two agents sharing a divisible good of `M̂` split `{g1, d, g2}`; the third
/// agent takes everything else.
fn common_divisible_split(
    inst: &Instance,
    mut state: ReducedState,
    trace: &mut AlgoTrace,
) -> Result<Allocation> {
    let mms = state.mms.clone();
    let (o1, o2) =
        supported_pair(inst, &mms).ok_or_else(|| invariant("no pair valued above MMS by every agent"))?;
    let hat = hat_goods(inst, &mms);
    let d = hat
        .iter()
        .copied()
        .find(|&g| inst.divisible_viewers(g).len() >= 2)
        .ok_or_else(|| invariant("no common divisible good in M-hat"))?;
    let mut picks: Vec<usize> = if d == o1 || d == o2 {
        let extra = hat
            .iter()
            .copied()
            .find(|&g| g != o1 && g != o2)
            .ok_or_else(|| invariant("M-hat has fewer than three goods"))?;
        vec![if d == o1 { o2 } else { o1 }, extra]
    } else {
        vec![o1, o2]
    };
    picks.sort_unstable();
    let (g1, g2) = (picks[0], picks[1]);
    let viewers = inst.divisible_viewers(d);
    let (cutter, picker) = (viewers[0], viewers[1]);
    let third = (0..3).find(|&a| a != cutter && a != picker).expect("three agents");

    // Cut inside d so that the cutter values both sides of the line equally.
    let ud = inst.value(cutter, d);
    let x = (inst.value(cutter, g2) - inst.value(cutter, g1) + ud) / (ud * Rational::from_integer(2.into()));
    if !x.is_positive() || x >= Rational::one() {
        return Err(invariant("equal cut does not fall strictly inside the common good"));
    }
    let rest_of_d = Rational::one() - &x;
    trace.push(
        "cut",
        format!(
            "agent {cutter} cuts g{g1}|g{d}|g{g2} at {} of g{d}",
            format_rational(&x)
        ),
    );
    let left_value = inst.value(picker, g1) + inst.piece_value(picker, d, &x);
    let right_value = inst.piece_value(picker, d, &rest_of_d) + inst.value(picker, g2);
    let (left_agent, right_agent) =
        if left_value >= right_value { (picker, cutter) } else { (cutter, picker) };
    trace.push("cut", format!("agent {left_agent} takes the left part, agent {right_agent} the right"));
    state.give_whole(left_agent, &[g1]);
    state.give_piece(left_agent, d, &x);
    state.give_piece(right_agent, d, &rest_of_d);
    state.give_whole(right_agent, &[g2]);
    let rest = state.remaining_goods();
    trace.push("cut", format!("agent {third} takes {}", fmt_goods(&rest)));
    state.give_whole(third, &rest);
    state.active.clear();
    state.check_masses()?;
    Ok(state.assigned)
}

/// Adds remaining goods in ascending index until some active agent values
/// the bundle within `[MMS/2, MMS]`. A lone agent takes everything.
pub fn find_half_reducible(inst: &Instance, state: &ReducedState) -> Result<(Vec<usize>, usize)> {
    match state.active[..] {
        [] => return Err(precondition("no active agents")),
        [only] => return Ok((state.remaining_goods(), only)),
        _ => {}
    }
    let half = rat(1, 2);
    if state.has_high_valued(inst, &half) {
        return Err(precondition("a 1/2-high-valued good remains"));
    }
    let mut values = vec![Rational::zero(); inst.agents()];
    let hit = |values: &[Rational]| {
        state
            .active
            .iter()
            .copied()
            .find(|&a| values[a] >= &half * &state.mms[a] && values[a] <= state.mms[a])
    };
    let mut bundle = Vec::new();
    if let Some(a) = hit(&values) {
        return Ok((bundle, a));
    }
    for g in state.remaining_goods() {
        bundle.push(g);
        for &a in &state.active {
            values[a] += state.piece_value(inst, a, g);
        }
        if let Some(a) = hit(&values) {
            return Ok((bundle, a));
        }
    }
    Err(invariant("no 1/2-reducible bundle found"))
}

/// 1/2-MMS allocation for any number of agents.
pub fn n_agent_half(inst: &Instance) -> Result<(Allocation, AlgoTrace)> {
    let mms: Vec<Rational> = mms_all(inst)?.into_iter().map(|r| r.value).collect();
    let mut trace = AlgoTrace::new();
    trace.push("mms", fmt_values(&mms));
    let state = ReducedState::new(inst, mms);
    let mut state = high_valued_alloc(inst, &rat(1, 2), state, &mut trace)?;
    while !state.active.is_empty() {
        let (bundle, agent) = find_half_reducible(inst, &state)?;
        trace.push("half-reducible", format!("agent {agent} takes {}", fmt_goods(&bundle)));
        state.give_whole(agent, &bundle);
        state.retire(agent);
    }
    state.check_masses()?;
    Ok((state.assigned, trace))
}

/// Adds one good and one agent so that the old agents keep their MMS and
/// the new agent's MMS is `1/(n+1)`, without raising the best achievable
/// approximation ratio.
///
/// The new good is indivisible for every old agent and worth exactly her
/// MMS; the new agent values only the new good, divisibly, at 1.
pub fn build_lifted_instance(inst: &Instance) -> Result<Instance> {
    let mms: Vec<Rational> = mms_all(inst)?.into_iter().map(|r| r.value).collect();
    let n = inst.agents();
    let m = inst.goods();
    let mut good_names = inst.good_names().to_vec();
    let mut new_good = format!("g{}", m + 1);
    while good_names.contains(&new_good) {
        new_good.push('\'');
    }
    good_names.push(new_good);
    let mut agent_names = inst.agent_names().to_vec();
    let mut new_agent = format!("a{}", n + 1);
    while agent_names.contains(&new_agent) {
        new_agent.push('\'');
    }
    agent_names.push(new_agent);

    let mut values: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row = inst.values(i).to_vec();
            row.push(mms[i].clone());
            row
        })
        .collect();
    let mut divisible: Vec<Vec<bool>> = (0..n)
        .map(|i| {
            let mut row = inst.divisible_row(i).to_vec();
            row.push(false);
            row
        })
        .collect();
    let mut last = vec![Rational::zero(); m];
    last.push(Rational::one());
    values.push(last);
    let mut last_flags = vec![false; m];
    last_flags.push(true);
    divisible.push(last_flags);
    Instance::new(agent_names, good_names, values, divisible)
}

fn fmt_values(values: &[Rational]) -> String {
    let parts: Vec<String> = values.iter().map(format_rational).collect();
    format!("({})", parts.join(", "))
}
