mod common;

use common::{
    arb_instance, classic_ef1, classic_efx, classic_round_robin, mms_by_enumeration, owners_of,
};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use subjdiv::audit::{audit, mms_ratio, MmsRatio};
use subjdiv::envy_algorithms::{
    classify_goods, ef1m_nonwasteful, efx_two_partition, generalized_round_robin, two_agent_efxm_charity,
};
use subjdiv::io::{parse_instance, serialize_instance};
use subjdiv::mms::{exact_mms, mms_values, water_fill_level};
use subjdiv::mms_algorithms::{
    build_lifted_instance, n_agent_half, solve_two_agent, three_agent_two_thirds,
};
use subjdiv::model::{utility, validate_allocation};
use subjdiv::oracle::{best_alpha, exists_efm_nonwasteful};
use subjdiv::rational::{rat, Rational};
use subjdiv::{Allocation, Instance};

fn fraction() -> impl Strategy<Value = Rational> {
    (0i64..=12).prop_map(|k| rat(k, 12))
}

fn utilities(inst: &Instance, alloc: &Allocation) -> Vec<Rational> {
    (0..inst.agents()).map(|i| alloc.utility_of(inst, i)).collect()
}

fn assert_complete(inst: &Instance, alloc: &Allocation) {
    assert!(validate_allocation(inst, alloc, true).unwrap().is_empty());
    assert!(alloc.charity.iter().all(Zero::is_zero));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn utility_is_additive_over_pieces(
        inst in arb_instance(1..=3, 1..=6, 8),
        a in proptest::collection::vec(fraction(), 6),
        b in proptest::collection::vec(fraction(), 6),
    ) {
        let m = inst.goods();
        // Disjoint goods: a on even indices, b on odd ones.
        let left: Vec<Rational> = (0..m).map(|g| if g % 2 == 0 { a[g].clone() } else { Rational::zero() }).collect();
        let right: Vec<Rational> = (0..m).map(|g| if g % 2 == 1 { b[g].clone() } else { Rational::zero() }).collect();
        let union: Vec<Rational> = (0..m).map(|g| &left[g] + &right[g]).collect();
        for i in 0..inst.agents() {
            let ul = utility(&inst, i, &left).unwrap();
            let ur = utility(&inst, i, &right).unwrap();
            prop_assert_eq!(utility(&inst, i, &union).unwrap(), ul + ur);
        }
    }

    #[test]
    fn utility_is_monotone_and_scales(
        inst in arb_instance(1..=3, 1..=6, 8),
        a in proptest::collection::vec(fraction(), 6),
        extra in proptest::collection::vec(fraction(), 6),
        factor in 1i64..=5,
    ) {
        let m = inst.goods();
        let small: Vec<Rational> = a[..m].to_vec();
        let big: Vec<Rational> = (0..m).map(|g| (&small[g] + &extra[g]).min(Rational::one())).collect();
        let c = Rational::from_integer(factor.into());
        for i in 0..inst.agents() {
            prop_assert!(utility(&inst, i, &big).unwrap() >= utility(&inst, i, &small).unwrap());
            let scaled = inst.scaled(i, &c);
            prop_assert_eq!(utility(&scaled, i, &small).unwrap(), &c * utility(&inst, i, &small).unwrap());
        }
    }

    #[test]
    fn water_fill_spends_the_pool(
        base in proptest::collection::vec(0i64..=10, 1..=5),
        pool in 0i64..=10,
    ) {
        let base: Vec<Rational> = base.into_iter().map(|v| rat(v, 3)).collect();
        let pool = rat(pool, 2);
        let t = water_fill_level(&base, &pool).unwrap();
        let used: Rational = base.iter().filter(|b| **b < t).map(|b| &t - b).sum();
        prop_assert_eq!(used, pool);
        prop_assert!(t >= *base.iter().min().unwrap());
    }

    #[test]
    fn mms_bounds_and_scaling(inst in arb_instance(1..=4, 1..=6, 8), factor in 1i64..=4) {
        let n = inst.agents();
        let mms = mms_values(&inst).unwrap();
        let c = Rational::from_integer(factor.into());
        for i in 0..n {
            prop_assert!(!mms[i].is_negative());
            prop_assert!(&mms[i] * Rational::from_integer(n.into()) <= inst.total_value(i));
            prop_assert_eq!(exact_mms(&inst, i, 1).unwrap().value, inst.total_value(i));
            let scaled = inst.scaled(i, &c);
            prop_assert_eq!(exact_mms(&scaled, i, n).unwrap().value, &c * &mms[i]);
        }
    }

    #[test]
    fn mms_of_divisible_goods_is_proportional(inst in arb_instance(1..=4, 1..=6, 8)) {
        for i in 0..inst.agents() {
            let all_div = (0..inst.goods()).all(|g| inst.is_divisible(i, g) || inst.value(i, g).is_zero());
            if all_div {
                let expected = inst.total_value(i) / Rational::from_integer(inst.agents().into());
                prop_assert_eq!(exact_mms(&inst, i, inst.agents()).unwrap().value, expected);
            }
        }
    }

    #[test]
    fn mms_matches_labelled_enumeration(inst in arb_instance(1..=3, 1..=6, 8), k in 1usize..=3) {
        for i in 0..inst.agents() {
            prop_assert_eq!(exact_mms(&inst, i, k).unwrap().value, mms_by_enumeration(&inst, i, k));
        }
    }

    #[test]
    fn two_agent_cut_and_choose(inst in arb_instance(2..=2, 1..=7, 8)) {
        let mms = mms_values(&inst).unwrap();
        let (alloc, _) = solve_two_agent(&inst).unwrap();
        assert_complete(&inst, &alloc);
        prop_assert!(mms_ratio(&utilities(&inst, &alloc), &mms).at_least(&rat(2, 3)));
        prop_assert_eq!(solve_two_agent(&inst).unwrap().0, alloc);
    }

    #[test]
    fn three_agent_two_thirds_guarantee(inst in arb_instance(3..=3, 1..=7, 8)) {
        let mms = mms_values(&inst).unwrap();
        let (alloc, _) = three_agent_two_thirds(&inst).unwrap();
        assert_complete(&inst, &alloc);
        prop_assert!(mms_ratio(&utilities(&inst, &alloc), &mms).at_least(&rat(2, 3)));
    }

    #[test]
    fn n_agent_half_guarantee(inst in arb_instance(1..=6, 1..=7, 8)) {
        let mms = mms_values(&inst).unwrap();
        let (alloc, _) = n_agent_half(&inst).unwrap();
        assert_complete(&inst, &alloc);
        prop_assert!(mms_ratio(&utilities(&inst, &alloc), &mms).at_least(&rat(1, 2)));
    }

    #[test]
    fn lifting_keeps_old_shares(inst in arb_instance(1..=3, 1..=5, 8)) {
        let mms = mms_values(&inst).unwrap();
        let lifted = build_lifted_instance(&inst).unwrap();
        let lifted_mms = mms_values(&lifted).unwrap();
        let n = inst.agents();
        prop_assert_eq!(&lifted_mms[..n], &mms[..]);
        prop_assert_eq!(lifted_mms[n].clone(), rat(1, n as i64 + 1));
    }

    #[test]
    fn efx_split_for_its_cutter(inst in arb_instance(1..=2, 1..=8, 8)) {
        let (p1, p2) = efx_two_partition(&inst, 0).unwrap();
        let mut all: Vec<usize> = p1.iter().chain(&p2).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..inst.goods()).collect::<Vec<_>>());
        let v1 = inst.set_value(0, &p1);
        let v2 = inst.set_value(0, &p2);
        prop_assert!(v1 >= v2);
        for &g in &p1 {
            prop_assert!(inst.value(0, g).is_positive());
            prop_assert!(&v1 - inst.value(0, g) <= v2);
        }
    }

    #[test]
    fn efxm_with_little_charity(inst in arb_instance(2..=2, 1..=7, 8)) {
        let (res, _) = two_agent_efxm_charity(&inst).unwrap();
        let report = audit(&inst, &res.allocation, None).unwrap();
        prop_assert!(report.efxm);
        prop_assert!(report.non_wasteful);
        let support = res.allocation.charity_support();
        prop_assert!(support.len() <= 1);
        if let Some(&g) = support.first() {
            prop_assert_eq!(res.discarded_good, Some(g));
            prop_assert_eq!(&res.allocation.charity[g], &res.discarded_fraction);
        }
    }

    #[test]
    fn ef1m_everywhere(inst in arb_instance(1..=5, 1..=8, 8)) {
        let (alloc, _) = ef1m_nonwasteful(&inst).unwrap();
        assert_complete(&inst, &alloc);
        let report = audit(&inst, &alloc, None).unwrap();
        prop_assert!(report.ef1m);
        prop_assert!(report.non_wasteful);
    }

    #[test]
    fn indivisible_round_robin_is_classic(inst in arb_instance(1..=4, 1..=8, 8)) {
        let flags = vec![vec![false; inst.goods()]; inst.agents()];
        let values = (0..inst.agents()).map(|i| inst.values(i).to_vec()).collect();
        let inst = Instance::with_default_names(values, flags).unwrap();
        let (s1, s2) = classify_goods(&inst);
        prop_assert!(s2.is_empty());
        let (alloc, _) = generalized_round_robin(&inst, &s1).unwrap();
        prop_assert_eq!(owners_of(&alloc), classic_round_robin(&inst));
    }

    #[test]
    fn equal_split_is_envy_free(inst in arb_instance(1..=4, 1..=6, 8)) {
        let n = inst.agents();
        let share = Rational::new(1.into(), n.into());
        let mut alloc = Allocation::empty(n, inst.goods());
        for g in 0..inst.goods() {
            for i in 0..n {
                alloc.shares[i][g] = share.clone();
            }
        }
        prop_assert!(audit(&inst, &alloc, None).unwrap().ef);
    }

    #[test]
    fn indivisible_audit_matches_classic(inst in arb_instance(2..=3, 1..=6, 8), owners in proptest::collection::vec(0usize..3, 6)) {
        let flags = vec![vec![false; inst.goods()]; inst.agents()];
        let values = (0..inst.agents()).map(|i| inst.values(i).to_vec()).collect();
        let inst = Instance::with_default_names(values, flags).unwrap();
        let owners: Vec<Option<usize>> = (0..inst.goods()).map(|g| Some(owners[g] % inst.agents())).collect();
        let alloc = Allocation::from_owners(inst.agents(), &owners);
        let report = audit(&inst, &alloc, None).unwrap();
        prop_assert_eq!(report.efm, classic_ef1(&inst, &owners));
        prop_assert_eq!(report.efxm, classic_efx(&inst, &owners));
    }

    #[test]
    fn alpha_is_scale_free(inst in arb_instance(2..=3, 1..=6, 8), factor in 1i64..=5, agent in 0usize..3) {
        let agent = agent % inst.agents();
        let (alloc, _) = n_agent_half(&inst).unwrap();
        let mms = mms_values(&inst).unwrap();
        let c = rat(factor, 3);
        let scaled = inst.scaled(agent, &c);
        let scaled_mms = mms_values(&scaled).unwrap();
        let a = audit(&inst, &alloc, Some(&mms)).unwrap().alpha_mms;
        let b = audit(&scaled, &alloc, Some(&scaled_mms)).unwrap().alpha_mms;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn serialization_round_trips(inst in arb_instance(1..=4, 1..=6, 8)) {
        prop_assert_eq!(parse_instance(&serialize_instance(&inst)).unwrap(), inst);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn oracle_dominates_algorithms(inst in arb_instance(2..=3, 1..=5, 8)) {
        let best = best_alpha(&inst, 1 << 20).unwrap();
        let mms = mms_values(&inst).unwrap();
        let witness = mms_ratio(&utilities(&inst, &best.allocation), &mms);
        prop_assert!(witness >= best.alpha);
        assert_complete(&inst, &best.allocation);
        let mut outputs = vec![n_agent_half(&inst).unwrap().0];
        match inst.agents() {
            2 => outputs.push(solve_two_agent(&inst).unwrap().0),
            _ => outputs.push(three_agent_two_thirds(&inst).unwrap().0),
        }
        for alloc in outputs {
            prop_assert!(best.alpha >= mms_ratio(&utilities(&inst, &alloc), &mms));
        }
    }

    #[test]
    fn oracle_beats_random_fractional_allocations(
        inst in arb_instance(2..=3, 1..=5, 8),
        weights in proptest::collection::vec(proptest::collection::vec(1i64..=6, 3), 5),
    ) {
        let n = inst.agents();
        let mut alloc = Allocation::empty(n, inst.goods());
        for g in 0..inst.goods() {
            let total: i64 = weights[g][..n].iter().sum();
            for i in 0..n {
                alloc.shares[i][g] = rat(weights[g][i], total);
            }
        }
        let mms = mms_values(&inst).unwrap();
        let best = best_alpha(&inst, 1 << 20).unwrap();
        prop_assert!(best.alpha >= mms_ratio(&utilities(&inst, &alloc), &mms));
    }

    #[test]
    fn oracle_not_raised_by_lifting(inst in arb_instance(2..=2, 1..=4, 6)) {
        let base = best_alpha(&inst, 1 << 20).unwrap().alpha;
        let lifted = best_alpha(&build_lifted_instance(&inst).unwrap(), 1 << 20).unwrap().alpha;
        prop_assert!(lifted <= base);
    }

    #[test]
    fn efm_oracle_is_self_consistent(inst in arb_instance(2..=3, 1..=5, 8)) {
        let single_viewer = (0..inst.goods()).all(|g| inst.divisible_viewers(g).len() <= 1);
        let found = exists_efm_nonwasteful(&inst, 1 << 20);
        if !single_viewer {
            prop_assert!(found.is_err());
            return Ok(());
        }
        let found = found.unwrap();
        let n = inst.agents();
        let m = inst.goods();
        let mut any = false;
        for code in 0..n.pow(m as u32) {
            let owners: Vec<Option<usize>> = (0..m).map(|g| Some(code / n.pow((m - 1 - g) as u32) % n)).collect();
            let r = audit(&inst, &Allocation::from_owners(n, &owners), None).unwrap();
            if r.efm && r.non_wasteful {
                any = true;
                break;
            }
        }
        prop_assert_eq!(found.is_some(), any);
        if let Some(w) = found {
            let r = audit(&inst, &w, None).unwrap();
            prop_assert!(r.efm && r.non_wasteful);
        }
    }
}

#[test]
fn all_zero_mms_is_unbounded() {
    let inst = Instance::with_default_names(
        vec![vec![rat(1, 1)], vec![rat(1, 1)]],
        vec![vec![false], vec![false]],
    )
    .unwrap();
    assert_eq!(best_alpha(&inst, 1 << 10).unwrap().alpha, MmsRatio::Unbounded);
}
