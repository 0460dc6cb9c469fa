//! Algebraic laws checked on random inputs.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use proptest::prelude::*;
use qprop_core::bridge::check_equiv_coincidence;
use qprop_core::formula::classify;
use qprop_core::gen::{gen_qm, QmGenConfig};
use qprop_core::model::{build_cm_model, PredicateInfo, StateSpec};
use qprop_core::propositions::{physical_proposition, Scope};
use qprop_core::scalar::{cint, ExactComplex};
use qprop_core::{born, build_model, parse, render, testable, ExactSubspace, Formula, Model, PredicateId};

fn leaf() -> impl Strategy<Value = Formula> {
    prop_oneof![Just("E"), Just("F"), Just("G")].prop_map(Formula::pred)
}

fn classical() -> impl Strategy<Value = Formula> {
    leaf().prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::or(a, b)),
        ]
    })
}

fn any_formula() -> impl Strategy<Value = Formula> {
    leaf().prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            inner.clone().prop_map(Formula::qnot),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::qand(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::qor(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::qimp(a, b)),
        ]
    })
}

/// Models over `E`, `F` (properties) and `G` (effect) with 1 to 3 states of
/// 1 to 4 objects.
fn small_model() -> impl Strategy<Value = Model> {
    prop::collection::vec((1usize..=4, any::<[u8; 3]>()), 1..=3).prop_map(|states| {
        let info = |n: &str, prop: bool| PredicateInfo {
            name: PredicateId::new(n).unwrap(),
            is_property: prop,
            ortho: None,
        };
        let specs = states
            .iter()
            .enumerate()
            .map(|(i, (n, masks))| {
                let ext = |m: u8| (0..*n).filter(|u| m & (1 << u) != 0).collect::<Vec<_>>();
                let extensions: BTreeMap<String, Vec<usize>> = [("E", masks[0]), ("F", masks[1]), ("G", masks[2])]
                    .iter()
                    .map(|(name, m)| (name.to_string(), ext(*m)))
                    .collect();
                StateSpec {
                    name: format!("S{i}"),
                    universe: *n,
                    extensions,
                }
            })
            .collect();
        Model::new(vec![info("E", true), info("F", true), info("G", false)], specs).unwrap()
    })
}

fn vector(dim: usize) -> impl Strategy<Value = Vec<ExactComplex>> {
    prop::collection::vec((-3i64..=3, -3i64..=3), dim).prop_map(|v| v.into_iter().map(|(a, b)| cint(a, b)).collect())
}

fn subspace_pair() -> impl Strategy<Value = (ExactSubspace, ExactSubspace)> {
    (2usize..=4).prop_flat_map(|d| {
        let vs = || prop::collection::vec(vector(d), 0..=d);
        (vs(), vs()).prop_map(move |(a, b)| {
            (ExactSubspace::span(d, &a).unwrap(), ExactSubspace::span(d, &b).unwrap())
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn parse_inverts_render(f in any_formula()) {
        let text = render(&f);
        prop_assert_eq!(parse(&text).unwrap(), f);
    }

    #[test]
    fn classify_is_stable_under_property_preserving_renaming(f in any_formula()) {
        let props: BTreeSet<PredicateId> = ["E", "F"].iter().map(|n| PredicateId::new(n).unwrap()).collect();
        let swap = |p: &PredicateId| PredicateId::new(match p.as_str() {
            "E" => "F",
            "F" => "E",
            other => other,
        }).unwrap();
        prop_assert_eq!(classify(&f, &props), classify(&f.map_leaves(&swap), &props));
    }

    #[test]
    fn signatures_follow_set_operations(m in small_model(), f in classical(), g in classical()) {
        let sf = m.signature(&f).unwrap();
        let sg = m.signature(&g).unwrap();
        prop_assert_eq!(m.signature(&Formula::and(f.clone(), g.clone())).unwrap(), sf.intersection(&sg));
        prop_assert_eq!(m.signature(&Formula::or(f.clone(), g.clone())).unwrap(), sf.union(&sg));
        prop_assert_eq!(m.signature(&Formula::not(f.clone())).unwrap(), sf.complement());
        // The signature is the set of satisfying pairs.
        for (s, st) in m.states().iter().enumerate() {
            let all = (0..st.universe).all(|u| m.eval_open_at(&f, s, u).unwrap());
            prop_assert_eq!(m.eval_universal(&f, &st.name).unwrap(), all);
            prop_assert_eq!(m.block_full(&sf, s), all);
        }
    }

    #[test]
    fn preorders_and_propositions(m in small_model(), f in classical(), g in classical()) {
        let logical = m.logical_leq(&f, &g).unwrap();
        let physical = m.physical_leq(&f, &g).unwrap();
        prop_assert!(!logical || physical);
        let pf = physical_proposition(&m, &f).unwrap().states;
        let pg = physical_proposition(&m, &g).unwrap().states;
        prop_assert_eq!(physical, pf.is_subset(&pg));
        // Equal signatures give equal propositions.
        if m.signature(&f).unwrap() == m.signature(&g).unwrap() {
            prop_assert_eq!(pf, pg);
        }
        prop_assert!(m.logical_leq(&f, &f).unwrap());
    }

    #[test]
    fn property_testability_implies_effect_testability(m in small_model(), f in classical()) {
        if testable(&m, &f, Scope::Properties).unwrap().is_some() {
            prop_assert!(testable(&m, &f, Scope::Effects).unwrap().is_some());
        }
    }

    #[test]
    fn cm_truth_does_not_depend_on_the_object(
        table in prop::collection::vec(any::<[bool; 2]>(), 1..=3),
        sizes in prop::collection::vec(1usize..=4, 3),
        f in classical(),
    ) {
        let states: Vec<(String, usize)> = table.iter().enumerate().map(|(i, _)| (format!("S{i}"), sizes[i])).collect();
        let state_refs: Vec<(&str, usize)> = states.iter().map(|(n, k)| (n.as_str(), *k)).collect();
        let columns = [("E", table.iter().map(|r| r[0]).collect::<Vec<_>>()), ("F", table.iter().map(|r| r[1]).collect()), ("G", vec![true; table.len()])];
        let m = build_cm_model(&state_refs, &columns).unwrap();
        prop_assert!(m.check_cms());
        for (s, st) in m.states().iter().enumerate() {
            let first = m.eval_open_at(&f, s, 0).unwrap();
            prop_assert_eq!(m.eval_universal(&f, &st.name).unwrap(), first);
            for u in 0..st.universe {
                prop_assert_eq!(m.eval_open_at(&f, s, u).unwrap(), first);
            }
        }
    }

    #[test]
    fn born_values_of_complements_sum_to_one((a, _) in subspace_pair(), seed in vector(4)) {
        let psi = &seed[..a.ambient_dim()];
        prop_assume!(!psi.iter().all(Zero::is_zero));
        let total = born(psi, &a).unwrap() + born(psi, &a.ortho()).unwrap();
        prop_assert!(total.is_one());
        let p = born(psi, &a).unwrap();
        prop_assert_eq!(p.is_one(), a.contains(psi));
        prop_assert_eq!(p.is_zero(), a.ortho().contains(psi));
    }

    #[test]
    fn subspace_laws((a, b) in subspace_pair()) {
        prop_assert_eq!(a.ortho().ortho(), a.clone());
        prop_assert_eq!(a.ortho().rank(), a.ambient_dim() - a.rank());
        prop_assert_eq!(a.leq(&b).unwrap(), b.ortho().leq(&a.ortho()).unwrap());
        let meet = a.meet(&b).unwrap();
        let join = a.join(&b).unwrap();
        prop_assert_eq!(a.rank() + b.rank(), meet.rank() + join.rank());
        prop_assert_eq!(meet.ortho(), a.ortho().join(&b.ortho()).unwrap());
        prop_assert!(meet.leq(&a).unwrap() && a.leq(&join).unwrap());
        prop_assert_eq!(a.leq(&b).unwrap(), meet == a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn generated_qm_models_keep_their_invariants(seed in 0u64..1000, dim in 2usize..=3) {
        let config = QmGenConfig { dim, states: 3, properties: 2, universe: 4, closure_cap: 64 };
        let spec = gen_qm(seed, &config).unwrap();
        let q = build_model(&spec).unwrap();
        let m = q.model();
        prop_assert!(q.check_qmt().holds());
        prop_assert_eq!(q.qmn_violation(), None);
        // Order embedding between subspaces and their certainly-true states.
        for p in 0..m.predicates().len() {
            for r in 0..m.predicates().len() {
                prop_assert_eq!(
                    q.subspace(p).leq(q.subspace(r)).unwrap(),
                    q.theta(p).is_subset(q.theta(r))
                );
            }
        }
        // Reduction agrees with classical evaluation on testable formulas.
        for c in m.signature_classes(q.inputs(), 2).unwrap() {
            let f = &c.representative;
            if testable(m, f, Scope::Properties).unwrap().is_none() {
                continue;
            }
            for st in m.states() {
                for u in 0..st.universe {
                    prop_assert_eq!(q.tau_eval(f, &st.name, u).unwrap(), m.eval_open(f, &st.name, u).unwrap());
                }
            }
        }
        prop_assert!(check_equiv_coincidence(m, q.inputs(), 2).unwrap().holds());
        let iso = q.check_lindenbaum().unwrap();
        prop_assert!(iso.isomorphic, "{:?}", iso.failure);
    }
}
