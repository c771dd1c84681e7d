mod common;

use common::*;
use efg_core::random::{random_behavioral, random_mixed, random_tree};
use efg_core::{
    enumerate_pure_strategies, expected_utility, make_centipede, mixed_to_behavioral,
    pure_strategy_count, reach_distribution, subgame, validate_tree, Error, MixedAtom,
    MixedStrategy, Rational, RawAction, RawNode, RawTree, Seat, Strategy, StrategyError, StrategyProfile,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn terminal_payoffs(tree: &efg_core::GameTree) -> Vec<efg_core::PayoffPair> {
    tree.terminals().map(|ix| tree.payoffs(ix).unwrap().clone()).collect()
}

#[test]
fn centipede_4_counts() {
    let t = make_centipede(4).unwrap();
    assert_eq!(t.decision_nodes().count(), 4);
    assert_eq!(t.terminals().count(), 5);
}

#[test]
fn subgame_of_centipede_4_at_d3() {
    let t = make_centipede(4).unwrap();
    let sub = subgame(&t, "d3").unwrap();
    assert_eq!(sub.decision_nodes().count(), 2);
    assert_eq!(sub.id(sub.root()), "d3");
    assert_eq!(terminal_payoffs(&sub), vec![ipair(4, 3), ipair(3, 6), ipair(6, 5)]);
}

#[test]
fn subgame_of_centipede_10_at_d9() {
    let t = make_centipede(10).unwrap();
    let sub = subgame(&t, "d9").unwrap();
    assert_eq!(sub.decision_nodes().count(), 2);
    assert_eq!(terminal_payoffs(&sub), vec![ipair(10, 9), ipair(9, 12), ipair(12, 11)]);
}

#[test]
fn subgame_at_root_is_identity_and_idempotent() {
    let t = make_centipede(6).unwrap();
    assert_eq!(subgame(&t, "d1").unwrap(), t);
    let sub = subgame(&t, "d4").unwrap();
    assert_eq!(subgame(&sub, "d4").unwrap(), sub);
}

#[test]
fn pure_strategy_enumeration_order() {
    let t = make_centipede(4).unwrap();
    let all = enumerate_pure_strategies(&t, Seat::One);
    let expected = [("S", "S"), ("S", "C"), ("C", "S"), ("C", "C")]
        .map(|(a, b)| pure(Seat::One, &[("d1", a), ("d3", b)]));
    assert_eq!(all, expected.to_vec());
    assert_eq!(enumerate_pure_strategies(&make_centipede(6).unwrap(), Seat::One).len(), 8);
}

#[test]
fn seat_without_nodes_has_one_empty_strategy() {
    let raw = RawTree {
        players: 2,
        root: "d1".into(),
        nodes: [
            ("d1".to_string(), RawNode::Decision {
                owner: 1,
                actions: vec![RawAction { label: "S".into(), child: "t1".into() }],
            }),
            ("t1".to_string(), RawNode::Terminal { payoffs: vec![int(2), int(1)] }),
        ]
        .into(),
    };
    let t = validate_tree(&raw).unwrap();
    let s2 = enumerate_pure_strategies(&t, Seat::Two);
    assert_eq!(s2.len(), 1);
    assert!(s2[0].choices.is_empty());
}

#[test]
fn reach_under_all_stop() {
    let t = make_centipede(4).unwrap();
    let profile = StrategyProfile::new(
        pure(Seat::One, &[("d1", "S"), ("d3", "S")]),
        pure(Seat::Two, &[("d2", "S"), ("d4", "S")]),
    );
    let reach = reach_distribution(&t, &profile).unwrap();
    assert_eq!(reach.get("t1"), Some(&int(1)));
    assert_eq!(reach.total(), int(1));
    assert_eq!(reach.support().count(), 1);
}

fn halves_centipede_2() -> StrategyProfile {
    let half = || vec![("S", q(1, 2)), ("C", q(1, 2))];
    StrategyProfile::new(
        behavioral(Seat::One, &[("d1", &half())]),
        behavioral(Seat::Two, &[("d2", &half())]),
    )
}

#[test]
fn reach_under_independent_halves() {
    let t = make_centipede(2).unwrap();
    let reach = reach_distribution(&t, &halves_centipede_2()).unwrap();
    assert_eq!(reach.get("t1"), Some(&q(1, 2)));
    assert_eq!(reach.get("t2"), Some(&q(1, 4)));
    assert_eq!(reach.get("t3"), Some(&q(1, 4)));
}

#[test]
fn expected_utility_examples() {
    let t = make_centipede(2).unwrap();
    let p = StrategyProfile::new(pure(Seat::One, &[("d1", "C")]), pure(Seat::Two, &[("d2", "S")]));
    assert_eq!(expected_utility(&t, &p).unwrap(), ipair(1, 4));
    assert_eq!(expected_utility(&t, &halves_centipede_2()).unwrap(), pair(q(9, 4), q(9, 4)));
}

#[test]
fn domain_mismatches_are_reported() {
    let t = make_centipede(4).unwrap();
    let s2 = pure(Seat::Two, &[("d2", "S"), ("d4", "S")]);
    let missing = StrategyProfile::new(pure(Seat::One, &[("d1", "S")]), s2.clone());
    assert_eq!(
        expected_utility(&t, &missing).unwrap_err(),
        Error::Strategy(StrategyError::MissingNode("d3".into()))
    );
    let extra = StrategyProfile::new(pure(Seat::One, &[("d1", "S"), ("d2", "S"), ("d3", "S")]), s2.clone());
    assert_eq!(
        expected_utility(&t, &extra).unwrap_err(),
        Error::Strategy(StrategyError::ExtraNode("d2".into()))
    );
    let bad_label = StrategyProfile::new(pure(Seat::One, &[("d1", "X"), ("d3", "S")]), s2.clone());
    assert!(matches!(
        expected_utility(&t, &bad_label).unwrap_err(),
        Error::Strategy(StrategyError::UnknownAction { .. })
    ));
    let wrong_seat = StrategyProfile::new(s2.clone(), s2.clone());
    assert!(matches!(
        expected_utility(&t, &wrong_seat).unwrap_err(),
        Error::Strategy(StrategyError::SeatMismatch { .. })
    ));
    let unnormalized = StrategyProfile::new(
        behavioral(Seat::One, &[("d1", &[("S", q(1, 2))]), ("d3", &[("S", int(1))])]),
        s2,
    );
    assert!(matches!(
        expected_utility(&t, &unnormalized).unwrap_err(),
        Error::Strategy(StrategyError::NotNormalized { .. })
    ));
}

fn mixed(seat: Seat, atoms: &[(&[(&str, &str)], Rational)]) -> MixedStrategy {
    MixedStrategy {
        seat,
        atoms: atoms
            .iter()
            .map(|(c, w)| MixedAtom {
                strategy: c.iter().map(|(n, a)| (n.to_string(), a.to_string())).collect(),
                weight: w.clone(),
            })
            .collect(),
    }
}

#[test]
fn mixed_to_behavioral_conditions_on_reaching() {
    let t = make_centipede(4).unwrap();
    let m = mixed(
        Seat::One,
        &[(&[("d1", "S"), ("d3", "S")], q(1, 2)), (&[("d1", "C"), ("d3", "C")], q(1, 2))],
    );
    let b = mixed_to_behavioral(&t, &m).unwrap();
    assert_eq!(b.prob("d1", "S"), q(1, 2));
    assert_eq!(b.prob("d1", "C"), q(1, 2));
    assert_eq!(b.prob("d3", "C"), int(1));
    assert_eq!(b.prob("d3", "S"), int(0));
}

#[test]
fn mixed_to_behavioral_unreachable_fallback() {
    let t = make_centipede(4).unwrap();
    let m = mixed(
        Seat::One,
        &[(&[("d1", "S"), ("d3", "S")], q(1, 2)), (&[("d1", "S"), ("d3", "C")], q(1, 2))],
    );
    let b = mixed_to_behavioral(&t, &m).unwrap();
    assert_eq!(b.prob("d1", "S"), int(1));
    assert_eq!(b.prob("d3", "S"), int(1));
}

#[test]
fn mixed_to_behavioral_single_atom_is_deterministic_copy() {
    let t = make_centipede(6).unwrap();
    let choices = [("d1", "C"), ("d3", "S"), ("d5", "C")];
    let b = mixed_to_behavioral(&t, &mixed(Seat::One, &[(&choices, int(1))])).unwrap();
    for (node, chosen) in choices {
        for label in ["S", "C"] {
            let expected = if label == chosen { 1 } else { 0 };
            assert_eq!(b.prob(node, label), int(expected), "{node} {label}");
        }
    }
}

#[test]
fn mixed_weights_are_validated() {
    let t = make_centipede(2).unwrap();
    let m = mixed(Seat::One, &[(&[("d1", "S")], q(1, 2))]);
    assert_eq!(
        mixed_to_behavioral(&t, &m).unwrap_err(),
        Error::Strategy(StrategyError::WeightSum(q(1, 2)))
    );
    let neg = mixed(Seat::One, &[(&[("d1", "S")], q(3, 2)), (&[("d1", "C")], q(-1, 2))]);
    assert!(matches!(
        mixed_to_behavioral(&t, &neg).unwrap_err(),
        Error::Strategy(StrategyError::NegativeWeight(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reach_mass_is_exactly_one(seed in any::<u64>(), decisions in 1usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_tree(&mut rng, decisions, 3);
        let p = StrategyProfile::new(
            random_behavioral(&mut rng, &t, Seat::One),
            random_mixed(&mut rng, &t, Seat::Two, 4),
        );
        prop_assert_eq!(reach_distribution(&t, &p).unwrap().total(), int(1));
    }

    #[test]
    fn pure_profile_utility_is_reached_terminal(seed in any::<u64>(), decisions in 1usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_tree(&mut rng, decisions, 3);
        for s1 in enumerate_pure_strategies(&t, Seat::One).into_iter().take(8) {
            for s2 in enumerate_pure_strategies(&t, Seat::Two).into_iter().take(8) {
                let z = walk(&t, &s1, &s2);
                let u = expected_utility(&t, &StrategyProfile::new(s1.clone(), s2)).unwrap();
                prop_assert_eq!(&u, t.payoffs(z).unwrap());
            }
        }
    }

    #[test]
    fn kuhn_equivalence(seed in any::<u64>(), decisions in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_tree(&mut rng, decisions, 3);
        for seat in Seat::BOTH {
            let m = random_mixed(&mut rng, &t, seat, 4);
            let b = mixed_to_behavioral(&t, &m).unwrap();
            for opp in enumerate_pure_strategies(&t, seat.other()) {
                let (pm, pb) = match seat {
                    Seat::One => (StrategyProfile::new(m.clone(), opp.clone()), StrategyProfile::new(b.clone(), opp)),
                    Seat::Two => (StrategyProfile::new(opp.clone(), m.clone()), StrategyProfile::new(opp, b.clone())),
                };
                prop_assert_eq!(expected_utility(&t, &pm).unwrap(), expected_utility(&t, &pb).unwrap());
            }
        }
    }

    #[test]
    fn enumeration_size_is_product_of_action_counts(seed in any::<u64>(), decisions in 1usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_tree(&mut rng, decisions, 3);
        for seat in Seat::BOTH {
            let product: usize = t.owned_nodes(seat).iter().map(|&ix| t.actions(ix).len()).product();
            prop_assert_eq!(enumerate_pure_strategies(&t, seat).len(), product);
            prop_assert_eq!(pure_strategy_count(&t, seat), product as u128);
        }
    }

    #[test]
    fn subgame_root_identity(seed in any::<u64>(), decisions in 1usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_tree(&mut rng, decisions, 3);
        let root = t.id(t.root()).to_string();
        prop_assert_eq!(&subgame(&t, &root).unwrap(), &t);
        for ix in t.decision_nodes() {
            let sub = subgame(&t, t.id(ix)).unwrap();
            prop_assert_eq!(&subgame(&sub, t.id(ix)).unwrap(), &sub);
        }
    }
}

#[test]
fn strategy_enum_serde_shape() {
    let s = Strategy::Pure(pure(Seat::One, &[("d1", "S")]));
    let v = serde_json::to_value(&s).unwrap();
    assert_eq!(v, serde_json::json!({"kind": "pure", "seat": 1, "choices": {"d1": "S"}}));
}
