#![allow(dead_code)]

use efg_core::{
    enumerate_pure_strategies, expected_utility, BehavioralStrategy, GameTree, PayoffPair,
    PureStrategy, Rational, Seat, StrategyProfile,
};

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

pub fn int(n: i64) -> Rational {
    Rational::from(n)
}

pub fn pair(a: Rational, b: Rational) -> PayoffPair {
    [a, b]
}

pub fn ipair(a: i64, b: i64) -> PayoffPair {
    [int(a), int(b)]
}

pub fn pure(seat: Seat, choices: &[(&str, &str)]) -> PureStrategy {
    PureStrategy::new(seat, choices.iter().copied())
}

pub fn behavioral(seat: Seat, rows: &[(&str, &[(&str, Rational)])]) -> BehavioralStrategy {
    BehavioralStrategy::new(
        seat,
        rows.iter().map(|(n, d)| (n.to_string(), d.iter().map(|(l, p)| (l.to_string(), p.clone())).collect())),
    )
}

/// Independent oracle: maximum payoff for `seat` over its enumerated pure
/// strategies against a fixed opponent, via full expected-utility evaluation.
pub fn brute_force_best_value(tree: &GameTree, seat: Seat, opponent: &BehavioralStrategy) -> Rational {
    enumerate_pure_strategies(tree, seat)
        .into_iter()
        .map(|s| {
            let profile = match seat {
                Seat::One => StrategyProfile::new(s, opponent.clone()),
                Seat::Two => StrategyProfile::new(opponent.clone(), s),
            };
            expected_utility(tree, &profile).unwrap()[seat.index()].clone()
        })
        .max()
        .expect("at least one pure strategy")
}

/// Independent oracle: terminal reached by a pure profile, by walking from
/// the root.
pub fn walk(tree: &GameTree, s1: &PureStrategy, s2: &PureStrategy) -> usize {
    let mut ix = tree.root();
    while let Some(owner) = tree.owner(ix) {
        let s = if owner == Seat::One { s1 } else { s2 };
        let label = &s.choices[tree.id(ix)];
        ix = tree.actions(ix).iter().find(|a| &a.label == label).unwrap().child;
    }
    ix
}
