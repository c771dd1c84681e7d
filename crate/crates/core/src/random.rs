//! Random instances for property tests and benchmarks.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::rational::Rational;
use crate::strategy::{enumerate_pure_strategies, BehavioralStrategy, MixedAtom, MixedStrategy};
use crate::tree::{validate_tree, GameTree, RawAction, RawNode, RawTree, Seat};

/// A random tree with exactly `decisions` decision nodes (at least 1), each
/// with 1 to `max_actions` actions, and integer payoffs in `-5..=10` with an
/// occasional half.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, decisions: usize, max_actions: usize) -> GameTree {
    let decisions = decisions.max(1);
    let max_actions = max_actions.max(1);
    let mut next_id = 0usize;
    let mut fresh = || {
        next_id += 1;
        format!("n{next_id}")
    };
    let root = fresh();
    let mut leaves = vec![root.clone()];
    let mut structure: BTreeMap<String, (u8, Vec<String>)> = BTreeMap::new();
    while structure.len() < decisions {
        let pick = rng.gen_range(0..leaves.len());
        let id = leaves.swap_remove(pick);
        let n = rng.gen_range(1..=max_actions);
        let children: Vec<String> = (0..n).map(|_| fresh()).collect();
        leaves.extend(children.iter().cloned());
        structure.insert(id, (rng.gen_range(1..=2), children));
    }
    let mut nodes = BTreeMap::new();
    for (id, (owner, children)) in structure {
        let labels = ["a", "b", "c", "d", "e", "f"];
        let actions = children
            .into_iter()
            .enumerate()
            .map(|(i, child)| RawAction {
                label: labels.get(i).map_or_else(|| format!("x{i}"), |l| l.to_string()),
                child,
            })
            .collect();
        nodes.insert(id, RawNode::Decision { owner, actions });
    }
    for leaf in leaves {
        let mut payoff = || {
            let v = Rational::from(rng.gen_range(-5i64..=10));
            if rng.gen_bool(0.2) {
                v + Rational::new(1, 2)
            } else {
                v
            }
        };
        let payoffs = vec![payoff(), payoff()];
        nodes.insert(leaf, RawNode::Terminal { payoffs });
    }
    validate_tree(&RawTree { players: 2, root, nodes }).expect("generated tree is valid")
}

/// Random distribution over `n` outcomes with denominators up to `den`.
pub fn random_distribution<R: Rng + ?Sized>(rng: &mut R, n: usize, den: i64) -> Vec<Rational> {
    let mut cuts: Vec<i64> = (0..n.saturating_sub(1)).map(|_| rng.gen_range(0..=den)).collect();
    cuts.push(0);
    cuts.push(den);
    cuts.sort_unstable();
    cuts.windows(2).map(|w| Rational::new(w[1] - w[0], den)).collect()
}

pub fn random_behavioral<R: Rng + ?Sized>(rng: &mut R, tree: &GameTree, seat: Seat) -> BehavioralStrategy {
    let den = *[1i64, 2, 3, 4, 6, 12].choose(rng).expect("non-empty");
    let probabilities = tree
        .owned_nodes(seat)
        .into_iter()
        .map(|ix| {
            let dist = random_distribution(rng, tree.actions(ix).len(), den);
            let row = tree
                .actions(ix)
                .iter()
                .zip(dist)
                .map(|(a, p)| (a.label.clone(), p))
                .collect();
            (tree.id(ix).to_string(), row)
        })
        .collect();
    BehavioralStrategy { seat, probabilities }
}

/// Mixture of up to `max_atoms` distinct pure strategies with random weights.
pub fn random_mixed<R: Rng + ?Sized>(
    rng: &mut R,
    tree: &GameTree,
    seat: Seat,
    max_atoms: usize,
) -> MixedStrategy {
    let mut pure = enumerate_pure_strategies(tree, seat);
    pure.shuffle(rng);
    let k = rng.gen_range(1..=max_atoms.max(1)).min(pure.len());
    let weights = random_distribution(rng, k, 12);
    MixedStrategy {
        seat,
        atoms: pure
            .into_iter()
            .take(k)
            .zip(weights)
            .map(|(p, weight)| MixedAtom { strategy: p.choices, weight })
            .collect(),
    }
}
