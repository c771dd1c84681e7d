//! Realization of play: reach probabilities, expected utility, and the
//! mixed-to-behavioral conversion.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::rational::Rational;
use crate::strategy::{
    compile_mixed, components, BehavioralStrategy, Compiled, MixedStrategy, StrategyProfile,
};
use crate::tree::{GameTree, PayoffPair, Seat};

/// Probability of reaching each terminal, in canonical terminal order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReachDistribution {
    pub entries: Vec<(String, Rational)>,
}

impl ReachDistribution {
    pub fn get(&self, terminal: &str) -> Option<&Rational> {
        self.entries.iter().find(|(id, _)| id == terminal).map(|(_, p)| p)
    }

    pub fn total(&self) -> Rational {
        self.entries.iter().map(|(_, p)| p).sum()
    }

    /// Terminals with positive probability.
    pub fn support(&self) -> impl Iterator<Item = (&str, &Rational)> {
        self.entries
            .iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|(id, p)| (id.as_str(), p))
    }
}

/// Reach probability per node index for a pair of compiled behavioral
/// strategies.
pub(crate) fn reach_compiled(tree: &GameTree, s1: &Compiled, s2: &Compiled) -> Vec<Rational> {
    let mut reach = vec![Rational::zero(); tree.len()];
    reach[tree.root()] = Rational::one();
    // Canonical order is breadth-first, so parents precede children.
    for ix in 0..tree.len() {
        let Some(owner) = tree.owner(ix) else { continue };
        let here = reach[ix].clone();
        if here.is_zero() {
            continue;
        }
        let s = if owner == Seat::One { s1 } else { s2 };
        for (a, act) in tree.actions(ix).iter().enumerate() {
            let p = s.prob(ix, a);
            if !p.is_zero() {
                reach[act.child] = &here * p;
            }
        }
    }
    reach
}

/// Expected payoffs for a pair of compiled behavioral strategies, computed
/// leaves-up.
pub(crate) fn utility_compiled(tree: &GameTree, s1: &Compiled, s2: &Compiled) -> PayoffPair {
    let mut value: Vec<Option<PayoffPair>> = vec![None; tree.len()];
    for ix in (0..tree.len()).rev() {
        let v = match tree.owner(ix) {
            None => tree.payoffs(ix).expect("terminal").clone(),
            Some(owner) => {
                let s = if owner == Seat::One { s1 } else { s2 };
                let mut acc = [Rational::zero(), Rational::zero()];
                for (a, act) in tree.actions(ix).iter().enumerate() {
                    let p = s.prob(ix, a);
                    if p.is_zero() {
                        continue;
                    }
                    let child = value[act.child].as_ref().expect("child evaluated");
                    acc[0] = &acc[0] + p * &child[0];
                    acc[1] = &acc[1] + p * &child[1];
                }
                acc
            }
        };
        value[ix] = Some(v);
    }
    value.swap_remove(tree.root()).expect("root evaluated")
}

/// Terminal reach probabilities under `profile`. Mixed strategies are
/// evaluated by weighting their atoms, not by conversion.
pub fn reach_distribution(tree: &GameTree, profile: &StrategyProfile) -> Result<ReachDistribution> {
    let c1 = components(tree, Seat::One, &profile.seat1)?;
    let c2 = components(tree, Seat::Two, &profile.seat2)?;
    let mut total = vec![Rational::zero(); tree.len()];
    for (w1, s1) in &c1 {
        for (w2, s2) in &c2 {
            let w = w1 * w2;
            if w.is_zero() {
                continue;
            }
            for (acc, r) in total.iter_mut().zip(reach_compiled(tree, s1, s2)) {
                if !r.is_zero() {
                    *acc = &*acc + &w * r;
                }
            }
        }
    }
    Ok(ReachDistribution {
        entries: tree
            .terminals()
            .map(|ix| (tree.id(ix).to_string(), total[ix].clone()))
            .collect(),
    })
}

/// Exact expected payoff pair `(u1, u2)` under `profile`.
pub fn expected_utility(tree: &GameTree, profile: &StrategyProfile) -> Result<PayoffPair> {
    let reach = reach_distribution(tree, profile)?;
    let mut u = [Rational::zero(), Rational::zero()];
    for (id, p) in reach.support() {
        let ix = tree.index_of(id).expect("terminal of tree");
        let pay = tree.payoffs(ix).expect("terminal");
        u[0] = &u[0] + p * &pay[0];
        u[1] = &u[1] + p * &pay[1];
    }
    Ok(u)
}

/// Realization-equivalent behavioral strategy for a mixed strategy.
///
/// At each owned node the probability of an action is the weight of atoms
/// that are consistent with reaching the node and choose that action,
/// divided by the weight of atoms consistent with reaching it. At nodes no
/// atom can reach, the atoms' common action is kept if they agree, and the
/// first action is used otherwise.
pub fn mixed_to_behavioral(tree: &GameTree, mixed: &MixedStrategy) -> Result<BehavioralStrategy> {
    let atoms = compile_mixed(tree, mixed)?;
    let seat = mixed.seat;
    let mut probs = vec![None; tree.len()];
    for ix in tree.owned_nodes(seat) {
        // own moves on the path to ix
        let own_path: Vec<(usize, usize)> = tree
            .path_to(ix)
            .into_iter()
            .filter(|&(n, _)| tree.owner(n) == Some(seat))
            .collect();
        let n_actions = tree.actions(ix).len();
        let mut reach_weight = Rational::zero();
        let mut action_weight = vec![Rational::zero(); n_actions];
        for (choices, w) in &atoms {
            if own_path.iter().all(|&(n, a)| choices[n] == Some(a)) {
                reach_weight = &reach_weight + w;
                let a = choices[ix].expect("atom covers owned node");
                action_weight[a] = &action_weight[a] + w;
            }
        }
        let row: Vec<Rational> = if reach_weight.is_zero() {
            // unanimous atoms keep their action, otherwise the first action
            let first = atoms[0].0[ix].expect("atom covers owned node");
            let pick = if atoms.iter().all(|(c, _)| c[ix] == Some(first)) { first } else { 0 };
            (0..n_actions)
                .map(|a| if a == pick { Rational::one() } else { Rational::zero() })
                .collect()
        } else {
            action_weight.iter().map(|w| w / &reach_weight).collect()
        };
        probs[ix] = Some(row);
    }
    Ok(Compiled { seat, probs }.to_behavioral(tree))
}
