//! Backward induction, best responses and equilibrium checks.
//!
//! Ties are broken by the first action in declared order everywhere, and
//! every solver reports whether it had to break one.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{expected_utility, mixed_to_behavioral, utility_compiled};
use crate::rational::Rational;
use crate::strategy::{
    choices_to_pure, compile_behavioral, compile_pure, enumerate_choice_vectors, one_hot,
    pure_strategy_count, BehavioralStrategy, Compiled, PureStrategy, Strategy, StrategyProfile,
};
use crate::error::StrategyError;
use crate::tree::{subgame, GameTree, PayoffPair, Seat};

/// Default cap on the number of pure profiles [`enumerate_pure_nash`] visits.
pub const DEFAULT_PURE_NASH_CAP: u128 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub seat1: PureStrategy,
    pub seat2: PureStrategy,
    pub payoffs: PayoffPair,
    /// False when some decision node had two actions with equal value for
    /// its owner.
    pub unique: bool,
}

impl SolveResult {
    pub fn profile(&self) -> StrategyProfile {
        StrategyProfile::new(self.seat1.clone(), self.seat2.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BestResponseResult {
    pub seat: Seat,
    pub response: PureStrategy,
    pub value: Rational,
    /// Decision nodes of the responder where the maximum was attained by
    /// more than one action.
    pub ties: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Deviation {
    pub seat: Seat,
    pub strategy: PureStrategy,
    pub gain: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NashVerdict {
    pub is_nash: bool,
    pub payoffs: PayoffPair,
    /// Best-response value of each seat against the other's strategy.
    pub best_values: PayoffPair,
    pub max_gain: Rational,
    pub witness: Option<Deviation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpneVerdict {
    pub is_spne: bool,
    /// Deepest decision node whose subgame is not in equilibrium.
    pub witness: Option<String>,
    /// Every failing subgame root, deepest first.
    pub failing: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PureNash {
    pub seat1: PureStrategy,
    pub seat2: PureStrategy,
    pub payoffs: PayoffPair,
}

/// Leaves-up solve; each owner picks the first action maximizing its own
/// continuation payoff.
pub fn backward_induction(tree: &GameTree) -> SolveResult {
    let mut value: Vec<Option<PayoffPair>> = vec![None; tree.len()];
    let mut choice = vec![None; tree.len()];
    let mut unique = true;
    for ix in (0..tree.len()).rev() {
        let v = match tree.owner(ix) {
            None => tree.payoffs(ix).expect("terminal").clone(),
            Some(owner) => {
                let i = owner.index();
                let mut best = 0;
                let mut tie = false;
                for (a, act) in tree.actions(ix).iter().enumerate().skip(1) {
                    let cand = &value[act.child].as_ref().expect("child solved")[i];
                    let incumbent =
                        &value[tree.actions(ix)[best].child].as_ref().expect("child solved")[i];
                    match cand.cmp(incumbent) {
                        std::cmp::Ordering::Greater => {
                            best = a;
                            tie = false;
                        }
                        std::cmp::Ordering::Equal => tie = true,
                        std::cmp::Ordering::Less => {}
                    }
                }
                unique &= !tie;
                choice[ix] = Some(best);
                value[tree.actions(ix)[best].child].clone().expect("child solved")
            }
        };
        value[ix] = Some(v);
    }
    let split = |seat: Seat| -> Vec<Option<usize>> {
        choice
            .iter()
            .enumerate()
            .map(|(ix, c)| if tree.owner(ix) == Some(seat) { *c } else { None })
            .collect()
    };
    SolveResult {
        seat1: choices_to_pure(tree, Seat::One, &split(Seat::One)),
        seat2: choices_to_pure(tree, Seat::Two, &split(Seat::Two)),
        payoffs: value[tree.root()].clone().expect("root solved"),
        unique,
    }
}

/// Pure best response of `seat` against a fixed compiled opponent: the
/// chosen actions, the payoff pair it yields, and the number of tied nodes.
pub(crate) fn best_response_compiled(
    tree: &GameTree,
    seat: Seat,
    opponent: &Compiled,
) -> (Vec<Option<usize>>, PayoffPair, usize) {
    let i = seat.index();
    let mut value: Vec<Option<PayoffPair>> = vec![None; tree.len()];
    let mut choice = vec![None; tree.len()];
    let mut ties = 0;
    for ix in (0..tree.len()).rev() {
        let v = match tree.owner(ix) {
            None => tree.payoffs(ix).expect("terminal").clone(),
            Some(owner) if owner == seat => {
                let actions = tree.actions(ix);
                let mut best = 0;
                let mut tie = false;
                for a in 1..actions.len() {
                    let cand = &value[actions[a].child].as_ref().expect("child")[i];
                    let incumbent = &value[actions[best].child].as_ref().expect("child")[i];
                    match cand.cmp(incumbent) {
                        std::cmp::Ordering::Greater => {
                            best = a;
                            tie = false;
                        }
                        std::cmp::Ordering::Equal => tie = true,
                        std::cmp::Ordering::Less => {}
                    }
                }
                ties += tie as usize;
                choice[ix] = Some(best);
                value[actions[best].child].clone().expect("child")
            }
            Some(_) => {
                let mut acc = [Rational::zero(), Rational::zero()];
                for (a, act) in tree.actions(ix).iter().enumerate() {
                    let p = opponent.prob(ix, a);
                    if p.is_zero() {
                        continue;
                    }
                    let child = value[act.child].as_ref().expect("child");
                    acc[0] = &acc[0] + p * &child[0];
                    acc[1] = &acc[1] + p * &child[1];
                }
                acc
            }
        };
        value[ix] = Some(v);
    }
    (choice, value[tree.root()].clone().expect("root"), ties)
}

/// Pure strategy of `seat` maximizing its expected payoff against
/// `opponent`, by dynamic programming over the tree.
pub fn best_response(
    tree: &GameTree,
    seat: Seat,
    opponent: &BehavioralStrategy,
) -> Result<BestResponseResult> {
    if opponent.seat != seat.other() {
        return Err(StrategyError::SeatMismatch {
            expected: seat.other(),
            found: opponent.seat,
        }
        .into());
    }
    let opp = compile_behavioral(tree, opponent)?;
    let (choices, pair, ties) = best_response_compiled(tree, seat, &opp);
    Ok(BestResponseResult {
        seat,
        response: choices_to_pure(tree, seat, &choices),
        value: pair[seat.index()].clone(),
        ties,
    })
}

/// Behavioral view of any strategy: pure and behavioral directly, mixed via
/// realization-equivalent conversion.
pub(crate) fn compile_as_behavioral(tree: &GameTree, seat: Seat, s: &Strategy) -> Result<Compiled> {
    if s.seat() != seat {
        return Err(StrategyError::SeatMismatch { expected: seat, found: s.seat() }.into());
    }
    Ok(match s {
        Strategy::Pure(p) => compile_pure(tree, p)?,
        Strategy::Behavioral(b) => compile_behavioral(tree, b)?,
        Strategy::Mixed(m) => compile_behavioral(tree, &mixed_to_behavioral(tree, m)?)?,
    })
}

/// Compares each seat's payoff under `profile` with its best-response value.
pub fn is_nash(tree: &GameTree, profile: &StrategyProfile) -> Result<NashVerdict> {
    let payoffs = expected_utility(tree, profile)?;
    let mut best_values = [Rational::zero(), Rational::zero()];
    let mut witness: Option<Deviation> = None;
    for seat in Seat::BOTH {
        let opp = compile_as_behavioral(tree, seat.other(), profile.get(seat.other()))?;
        let (choices, pair, _) = best_response_compiled(tree, seat, &opp);
        let value = pair[seat.index()].clone();
        let gain = &value - &payoffs[seat.index()];
        if gain > Rational::zero() && witness.as_ref().is_none_or(|w| gain > w.gain) {
            witness = Some(Deviation {
                seat,
                strategy: choices_to_pure(tree, seat, &choices),
                gain,
            });
        }
        best_values[seat.index()] = value;
    }
    Ok(NashVerdict {
        is_nash: witness.is_none(),
        max_gain: witness.as_ref().map_or_else(Rational::zero, |w| w.gain.clone()),
        payoffs,
        best_values,
        witness,
    })
}

fn restrict(tree: &GameTree, full: &GameTree, seat: Seat, s: &Strategy) -> Result<Strategy> {
    Ok(match s {
        Strategy::Pure(p) => Strategy::Pure(p.restrict(tree)),
        Strategy::Behavioral(b) => Strategy::Behavioral(b.restrict(tree)),
        Strategy::Mixed(m) => {
            if m.seat != seat {
                return Err(StrategyError::SeatMismatch { expected: seat, found: m.seat }.into());
            }
            Strategy::Behavioral(mixed_to_behavioral(full, m)?.restrict(tree))
        }
    })
}

/// Checks the Nash condition in the subgame below every decision node.
pub fn is_spne(tree: &GameTree, profile: &StrategyProfile) -> Result<SpneVerdict> {
    // surfaces domain errors against the full tree first
    is_nash(tree, profile)?;
    let nodes: Vec<usize> = tree.decision_nodes().collect();
    let mut failing = Vec::new();
    for &ix in nodes.iter().rev() {
        let id = tree.id(ix);
        let sub = subgame(tree, id)?;
        let restricted = StrategyProfile {
            seat1: restrict(&sub, tree, Seat::One, &profile.seat1)?,
            seat2: restrict(&sub, tree, Seat::Two, &profile.seat2)?,
        };
        if !is_nash(&sub, &restricted)?.is_nash {
            failing.push(id.to_string());
        }
    }
    Ok(SpneVerdict {
        is_spne: failing.is_empty(),
        witness: failing.first().cloned(),
        failing,
    })
}

/// Every pure Nash equilibrium, in enumeration order (seat 1 strategies
/// varying slowest).
pub fn enumerate_pure_nash(tree: &GameTree, cap: u128) -> Result<Vec<PureNash>> {
    let needed = pure_strategy_count(tree, Seat::One).saturating_mul(pure_strategy_count(tree, Seat::Two));
    if needed > cap {
        return Err(Error::BudgetExceeded { what: "pure Nash enumeration", needed, budget: cap });
    }
    let s1: Vec<Compiled> = enumerate_choice_vectors(tree, Seat::One)
        .iter()
        .map(|c| one_hot(tree, Seat::One, c))
        .collect();
    let s2: Vec<Compiled> = enumerate_choice_vectors(tree, Seat::Two)
        .iter()
        .map(|c| one_hot(tree, Seat::Two, c))
        .collect();
    // Best-response values depend only on the opponent, so compute them once.
    let br1: Vec<Rational> = s2
        .par_iter()
        .map(|o| best_response_compiled(tree, Seat::One, o).1[0].clone())
        .collect();
    let br2: Vec<Rational> = s1
        .par_iter()
        .map(|o| best_response_compiled(tree, Seat::Two, o).1[1].clone())
        .collect();
    let found: Vec<(usize, usize, PayoffPair)> = (0..s1.len() * s2.len())
        .into_par_iter()
        .filter_map(|k| {
            let (i, j) = (k / s2.len(), k % s2.len());
            let u = utility_compiled(tree, &s1[i], &s2[j]);
            (u[0] == br1[j] && u[1] == br2[i]).then_some((i, j, u))
        })
        .collect();
    let to_pure = |c: &Compiled| {
        let choices: Vec<Option<usize>> = c
            .probs
            .iter()
            .map(|row| row.as_ref().map(|r| r.iter().position(|p| p.is_one()).expect("one-hot")))
            .collect();
        choices_to_pure(tree, c.seat, &choices)
    };
    Ok(found
        .into_iter()
        .map(|(i, j, payoffs)| PureNash {
            seat1: to_pure(&s1[i]),
            seat2: to_pure(&s2[j]),
            payoffs,
        })
        .collect())
}
