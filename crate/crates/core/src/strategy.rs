//! Pure, behavioral and mixed strategies, keyed by node id.
//!
//! Strategies are plain data so they can be read from files before a tree is
//! known; every operation that evaluates one first compiles it against the
//! tree, which is where domain errors surface.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, StrategyError};
use crate::rational::Rational;
use crate::tree::{GameTree, Seat};

/// One action label per decision node of `seat`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PureStrategy {
    pub seat: Seat,
    pub choices: BTreeMap<String, String>,
}

/// A distribution over actions at every decision node of `seat`.
/// Labels absent from a node's map have probability zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BehavioralStrategy {
    pub seat: Seat,
    pub probabilities: BTreeMap<String, BTreeMap<String, Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixedAtom {
    pub strategy: BTreeMap<String, String>,
    pub weight: Rational,
}

/// A finite distribution over pure strategies of one seat.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixedStrategy {
    pub seat: Seat,
    pub atoms: Vec<MixedAtom>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Strategy {
    Pure(PureStrategy),
    Behavioral(BehavioralStrategy),
    Mixed(MixedStrategy),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyProfile {
    pub seat1: Strategy,
    pub seat2: Strategy,
}

impl PureStrategy {
    pub fn new(seat: Seat, choices: impl IntoIterator<Item = (impl Into<String>, impl Into<String>)>) -> Self {
        PureStrategy {
            seat,
            choices: choices.into_iter().map(|(n, a)| (n.into(), a.into())).collect(),
        }
    }

    /// The deterministic behavioral strategy playing these choices.
    pub fn to_behavioral(&self) -> BehavioralStrategy {
        BehavioralStrategy {
            seat: self.seat,
            probabilities: self
                .choices
                .iter()
                .map(|(n, a)| (n.clone(), BTreeMap::from([(a.clone(), Rational::one())])))
                .collect(),
        }
    }

    pub fn restrict(&self, tree: &GameTree) -> PureStrategy {
        PureStrategy {
            seat: self.seat,
            choices: self
                .choices
                .iter()
                .filter(|(n, _)| tree.index_of(n).is_some())
                .map(|(n, a)| (n.clone(), a.clone()))
                .collect(),
        }
    }
}

impl BehavioralStrategy {
    pub fn new<N: Into<String>, L: Into<String>>(
        seat: Seat,
        probabilities: impl IntoIterator<Item = (N, Vec<(L, Rational)>)>,
    ) -> Self {
        BehavioralStrategy {
            seat,
            probabilities: probabilities
                .into_iter()
                .map(|(n, dist)| {
                    (n.into(), dist.into_iter().map(|(l, p)| (l.into(), p)).collect())
                })
                .collect(),
        }
    }

    /// Probability of `label` at `node`; zero when either is absent.
    pub fn prob(&self, node: &str, label: &str) -> Rational {
        self.probabilities
            .get(node)
            .and_then(|d| d.get(label))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn restrict(&self, tree: &GameTree) -> BehavioralStrategy {
        BehavioralStrategy {
            seat: self.seat,
            probabilities: self
                .probabilities
                .iter()
                .filter(|(n, _)| tree.index_of(n).is_some())
                .map(|(n, d)| (n.clone(), d.clone()))
                .collect(),
        }
    }
}

impl MixedStrategy {
    pub fn atom(&self, i: usize) -> PureStrategy {
        PureStrategy {
            seat: self.seat,
            choices: self.atoms[i].strategy.clone(),
        }
    }
}

impl Strategy {
    pub fn seat(&self) -> Seat {
        match self {
            Strategy::Pure(s) => s.seat,
            Strategy::Behavioral(s) => s.seat,
            Strategy::Mixed(s) => s.seat,
        }
    }
}

impl From<PureStrategy> for Strategy {
    fn from(s: PureStrategy) -> Self {
        Strategy::Pure(s)
    }
}

impl From<BehavioralStrategy> for Strategy {
    fn from(s: BehavioralStrategy) -> Self {
        Strategy::Behavioral(s)
    }
}

impl From<MixedStrategy> for Strategy {
    fn from(s: MixedStrategy) -> Self {
        Strategy::Mixed(s)
    }
}

impl StrategyProfile {
    pub fn new(seat1: impl Into<Strategy>, seat2: impl Into<Strategy>) -> Self {
        StrategyProfile {
            seat1: seat1.into(),
            seat2: seat2.into(),
        }
    }

    pub fn get(&self, seat: Seat) -> &Strategy {
        match seat {
            Seat::One => &self.seat1,
            Seat::Two => &self.seat2,
        }
    }
}

/// A strategy resolved against a tree: for every node, the probability of
/// each action in declared order (`None` off the seat's decision nodes).
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Compiled {
    pub seat: Seat,
    pub probs: Vec<Option<Vec<Rational>>>,
}

impl Compiled {
    pub fn prob(&self, node: usize, action: usize) -> &Rational {
        &self.probs[node].as_ref().expect("compiled node")[action]
    }

    /// Back to the id-keyed form, listing every action including zeros.
    pub fn to_behavioral(&self, tree: &GameTree) -> BehavioralStrategy {
        let mut probabilities = BTreeMap::new();
        for (ix, dist) in self.probs.iter().enumerate() {
            if let Some(dist) = dist {
                let entry = tree
                    .actions(ix)
                    .iter()
                    .zip(dist)
                    .map(|(a, p)| (a.label.clone(), p.clone()))
                    .collect();
                probabilities.insert(tree.id(ix).to_string(), entry);
            }
        }
        BehavioralStrategy {
            seat: self.seat,
            probabilities,
        }
    }
}

fn check_seat(expected: Seat, found: Seat) -> Result<(), StrategyError> {
    if expected != found {
        return Err(StrategyError::SeatMismatch { expected, found });
    }
    Ok(())
}

fn check_domain<'a, V>(
    tree: &GameTree,
    seat: Seat,
    entries: impl Iterator<Item = (&'a String, V)>,
) -> Result<(), StrategyError> {
    for (node, _) in entries {
        match tree.index_of(node) {
            Some(ix) if tree.owner(ix) == Some(seat) => {}
            _ => return Err(StrategyError::ExtraNode(node.clone())),
        }
    }
    Ok(())
}

/// Resolves a pure choice map to action indices per node.
pub(crate) fn compile_choices(
    tree: &GameTree,
    seat: Seat,
    choices: &BTreeMap<String, String>,
) -> Result<Vec<Option<usize>>, StrategyError> {
    check_domain(tree, seat, choices.iter())?;
    let mut out = vec![None; tree.len()];
    for ix in tree.owned_nodes(seat) {
        let id = tree.id(ix);
        let label = choices
            .get(id)
            .ok_or_else(|| StrategyError::MissingNode(id.to_string()))?;
        let a = tree
            .actions(ix)
            .iter()
            .position(|a| &a.label == label)
            .ok_or_else(|| StrategyError::UnknownAction {
                node: id.to_string(),
                label: label.clone(),
            })?;
        out[ix] = Some(a);
    }
    Ok(out)
}

pub(crate) fn compile_pure(tree: &GameTree, s: &PureStrategy) -> Result<Compiled, StrategyError> {
    let choices = compile_choices(tree, s.seat, &s.choices)?;
    Ok(one_hot(tree, s.seat, &choices))
}

pub(crate) fn one_hot(tree: &GameTree, seat: Seat, choices: &[Option<usize>]) -> Compiled {
    let probs = choices
        .iter()
        .enumerate()
        .map(|(ix, c)| {
            c.map(|a| {
                (0..tree.actions(ix).len())
                    .map(|i| if i == a { Rational::one() } else { Rational::zero() })
                    .collect()
            })
        })
        .collect();
    Compiled { seat, probs }
}

pub(crate) fn compile_behavioral(
    tree: &GameTree,
    s: &BehavioralStrategy,
) -> Result<Compiled, StrategyError> {
    check_domain(tree, s.seat, s.probabilities.iter())?;
    let mut probs = vec![None; tree.len()];
    for ix in tree.owned_nodes(s.seat) {
        let id = tree.id(ix);
        let dist = s
            .probabilities
            .get(id)
            .ok_or_else(|| StrategyError::MissingNode(id.to_string()))?;
        let actions = tree.actions(ix);
        for (label, p) in dist {
            if !actions.iter().any(|a| &a.label == label) {
                return Err(StrategyError::UnknownAction {
                    node: id.to_string(),
                    label: label.clone(),
                });
            }
            if p.is_negative() {
                return Err(StrategyError::NegativeProbability {
                    node: id.to_string(),
                    label: label.clone(),
                    value: p.clone(),
                });
            }
        }
        let row: Vec<Rational> = actions
            .iter()
            .map(|a| dist.get(&a.label).cloned().unwrap_or_else(Rational::zero))
            .collect();
        let sum: Rational = row.iter().sum();
        if !sum.is_one() {
            return Err(StrategyError::NotNormalized { node: id.to_string(), sum });
        }
        probs[ix] = Some(row);
    }
    Ok(Compiled { seat: s.seat, probs })
}

/// A pure strategy as per-node action indices, paired with its weight.
pub(crate) type WeightedChoices = (Vec<Option<usize>>, Rational);

/// Mixed strategy atoms resolved to action indices, with validated weights.
pub(crate) fn compile_mixed(
    tree: &GameTree,
    s: &MixedStrategy,
) -> Result<Vec<WeightedChoices>, StrategyError> {
    if s.atoms.is_empty() {
        return Err(StrategyError::EmptyMixture);
    }
    let mut total = Rational::zero();
    let mut out = Vec::with_capacity(s.atoms.len());
    for atom in &s.atoms {
        if atom.weight.is_negative() {
            return Err(StrategyError::NegativeWeight(atom.weight.clone()));
        }
        total = total + &atom.weight;
        out.push((compile_choices(tree, s.seat, &atom.strategy)?, atom.weight.clone()));
    }
    if !total.is_one() {
        return Err(StrategyError::WeightSum(total));
    }
    Ok(out)
}

/// Resolves any strategy to a weighted list of compiled components whose
/// mixture is the strategy. Pure and behavioral strategies yield one
/// component of weight 1.
pub(crate) fn components(
    tree: &GameTree,
    expected: Seat,
    s: &Strategy,
) -> Result<Vec<(Rational, Compiled)>, StrategyError> {
    check_seat(expected, s.seat())?;
    Ok(match s {
        Strategy::Pure(p) => vec![(Rational::one(), compile_pure(tree, p)?)],
        Strategy::Behavioral(b) => vec![(Rational::one(), compile_behavioral(tree, b)?)],
        Strategy::Mixed(m) => compile_mixed(tree, m)?
            .into_iter()
            .map(|(choices, w)| (w, one_hot(tree, m.seat, &choices)))
            .collect(),
    })
}

/// Every pure strategy of `seat`: the Cartesian product of the action sets
/// at its decision nodes, earlier nodes varying slowest and actions in
/// declared order.
pub fn enumerate_pure_strategies(tree: &GameTree, seat: Seat) -> Vec<PureStrategy> {
    enumerate_choice_vectors(tree, seat)
        .into_iter()
        .map(|choices| choices_to_pure(tree, seat, &choices))
        .collect()
}

pub(crate) fn enumerate_choice_vectors(tree: &GameTree, seat: Seat) -> Vec<Vec<Option<usize>>> {
    let owned = tree.owned_nodes(seat);
    let mut out = vec![vec![None; tree.len()]];
    for &ix in &owned {
        let n = tree.actions(ix).len();
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..n).map(move |a| {
                    let mut c = prefix.clone();
                    c[ix] = Some(a);
                    c
                })
            })
            .collect();
    }
    out
}

/// Number of pure strategies of `seat`, without materializing them.
pub fn pure_strategy_count(tree: &GameTree, seat: Seat) -> u128 {
    tree.owned_nodes(seat)
        .iter()
        .map(|&ix| tree.actions(ix).len() as u128)
        .fold(1u128, |acc, n| acc.saturating_mul(n))
}

pub(crate) fn choices_to_pure(tree: &GameTree, seat: Seat, choices: &[Option<usize>]) -> PureStrategy {
    PureStrategy {
        seat,
        choices: choices
            .iter()
            .enumerate()
            .filter_map(|(ix, c)| c.map(|a| (tree.id(ix).to_string(), tree.actions(ix)[a].label.clone())))
            .collect(),
    }
}

/// Checks `s` against `tree` without evaluating it.
pub fn validate_strategy(tree: &GameTree, s: &Strategy) -> Result<()> {
    components(tree, s.seat(), s).map(|_| ()).map_err(Error::from)
}
