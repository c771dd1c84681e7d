use thiserror::Error;

use crate::rational::Rational;
use crate::tree::Seat;

/// Structural problems found while validating a tree description.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("tree has no nodes")]
    Empty,
    #[error("games must have exactly 2 players, found {0}")]
    PlayerCount(u32),
    #[error("root {0:?} is not a node of the tree")]
    UnknownRoot(String),
    #[error("node {node:?} has action leading to unknown node {child:?}")]
    UnknownChild { node: String, child: String },
    #[error("node {node:?} has owner {owner}; owners must be 1 or 2")]
    InvalidOwner { node: String, owner: u8 },
    #[error("decision node {0:?} has no actions")]
    NoActions(String),
    #[error("decision node {node:?} repeats action label {label:?}")]
    DuplicateLabel { node: String, label: String },
    #[error("terminal node {node:?} carries {found} payoffs, expected 2")]
    PayoffCount { node: String, found: usize },
    #[error("cycle detected through node {0:?}")]
    Cycle(String),
    #[error("node {0:?} has more than one parent")]
    MultipleParents(String),
    #[error("node {0:?} has no parent and is not the root")]
    Orphan(String),
    #[error("node {0:?} is not reachable from the root")]
    Unreachable(String),
}

/// A strategy that does not fit the tree it is evaluated on.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StrategyError {
    #[error("expected a strategy for seat {expected}, found seat {found}")]
    SeatMismatch { expected: Seat, found: Seat },
    #[error("strategy has no entry for decision node {0:?}")]
    MissingNode(String),
    #[error("strategy has an entry for {0:?}, which is not a decision node of its seat")]
    ExtraNode(String),
    #[error("action {label:?} does not exist at node {node:?}")]
    UnknownAction { node: String, label: String },
    #[error("negative probability {value} for action {label:?} at node {node:?}")]
    NegativeProbability { node: String, label: String, value: Rational },
    #[error("probabilities at node {node:?} sum to {sum}, expected 1")]
    NotNormalized { node: String, sum: Rational },
    #[error("mixed strategy weights must be non-negative, found {0}")]
    NegativeWeight(Rational),
    #[error("mixed strategy weights sum to {0}, expected 1")]
    WeightSum(Rational),
    #[error("mixed strategy has no atoms")]
    EmptyMixture,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("node {0:?} is terminal")]
    TerminalNode(String),
    #[error("seat must be 1 or 2, found {0}")]
    InvalidSeat(u32),
    #[error("centipede length must be even and at least 2, found {0}")]
    InvalidCentipede(u32),
    #[error("probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(Rational),
    #[error("repetition count must be at least 1")]
    ZeroRepetitions,
    #[error("invalid audit configuration: {0}")]
    InvalidConfig(String),
    #[error("{what} needs {needed} evaluations, over the budget of {budget}")]
    BudgetExceeded { what: &'static str, needed: u128, budget: u128 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
