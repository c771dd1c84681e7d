//! Exact-arithmetic toolkit for two-player perfect-information games.
//!
//! The crate covers game trees and strategies ([`tree`], [`strategy`],
//! [`eval`]), equilibrium solvers ([`solvers`]), the increasing-sum centipede
//! family ([`centipede`]), role-swapped contests between a best-responding
//! human and a committed AI ([`contest`]), and an audit harness that checks
//! the quantitative steps of the argument that such an AI cannot be
//! superhuman on long centipedes ([`harness`]).
//!
//! All probabilities and payoffs are [`Rational`]s; no floating point is
//! involved in any comparison.

pub mod centipede;
pub mod contest;
pub mod error;
pub mod eval;
pub mod harness;
pub mod random;
pub mod rational;
pub mod solvers;
pub mod strategy;
pub mod tree;

pub use centipede::{
    below_average_bound, is_long, make_centipede, BoundReport, CentipedeSpec, Comparison,
};
pub use contest::{
    outperformance_verdict, play_contest, stage_games, ContestReport, ContestSpec, HMode, Party,
    SeatMap, Split, StageOutcome, Verdict,
};
pub use error::{Error, Result, StrategyError, TreeError};
pub use eval::{expected_utility, mixed_to_behavioral, reach_distribution, ReachDistribution};
pub use harness::{
    audit_bound_claim, audit_mutual_best_response, audit_spne_claim, lattice, run_audit,
    sweep_outperformance, AuditConfig, AuditReport, BoundAudit, CounterexampleRecord, FilterMode,
    GridBound, MutualBrAudit, MutualBrViolation, PureNashCheck, RecordGroup, RoleEval, SpneAudit,
    StepResult, StepStatus, SweepAudit, DEFAULT_BUDGET,
};
pub use rational::{ParseRationalError, Rational};
pub use solvers::{
    backward_induction, best_response, enumerate_pure_nash, is_nash, is_spne, BestResponseResult,
    NashVerdict, PureNash, SolveResult, SpneVerdict, DEFAULT_PURE_NASH_CAP,
};
pub use strategy::{
    enumerate_pure_strategies, pure_strategy_count, validate_strategy, BehavioralStrategy,
    MixedAtom, MixedStrategy, PureStrategy, Strategy, StrategyProfile,
};
pub use tree::{subgame, validate_tree, GameTree, PayoffPair, RawAction, RawNode, RawTree, Seat};
