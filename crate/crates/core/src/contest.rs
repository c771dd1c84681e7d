//! Role-swapped repeated contests between a best-responding human `H` and a
//! committed AI strategy.
//!
//! A stage consists of two plays of the same tree: `G1`, where H holds seat
//! 1, and `G2`, where the AI holds seat 1. The AI commits to one behavioral
//! strategy per role before H responds, and strategies are stationary across
//! repetitions, so cumulative payoffs are `k` times the stage payoffs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::utility_compiled;
use crate::rational::Rational;
use crate::solvers::best_response_compiled;
use crate::strategy::{
    choices_to_pure, compile_behavioral, BehavioralStrategy, Compiled, Strategy,
};
use crate::error::StrategyError;
use crate::tree::{GameTree, PayoffPair, Seat};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Party {
    H,
    Ai,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeatMap {
    pub seat1: Party,
    pub seat2: Party,
}

impl SeatMap {
    pub fn seat_of(&self, party: Party) -> Seat {
        if self.seat1 == party {
            Seat::One
        } else {
            Seat::Two
        }
    }
}

/// Seat assignments for `(G1, G2)`. Both stage games are played on `tree`
/// unchanged.
pub fn stage_games(_tree: &GameTree) -> (SeatMap, SeatMap) {
    (
        SeatMap { seat1: Party::H, seat2: Party::Ai },
        SeatMap { seat1: Party::Ai, seat2: Party::H },
    )
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum HMode {
    BestResponse,
    Explicit {
        as_seat1: BehavioralStrategy,
        as_seat2: BehavioralStrategy,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContestSpec {
    pub game: GameTree,
    /// AI's strategy in G2, where it moves first.
    pub ai_as_seat1: BehavioralStrategy,
    /// AI's strategy in G1, where H moves first.
    pub ai_as_seat2: BehavioralStrategy,
    pub h_mode: HMode,
    pub k: u64,
}

/// A payoff pair labelled by party.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub h: Rational,
    pub ai: Rational,
}

impl Split {
    pub fn from_pair(pair: &PayoffPair, seats: SeatMap) -> Split {
        Split {
            h: pair[seats.seat_of(Party::H).index()].clone(),
            ai: pair[seats.seat_of(Party::Ai).index()].clone(),
        }
    }

    /// `h - ai`.
    pub fn margin(&self) -> Rational {
        &self.h - &self.ai
    }

    pub fn scale(&self, k: u64) -> Split {
        let k = Rational::from(k);
        Split { h: &self.h * &k, ai: &self.ai * &k }
    }

    pub fn verdict(&self) -> Verdict {
        match self.h.cmp(&self.ai) {
            std::cmp::Ordering::Greater => Verdict::HOutperforms,
            std::cmp::Ordering::Less => Verdict::AiOutperforms,
            std::cmp::Ordering::Equal => Verdict::Neither,
        }
    }
}

impl std::ops::Add for &Split {
    type Output = Split;
    fn add(self, rhs: &Split) -> Split {
        Split { h: &self.h + &rhs.h, ai: &self.ai + &rhs.ai }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    HOutperforms,
    AiOutperforms,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageOutcome {
    pub seats: SeatMap,
    /// The strategy H used: its best response, or the explicit strategy.
    pub h_strategy: Strategy,
    pub payoffs: Split,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContestReport {
    pub k: u64,
    pub g1: StageOutcome,
    pub g2: StageOutcome,
    pub stage_totals: Split,
    pub totals: Split,
    pub verdict: Verdict,
}

/// One stage game with H best-responding to a compiled AI strategy. Returns
/// H's choices and the payoff pair by seat.
pub(crate) fn best_response_stage(
    tree: &GameTree,
    seats: SeatMap,
    ai: &Compiled,
) -> (Vec<Option<usize>>, PayoffPair) {
    let (choices, pair, _) = best_response_compiled(tree, seats.seat_of(Party::H), ai);
    (choices, pair)
}

fn play_stage(
    tree: &GameTree,
    seats: SeatMap,
    ai: &BehavioralStrategy,
    h: Option<&BehavioralStrategy>,
) -> Result<StageOutcome> {
    let ai_seat = seats.seat_of(Party::Ai);
    let h_seat = seats.seat_of(Party::H);
    if ai.seat != ai_seat {
        return Err(StrategyError::SeatMismatch { expected: ai_seat, found: ai.seat }.into());
    }
    let ai_c = compile_behavioral(tree, ai)?;
    let (h_strategy, pair) = match h {
        None => {
            let (choices, pair) = best_response_stage(tree, seats, &ai_c);
            (Strategy::Pure(choices_to_pure(tree, h_seat, &choices)), pair)
        }
        Some(h) => {
            if h.seat != h_seat {
                return Err(StrategyError::SeatMismatch { expected: h_seat, found: h.seat }.into());
            }
            let h_c = compile_behavioral(tree, h)?;
            let pair = match h_seat {
                Seat::One => utility_compiled(tree, &h_c, &ai_c),
                Seat::Two => utility_compiled(tree, &ai_c, &h_c),
            };
            (Strategy::Behavioral(h.clone()), pair)
        }
    };
    Ok(StageOutcome {
        seats,
        h_strategy,
        payoffs: Split::from_pair(&pair, seats),
    })
}

/// Evaluates both stage games exactly and scales by the repetition count.
pub fn play_contest(spec: &ContestSpec) -> Result<ContestReport> {
    if spec.k == 0 {
        return Err(Error::ZeroRepetitions);
    }
    let (s1, s2) = stage_games(&spec.game);
    let (h1, h2) = match &spec.h_mode {
        HMode::BestResponse => (None, None),
        HMode::Explicit { as_seat1, as_seat2 } => (Some(as_seat1), Some(as_seat2)),
    };
    let g1 = play_stage(&spec.game, s1, &spec.ai_as_seat2, h1)?;
    let g2 = play_stage(&spec.game, s2, &spec.ai_as_seat1, h2)?;
    let stage_totals = &g1.payoffs + &g2.payoffs;
    let totals = stage_totals.scale(spec.k);
    Ok(ContestReport {
        k: spec.k,
        verdict: totals.verdict(),
        g1,
        g2,
        stage_totals,
        totals,
    })
}

/// Strict comparison of cumulative payoffs; equal totals favour neither.
pub fn outperformance_verdict(report: &ContestReport) -> Verdict {
    report.totals.verdict()
}
