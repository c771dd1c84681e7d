//! The increasing-sum centipede family.
//!
//! With `m` (even) decision nodes `d1..dm`, seat 1 moves at odd nodes and
//! seat 2 at even ones. Stopping at seat 1's k-th node pays `(2k, 2k-1)`,
//! stopping at seat 2's k-th node pays `(2k-1, 2k+2)`, and continuing past
//! the last node pays `(m+2, m+1)`. Every node offers `S` then `C`; the stop
//! terminal of `dt` is `tt` and the pass terminal is `t(m+1)`.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::strategy::BehavioralStrategy;
use crate::tree::{validate_tree, GameTree, PayoffPair, RawAction, RawNode, RawTree, Seat};

pub const STOP: &str = "S";
pub const CONTINUE: &str = "C";

/// Shortest length regarded as a long centipede.
pub const LONG_THRESHOLD: u32 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CentipedeSpec {
    m: u32,
}

impl CentipedeSpec {
    pub fn new(m: u32) -> Result<Self> {
        if m < 2 || !m.is_multiple_of(2) {
            return Err(Error::InvalidCentipede(m));
        }
        Ok(CentipedeSpec { m })
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Owner of decision node `t` (1-based).
    pub fn owner(&self, t: u32) -> Seat {
        if t % 2 == 1 {
            Seat::One
        } else {
            Seat::Two
        }
    }

    /// Payoffs for stopping at decision node `t` (1-based).
    pub fn stop_payoff(&self, t: u32) -> PayoffPair {
        assert!((1..=self.m).contains(&t), "node {t} outside 1..={}", self.m);
        let k = t.div_ceil(2) as i64;
        match self.owner(t) {
            Seat::One => [Rational::from(2 * k), Rational::from(2 * k - 1)],
            Seat::Two => [Rational::from(2 * k - 1), Rational::from(2 * k + 2)],
        }
    }

    /// Payoffs when every node continues.
    pub fn pass_payoff(&self) -> PayoffPair {
        let k = (self.m / 2) as i64;
        [Rational::from(2 * k + 2), Rational::from(2 * k + 1)]
    }

    pub fn decision_id(t: u32) -> String {
        format!("d{t}")
    }

    pub fn terminal_id(t: u32) -> String {
        format!("t{t}")
    }

    /// Decision nodes of `seat`, 1-based, in order.
    pub fn nodes_of(&self, seat: Seat) -> impl Iterator<Item = u32> + '_ {
        (1..=self.m).filter(move |&t| self.owner(t) == seat)
    }

    pub fn raw_tree(&self) -> RawTree {
        let mut nodes = BTreeMap::new();
        for t in 1..=self.m {
            let next = if t == self.m {
                Self::terminal_id(self.m + 1)
            } else {
                Self::decision_id(t + 1)
            };
            nodes.insert(
                Self::decision_id(t),
                RawNode::Decision {
                    owner: self.owner(t).number(),
                    actions: vec![
                        RawAction { label: STOP.into(), child: Self::terminal_id(t) },
                        RawAction { label: CONTINUE.into(), child: next },
                    ],
                },
            );
            nodes.insert(
                Self::terminal_id(t),
                RawNode::Terminal { payoffs: self.stop_payoff(t).to_vec() },
            );
        }
        nodes.insert(
            Self::terminal_id(self.m + 1),
            RawNode::Terminal { payoffs: self.pass_payoff().to_vec() },
        );
        RawTree {
            players: 2,
            root: Self::decision_id(1),
            nodes,
        }
    }

    pub fn tree(&self) -> GameTree {
        validate_tree(&self.raw_tree()).expect("centipede construction is well-formed")
    }

    /// Behavioral strategy for `seat` that stops at its i-th node with
    /// probability `stop[i]`.
    pub fn behavioral(&self, seat: Seat, stop: &[Rational]) -> BehavioralStrategy {
        let nodes: Vec<u32> = self.nodes_of(seat).collect();
        assert_eq!(nodes.len(), stop.len(), "one stop probability per node");
        BehavioralStrategy::new(
            seat,
            nodes.into_iter().zip(stop).map(|(t, p)| {
                (
                    Self::decision_id(t),
                    vec![(STOP, p.clone()), (CONTINUE, Rational::one() - p)],
                )
            }),
        )
    }

    /// Seat's strategy that always stops (`p = 1`) or always continues (`p = 0`).
    pub fn constant(&self, seat: Seat, stop: Rational) -> BehavioralStrategy {
        let n = (self.m / 2) as usize;
        self.behavioral(seat, &vec![stop; n])
    }
}

pub fn make_centipede(m: u32) -> Result<GameTree> {
    Ok(CentipedeSpec::new(m)?.tree())
}

pub fn is_long(m: u32) -> Result<bool> {
    Ok(CentipedeSpec::new(m)?.m() >= LONG_THRESHOLD)
}

/// Three-way comparison of a value with a benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    Below,
    Equal,
    Above,
}

impl Comparison {
    pub fn of(value: &Rational, benchmark: &Rational) -> Self {
        match value.cmp(benchmark) {
            Ordering::Less => Comparison::Below,
            Ordering::Equal => Comparison::Equal,
            Ordering::Greater => Comparison::Above,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub m: u32,
    pub p_stop: Rational,
    /// `2p + (m+2)(1-p)`.
    pub bound: Rational,
    /// `m/2`.
    pub benchmark: Rational,
    pub verdict: Comparison,
}

/// Best-case expected payoff of a seat-1 strategy that stops at the root
/// with probability `p_stop`, compared with the `m/2` benchmark.
pub fn below_average_bound(m: u32, p_stop: &Rational) -> Result<BoundReport> {
    let spec = CentipedeSpec::new(m)?;
    if !p_stop.is_probability() {
        return Err(Error::ProbabilityOutOfRange(p_stop.clone()));
    }
    let m_r = Rational::from(spec.m());
    let bound = Rational::from(2) * p_stop + (&m_r + Rational::from(2)) * (Rational::one() - p_stop);
    let benchmark = m_r / Rational::from(2);
    Ok(BoundReport {
        m,
        p_stop: p_stop.clone(),
        verdict: Comparison::of(&bound, &benchmark),
        bound,
        benchmark,
    })
}
