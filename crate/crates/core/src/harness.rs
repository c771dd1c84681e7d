//! Executable audit of the centipede impossibility argument.
//!
//! Four checks, each reporting the exact values it compares:
//!
//! * `spne_claim`: backward induction stops at every node, the root payoff
//!   is the root-stop payoff, no ties occur, and every pure Nash equilibrium
//!   ends at the root.
//! * `bound_claim`: the best-case payoff `2p + (m+2)(1-p)` of a seat-1
//!   strategy stopping at the root with probability `p` falls as `p` grows,
//!   and at the reference probability it sits below `m/2`.
//! * `mutual_best_response`: among behavioral profiles on a probability
//!   lattice, every pair of mutual best responses stops at the root.
//! * `outperformance_sweep`: for every pair of lattice AI strategies that
//!   survives the below-average filter, H best-responds in both stage games
//!   and any pair where H fails to strictly outperform is recorded.
//!
//! The sweep exploits that G1 depends only on the AI's seat-2 strategy and
//! G2 only on its seat-1 strategy: each role strategy is evaluated once and
//! a pair's margin is the sum of its two stage margins. Records are stored
//! as index pairs into those two tables and materialized on demand.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::centipede::{below_average_bound, BoundReport, CentipedeSpec, Comparison};
use crate::contest::{best_response_stage, stage_games, Party, SeatMap, Split};
use crate::error::{Error, Result};
use crate::eval::{reach_compiled, utility_compiled};
use crate::rational::Rational;
use crate::solvers::{backward_induction, best_response_compiled, enumerate_pure_nash};
use crate::strategy::{choices_to_pure, compile_behavioral, BehavioralStrategy, Compiled, PureStrategy};
use crate::tree::{GameTree, PayoffPair, Seat};

pub const DEFAULT_BUDGET: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FilterMode {
    /// AI's seat-1 strategy continues at the root with probability at least `c_min`.
    RootOnly,
    /// Root-only, and the AI earns at least `m/2` against H in each stage game.
    RootBenchmark,
}

impl std::fmt::Display for FilterMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FilterMode::RootOnly => "root-only",
            FilterMode::RootBenchmark => "root-benchmark",
        })
    }
}

impl std::str::FromStr for FilterMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "root-only" => Ok(FilterMode::RootOnly),
            "root-benchmark" | "root+benchmark" => Ok(FilterMode::RootBenchmark),
            _ => Err(format!("unknown filter {s:?}; expected root-only or root-benchmark")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditConfig {
    pub m: u32,
    /// Lattice spacing for node probabilities; `1/grid` must be an integer.
    pub grid: Rational,
    /// Minimum root-continue probability of the AI's seat-1 strategy.
    pub c_min: Rational,
    pub filter: FilterMode,
    /// Cap on profile evaluations per enumerating step.
    pub budget: u64,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            m: 10,
            grid: Rational::new(1, 4),
            c_min: Rational::new(1, 4),
            filter: FilterMode::RootOnly,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl AuditConfig {
    pub fn validate(&self) -> Result<()> {
        CentipedeSpec::new(self.m)?;
        lattice(&self.grid)?;
        if !self.c_min.is_probability() {
            return Err(Error::InvalidConfig(format!("c_min {} is outside [0, 1]", self.c_min)));
        }
        Ok(())
    }

    /// Stop probability used as the reference point of the bound check.
    pub fn reference_stop(&self) -> Rational {
        Rational::one() - &self.c_min
    }
}

/// Lattice points `0, step, 2 step, ..., 1`.
pub fn lattice(step: &Rational) -> Result<Vec<Rational>> {
    if step.is_negative() || step.is_zero() || *step > Rational::one() {
        return Err(Error::InvalidConfig(format!("grid step {step} must lie in (0, 1]")));
    }
    let inv = step.recip();
    if !inv.is_integer() {
        return Err(Error::InvalidConfig(format!("grid step {step} must divide 1")));
    }
    let n: u64 = inv
        .to_string()
        .parse()
        .map_err(|_| Error::InvalidConfig(format!("grid step {step} is too fine")))?;
    Ok((0..=n).map(|i| Rational::from(i) * step).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepStatus {
    Pass,
    PassWithNote,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepResult<T> {
    pub status: StepStatus,
    pub notes: Vec<String>,
    pub detail: T,
}

impl<T> StepResult<T> {
    pub fn passed(&self) -> bool {
        matches!(self.status, StepStatus::Pass | StepStatus::PassWithNote)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum PureNashCheck {
    Checked {
        equilibria: u64,
        /// Distinct outcome payoffs, sorted.
        outcomes: Vec<PayoffPair>,
    },
    Skipped {
        needed: u128,
        budget: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpneAudit {
    pub m: u32,
    pub all_stop: bool,
    pub root_payoff: PayoffPair,
    pub expected_root_payoff: PayoffPair,
    pub unique: bool,
    pub pure_nash: PureNashCheck,
}

pub fn audit_spne_claim(m: u32, budget: u64) -> Result<StepResult<SpneAudit>> {
    let spec = CentipedeSpec::new(m)?;
    let tree = spec.tree();
    let solved = backward_induction(&tree);
    let all_stop = [&solved.seat1, &solved.seat2]
        .iter()
        .all(|s| s.choices.values().all(|a| a == crate::centipede::STOP));
    let expected_root_payoff = spec.stop_payoff(1);
    let pure_nash = match enumerate_pure_nash(&tree, budget as u128) {
        Ok(eqs) => PureNashCheck::Checked {
            equilibria: eqs.len() as u64,
            outcomes: eqs
                .into_iter()
                .map(|e| e.payoffs)
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect(),
        },
        Err(Error::BudgetExceeded { needed, .. }) => PureNashCheck::Skipped { needed, budget },
        Err(e) => return Err(e),
    };
    let mut notes = Vec::new();
    let mut ok = all_stop && solved.unique && solved.payoffs == expected_root_payoff;
    match &pure_nash {
        PureNashCheck::Checked { equilibria, outcomes } => {
            ok &= *equilibria > 0 && outcomes.iter().all(|o| *o == expected_root_payoff);
        }
        PureNashCheck::Skipped { needed, .. } => {
            notes.push(format!("pure Nash enumeration skipped: {needed} profiles exceed budget {budget}"));
        }
    }
    let status = match (ok, notes.is_empty()) {
        (false, _) => StepStatus::Fail,
        (true, true) => StepStatus::Pass,
        (true, false) => StepStatus::PassWithNote,
    };
    Ok(StepResult {
        status,
        notes,
        detail: SpneAudit {
            m,
            all_stop,
            root_payoff: solved.payoffs,
            expected_root_payoff,
            unique: solved.unique,
            pure_nash,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridBound {
    pub p_stop: Rational,
    pub bound: Rational,
    pub below_reference: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundAudit {
    pub m: u32,
    pub at_p: BoundReport,
    pub reference: BoundReport,
    /// Bounds at every lattice point above the reference probability.
    pub above_reference: Vec<GridBound>,
}

/// Smallest length at which the bound is asserted to fall below `m/2`.
pub const BOUND_CLAIM_MIN_M: u32 = 8;

/// Recomputes the bound at `p` and at the reference stop probability
/// `1 - c_min`, checks that every lattice probability above the reference
/// gives a strictly smaller bound, and compares the reference bound with
/// `m/2`.
pub fn audit_bound_claim(
    m: u32,
    p: &Rational,
    c_min: &Rational,
    grid: &Rational,
) -> Result<StepResult<BoundAudit>> {
    let reference_p = Rational::one() - c_min;
    let at_p = below_average_bound(m, p)?;
    let reference = below_average_bound(m, &reference_p)?;
    let mut points: Vec<Rational> = lattice(grid)?
        .into_iter()
        .filter(|q| *q > reference_p)
        .collect();
    if *p > reference_p && !points.contains(p) {
        points.push(p.clone());
        points.sort();
    }
    let above_reference = points
        .into_iter()
        .map(|q| {
            let bound = below_average_bound(m, &q)?.bound;
            Ok(GridBound {
                below_reference: bound < reference.bound,
                p_stop: q,
                bound,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut notes = Vec::new();
    let monotone = above_reference.iter().all(|g| g.below_reference);
    let status = if !monotone {
        StepStatus::Fail
    } else {
        match reference.verdict {
            Comparison::Below => StepStatus::Pass,
            Comparison::Equal => {
                notes.push(format!(
                    "bound at stop probability {} equals m/2 = {}; it is strictly below only for stop probabilities above {}",
                    reference_p, reference.benchmark, reference_p
                ));
                StepStatus::PassWithNote
            }
            Comparison::Above if m < BOUND_CLAIM_MIN_M => {
                notes.push(format!(
                    "bound {} exceeds m/2 = {}; the claim is only made for m >= {BOUND_CLAIM_MIN_M}",
                    reference.bound, reference.benchmark
                ));
                StepStatus::Skipped
            }
            Comparison::Above => StepStatus::Fail,
        }
    };
    Ok(StepResult {
        status,
        notes,
        detail: BoundAudit { m, at_p, reference, above_reference },
    })
}

/// Lattice behavioral strategies of one seat of a centipede, as per-node
/// stop probabilities. The first node varies slowest.
#[derive(Debug, Clone)]
pub(crate) struct LatticeStrategies {
    spec: CentipedeSpec,
    seat: Seat,
    points: Vec<Rational>,
    nodes: usize,
}

impl LatticeStrategies {
    pub fn new(spec: CentipedeSpec, seat: Seat, grid: &Rational) -> Result<Self> {
        Ok(LatticeStrategies {
            spec,
            seat,
            points: lattice(grid)?,
            nodes: spec.nodes_of(seat).count(),
        })
    }

    pub fn count(&self) -> u128 {
        (self.points.len() as u128).saturating_pow(self.nodes as u32)
    }

    pub fn stops(&self, mut index: u64) -> Vec<Rational> {
        let g = self.points.len() as u64;
        let mut out = vec![Rational::zero(); self.nodes];
        for slot in out.iter_mut().rev() {
            *slot = self.points[(index % g) as usize].clone();
            index /= g;
        }
        out
    }

    pub fn strategy(&self, index: u64) -> BehavioralStrategy {
        self.spec.behavioral(self.seat, &self.stops(index))
    }

    pub fn compiled(&self, tree: &GameTree, index: u64) -> Compiled {
        compile_behavioral(tree, &self.strategy(index)).expect("lattice strategy fits its centipede")
    }
}

fn check_budget(what: &'static str, needed: u128, budget: u64) -> Result<()> {
    if needed > budget as u128 {
        return Err(Error::BudgetExceeded { what, needed, budget: budget as u128 });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MutualBrViolation {
    pub seat1: BehavioralStrategy,
    pub seat2: BehavioralStrategy,
    pub root_stop_mass: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MutualBrAudit {
    pub m: u32,
    pub grid: Rational,
    pub profiles_checked: u64,
    pub mutual_best_responses: u64,
    pub violations: Vec<MutualBrViolation>,
}

/// Enumerates lattice behavioral profiles and checks that each mutual
/// best-response pair puts all mass on the root-stop terminal.
pub fn audit_mutual_best_response(m: u32, grid: &Rational, budget: u64) -> Result<StepResult<MutualBrAudit>> {
    let spec = CentipedeSpec::new(m)?;
    let tree = spec.tree();
    let l1 = LatticeStrategies::new(spec, Seat::One, grid)?;
    let l2 = LatticeStrategies::new(spec, Seat::Two, grid)?;
    let needed = l1.count().saturating_mul(l2.count());
    check_budget("mutual best-response enumeration", needed, budget)?;
    let (n1, n2) = (l1.count() as u64, l2.count() as u64);

    let s1: Vec<Compiled> = (0..n1).into_par_iter().map(|i| l1.compiled(&tree, i)).collect();
    let s2: Vec<Compiled> = (0..n2).into_par_iter().map(|j| l2.compiled(&tree, j)).collect();
    let br1: Vec<Rational> = s2
        .par_iter()
        .map(|o| best_response_compiled(&tree, Seat::One, o).1[0].clone())
        .collect();
    let br2: Vec<Rational> = s1
        .par_iter()
        .map(|o| best_response_compiled(&tree, Seat::Two, o).1[1].clone())
        .collect();

    let root_stop = tree.actions(tree.root())[0].child;
    let mutual: Vec<(u64, u64)> = (0..n1)
        .into_par_iter()
        .flat_map_iter(|i| {
            let (s1, s2, br1, br2, tree) = (&s1, &s2, &br1, &br2, &tree);
            (0..n2).filter_map(move |j| {
                let u = utility_compiled(tree, &s1[i as usize], &s2[j as usize]);
                (u[0] == br1[j as usize] && u[1] == br2[i as usize]).then_some((i, j))
            })
        })
        .collect();
    let violations: Vec<MutualBrViolation> = mutual
        .iter()
        .filter_map(|&(i, j)| {
            let reach = reach_compiled(&tree, &s1[i as usize], &s2[j as usize]);
            (!reach[root_stop].is_one()).then(|| MutualBrViolation {
                seat1: l1.strategy(i),
                seat2: l2.strategy(j),
                root_stop_mass: reach[root_stop].clone(),
            })
        })
        .collect();
    Ok(StepResult {
        status: if violations.is_empty() { StepStatus::Pass } else { StepStatus::Fail },
        notes: Vec::new(),
        detail: MutualBrAudit {
            m,
            grid: grid.clone(),
            profiles_checked: n1 * n2,
            mutual_best_responses: mutual.len() as u64,
            violations,
        },
    })
}

/// One AI role strategy evaluated against a best-responding H.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleEval {
    /// Stop probability at each of the AI's nodes in this role.
    pub stops: Vec<Rational>,
    pub h_response: PureStrategy,
    pub payoffs: Split,
    /// AI's stage payoff against the `m/2` benchmark.
    pub ai_vs_benchmark: Comparison,
    /// Survives the below-average filter.
    pub admitted: bool,
}

impl RoleEval {
    pub fn margin(&self) -> Rational {
        self.payoffs.margin()
    }
}

/// Records sharing one AI seat-1 strategy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordGroup {
    pub ai_seat1: u32,
    pub ai_seat2: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepAudit {
    pub m: u32,
    pub grid: Rational,
    pub c_min: Rational,
    pub filter: FilterMode,
    /// AI as seat 1, played in G2 (AI moves first). Indexed by lattice index.
    pub ai_seat1: Vec<RoleEval>,
    /// AI as seat 2, played in G1 (H moves first). Indexed by lattice index.
    pub ai_seat2: Vec<RoleEval>,
    pub pairs_admitted: u64,
    pub record_count: u64,
    pub min_margin: Option<Rational>,
    pub records: Vec<RecordGroup>,
}

/// A strategy pair on which H does not strictly outperform the AI.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleRecord {
    pub ai_as_seat1: BehavioralStrategy,
    pub ai_as_seat2: BehavioralStrategy,
    /// H's best response in G1, where H is seat 1.
    pub h_as_seat1: PureStrategy,
    /// H's best response in G2, where H is seat 2.
    pub h_as_seat2: PureStrategy,
    pub g1: Split,
    pub g2: Split,
    pub totals: Split,
    /// `u_H - u_AI` over one stage; never positive.
    pub margin: Rational,
    pub ai_g1_vs_benchmark: Comparison,
    pub ai_g2_vs_benchmark: Comparison,
}

impl SweepAudit {
    pub fn record(&self, ai_seat1: u32, ai_seat2: u32) -> CounterexampleRecord {
        let spec = CentipedeSpec::new(self.m).expect("audited length is valid");
        let e1 = &self.ai_seat1[ai_seat1 as usize];
        let e2 = &self.ai_seat2[ai_seat2 as usize];
        let totals = &e2.payoffs + &e1.payoffs;
        CounterexampleRecord {
            ai_as_seat1: spec.behavioral(Seat::One, &e1.stops),
            ai_as_seat2: spec.behavioral(Seat::Two, &e2.stops),
            h_as_seat1: e2.h_response.clone(),
            h_as_seat2: e1.h_response.clone(),
            g1: e2.payoffs.clone(),
            g2: e1.payoffs.clone(),
            margin: totals.margin(),
            totals,
            ai_g1_vs_benchmark: e2.ai_vs_benchmark,
            ai_g2_vs_benchmark: e1.ai_vs_benchmark,
        }
    }

    /// Every record, in order of AI seat-1 index then seat-2 index.
    pub fn records(&self) -> impl Iterator<Item = CounterexampleRecord> + '_ {
        self.records
            .iter()
            .flat_map(move |g| g.ai_seat2.iter().map(move |&j| self.record(g.ai_seat1, j)))
    }

    pub fn record_pairs(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.records
            .iter()
            .flat_map(|g| g.ai_seat2.iter().map(move |&j| (g.ai_seat1, j)))
    }
}

fn evaluate_role(
    tree: &GameTree,
    lattice: &LatticeStrategies,
    seats: SeatMap,
    index: u64,
    benchmark: &Rational,
) -> RoleEval {
    let ai = lattice.compiled(tree, index);
    let (choices, pair) = best_response_stage(tree, seats, &ai);
    let payoffs = Split::from_pair(&pair, seats);
    RoleEval {
        stops: lattice.stops(index),
        h_response: choices_to_pure(tree, seats.seat_of(Party::H), &choices),
        ai_vs_benchmark: Comparison::of(&payoffs.ai, benchmark),
        payoffs,
        admitted: true,
    }
}

/// Sweeps lattice AI strategy pairs through the best-response contest and
/// records every admitted pair with a non-positive H margin.
pub fn sweep_outperformance(config: &AuditConfig) -> Result<StepResult<SweepAudit>> {
    config.validate()?;
    let spec = CentipedeSpec::new(config.m)?;
    let tree = spec.tree();
    let l1 = LatticeStrategies::new(spec, Seat::One, &config.grid)?;
    let l2 = LatticeStrategies::new(spec, Seat::Two, &config.grid)?;
    check_budget("outperformance sweep", l1.count().saturating_mul(l2.count()), config.budget)?;
    let benchmark = Rational::from(config.m) / Rational::from(2);
    let (g1_seats, g2_seats) = stage_games(&tree);

    let mut ai_seat1: Vec<RoleEval> = (0..l1.count() as u64)
        .into_par_iter()
        .map(|i| evaluate_role(&tree, &l1, g2_seats, i, &benchmark))
        .collect();
    let mut ai_seat2: Vec<RoleEval> = (0..l2.count() as u64)
        .into_par_iter()
        .map(|j| evaluate_role(&tree, &l2, g1_seats, j, &benchmark))
        .collect();
    let benchmark_filter = config.filter == FilterMode::RootBenchmark;
    for e in &mut ai_seat1 {
        let root_continue = Rational::one() - &e.stops[0];
        e.admitted = root_continue >= config.c_min
            && (!benchmark_filter || e.ai_vs_benchmark != Comparison::Below);
    }
    for e in &mut ai_seat2 {
        e.admitted = !benchmark_filter || e.ai_vs_benchmark != Comparison::Below;
    }

    let seat1_margins: Vec<(u32, Rational)> = ai_seat1
        .iter()
        .enumerate()
        .filter(|(_, e)| e.admitted)
        .map(|(i, e)| (i as u32, e.margin()))
        .collect();
    let seat2_margins: Vec<(u32, Rational)> = ai_seat2
        .iter()
        .enumerate()
        .filter(|(_, e)| e.admitted)
        .map(|(j, e)| (j as u32, e.margin()))
        .collect();
    let zero = Rational::zero();
    let groups: Vec<(RecordGroup, Option<Rational>)> = seat1_margins
        .par_iter()
        .map(|(i, m1)| {
            let mut hits = Vec::new();
            let mut worst: Option<Rational> = None;
            for (j, m2) in &seat2_margins {
                let margin = m1 + m2;
                if margin <= zero {
                    hits.push(*j);
                    if worst.as_ref().is_none_or(|w| margin < *w) {
                        worst = Some(margin);
                    }
                }
            }
            (RecordGroup { ai_seat1: *i, ai_seat2: hits }, worst)
        })
        .collect();
    let min_margin = groups.iter().filter_map(|(_, w)| w.clone()).min();
    let records: Vec<RecordGroup> = groups
        .into_iter()
        .map(|(g, _)| g)
        .filter(|g| !g.ai_seat2.is_empty())
        .collect();
    let record_count = records.iter().map(|g| g.ai_seat2.len() as u64).sum();

    let mut notes = vec![format!(
        "root-continue filter admits AI seat-1 strategies with continue probability >= {}",
        config.c_min
    )];
    if record_count > 0 {
        notes.push(format!(
            "{record_count} admitted strategy pairs leave H without a strictly positive margin"
        ));
    }
    Ok(StepResult {
        status: if record_count == 0 { StepStatus::Pass } else { StepStatus::Fail },
        notes,
        detail: SweepAudit {
            m: config.m,
            grid: config.grid.clone(),
            c_min: config.c_min.clone(),
            filter: config.filter,
            pairs_admitted: seat1_margins.len() as u64 * seat2_margins.len() as u64,
            ai_seat1,
            ai_seat2,
            record_count,
            min_margin,
            records,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub config: AuditConfig,
    pub spne_claim: StepResult<SpneAudit>,
    pub bound_claim: StepResult<BoundAudit>,
    pub mutual_best_response: StepResult<Option<MutualBrAudit>>,
    pub outperformance_sweep: StepResult<SweepAudit>,
    /// SHA-256 over the canonical JSON of the report with this field empty.
    pub digest: String,
}

impl AuditReport {
    pub fn counterexample_count(&self) -> u64 {
        self.outperformance_sweep.detail.record_count
    }

    pub fn compute_digest(&self) -> String {
        let mut blank = self.clone();
        blank.digest = String::new();
        let value = serde_json::to_value(&blank).expect("report serializes");
        let bytes = serde_json::to_vec(&value).expect("value serializes");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Runs all four checks. A mutual best-response enumeration over budget is
/// recorded as skipped; a sweep over budget is an error.
pub fn run_audit(config: &AuditConfig) -> Result<AuditReport> {
    config.validate()?;
    let spne_claim = audit_spne_claim(config.m, config.budget)?;
    let bound_claim = audit_bound_claim(config.m, &config.reference_stop(), &config.c_min, &config.grid)?;
    let mutual_best_response = match audit_mutual_best_response(config.m, &config.grid, config.budget) {
        Ok(step) => StepResult {
            status: step.status,
            notes: step.notes,
            detail: Some(step.detail),
        },
        Err(Error::BudgetExceeded { needed, budget, .. }) => StepResult {
            status: StepStatus::Skipped,
            notes: vec![format!("{needed} lattice profiles exceed budget {budget}")],
            detail: None,
        },
        Err(e) => return Err(e),
    };
    let outperformance_sweep = sweep_outperformance(config)?;
    let mut report = AuditReport {
        config: config.clone(),
        spne_claim,
        bound_claim,
        mutual_best_response,
        outperformance_sweep,
        digest: String::new(),
    };
    report.digest = report.compute_digest();
    Ok(report)
}
