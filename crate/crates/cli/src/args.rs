use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use efg_core::{FilterMode, Rational, DEFAULT_BUDGET};

#[derive(Debug, Parser)]
#[command(name = "efg", version, about = "Exact solvers and audits for two-player perfect-information games")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the increasing-sum centipede game with m decision nodes.
    Centipede {
        #[arg(long)]
        m: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Solve a game or compute a best response.
    #[command(subcommand)]
    Solve(Solve),
    /// Check a strategy profile for equilibrium.
    #[command(subcommand)]
    Check(Check),
    /// Play the role-swapped contest between H and a committed AI.
    Contest(ContestArgs),
    /// Audit the long-centipede outperformance argument.
    Audit(AuditArgs),
}

#[derive(Debug, Args)]
pub struct Output {
    /// Canonical JSON document; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Payoff table.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Solve {
    /// Subgame-perfect equilibrium by backward induction.
    Spne {
        #[arg(long)]
        game: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Pure best response of one seat against an opponent strategy file.
    Br {
        #[arg(long)]
        game: PathBuf,
        /// Responding seat.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..=2))]
        player: u32,
        #[arg(long)]
        opponent: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum Check {
    Nash(CheckArgs),
    Spne(CheckArgs),
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub game: PathBuf,
    /// Strategy file of one seat.
    #[arg(long)]
    pub player: PathBuf,
    /// Strategy file of the other seat.
    #[arg(long)]
    pub opponent: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ContestArgs {
    #[arg(long)]
    pub game: PathBuf,
    /// AI strategy as seat 1, played in G2.
    #[arg(long = "ai-p1")]
    pub ai_p1: PathBuf,
    /// AI strategy as seat 2, played in G1.
    #[arg(long = "ai-p2")]
    pub ai_p2: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub k: u64,
    /// Explicit H strategy as seat 1; H best-responds when both H flags are omitted.
    #[arg(long = "h-p1", requires = "h_p2")]
    pub h_p1: Option<PathBuf>,
    /// Explicit H strategy as seat 2.
    #[arg(long = "h-p2", requires = "h_p1")]
    pub h_p2: Option<PathBuf>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct AuditArgs {
    #[arg(long, default_value_t = 10)]
    pub m: u32,
    /// Lattice step for strategy probabilities.
    #[arg(long, default_value = "1/4")]
    pub grid: Rational,
    /// Minimum root-continue probability of the AI's seat-1 strategy.
    #[arg(long = "c-min", default_value = "1/4")]
    pub c_min: Rational,
    /// root-only or root-benchmark.
    #[arg(long, default_value = "root-only")]
    pub filter: FilterMode,
    /// Cap on enumerated strategy profiles per step.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[command(flatten)]
    pub output: Output,
}
