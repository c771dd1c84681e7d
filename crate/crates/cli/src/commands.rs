use std::path::Path;

use efg_core::{
    backward_induction, best_response, expected_utility, is_nash, is_spne, make_centipede,
    mixed_to_behavioral, play_contest, run_audit, subgame, AuditConfig, BehavioralStrategy,
    ContestReport, ContestSpec, GameTree, HMode, Rational, Seat, SolveResult, Strategy,
    StrategyError, StrategyProfile,
};

use crate::args::{AuditArgs, Check, CheckArgs, Command, ContestArgs, Output, Solve};
use crate::error::{status, CliError};
use crate::io::{emit, read_document, write_csv_atomic};

pub fn dispatch(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Centipede { m, output } => centipede(m, &output),
        Command::Solve(Solve::Spne { game, output }) => solve_spne(&game, &output),
        Command::Solve(Solve::Br { game, player, opponent, out }) => {
            solve_br(&game, player, &opponent, out.as_deref())
        }
        Command::Check(Check::Nash(args)) => check(&args, false),
        Command::Check(Check::Spne(args)) => check(&args, true),
        Command::Contest(args) => contest(&args),
        Command::Audit(args) => audit(&args),
    }
}

fn read_game(path: &Path) -> Result<GameTree, CliError> {
    read_document(path)
}

fn read_strategy(path: &Path) -> Result<Strategy, CliError> {
    read_document(path)
}

fn as_behavioral(tree: &GameTree, s: Strategy) -> Result<BehavioralStrategy, CliError> {
    Ok(match s {
        Strategy::Pure(p) => p.to_behavioral(),
        Strategy::Behavioral(b) => b,
        Strategy::Mixed(m) => mixed_to_behavioral(tree, &m)?,
    })
}

fn pair_row(pair: &[Rational; 2]) -> [String; 2] {
    [pair[0].to_string(), pair[1].to_string()]
}

fn centipede(m: u32, output: &Output) -> Result<i32, CliError> {
    let tree = make_centipede(m)?;
    if let Some(path) = &output.csv {
        write_csv_atomic(path, |w| {
            w.write_record(["terminal", "reached_by", "u1", "u2"])?;
            for ix in tree.terminals() {
                let last = tree.path_to(ix).last().copied().expect("terminal below root");
                let (node, action) = last;
                let via = format!("{}:{}", tree.id(node), tree.actions(node)[action].label);
                let [u1, u2] = pair_row(tree.payoffs(ix).expect("terminal"));
                w.write_record([tree.id(ix), via.as_str(), u1.as_str(), u2.as_str()])?;
            }
            Ok(())
        })?;
    }
    emit(&tree, output.out.as_deref())?;
    Ok(status::OK)
}

/// Continuation payoffs of the solved profile at every decision node.
fn continuation_table(tree: &GameTree, solved: &SolveResult) -> Result<Vec<[String; 5]>, CliError> {
    let mut rows = Vec::new();
    for ix in tree.decision_nodes() {
        let id = tree.id(ix);
        let sub = subgame(tree, id)?;
        let profile = StrategyProfile::new(solved.seat1.restrict(&sub), solved.seat2.restrict(&sub));
        let [u1, u2] = pair_row(&expected_utility(&sub, &profile)?);
        let owner = tree.owner(ix).expect("decision node");
        let own = if owner == Seat::One { &solved.seat1 } else { &solved.seat2 };
        let label = own.choices[id].clone();
        rows.push([id.to_string(), owner.number().to_string(), label, u1, u2]);
    }
    Ok(rows)
}

fn solve_spne(game: &Path, output: &Output) -> Result<i32, CliError> {
    let tree = read_game(game)?;
    let solved = backward_induction(&tree);
    if let Some(path) = &output.csv {
        let rows = continuation_table(&tree, &solved)?;
        write_csv_atomic(path, |w| {
            w.write_record(["node", "owner", "action", "u1", "u2"])?;
            rows.iter().try_for_each(|r| w.write_record(r))
        })?;
    }
    emit(&solved, output.out.as_deref())?;
    Ok(status::OK)
}

fn solve_br(game: &Path, player: u32, opponent: &Path, out: Option<&Path>) -> Result<i32, CliError> {
    let tree = read_game(game)?;
    let seat = Seat::from_number(player)?;
    let opp = as_behavioral(&tree, read_strategy(opponent)?)?;
    emit(&best_response(&tree, seat, &opp)?, out)?;
    Ok(status::OK)
}

fn check(args: &CheckArgs, subgame_perfect: bool) -> Result<i32, CliError> {
    let tree = read_game(&args.game)?;
    let player = read_strategy(&args.player)?;
    let opponent = read_strategy(&args.opponent)?;
    if player.seat() == opponent.seat() {
        return Err(StrategyError::SeatMismatch { expected: player.seat().other(), found: opponent.seat() }.into());
    }
    let profile = match player.seat() {
        Seat::One => StrategyProfile { seat1: player, seat2: opponent },
        Seat::Two => StrategyProfile { seat1: opponent, seat2: player },
    };
    if subgame_perfect {
        emit(&is_spne(&tree, &profile)?, args.out.as_deref())?;
    } else {
        emit(&is_nash(&tree, &profile)?, args.out.as_deref())?;
    }
    Ok(status::OK)
}

fn contest_table(report: &ContestReport) -> Vec<[String; 5]> {
    let row = |name: &str, h_seat: &str, s: &efg_core::Split| {
        [name.to_string(), h_seat.to_string(), s.h.to_string(), s.ai.to_string(), s.margin().to_string()]
    };
    vec![
        row("g1", "1", &report.g1.payoffs),
        row("g2", "2", &report.g2.payoffs),
        row("stage", "", &report.stage_totals),
        row("total", "", &report.totals),
    ]
}

fn contest(args: &ContestArgs) -> Result<i32, CliError> {
    let game = read_game(&args.game)?;
    let ai_as_seat1 = as_behavioral(&game, read_strategy(&args.ai_p1)?)?;
    let ai_as_seat2 = as_behavioral(&game, read_strategy(&args.ai_p2)?)?;
    let h_mode = match (&args.h_p1, &args.h_p2) {
        (Some(p1), Some(p2)) => HMode::Explicit {
            as_seat1: as_behavioral(&game, read_strategy(p1)?)?,
            as_seat2: as_behavioral(&game, read_strategy(p2)?)?,
        },
        (None, None) => HMode::BestResponse,
        _ => return Err(CliError::Usage("--h-p1 and --h-p2 must be given together".into())),
    };
    let report = play_contest(&ContestSpec { game, ai_as_seat1, ai_as_seat2, h_mode, k: args.k })?;
    if let Some(path) = &args.output.csv {
        write_csv_atomic(path, |w| {
            w.write_record(["game", "h_seat", "h", "ai", "margin"])?;
            contest_table(&report).iter().try_for_each(|r| w.write_record(r))
        })?;
    }
    emit(&report, args.output.out.as_deref())?;
    Ok(status::OK)
}

fn join(stops: &[Rational]) -> String {
    stops.iter().map(Rational::to_string).collect::<Vec<_>>().join(" ")
}

fn audit(args: &AuditArgs) -> Result<i32, CliError> {
    let config = AuditConfig {
        m: args.m,
        grid: args.grid.clone(),
        c_min: args.c_min.clone(),
        filter: args.filter,
        budget: args.budget,
    };
    let report = run_audit(&config)?;
    let sweep = &report.outperformance_sweep.detail;
    if let Some(path) = &args.output.csv {
        write_csv_atomic(path, |w| {
            w.write_record([
                "ai_seat1_index", "ai_seat2_index", "ai_seat1_stops", "ai_seat2_stops",
                "g1_h", "g1_ai", "g2_h", "g2_ai", "total_h", "total_ai", "margin",
            ])?;
            for (i, j) in sweep.record_pairs() {
                let (e1, e2) = (&sweep.ai_seat1[i as usize], &sweep.ai_seat2[j as usize]);
                let totals = &e2.payoffs + &e1.payoffs;
                w.write_record([
                    i.to_string(),
                    j.to_string(),
                    join(&e1.stops),
                    join(&e2.stops),
                    e2.payoffs.h.to_string(),
                    e2.payoffs.ai.to_string(),
                    e1.payoffs.h.to_string(),
                    e1.payoffs.ai.to_string(),
                    totals.h.to_string(),
                    totals.ai.to_string(),
                    totals.margin().to_string(),
                ])?;
            }
            Ok(())
        })?;
    }
    emit(&report, args.output.out.as_deref())?;
    let count = report.counterexample_count();
    eprintln!(
        "audit m={} grid={} filter={}: {} counterexample records",
        config.m, config.grid, config.filter, count
    );
    Ok(if count > 0 { status::COUNTEREXAMPLES } else { status::OK })
}
