use std::path::Path;
use std::process::{Command, Output};

use efg_cli::io::to_canonical;
use efg_core::random::{random_behavioral, random_mixed, random_tree};
use efg_core::{
    make_centipede, play_contest, AuditReport, ContestReport, ContestSpec, GameTree, HMode,
    PureStrategy, Rational, Seat, SolveResult, Strategy,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

fn efg(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_efg"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("efg runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit status")
}

fn write(dir: &Path, name: &str, value: &Value) {
    std::fs::write(dir.join(name), serde_json::to_vec(value).unwrap()).unwrap();
}

fn read_json(dir: &Path, name: &str) -> Value {
    serde_json::from_slice(&std::fs::read(dir.join(name)).unwrap()).unwrap()
}

fn always(seat: Seat, action: &str) -> Value {
    let nodes = if seat == Seat::One { ["d1", "d3"] } else { ["d2", "d4"] };
    json!({
        "kind": "pure",
        "seat": seat.number(),
        "choices": { nodes[0]: action, nodes[1]: action },
    })
}

#[test]
fn centipede_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for m in [2, 10] {
        let out = efg(dir.path(), &["centipede", "--m", &m.to_string(), "--out", "g.json"]);
        assert_eq!(code(&out), 0);
        let bytes = std::fs::read(dir.path().join("g.json")).unwrap();
        let tree: GameTree = serde_json::from_slice(&bytes).unwrap();
        assert_eq!(tree, make_centipede(m).unwrap());
        assert_eq!(to_canonical(&tree), bytes);
    }
}

#[test]
fn solve_spne_prints_all_stop() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&efg(dir.path(), &["centipede", "--m", "10", "--out", "g.json"])), 0);
    let out = efg(dir.path(), &["solve", "spne", "--game", "g.json", "--csv", "s.csv"]);
    assert_eq!(code(&out), 0);
    let solved: SolveResult = serde_json::from_slice(&out.stdout).unwrap();
    assert!(solved.seat1.choices.values().chain(solved.seat2.choices.values()).all(|a| a == "S"));
    assert_eq!(solved.payoffs, [Rational::from(2), Rational::from(1)]);
    assert!(solved.unique);
    let mut rows = csv::Reader::from_path(dir.path().join("s.csv")).unwrap();
    assert_eq!(rows.records().count(), 10);
}

#[test]
fn best_response_and_checks() {
    let dir = tempfile::tempdir().unwrap();
    efg(dir.path(), &["centipede", "--m", "4", "--out", "g.json"]);
    write(dir.path(), "c1.json", &always(Seat::One, "C"));
    write(dir.path(), "c2.json", &always(Seat::Two, "C"));
    write(dir.path(), "s1.json", &always(Seat::One, "S"));
    write(dir.path(), "s2.json", &always(Seat::Two, "S"));

    let out = efg(dir.path(), &["solve", "br", "--game", "g.json", "--player", "1", "--opponent", "c2.json"]);
    assert_eq!(code(&out), 0);
    let br: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(br["value"], "6");
    assert_eq!(br["response"]["choices"], json!({"d1": "C", "d3": "C"}));

    let out = efg(dir.path(), &["check", "nash", "--game", "g.json", "--player", "c2.json", "--opponent", "c1.json"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["is_nash"], false);
    assert_eq!(v["max_gain"], "1");

    let out = efg(dir.path(), &["check", "spne", "--game", "g.json", "--player", "s1.json", "--opponent", "s2.json"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["is_spne"], true);
}

#[test]
fn contest_document() {
    let dir = tempfile::tempdir().unwrap();
    efg(dir.path(), &["centipede", "--m", "4", "--out", "g.json"]);
    write(dir.path(), "ai1.json", &always(Seat::One, "C"));
    write(dir.path(), "ai2.json", &always(Seat::Two, "C"));
    let out = efg(
        dir.path(),
        &["contest", "--game", "g.json", "--ai-p1", "ai1.json", "--ai-p2", "ai2.json", "--k", "1", "--out", "c.json", "--csv", "c.csv"],
    );
    assert_eq!(code(&out), 0);
    let doc = read_json(dir.path(), "c.json");
    assert_eq!(doc["totals"], json!({"h": "12", "ai": "8"}));
    assert_eq!(doc["verdict"], "h_outperforms");
    let report: ContestReport = serde_json::from_value(doc).unwrap();
    assert_eq!(report.k, 1);
    let table = std::fs::read_to_string(dir.path().join("c.csv")).unwrap();
    assert!(table.contains("total,,12,8,4"), "{table}");
}

#[test]
fn contest_accepts_mixed_and_behavioral_files() {
    let dir = tempfile::tempdir().unwrap();
    efg(dir.path(), &["centipede", "--m", "4", "--out", "g.json"]);
    write(dir.path(), "ai1.json", &json!({
        "kind": "mixed", "seat": 1,
        "atoms": [
            {"strategy": {"d1": "S", "d3": "S"}, "weight": "3/4"},
            {"strategy": {"d1": "C", "d3": "S"}, "weight": "1/4"},
        ],
    }));
    write(dir.path(), "ai2.json", &json!({
        "kind": "behavioral", "seat": 2,
        "probabilities": {"d2": {"C": "1"}, "d4": {"S": "1/2", "C": "1/2"}},
    }));
    let out = efg(dir.path(), &["contest", "--game", "g.json", "--ai-p1", "ai1.json", "--ai-p2", "ai2.json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["totals"], json!({"h": "25/4", "ai": "29/4"}));
    assert_eq!(doc["verdict"], "ai_outperforms");
}

#[test]
fn explicit_h_needs_both_roles() {
    let dir = tempfile::tempdir().unwrap();
    efg(dir.path(), &["centipede", "--m", "4", "--out", "g.json"]);
    write(dir.path(), "ai1.json", &always(Seat::One, "C"));
    write(dir.path(), "ai2.json", &always(Seat::Two, "C"));
    let out = efg(dir.path(), &["contest", "--game", "g.json", "--ai-p1", "ai1.json", "--ai-p2", "ai2.json", "--h-p1", "ai1.json"]);
    assert_eq!(code(&out), 1);
    let out = efg(
        dir.path(),
        &["contest", "--game", "g.json", "--ai-p1", "ai1.json", "--ai-p2", "ai2.json", "--h-p1", "ai1.json", "--h-p2", "ai2.json"],
    );
    assert_eq!(code(&out), 0);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    // both stage games reach the pass terminal (6,5)
    assert_eq!(doc["totals"], json!({"h": "11", "ai": "11"}));
    assert_eq!(doc["verdict"], "neither");
}

#[test]
fn usage_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&efg(dir.path(), &[])), 1);
    assert_eq!(code(&efg(dir.path(), &["centipede"])), 1);
    assert_eq!(code(&efg(dir.path(), &["frobnicate"])), 1);
    assert_eq!(code(&efg(dir.path(), &["audit", "--grid", "0.25"])), 1);
    assert_eq!(code(&efg(dir.path(), &["audit", "--filter", "strict"])), 1);
    assert_eq!(code(&efg(dir.path(), &["solve", "br", "--game", "g", "--player", "3", "--opponent", "o"])), 1);
    assert_eq!(code(&efg(dir.path(), &["--help"])), 0);
}

#[test]
fn invalid_inputs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&efg(dir.path(), &["solve", "spne", "--game", "missing.json"])), 2);
    assert_eq!(code(&efg(dir.path(), &["centipede", "--m", "3"])), 2);

    let mut game = serde_json::to_value(make_centipede(2).unwrap()).unwrap();
    game["nodes"]["t1"]["payoffs"] = json!(["3/6", "1"]);
    write(dir.path(), "noncanonical.json", &game);
    let out = efg(dir.path(), &["solve", "spne", "--game", "noncanonical.json"]);
    assert_eq!(code(&out), 2);
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("3/6") && msg.contains("1/2"), "{msg}");

    let mut cyclic = serde_json::to_value(make_centipede(2).unwrap()).unwrap();
    cyclic["nodes"]["d2"]["actions"][1]["child"] = json!("d1");
    write(dir.path(), "cyclic.json", &cyclic);
    assert_eq!(code(&efg(dir.path(), &["solve", "spne", "--game", "cyclic.json"])), 2);

    assert_eq!(code(&efg(dir.path(), &["audit", "--m", "4", "--grid", "2/5"])), 2);
}

#[test]
fn budget_exceeded_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let out = efg(dir.path(), &["audit", "--m", "4", "--budget", "10", "--out", "r.json"]);
    assert_eq!(code(&out), 4);
    assert!(!dir.path().join("r.json").exists());
}

#[test]
fn exit_3_iff_records() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ["2", "root-only", "1/4"],
        ["2", "root-benchmark", "1/4"],
        ["4", "root-only", "1/4"],
        ["4", "root-benchmark", "1/2"],
        ["6", "root-benchmark", "1/2"],
    ];
    for [m, filter, grid] in cases {
        let out = efg(dir.path(), &["audit", "--m", m, "--filter", filter, "--grid", grid, "--out", "r.json"]);
        let report: AuditReport = serde_json::from_value(read_json(dir.path(), "r.json")).unwrap();
        assert_eq!(report.digest, report.compute_digest());
        let expected = if report.counterexample_count() > 0 { 3 } else { 0 };
        assert_eq!(code(&out), expected, "m={m} {filter} grid={grid}");
    }
}

#[test]
fn audit_csv_lists_every_record() {
    let dir = tempfile::tempdir().unwrap();
    let out = efg(dir.path(), &["audit", "--m", "4", "--out", "r.json", "--csv", "r.csv"]);
    assert_eq!(code(&out), 3);
    let report: AuditReport = serde_json::from_value(read_json(dir.path(), "r.json")).unwrap();
    let mut rows = csv::Reader::from_path(dir.path().join("r.csv")).unwrap();
    let rows: Vec<csv::StringRecord> = rows.records().map(Result::unwrap).collect();
    assert_eq!(rows.len() as u64, report.counterexample_count());
    assert!(rows.iter().any(|r| {
        &r[2] == "3/4 1" && &r[3] == "0 1/2" && &r[8] == "25/4" && &r[9] == "29/4" && &r[10] == "-1"
    }));
}

#[test]
fn canonical_documents_have_sorted_keys() {
    let report = play_contest(&ContestSpec {
        game: make_centipede(4).unwrap(),
        ai_as_seat1: PureStrategy::new(Seat::One, [("d1", "C"), ("d3", "C")]).to_behavioral(),
        ai_as_seat2: PureStrategy::new(Seat::Two, [("d2", "C"), ("d4", "C")]).to_behavioral(),
        h_mode: HMode::BestResponse,
        k: 1,
    })
    .unwrap();
    let bytes = to_canonical(&report);
    assert_eq!(bytes, to_canonical(&report));
    let text = String::from_utf8(bytes).unwrap();
    assert!(text.ends_with('\n') && !text.trim_end().contains('\n'));
    let totals = text.find("\"totals\"").unwrap();
    assert!(text[totals..].starts_with(r#""totals":{"ai":"8","h":"12"}"#));
    assert!(text.find("\"g1\"").unwrap() < text.find("\"k\"").unwrap());
}

#[test]
fn rationals_are_written_in_lowest_terms() {
    assert_eq!(to_canonical(&Rational::new(9, 2)), b"\"9/2\"\n");
    assert_eq!(to_canonical(&Rational::new(3, 6)), b"\"1/2\"\n");
    assert_eq!(to_canonical(&Rational::new(4, -2)), b"\"-2\"\n");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn documents_round_trip(seed in any::<u64>(), decisions in 1usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tree = random_tree(&mut rng, decisions, 3);
        let bytes = to_canonical(&tree);
        let back: GameTree = serde_json::from_slice(&bytes).unwrap();
        prop_assert_eq!(&back, &tree);
        prop_assert_eq!(to_canonical(&back), bytes);

        for seat in Seat::BOTH {
            let strategies = [
                Strategy::Behavioral(random_behavioral(&mut rng, &tree, seat)),
                Strategy::Mixed(random_mixed(&mut rng, &tree, seat, 3)),
            ];
            for s in strategies {
                let back: Strategy = serde_json::from_slice(&to_canonical(&s)).unwrap();
                prop_assert_eq!(back, s);
            }
        }

        let spec = ContestSpec {
            ai_as_seat1: random_behavioral(&mut rng, &tree, Seat::One),
            ai_as_seat2: random_behavioral(&mut rng, &tree, Seat::Two),
            game: tree,
            h_mode: HMode::BestResponse,
            k: 3,
        };
        let report = play_contest(&spec).unwrap();
        let back: ContestReport = serde_json::from_slice(&to_canonical(&report)).unwrap();
        prop_assert_eq!(back, report);
        let back: ContestSpec = serde_json::from_slice(&to_canonical(&spec)).unwrap();
        prop_assert_eq!(back, spec);
    }
}
