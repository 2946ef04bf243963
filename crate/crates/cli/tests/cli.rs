use std::io::Write;
use std::process::{Command, Output, Stdio};

use arena_core::engine::TranscriptRecord;
use arena_core::Move;

fn arena(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arena"))
        .args(args)
        .env_remove("ARENA_SEED")
        .output()
        .expect("the binary runs")
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_arena"))
        .args(args)
        .env_remove("ARENA_SEED")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("the binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn ii_bits(text: &str) -> Vec<bool> {
    TranscriptRecord::parse(text)
        .unwrap()
        .moves
        .iter()
        .skip(1)
        .step_by(2)
        .map(|m| m.as_bit().unwrap())
        .collect()
}

#[test]
fn selector_answers_scripted_play() {
    let o = arena(&[
        "play",
        "--game",
        "tallness",
        "--strategy-ii",
        "ed-fin-selector",
        "--strategy-i",
        "scripted:[0,1,2,3]",
        "--horizon",
        "4",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(ii_bits(&stdout(&o)), vec![true, true, false, true]);
}

#[test]
fn flipper_against_random() {
    let o = arena(&[
        "play",
        "--game",
        "reaping-star",
        "--strategy-i",
        "flipper",
        "--strategy-ii",
        "random:7",
        "--horizon",
        "50",
    ]);
    assert_eq!(code(&o), 0);
    let rec = TranscriptRecord::parse(&stdout(&o)).unwrap();
    assert_eq!(rec.moves.len(), 100);
    assert!(rec.verdict.unwrap().to_string().contains("minoritySplitCount"));
}

#[test]
fn transcript_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.txt");
    let o = arena(&[
        "play",
        "--game",
        "anti-localizing",
        "--strategy-i",
        "random:3",
        "--strategy-ii",
        "random:4",
        "--horizon",
        "12",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).starts_with("verdict "));
    let text = std::fs::read_to_string(&out).unwrap();
    let rec = TranscriptRecord::parse(&text).unwrap();
    assert_eq!(rec.to_text(), text);
    assert_eq!(rec.param("strategy-i"), Some("random:3"));
}

#[test]
fn witness_file_decides_the_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.txt");
    std::fs::write(&w, "# one real\nreal k->k+1\n").unwrap();
    let o = arena(&[
        "play",
        "--game",
        "bounding",
        "--strategy-i",
        "scripted:[0,5]",
        "--strategy-ii",
        "scripted:[1,0]",
        "--horizon",
        "2",
        "--witness-file",
        w.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("verdict consistent-ii"), "{}", stdout(&o));
    std::fs::write(&w, "real k->\n").unwrap();
    let bad = arena(&["play", "--game", "bounding", "--strategy-i", "constant:0", "--strategy-ii", "always-one", "--horizon", "2", "--witness-file", w.to_str().unwrap()]);
    assert_eq!(code(&bad), 2);
    assert!(stderr(&bad).contains('^'));
}

#[test]
fn bad_strategy_spec_points_at_the_error() {
    let o = arena(&["play", "--game", "tallness", "--strategy-i", "scripted:[0,x]", "--strategy-ii", "always-one", "--horizon", "2"]);
    assert_eq!(code(&o), 2);
    let err = stderr(&o);
    let lines: Vec<&str> = err.lines().collect();
    let src = lines.iter().position(|l| *l == "scripted:[0,x]").expect("the strategy source is echoed");
    assert_eq!(lines[src + 1].find('^'), Some(12), "{err}");
}

#[test]
fn unknown_flag_is_located() {
    let o = arena(&["play", "--game", "tallness", "--colour", "red"]);
    assert_eq!(code(&o), 2);
    let err = stderr(&o);
    let caret = err.lines().last().unwrap();
    assert_eq!(caret.find('^'), Some("play --game tallness ".len()), "{err}");
    assert!(err.contains("--colour"));
}

#[test]
fn missing_subcommand_is_usage() {
    assert_eq!(code(&arena(&[])), 2);
    assert_eq!(code(&arena(&["--help"])), 0);
}

#[test]
fn interactive_reprompts_on_illegal_moves() {
    // 2 after 5 is not increasing and "abc" is not a number; neither forfeits.
    let o = with_stdin(
        &["play", "--game", "tallness", "--interactive", "i", "--strategy-ii", "ed-fin-selector", "--horizon", "3"],
        "0\n5\nabc\n2\n7\n",
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rec = TranscriptRecord::parse(&stdout(&o)).unwrap();
    let i: Vec<&Move> = rec.moves.iter().step_by(2).collect();
    assert_eq!(i, vec![&Move::Nat(0), &Move::Nat(5), &Move::Nat(7)]);
    assert!(stderr(&o).contains("not legal"));
}

#[test]
fn interactive_second_player() {
    let o = with_stdin(
        &["play", "--game", "reaping-star", "--interactive", "ii", "--strategy-i", "flipper", "--horizon", "2"],
        "2\n1\n0\n",
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(ii_bits(&stdout(&o)), vec![true, false]);
}

#[test]
fn interactive_end_of_input_forfeits() {
    let o = with_stdin(
        &["play", "--game", "tallness", "--interactive", "i", "--strategy-ii", "ed-fin-selector", "--horizon", "3"],
        "0\n",
    );
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("verdict forfeit"), "{}", stdout(&o));
}

#[test]
fn translations_compose() {
    let o = arena(&["translate", "--from", "hmm", "--to", "tallness", "--strategy", "threshold:3"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o), "tallness-from-hmm(threshold:3)\n");
    let o = arena(&["translate", "--from", "game-g", "--to", "game-b", "--strategy", "random:4"]);
    assert_eq!(stdout(&o), "b-from-g(random:4)\n");
    let o = arena(&["translate", "--from", "tree", "--to", "tallness-star", "--strategy", "@edfin"]);
    assert_eq!(stdout(&o), "branching-tree:@edfin\n");
    let o = arena(&["translate", "--from", "tallness", "--to", "hmm", "--strategy", "ed-fin-selector"]);
    assert_eq!(stdout(&o), "hmm-from-tallness(ed-fin-selector)\n");
}

#[test]
fn translated_spec_plays() {
    let t = arena(&["translate", "--from", "hmm", "--to", "tallness", "--strategy", "threshold:2"]);
    let spec = stdout(&t);
    let o = arena(&["play", "--game", "tallness", "--strategy-i", "random:1", "--strategy-ii", spec.trim(), "--horizon", "10"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}

#[test]
fn all_zero_tallness_stalls() {
    let o = arena(&["translate", "--from", "tallness", "--to", "hmm", "--strategy", "always-zero"]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("stalled"), "{}", stderr(&o));
}

#[test]
fn bad_pairs_list_the_supported_ones() {
    let o = arena(&["translate", "--from", "hmm", "--to", "hmm", "--strategy", "threshold:3"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("identity"));
    let o = arena(&["translate", "--from", "bounding", "--to", "tallness", "--strategy", "echo"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("game-g (player I) -> game-b"), "{}", stderr(&o));
}

#[test]
fn ambiguous_input_needs_a_role() {
    let args = ["translate", "--from", "tallness", "--to", "hmm", "--strategy", "random:3"];
    assert_eq!(code(&arena(&args)), 2);
    let mut with_role = args.to_vec();
    with_role.extend(["--role", "i"]);
    let o = arena(&with_role);
    assert_eq!(stdout(&o), "hmm-player-ii(random:3)\n", "{}", stderr(&o));
}

#[test]
fn hs_tree_of_always_one_is_cofinite() {
    let o = arena(&["extract", "--what", "hs", "--strategy", "always-one"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("tree v1\nnode [] succ cofinite(0)\n"), "{text}");
}

#[test]
fn perfect_subtree_of_echo_has_four_leaves() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("p.txt");
    let o = arena(&["extract", "--what", "perfect", "--strategy", "echo", "--depth", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = std::fs::read_to_string(out).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("leaf ")).count(), 4);
    assert!(!text.contains("partial"));
}

#[test]
fn constant_strategy_has_no_perfect_subtree() {
    let o = arena(&["extract", "--what", "perfect", "--strategy", "constant:3"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("failure root partial"));
}

#[test]
fn tail_probe_refutes_echo() {
    let o = arena(&["extract", "--what", "tail", "--strategy", "echo"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).starts_with("tail v1\nrefuted\nsplit at "));
    let c = arena(&["extract", "--what", "tail", "--strategy", "constant:5"]);
    assert!(stdout(&c).contains("constant 5 5 5 5"), "{}", stdout(&c));
}

#[test]
fn extract_shape_errors_fail() {
    let o = arena(&["extract", "--what", "tail", "--strategy", "always-one", "--game", "tallness"]);
    assert_eq!(code(&o), 1, "{}", stderr(&o));
}

#[test]
fn verify_exit_codes() {
    assert_eq!(code(&arena(&["verify", "--suite", "nonexistent"])), 2);
    let o = arena(&["verify", "--suite", "flipper", "--trials", "1000"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("property minority-split checked=1000 failed=0"));
}

#[test]
fn verify_ed_cover_oracle() {
    let o = arena(&["verify", "--suite", "ed-cover-oracle"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("stat sets=40999515"));
}

#[test]
fn verify_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.txt");
    let o = arena(&["verify", "--suite", "hs-replay", "--seed", "3", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(out).unwrap();
    assert_eq!(text, stdout(&o));
    assert!(text.starts_with("config suite=hs-replay horizon=0 trials=3 seed=3 "));
}

#[test]
fn seed_comes_from_the_environment() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_arena"));
        c.args(["play", "--game", "reaping-star", "--strategy-i", "flipper", "--strategy-ii", "random", "--horizon", "20"])
            .args(extra)
            .env_remove("ARENA_SEED");
        if let Some(v) = env {
            c.env("ARENA_SEED", v);
        }
        String::from_utf8(c.output().unwrap().stdout).unwrap()
    };
    let from_env = run(Some("9"), &[]);
    assert!(from_env.contains("param seed 9"));
    assert_eq!(from_env, run(None, &["--seed", "9"]));
    assert_ne!(from_env, run(None, &[]));
    assert!(run(Some("9"), &["--seed", "2"]).contains("param seed 2"));
}

#[test]
fn config_file_mirrors_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("arena.toml");
    std::fs::write(
        &cfg,
        "# a match\ngame = tallness\nstrategy-i = scripted:[0,1,2,3]\nstrategy-ii = ed-fin-selector\nhorizon = 4\n",
    )
    .unwrap();
    let path = cfg.to_str().unwrap();
    let o = arena(&["play", "--config", path]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(ii_bits(&stdout(&o)), vec![true, true, false, true]);
    let o = arena(&["play", "--config", path, "--horizon", "2"]);
    assert_eq!(ii_bits(&stdout(&o)), vec![true, true]);
    std::fs::write(&cfg, "game=tallness\ncolour=red\n").unwrap();
    let o = arena(&["play", "--config", path]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 2: 'colour' is not a flag of play"), "{}", stderr(&o));
}
