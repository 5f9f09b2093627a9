use std::fs;
use std::process::{Command, Output};

fn shbots(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shbots")).args(args).output().unwrap()
}

fn text(b: &[u8]) -> String {
    String::from_utf8_lossy(b).into_owned()
}

#[test]
fn simulate_then_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("runs.jsonl");
    let out_s = out.to_str().unwrap();
    let sim = shbots(&[
        "simulate", "--games", "60", "--seed", "3", "--agents", "random,selfish", "--players", "5,7-8", "--parallelism", "2",
        "--out", out_s,
    ]);
    assert!(sim.status.success(), "{}", text(&sim.stderr));
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 60);

    // a second run finds everything already recorded
    let again = shbots(&["simulate", "--games", "60", "--seed", "3", "--agents", "random,selfish", "--players", "5,7-8", "--out", out_s]);
    assert!(again.status.success());
    assert!(text(&again.stderr).contains("0 written, 60 already present"));

    for by in ["agent", "role", "players", "reason"] {
        let a = shbots(&["analyze", "--in", out_s, "--by", by]);
        assert!(a.status.success(), "{by}: {}", text(&a.stderr));
        assert!(text(&a.stdout).contains("95% CI"));
    }
    let csv = shbots(&["analyze", "--in", out_s, "--by", "role", "--format", "csv"]);
    let body = text(&csv.stdout);
    assert!(body.starts_with("agent,role,wins,total,rate,ci_low,ci_high\n"), "{body}");
    assert_eq!(body.lines().count(), 7);
}

#[test]
fn malformed_lines_are_reported_and_fail() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("runs.jsonl");
    let out_s = out.to_str().unwrap();
    assert!(shbots(&["simulate", "--games", "3", "--agents", "random", "--out", out_s]).status.success());
    let mut body = fs::read_to_string(&out).unwrap();
    body.push_str("{\"schema_version\": 1}\n");
    fs::write(&out, body).unwrap();
    let a = shbots(&["analyze", "--in", out_s, "--by", "agent"]);
    assert!(!a.status.success());
    assert!(text(&a.stderr).contains(":4:"), "{}", text(&a.stderr));
    assert!(text(&a.stdout).contains("random"));
}

#[test]
fn trace_narrates_a_game() {
    let t = shbots(&["trace", "--players", "8", "--seed", "12", "--agents", "random,selfish,ismcts:30:0.7,random,selfish,random,random,selfish"]);
    assert!(t.status.success(), "{}", text(&t.stderr));
    let out = text(&t.stdout);
    assert!(out.starts_with("game seed 12, 8 players"));
    assert!(out.contains("Game over:"));
    let s = shbots(&["trace", "--players", "5", "--seed", "1", "--agents", "ismcts:30:0.7", "--search"]);
    assert!(text(&s.stdout).contains("| search seat="));
}

#[test]
fn bad_arguments_exit_nonzero() {
    assert!(!shbots(&["trace", "--players", "5", "--agents", "minimax"]).status.success());
    assert!(!shbots(&["trace", "--players", "5", "--agents", "random,random"]).status.success());
    assert!(!shbots(&["simulate", "--games", "1", "--players", "3-4", "--out", "/tmp/never.jsonl"]).status.success());
    assert!(!shbots(&["analyze", "--in", "/nonexistent/file", "--by", "agent"]).status.success());
    assert!(!shbots(&["analyze", "--in", "/dev/null", "--by", "colour"]).status.success());
}
