//! End-to-end tests of the binary: exit codes, byte-stable golden
//! reports, thread-count independence, and the --json side channel.

use std::path::Path;
use std::process::{Command, Output};

fn k3lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = k3lab(args);
    assert!(
        out.status.success(),
        "expected success from {args:?}, stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8 report")
}

fn assert_golden(args: &[&str], name: &str) {
    let expected_path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    let expected = std::fs::read_to_string(&expected_path)
        .unwrap_or_else(|e| panic!("missing golden file {}: {e}", expected_path.display()));
    let actual = stdout_of(args);
    assert_eq!(
        actual, expected,
        "report bytes for {args:?} drifted from {name}"
    );
}

#[test]
fn exit_zero_when_all_checks_pass() {
    let out = k3lab(&["arith", "count-x", "--p", "5", "--method", "both"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"96\""));
}

#[test]
fn exit_one_when_a_check_fails() {
    let out = k3lab(&["lattice", "invariants", "--name", "U"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"pass\": false"));
}

#[test]
fn exit_two_on_unknown_commands_and_bad_input() {
    assert_eq!(k3lab(&["nosuch"]).status.code(), Some(2));
    assert_eq!(k3lab(&["buchi", "nosuch"]).status.code(), Some(2));
    assert_eq!(k3lab(&["arith", "zeta", "--p", "7"]).status.code(), Some(2));
    assert_eq!(
        k3lab(&["buchi", "minors", "--n", "5", "--a", "1"]).status.code(),
        Some(2),
        "a partial index triple must be rejected"
    );
}

#[test]
fn golden_reports_are_byte_stable() {
    assert_golden(&["arith", "galois"], "arith-galois.json");
    assert_golden(&["arith", "k4"], "arith-k4.json");
    assert_golden(&["lattice", "chain", "--group", "D6"], "lattice-chain-d6.json");
    assert_golden(&["buchi", "minors", "--n", "5", "--all"], "buchi-minors-n5.json");
    assert_golden(&["kummer", "graph", "--t", "-1", "--s", "1"], "kummer-graph.json");
}

#[test]
fn reports_do_not_depend_on_the_thread_count() {
    let single = stdout_of(&["arith", "scan", "--bound", "200", "--threads", "1"]);
    let several = stdout_of(&["arith", "scan", "--bound", "200", "--threads", "4"]);
    assert_eq!(single, several);
    assert!(single.contains("\"167\""));
}

#[test]
fn json_flag_writes_the_canonical_report() {
    let dir = std::env::temp_dir().join(format!("k3lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("galois.json");
    let stdout = stdout_of(&["arith", "galois", "--json", path.to_str().unwrap()]);
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(stdout, written, "file copy must match the stdout report");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn text_format_renders_a_verdict_line() {
    let text = stdout_of(&["arith", "k4", "--format", "text"]);
    assert!(text.starts_with("task: arith.k4\n"));
    assert!(text.contains("overall: PASS"));
}

#[test]
fn wall_time_stays_out_of_the_report() {
    let out = k3lab(&["arith", "galois"]);
    let stdout = String::from_utf8(out.stdout).unwrap();
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(!stdout.contains("wall time"));
    assert!(stderr.contains("wall time"));
}
