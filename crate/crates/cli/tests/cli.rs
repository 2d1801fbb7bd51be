use std::fs;

mod common;

use common::{bproof, bproof_stdin, path_str, proofs_dir, status, stdout};

#[test]
fn check_accepts_the_shipped_pair_injectivity_proof() {
    let f = proofs_dir().join("pair_injectivity.bprf");
    let o = bproof(&["check", path_str(&f)]);
    assert_eq!(status(&o), 0, "{}", stdout(&o));
    assert_eq!(stdout(&o), "certified |- e1 |-> f1 = e2 |-> f2 => e1 = e2 & f1 = f2\n");
}

#[test]
fn check_reports_the_failing_node() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(proofs_dir().join("product_monotonicity.bprf")).unwrap();
    let corrupted = text.replacen("(ForallIntro (idx 5)", "(ForallIntro (idx 1)", 1);
    assert_ne!(corrupted, text);
    let f = dir.path().join("bad.bprf");
    fs::write(&f, corrupted).unwrap();
    let o = bproof(&["check", path_str(&f)]);
    assert_eq!(status(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("invalid step ForallIntro at node root.0.1"), "{out}");
    assert!(out.contains("side condition violated"), "{out}");
}

#[test]
fn check_environment_failures_exit_two() {
    let o = bproof(&["check", "/nonexistent/proof.bprf"]);
    assert_eq!(status(&o), 2);
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("garbage.bprf");
    fs::write(&f, "(Hyp (hyps) (term").unwrap();
    assert_eq!(status(&bproof(&["check", path_str(&f)])), 2);
    fs::write(&f, "(Frobnicate)\n").unwrap();
    assert_eq!(status(&bproof(&["check", path_str(&f)])), 2);
}

#[test]
fn prove_emits_a_proof_that_checks() {
    let dir = tempfile::tempdir().unwrap();
    let (goal, script, out) = (dir.path().join("g"), dir.path().join("s"), dir.path().join("o.bprf"));
    fs::write(&goal, "|- #p => #p\n").unwrap();
    fs::write(&script, "prop\n").unwrap();
    let o = bproof(&["prove", path_str(&goal), path_str(&script), "--emit", path_str(&out)]);
    assert_eq!(status(&o), 0, "{}", stdout(&o));
    assert_eq!(stdout(&o), "proved |- #p => #p\n");
    let c = bproof(&["check", path_str(&out)]);
    assert_eq!(status(&c), 0);
    assert_eq!(stdout(&c), "certified |- #p => #p\n");
}

#[test]
fn prove_lists_remaining_subgoals() {
    let dir = tempfile::tempdir().unwrap();
    let (goal, script) = (dir.path().join("g"), dir.path().join("s"));
    fs::write(&goal, "#p, #q |- #p & #q\n").unwrap();
    fs::write(&script, "and_intro\nhyp\n").unwrap();
    let o = bproof(&["prove", path_str(&goal), path_str(&script)]);
    assert_eq!(status(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("1 open goal(s):\n  1. #p, #q |- #q\n"), "{out}");
}

#[test]
fn prove_parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let (goal, script) = (dir.path().join("g"), dir.path().join("s"));
    fs::write(&goal, "|- #p =>\n").unwrap();
    fs::write(&script, "prop\n").unwrap();
    let o = bproof(&["prove", path_str(&goal), path_str(&script)]);
    assert_eq!(status(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains(":1:"));
}

#[test]
fn failing_tactic_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let (goal, script) = (dir.path().join("g"), dir.path().join("s"));
    fs::write(&goal, "|- #p => #q\n").unwrap();
    fs::write(&script, "// first line is a comment\nimp_intro\nhyp\n").unwrap();
    let o = bproof(&["prove", path_str(&goal), path_str(&script)]);
    assert_eq!(status(&o), 1);
    assert!(stdout(&o).starts_with("script failed at line 3"), "{}", stdout(&o));
}

#[test]
fn repl_session_proves_and_emits() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("session.bprf");
    let input = format!(
        "goal #p, #q |- #p & #q\napply and_intro\nundo\napply and_intro\napply hyp\napply hyp\nqed\nemit {}\n",
        out.display()
    );
    let o = bproof_stdin(&["repl"], &input);
    assert_eq!(status(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("theorem #p, #q |- #p & #q\n"));
    assert_eq!(status(&bproof(&["check", path_str(&out)])), 0);
}

#[test]
fn repl_refuses_qed_with_open_goals() {
    let o = bproof_stdin(&["repl"], "goal |- #p & #p\napply and_intro\nqed\n");
    assert_eq!(status(&o), 1);
    assert!(stdout(&o).contains("error: 2 goal(s) still open"));
}

#[test]
fn color_is_switchable() {
    let f = proofs_dir().join("identity.bprf");
    let o = std::process::Command::new(env!("CARGO_BIN_EXE_bproof"))
        .args(["check", path_str(&f)])
        .env("BPROOF_COLOR", "1")
        .output()
        .unwrap();
    assert!(stdout(&o).starts_with("\x1b[1;32mcertified\x1b[0m"));
    assert!(!stdout(&bproof(&["check", path_str(&f)])).contains('\x1b'));
}

#[test]
fn selftest_depth_two_passes_quickly() {
    let start = std::time::Instant::now();
    let o = bproof(&["selftest", "--depth", "2"]);
    assert_eq!(status(&o), 0, "{}", stdout(&o));
    assert!(start.elapsed().as_secs() < 60);
    let out = stdout(&o);
    assert!(out.starts_with("enumerated 125 terms of depth <= 2"), "{out}");
    assert!(out.contains("all checks passed"));
}

#[test]
fn selftest_rejects_unsupported_depths() {
    assert_eq!(status(&bproof(&["selftest", "--depth", "9"])), 2);
}
