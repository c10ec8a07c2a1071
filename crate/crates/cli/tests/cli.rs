//! End-to-end tests of the command line: golden outputs on the bundled
//! fixtures, exit codes, and the agreement between piped weakenings and
//! direct abstraction.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(rel: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(rel)
        .to_string_lossy()
        .into_owned()
}

fn quantifix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quantifix"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_temp(dir: &tempfile::TempDir, name: &str, content: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, content).unwrap();
    path
}

#[test]
fn enumerate_golden() {
    let out = quantifix(&["enumerate", "--language", &fixture("langs/ex1.lang")]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 21);
    assert_eq!(lines[0], "forall x:node, y:node. false");
    assert_eq!(lines[1], "forall x:node, y:node. or[p(x)]");
    assert_eq!(lines[20], "forall x:node, y:node. or[!p(y); !p(y)]");

    let canonical = quantifix(&[
        "enumerate",
        "--language",
        &fixture("langs/ex1.lang"),
        "--canonical-only",
    ]);
    let count = stdout(&canonical).lines().count();
    assert!(count < 21 && count > 0, "{count} canonical formulas");
}

#[test]
fn weaken_golden() {
    let out = quantifix(&[
        "weaken",
        "--language",
        &fixture("langs/ex1.lang"),
        "--state",
        &fixture("states/appb.state"),
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "forall x:node, y:node. or[p(x)]\n");
}

#[test]
fn weaken_of_satisfied_set_is_identity() {
    let dir = tempfile::tempdir().unwrap();
    let formulas = write_temp(&dir, "r.txt", "forall x:node, y:node. or[p(x)]\n");
    let out = quantifix(&[
        "weaken",
        "--language",
        &fixture("langs/ex1.lang"),
        "--state",
        &fixture("states/appb.state"),
        "--formulas",
        formulas.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "forall x:node, y:node. or[p(x)]\n");
}

#[test]
fn piped_weakenings_equal_direct_abstraction() {
    let dir = tempfile::tempdir().unwrap();
    let s1 = write_temp(
        &dir,
        "s1.state",
        r#"{"universe": {"node": 2}, "relations": {"p": [[0]]}}"#,
    );
    let s2 = write_temp(
        &dir,
        "s2.state",
        r#"{"universe": {"node": 2}, "relations": {"p": [[0], [1]]}}"#,
    );
    let lang = fixture("langs/ex1.lang");

    // weaken by s1, feed the output back, weaken by s2
    let first = quantifix(&["weaken", "--language", &lang, "--state", s1.to_str().unwrap()]);
    assert!(first.status.success());
    let intermediate = write_temp(&dir, "r.txt", &stdout(&first));
    let second = quantifix(&[
        "weaken",
        "--language",
        &lang,
        "--state",
        s2.to_str().unwrap(),
        "--formulas",
        intermediate.to_str().unwrap(),
    ]);
    assert!(second.status.success());

    // one invocation over both states
    let both = quantifix(&[
        "abstract",
        "--language",
        &lang,
        "--state",
        s1.to_str().unwrap(),
        "--state",
        s2.to_str().unwrap(),
    ]);
    assert!(both.status.success());
    assert_eq!(stdout(&second), stdout(&both));
    assert!(!stdout(&both).is_empty());
}

#[test]
fn non_canonical_formulas_are_rejected_without_flag() {
    let dir = tempfile::tempdir().unwrap();
    let formulas = write_temp(&dir, "r.txt", "forall x:node, y:node. or[p(y)]\n");
    let args = [
        "weaken",
        "--language",
        &fixture("langs/ex1.lang"),
        "--state",
        &fixture("states/appb.state"),
        "--formulas",
        formulas.to_str().unwrap(),
    ];
    let rejected = quantifix(&args);
    assert_eq!(rejected.status.code(), Some(2));
    let accepted = quantifix(&[&args[..], &["--auto-canonicalize"]].concat());
    assert!(accepted.status.success());
}

#[test]
fn lfp_report_round_trips_and_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let run = quantifix(&[
        "lfp",
        "--model",
        &fixture("models/lockserv.model"),
        "--language",
        &fixture("langs/lockserv.lang"),
        "--bounds",
        "node=2",
        "--no-timings",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(run.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(report["inductive"], serde_json::Value::Bool(true));
    assert_eq!(report["safe"], serde_json::Value::Bool(true));
    assert!(report.get("timings").is_none());
    assert_eq!(
        report["formula_count"].as_u64().unwrap() as usize,
        report["formulas"].as_array().unwrap().len()
    );
}

#[test]
fn check_command_verdicts_and_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // the always-false invariant is not inductive on a model with initial
    // states
    let bottom = write_temp(&dir, "bot.txt", "forall M:node, N:node. false\n");
    let out = quantifix(&[
        "check",
        "--model",
        &fixture("models/lockserv.model"),
        "--language",
        &fixture("langs/lockserv.lang"),
        "--bounds",
        "node=2",
        "--formulas",
        bottom.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("inductive: false"));

    // the empty set (true) is inductive but unsafe claims are vacuous; use
    // the actual invariant instead
    let lfp = quantifix(&[
        "lfp",
        "--model",
        &fixture("models/lockserv.model"),
        "--language",
        &fixture("langs/lockserv.lang"),
        "--bounds",
        "node=2",
        "--no-timings",
    ]);
    let report: serde_json::Value = serde_json::from_slice(&lfp.stdout).unwrap();
    let formulas: Vec<String> = report["formulas"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect();
    let inv = write_temp(&dir, "inv.txt", &(formulas.join("\n") + "\n"));
    let out = quantifix(&[
        "check",
        "--model",
        &fixture("models/lockserv.model"),
        "--language",
        &fixture("langs/lockserv.lang"),
        "--bounds",
        "node=2",
        "--formulas",
        inv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("inductive: true"));
    assert!(stdout(&out).contains("safe: true"));
}

#[test]
fn two_sort_fixture_reaches_a_safe_fixpoint() {
    let out = quantifix(&[
        "lfp",
        "--model",
        &fixture("models/sharded-kv.model"),
        "--language",
        &fixture("langs/sharded-kv.lang"),
        "--bounds",
        "key=2,node=2",
        "--no-timings",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["inductive"], serde_json::Value::Bool(true));
    assert_eq!(report["safe"], serde_json::Value::Bool(true));
    // per-key mutual exclusion is the interesting invariant
    let formulas = report["formulas"].as_array().unwrap();
    assert!(formulas
        .iter()
        .any(|f| f.as_str().unwrap().ends_with("or[M = N; !owner(K, M); !owner(K, N)]")));
}

#[test]
fn ef_language_fixpoint_finds_the_existential_invariant() {
    let out = quantifix(&[
        "lfp",
        "--model",
        &fixture("models/kv-transfer.model"),
        "--language",
        &fixture("langs/kv-transfer.lang"),
        "--bounds",
        "key=2,node=2",
        "--no-timings",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["inductive"], serde_json::Value::Bool(true));
    assert_eq!(report["safe"], serde_json::Value::Bool(true));
    let formulas: Vec<&str> = report["formulas"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    // no lost keys needs the existential quantifier
    assert!(formulas.contains(&"forall K:key. exists N:node. or[owner(K, N)]"));
}

#[test]
fn zero_iteration_cap_exits_4() {
    let out = quantifix(&[
        "lfp",
        "--model",
        &fixture("models/lockserv.model"),
        "--language",
        &fixture("langs/lockserv.lang"),
        "--bounds",
        "node=2",
        "--max-iters",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn parse_errors_carry_positions_and_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_temp(&dir, "bad.lang", "(sort node)\n(forall ((x node)) (or 2\n");
    let out = quantifix(&["enumerate", "--language", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("2:"), "stderr names the line: {err}");
    assert!(stdout(&out).is_empty(), "stdout carries data only");
}

#[test]
fn missing_state_variable_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    // an open language: one free variable x
    let lang = write_temp(
        &dir,
        "open.lang",
        "(sort node)\n(relation p (node))\n(atoms (literals :vars ((x node)) :equality false))\n",
    );
    let state = write_temp(
        &dir,
        "s.state",
        r#"{"universe": {"node": 1}, "relations": {"p": []}}"#,
    );
    let out = quantifix(&[
        "weaken",
        "--language",
        lang.to_str().unwrap(),
        "--state",
        state.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("does not assign"));

    // with the assignment present, bottom weakens to the satisfied literal
    let state = write_temp(
        &dir,
        "s2.state",
        r#"{"universe": {"node": 1}, "relations": {"p": []}, "assignment": {"x": 0}}"#,
    );
    let out = quantifix(&[
        "weaken",
        "--language",
        lang.to_str().unwrap(),
        "--state",
        state.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "!p(x)\n");
}

#[test]
fn language_file_signature_must_match_the_model() {
    let dir = tempfile::tempdir().unwrap();
    // same sort but a different relation set than the lock server
    let lang = write_temp(
        &dir,
        "other.lang",
        "(sort node)\n(relation p (node))\n(forall ((x node)) (or 1 (atoms (literals))))\n",
    );
    let out = quantifix(&[
        "lfp",
        "--model",
        &fixture("models/lockserv.model"),
        "--language",
        lang.to_str().unwrap(),
        "--bounds",
        "node=2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("differs from the model"));
}

#[test]
fn duplicate_bounds_are_rejected() {
    let out = quantifix(&[
        "lfp",
        "--model",
        &fixture("models/lockserv.model"),
        "--language",
        &fixture("langs/lockserv.lang"),
        "--bounds",
        "node=2,node=3",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn hidden_oracle_commands_agree_with_the_engine() {
    let up = quantifix(&[
        "oracle",
        "upward-closure",
        "--language",
        &fixture("langs/ex1.lang"),
    ]);
    assert!(up.status.success());
    assert_eq!(stdout(&up).lines().count(), 21);

    let naive = quantifix(&[
        "oracle",
        "naive-weaken",
        "--language",
        &fixture("langs/ex1.lang"),
        "--state",
        &fixture("states/appb.state"),
    ]);
    assert!(naive.status.success());
    assert_eq!(stdout(&naive), "forall x:node, y:node. or[p(x)]\n");
}
