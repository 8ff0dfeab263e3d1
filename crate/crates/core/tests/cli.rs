use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn clawbench(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clawbench"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

const C5: &str = "p edge 5 5\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 1\n";

#[test]
fn invariants_report() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "c5.dimacs", C5);
    let v = stdout_json(&clawbench(&["invariants", "c5.dimacs"], dir.path()));
    assert_eq!(
        (v["alpha"].as_u64(), v["omega"].as_u64(), v["chi"].as_u64()),
        (Some(2), Some(2), Some(3))
    );
    assert_eq!(v["max_claw_witness"]["center"], 0);
    let v = stdout_json(&clawbench(&["invariants", "c5.dimacs", "--cliques"], dir.path()));
    assert_eq!(v["cliques"].as_array().unwrap().len(), 5);
    assert!(v.get("alpha").is_none());
}

#[test]
fn ramsey_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let found = clawbench(
        &[
            "ramsey", "search", "--s", "3", "--t", "3", "--n", "5", "--seed", "1", "--budget", "10000", "-o",
            "w.dimacs",
        ],
        dir.path(),
    );
    assert_eq!(found.status.code(), Some(0));
    assert!(dir.path().join("w.dimacs").exists());
    let absent = clawbench(
        &[
            "ramsey", "search", "--s", "3", "--t", "3", "--n", "6", "--budget", "2000",
        ],
        dir.path(),
    );
    assert_eq!(absent.status.code(), Some(2));
    let catalog = clawbench(&["ramsey", "catalog", "--s", "3", "--t", "4"], dir.path());
    assert!(String::from_utf8(catalog.stdout).unwrap().contains("p edge 8"));
    assert_eq!(
        clawbench(&["ramsey", "catalog", "--s", "9", "--t", "9"], dir.path())
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn construction_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "c5.dimacs", C5);
    let gen = clawbench(
        &[
            "gen",
            "construction",
            "--k",
            "4",
            "--p",
            "2",
            "--tau",
            "3",
            "--ramsey",
            "c5.dimacs",
            "-o",
            "g.dimacs",
            "--labels",
            "l.json",
        ],
        dir.path(),
    );
    assert!(gen.status.success());
    let labels: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("l.json")).unwrap()).unwrap();
    assert_eq!(labels["blocks"], 2);
    assert_eq!(labels["entries"].as_array().unwrap().len(), 18);
    let v = stdout_json(&clawbench(
        &[
            "verify",
            "lemma1",
            "--graph",
            "g.dimacs",
            "--labels",
            "l.json",
            "--k",
            "4",
            "--p",
            "2",
            "--tau",
            "3",
            "--ramsey",
            "c5.dimacs",
        ],
        dir.path(),
    ));
    assert!(v["claims"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
    // labels for different parameters are rejected
    let bad = clawbench(
        &[
            "verify",
            "lemma1",
            "--graph",
            "g.dimacs",
            "--labels",
            "l.json",
            "--k",
            "4",
            "--p",
            "3",
            "--tau",
            "3",
            "--ramsey",
            "c5.dimacs",
        ],
        dir.path(),
    );
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn bcc_identity_and_permutation() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "c5.dimacs", C5);
    write(dir.path(), "perm.json", "[1, 0, 2, 3, 4]");
    for matching in ["identity", "perm.json"] {
        let out = clawbench(
            &[
                "gen",
                "bcc",
                "--h1",
                "c5.dimacs",
                "--h2",
                "c5.dimacs",
                "--matching",
                matching,
            ],
            dir.path(),
        );
        assert!(out.status.success());
        assert!(String::from_utf8(out.stdout).unwrap().contains("p edge 5"));
    }
}

#[test]
fn relax_commands() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "c5.dimacs", C5);
    write(dir.path(), "w.txt", "5\n1\n\"1/1\"\n1\n1\n");
    let uniform = clawbench(&["relax", "sa-uniform", "--level", "1", "c5.dimacs"], dir.path());
    std::fs::write(dir.path().join("y.json"), &uniform.stdout).unwrap();
    let v = stdout_json(&clawbench(
        &["relax", "sa-check", "--level", "1", "--point", "y.json", "c5.dimacs"],
        dir.path(),
    ));
    assert_eq!(v["feasible"], true);

    // singletons at 1/2 break the edge constraint at level 1
    let y: Value = serde_json::from_slice(&uniform.stdout).unwrap();
    let text = serde_json::to_string(&y).unwrap().replace("\"1/3\"", "\"1/2\"");
    write(dir.path(), "bad.json", &text);
    let bad = clawbench(
        &["relax", "sa-check", "--level", "1", "--point", "bad.json", "c5.dimacs"],
        dir.path(),
    );
    assert_eq!(bad.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&bad.stdout).unwrap();
    assert_eq!(v["feasible"], false);

    let v = stdout_json(&clawbench(
        &["relax", "qstab-value", "c5.dimacs", "--weights", "w.txt"],
        dir.path(),
    ));
    assert_eq!(v["optimum"], "6");
    let v = stdout_json(&clawbench(
        &["relax", "sa-optimize", "--level", "0", "c5.dimacs"],
        dir.path(),
    ));
    assert_eq!(v["optimum"], "5/2");
    let v = stdout_json(&clawbench(&["relax", "qstab-bad", "--t", "3", "c5.dimacs"], dir.path()));
    assert_eq!(
        (v["objective"].as_str(), v["feasible"].as_bool()),
        (Some("5/3"), Some(true))
    );
    assert_eq!(
        clawbench(&["relax", "qstab-bad", "--t", "2", "c5.dimacs"], dir.path())
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn mwis_commands() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "c5.dimacs", C5);
    write(dir.path(), "w.txt", "5\n1\n1\n1\n1\n");
    let v = stdout_json(&clawbench(
        &["mwis", "exact", "c5.dimacs", "--weights", "w.txt"],
        dir.path(),
    ));
    assert_eq!((v["method"].as_str(), v["weight"].as_str()), (Some("exact"), Some("6")));
    let v = stdout_json(&clawbench(&["mwis", "greedy", "c5.dimacs"], dir.path()));
    assert_eq!(v["set"], serde_json::json!([0, 2]));
}

#[test]
fn experiments_and_output_options() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "c5.dimacs", C5);
    let v = stdout_json(&clawbench(
        &[
            "experiment",
            "thm5",
            "--k",
            "4",
            "--p",
            "2",
            "--tau",
            "3",
            "--ell",
            "1",
            "--ramsey",
            "auto",
            "--solve-lp",
        ],
        dir.path(),
    ));
    assert_eq!(v["n"], 18);
    assert_eq!(v["yhat_feasible"], true);
    assert!(v["sa_optimum"].is_string());

    let csv = clawbench(
        &["experiment", "appendix-c", "--k", "4", "--fk", "72", "--format", "csv"],
        dir.path(),
    );
    assert!(csv.status.success());
    let text = String::from_utf8(csv.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().contains(",36,"));

    let out = clawbench(
        &[
            "experiment",
            "appendix-a",
            "--graph",
            "c5.dimacs",
            "--t",
            "3",
            "--out",
            "a.json",
        ],
        dir.path(),
    );
    assert!(out.status.success() && out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("a.json")).unwrap()).unwrap();
    assert_eq!(v["ratio"], "5/6");

    let guarded = stdout_json(&clawbench(
        &[
            "experiment",
            "thm5",
            "--k",
            "4",
            "--p",
            "1",
            "--tau",
            "3",
            "--ell",
            "1",
            "--guard-vertices",
            "5",
        ],
        dir.path(),
    ));
    assert!(guarded["alpha"].is_null());
    assert!(guarded["unverified"].as_array().unwrap().iter().any(|f| f == "alpha"));
}

#[test]
fn failing_claim_exits_with_assertion_status() {
    let dir = tempfile::tempdir().unwrap();
    // circulant(8, {2, 3}): a (3,4)-witness on which two blocks contain a 4-claw
    let out = clawbench(
        &["experiment", "thm5", "--k", "4", "--p", "2", "--tau", "4", "--ell", "1"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lemma_claims"));
}

#[test]
fn bad_input_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "broken.dimacs", "p edge 2 1\ne 1 7\n");
    let out = clawbench(&["invariants", "broken.dimacs"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "));
    assert_eq!(
        clawbench(&["invariants", "missing.dimacs"], dir.path()).status.code(),
        Some(1)
    );
}
