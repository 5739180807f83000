use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn agw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_agw"))
        .args(args)
        .env_remove("AGW_BUDGET")
        .output()
        .expect("agw runs")
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = agw(&all);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn values(report: &Value) -> Vec<u64> {
    report["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["value"].as_u64().unwrap())
        .collect()
}

#[test]
fn exact_weights_of_the_small_code() {
    let r = json(&[
        "weights", "exact", "--q", "2", "--l", "1", "--m", "3", "--h", "1", "--r", "1..3",
    ]);
    assert_eq!(values(&r), [2, 3, 4]);
    assert_eq!(r["params"]["lp"], 2);
    for row in r["results"].as_array().unwrap() {
        assert_eq!(row["kind"], "d");
        assert!(row["witness"].is_array());
    }
}

#[test]
fn lp_counts_columns() {
    let r = json(&[
        "weights", "exact", "--q", "2", "--l", "1", "--lp", "3", "--h", "1", "--r", "1..3",
    ]);
    assert_eq!(values(&r), [4, 6, 7]);
    let both = agw(&[
        "weights", "exact", "--q", "2", "--l", "1", "--lp", "3", "--m", "3", "--h", "1",
    ]);
    assert_eq!(both.status.code(), Some(2));
}

#[test]
fn table1_matches() {
    let out = agw(&["verify", "table1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("297/297 checks passed"), "{text}");
    let r = json(&["verify", "table1"]);
    assert_eq!(r["checks"].as_array().unwrap().len(), 297);
}

#[test]
fn table1_reference_files() {
    let good = agw(&["verify", "table1", "--reference", &fixture("table1_good.csv")]);
    assert_eq!(good.status.code(), Some(0));
    let bad = agw(&[
        "verify",
        "table1",
        "--reference",
        &fixture("table1_bad.csv"),
        "--format",
        "json",
    ]);
    assert_eq!(bad.status.code(), Some(1));
    let r: Value = serde_json::from_slice(&bad.stdout).unwrap();
    let failed: Vec<&Value> = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0]["name"], "q=3 s=3");
    assert_eq!(failed[0]["expected"], 7);
    assert_eq!(failed[0]["actual"], 6);
}

#[test]
fn dual_formula_column() {
    let r = json(&["weights", "dual", "--mode", "formula", "--q", "3", "--s", "1..6"]);
    assert_eq!(values(&r), [3, 5, 6, 7, 8, 9]);
    let r = json(&["weights", "dual", "--mode", "recursive", "--q", "3", "--s", "1..6"]);
    assert_eq!(values(&r), [3, 5, 6, 7, 8, 9]);
}

#[test]
fn dual_terminal_modes_agree() {
    let shape = ["--q", "2", "--l", "2", "--lp", "3", "--h", "2", "--s", "20..23"];
    for mode in ["formula", "recursive", "transform"] {
        let mut args = vec!["weights", "dual", "--side", "terminal", "--mode", mode];
        args.extend(shape);
        assert_eq!(values(&json(&args)), [44, 43, 42, 40], "{mode}");
    }
}

#[test]
fn dual_transform_matches_formula() {
    let shape = ["--q", "2", "--l", "1", "--lp", "3", "--h", "1", "--s", "1..4"];
    let mut formula = vec!["weights", "dual", "--mode", "formula"];
    formula.extend(shape);
    let mut transform = vec!["weights", "dual", "--mode", "transform"];
    transform.extend(shape);
    assert_eq!(values(&json(&formula)), [4, 6, 7, 8]);
    assert_eq!(values(&json(&transform)), [4, 6, 7, 8]);
}

#[test]
fn formula_entries() {
    let r = json(&["weights", "formula", "--q", "2", "--l", "2", "--lp", "3", "--h", "2"]);
    let pairs: Vec<(u64, u64)> = r["results"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| (x["r_or_s"].as_u64().unwrap(), x["value"].as_u64().unwrap()))
        .collect();
    assert_eq!(
        pairs,
        [(1, 24), (2, 36), (3, 42), (6, 56), (7, 60), (8, 62), (9, 63), (10, 64)]
    );
}

#[test]
fn params_report() {
    let r = json(&["params", "--q", "3", "--l", "2", "--lp", "2", "--h", "2"]);
    assert_eq!(r["params"]["n"], 81);
    assert_eq!(r["params"]["k"], 6);
    assert_eq!(r["params"]["d"], 48);
}

#[test]
fn verify_suites_pass() {
    for suite in ["lemma-a", "lemma-b", "minors", "witnesses", "duality", "bounds"] {
        let r = json(&["verify", suite]);
        let checks = r["checks"].as_array().unwrap();
        assert!(!checks.is_empty(), "{suite}");
        assert!(checks.iter().all(|c| c["pass"] == true), "{suite}");
    }
}

#[test]
fn conjecture_is_reported() {
    let r = json(&["verify", "conjecture"]);
    assert_eq!(values(&r), [10, 10]);
    assert!(r["checks"].as_array().unwrap().is_empty());
}

#[test]
fn build_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("code.json");
    let path = path.to_str().unwrap();
    let out = agw(&["build", "--q", "3", "--l", "1", "--lp", "2", "--h", "1", "--out", path]);
    assert_eq!(out.status.code(), Some(0));
    let from_file = json(&["weights", "exact", "--code", path]);
    let from_shape = json(&["weights", "exact", "--q", "3", "--l", "1", "--lp", "2", "--h", "1"]);
    assert_eq!(from_file["results"], from_shape["results"]);
    assert_eq!(values(&from_file), [6, 8, 9]);
}

#[test]
fn csv_layout() {
    let out = agw(&["weights", "dual", "--q", "2", "--s", "1..3", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text,
        "kind,r_or_s,value,method,q,witness\n\
         dual-initial,1,4,direct-formula,,\n\
         dual-initial,2,6,direct-formula,,\n\
         dual-initial,3,7,direct-formula,,\n"
    );
    let out = agw(&["table", "--qs", "2,3", "--rows", "2", "--format", "csv"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "s,2,3\n1,4,3\n2,6,5\n");
}

#[test]
fn usage_and_domain_errors_exit_2() {
    let cases: &[&[&str]] = &[
        &["weights", "exact", "--q", "2", "--bogus"],
        &["weights", "exact", "--q", "2", "--l", "1"],
        &["weights", "exact", "--q", "6", "--l", "1", "--lp", "2", "--h", "1"],
        &[
            "weights", "exact", "--q", "2", "--l", "1", "--lp", "2", "--h", "1", "--r", "1..9",
        ],
        &[
            "weights", "exact", "--q", "2", "--l", "1", "--lp", "2", "--h", "1", "--r", "3..1",
        ],
        &["weights", "formula", "--q", "2", "--l", "2", "--lp", "1", "--h", "1"],
        &[
            "weights", "dual", "--q", "2", "--l", "1", "--lp", "1", "--h", "1", "--s", "1",
        ],
        &["verify", "nothing"],
        &[
            "params", "--q", "2", "--l", "1", "--lp", "2", "--h", "1", "--budget", "0",
        ],
    ];
    for args in cases {
        assert_eq!(agw(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn budget_error_names_the_count() {
    let out = agw(&[
        "weights", "exact", "--q", "2", "--l", "2", "--lp", "3", "--h", "2", "--r", "5", "--budget", "100",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("109221651"), "{err}");
    let env = Command::new(env!("CARGO_BIN_EXE_agw"))
        .args([
            "weights", "exact", "--q", "2", "--l", "2", "--lp", "2", "--h", "2", "--r", "2",
        ])
        .env("AGW_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(2));
}

#[test]
fn sequential_workers_match() {
    let args = ["weights", "exact", "--q", "2", "--l", "2", "--lp", "2", "--h", "1"];
    let mut seq = args.to_vec();
    seq.extend(["--workers", "1"]);
    let mut par = args.to_vec();
    par.extend(["--workers", "2"]);
    assert_eq!(json(&seq)["results"], json(&par)["results"]);
}
