use rmatrix_core::classifier::ClassificationReport;
use serde_json::Value;
use std::process::{Command, Output};

fn rmatrix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rmatrix"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let out = rmatrix(args);
    let v =
        serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stderr)));
    (v, out.status.code().unwrap())
}

fn stratum_count(run: &Value, l: &str, l1: &str, l2: &str) -> usize {
    run["reports"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| {
            let c = &r["candidate"];
            r["quasitriangular"] == true
                && c["lattice"]["label"] == l
                && c["lattice1"]["label"] == l1
                && c["lattice2"]["label"] == l2
        })
        .count()
}

#[test]
fn classify_b2_weight_lattice() {
    let (v, code) = json(&[
        "classify",
        "--family",
        "B",
        "--rank",
        "2",
        "--ell",
        "5",
        "--lattice",
        "weight",
    ]);
    assert_eq!(code, 0);
    assert_eq!(v["schema_version"], 1);
    let run = &v["runs"][0];
    assert_eq!(run["lie_type"], serde_json::json!({"family": "B", "rank": 2}));
    assert_eq!(stratum_count(run, "Weight", "Weight", "Weight"), 1);
}

#[test]
fn classify_e8_has_only_the_trivial_solution() {
    let (v, code) = json(&["classify", "--family", "E", "--rank", "8", "--ell", "7"]);
    assert_eq!(code, 0);
    let reports = v["runs"][0]["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0]["quasitriangular"], true);
    assert_eq!(reports[0]["factorizable"], true);
}

#[test]
fn classify_d4_weight_lattice_at_six() {
    let (v, _) = json(&[
        "classify",
        "--family",
        "D",
        "--rank",
        "4",
        "--ell",
        "6",
        "--lattice",
        "weight",
    ]);
    assert_eq!(stratum_count(&v["runs"][0], "Weight", "Weight", "Weight"), 16);
}

#[test]
fn reports_round_trip() {
    let (v, _) = json(&["classify", "--family", "A", "--rank", "3", "--ell", "4"]);
    for r in v["runs"][0]["reports"].as_array().unwrap() {
        let parsed: ClassificationReport = serde_json::from_value(r.clone()).unwrap();
        assert_eq!(&serde_json::to_value(&parsed).unwrap(), r);
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["table", "--family", "D", "--rank", "4", "--ell-range", "3..4"];
    let a = rmatrix(&args);
    let b = rmatrix(&args);
    assert_eq!(a.stdout, b.stdout);
    let md = [
        "classify", "--family", "C", "--rank", "3", "--ell", "6", "--format", "md", "--oracle",
    ];
    assert_eq!(rmatrix(&md).stdout, rmatrix(&md).stdout);
}

#[test]
fn subgroup_selector() {
    let (v, code) = json(&[
        "classify",
        "--family",
        "A",
        "--rank",
        "3",
        "--ell",
        "3",
        "--lattice",
        "subgroup:0,0,2",
    ]);
    assert_eq!(code, 0);
    for r in v["runs"][0]["reports"].as_array().unwrap() {
        assert_eq!(
            r["candidate"]["lattice"]["label"]["Subgroup"],
            serde_json::json!([[2, 2]])
        );
    }
    let (_, code) = json(&[
        "classify",
        "--family",
        "D",
        "--rank",
        "4",
        "--ell",
        "3",
        "--lattice",
        "subgroup:0,0,0,1",
    ]);
    assert_eq!(code, 0);
}

#[test]
fn table_single_row() {
    let (v, code) = json(&[
        "table",
        "--family",
        "B",
        "--rank",
        "2",
        "--ell",
        "4",
        "--lattice",
        "weight",
    ]);
    assert_eq!(code, 0);
    let row = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["lattice1"] == "Weight")
        .unwrap();
    assert_eq!(row["computed_count"], 2);
    assert_eq!(row["predicted_count"], 2);
    assert_eq!(row["transparent"], serde_json::json!(["Z2^2"]));
}

#[test]
fn table_empty_range() {
    let (v, code) = json(&["table", "--ell-range", "5..4"]);
    assert_eq!(code, 0);
    assert_eq!(v["summary"]["rows"], 0);
}

#[test]
fn table_mismatch_exit_code() {
    let (v, code) = json(&["table", "--family", "D", "--rank", "4", "--ell", "4"]);
    assert_eq!(code, 2);
    assert!(v["summary"]["mismatches"].as_u64().unwrap() > 0);
    let out = rmatrix(&["table", "--family", "D", "--rank", "4", "--ell", "4", "--format", "md"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("| 𝔤 | ℓ | # |"));
}

#[test]
fn verify_small_types() {
    for family in ["A", "B"] {
        let rank = if family == "A" { "1" } else { "2" };
        let (v, code) = json(&["verify", "--family", family, "--rank", rank, "--ell-range", "3..8"]);
        assert_eq!(code, 0, "{v}");
        assert_eq!(v["summary"]["disagreements"], 0);
    }
    let (v, _) = json(&[
        "classify",
        "--family",
        "B",
        "--rank",
        "2",
        "--ell",
        "6",
        "--lattice",
        "root",
        "--oracle",
    ]);
    let run = &v["runs"][0];
    assert_eq!(run["reports"][0]["factorizable"], true);
    assert_eq!(run["oracle"][0]["status"], "checked");
    assert_eq!(run["oracle"][0]["report"]["monodromy"]["invertible"], true);
}

#[test]
fn strict_bound() {
    let args = ["verify", "--family", "E", "--rank", "8", "--ell", "7"];
    let (v, code) = json(&args);
    assert_eq!(code, 0);
    assert_eq!(v["summary"]["skipped"], 1);
    let (_, code) = json(&[&args[..], &["--strict"]].concat());
    assert_eq!(code, 3);
}

#[test]
fn config_errors() {
    for args in [
        &["classify", "--family", "X", "--ell", "3"][..],
        &["classify", "--rank", "2", "--ell", "3"],
        &["classify", "--family", "E", "--rank", "5", "--ell", "3"],
        &["classify", "--family", "A", "--rank", "2"],
        &["classify", "--family", "A", "--rank", "2", "--ell", "1"],
        &[
            "classify",
            "--family",
            "A",
            "--rank",
            "2",
            "--ell",
            "3",
            "--lattice",
            "bogus",
        ],
        &[
            "classify",
            "--family",
            "A",
            "--rank",
            "2",
            "--ell",
            "3",
            "--lattice",
            "subgroup:1",
        ],
        &["table", "--ell", "3", "--ell-range", "3..4"],
    ] {
        let out = rmatrix(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty());
    }
}
