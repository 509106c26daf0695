use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_surgery-obstruction"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

/// Runs with `--json`, returns (exit code, parsed stdout).
fn run_json(args: &[&str]) -> (i32, Value) {
    let out = bin()
        .arg("--json")
        .args(args)
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let v: Value = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{e}: {stdout:?}"));
    (out.status.code().unwrap(), v)
}

fn ok_payload(args: &[&str]) -> Value {
    let (code, v) = run_json(args);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["status"], "ok");
    assert!(v.get("error_kind").is_none());
    v["payload"].clone()
}

fn error_kind(args: &[&str], exit: i32) -> String {
    let (code, v) = run_json(args);
    assert_eq!(code, exit, "{v}");
    assert_eq!(v["status"], "error");
    assert!(v.get("payload").is_none());
    v["error_kind"].as_str().unwrap().to_string()
}

#[test]
fn dedekind_examples() {
    assert_eq!(ok_payload(&["dedekind", "1", "9"])["s"], "14/27");
    assert_eq!(ok_payload(&["dedekind", "7", "1"])["s"], "0/1");
    let both = ok_payload(&["dedekind", "5", "17", "--method", "both"]);
    assert_eq!(both["direct"], both["fast"]);
    assert_eq!(error_kind(&["dedekind", "2", "4"], 2), "NotCoprime");
}

#[test]
fn lambda_examples() {
    let v = ok_payload(&["lambda", "0", "9", "1", "--normalization=paper"]);
    assert_eq!(v["lambda"], "-14/27");
    assert_eq!(v["lambda_reversed"], "14/27");
    assert_eq!(
        ok_payload(&["lambda", "0", "1", "1", "--normalization=walker"])["lambda"],
        "0/1"
    );
    assert_eq!(
        ok_payload(&["lambda", "1", "1", "1", "--normalization=walker"])["lambda"],
        "1/1"
    );
    assert_eq!(
        error_kind(&["lambda", "0", "6", "4", "--normalization=paper"], 2),
        "NotCoprime"
    );
}

#[test]
fn erratum_examples() {
    let v = ok_payload(&["erratum", "9", "1", "2", "3"]);
    assert_eq!(v["erroneous"], "CONTRADICTION");
    assert_eq!(v["corrected"], "ALLOWED");
    assert_eq!(v["epsilon"], 1);
    assert_eq!(v["ell0"], 1);
    assert_eq!(v["six_ps"], 28);
    assert_eq!(v["constraint_holds"], true);

    let v = ok_payload(&["erratum", "9", "1", "0", "3"]);
    assert_eq!(v["erroneous"], "CONTRADICTION");
    assert_eq!(v["corrected"], "RULED_OUT");

    assert_eq!(
        error_kind(&["erratum", "9", "1", "5", "3"], 2),
        "NotHomologyCompatible"
    );
    assert_eq!(
        error_kind(&["erratum", "9", "1", "10", "9"], 2),
        "NullHomologousKnot"
    );
    assert_eq!(
        error_kind(&["erratum", "27", "1", "2", "3"], 3),
        "HypothesisViolated"
    );
}

#[test]
fn enumerate_examples() {
    let v = ok_payload(&[
        "enumerate",
        "9",
        "1",
        "--m-range",
        "0:5",
        "--ell-range",
        "1:6",
    ]);
    let rows: Vec<(i64, i64, i64, i64, String)> = v["scenarios"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| {
            (
                r["m"].as_i64().unwrap(),
                r["ell"].as_i64().unwrap(),
                r["epsilon"].as_i64().unwrap(),
                r["ell0"].as_i64().unwrap(),
                r["verdict"].as_str().unwrap().to_string(),
            )
        })
        .collect();
    assert_eq!(
        rows,
        vec![
            (0, 3, -1, 1, "RULED_OUT".into()),
            (2, 3, 1, 1, "ALLOWED".into()),
            (3, 6, -1, 4, "RULED_OUT".into()),
            (5, 6, 1, 4, "ALLOWED".into()),
        ]
    );
    assert_eq!(
        error_kind(&["enumerate", "27", "1"], 3),
        "HypothesisViolated"
    );
}

#[test]
fn enumerate_q2_marks_constraint() {
    let v = ok_payload(&[
        "enumerate",
        "9",
        "2",
        "--m-range",
        "0:20",
        "--ell-range",
        "1:20",
    ]);
    let rows = v["scenarios"].as_array().unwrap();
    assert!(!rows.is_empty());
    for r in rows {
        let eps = r["epsilon"].as_i64().unwrap();
        let ell0 = r["ell0"].as_i64().unwrap();
        let allowed = (2 * eps - ell0).rem_euclid(3) == 0;
        assert_eq!(r["verdict"] == "ALLOWED", allowed, "{r}");
    }
}

#[test]
fn negative_ranges_and_bad_ranges() {
    // m = (eps p + q ell^2)/p is positive, so widening below 0 adds nothing
    let wide = ok_payload(&[
        "enumerate",
        "9",
        "1",
        "--m-range",
        "-5:5",
        "--ell-range",
        "1:6",
    ]);
    let narrow = ok_payload(&[
        "enumerate",
        "9",
        "1",
        "--m-range",
        "0:5",
        "--ell-range",
        "1:6",
    ]);
    assert_eq!(wide, narrow);
    assert_eq!(
        error_kind(&["enumerate", "9", "1", "--m-range", "5:0"], 4),
        "ParseError"
    );
    assert_eq!(
        error_kind(&["enumerate", "9", "1", "--m-range", "0-5"], 4),
        "ParseError"
    );
}

#[test]
fn banding_examples() {
    let v = ok_payload(&["banding", "--torus", "9"]);
    assert_eq!(v["verdict"]["pre_erratum"], "NO_BANDING");
    assert_eq!(v["verdict"]["post_erratum"], "INCONCLUSIVE_ERRATUM");

    let v = ok_payload(&["banding", "--torus", "5"]);
    assert_eq!(v["verdict"]["pre_erratum"], "INCONCLUSIVE");
    let notes = v["verdict"]["notes"].as_array().unwrap();
    assert!(notes.iter().any(|n| n.as_str().unwrap().contains("known")));

    assert_eq!(
        error_kind(&["banding", "--torus", "4"], 3),
        "InvalidTorusParameter"
    );

    let table = ok_payload(&["banding", "--table", "45"]);
    let no_banding: Vec<i64> = table["rows"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["pre_erratum"] == "NO_BANDING")
        .map(|r| r["k"].as_i64().unwrap())
        .collect();
    assert_eq!(no_banding, [9, 45]);
}

fn knot_file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn banding_knot_files() {
    let good = knot_file(
        r#"{"name": "T(2,9)", "determinant": 9, "signature": -8, "a2": 10,
            "quasi_alternating": true,
            "branched_cover_surgery": {"p": 9, "q": 1, "a2_of_core_knot": 0}}"#,
    );
    let path = good.path().to_str().unwrap();
    let v = ok_payload(&["banding", "--knot", path]);
    assert_eq!(v["verdict"]["pre_erratum"], "NO_BANDING");

    let missing = knot_file(
        r#"{"name": "K", "determinant": 9, "signature": -8, "a2": 1, "quasi_alternating": true}"#,
    );
    assert_eq!(
        error_kind(&["banding", "--knot", missing.path().to_str().unwrap()], 2),
        "MissingCoverData"
    );

    let unknown = knot_file(
        r#"{"name": "K", "det": 9, "signature": -8, "a2": 1, "quasi_alternating": true}"#,
    );
    assert_eq!(
        error_kind(&["banding", "--knot", unknown.path().to_str().unwrap()], 4),
        "MalformedJson"
    );
    assert_eq!(
        error_kind(&["banding", "--knot", "/nonexistent/knot.json"], 4),
        "IoError"
    );
}

#[test]
fn selftest_quick_and_fault() {
    let v = ok_payload(&["selftest", "--level=quick"]);
    assert_eq!(v["failed"], 0);
    assert!(v["passed"].as_u64().unwrap() > 0);
    assert_eq!(
        error_kind(&["selftest", "--level=quick", "--inject-fault"], 2),
        "SelftestFailed"
    );
}

#[test]
fn parse_errors_exit_4() {
    assert_eq!(error_kind(&["dedekind", "x", "4"], 4), "ParseError");
    assert_eq!(run(&["frobnicate"]).status.code(), Some(4));
    assert_eq!(run(&["lambda", "0", "9", "1"]).status.code(), Some(4));
}

#[test]
fn output_is_deterministic_and_diagnostics_go_to_stderr() {
    let args = ["--json", "enumerate", "18", "5"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(a.stderr.is_empty());

    let err = run(&["--json", "dedekind", "2", "4"]);
    assert!(!err.stderr.is_empty());
    let stdout = String::from_utf8(err.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 1);
}

#[test]
fn thread_cap_is_honored_and_validated() {
    let capped = bin()
        .env("SURGERY_OBSTRUCTION_THREADS", "1")
        .args(["--json", "enumerate", "18", "5"])
        .output()
        .unwrap();
    assert_eq!(
        capped.stdout,
        run(&["--json", "enumerate", "18", "5"]).stdout
    );

    let bad = bin()
        .env("SURGERY_OBSTRUCTION_THREADS", "zero")
        .args(["dedekind", "1", "9"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(4));
}

#[test]
fn human_output_is_default() {
    let out = run(&["dedekind", "1", "9"]);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap().trim(),
        "s(1,9) = 14/27"
    );
}

#[test]
fn status_reports_uncovered_scenarios() {
    let v = ok_payload(&["status", "36", "1", "--bound", "40"]);
    let gaps = v["outside_argument"].as_array().unwrap();
    assert!(!gaps.is_empty());
    for g in gaps {
        assert_eq!(g["erroneous_holds"], true);
        assert_eq!(g["corrected_holds"], false);
    }
}
