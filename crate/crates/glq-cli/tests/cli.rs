//! End-to-end tests of the `glq` binary: output payloads, exit codes, and
//! stream determinism.

use std::process::{Command, Output};

fn glq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_glq"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn verify_euler_reports_ok_and_exits_zero() {
    let out = glq(&["verify", "--kind", "euler", "--q", "2", "--order", "25"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["ok"], serde_json::Value::Bool(true));
    assert_eq!(report["kind"], "euler");
    assert_eq!(report["q"], "2");
    assert_eq!(report["order"], 25);
}

#[test]
fn marginal_prints_the_bare_rational() {
    let out = glq(&["marginal", "--q", "2", "--n", "2", "--slots", "1:0=2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "2/3\n");
}

#[test]
fn converge_csv_has_rows_with_decreasing_error_tail() {
    let out = glq(&[
        "converge", "--q", "2", "--d", "1", "--partition", "1", "--n-from", "1", "--n-to", "25",
        "--tol", "1e-9", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 26, "header plus 25 rows");
    assert_eq!(
        lines[0],
        "n,exact_marginal,exact_decimal,limit_value,abs_error,error_bound"
    );
    // |error| strictly decreases over the last ten rows
    let errors: Vec<f64> = lines[16..]
        .iter()
        .map(|l| l.split(',').nth(4).unwrap().parse().unwrap())
        .collect();
    for w in errors.windows(2) {
        assert!(w[0] > w[1], "error tail not decreasing: {w:?}");
    }
}

#[test]
fn usage_errors_exit_two() {
    // unknown flag (clap)
    let out = glq(&["marginal", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    // domain error: slot index out of range over F_2
    let out = glq(&["marginal", "--q", "2", "--n", "2", "--slots", "1:1=1"]);
    assert_eq!(out.status.code(), Some(2));
    // malformed partition text
    let out = glq(&["marginal", "--q", "2", "--n", "2", "--slots", "1:0=2,x"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn resource_errors_exit_three() {
    let out = glq(&["enumerate", "collections", "--q", "2", "--n", "40"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn sampling_is_deterministic_per_seed() {
    let args = [
        "sample", "grand", "--q", "2", "--v", "1/2", "--seed", "11", "--samples", "50",
    ];
    let a = glq(&args);
    let b = glq(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let c = glq(&[
        "sample", "grand", "--q", "2", "--v", "1/2", "--seed", "12", "--samples", "50",
    ]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn sample_lines_are_valid_collection_records() {
    let out = glq(&[
        "sample", "plancherel", "--q", "2", "--n", "3", "--seed", "7", "--samples", "5",
        "--with-poly",
    ]);
    assert_eq!(out.status.code(), Some(0));
    for line in stdout(&out).lines() {
        let record: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(record["n"], 3);
        for a in record["assignments"].as_array().unwrap() {
            assert!(a["degree"].as_u64().unwrap() >= 1);
            assert!(a["poly"].as_str().unwrap().contains('x'));
            assert!(!a["partition"].as_str().unwrap().is_empty());
        }
    }
}

#[test]
fn verify_report_round_trips_into_core_type() {
    let out = glq(&["verify", "--kind", "factorization", "--q", "3", "--order", "12"]);
    assert_eq!(out.status.code(), Some(0));
    let report: glq_core::ensembles::VerifyReport =
        serde_json::from_str(&stdout(&out)).unwrap();
    assert!(report.ok);
    assert_eq!(report.kind, "factorization");
}

#[test]
fn limit_emits_certified_decimal_pair() {
    let out = glq(&["limit", "--q", "2", "--d", "1", "--partition", "1", "--tol", "1e-9"]);
    assert_eq!(out.status.code(), Some(0));
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let v: f64 = value["value"].as_str().unwrap().parse().unwrap();
    let e: f64 = value["err"].as_str().unwrap().parse().unwrap();
    assert!((v - 0.199_359_462_5).abs() < 1e-9);
    assert!(e <= 1e-9);
}

#[test]
fn weight_forms() {
    // fugacity-measure weight of (1) at v=1, q=2: exact part 2
    let out = glq(&["weight", "--q", "2", "--v", "1", "--partition", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["exact_part"], "2");

    // plancherel weight of a collection
    let out = glq(&["weight", "--q", "2", "--slots", "1:0=2"]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["plancherel"], "2/3");
    assert_eq!(report["degree"], "2");

    // grand-canonical weight of the same collection
    let out = glq(&["weight", "--q", "2", "--v", "1/2", "--slots", "1:0=2"]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(report["value"]["err"].as_str().is_some());

    // bad fugacity is a usage error
    let out = glq(&["weight", "--q", "2", "--v", "3", "--slots", "1:0=2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn enumerate_irreducibles_matches_field_theory() {
    let out = glq(&["enumerate", "irreducibles", "--q", "2", "--d", "3"]);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].contains("x^3+x+1"));
    assert!(lines[1].contains("x^3+x^2+1"));
    // proper prime powers are unsupported for explicit enumeration
    let out = glq(&["enumerate", "irreducibles", "--q", "4", "--d", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_flag_writes_the_payload_to_a_file() {
    let dir = std::env::temp_dir().join(format!("glq-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = glq(&[
        "verify", "--kind", "euler", "--q", "2", "--order", "10", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let contents = std::fs::read_to_string(&path).unwrap();
    assert!(contents.contains("\"ok\": true"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn histogram_emits_csv() {
    let out = glq(&[
        "sample", "grand", "--q", "2", "--v", "1/2", "--seed", "3", "--samples", "500",
        "--histogram",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "size,count,expected_mass");
    let first = lines.next().unwrap();
    assert!(first.starts_with("0,"));
    let mass: f64 = first.split(',').nth(2).unwrap().parse().unwrap();
    assert!((mass - 0.2888).abs() < 0.001);
}
