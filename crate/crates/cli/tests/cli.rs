use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn ubound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ubound"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8")
}

/// CSV as (header, rows).
fn csv_rows(out: &Output) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_reader(out.stdout.as_slice());
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

fn json_rows(out: &Output) -> Vec<Value> {
    match serde_json::from_slice(&out.stdout).expect("valid JSON") {
        Value::Array(rows) => rows,
        other => panic!("expected array, got {other}"),
    }
}

#[test]
fn table1_reproduces_closed_forms() {
    let out = ubound(&["table1"]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = csv_rows(&out);
    assert_eq!(rows.len(), 14);
    let (label, rhs, ok) = (column(&header, "row"), column(&header, "rhs"), column(&header, "match"));
    let find = |l: &str| rows.iter().find(|r| r[label] == l).unwrap();
    assert_eq!(find("4a (ii)")[rhs], "0.395061728395");
    assert_eq!(find("15")[rhs], "0.136082763488");
    assert_eq!(find("17 (i)")[rhs], "0.166666666667");
    assert!(rows.iter().all(|r| r[ok] == "true"));
    assert!(stdout(&out).ends_with('\n') && !stdout(&out).contains('\r'));
}

#[test]
fn table1_with_headline_and_zero_tolerance_mismatch() {
    let out = ubound(&["table1", "--with-headline"]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = csv_rows(&out);
    assert_eq!(rows.len(), 18);
    let combined = rows.iter().find(|r| r[0] == "headline combined").unwrap();
    assert_eq!(combined[column(&header, "rhs")], "0.853460638652");

    // some rows carry rounding error, so an impossible tolerance must fail
    let out = ubound(&["table1", "--tolerance", "0"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stderr.is_empty());
}

#[test]
fn csv_and_json_carry_identical_numbers() {
    for args in [
        vec!["table1", "--with-headline"],
        vec!["sweep", "--system", "qubit", "--steps", "13"],
        vec!["oscillator", "--eta-min", "0.5", "--eta-max", "2", "--steps", "7"],
    ] {
        let csv_out = ubound(&args);
        let mut json_args = args.clone();
        json_args.extend(["--format", "json"]);
        let json_out = ubound(&json_args);
        let (header, rows) = csv_rows(&csv_out);
        let objects = json_rows(&json_out);
        assert_eq!(rows.len(), objects.len());
        for (row, obj) in rows.iter().zip(&objects) {
            for (name, cell) in header.iter().zip(row) {
                match &obj[name] {
                    Value::Number(n) => {
                        let (a, b) = (n.as_f64().unwrap(), cell.parse::<f64>().unwrap());
                        assert_eq!(format!("{a:.14e}"), format!("{b:.14e}"), "{name}");
                    }
                    Value::Null => assert_eq!(cell, ""),
                    Value::Bool(v) => assert_eq!(cell, &v.to_string()),
                    Value::String(s) => assert_eq!(cell, s),
                    other => panic!("unexpected {other}"),
                }
            }
        }
    }
}

#[test]
fn qutrit_sweep_identities() {
    let out = ubound(&["sweep", "--system", "qutrit"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json_rows(&ubound(&["sweep", "--system", "qutrit", "--format", "json"]));
    assert_eq!(rows.len(), 181);
    let mut case2 = 0;
    for r in &rows {
        assert!((r["var_sum"].as_f64().unwrap() - 1.0).abs() <= 1e-11);
        if r["case2"].as_bool().unwrap() {
            case2 += 1;
            assert_eq!(r["bypass_ok"], Value::Bool(true));
        }
    }
    assert_eq!(case2, 2);
}

#[test]
fn qubit_sweep_identity() {
    let rows = json_rows(&ubound(&["sweep", "--system", "qubit", "--format", "json"]));
    for r in &rows {
        let c = (2.0 * r["phi"].as_f64().unwrap()).cos();
        assert!((r["var_sum"].as_f64().unwrap() - 1.0 - c * c).abs() <= 1e-10);
    }
}

#[test]
fn single_point_at_quarter_turn_is_case_two() {
    let phi = std::f64::consts::FRAC_PI_4.to_string();
    let rows = json_rows(&ubound(&["sweep", "--system", "qutrit", "--phi-start", &phi, "--steps", "1", "--format", "json"]));
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["case"], "CASE2_ZERO_B");
    // shifted operator keeps dJx = 1
    assert_eq!(rows[0]["bypass_delta"].as_f64(), rows[0]["var_a"].as_f64().map(f64::sqrt));
}

#[test]
fn sweep_rejects_bad_range() {
    let out = ubound(&["sweep", "--system", "qutrit", "--phi-start", "1", "--phi-end", "0.5", "--steps", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = ubound(&["sweep", "--system", "qutrit", "--steps", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oscillator_scan() {
    let rows = json_rows(&ubound(&["oscillator", "--eta-min", "0.1", "--eta-max", "1.9", "--steps", "19", "--format", "json"]));
    let get = |q: &str| rows.iter().find(|r| r["quantity"] == q).unwrap();
    let best = get("trial_bound_max");
    assert!((best["value"].as_f64().unwrap() - 0.395).abs() <= 5e-4);
    assert!((best["eta"].as_f64().unwrap() - 1.0).abs() <= 1e-12);
    assert!((get("half_line")["value"].as_f64().unwrap() - 0.282095).abs() <= 1e-6);
    assert_eq!(get("lhs")["value"].as_f64(), Some(0.5));
    assert!((get("split_aux")["value"].as_f64().unwrap() - best["value"].as_f64().unwrap()).abs() <= 1e-10);
}

#[test]
fn oscillator_rejects_bad_range() {
    assert_eq!(ubound(&["oscillator", "--eta-min", "0", "--eta-max", "2"]).status.code(), Some(2));
    assert_eq!(ubound(&["oscillator", "--eta-min", "2", "--eta-max", "1"]).status.code(), Some(2));
}

#[test]
fn bounds_file_matches_table1() {
    let from_file = csv_rows(&ubound(&["bounds", &data("table1.json")]));
    let table = csv_rows(&ubound(&["table1"]));
    let (fh, frows) = from_file;
    let (th, trows) = table;
    assert_eq!(frows.len(), trows.len());
    for (f, t) in frows.iter().zip(&trows) {
        assert_eq!(f[column(&fh, "rhs")], t[column(&th, "rhs")]);
        assert_eq!(f[column(&fh, "case")], "CASE3_ORTHOGONAL");
    }
}

#[test]
fn bounds_file_dependent_deviations_saturate() {
    let out = ubound(&["bounds", &data("dependent.json"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = json_rows(&out);
    assert_eq!(rows[0]["relation"], "EQ2");
    assert_eq!(rows[0]["saturated"], Value::Bool(true));
    assert_eq!(rows[0]["case"], "CASE1_DEPENDENT");
}

#[test]
fn bounds_file_refuses_strengthened_product_outside_case_three() {
    let out = ubound(&["bounds", &data("case1_eq17.json")]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("precondition violated"), "{stderr}");
    // the refused relation is still listed
    let (header, rows) = csv_rows(&out);
    assert_eq!(rows.len(), 2);
    assert!(rows[1][column(&header, "error")].contains("orthogonal"));
}

#[test]
fn bounds_file_load_errors() {
    let out = ubound(&["bounds", &data("non_hermitian.json")]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("observables.B") && stderr.contains("not Hermitian"), "{stderr}");

    assert_eq!(ubound(&["bounds", &data("missing.json")]).status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\"dim\": 3,").unwrap();
    assert_eq!(ubound(&["bounds", broken.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let out = ubound(&["table1", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let rows: Vec<Value> = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(rows.len(), 14);
}
