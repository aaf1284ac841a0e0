use std::f64::consts::{PI, SQRT_2};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use stinespring_cli::format::{read_trace_csv, MatrixJson};
use stinespring_core::{ComplexMatrix, TraceSource};
use tempfile::TempDir;

const DEPHASING: &str = r#"{"h0":{"rows":2,"cols":2,"data":[[0,0],[0,0],[0,0],[0,0]]},
"jumps":[{"rows":2,"cols":2,"data":[[0,0],[0,0],[0,0],[1,0]]}]}"#;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_stinespring"));
    c.env_remove("STINESPRING_TOL");
    c
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json_stdout(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn matrix(v: &Value) -> ComplexMatrix {
    let m: MatrixJson = serde_json::from_value(v.clone()).unwrap();
    ComplexMatrix::try_from(&m).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn error_object(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr carries a JSON error object")
}

#[test]
fn identity_kraus_to_rank_one_choi() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "id.json",
        r#"{"representation":"kraus","operators":[{"rows":2,"cols":2,"data":[[1,0],[0,0],[0,0],[1,0]]}]}"#,
    );
    let v = json_stdout(&run(&["convert", path(&f), "--to", "choi"]));
    assert_eq!(v["representation"], "choi");
    let choi = matrix(&v["choi"]);
    let vec_id = ComplexMatrix::identity(2).vec();
    assert!(choi.approx_eq(&ComplexMatrix::outer(&vec_id, &vec_id), 0.0));
    assert_eq!(v["metadata"]["choi_distance"].as_f64(), Some(0.0));
}

#[test]
fn dephasing_choi_to_two_kraus_operators() {
    let dir = TempDir::new().unwrap();
    let lambda = (-0.5f64).exp();
    let choi = format!(
        r#"{{"representation":"choi","in_dim":2,"out_dim":2,"choi":{{"rows":4,"cols":4,"data":[
        [1,0],[0,0],[0,0],[{lambda},0],
        [0,0],[0,0],[0,0],[0,0],
        [0,0],[0,0],[0,0],[0,0],
        [{lambda},0],[0,0],[0,0],[1,0]]}}}}"#
    );
    let f = write(&dir, "choi.json", &choi);
    let v = json_stdout(&run(&["convert", path(&f), "--to", "kraus", "--verify"]));
    assert_eq!(v["operators"].as_array().unwrap().len(), 2);
    assert_eq!(v["metadata"]["kraus_count"], 2);
    assert!(v["metadata"]["choi_distance"].as_f64().unwrap() < 1e-12);
}

#[test]
fn dephasing_kraus_to_unitary_dilation() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (0.8f64.sqrt(), 0.2f64.sqrt());
    let kraus = format!(
        r#"{{"representation":"kraus","operators":[
        {{"rows":2,"cols":2,"data":[[{a},0],[0,0],[0,0],[{a},0]]}},
        {{"rows":2,"cols":2,"data":[[{b},0],[0,0],[0,0],[-{b},0]]}}]}}"#
    );
    let f = write(&dir, "k.json", &kraus);
    let v = json_stdout(&run(&[
        "convert",
        path(&f),
        "--to",
        "stinespring",
        "--verify",
    ]));
    assert_eq!(v["representation"], "stinespring");
    assert_eq!(v["metadata"]["fallback_isometry"], false);
    let u = matrix(&v["unitary"]);
    assert!(u.unitarity_deviation() <= 1e-10);

    // and back
    let s = write(
        &dir,
        "s.json",
        &String::from_utf8(run(&["convert", path(&f), "--to", "stinespring"]).stdout).unwrap(),
    );
    let back = json_stdout(&run(&["convert", path(&s), "--to", "kraus", "--verify"]));
    assert_eq!(back["operators"].as_array().unwrap().len(), 2);
}

#[test]
fn non_trace_preserving_falls_back_to_isometry() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "k.json",
        r#"{"representation":"kraus","operators":[{"rows":2,"cols":2,"data":[[0.5,0],[0,0],[0,0],[0.5,0]]}]}"#,
    );
    let v = json_stdout(&run(&["convert", path(&f), "--to", "stinespring"]));
    assert_eq!(v["representation"], "isometry");
    assert_eq!(v["metadata"]["fallback_isometry"], true);
    assert!(v["metadata"]["warning"]
        .as_str()
        .unwrap()
        .contains("not trace preserving"));
}

#[test]
fn non_cp_choi_is_rejected() {
    let dir = TempDir::new().unwrap();
    // Choi of the transpose map is the swap
    let f = write(
        &dir,
        "t.json",
        r#"{"representation":"choi","in_dim":2,"out_dim":2,"choi":{"rows":4,"cols":4,"data":[
        [1,0],[0,0],[0,0],[0,0],[0,0],[0,0],[1,0],[0,0],[0,0],[1,0],[0,0],[0,0],[0,0],[0,0],[0,0],[1,0]]}}"#,
    );
    let out = run(&["convert", path(&f), "--to", "kraus"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_object(&out)["error"]["kind"], "validation");
}

#[test]
fn evolve_trace_matches_dephasing() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "l.json", DEPHASING);
    let csv_path = dir.path().join("trace.csv");
    let out = run(&[
        "evolve",
        path(&f),
        "--grid",
        "0:5:10",
        "--out",
        path(&csv_path),
        "--verify",
    ]);
    assert!(out.status.success());
    let text = fs::read_to_string(&csv_path).unwrap();
    assert!(text.starts_with("t,re_00,im_00,"));
    let trace = read_trace_csv(&text, TraceSource::Semigroup).unwrap();
    assert_eq!(trace.len(), 11);
    assert_eq!(trace.channels()[0].superop(), &ComplexMatrix::identity(4));
    for (t, phi) in trace.grid().iter().zip(trace.channels()) {
        // vec index 1 is the (1,0) coherence
        assert!((phi.superop()[(1, 1)].re - (-t / 2.0).exp()).abs() < 1e-10);
    }
    for line in text.lines().skip(1) {
        let tp: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(tp <= 1e-10);
    }
}

#[test]
fn non_hermitian_h0_is_rejected() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "l.json",
        r#"{"h0":{"rows":2,"cols":2,"data":[[0,0],[1,0],[0,0],[0,0]]},"jumps":[]}"#,
    );
    for cmd in ["evolve", "dilate"] {
        let out = run(&[cmd, path(&f)]);
        assert_eq!(out.status.code(), Some(2), "{cmd}");
        assert!(error_object(&out)["error"]["message"]
            .as_str()
            .unwrap()
            .contains("Hermitian"));
    }
}

#[test]
fn dilate_dephasing_gives_cosine_curve() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "l.json", DEPHASING);
    let v = json_stdout(&run(&["dilate", path(&f), "--verify"]));
    assert_eq!(v["omega"]["rows"], 2);
    let h = matrix(&v["h"]);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let expect = ComplexMatrix::from_real_rows(&[
        &[0.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, 0.0],
        &[0.0, 0.0, 0.0, s],
        &[0.0, 0.0, s, 0.0],
    ]);
    assert!(h.approx_eq(&expect, 1e-15));
    assert!(v["verification"]["d1_residual"].as_f64().unwrap() <= 1e-9);
    assert!(v["verification"]["d2_residual"].as_f64().unwrap() <= 1e-9);

    let unitary = write(
        &dir,
        "u.json",
        r#"{"h0":{"rows":2,"cols":2,"data":[[1,0],[0,0],[0,0],[-1,0]]}}"#,
    );
    let v = json_stdout(&run(&["dilate", path(&unitary)]));
    assert_eq!(v["omega"]["rows"], 1);
    assert!(
        v["verification"]["d2_residual_with_hamiltonian_term"]
            .as_f64()
            .unwrap()
            < 1e-12
    );
}

#[test]
fn dilate_with_hamiltonian_reports_second_derivative_gap() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "l.json",
        r#"{"h0":{"rows":2,"cols":2,"data":[[1,0],[0,0],[0,0],[-1,0]]},
        "jumps":[{"rows":2,"cols":2,"data":[[0,0],[1,0],[0,0],[0,0]]}]}"#,
    );
    let out = run(&["dilate", path(&f)]);
    let v = json_stdout(&out);
    assert!(v["verification"]["d2_residual"].as_f64().unwrap() > 1.0);
    assert!(
        v["verification"]["d2_residual_with_hamiltonian_term"]
            .as_f64()
            .unwrap()
            < 1e-12
    );
    let out = run(&["dilate", path(&f), "--verify"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error_object(&out)["error"]["kind"], "tolerance");
}

#[test]
fn derivatives_of_cosine_curve() {
    let dir = TempDir::new().unwrap();
    let l = write(&dir, "l.json", DEPHASING);
    let curve = write(
        &dir,
        "c.json",
        &String::from_utf8(run(&["dilate", path(&l)]).stdout).unwrap(),
    );
    let v = json_stdout(&run(&[
        "derivatives",
        path(&curve),
        "--order",
        "2",
        "--verify",
    ]));
    let d2 = matrix(&v["superop"]);
    assert!(d2.approx_eq(&ComplexMatrix::real_diag(&[0.0, -0.5, -0.5, 0.0]), 1e-15));
    assert!(v["jumps"]["reduced"].as_array().unwrap().len() <= 4);
    let v = json_stdout(&run(&["derivatives", path(&curve), "--order", "1"]));
    assert!(matrix(&v["effective_hamiltonian"]).max_abs() < 1e-15);
    let out = run(&["derivatives", path(&curve), "--order", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn diagnose_cosine_curve_and_semigroup() {
    let dir = TempDir::new().unwrap();
    let l = write(&dir, "l.json", DEPHASING);
    let curve = write(
        &dir,
        "c.json",
        &String::from_utf8(run(&["dilate", path(&l)]).stdout).unwrap(),
    );
    let trace_path = dir.path().join("trace.csv");
    let v = json_stdout(&run(&[
        "diagnose",
        path(&curve),
        "--grid",
        "0:10:500",
        "--trace-out",
        path(&trace_path),
    ]));
    let cp = v["p_divisibility"]["refined_change_points"][0]
        .as_f64()
        .unwrap();
    assert!((cp - PI / SQRT_2).abs() < 1e-3);
    let rec = v["recurrence"]["refined"].as_f64().unwrap();
    assert!((rec - 2.0 * SQRT_2 * PI).abs() < 1e-3);
    let fails: Vec<f64> =
        serde_json::from_value(v["bijectivity"]["refined_failures"].clone()).unwrap();
    assert_eq!(fails.len(), 2);
    assert!(v["semigroup_deviation"]["max"].as_f64().unwrap() > 0.5);

    // the cached trace reproduces the grid-level results
    let from_csv = json_stdout(&run(&["diagnose", path(&trace_path)]));
    assert_eq!(
        from_csv["p_divisibility"]["change_points"],
        v["p_divisibility"]["change_points"]
    );

    let v = json_stdout(&run(&["diagnose", path(&l), "--grid", "0:5:50"]));
    assert_eq!(v["source"], "semigroup");
    assert!(v["semigroup_deviation"]["max"].as_f64().unwrap() <= 1e-9);
    assert_eq!(v["p_divisibility"]["change_points"], Value::Array(vec![]));
    assert_eq!(v["recurrence"]["refined"], Value::Null);
}

#[test]
fn example_qubit_passes_every_check() {
    let v = json_stdout(&run(&["example-qubit", "--verify"]));
    let checks = v["checks"].as_array().unwrap();
    assert!(checks.len() >= 10);
    assert!(checks.iter().all(|c| c["pass"] == true), "{checks:?}");
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let f = write(
        &dir,
        "k.json",
        r#"{"representation":"kraus","operators":[{"rows":3,"cols":2,"data":[[1,0],[0,0],[0,0],[0,0],[0,0],[1,0]]}]}"#,
    );
    let a = run(&["convert", path(&f), "--to", "stinespring"]);
    let b = run(&["convert", path(&f), "--to", "stinespring"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["convert", path(&f), "--to", "stinespring", "--seed", "7"]);
    let v: Value = serde_json::from_slice(&c.stdout).unwrap();
    assert!(matrix(&v["unitary"]).unitarity_deviation() <= 1e-10);
    assert_eq!(v["metadata"]["d"], 6);
}

#[test]
fn invalid_input_reports_json_error() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.json", "{not json");
    let out = run(&["convert", path(&bad), "--to", "choi"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(error_object(&out)["error"]["exit_code"], 2);

    let mismatch = write(
        &dir,
        "m.json",
        r#"{"representation":"kraus","operators":[{"rows":2,"cols":2,"data":[[1,0]]}]}"#,
    );
    assert_eq!(
        run(&["convert", path(&mismatch), "--to", "choi"])
            .status
            .code(),
        Some(2)
    );

    let f = write(&dir, "l.json", DEPHASING);
    assert_eq!(
        run(&["evolve", path(&f), "--tol", "-1"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn tolerance_comes_from_environment() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "l.json", DEPHASING);
    // residuals of ~1e-16 fail an absurdly strict tolerance
    let out = bin()
        .args(["dilate", path(&f), "--verify"])
        .env("STINESPRING_TOL", "1e-300")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verification"]["tol"].as_f64(), Some(1e-300));
    // the flag wins over the variable
    let out = bin()
        .args(["dilate", path(&f), "--verify", "--tol", "1e-9"])
        .env("STINESPRING_TOL", "1e-300")
        .output()
        .unwrap();
    assert!(out.status.success());
}
