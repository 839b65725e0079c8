//! End-to-end checks of the command line: frozen values through the
//! compute interface, report determinism, exit codes.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> PathBuf {
    let mut p = PathBuf::from(env!("CARGO_BIN_EXE_derivator"));
    if !p.exists() {
        p = PathBuf::from("target/debug/derivator");
    }
    p
}

fn write(dir: &std::path::Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn tempdir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("derivator-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn compute_hocolim_of_the_span_is_the_suspension() {
    let dir = tempdir();
    let span = write(
        &dir,
        "span.json",
        r#"{"category":"span","p":7,"objects":{"(0,0)":{"p":7,"lo":0,"dims":[1],"d":{}}},"morphisms":{}}"#,
    );
    let out = Command::new(bin())
        .args(["compute", "--op", "hocolim", "--input", span.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["homology"]["1"], 1);
}

#[test]
fn compute_tcof_of_the_corner_square() {
    let dir = tempdir();
    let square = write(
        &dir,
        "corner.json",
        r#"{"category":"square","p":7,"objects":{"(0,0)":{"p":7,"lo":0,"dims":[1],"d":{}}},"morphisms":{}}"#,
    );
    let out = Command::new(bin())
        .args(["compute", "--op", "tcof", "--input", square.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["homology"]["2"], 1);
}

#[test]
fn nerve_counts_of_the_interval() {
    let dir = tempdir();
    let status = Command::new(bin())
        .args(["shape", "--name", "interval", "--output", dir.join("interval.json").to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(bin())
        .args(["compute", "--op", "nerve", "--input", dir.join("interval.json").to_str().unwrap()])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["counts"], serde_json::json!([2, 1]));
}

#[test]
fn vect_colim_of_a_killed_span() {
    let dir = tempdir();
    let vect = write(
        &dir,
        "span-vect.json",
        r#"{"category":"span","p":7,"dims":{"(0,0)":1,"(1,0)":0,"(0,1)":0},"maps":{}}"#,
    );
    let out = Command::new(bin())
        .args(["compute", "--op", "vect-colim", "--input", vect.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["dim"], 0);
}

#[test]
fn suite_reports_are_byte_identical() {
    let run = || {
        Command::new(bin())
            .args(["run", "--suite", "nonstable-witness", "--seed", "5", "--trials", "20"])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn exit_codes() {
    let bad_suite = Command::new(bin()).args(["run", "--suite", "nope"]).output().unwrap();
    assert_eq!(bad_suite.status.code(), Some(2));
    let bad_op = Command::new(bin())
        .args(["compute", "--op", "nope", "--input", "/nonexistent.json"])
        .output()
        .unwrap();
    assert_eq!(bad_op.status.code(), Some(2));
    // resource cap: a tiny cap aborts with code 3
    let capped = Command::new(bin())
        .args([
            "run", "--suite", "oracle-equivalence", "--trials", "3", "--budget", "12",
            "--max-total-dim", "2",
        ])
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(3));
}
