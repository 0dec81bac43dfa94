//! End-to-end tests of the command-line binary: exit codes, file outputs
//! and the text reports.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_hnstrata")
}

fn write_instance(dir: &Path, name: &str, json: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    fs::write(&path, json).unwrap();
    path
}

fn d3_instance(dir: &Path) -> std::path::PathBuf {
    write_instance(
        dir,
        "d3.json",
        r#"{"newton":{"slopes":["1/2","0"]},"hodge":["4","1","0"]}"#,
    )
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn gamma_writes_strata_table() {
    let dir = tempfile::tempdir().unwrap();
    let inst = d3_instance(dir.path());
    let out = run(&[
        "--instance",
        inst.to_str().unwrap(),
        "gamma",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("|Gamma| = 4"), "summary missing count:\n{text}");
    let table = fs::read_to_string(dir.path().join("strata.jsonl")).unwrap();
    assert_eq!(table.lines().count(), 4);
    for line in table.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v.get("P").is_some() && v.get("x").is_some() && v.get("w").is_some());
        assert!(v.get("hn_vector").is_some());
    }
}

#[test]
fn lambda_reports_fibers() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write_instance(
        dir.path(),
        "d5.json",
        r#"{"newton":{"tuple":["0","0","0","0","0"]},"hodge":["5","4","3","2","-14"]}"#,
    );
    let out = run(&["--instance", inst.to_str().unwrap(), "lambda"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("non-injective"), "d=5 case must flag a repeated HN-vector:\n{text}");
    assert!(text.contains("7/2"), "expected fiber value missing:\n{text}");
}

#[test]
fn check_realizable_vector_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let inst = d3_instance(dir.path());
    let out = run(&[
        "--instance",
        inst.to_str().unwrap(),
        "check",
        "--lambda",
        "3/2,3/2,1",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("is an HN-vector"), "{text}");
}

#[test]
fn check_unrealizable_vector_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let inst = d3_instance(dir.path());
    let out = run(&[
        "--instance",
        inst.to_str().unwrap(),
        "check",
        "--lambda",
        "5,0,0",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn check_malformed_vector_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let inst = d3_instance(dir.path());
    for bad in ["1,2", "abc", "1,2,3,4"] {
        let out = run(&[
            "--instance",
            inst.to_str().unwrap(),
            "check",
            "--lambda",
            bad,
        ]);
        assert_eq!(out.status.code(), Some(2), "input {bad:?}");
    }
}

#[test]
fn missing_instance_file_exits_four() {
    let out = run(&["--instance", "/nonexistent/instance.json", "gamma"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn invalid_instance_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    // Hodge length 2 does not match the Newton dimension 3
    let inst = write_instance(
        dir.path(),
        "bad.json",
        r#"{"newton":{"slopes":["1/2","0"]},"hodge":["1","0"]}"#,
    );
    let out = run(&["--instance", inst.to_str().unwrap(), "gamma"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oversized_instance_exits_three_unless_forced() {
    let dir = tempfile::tempdir().unwrap();
    // one simple summand of slope 1/13 gives d = 13, past the default
    // --max-d of 12, while keeping the index set tiny
    let hodge: Vec<String> = (0..13).map(|k| format!("\"{}\"", 13 - k)).collect();
    let inst = write_instance(
        dir.path(),
        "big.json",
        &format!(
            r#"{{"newton":{{"slopes":["1/13"]}},"hodge":[{}]}}"#,
            hodge.join(",")
        ),
    );
    let out = run(&["--instance", inst.to_str().unwrap(), "lambda"]);
    assert_eq!(out.status.code(), Some(3));
    let forced = run(&["--instance", inst.to_str().unwrap(), "--force", "lambda"]);
    assert_eq!(forced.status.code(), Some(0));
}

#[test]
fn polygons_written_per_stratum() {
    let dir = tempfile::tempdir().unwrap();
    let inst = d3_instance(dir.path());
    let out_dir = dir.path().join("poly");
    let out = run(&[
        "--instance",
        inst.to_str().unwrap(),
        "polygons",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let mut csvs = 0;
    let mut svgs = 0;
    for entry in fs::read_dir(&out_dir).unwrap() {
        let name = entry.unwrap().file_name().into_string().unwrap();
        if name.ends_with(".csv") {
            csvs += 1;
        } else if name.ends_with(".svg") {
            svgs += 1;
        }
    }
    assert_eq!((csvs, svgs), (4, 4));
    let csv = fs::read_to_string(out_dir.join("stratum_000.csv")).unwrap();
    assert!(csv.starts_with("x,y\n0,0\n"), "{csv}");
}

#[test]
fn verify_runs_random_instances() {
    let out = run(&["verify", "--random", "5", "--seed", "3", "--max-d", "5"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.contains("5"), "{text}");
}

#[test]
fn verify_single_instance() {
    let dir = tempfile::tempdir().unwrap();
    let inst = d3_instance(dir.path());
    let out = run(&["--instance", inst.to_str().unwrap(), "verify"]);
    assert_eq!(out.status.code(), Some(0));
}
