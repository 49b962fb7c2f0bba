use std::fs;
use std::process::{Command, Output};

use mertens_audit::bounds::SWEEP_CSV_HEADER;
use mertens_audit::cli::{parse_args, Command as Sub, EXIT_GATED_FAILURE, EXIT_IO, EXIT_PASS, EXIT_USAGE};
use mertens_audit::sieve::load_table;

fn audit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mertens-audit")).args(args).output().expect("spawn mertens-audit")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn sieve_then_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("m.tbl");
    let sweep = dir.path().join("sweep.csv");
    let o = audit(&["sieve", "--limit", "1000000", "--out", table.to_str().unwrap()]);
    assert_eq!(code(&o), EXIT_PASS, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(load_table(&table).unwrap().mertens_int(1_000_000).unwrap(), 212);

    let o = audit(&[
        "sweep",
        "--table",
        table.to_str().unwrap(),
        "--n-lo",
        "10",
        "--n-hi",
        "100",
        "--theta",
        "0.999",
        "--out",
        sweep.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), EXIT_PASS);
    let text = fs::read_to_string(&sweep).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(SWEEP_CSV_HEADER));
    assert_eq!(lines.count(), 91);
}

#[test]
fn estimate_prints_auto_epsilon() {
    let o = audit(&["estimate", "--x", "100.4"]);
    assert_eq!(code(&o), EXIT_PASS);
    let text = String::from_utf8(o.stdout).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[0], "100.40000000000001");
    assert_eq!(row[1].parse::<f64>().unwrap(), 0.19999999999998863);
    assert_eq!(audit(&["estimate", "--x", "100.5"]).status.code(), Some(EXIT_USAGE));
}

#[test]
fn pv_check_standard_grid_passes() {
    let o = audit(&["pv-check", "--tolerance", "1e-8"]);
    assert_eq!(code(&o), EXIT_PASS);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 45 + 9);
}

#[test]
fn gated_failure_exits_one() {
    let o = audit(&["pv-check", "--mu", "0.5", "--epsilon", "0.2", "--x", "100.4", "--tolerance", "0.5"]);
    assert_eq!(code(&o), EXIT_GATED_FAILURE);
}

#[test]
fn report_all_without_table_is_io_failure() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = audit(&["report-all", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), EXIT_IO);
    let missing = dir.path().join("nope.tbl");
    let o = audit(&["report-all", "--table", missing.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), EXIT_IO);
}

#[test]
fn corrupt_table_is_io_failure() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.tbl");
    fs::write(&bad, b"MERTBLv1\x01").unwrap();
    let o = audit(&["sweep", "--table", bad.to_str().unwrap(), "--n-hi", "20"]);
    assert_eq!(code(&o), EXIT_IO);
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["sieve", "--limit", "0"][..],
        &["sieve", "--limit", "10", "--out", "x", "--unknown"],
        &["nonsense"],
        &["dn-check", "--tolerance", "1e-15"],
        &["sweep", "--n-lo", "50", "--n-hi", "10"],
    ] {
        assert_eq!(code(&audit(args)), EXIT_USAGE, "{args:?}");
    }
}

#[test]
fn seeded_runs_are_byte_identical() {
    let a = audit(&["dn-check", "--seed", "17"]);
    let b = audit(&["dn-check", "--seed", "17"]);
    let c = audit(&["dn-check", "--seed", "18"]);
    assert_eq!(code(&a), EXIT_PASS);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn inverse_check_emits_traces() {
    let o = audit(&["inverse-check", "--x", "100.4"]);
    assert_eq!(code(&o), EXIT_PASS);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 7);
    assert!(text.lines().nth(1).unwrap().starts_with("mobius_inverse,100.40000000000001,"));
}

#[test]
fn parse_args_examples() {
    let c = parse_args(["sieve", "--limit", "1000000", "--out", "m.tbl"]).unwrap();
    assert_eq!(c.command, Sub::Sieve);
    let c = parse_args(["estimate", "--x", "100.4"]).unwrap();
    assert_eq!((c.command, c.epsilon), (Sub::Estimate, None));
    assert_eq!(parse_args(["sieve", "--limit", "0"]).unwrap_err().exit_code(), EXIT_USAGE);
}
