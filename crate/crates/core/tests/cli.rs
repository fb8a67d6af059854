use std::path::Path;
use std::process::{Command, Output};

use tto_eof::cli::{self, RECORD_FIELDS};

fn tool(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tto-eof")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn bell_bench_emits_one_row_per_lambda() {
    let out = tool(&["bench", "--family", "bell"]);
    assert_eq!(code(&out), cli::EXIT_OK);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), RECORD_FIELDS.join(","));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 11);
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), RECORD_FIELDS.len());
        let err: f64 = cols[4].parse().unwrap();
        assert!(err <= 1e-6, "{row}");
        // wall times are only written on request
        assert_eq!(cols[9], "");
    }
}

#[test]
fn reruns_are_byte_identical() {
    let args = ["bench", "--family", "random-pure", "--K0", "3", "--instances", "4", "--seed", "17"];
    let a = tool(&args);
    let b = tool(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn workers_do_not_change_results() {
    let base = ["thermal-eof", "--N", "6,8", "--T", "0.1,0.3", "--K0", "2"];
    let one = tool(&[&base[..], &["--workers", "1"]].concat());
    let two = tool(&[&base[..], &["--workers", "2"]].concat());
    assert_eq!(code(&one), 0);
    let mut a: Vec<String> = stdout(&one).lines().map(str::to_string).collect();
    let mut b: Vec<String> = stdout(&two).lines().map(str::to_string).collect();
    a.sort();
    b.sort();
    assert_eq!(a, b);
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(code(&tool(&["bench"])), cli::EXIT_USAGE);
    assert_eq!(code(&tool(&["bench", "--family", "nonsense"])), cli::EXIT_USAGE);
    assert_eq!(code(&tool(&["thermal-eof", "--N", "8"])), cli::EXIT_USAGE);
    assert_eq!(code(&tool(&["thermal-eof", "--N", "8", "--T", "0.1", "--K0", "3", "--K", "2"])), cli::EXIT_USAGE);
    assert_eq!(code(&tool(&["scan-m", "--N", "6", "--T", "0.1", "--M", "4,6"])), cli::EXIT_USAGE);
    assert_eq!(code(&tool(&["frobnicate"])), cli::EXIT_USAGE);
}

#[test]
fn oversized_chain_exits_2() {
    assert_eq!(code(&tool(&["thermal-eof", "--N", "30", "--T", "0.1"])), cli::EXIT_CAPACITY);
}

#[test]
fn single_size_scaling_input_exits_65() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("one.csv");
    let out = tool(&["thermal-eof", "--N", "8", "--T-gap", "0.05,0.1,0.2", "--output", csv.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(code(&tool(&["scaling", "--input", csv.to_str().unwrap()])), cli::EXIT_DATA);
    let missing = dir.path().join("absent.csv");
    assert_eq!(code(&tool(&["scaling", "--input", missing.to_str().unwrap()])), cli::EXIT_DATA);
}

#[test]
fn output_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("werner.csv");
    let out = tool(&["bench", "--family", "werner", "--d", "2", "--extra-k", "1", "--output", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let records = cli::read_csv(Path::new(&path)).unwrap();
    assert!(!records.is_empty());
    for r in &records {
        assert!(r.abs_error.unwrap() <= 1e-4, "{:?}", r.parameters);
        assert_eq!(r.k, r.k0 + 1);
    }
}

#[test]
fn json_output_is_an_array_of_records() {
    let out = tool(&["bench", "--family", "bell", "--lambda", "0.25", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 1);
    for field in RECORD_FIELDS {
        assert!(rows[0].get(field).is_some(), "missing {field}");
    }
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# bell sweep\nfamily=bell\nlambda=0.1,0.2\nseed=3\n").unwrap();
    let from_file = tool(&["bench", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&from_file), 0);
    assert_eq!(stdout(&from_file).lines().count(), 3);
    let overridden = tool(&["bench", "--config", cfg.to_str().unwrap(), "--lambda", "0.3"]);
    assert_eq!(code(&overridden), 0);
    assert_eq!(stdout(&overridden).lines().count(), 2);
    assert!(stdout(&overridden).contains("lambda=0.3"));
}
