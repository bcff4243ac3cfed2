//! End-to-end runs of the `normscale` binary.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_normscale")).args(args).output().expect("binary runs")
}

fn run_with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_normscale"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary starts");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn normalize_pythagorean_quadruple() {
    let o = run(&["normalize", "--dim", "3", "3", "4", "12"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("length 13 0x1.ap+3\n"), "{text}");
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn normalize_huge_and_tiny_inputs() {
    // A literal beyond the largest finite value rounds to infinity.
    let o = run(&["--hex", "normalize", "--dim", "2", "0x1.8p+1023", "0x1p+1024"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("length inf\n"));

    let o = run(&["--hex", "normalize", "--dim", "2", "0x1.8p+1023", "0x1p+1023"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("length 0x1.cd82b446159f3p+1023\n"), "{text}");

    let o = run(&["--hex", "normalize", "--dim", "4", "--prec", "single", "0x1p-149", "0", "0", "0"]);
    assert_eq!(stdout(&o), "length 0x0.000002p-126\nunit[0] 0x1p+0\nunit[1] 0x0p+0\nunit[2] 0x0p+0\nunit[3] 0x0p+0\n");
}

#[test]
fn naive_baseline_is_reachable() {
    let o = run(&["normalize", "--dim", "2", "--algo", "naive", "1e300", "1e300"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("length inf"), "{}", stdout(&o));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["normalize", "--dim", "5", "1", "2"][..],
        &["normalize", "--dim", "3", "1", "2"],
        &["normalize", "--dim", "3", "1", "2", "zz"],
        &["normalize", "--dim", "2", "--algo", "quotient-fast", "1", "2"],
        &["frobnicate"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
}

#[test]
fn builtin_parameters_validate() {
    for prec in ["double", "single"] {
        let o = run(&["validate-params", "--format", prec]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert!(stdout(&o).contains("all conditions satisfied"));
    }
}

#[test]
fn broken_parameters_are_reported() {
    let json = r#"{"u":"0x1p-53","alpha":"0x1p-1074","nu":"0x1p-1022","omega":"0x1.fffffffffffffp+1023",
        "tau_min":"0x1p-481","tau_max":"0x1p510","sigma_min":"0x1p592","sigma_max":"0x1p-514"}"#;
    let dir = std::env::temp_dir().join(format!("normscale-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("params.json");
    std::fs::write(&file, json).unwrap();
    let o = run(&["validate-params", "--format", "double", file.to_str().unwrap()]);
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("violated condE")), "{text}");
    assert!(!text.contains("all conditions satisfied"));
}

#[test]
fn malformed_parameter_file_is_an_error() {
    let o = run_with_stdin(&["validate-params", "/dev/stdin"], "{\"u\": 1}");
    assert_ne!(o.status.code(), Some(0));
    assert!(stderr(&o).starts_with("error:"), "{}", stderr(&o));
}

#[test]
fn verify_bounds_scaling_is_clean() {
    let o = run(&["verify-bounds", "--dim", "4", "--samples", "3000", "--seed", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["checked"], 3000);
    assert_eq!(v["violations"], 0);
    assert!(v["max_product_err_u"].as_f64().unwrap() > 0.0);
}

#[test]
fn verify_bounds_naive_reports_but_succeeds() {
    let o = run(&["verify-bounds", "--dim", "3", "--algo", "naive", "--samples", "2000", "--output", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    let headers = rows.headers().unwrap().clone();
    let row = rows.records().next().unwrap().unwrap();
    let col = |name: &str| row.get(headers.iter().position(|h| h == name).unwrap()).unwrap().to_string();
    assert_eq!(col("algorithm"), "naive");
    assert!(col("violations").parse::<u64>().unwrap() > 0);
}

#[test]
fn rotate_applies_the_matrix() {
    let o = run(&["rotate", "--apply", "1,2,-3", "1", "1", "1", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "0 0 1\n1 0 0\n0 1 0\napplied -3 1 2\n");
}

#[test]
fn bench_csv_has_timings_and_ratios() {
    let o = run(&[
        "bench",
        "--experiments",
        "2",
        "--iterations",
        "200000",
        "--dims",
        "3",
        "--precisions",
        "single",
        "--output",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let rows: Vec<_> = text.lines().skip(1).map(|l| l.split(',').next().unwrap().to_string()).collect();
    assert_eq!(rows.iter().filter(|r| r.as_str() == "time").count(), 4, "{text}");
    assert_eq!(rows.iter().filter(|r| r.starts_with('T')).count(), 3, "{text}");
}
