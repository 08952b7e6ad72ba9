use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const GOLDEN: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/golden_n20.txt");

fn dgs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dgs"))
        .args(args)
        .env_remove("DGS_TRIAL_BOUND")
        .env_remove("DGS_RHO_BUDGET")
        .env_remove("DGS_ECM_CURVES")
        .env_remove("DGS_WORKERS")
        .output()
        .expect("binary runs")
}

fn dgs_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_dgs"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dgs-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn snf_of_golden_graph() {
    let o = dgs(&["snf", "--input", GOLDEN]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("1×10, 2×7, 4, 4, 4b"), "{text}");
    assert!(text.contains("b = 1441015072283350333659506148951301725162859"), "{text}");
}

#[test]
fn check_golden_json() {
    let o = dgs(&["check", "--input", GOLDEN, "--seed", "17"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["kind"], "DgsByExtended");
    assert_eq!(v["seed"], 17);
    assert!(v["schema"].as_str().unwrap().starts_with("dgs-report/"));
}

#[test]
fn check_human_shows_evidence() {
    let o = dgs(&["check", "--input", GOLDEN, "--format", "human"]);
    let text = stdout(&o);
    for key in ["det W", "2-adic", "SNF", "verdict", "seed"] {
        assert!(text.contains(key), "missing {key}: {text}");
    }
}

#[test]
fn uncontrollable_graph() {
    let o = dgs_stdin(&["check"], "A_\n");
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("NotControllable"));
}

#[test]
fn empty_input_is_clean() {
    let o = dgs_stdin(&["check"], "");
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).is_empty());
}

#[test]
fn parse_error_names_file_and_line() {
    let path = temp_file("bad.g6", "A_\n!!!\n");
    let o = dgs(&["check", "--input", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr.clone()).unwrap();
    assert!(err.contains(&format!("{}:2:", path.display())), "{err}");
    // the valid line is still reported
    assert!(stdout(&o).contains("NotControllable"));
}

#[test]
fn exhausted_budget_exits_3() {
    let o = dgs(&[
        "check",
        "--input",
        GOLDEN,
        "--trial-bound",
        "10",
        "--rho-budget",
        "1",
        "--ecm-curves",
        "0",
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", stdout(&o));
    assert!(stdout(&o).contains("FactorizationUnknown"));
}

#[test]
fn budget_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_dgs"))
        .args(["check", "--input", GOLDEN])
        .env("DGS_TRIAL_BOUND", "10")
        .env("DGS_RHO_BUDGET", "1")
        .env("DGS_ECM_CURVES", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn survey_csv_is_deterministic() {
    let args = ["survey", "--sizes", "6,8", "--samples", "40", "--seed", "9"];
    let a = dgs(&args);
    let b = dgs(&args);
    assert_eq!(a.status.code(), Some(0));
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,samples,count_fn,count_unknown,fraction,seed,elapsed_ms"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.split(',').nth(5) == Some("9")));
    let strip = |s: &str| -> Vec<String> {
        s.lines().map(|l| l.rsplit_once(',').unwrap().0.to_string()).collect()
    };
    assert_eq!(strip(&text), strip(&stdout(&b)));
}

#[test]
fn survey_json_has_schema() {
    let o = dgs(&["survey", "--sizes", "6", "--samples", "10", "--seed", "4", "--format", "json"]);
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["seed"], 4);
    assert!(v["schema"].is_string());
    assert_eq!(v["rows"][0]["samples"], 10);
}

#[test]
fn oracle_small_orders() {
    let o = dgs(&["oracle", "--sizes", "4,5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().count() >= 3, "{text}");
}

#[test]
fn mate_lists_switching_partners() {
    let o = dgs(&["mate", "--input", GOLDEN, "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert!(v["seed"].is_number());
}

#[test]
fn unsupported_format_fails() {
    let o = dgs(&["snf", "--input", GOLDEN, "--format", "csv"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn output_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("dgs-cli-out-{}.txt", std::process::id()));
    let o = dgs(&["snf", "--input", GOLDEN, "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("4b"));
    std::fs::remove_file(path).ok();
}
