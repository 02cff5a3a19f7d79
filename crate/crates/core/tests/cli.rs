use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn dynmatch(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dynmatch"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("dynmatch-cli-{}-{name}", std::process::id()))
}

#[test]
fn adversary_report_keys() {
    let out = dynmatch(&[
        "--gen",
        "adversary",
        "--per-side",
        "8",
        "--oracle",
        "--verify-every",
        "1",
        "--epoch-stats",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = json(&out);
    assert_eq!(r["algorithm"], "multilevel");
    assert_eq!(r["n"], 16);
    assert_eq!(r["t"], 36);
    assert_eq!(r["maximum"], 8);
    assert_eq!(r["maximal"], true);
    let ratio = r["ratio"].as_f64().unwrap();
    assert!((0.5..=1.0).contains(&ratio));
    assert!(r["epochs"].is_array());
    assert!(r["work"]["phi_increments"].is_u64());
    assert!(String::from_utf8_lossy(&out.stderr).contains("ratio="));
}

#[test]
fn written_stream_replays_identically() {
    let path = scratch("random.txt");
    let p = path.to_str().unwrap();
    let first = dynmatch(&[
        "--gen",
        "random",
        "--n",
        "20",
        "--t",
        "300",
        "--seed",
        "4",
        "--write-stream",
        p,
        "--algo",
        "two-level",
    ]);
    assert!(first.status.success());
    let second = dynmatch(&["--stream", p, "--seed", "4", "--algo", "two-level"]);
    assert!(second.status.success());
    assert_eq!(json(&first), json(&second));
    fs::remove_file(&path).unwrap();
}

#[test]
fn compare_runs_all_three() {
    let out = dynmatch(&[
        "--gen",
        "deletion-heavy",
        "--n",
        "32",
        "--t",
        "500",
        "--compare",
        "--oracle",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let r = json(&out);
    let names: Vec<_> = r["runs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["algorithm"].clone())
        .collect();
    assert_eq!(names, ["trivial", "two-level", "multilevel"]);
    assert_eq!(r["sizes_within_factor_two"], true);
}

#[test]
fn illegal_stream_fails() {
    let path = scratch("bad.txt");
    fs::write(&path, "4 2\nI 0 1\nD 1 2\n").unwrap();
    let out = dynmatch(&["--stream", path.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(out.stdout.is_empty());
    fs::remove_file(&path).unwrap();
}

#[test]
fn needs_a_source() {
    assert!(!dynmatch(&[]).status.success());
    assert!(!dynmatch(&["--gen", "random", "--algo", "greedy"])
        .status
        .success());
}
