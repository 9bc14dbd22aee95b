use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_purepair"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf8")
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("purepair-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn oracle_chi_on_c5() {
    let f = scratch("c5.g6", "Dhc\n");
    let o = run(&["oracle", "chi", "--input", f.to_str().unwrap()]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], 3);
    assert_eq!(v["witness"].as_array().unwrap().len(), 3);
}

#[test]
fn gen_is_deterministic_and_round_trips() {
    let a = run(&["gen", "gnp", "--n", "12", "--seed", "0"]);
    let b = run(&["gen", "gnp", "--n", "12", "--seed", "0"]);
    assert_eq!(stdout(&a), "KOsWq|ID[[ar\n");
    assert_eq!(stdout(&a), stdout(&b));
    let f = scratch("g.g6", &stdout(&a));
    let o = run(&["oracle", "omega", "--input", f.to_str().unwrap()]);
    assert!(o.status.success());
}

#[test]
fn extract_certifies() {
    let f = scratch("c5x.g6", "Dhc\n");
    let o = run(&["extract", "gyarfas-vertex", "--input", f.to_str().unwrap(), "--k", "5"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("certified"));
}

#[test]
fn verify_then_replay() {
    let dir = std::env::temp_dir().join(format!("purepair-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let report = dir.join("report.json");
    let o = run(&["verify", "linanti", "--samples", "20", "--seed", "3", "--out", report.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert!(stdout(&o).contains("0 fail"));
    let r = run(&["replay", "--report", report.to_str().unwrap(), "--index", "4"]);
    assert!(r.status.success());
    let v: Value = serde_json::from_str(&stdout(&r)).unwrap();
    assert_eq!(v["identical"], true);
}

#[test]
fn search_finds_the_c5_edge() {
    let f = scratch("corpus.g6", "Dhc\nCF\n");
    let o = run(&["search", "clful", "--corpus", f.to_str().unwrap()]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["finding"]["delta"], "2/3");
}

#[test]
fn errors_exit_with_two() {
    let o = run(&["oracle", "chi", "--input", "/nonexistent/graph.g6"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["verify", "linanti", "--max-n", "99"]);
    assert_eq!(o.status.code(), Some(2));
}
