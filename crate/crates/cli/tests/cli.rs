use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use diskdiag::{fixtures, GraphFile, PoGraph};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_diskdiag"))
}

fn write(dir: &Path, name: &str, g: &PoGraph) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, GraphFile::from_graph(g).to_json()).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let g1 = write(dir.path(), "g1.json", &fixtures::g1());
    let out = run(&["check", s(&g1)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("Δ-graph: yes"));

    let bad = write(dir.path(), "chords.json", &fixtures::interleaved_chords());
    let out = run(&["check", s(&bad), "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["delta"], false);
    let failed: Vec<_> = v["reports"].as_array().unwrap().iter().filter(|r| r["passed"] == false).collect();
    assert_eq!(failed[0]["condition"], "S2");

    let truncated = dir.path().join("t.json");
    std::fs::write(&truncated, r#"{"vertices":["a","#).unwrap();
    assert_eq!(run(&["check", s(&truncated)]).status.code(), Some(2));
    assert_eq!(run(&["check", "/nonexistent/file.json"]).status.code(), Some(2));
}

#[test]
fn realize_writes_svg_only_for_delta_graphs() {
    let dir = tempfile::tempdir().unwrap();
    let g1 = write(dir.path(), "g1.json", &fixtures::g1());
    let svg = dir.path().join("g1.svg");
    let out = run(&["realize", s(&g1), "--out", s(&svg), "--levels", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("<g class=\"level\"").count(), 5);
    assert_eq!(text.matches("<circle class=\"disk\"").count(), 1);

    let bad = write(dir.path(), "bad.json", &fixtures::g1_missing_pair());
    let none = dir.path().join("bad.svg");
    let out = run(&["realize", s(&bad), "--out", s(&none)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!none.exists());
}

#[test]
fn strict_order_changes_g3_heights() {
    let dir = tempfile::tempdir().unwrap();
    let g3 = write(dir.path(), "g3.json", &fixtures::g3());
    let (a, b) = (dir.path().join("a.svg"), dir.path().join("b.svg"));
    assert!(run(&["realize", s(&g3), "--out", s(&a)]).status.success());
    assert!(run(&["realize", s(&g3), "--out", s(&b), "--strict-order"]).status.success());
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn embed_formats() {
    let dir = tempfile::tempdir().unwrap();
    let g4 = write(dir.path(), "g4.json", &fixtures::g4());
    let out = run(&["embed", s(&g4), "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["faces"].as_array().unwrap().len(), 4);
    let out = run(&["embed", s(&g4), "--format", "dot"]);
    let dot = String::from_utf8(out.stdout).unwrap();
    assert!(dot.starts_with("graph G {"));
    assert!(dot.contains("rank=same"));
}

#[test]
fn enumerate_modes() {
    let out = run(&["enumerate", "--max", "5", "--mode", "trees"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("(100.00%)"));
    let out = run(&["enumerate", "--max", "4", "--mode", "graphs"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("delta"));
    let out = bin().args(["enumerate", "--max", "4", "--mode", "graphs"]).env("DELTA_BUDGET", "10").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(run(&["enumerate", "--max", "9", "--mode", "trees"]).status.code(), Some(2));
}
