use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace { dir: tempfile::tempdir().unwrap() }
    }

    fn file(&self, name: &str, body: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        fs::write(&p, body).unwrap();
        p
    }
}

const RUNNING: &str = r#"[["0","0","0"],["1","-1","0"]]"#;

fn tropfw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropfw")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn weighted_running_example() {
    let ws = Workspace::new();
    let p = ws.file("p.json", RUNNING);
    let v = json(&tropfw(&["fw", p.to_str().unwrap(), "--weights", "1/3,2/3"]));
    assert_eq!(v["value"], "1/3");
    assert_eq!(v["dim"], 1);
    assert_eq!(v["vertices"], serde_json::json!([["1/3", "-2/3", "1/3"], ["1", "-1", "0"]]));
    assert_eq!(v["graph"]["edges"], serde_json::json!([[1, 1], [2, 2], [2, 3]]));
}

#[test]
fn uniform_weights_and_both_methods() {
    let ws = Workspace::new();
    let p = ws.file("p.json", RUNNING);
    let v = json(&tropfw(&["fw", p.to_str().unwrap(), "--method", "both"]));
    assert_eq!(v["agree"], true);
    assert_eq!(v["lp"]["witness"], serde_json::json!(["1/3", "-2/3", "1/3"]));
    assert_eq!(v["lp"]["graph"], v["transport"]["graph"]);
    let t = json(&tropfw(&["fw", p.to_str().unwrap(), "--method", "transport"]));
    assert_eq!(t["value"], v["lp"]["value"]);
}

#[test]
fn exit_codes() {
    let ws = Workspace::new();
    let p = ws.file("p.json", RUNNING);
    let p = p.to_str().unwrap();
    assert_eq!(code(&tropfw(&["fw", p, "--weights", "0,1"])), 3);
    assert_eq!(code(&tropfw(&["fw", p, "--weights", "1,2,3"])), 3);
    assert_eq!(code(&tropfw(&["fw", p, "--weights", "1/x,1"])), 2);

    let bad = ws.file("bad.json", "[[\"0\",\"0\"],\n [\"1\",");
    let out = tropfw(&["fw", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2 column"));

    let ragged = ws.file("ragged.json", r#"[["0","0","0"],["1","2"]]"#);
    assert_eq!(code(&tropfw(&["fw", ragged.to_str().unwrap()])), 3);

    let big = ws.file("big.json", &serde_json::to_string(&vec![vec![0, 1, 2, 3]; 6]).unwrap());
    assert_eq!(code(&tropfw(&["cells", big.to_str().unwrap()])), 5);

    let unbounded = ws.file("g.json", "[[1,1],[2,3]]");
    assert_eq!(code(&tropfw(&["inverse", p, "--cell", unbounded.to_str().unwrap()])), 4);

    assert_eq!(code(&tropfw(&["fw", "/nonexistent/points.json"])), 1);
}

#[test]
fn cell_census() {
    let ws = Workspace::new();
    let p = ws.file("p.json", RUNNING);
    let v = json(&tropfw(&["cells", p.to_str().unwrap()]));
    let dims: Vec<i64> = v.as_array().unwrap().iter().map(|c| c["dim"].as_i64().unwrap()).collect();
    assert_eq!(dims.len(), 5);
    assert_eq!(dims.iter().filter(|&&d| d == 0).count(), 3);

    let single = ws.file("s.json", r#"[["1","2","3"]]"#);
    let v = json(&tropfw(&["cells", single.to_str().unwrap()]));
    assert_eq!(v.as_array().unwrap().len(), 1);
    assert_eq!(v[0]["vertices"], serde_json::json!([["-1", "0", "1"]]));

    let out = tropfw(&["cells", p.to_str().unwrap(), "--format", "tsv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("cell\tdim\tx1\tx2\tx3"));
    assert_eq!(lines.count(), 7);
}

#[test]
fn inverse_round_trip() {
    let ws = Workspace::new();
    let p = ws.file("p.json", RUNNING);
    let g = ws.file("g.json", "[[1,1],[1,3],[2,2],[2,3]]");
    let v = json(&tropfw(&["inverse", p.to_str().unwrap(), "--cell", g.to_str().unwrap()]));
    assert_eq!(v["weights"], serde_json::json!(["1/2", "1/2"]));
    assert_eq!(v["result"]["graph"]["edges"], serde_json::json!([[1, 1], [1, 3], [2, 2], [2, 3]]));

    let obj = ws.file("o.json", r#"{"m":2,"n":3,"edges":[[1,1],[2,2],[2,3]]}"#);
    let v = json(&tropfw(&["inverse", p.to_str().unwrap(), "--cell", obj.to_str().unwrap()]));
    assert_eq!(v["result"]["dim"], 1);
}

#[test]
fn consensus_trees() {
    let ws = Workspace::new();
    let tree = "((human:1,chimp:1):1,gorilla:2);";
    let copies = ws.file("copies.nwk", &format!("{tree}\n{tree}\n"));
    let out = tropfw(&["consensus", copies.to_str().unwrap(), "--weights", "1,3"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "((chimp:1,human:1):1,gorilla:2);\n");

    let mixed = ws.file("mixed.nwk", "((a:1,b:1):1,c:2);\n((a:1,c:1):2,b:3);\n((a:1,b:1):2,c:3);\n");
    let v = json(&tropfw(&["consensus", mixed.to_str().unwrap(), "--format", "json"]));
    assert_eq!(v["pareto_violations"], 0);
    assert_eq!(v["co_pareto_violations"], 0);

    let mismatch = ws.file("mm.nwk", "((a:1,b:1):1,c:2);((a:1,b:1):1,d:2);");
    assert_ne!(code(&tropfw(&["consensus", mismatch.to_str().unwrap()])), 0);
    let crooked = ws.file("cr.nwk", "((a:1,b:1):1,c:3);");
    assert_eq!(code(&tropfw(&["consensus", crooked.to_str().unwrap()])), 3);
    let garbled = ws.file("gb.nwk", "((a:1,b:1):1,c:2");
    assert_eq!(code(&tropfw(&["consensus", garbled.to_str().unwrap()])), 2);
}

#[test]
fn output_is_deterministic_and_can_go_to_a_file() {
    let ws = Workspace::new();
    let p = ws.file("p.json", "[[0,0,0,0],[1,-1,0,2],[\"1/2\",\"0.25\",3,0]]");
    let p = p.to_str().unwrap();
    let a = tropfw(&["cells", p]).stdout;
    let b = tropfw(&["cells", p]).stdout;
    assert_eq!(a, b);
    let target = ws.dir.path().join("out.json");
    let out = tropfw(&["--out", target.to_str().unwrap(), "cells", p]);
    assert!(out.status.success() && out.stdout.is_empty());
    assert_eq!(fs::read(&target).unwrap(), a);
}

#[test]
fn seeded_verification() {
    let a = tropfw(&["verify", "--seed", "5", "--instances", "8"]);
    let v = json(&a);
    assert_eq!(v["failures"], serde_json::json!([]));
    assert_eq!(a.stdout, tropfw(&["verify", "--seed", "5", "--instances", "8"]).stdout);
}
