use std::fs;
use std::path::PathBuf;

use netcode::corpus::{corpus_dir, ENTRIES};
use netcode::{run, CommandOutcome};
use serde_json::Value;

fn netcode(args: &[&str]) -> CommandOutcome {
    run(std::iter::once("netcode").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = netcode(&full);
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("netcode-cli-{}-{name}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(netcode(&["--help"]).code, 0);
    assert!(!netcode(&["--version"]).stdout.is_empty());
    assert_eq!(netcode(&["bogus"]).code, 2);
    assert_eq!(netcode(&["label", "butterfly"]).code, 2, "needs --field or --fields");
    let missing = netcode(&["capacity", "no_such_network"]);
    assert_eq!(missing.code, 2);
    assert!(missing.stderr.contains("no_such_network"));
}

#[test]
fn capacity_reports_mincuts() {
    let out = netcode(&["capacity", "butterfly"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("capacity: 2 with 2 sources (achievable)"));
    assert_eq!(netcode(&["capacity", "butterfly", "--csv"]).stdout, "receiver,mincut\nR1,2\nR2,2\n");
    let doc = json(&["capacity", "four_source"]);
    assert_eq!(doc["capacity"], 4);
    assert_eq!(doc["achievable"], true);
}

#[test]
fn infeasible_network_is_a_negative() {
    let dir = scratch("infeasible");
    let path = dir.join("thin.json");
    let doc = r#"{
  "vertices": ["S1", "S2", "A", "R"],
  "edges": [
    {"id": "a", "tail": "S1", "head": "A"},
    {"id": "b", "tail": "S2", "head": "A"},
    {"id": "c", "tail": "A", "head": "R"}
  ],
  "sources": ["S1", "S2"],
  "receivers": ["R"]
}
"#;
    fs::write(&path, doc).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(netcode(&["capacity", p]).code, 1);
    let out = netcode(&["mincode", p]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("infeasible"), "{}", out.stdout);
    fs::remove_dir_all(dir).ok();
}

#[test]
fn malformed_input_is_a_usage_error() {
    let dir = scratch("malformed");
    let path = dir.join("bad.json");
    fs::write(&path, "{ not json").unwrap();
    assert_eq!(netcode(&["capacity", path.to_str().unwrap()]).code, 2);
    fs::write(&path, r#"{"vertices": ["S"], "edges": [], "sources": ["S"], "receivers": ["X"]}"#).unwrap();
    let out = netcode(&["capacity", path.to_str().unwrap()]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("X"), "{}", out.stderr);
    fs::remove_dir_all(dir).ok();
}

#[test]
fn mincode_text_and_json() {
    let out = netcode(&["mincode", "butterfly"]);
    assert!(out.stdout.starts_with("optimum: 1 coding point\ncoding points: m\n"), "{}", out.stdout);
    for backend in ["ilp", "paths"] {
        let doc = json(&["mincode", "four_source", "--backend", backend]);
        assert_eq!(doc["optimum"], 4);
        assert_eq!(doc["backend"], backend);
        assert_eq!(doc["coding_points"].as_array().unwrap().len(), 4);
    }
}

#[test]
fn codegraph_dot_and_json() {
    let dot = netcode(&["codegraph", "butterfly", "--dot"]).stdout;
    assert!(dot.starts_with("digraph codegraph {"));
    assert!(dot.contains("\"S1\" -> \"m\";") && dot.contains("\"S2\" -> \"m\";"));
    let doc = json(&["codegraph", "four_source"]);
    assert_eq!(doc["nodes"].as_array().unwrap().len(), 8);
}

#[test]
fn label_actions() {
    assert_eq!(netcode(&["label", "butterfly.codegraph", "--field", "3"]).stdout, "labelings over GF(3) (raw): 192\n");
    assert_eq!(netcode(&["label", "butterfly", "--fields", "2..4", "--csv"]).stdout, "q,count\n2,6\n3,192\n4,1620\n");
    let none = netcode(&["label", "fano", "--field", "5", "--exists"]);
    assert_eq!(none.code, 1);
    assert_eq!(none.stdout, "no labeling over GF(5)\n");
    let some = json(&["label", "fano", "--field", "4", "--exists"]);
    assert_eq!(some["exists"], true);
    assert_eq!(some["labeling"].as_array().unwrap().len(), 3);
    let listed = json(&["label", "butterfly", "--field", "3", "--enumerate", "100", "--mode", "source-identity"]);
    assert_eq!(listed["labelings"].as_array().unwrap().len(), 4);
    let proj = json(&["label", "butterfly", "--field", "5", "--mode", "projective"]);
    assert_eq!(proj["count"], "4");
}

#[test]
fn label_field_specs() {
    let by_pk = json(&["label", "butterfly", "--field", "2^3"]);
    assert_eq!(by_pk["field"]["q"], 8);
    assert_eq!(by_pk["count"], "172872");
    assert_eq!(netcode(&["label", "butterfly", "--field", "6"]).code, 2);
}

#[test]
fn raw_enumeration_with_a_basis_is_refused() {
    let out = netcode(&["label", "butterfly", "--field", "2", "--enumerate", "5", "--mode", "raw"]);
    assert_eq!(out.code, 2);
}

#[test]
fn qmin_reports() {
    assert_eq!(netcode(&["qmin", "fano", "--max", "9"]).stdout, "q_min: 2\nachievable (q <= 9): {2, 4, 8}\n");
    let doc = json(&["qmin", "butterfly", "--max", "5"]);
    assert_eq!(doc["q_min"], 2);
    assert_eq!(doc["tested"], serde_json::json!([2, 3, 4, 5]));
}

#[test]
fn profile_fit_and_csv() {
    let dir = scratch("profile");
    let csv = dir.join("butterfly.csv");
    let out = netcode(&["profile", "butterfly", "--fields", "2..11", "--fit", "6", "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("degree 6 fit holds"));
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("q,count,fitted,residual"));
    assert_eq!(lines.next(), Some("2,6,6,0"));
    assert_eq!(lines.count(), 7);

    let doc =
        json(&["profile", "four_source.codegraph", "--fields", "2..13", "--mode", "source-identity", "--fit", "7"]);
    assert_eq!(doc["fit"]["fits"], false);
    assert_eq!(doc["fit"]["mismatch"]["q"], 13);
    fs::remove_dir_all(dir).ok();
}

#[test]
fn corpus_listing_and_export() {
    let out = netcode(&["corpus"]);
    assert_eq!(out.stdout.lines().count(), ENTRIES.len());
    let dir = scratch("export");
    assert_eq!(netcode(&["corpus", "--export", dir.to_str().unwrap()]).code, 0);
    for e in &ENTRIES {
        assert_eq!(fs::read(dir.join(e.file)).unwrap(), fs::read(corpus_dir().join(e.file)).unwrap(), "{}", e.file);
    }
    fs::remove_dir_all(dir).ok();
}

#[test]
fn exported_files_load_as_inputs() {
    let dir = scratch("reload");
    netcode(&["corpus", "--export", dir.to_str().unwrap()]);
    let p = dir.join("four_source.codegraph.json");
    let doc = json(&["label", p.to_str().unwrap(), "--field", "3", "--mode", "source-identity"]);
    assert_eq!(doc["count"], "256");
    fs::remove_dir_all(dir).ok();
}
