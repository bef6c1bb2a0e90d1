use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn lct(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lct"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(name)
        .display()
        .to_string()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

#[test]
fn analyze_example_report() {
    let out = lct(&["analyze", &corpus("example.json")]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc = json(&out);
    let inst = &doc["instances"][0];
    assert_eq!(inst["invariants"]["lct"], "3/2");
    assert_eq!(inst["invariants"]["l"], 2);
    assert_eq!(inst["invariants"]["mixed"], serde_json::json!(["1", "2"]));
    assert_eq!(inst["ladder"]["E"][1], "3/2");
    assert_eq!(inst["equality"]["holds"], false);
    assert!(inst["oracle"]["relative_error"].is_f64());
}

#[test]
fn analyze_maximal_powers_and_staircase() {
    let doc = json(&lct(&["analyze", &corpus("maximal_powers.json")]));
    let instances = doc["instances"].as_array().unwrap();
    let labels: Vec<&str> = instances.iter().map(|i| i["label"].as_str().unwrap()).collect();
    let mut sorted = labels.clone();
    sorted.sort_unstable();
    assert_eq!(labels, sorted);
    for inst in instances {
        assert_eq!(inst["equality"]["holds"], true);
        let n = inst["n"].as_u64().unwrap() as usize;
        let j: Vec<u64> = (1..=n as u64).collect();
        assert_eq!(inst["equality"]["witness"]["J"], serde_json::json!(j));
    }
    let doc = json(&lct(&["analyze", &corpus("staircase.json")]));
    assert_eq!(doc["instances"][0]["invariants"]["lct"], "5/6");
    assert_eq!(doc["instances"][0]["ladder"]["E"][1], "5/6");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{\"n\": 2");
    assert_eq!(lct(&["analyze", &bad]).status.code(), Some(2));
    let missing = dir.path().join("nope.json").display().to_string();
    assert_eq!(lct(&["analyze", &missing]).status.code(), Some(2));
    let frac = write(dir.path(), "frac.json", r#"{"n": 1, "kind": "ideal", "generators": [["1/2"]]}"#);
    assert_eq!(lct(&["analyze", &frac]).status.code(), Some(2));
    let big = write(dir.path(), "big.json", r#"{"n": 5, "kind": "ideal", "generators": [[1,1,1,1,1]]}"#);
    assert_eq!(lct(&["analyze", &big]).status.code(), Some(3));
    assert_eq!(lct(&["compare", &corpus("weight.json")]).status.code(), Some(3));
    let four = write(dir.path(), "four.json", r#"{"n": 4, "kind": "ideal", "generators": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}"#);
    assert_eq!(lct(&["analyze", &four]).status.code(), Some(0));
    assert_eq!(lct(&["compare", &four]).status.code(), Some(3));
    assert_eq!(lct(&["random", "--n", "5", "--count", "1"]).status.code(), Some(3));
    assert_eq!(lct(&["--oracle-tolerance", "3/2", "analyze", &four]).status.code(), Some(1));
}

#[test]
fn compare_table() {
    let out = lct(&["compare", &corpus("staircase.json")]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let rows = doc["instances"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["exact"], "6");
    assert_eq!(rows[0]["oracle"], "25/4");
    assert_eq!(rows[1]["exact"], "6/5");
    let text = lct(&["--format", "text", "compare", &corpus("staircase.json")]);
    assert!(String::from_utf8_lossy(&text.stdout).contains("staircase"));
}

#[test]
fn random_is_byte_stable() {
    let args = ["random", "--n", "2", "--count", "15", "--seed", "42", "--max-exp", "5"];
    let a = lct(&args);
    let b = lct(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let doc = json(&a);
    assert_eq!(doc["tally"]["instances"], 15);
    assert_eq!(doc["tally"]["ladder_violations"], 0);
    let other = lct(&["random", "--n", "2", "--count", "15", "--seed", "43", "--max-exp", "5"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn random_planted_detects_everything() {
    let out = lct(&["random", "--n", "3", "--count", "10", "--seed", "9", "--planted", "--skip-oracle"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["tally"]["true_positives"], 10);
    assert_eq!(doc["tally"]["false_positives"], 0);
    assert_eq!(doc["corpus"].as_array().unwrap().len(), 20);
}

#[test]
fn out_flag_and_text_format() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.txt");
    let out = lct(&[
        "--format",
        "text",
        "--out",
        &target.display().to_string(),
        "analyze",
        &corpus("normal_crossing.json"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&target).unwrap();
    assert!(text.contains("normal-crossing"));
    assert!(text.contains("c = 1"));
}

#[test]
fn regularization_cap_is_enforced() {
    let out = lct(&["--nmax-regularization", "1", "analyze", &corpus("normal_crossing.json")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("stabilize"));
}

#[test]
fn generated_corpus_round_trips() {
    let out = lct(&["random", "--n", "3", "--count", "5", "--seed", "1", "--skip-oracle"]);
    let doc = json(&out);
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "corpus.json", &doc["corpus"].to_string());
    let again = lct(&["analyze", &path]);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(json(&again)["instances"].as_array().unwrap().len(), 5);
}
