use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::NamedTempFile;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_double-kruskal")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

const CHERRY: &str = r#"{"nodes":[{"id":"r"},{"id":"a","le1_parent":"r"},{"id":"b","le1_parent":"r"}]}"#;
const PATH: &str = r#"{"nodes":[{"id":"x"},{"id":"y","le1_parent":"x"},{"id":"z","le1_parent":"y"}]}"#;

#[test]
fn compare_prints_the_relation() {
    let o = run(&["compare", "D0(0)", "D1(0)"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "LT\n"));
    assert_eq!(stdout(&run(&["compare", "(D0(0),D0(0))", "D0(0)"])), "GT\n");
    assert_eq!(stdout(&run(&["compare", "D0( 0 )", "D0(0)"])), "EQ\n");
    let v: Value = serde_json::from_str(&stdout(&run(&["--json", "compare", "0", "D0(0)"]))).unwrap();
    assert_eq!(v["result"], "LT");
}

#[test]
fn parse_prints_canonical_text() {
    let o = run(&["parse", " ( D1(0) , D0(0) ) "]);
    assert_eq!(stdout(&o), "(D1(0),D0(0))\n");
    let v: Value = serde_json::from_str(&stdout(&run(&["parse", "--json", "D0(D2(0))"]))).unwrap();
    assert_eq!(v["norm"], 3);
    assert_eq!(v["order"], "0");
    let bad = run(&["parse", "D0("]);
    assert_eq!(code(&bad), 1);
    assert!(stderr(&bad).contains("unexpected end of input"));
}

#[test]
fn validate_names_the_broken_rule() {
    let o = run(&["validate", "(D0(0),D1(0))"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("NOT-OT OT2"));
    let o = run(&["validate", "D0(D0(0))"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "OT\n"));
    let v: Value = serde_json::from_str(&stdout(&run(&["validate", "--json", "D0(D0(D1(0)))"]))).unwrap();
    assert_eq!(v["ot"], false);
    assert_eq!(v["clause"], "OT3");
}

#[test]
fn enumerate_streams_terms() {
    let o = run(&["enumerate", "--max-sub", "0", "--max-norm", "3"]);
    assert_eq!(stdout(&o), "0\nD0(0)\nD0(D0(0))\n");
    let o = run(&["enumerate", "--max-sub", "1", "--max-norm", "2", "--order0", "--json"]);
    assert_eq!(stdout(&o), "\"0\"\n\"D0(0)\"\n");
    assert_eq!(code(&run(&["enumerate", "--max-sub", "1", "--max-norm", "0"])), 1);
}

#[test]
fn translate_emits_dot_and_json() {
    let o = run(&["translate", "D0(D1(0))", "--dot"]);
    assert_eq!(code(&o), 0);
    let dot = stdout(&o);
    assert_eq!(dot.matches("[label=").count(), 2);
    assert_eq!(dot.matches("style=solid").count(), 1);
    assert_eq!(dot.matches("style=dashed").count(), 1);

    let v: Value = serde_json::from_str(&stdout(&run(&["translate", "D0(D2(0))"]))).unwrap();
    assert_eq!(v["nodes"].as_array().unwrap().len(), 3);

    let v: Value = serde_json::from_str(&stdout(&run(&["translate", "--sum", "(D0(0),D0(0))"]))).unwrap();
    assert_eq!(v["nodes"].as_array().unwrap().len(), 3);

    assert_eq!(code(&run(&["translate", "(D0(0),D0(0))"])), 1);
    assert_eq!(code(&run(&["translate", "--sum", "D1(0)"])), 1);
}

#[test]
fn translated_json_is_accepted_back() {
    let tree = file(&stdout(&run(&["translate", "D0(D1(0))"])));
    let o = run(&["validate-forest", tree.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "VALID nodes=2 roots=1 double-tree=true height=1 m2f-height=1\n");
}

#[test]
fn cover_prints_a_witness_or_none() {
    let (cherry, path) = (file(CHERRY), file(PATH));
    let (c, p) = (cherry.path().to_str().unwrap(), path.path().to_str().unwrap());
    let o = run(&["cover", c, p]);
    assert_eq!(code(&o), 0);
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[0], "r -> x");

    let o = run(&["cover", p, c]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "NONE\n"));

    let v: Value = serde_json::from_str(&stdout(&run(&["--json", "cover", c, p]))).unwrap();
    assert_eq!(v["covering"]["r"], "x");
    let v: Value = serde_json::from_str(&stdout(&run(&["--json", "cover", p, c]))).unwrap();
    assert!(v["covering"].is_null());
}

#[test]
fn invalid_forests_are_reported() {
    let bad = file(r#"{"nodes":[{"id":"a"},{"id":"b","le2_pred":"a"}]}"#);
    let o = run(&["validate-forest", bad.path().to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("INVALID"));
    assert!(stdout(&o).contains("nesting"));

    let o = run(&["cover", bad.path().to_str().unwrap(), bad.path().to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert_eq!(code(&run(&["validate-forest", "/nonexistent/forest.json"])), 1);
    let junk = file("not json");
    assert_eq!(code(&run(&["validate-forest", junk.path().to_str().unwrap()])), 1);
}

#[test]
fn verify_writes_a_stable_report() {
    let args = ["verify", "--suite", "ltc", "--max-nodes", "4"];
    let first = run(&args);
    assert_eq!(code(&first), 0);
    let report: Value = serde_json::from_str(&stdout(&first)).unwrap();
    assert_eq!(report["suite"], "ltc");
    assert_eq!(report["passed"], true);
    assert!(stderr(&first).starts_with("ltc: pass"));

    let again = run(&args);
    let threaded = run(&["--jobs", "2", "verify", "--suite", "ltc", "--max-nodes", "4"]);
    assert_eq!(first.stdout, again.stdout);
    assert_eq!(first.stdout, threaded.stdout);
}

#[test]
fn verify_exits_3_on_caps() {
    let o = run(&["verify", "--suite", "main-theorem", "--max-instances", "5"]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("instance cap"));
}

#[test]
fn verify_lists_suites() {
    let o = run(&["verify", "--list"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), 24);
    assert!(stdout(&o).contains("lcases"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&run(&["bogus"])), 2);
    assert_eq!(code(&run(&["compare", "0"])), 2);
    assert_eq!(code(&run(&["verify", "--suite", "no-such-suite"])), 2);
    assert_eq!(code(&run(&["verify"])), 2);
    assert_eq!(code(&run(&["--jobs", "0", "verify", "--suite", "ltc"])), 2);
    assert_eq!(code(&run(&["enumerate", "--max-sub", "1", "--max-norm", "2", "--bogus"])), 2);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn experiment_reports_a_sequence() {
    let o = run(&["experiment", "--c", "2", "--domain", "trees"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("c=2 domain=trees length=2 (exhausted"));

    let v: Value = serde_json::from_str(&stdout(&run(&["--json", "experiment", "--c", "1"]))).unwrap();
    assert_eq!(v["length"], 1);
    assert_eq!(v["exhausted"], true);

    let o = run(&["--max-instances", "3", "experiment", "--c", "3", "--domain", "ot-terms"]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("stopped"));

    assert_eq!(code(&run(&["experiment", "--c", "0"])), 1);
}

#[test]
fn identical_invocations_give_identical_bytes() {
    for args in [
        &["translate", "D1((D2(0),D1(0)))"][..],
        &["enumerate", "--max-sub", "2", "--max-norm", "5"],
        &["--json", "experiment", "--c", "2", "--domain", "double-trees", "--length-cap", "4"],
    ] {
        assert_eq!(run(args).stdout, run(args).stdout);
    }
}
