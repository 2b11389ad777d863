use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn atwkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_atwkit")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn construct(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name);
    let mut full = vec!["construct"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let o = atwkit(&full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    path.to_str().unwrap().to_string()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(stdout(o).trim()).unwrap()
}

#[test]
fn example1_golden_file() {
    let o = atwkit(&["construct", "example1", "--q", "2", "--d", "2", "--m", "4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "field=2^4:19 base=2^1:2 k=2 n=4\n0 0 1 6\n1 6 0 0\n");
}

#[test]
fn other_constructions() {
    let o = atwkit(&["construct", "hadamard", "--q", "2", "--m", "2", "--k", "2"]);
    assert_eq!(stdout(&o), "field=2^2:7 base=2^1:2 k=2 n=4\n1 2 0 0\n0 0 1 2\n");
    let o = atwkit(&["construct", "expand-mrd", "--q", "2", "--t", "2", "--l", "3", "--m", "6"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("field=2^6:67 base=2^1:2 k=2 n=6\n"));
    assert_eq!(text.lines().count(), 3);
    let o = atwkit(&["construct", "example1", "--q", "2", "--d", "3", "--m", "4"]);
    assert_eq!(o.status.code(), Some(2));
    let o = atwkit(&["construct", "gabidulin", "--q", "2", "--m", "4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn analyze_reports() {
    let dir = TempDir::new().unwrap();
    let ex1 = construct(dir.path(), "ex1.txt", &["example1", "--q", "2", "--d", "2", "--m", "4"]);
    let v = json(&atwkit(&["--json", "analyze", &ex1]));
    assert_eq!(v["atw"], true);
    assert_eq!(v["counts"], serde_json::json!({"0": 1, "2": 75, "4": 180}));
    assert_eq!(v["predicted"], serde_json::json!({"0": 1, "2": 75, "4": 180}));

    let code = atwkit::format::parse_generator(&fs::read_to_string(&ex1).unwrap()).unwrap();
    let lib = atwkit::atw::analyze_atw(&code, 1_000_000).unwrap().to_json();
    assert_eq!(v, lib);

    let ex2 = construct(dir.path(), "ex2.txt", &["example2", "--q", "2", "--d", "1", "--k", "3"]);
    let v = json(&atwkit(&["--json", "analyze", &ex2]));
    assert_eq!(v["atw"], false);
    assert_eq!(v["two_weight"], true);

    let v = json(&atwkit(&["--json", "analyze", &ex1, "--metric", "hamming-expansion"]));
    assert_eq!(v["counts"], serde_json::json!({"0": 1, "12": 75, "15": 180}));
    assert_eq!(v["antipodal"], true);
}

#[test]
fn degenerate_input_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("deg.txt");
    fs::write(&path, "field=2^4 base=2^1 k=1 n=2\n1 1\n").unwrap();
    let o = atwkit(&["analyze", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("compress"));
}

#[test]
fn verifiers() {
    let dir = TempDir::new().unwrap();
    let ex1 = construct(dir.path(), "ex1.txt", &["example1", "--q", "2", "--d", "2", "--m", "4"]);
    for what in ["atw", "theorem6", "weight-corr", "induced-by-mrd", "half-classify"] {
        let o = atwkit(&["verify", what, &ex1]);
        assert_eq!(o.status.code(), Some(0), "{what}: {}", stdout(&o));
        assert!(stdout(&o).contains("PASS"));
    }
    let gab = construct(dir.path(), "gab.txt", &["gabidulin", "--q", "2", "--m", "4", "--l", "4", "--k", "2"]);
    assert_eq!(atwkit(&["verify", "weight-corr", &gab]).status.code(), Some(0));
    assert_eq!(atwkit(&["verify", "mrd", &gab]).status.code(), Some(0));
    let ex2 = construct(dir.path(), "ex2.txt", &["example2", "--q", "2", "--d", "1", "--k", "3"]);
    assert_eq!(atwkit(&["verify", "atw", &ex2]).status.code(), Some(1));
    let had = construct(dir.path(), "had.txt", &["hadamard", "--q", "2", "--m", "2", "--k", "2"]);
    let o = atwkit(&["verify", "mrd", &had]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn spread_commands() {
    let dir = TempDir::new().unwrap();
    let ex1 = construct(dir.path(), "ex1.txt", &["example1", "--q", "2", "--d", "2", "--m", "4"]);
    let dump = dir.path().join("spread.txt");
    let o = atwkit(&["spread", "extract", &ex1, "--out", dump.to_str().unwrap()]);
    assert!(o.status.success());
    let text = fs::read_to_string(&dump).unwrap();
    assert!(text.starts_with("N=4 t=2 q=2 count=5\n"));
    assert_eq!(text.lines().count(), 6);
    assert_eq!(atwkit(&["verify", "spread", dump.to_str().unwrap()]).status.code(), Some(0));

    let v = json(&atwkit(&["--json", "spread", "split", dump.to_str().unwrap()]));
    assert_eq!(v["blocks"].as_array().unwrap().len(), 2);

    let truncated = dir.path().join("cut.txt");
    fs::write(&truncated, text.lines().take(4).collect::<Vec<_>>().join("\n")).unwrap();
    let o = atwkit(&["verify", "spread", truncated.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("cover"));

    let w = dir.path().join("w.txt");
    fs::write(&w, "N=4 q=2\n1,0,0,0\n0,1,0,0\n0,0,1,0\n").unwrap();
    let v = json(&atwkit(&["--json", "spread", "project", dump.to_str().unwrap(), w.to_str().unwrap()]));
    assert_eq!(v["is_subspread"], false);
    assert_eq!(v["dims"], serde_json::json!([1, 2]));
    fs::write(&w, "N=4 q=2\n1,0,0,0;0,1,0,0;0,0,1,0;0,0,0,1\n").unwrap();
    let v = json(&atwkit(&["--json", "spread", "project", dump.to_str().unwrap(), w.to_str().unwrap()]));
    assert_eq!(v["is_subspread"], true);
    assert_eq!(v["t_prime"], 2);
}

#[test]
fn expand_hamming_writes_generator() {
    let dir = TempDir::new().unwrap();
    let ex1 = construct(dir.path(), "ex1.txt", &["example1", "--q", "2", "--d", "2", "--m", "4"]);
    let out = dir.path().join("h.txt");
    assert!(atwkit(&["expand-hamming", &ex1, "--out", out.to_str().unwrap()]).status.success());
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("field=2^4:19 base=2^4:19 k=2 n=15\n"));
    let v = json(&atwkit(&["--json", "analyze", out.to_str().unwrap(), "--metric", "hamming"]));
    assert_eq!(v["counts"], serde_json::json!({"0": 1, "12": 75, "15": 180}));
}

#[test]
fn search_is_deterministic_across_threads() {
    let args = ["--json", "search", "--q", "2", "--m", "3", "--n", "3", "--k", "2", "--sample", "200", "--seed", "9"];
    let a = atwkit(&args);
    let b = atwkit(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let mut threaded = vec!["--threads", "3"];
    threaded.extend_from_slice(&args);
    assert_eq!(atwkit(&threaded).stdout, a.stdout);
    let last = stdout(&a).lines().last().unwrap().to_string();
    let v: serde_json::Value = serde_json::from_str(&last).unwrap();
    assert_eq!(v["summary"]["visited"], 200);
}

#[test]
fn exhaustive_search_finds_example1_class() {
    let o = atwkit(&["--json", "search", "--q", "2", "--m", "2", "--n", "2", "--k", "2", "--atw-only"]);
    assert!(o.status.success());
    for line in stdout(&o).lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        if let Some(d) = v.get("d") {
            assert_eq!(v["atw"], true);
            assert_eq!(d, 1);
        }
    }
}

#[test]
fn budget_overrun_prints_count() {
    let o = atwkit(&["--budget", "1000", "search", "--q", "2", "--m", "3", "--n", "3", "--k", "3"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("788035"));
}

#[test]
fn equivalence_command() {
    let dir = TempDir::new().unwrap();
    let ex1 = construct(dir.path(), "ex1.txt", &["example1", "--q", "2", "--d", "2", "--m", "4"]);
    let gab = construct(dir.path(), "gab.txt", &["gabidulin", "--q", "2", "--m", "4", "--l", "4", "--k", "2"]);
    let v = json(&atwkit(&["--json", "equiv", &ex1, &ex1]));
    assert_eq!(v["equivalent"], true);
    assert_eq!(atwkit(&["equiv", &ex1, &gab]).status.code(), Some(1));
    assert_eq!(atwkit(&["--budget", "10", "equiv", &ex1, &gab]).status.code(), Some(3));
}

#[test]
fn field_command() {
    let v = json(&atwkit(&["--json", "field", "3^2"]));
    assert_eq!(v["order"], 9);
    assert_eq!(v["spec"], "3^2:10");
    assert_eq!(atwkit(&["field", "4^2"]).status.code(), Some(2));
}
