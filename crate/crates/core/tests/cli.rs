use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn fivedist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fivedist")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json_file(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn construct_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("pts.json");
    let csv = dir.path().join("pts.csv");
    let svg = dir.path().join("pts.svg");
    let out =
        fivedist(&["construct", "--n", "128", "--seed", "1", "--out", s(&pts), "--csv", s(&csv), "--svg", s(&svg)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));

    let report = json_file(&dir.path().join("pts.report.json"));
    assert_eq!(report["status"], "ok");
    let r = &report["report"];
    assert_eq!(r["verified"], true);
    assert_eq!(r["general_position"], true);
    assert_eq!(r["concyclic_free"], true);
    assert_eq!(r["final_patterns"]["forbidden_total"], 0);
    assert_eq!(report["manifest"]["config"]["p"], 521);
    assert_eq!(report["manifest"]["outputs"].as_array().unwrap().len(), 3);

    let file = json_file(&pts);
    let size = file["points"].as_array().unwrap().len();
    assert_eq!(r["sizes"]["final"], size);
    assert_eq!(file["params"], r["params"]);
    assert_eq!(fs::read_to_string(&csv).unwrap().lines().count(), size + 1);
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<?xml"));

    let verify = fivedist(&["verify", "--in", s(&pts), "--json"]);
    assert_eq!(code(&verify), 0);
    let v: Value = serde_json::from_str(&stdout(&verify)).unwrap();
    assert_eq!(v["counts"], r["final_patterns"]);
    assert_eq!(v["concyclic_quadruples"], 0);
    assert_eq!(v["general_position"], true);

    let from_file: u64 = stdout(&fivedist(&["distances", "--in", s(&pts)])).trim().parse().unwrap();
    let grid: u64 = stdout(&fivedist(&["distances", "--n", "128"])).trim().parse().unwrap();
    assert_eq!(from_file, r["distinct_distances"].as_u64().unwrap());
    assert!(from_file <= grid);
}

#[test]
fn construct_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let run = |tag: &str| {
        let pts = dir.path().join(format!("{tag}.json"));
        let report = dir.path().join("report.json");
        let timings = dir.path().join(format!("{tag}.timings.json"));
        let out = fivedist(&[
            "construct",
            "--n",
            "96",
            "--seed",
            "7",
            "--out",
            s(&pts),
            "--report",
            s(&report),
            "--timings",
            s(&timings),
        ]);
        assert_eq!(code(&out), 0);
        assert!(json_file(&timings)["elapsed_ms"].is_u64());
        let points = fs::read(&pts).unwrap();
        // The manifest records the output path, so compare reports under one name.
        (points, fs::read(&report).unwrap())
    };
    let (p1, r1) = run("a");
    let (p2, _) = run("b");
    let (p3, r3) = run("a");
    assert_eq!(p1, p2);
    assert_eq!(p1, p3);
    assert_eq!(r1, r3);
}

#[test]
fn construct_rejects_small_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = fivedist(&["construct", "--n", "8", "--seed", "1", "--out", s(&dir.path().join("x.json"))]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("minimum"));
    assert_eq!(code(&fivedist(&["construct", "--n", "8"])), 2);
    assert_eq!(code(&fivedist(&["construct", "--n", "64", "--seed", "1", "--out", "x.json", "--epsilon", "3/2"])), 2);
    assert_eq!(code(&fivedist(&["construct", "--n", "64", "--seed", "1", "--out", "x.json", "--mode", "some"])), 2);
}

#[test]
fn construct_exhaustion_exits_3_and_still_reports() {
    let dir = tempfile::tempdir().unwrap();
    let pts = dir.path().join("pts.json");
    let out = fivedist(&[
        "construct",
        "--n",
        "64",
        "--seed",
        "1",
        "--out",
        s(&pts),
        "--window",
        "0.0001",
        "--max-retries",
        "3",
    ]);
    assert_eq!(code(&out), 3);
    assert!(!pts.exists());
    let report = json_file(&dir.path().join("pts.report.json"));
    assert_eq!(report["status"], "retries-exhausted");
    assert_eq!(report["attempts"].as_array().unwrap().len(), 3);
}

#[test]
fn verify_flags_injected_square() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sq.json");
    fs::write(&path, r#"{"n":16,"points":[[3,3],[4,3],[3,4],[4,4],[9,1]]}"#).unwrap();
    let out = fivedist(&["verify", "--in", s(&path), "--json"]);
    assert_eq!(code(&out), 1);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let listed = v["quadruples"].as_array().unwrap();
    let square = listed
        .iter()
        .find(|q| q["points"] == serde_json::json!([[3, 3], [3, 4], [4, 3], [4, 4]]))
        .expect("square listed");
    let labels: Vec<&str> = square["patterns"].as_array().unwrap().iter().map(|l| l.as_str().unwrap()).collect();
    for want in ["pi2", "pi3", "pi5", "pi6"] {
        assert!(labels.contains(&want), "{labels:?}");
    }
    assert!(!labels.contains(&"pi1"));
    assert_eq!(v["counts"]["pi2"], 1);

    let text = stdout(&fivedist(&["verify", "--in", s(&path)]));
    assert!(text.contains("forbidden"));
}

#[test]
fn verify_rejects_bad_files() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("dup.json", r#"{"n":16,"points":[[1,1],[1,1]]}"#),
        ("range.json", r#"{"n":16,"points":[[1,16]]}"#),
        ("extra.json", r#"{"n":16,"points":[],"colour":"red"}"#),
        ("junk.json", "not json"),
        ("offconic.json", r#"{"n":16,"params":{"p":67,"a":1,"b":0,"c":0,"d":1,"e":0},"points":[[1,2]]}"#),
    ];
    for (name, body) in cases {
        let path = dir.path().join(name);
        fs::write(&path, body).unwrap();
        let out = fivedist(&["verify", "--in", s(&path)]);
        assert_eq!(code(&out), 2, "{name}");
        assert!(!out.stderr.is_empty(), "{name}");
    }
    assert_eq!(code(&fivedist(&["verify", "--in", s(&dir.path().join("missing.json"))])), 2);
}

#[test]
fn census_small_grids() {
    let out = fivedist(&["census", "--n", "2", "--json"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let counts = &v["censuses"][0]["counts"];
    for k in ["pi2", "pi3", "pi5", "pi6"] {
        assert_eq!(counts[k], 1, "{k}");
    }
    assert_eq!(counts["pi1"], 0);
    assert_eq!(counts["forbidden_total"], 1);

    let v: Value = serde_json::from_str(&stdout(&fivedist(&["census", "--n", "3", "--json"]))).unwrap();
    assert_eq!(v["censuses"][0]["counts"]["pi2"], 22);
    assert_eq!(v["censuses"][0]["quadruples"], 126);

    let out = fivedist(&["census", "--n-list", "4,5,6", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["censuses"].as_array().unwrap().len(), 3);
    assert!(v["fits"].as_array().unwrap().iter().any(|f| f["pattern"] == "pi2"));
    assert!(v["fits"].as_array().unwrap().iter().all(|f| f["pattern"] != "pi1"));
}

#[test]
fn census_bound_is_enforced() {
    let out = fivedist(&["census", "--n", "17"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("16"));
    assert_eq!(code(&fivedist(&["census"])), 2);
    assert_eq!(code(&fivedist(&["census", "--n", "2", "--n-list", "3,4"])), 2);
}

#[test]
fn distances_examples() {
    assert_eq!(stdout(&fivedist(&["distances", "--n", "2"])).trim(), "2");
    assert_eq!(stdout(&fivedist(&["distances", "--n", "3"])).trim(), "5");
    let v: Value = serde_json::from_str(&stdout(&fivedist(&["distances", "--n", "3", "--json"]))).unwrap();
    assert_eq!(v["distinct_distances"], 5);
    assert_eq!(code(&fivedist(&["distances"])), 2);
    assert_eq!(code(&fivedist(&["distances", "--n", "2", "--in", "x.json"])), 2);
}

#[test]
fn oracle_examples() {
    let exact = |pts: &str| {
        let out = fivedist(&["oracle", "--p", "11", "--points", pts, "--exact"]);
        assert_eq!(code(&out), 0);
        stdout(&out).trim().to_string()
    };
    assert_eq!(exact("(0,0);(1,0);(0,1);(1,2)"), "10");
    assert_eq!(exact("(0,0);(1,0);(0,1);(1,1)"), "0");
    assert_eq!(exact("(0,0);(1,0);(2,0);(1,2)"), "0");

    let out = fivedist(&["oracle", "--p", "11", "--points", "(0,0);(1,0);(0,1);(1,2)", "--exact", "--json"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["result"]["count"], 10);
    assert_eq!(v["result"]["predicted"], 10);
    assert_eq!(v["result"]["valid_states"], 145200);

    assert_eq!(code(&fivedist(&["oracle", "--p", "37", "--points", "(0,0);(1,0);(0,1);(1,2)", "--exact"])), 2);
    assert_eq!(code(&fivedist(&["oracle", "--p", "12", "--points", "(0,0);(1,0);(0,1);(1,2)", "--exact"])), 2);
    assert_eq!(code(&fivedist(&["oracle", "--p", "11", "--points", "(0,0);(1,0)", "--exact"])), 2);
    assert_eq!(code(&fivedist(&["oracle", "--p", "11", "--points", "(0,0);(1,0);(0,1);(1,2)", "--montecarlo"])), 2);
}

#[test]
fn oracle_randomized_modes_are_reproducible() {
    let mc = [
        "oracle",
        "--p",
        "7",
        "--points",
        "(0,0);(1,0);(0,1);(1,2)",
        "--montecarlo",
        "--trials",
        "20000",
        "--seed",
        "4",
        "--json",
    ];
    let a = fivedist(&mc);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, fivedist(&mc).stdout);
    let v: Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["result"]["trials"], 20000);

    let par = ["oracle", "--p", "13", "--parallelogram", "--samples", "10", "--seed", "2", "--json"];
    let b = fivedist(&par);
    assert_eq!(code(&b), 0);
    assert_eq!(b.stdout, fivedist(&par).stdout);
    let v: Value = serde_json::from_str(&stdout(&b)).unwrap();
    assert_eq!(v["result"]["with_parallelogram"], 0);
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&fivedist(&["--help"])), 0);
    assert_eq!(code(&fivedist(&["--version"])), 0);
    assert_eq!(code(&fivedist(&["nonsense"])), 2);
}
