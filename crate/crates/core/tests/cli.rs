use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_solvency"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("solvency-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn gen_prime(d: usize, name: &str) -> PathBuf {
    let path = scratch(name);
    let out = run(&["gen", "prime", "--d", &d.to_string(), "--start", "59", "-o", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn prime_twenty_validates_strictly() {
    let path = gen_prime(20, "p20.json");
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written["pi"][19][18], "2713");
    let out = run(&["validate", s(&path)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["holds_5_strict"], true);
}

#[test]
fn all_ones_fails_validation() {
    let path = scratch("ones.json");
    std::fs::write(&path, r#"{"d": 2, "pi": [["1", "1"], ["1", "1"]]}"#).unwrap();
    let out = run(&["validate", s(&path)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["holds_4"], false);
}

#[test]
fn zero_denominator_is_a_parse_error() {
    let path = scratch("bad.json");
    std::fs::write(&path, r#"{"d": 2, "pi": [["1", "1/0"], ["1", "1"]]}"#).unwrap();
    let out = run(&["validate", s(&path)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("zero denominator"));
}

#[test]
fn gen_rejects_small_prime_start() {
    let out = run(&["gen", "prime", "--d", "3", "--start", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("square condition"));
}

#[test]
fn gen_bidask_csv() {
    let out = run(&["gen", "bidask", "--a", "2,3", "--b", "1,2", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "1,3\n1,1\n");
}

#[test]
fn csv_matrix_round_trip() {
    let path = scratch("p4.csv");
    let out = run(&["gen", "prime", "--d", "4", "-o", s(&path)]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("1,59,"), "{text}");
    assert_eq!(run(&["validate", s(&path)]).status.code(), Some(0));
}

#[test]
fn extract_two_assets() {
    let path = scratch("two.json");
    std::fs::write(&path, r#"{"d": 2, "pi": [["1", "3/2"], ["2", "1"]]}"#).unwrap();
    let out = run(&["extract", s(&path), "--p", "1", "--config", "1"]);
    assert!(out.status.success());
    // (1, 3/2) scaled to max entry 1
    assert_eq!(json(&out)["y"], serde_json::json!(["2/3", "1"]));
}

#[test]
fn extract_rejects_bad_configuration() {
    let path = gen_prime(5, "p5-extract.json");
    let out = run(&["extract", s(&path), "--p", "1,4", "--config", "3,2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sum"));
}

#[test]
fn extract_on_the_n_side() {
    let path = gen_prime(5, "p5-n.json");
    let out = run(&["extract", s(&path), "--p", "1,4", "--config", "2,1,1", "--side", "N"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["side"], "N");
    assert_eq!(v["config"], serde_json::json!([2, 1, 1]));
}

#[test]
fn count_twenty() {
    let out = run(&["count", "--d", "20"]);
    let v = json(&out);
    assert_eq!(v["lower"], 1_048_574u64);
    assert_eq!(v["upper"], 35_345_263_800u64);
}

#[test]
fn count_matrix_is_exact() {
    let path = gen_prime(4, "p4-count.json");
    let v = json(&run(&["count", s(&path)]));
    assert_eq!(v["exact"], 20);
}

#[test]
fn enumerate_with_double_description() {
    let path = gen_prime(4, "p4.json");
    let out = run(&["enumerate", s(&path), "--oracle", "dd"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["count"], 20);
    assert_eq!(v["agreement"], true);
    assert_eq!(v["directions"].as_array().unwrap().len(), 20);
}

#[test]
fn enumerate_strict_bid_ask() {
    let path = scratch("ba5.json");
    let out = run(&[
        "gen", "bidask", "--a", "3,5,7,11,13", "--b", "2,4,6,10,12", "-o", s(&path),
    ]);
    assert!(out.status.success());
    let v = json(&run(&["enumerate", s(&path), "--oracle", "tree", "--no-config-sets"]));
    assert_eq!(v["count"], 30);
    assert_eq!(v["agreement"], true);
}

#[test]
fn enumerate_budget_exit_code() {
    let path = gen_prime(5, "p5-budget.json");
    let out = bin()
        .args(["enumerate", s(&path)])
        .env("SOLVENCY_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn solvency_verdicts() {
    let path = gen_prime(5, "p5-solvent.json");
    let out = run(&["solvent", s(&path), "--x", "1,0,0,0,0", "--strict"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["solvent"], true);
    let out = run(&["solvent", s(&path), "--x", "-1,-1,-1,-1,-1", "--strict"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["solvent"], false);
    let out = run(&["solvent", s(&path), "--x", "-1,-1,-1,-1,-1"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn trade_plan_has_three_candidates() {
    let path = gen_prime(5, "p5-plan.json");
    let v = json(&run(&["tradeplan", s(&path), "--x", "5,-1,-1,3,-2"]));
    assert_eq!(v["P"], serde_json::json!([1, 4]));
    assert_eq!(v["N"], serde_json::json!([2, 3, 5]));
    assert_eq!(v["entries"].as_array().unwrap().len(), 3);
}

#[test]
fn sequence_sets_from_graph_files() {
    let k23 = scratch("k23.json");
    std::fs::write(
        &k23,
        r#"{"P": [1, 2], "N": [3, 4, 5], "arcs": [[1,3],[1,4],[1,5],[2,3],[2,4],[2,5]]}"#,
    )
    .unwrap();
    let v = json(&run(&["lemma4", "--graph", s(&k23)]));
    assert_eq!(v["graphs"][0]["left"], 3);
    assert_eq!(v["graphs"][0]["right"], 3);
    assert_eq!(v["graphs"][0]["equal"], true);

    let path = scratch("path.json");
    std::fs::write(&path, r#"{"P": [1, 3], "N": [2, 4], "arcs": [[1,2],[3,2],[3,4]]}"#).unwrap();
    let v = json(&run(&["lemma4", "--graph", s(&path)]));
    assert_eq!(v["graphs"][0]["left"], 1);
    assert_eq!(v["graphs"][0]["right"], 1);
}

#[test]
fn random_sequence_sweep_is_reproducible() {
    let a = run(&["lemma4", "--random", "100", "--max-arcs", "12", "--seed", "11"]);
    let b = run(&["lemma4", "--random", "100", "--max-arcs", "12", "--seed", "11"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["seed"], 11);
    assert_eq!(v["all_equal"], true);
}

#[test]
fn thread_count_does_not_change_output() {
    let path = gen_prime(5, "p5-threads.json");
    let one = run(&["enumerate", s(&path), "--threads", "1"]);
    let four = run(&["enumerate", s(&path), "--threads", "4"]);
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["count"]).status.code(), Some(2));
    assert_eq!(run(&["solvent", "/nonexistent.json", "--x", "1"]).status.code(), Some(2));
}
