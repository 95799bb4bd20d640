use std::fs;
use std::process::{Command, Output};

fn intmoo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_intmoo"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn unknown_names_are_usage_errors() {
    let o = intmoo(&["experiment", "--problem", "p9"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("p1, p2, p3"));
    let o = intmoo(&["solve", "--problem", "p1", "--variant", "best2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("rand1, best, degl"));
    let o = intmoo(&["solve", "--problem", "p1", "--format", "xml"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn runtime_errors_exit_with_one() {
    let o = intmoo(&["solve", "--problem", "p1", "--config", "/nonexistent/cfg.json"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("/nonexistent/cfg.json"));
    let o = intmoo(&["verify", "--problem", "p1", "--out", "/nonexistent/dir/out.json"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_reports_dominators() {
    let o = intmoo(&["verify", "--problem", "p2"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let checks = v["checks"].as_array().unwrap();
    let c = checks
        .iter()
        .find(|c| c["x"] == serde_json::json!([10, 1]))
        .unwrap();
    assert_eq!(c["pareto"], false);
    let doms = c["dominated_by_known"].as_array().unwrap();
    assert!(doms.contains(&serde_json::json!([7, 4])) && doms.contains(&serde_json::json!([8, 3])));

    let o = intmoo(&["verify", "--problem", "p3", "--format", "csv"]);
    assert!(stdout(&o)
        .lines()
        .any(|l| l == "\"(5,7)\",success_table,false,0.5,false,"));
}

#[test]
fn experiment_with_config_file_and_output_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"alternations": 2, "ts_iterations": 100, "runs": 3}"#).unwrap();
    let out = dir.path().join("report.json");
    let o = intmoo(&[
        "experiment",
        "--problem",
        "p3",
        "--variant",
        "rand1",
        "--seed",
        "4",
        "--format",
        "json",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["runs"], 3);
    assert_eq!(v["variant"], "rand1");
    assert_eq!(v["config"]["alternations"], 2);
    assert_eq!(v["seeds"].as_array().unwrap().len(), 3);
}

#[test]
fn solve_prints_objectives_in_original_sense() {
    let o = intmoo(&["solve", "--problem", "p1", "--seed", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("solution,f1,f2,f3"));
    if text.contains("\"(4,4)\"") {
        assert!(text.lines().any(|l| l == "\"(4,4)\",28,68,44"));
    }
}

#[test]
fn rank_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("m.csv");
    fs::write(&input, "name,cost,quality\na,1,1\nb,2,2\n").unwrap();
    let o = intmoo(&["rank", input.to_str().unwrap(), "--benefit", "quality"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("alternative,closeness,rank,d_plus,d_minus"));
    let a: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(a[0], "a");
    assert_eq!(a[1].parse::<f64>().unwrap(), 0.5);
}

#[test]
fn identical_seeds_give_identical_csv() {
    let args = ["experiment", "--problem", "p1", "--runs", "2", "--seed", "99"];
    let a = intmoo(&args);
    let b = intmoo(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
