use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn wsep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wsep"))
        .args(args)
        .output()
        .expect("the binary runs")
}

fn stdout_json(out: &Output) -> Value {
    let text = String::from_utf8_lossy(&out.stdout);
    serde_json::from_str(&text).unwrap_or_else(|e| panic!("stdout is JSON ({e}): {text}"))
}

fn write_graph(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.display().to_string()
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let p3 = write_graph(dir.path(), "p3.txt", "3 2\n0 1\n1 2\n");

    let zero_w = wsep(&["solve", "--graph", &p3, "--w", "0"]);
    assert_eq!(zero_w.status.code(), Some(2));

    let missing = wsep(&["solve", "--graph", "/nonexistent/graph.txt", "--w", "1"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).starts_with("error:"));

    let bad_mode = wsep(&["solve", "--graph", &p3, "--w", "1", "--mode", "anneal"]);
    assert_eq!(bad_mode.status.code(), Some(2));
}

#[test]
fn oracle_solve_reports_the_path_optimum() {
    let dir = TempDir::new().unwrap();
    let p3 = write_graph(dir.path(), "p3.txt", "3 2\n0 1\n1 2\n");
    let out = wsep(&["solve", "--graph", &p3, "--w", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let record = stdout_json(&out);
    assert_eq!(record["opt"], 1);
    assert_eq!(record["witness"], "010");
    assert_eq!(record["feasible"], true);
}

#[test]
fn evolutionary_solve_meets_the_oracle_target() {
    let dir = TempDir::new().unwrap();
    let p6 = write_graph(dir.path(), "p6.txt", "6 5\n0 1\n1 2\n2 3\n3 4\n4 5\n");
    let out = wsep(&[
        "solve", "--graph", &p6, "--w", "2", "--mode", "semo-alt", "--seed", "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let record = stdout_json(&out);
    assert_eq!(record["opt"], 2);
    assert_eq!(record["size"], 2);
    assert_eq!(record["met"], true);
}

#[test]
fn unmet_milestones_exit_with_one() {
    let dir = TempDir::new().unwrap();
    let p3 = write_graph(dir.path(), "p3.txt", "3 2\n0 1\n1 2\n");
    let out = wsep(&[
        "evolve", "--graph", &p3, "--w", "1", "--until", "approx", "--budget", "50",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let record = stdout_json(&out);
    assert_eq!(record["until_met"], false);
    assert_eq!(record["iterations"], 50);
}

#[test]
fn evolve_writes_a_replayable_trace() {
    let dir = TempDir::new().unwrap();
    let p5 = write_graph(dir.path(), "p5.txt", "5 4\n0 1\n1 2\n2 3\n3 4\n");
    let trace_path = dir.path().join("trace.json");
    let args = [
        "evolve", "--graph", &p5, "--w", "1", "--until", "optimum", "--oracle",
        "--seed", "11", "--budget", "100000",
    ];
    let out = wsep(
        &[&args[..], &["--trace", &trace_path.display().to_string()]].concat(),
    );
    assert_eq!(out.status.code(), Some(0));
    let record = stdout_json(&out);
    assert_eq!(record["until_met"], true);
    assert_eq!(record["best_feasible_size"], 2);

    let trace: Value =
        serde_json::from_str(&std::fs::read_to_string(&trace_path).unwrap()).unwrap();
    assert_eq!(trace["iterations"], record["iterations"]);
    let names: Vec<&str> = trace["events"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"optimum"));

    let again = wsep(&args);
    assert_eq!(stdout_json(&again)["iterations"], record["iterations"]);
}

#[test]
fn lp_reports_exact_rationals() {
    let dir = TempDir::new().unwrap();
    let c5 = write_graph(dir.path(), "c5.txt", "5 5\n0 1\n1 2\n2 3\n3 4\n0 4\n");
    let out = wsep(&["lp", "--graph", &c5, "--w", "1", "--bounds", "0"]);
    assert_eq!(out.status.code(), Some(0));
    let record = stdout_json(&out);
    assert_eq!(record["lp"], "5/2");
    assert_eq!(record["bounds"]["min"], "1/2");
    assert_eq!(record["bounds"]["max"], "1/2");
}

#[test]
fn reduce_reports_the_star_kernel() {
    let dir = TempDir::new().unwrap();
    let star = write_graph(dir.path(), "star.txt", "5 4\n0 1\n0 2\n0 3\n0 4\n");
    let out = wsep(&["reduce", "--graph", &star, "--w", "1", "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let record = stdout_json(&out);
    assert_eq!(record["degree"]["forced"], serde_json::json!([0]));
    assert_eq!(record["degree"]["budget"], 0);
    assert_eq!(record["degree"]["kernel_ok"], true);
    assert_eq!(record["degree"]["no_instance"], false);
}

#[test]
fn pack_builds_a_verified_packing() {
    let dir = TempDir::new().unwrap();
    let p5 = write_graph(dir.path(), "p5.txt", "5 4\n0 1\n1 2\n2 3\n3 4\n");
    let out = wsep(&["pack", "--graph", &p5, "--w", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let record = stdout_json(&out);
    assert_eq!(record["strict"], true);
    let size = record["size"].as_u64().unwrap();
    assert_eq!(record["parts"].as_array().unwrap().len() as u64, size);
    assert!(size >= 1);

    let triangle = write_graph(dir.path(), "k3.txt", "3 3\n0 1\n1 2\n0 2\n");
    let none = wsep(&["pack", "--graph", &triangle, "--w", "2"]);
    assert_eq!(none.status.code(), Some(1));
}

#[test]
fn generated_graphs_solve_round_trip() {
    let dir = TempDir::new().unwrap();
    let graph_path = dir.path().join("path.txt");
    let out = wsep(&[
        "gen", "--kind", "path", "--n", "9", "--w", "2",
        "--out", &graph_path.display().to_string(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let cert = stdout_json(&out);
    assert_eq!(cert["exact"], 3);

    let solved = wsep(&["solve", "--graph", &graph_path.display().to_string(), "--w", "2"]);
    assert_eq!(solved.status.code(), Some(0));
    assert_eq!(stdout_json(&solved)["opt"], 3);
}

#[test]
fn bench_writes_round_trippable_csv() {
    let dir = TempDir::new().unwrap();
    let config_path = dir.path().join("campaign.toml");
    std::fs::write(
        &config_path,
        concat!(
            "[campaign]\ntrials = 2\nmaster_seed = 5\n\n",
            "[generator]\nkind = \"path\"\nn = [4, 6]\nw = 1\n\n",
            "[algorithm]\nalgorithm = \"semo-alt\"\nfitness = \"f2\"\n\n",
            "[stopping]\nbudget = 3000\nuntil = [\"zero_point\"]\n",
        ),
    )
    .unwrap();
    let rows_path = dir.path().join("rows.csv");
    let agg_path = dir.path().join("agg.csv");
    let out = wsep(&[
        "bench",
        "--config", &config_path.display().to_string(),
        "--rows", &rows_path.display().to_string(),
        "--aggregates", &agg_path.display().to_string(),
    ]);
    assert_eq!(out.status.code(), Some(0));

    let rows = wsep_cli::campaign::rows_from_csv(&std::fs::read_to_string(&rows_path).unwrap())
        .expect("rows parse back");
    assert_eq!(rows.iter().filter(|r| r.event == "end").count(), 4);
    let aggregates =
        wsep_cli::campaign::aggregates_from_csv(&std::fs::read_to_string(&agg_path).unwrap())
            .expect("aggregates parse back");
    assert!(aggregates.iter().any(|a| a.event == "zero_point" && a.hits == 2));
}

#[test]
fn verify_sweeps_pass_on_enumerated_graphs() {
    let out = wsep(&[
        "verify", "--scope", "graph", "--size", "4", "--w", "1", "--points", "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().all(|l| l.starts_with("ok")));
}
