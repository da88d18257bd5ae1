//! End-to-end tests of the command-line binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_epcomm"))
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("epcomm-cli-{tag}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(path: &Path, content: &str) {
    fs::write(path, content).unwrap();
}

fn run(cmd: &mut Command) -> Output {
    cmd.output().expect("binary should run")
}

const TRIANGLE: &str = "0 1\n1 2\n2 0\n";

/// Two 4-cliques joined by one edge, with the matching truth labels.
fn cliques_fixture(dir: &Path) -> (PathBuf, PathBuf) {
    let mut edges = String::new();
    for i in 0..4 {
        for j in (i + 1)..4 {
            edges.push_str(&format!("{i} {j}\n"));
            edges.push_str(&format!("{} {}\n", 4 + i, 4 + j));
        }
    }
    edges.push_str("0 4\n");
    let graph = dir.join("cliques.edges");
    write(&graph, &edges);
    let truth = dir.join("cliques.labels");
    write(&truth, "1\n1\n1\n1\n2\n2\n2\n2\n");
    (graph, truth)
}

#[test]
fn detect_aep_writes_valid_labels() {
    let dir = tmp_dir("aep");
    let graph = dir.join("triangle.edges");
    write(&graph, TRIANGLE);
    let out = dir.join("labels.out");
    let output = run(bin()
        .args(["detect", "--method", "aep"])
        .arg("--graph")
        .arg(&graph)
        .arg("--out")
        .arg(&out));
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let text = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines.iter().all(|l| *l == "1" || *l == "-1"));
}

#[test]
fn detect_reports_nmi_against_truth() {
    let dir = tmp_dir("truth");
    let (graph, truth) = cliques_fixture(&dir);
    let out = dir.join("labels.out");
    let output = run(bin()
        .args([
            "detect",
            "--method",
            "ep",
            "--criterion",
            "ng",
            "--seed",
            "3",
        ])
        .arg("--graph")
        .arg(&graph)
        .arg("--truth")
        .arg(&truth)
        .arg("--out")
        .arg(&out));
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("nmi=1.0000"), "summary was {stdout}");
    assert!(stdout.contains("objective="));
}

#[test]
fn missing_graph_exits_2_and_names_path() {
    let output = run(bin().args(["detect", "--graph", "/nonexistent/g.edges"]));
    assert_eq!(output.status.code(), Some(2));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(
        stderr.contains("/nonexistent/g.edges"),
        "stderr was {stderr}"
    );
}

#[test]
fn unknown_flag_value_exits_2() {
    let dir = tmp_dir("badflag");
    let graph = dir.join("triangle.edges");
    write(&graph, TRIANGLE);
    let output = run(bin()
        .args(["detect", "--method", "bogus"])
        .arg("--graph")
        .arg(&graph));
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn simulate_is_deterministic_and_parallel_safe() {
    let dir = tmp_dir("sim");
    let args = |out: &Path, jobs: &str| {
        let mut c = bin();
        c.args([
            "simulate",
            "--n",
            "60",
            "--r",
            "0.1",
            "--lambda",
            "8",
            "--methods",
            "ep-ng,aep",
            "--reps",
            "3",
            "--seed",
            "11",
            "--zero-walltime",
            "--jobs",
            jobs,
        ])
        .arg("--out")
        .arg(out);
        c
    };
    let (a, b, c) = (dir.join("a.csv"), dir.join("b.csv"), dir.join("c.csv"));
    assert!(run(&mut args(&a, "1")).status.success());
    assert!(run(&mut args(&b, "1")).status.success());
    assert!(run(&mut args(&c, "3")).status.success());
    let (ta, tb, tc) = (
        fs::read(&a).unwrap(),
        fs::read(&b).unwrap(),
        fs::read(&c).unwrap(),
    );
    assert_eq!(ta, tb, "two serial runs differ");
    assert_eq!(ta, tc, "parallel run differs from serial");
    let text = String::from_utf8(ta).unwrap();
    assert!(text.starts_with("schema_version,method,criterion,"));
    assert_eq!(text.lines().count(), 1 + 3 * 2);
}

#[test]
fn simulate_without_zero_walltime_matches_on_content_columns() {
    let dir = tmp_dir("sim-wall");
    let mk = |out: &Path| {
        let mut c = bin();
        c.args([
            "simulate",
            "--n",
            "60",
            "--r",
            "0.2",
            "--lambda",
            "8",
            "--methods",
            "les",
            "--reps",
            "2",
            "--seed",
            "5",
        ])
        .arg("--out")
        .arg(out);
        c
    };
    let (a, b) = (dir.join("a.csv"), dir.join("b.csv"));
    assert!(run(&mut mk(&a)).status.success());
    assert!(run(&mut mk(&b)).status.success());
    let strip = |p: &Path| -> Vec<String> {
        fs::read_to_string(p)
            .unwrap()
            .lines()
            .map(|line| {
                let fields: Vec<&str> = line.split(',').collect();
                // Drop the wall_ms column (index 16).
                fields
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != 16)
                    .map(|(_, f)| *f)
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect()
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn simulate_infeasible_config_exits_1() {
    let dir = tmp_dir("sim-bad");
    let out = dir.join("x.csv");
    let output = run(bin()
        .args(["simulate", "--n", "30", "--lambda", "1000", "--reps", "1"])
        .arg("--out")
        .arg(&out));
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn simulate_extraction_preset_runs() {
    let dir = tmp_dir("preset");
    let out = dir.join("ex.csv");
    let output = run(bin()
        .args([
            "simulate",
            "--preset",
            "extraction",
            "--lambda",
            "20",
            "--methods",
            "ep-ex",
            "--reps",
            "2",
            "--zero-walltime",
        ])
        .arg("--out")
        .arg(&out));
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let text = fs::read_to_string(&out).unwrap();
    // Preset pins n1 = 60 against a 240-node background.
    let row = text.lines().nth(1).unwrap();
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields[1], "ep");
    assert_eq!(fields[2], "ex");
    assert_eq!(fields[4], "60");
    assert_eq!(fields[5], "240");
    assert_eq!(fields[6], "0.4");
    assert_eq!(fields[7], "0.1");
}

#[test]
fn generate_round_trips_and_is_seeded() {
    let dir = tmp_dir("gen");
    let prefix = dir.join("net");
    let mut cmd = bin();
    cmd.args([
        "generate", "--n", "80", "--r", "0.1", "--lambda", "6", "--seed", "9",
    ])
    .arg("--out")
    .arg(&prefix);
    assert!(run(&mut cmd).status.success());
    let edges = fs::read_to_string(dir.join("net.edges")).unwrap();
    let labels = fs::read_to_string(dir.join("net.labels")).unwrap();
    let theta = fs::read_to_string(dir.join("net.theta")).unwrap();
    assert_eq!(labels.lines().count(), 80);
    assert_eq!(theta.lines().count(), 80);
    assert!(edges.lines().count() > 0);

    // Same seed reproduces the files; the edge list parses back.
    let prefix2 = dir.join("net2");
    let mut cmd = bin();
    cmd.args([
        "generate", "--n", "80", "--r", "0.1", "--lambda", "6", "--seed", "9",
    ])
    .arg("--out")
    .arg(&prefix2);
    assert!(run(&mut cmd).status.success());
    assert_eq!(edges, fs::read_to_string(dir.join("net2.edges")).unwrap());

    let load = epcomm::graph::load_edge_list(edges.as_bytes()).unwrap();
    assert!(load.graph.n() <= 80);
    assert_eq!(load.self_loops, 0);
}

#[test]
fn generate_accepts_config_file_with_flag_overrides() {
    let dir = tmp_dir("gen-cfg");
    let cfg = dir.join("sim.cfg");
    write(
        &cfg,
        "n = 40\nn1 = 10\nw1 = 0.4 # tight block\nw2 = 0.1\nr = 0.1\nlambda = 5\n",
    );
    let prefix = dir.join("net");
    let mut cmd = bin();
    cmd.arg("generate")
        .arg("--config")
        .arg(&cfg)
        .args(["--lambda", "6", "--seed", "2"])
        .arg("--out")
        .arg(&prefix);
    let output = run(&mut cmd);
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    assert_eq!(
        fs::read_to_string(dir.join("net.labels"))
            .unwrap()
            .lines()
            .count(),
        40
    );
}

#[test]
fn embed_emits_two_csv_rows() {
    let dir = tmp_dir("embed");
    let (graph, _) = cliques_fixture(&dir);
    let out = dir.join("u.csv");
    let mut cmd = bin();
    cmd.arg("embed")
        .arg("--graph")
        .arg(&graph)
        .arg("--out")
        .arg(&out);
    assert!(run(&mut cmd).status.success());
    let text = fs::read_to_string(&out).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 2);
    for row in rows {
        assert_eq!(row.split(',').count(), 8);
    }
}

#[test]
fn lcc_filters_graph_and_labels() {
    let dir = tmp_dir("lcc");
    // Triangle on 0-2 plus an isolated edge 3-4 and labels for all 5 nodes.
    let graph = dir.join("g.edges");
    write(&graph, "0 1\n1 2\n2 0\n3 4\n");
    let labels = dir.join("g.labels");
    write(&labels, "1\n1\n2\n2\n2\n");
    let prefix = dir.join("big");
    let mut cmd = bin();
    cmd.arg("lcc")
        .arg("--graph")
        .arg(&graph)
        .arg("--labels")
        .arg(&labels)
        .arg("--out")
        .arg(&prefix);
    assert!(run(&mut cmd).status.success());
    let edges = fs::read_to_string(dir.join("big.edges")).unwrap();
    assert_eq!(edges.lines().count(), 3);
    let map = fs::read_to_string(dir.join("big.map")).unwrap();
    assert_eq!(map, "0\n1\n2\n");
    let filtered = fs::read_to_string(dir.join("big.labels")).unwrap();
    assert_eq!(filtered, "1\n1\n-1\n");
}
