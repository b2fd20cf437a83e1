use std::fs;
use std::process::{Command, Output};

fn fraccolor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fraccolor")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn run_writes_csv_row() {
    let out = fraccolor(&["run", "--gen", "regular:n=40,delta=3", "--algorithm", "q-delta", "--q", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("generator,n,delta,algorithm,q,epsilon,seed,p,q_achieved,ratio,rounds,valid"));
    let row = lines.next().unwrap();
    assert!(row.ends_with(",true"), "{row}");
    assert!(row.contains(",q-delta,3,"));
}

#[test]
fn gen_run_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = fraccolor(&["gen", "regular:n=30,delta=3", "--seed", "4", "--out", d]);
    assert_eq!(out.status.code(), Some(0));
    let graph = dir.path().join("graph.txt");
    let g = graph.to_str().unwrap();

    let out = fraccolor(&["run", "--graph", g, "--algorithm", "small-support", "--q", "2", "--out", d]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let coloring = dir.path().join("coloring.json");
    assert!(dir.path().join("results.csv").exists());

    let out = fraccolor(&["verify", "--graph", g, "--coloring", coloring.to_str().unwrap(), "--out", d]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["valid"], true);
    assert_eq!(report["complete"], true);
}

#[test]
fn verify_rejects_bad_coloring() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    // Both ends of the first edge of a triangle get color 1.
    fs::write(&path, r#"{"p": 3, "q": 1, "colors": {"0": [1], "1": [1], "2": [2]}}"#).unwrap();
    let out = fraccolor(&["verify", "--gen", "complete:n=3", "--coloring", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("\"valid\": false"));
}

#[test]
fn suite_runs_every_combination() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("suite.toml");
    fs::write(
        &cfg,
        "[[cell]]\ngenerator = \"regular:n=30,delta=3\"\nalgorithm = \"q-delta\"\nq = [2, 3]\nseeds = 2\n\n\
         [[cell]]\ngenerator = \"torus:sides=60\"\nalgorithm = \"grid\"\nq = [2]\n",
    )
    .unwrap();
    let out = fraccolor(&["suite", cfg.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r["valid"] == true));
    assert_eq!(rows[4]["algorithm"], "grid");
}

#[test]
fn round_cap_marks_rows_invalid() {
    let out = fraccolor(&["run", "--gen", "regular:n=40,delta=3", "--algorithm", "q-delta", "--round-cap", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).lines().nth(1).unwrap().ends_with(",false"));
}

#[test]
fn bad_input_exits_with_two() {
    let out = fraccolor(&["run", "--gen", "moebius:n=5", "--algorithm", "q-delta"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown generator"));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "[[cell]]\ngenerator = \"cycle:n=9\"\nalgorithm = \"grid\"\nspeed = 3\n").unwrap();
    assert_eq!(fraccolor(&["suite", cfg.to_str().unwrap()]).status.code(), Some(2));

    let out = fraccolor(&["run", "--gen", "cycle:n=9", "--algorithm", "grid", "--graph", "x.txt"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_certifies_petersen() {
    let out = fraccolor(&["oracle", "--gen", "petersen", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let cert: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(cert["chi_f"], "5/2");
    assert_eq!(cert["independence_number"], 4);
}

#[test]
fn suite_output_is_reproducible() {
    let cfg = concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/grid.toml");
    let a = fraccolor(&["suite", cfg, "--seed", "3"]);
    let b = fraccolor(&["suite", cfg, "--seed", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn config_errors_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "[[cell]]\ngenerator = \"cycle:n=9\"\nalgorithm = \"grid\"\nq = \"two\"\n").unwrap();
    let out = fraccolor(&["suite", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 4") && err.contains('q'), "{err}");
}
