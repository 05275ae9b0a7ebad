//! End-to-end harness flows that span several runs: mixed-method
//! directories and the summarize subcommand.

use std::path::PathBuf;

use hypabc_cli::{execute, GridSteps, Method, RunConfig};

fn plan(method: Method, out_dir: PathBuf) -> RunConfig {
    RunConfig {
        method,
        space: "svm".into(),
        objective: "mixed_sphere".into(),
        external_cmd: None,
        timeout_s: None,
        budget: 60,
        np: vec![10],
        trial_limit: None,
        target: None,
        seed: 1,
        repeats: 2,
        parallel_width: 1,
        grid_steps: match method {
            Method::Grid => Some(GridSteps::Uniform(5.0)),
            _ => None,
        },
        out_dir,
    }
}

#[test]
fn three_methods_aggregate_into_one_comparison_table() {
    let dir = tempfile::tempdir().unwrap();
    for method in [Method::Hypabc, Method::Random, Method::Grid] {
        execute(&plan(method, dir.path().to_path_buf())).unwrap();
    }

    let output = std::process::Command::new(env!("CARGO_BIN_EXE_hypabc"))
        .arg("summarize")
        .arg(dir.path())
        .args(["--group-by", "method"])
        .arg("--out")
        .arg(dir.path().join("combined.csv"))
        .output()
        .unwrap();
    assert!(
        output.status.success(),
        "summarize failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );

    let mut reader = csv::Reader::from_path(dir.path().join("combined.csv")).unwrap();
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 3, "one row per method");
    let methods: Vec<&str> = rows.iter().map(|r| &r[0]).collect();
    assert_eq!(methods, ["grid", "hypabc", "random"], "rows sorted by method");

    // Grouping by method only leaves the population column blank, and the
    // run counts reflect what each method actually executed.
    for row in &rows {
        assert_eq!(&row[1], "-");
        let runs: usize = row[2].parse().unwrap();
        let expected = if &row[0] == "grid" { 1 } else { 2 };
        assert_eq!(runs, expected);
        let best: f64 = row[3].parse().unwrap();
        assert!(best.is_finite() && best >= 0.0);
    }

    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("median_best"), "table header missing from stdout");
}
