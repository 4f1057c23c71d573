use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shifted-subset"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn kraw_single_value_plain() {
    let out = run(&[
        "kraw", "--n", "4", "--r", "2", "--x", "2", "--format", "plain",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "-2\n");
}

#[test]
fn sphere_weight_law_csv() {
    let out = run(&[
        "dist", "--n", "4", "--r", "1", "--sphere", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("weight,numerator,denominator,decimal"));
    assert!(text.lines().any(|l| l == "2,0,1,0"));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = [
        "recover",
        "--problem",
        "junta",
        "--n",
        "6",
        "--true-index",
        "1",
        "--trials",
        "4",
        "--seed",
        "17",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let sample = [
        "sample", "--n", "6", "--r", "2", "--sphere", "--count", "50", "--seed", "9",
    ];
    assert_eq!(run(&sample).stdout, run(&sample).stdout);
    let other = run(&[
        "sample", "--n", "6", "--r", "2", "--sphere", "--count", "50", "--seed", "10",
    ]);
    assert_ne!(run(&sample).stdout, other.stdout);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["kraw", "--bogus"]).status.code(), Some(2));
    assert_eq!(
        run(&["kraw", "--n", "4", "--r", "5", "--x", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["bounds"]).status.code(), Some(2));
}

#[test]
fn capacity_errors_exit_3() {
    let out = run(&["recover", "--problem", "ball", "--n", "60", "--r", "3"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&[
        "dist",
        "--n",
        "30",
        "--points",
        "000000000000000000000000000000",
        "--cube",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn inconclusive_runs_exit_4() {
    let out = run(&[
        "recover",
        "--problem",
        "gen-parity",
        "--n",
        "4",
        "--gen-t",
        "00",
        "--suffix-table",
        "0111",
        "--trials",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(4));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(json["records"][0]["recovered"].is_null());
}

#[test]
fn replay_reproduces_output() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    let args = [
        "recover",
        "--problem",
        "sphere",
        "--n",
        "10",
        "--r",
        "2",
        "--trials",
        "3",
        "--seed",
        "3",
    ];
    let direct = run(&args);
    assert!(direct.status.success());

    let mut dump = args.to_vec();
    dump.extend(["--dump-config", "--output", config.to_str().unwrap()]);
    assert!(run(&dump).status.success());

    let replayed = run(&["replay", config.to_str().unwrap()]);
    assert!(replayed.status.success());
    assert_eq!(direct.stdout, replayed.stdout);
}

#[test]
fn nested_replay_is_refused() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("loop.json");
    std::fs::write(
        &config,
        format!(r#"{{"command": {{"command": "replay", "config": {:?}}}, "seed": 0, "format": "json"}}"#, config),
    )
    .unwrap();
    assert_eq!(
        run(&["replay", config.to_str().unwrap()]).status.code(),
        Some(2)
    );
}

#[test]
fn copies_bound_plain() {
    let out = run(&[
        "bounds", "--copies", "--family", "5", "--trace", "1/2", "--format", "plain",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "84\n");
}

#[test]
fn quantum_oracle_demo_uses_three_queries() {
    let out = run(&[
        "oracle-demo",
        "--n",
        "5",
        "--mode",
        "quantum",
        "--runs",
        "4",
    ]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["median_queries"], 3.0);
    assert_eq!(json["per_run"].as_array().unwrap().len(), 4);
}

#[test]
fn verify_passes_small_range() {
    let out = run(&["verify", "--max-n", "8", "--format", "csv"]);
    assert!(out.status.success());
    assert!(!stdout(&out).contains("FAIL"));
}
