use std::process::Command;

use lrpc_sim::output::HEADER;

const BIN: &str = env!("CARGO_BIN_EXE_lrpc-sim");

const PAPER: [&str; 12] = ["--p", "2", "--r", "2", "--m", "20", "--lambda", "2", "--n", "20", "--k", "8"];

fn run(args: &[&str], threads: &str) -> std::process::Output {
    Command::new(BIN).args(args).env("LRPC_THREADS", threads).output().unwrap()
}

#[test]
fn missing_parameter_exits_with_two() {
    let out = run(&["--p", "2", "--t", "1:3"], "1");
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("missing"));
}

#[test]
fn invalid_configuration_exits_with_two() {
    let mut args = PAPER.to_vec();
    args.extend(["--t", "1:11"]);
    assert_eq!(run(&args, "1").status.code(), Some(2));
    assert_eq!(run(&["--unknown-flag"], "1").status.code(), Some(2));
}

#[test]
fn bounds_only_csv() {
    let mut args = PAPER.to_vec();
    args.extend(["--t", "1:7", "--check-bounds-only"]);
    let out = run(&args, "1");
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], HEADER.join(","));
    assert_eq!(lines.len(), 8);
    for line in &lines[1..] {
        let fields: Vec<&str> = line.split(',').collect();
        assert!(fields[1].is_empty() && fields[3].is_empty() && fields[9].is_empty());
        assert!(!fields[2].is_empty() && !fields[8].is_empty());
    }
}

#[test]
fn same_seed_gives_identical_csv_for_any_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = ["a.csv", "b.csv"].iter().map(|f| dir.path().join(f)).collect();
    for (path, threads) in paths.iter().zip(["1", "3"]) {
        let mut args = PAPER.to_vec();
        let p = path.to_str().unwrap();
        args.extend(["--t", "5:7", "--target-failures", "20", "--max-trials", "400", "--seed", "42", "--out", p]);
        assert!(run(&args, threads).status.success());
    }
    let a = std::fs::read(&paths[0]).unwrap();
    let b = std::fs::read(&paths[1]).unwrap();
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("sim.conf");
    std::fs::write(
        &config,
        "p = 2\nr = 2\nm = 20\nlambda = 2\nn = 20\nk = 8\nt = 6:7\ntarget_failures = 5\nseed = 3\n",
    )
    .unwrap();
    let code_path = dir.path().join("code.txt");
    let out = run(
        &["--config", config.to_str().unwrap(), "--t", "7", "--save-code", code_path.to_str().unwrap()],
        "1",
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().nth(1).unwrap().starts_with("7,"));
    let saved = std::fs::read_to_string(code_path).unwrap();
    assert!(lrpc_core::LrpcCode::from_text(&saved).is_ok());
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}
