use std::process::{Command, Output};

use serde_json::Value;

fn qeuclid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qeuclid")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn normalize_examples() {
    let out = qeuclid(&["normalize", "--n", "3", "q*x(1)*x(-1) - x(-1)*x(1)"]);
    assert_eq!(out.status.code(), Some(0));
    let want = qeuclid(&["normalize", "--n", "3", "(q - 1)*x(-1)*x(1) + q*h*x(0)^2"]);
    assert_eq!(stdout(&out), stdout(&want));

    let out = qeuclid(&["normalize", "--n", "3", "--format", "json", "L*L^-1 - 1"]);
    let doc = json(&out);
    assert_eq!(doc["is_zero"], true);
    assert_eq!(doc["normal_form"], "0");
    assert_eq!(doc["schema"], 1);
}

#[test]
fn expression_errors_are_usage_errors() {
    let out = qeuclid(&["normalize", "--n", "4", "x(0)^-1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("out of range"));
    let out = qeuclid(&["normalize", "--n", "3", "x(1) +* 2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("position 6"));
    assert_eq!(qeuclid(&["normalize", "--n", "3", "x(1)^-1"]).status.code(), Some(2));
}

#[test]
fn bad_arguments_exit_2() {
    assert_eq!(qeuclid(&["verify", "--bogus"]).status.code(), Some(2));
    assert_eq!(qeuclid(&["verify", "--n", "2"]).status.code(), Some(2));
    assert_eq!(qeuclid(&["verify", "--mode", "sampled", "--point", "1"]).status.code(), Some(2));
    assert_eq!(qeuclid(&["emit", "--n", "3,4", "metric"]).status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_qeuclid"))
        .args(["emit", "metric"])
        .env("QEUCLID_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn emit_metric_n3() {
    let doc = json(&qeuclid(&["emit", "--n", "3", "metric"]));
    let values: Vec<_> = doc["data"]["lower"].as_array().unwrap().iter().map(|e| e["value"].as_str().unwrap().to_string()).collect();
    assert_eq!(values, ["s^-1", "1", "s"]);
}

#[test]
fn emit_barred_dirac() {
    let doc = json(&qeuclid(&["emit", "--n", "3", "dirac", "--calculus", "barred"]));
    let calculi = doc["data"]["calculi"].as_object().unwrap();
    assert_eq!(calculi.keys().collect::<Vec<_>>(), ["barred"]);
    assert_eq!(calculi["barred"].as_array().unwrap().len(), 3);
}

#[test]
fn emit_is_byte_stable() {
    for what in ["rmatrix", "projectors", "lambdas", "frame"] {
        let a = qeuclid(&["emit", "--n", "4", what]);
        let b = qeuclid(&["emit", "--n", "4", what]);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{what}");
    }
}

#[test]
fn verify_n3_all_passes() {
    let out = qeuclid(&["verify", "--n", "3", "--all"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let doc = json(&out);
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["all_pass"], true);
    let checks = doc["runs"][0]["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["timing_ms"].is_null()));
    for prefix in ["rmatrix.", "space.", "calc.", "thm1.", "thm2.", "thm3.", "thm4.", "thm5.", "frame.", "geom."] {
        assert!(checks.iter().any(|c| c["check_id"].as_str().unwrap().starts_with(prefix)), "{prefix}");
    }
}

#[test]
fn verify_is_deterministic() {
    let a = qeuclid(&["verify", "--n", "4", "--family", "space", "--seed", "9"]);
    let b = qeuclid(&["verify", "--n", "4", "--family", "space", "--seed", "9"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn even_theorem5_is_reported_impossible() {
    let out = qeuclid(&["verify", "--n", "4", "--theorem", "5"]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json(&out);
    let checks = doc["runs"][0]["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 1);
    assert_eq!(checks[0]["status"], "fail");
    assert!(checks[0]["residual"].as_str().unwrap().contains("not possible"));
}

#[test]
fn h_convention_fails_with_witnesses() {
    let out = qeuclid(&["verify", "--n", "5", "--k-convention", "h", "--family", "rmatrix", "--theorem", "2"]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json(&out);
    let failed: Vec<_> = doc["runs"][0]["checks"].as_array().unwrap().iter().filter(|c| c["status"] == "fail").collect();
    assert!(failed.iter().any(|c| c["check_id"].as_str().unwrap().contains("gtt")));
    assert!(failed.iter().all(|c| c["residual"].is_string()));
}

#[test]
fn sampled_mode_runs_each_point() {
    let out = qeuclid(&["verify", "--n", "3", "--mode", "sampled", "--point", "7/5", "--point", "-2/3", "--family", "frame", "--timings"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let runs = doc["runs"].as_array().unwrap();
    assert_eq!(runs.iter().map(|r| r["point"].as_str().unwrap()).collect::<Vec<_>>(), ["7/5", "-2/3"]);
    assert!(runs[0]["checks"].as_array().unwrap().iter().all(|c| c["timing_ms"].is_u64()));
}

#[test]
fn markdown_and_out_file() {
    let dir = std::env::temp_dir().join(format!("qeuclid-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.md");
    let out = qeuclid(&["verify", "--n", "3", "--family", "rmatrix", "--format", "md", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let md = std::fs::read_to_string(&path).unwrap();
    assert!(md.contains("| rmatrix.braid.N3 | pass |"), "{md}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn parse_check_round_trips_random_elements() {
    for n in ["3", "4", "5"] {
        let out = qeuclid(&["parse-check", "--n", n, "--random", "200", "--format", "json"]);
        assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
        assert_eq!(json(&out)["round_trip"], true);
    }
}

#[test]
fn threads_env_is_honoured() {
    let out = Command::new(env!("CARGO_BIN_EXE_qeuclid"))
        .args(["verify", "--n", "3", "--family", "frame"])
        .env("QEUCLID_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}
