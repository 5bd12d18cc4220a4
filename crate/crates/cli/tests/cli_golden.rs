//! End-to-end tests of the compiled binary: exit codes, report format,
//! determinism of the hashed section, and re-ingestion.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_zasscheck"))
}

fn reference_config() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("theorem_a.json")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("zasscheck-test-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

#[test]
fn verify_reference_candidate_exits_zero() {
    let out = bin()
        .args(["verify", "--config"])
        .arg(reference_config())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let doc = stdout_json(&out);
    let cert = &doc["hashed"]["certificate"];
    assert_eq!(cert["verdict"]["is_counterexample"], true);
    assert_eq!(cert["side_p"]["inequality_rows"], serde_json::json!([0, 0, 7]));
    assert_eq!(cert["side_q"]["inequality_rows"], serde_json::json!([2, 14, 3]));
    assert_eq!(cert["params"]["group_order"], "101888640");
    assert_eq!(doc["hashed"]["assemblies"][0]["summands"].as_array().unwrap().len(), 3);
    assert_eq!(doc["hashed"]["assemblies"][1]["summands"].as_array().unwrap().len(), 5);
    // Human-readable confirmation goes to stderr, not stdout.
    assert!(String::from_utf8_lossy(&out.stderr).contains("counterexample verified"));
}

#[test]
fn hashed_section_is_byte_identical_across_runs() {
    let run = || {
        let out = bin()
            .args(["verify", "--config"])
            .arg(reference_config())
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        let doc = stdout_json(&out);
        (
            serde_json::to_vec(&doc["hashed"]).unwrap(),
            doc["section_sha256"].as_str().unwrap().to_string(),
        )
    };
    let (hashed_a, sha_a) = run();
    let (hashed_b, sha_b) = run();
    assert_eq!(hashed_a, hashed_b);
    assert_eq!(sha_a, sha_b);
}

#[test]
fn refuted_candidate_exits_one_with_reasons() {
    let config = scratch("refuted.json");
    fs::write(
        &config,
        r#"{"p":7,"q":19,"d":3,"poly_p":[1,3],"poly_q":[1,2],"epsilon":[-1,2,0]}"#,
    )
    .unwrap();
    let out = bin().args(["verify", "--config"]).arg(&config).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let doc = stdout_json(&out);
    assert_eq!(doc["hashed"]["certificate"]["verdict"]["is_counterexample"], false);
    assert!(doc["hashed"]["assemblies"].is_null());
    let failures = doc["hashed"]["certificate"]["verdict"]["failures"].as_array().unwrap();
    assert!(!failures.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("refuted"));
}

#[test]
fn trivial_support_is_refuted_with_the_exact_message() {
    let config = scratch("trivial.json");
    fs::write(
        &config,
        r#"{"p":7,"q":19,"d":3,"poly_p":[1,3],"poly_q":[1,2],"epsilon":[1,0,0]}"#,
    )
    .unwrap();
    let out = bin().args(["verify", "--config"]).arg(&config).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr)
        .contains("support size 1: unit exists but is trivially rationally conjugate"));
}

#[test]
fn bad_inputs_exit_two() {
    // Missing file.
    let out = bin().args(["verify", "--config", "/nonexistent.json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    // Invalid group parameters (d does not divide p - 1).
    let config = scratch("bad_params.json");
    fs::write(
        &config,
        r#"{"p":17,"q":19,"d":3,"poly_p":[1,3],"poly_q":[1,2],"epsilon":[2,-1,0]}"#,
    )
    .unwrap();
    let out = bin().args(["verify", "--config"]).arg(&config).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    // Augmentations not summing to 1.
    let config = scratch("bad_eps.json");
    fs::write(
        &config,
        r#"{"p":7,"q":19,"d":3,"poly_p":[1,3],"poly_q":[1,2],"epsilon":[1,1,0]}"#,
    )
    .unwrap();
    let out = bin().args(["verify", "--config"]).arg(&config).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    // Unknown field in the config.
    let config = scratch("unknown_field.json");
    fs::write(
        &config,
        r#"{"p":7,"q":19,"d":3,"poly_p":[1,3],"poly_q":[1,2],"epsilon":[2,-1,0],"extra":1}"#,
    )
    .unwrap();
    let out = bin().args(["verify", "--config"]).arg(&config).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn recheck_reproduces_a_saved_report() {
    let report_path = scratch("report.json");
    let out = bin()
        .args(["verify", "--config"])
        .arg(reference_config())
        .output()
        .unwrap();
    fs::write(&report_path, &out.stdout).unwrap();

    let out = bin().arg("recheck").arg(&report_path).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let doc = stdout_json(&out);
    assert_eq!(doc["reproduced"], true);
    assert_eq!(doc["is_counterexample"], true);

    // A tampered report is rejected.
    let mut tampered: serde_json::Value =
        serde_json::from_slice(&fs::read(&report_path).unwrap()).unwrap();
    tampered["hashed"]["certificate"]["epsilon_sum"] = serde_json::json!(2);
    let tampered_path = scratch("tampered.json");
    fs::write(&tampered_path, serde_json::to_vec(&tampered).unwrap()).unwrap();
    let out = bin().arg("recheck").arg(&tampered_path).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn rtable_golden_output() {
    let out = bin().args(["rtable", "--prime", "7", "--d", "3"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["stored"], serde_json::json!([1, 2, 4]));
    assert_eq!(doc["display"], serde_json::json!([2, 4, 1]));
    assert_eq!(doc["gauss"]["identity_holds"], true);
    assert_eq!(doc["delta_bound_holds"], true);

    let out = bin().args(["rtable", "--prime", "167", "--d", "3"]).output().unwrap();
    let doc = stdout_json(&out);
    assert_eq!(doc["stored"], serde_json::json!([55, 56, 56]));
    assert_eq!(doc["gauss"]["identity_holds"], false);
    assert_eq!(doc["gauss"]["nine_omega_sq"], 9);

    // d not dividing p^2 - 1 is a usage error.
    let out = bin().args(["rtable", "--prime", "7", "--d", "9"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mu_golden_output() {
    for (side, expected) in [
        ("p", serde_json::json!([1, 0, 1, 0, 0, 7])),
        ("q", serde_json::json!([1, 0, 1, 2, 14, 3])),
    ] {
        let out = bin()
            .args(["mu", "--side", side, "--config"])
            .arg(reference_config())
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        let doc = stdout_json(&out);
        let entries: Vec<i64> = [doc["trivial"].clone(), doc["kernel_n"].clone(), doc["contains_u"].clone()]
            .iter()
            .map(|v| v.as_i64().unwrap())
            .chain(doc["coset"].as_array().unwrap().iter().map(|v| v.as_i64().unwrap()))
            .collect();
        assert_eq!(serde_json::json!(entries), expected);
    }
}

#[test]
fn search_writes_flushed_pair_lines() {
    let lines_path = scratch("pairs.txt");
    let out = bin()
        .args(["search", "--d", "3", "--m", "1", "--p-max", "200", "--out"])
        .arg(&lines_path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&lines_path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "163 167 3 1 0");
    // 9 primes above the threshold: 36 unordered pairs.
    assert_eq!(lines.len(), 36);
    assert!(lines.iter().any(|l| l.ends_with(" 1")), "some pair is guaranteed");
    // Stdout carries the full JSON outcome.
    let doc = stdout_json(&out);
    assert_eq!(doc["pairs"].as_array().unwrap().len(), 36);
    assert_eq!(doc["pairs"][0]["p"], 163);
    assert_eq!(doc["pairs"][0]["q"], 167);
}

#[test]
fn selftest_passes() {
    let out = bin().arg("selftest").output().unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("all self-checks passed"));
}
