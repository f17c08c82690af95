//! End-to-end checks of the `hopf` binary: payload handling, exit codes,
//! determinism of reports.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_hopf"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

#[test]
fn classify_reports_class() {
    let out = run(
        &["classify"],
        r#"{"map":{"conj":false,"P":[[1,0,0.25,0]],"Q":[[0,1,0.5,0]]}}"#,
    );
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["contraction"]["class"], "III");
    assert_eq!(v["contraction"]["r"], 2);
}

#[test]
fn schema_violation_exits_1_with_pointer() {
    let out = run(&["classify"], r#"{"map":{"conj":false,"P":"oops","Q":[]}}"#);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["error"]["kind"], "schema");
    assert!(v["error"]["path"].as_str().unwrap().contains("map"));
}

#[test]
fn existence_and_locus() {
    let out = run(
        &["existence"],
        r#"{"contraction":{"class":"III","delta":[-0.5,0],"r":2}}"#,
    );
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["existence"]["any_antiholomorphic"], true);
    assert_eq!(v["existence"]["odd_exists"], false);

    let out = run(
        &["locus"],
        r#"{"contraction":{"class":"IIc","alpha":[0.5,0],"delta":[-0.5,0]},"structure":{"parity":"even"}}"#,
    );
    let v = stdout_json(&out);
    assert_eq!(v["locus"], "KleinBottle");
}

#[test]
fn normalize_round_trip() {
    // phi = (i conj z, conj w) over IIc
    let out = run(
        &["normalize"],
        r#"{"contraction":{"class":"IIc","alpha":[0.3,0],"delta":[0.5,0]},
            "lift":{"conj":true,"P":[[1,0,0,1]],"Q":[[0,1,1,0]]}}"#,
    );
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = stdout_json(&out);
    assert_eq!(v["structure"]["parity"], "even");
    assert_eq!(v["structure"]["deck_power"], 0);
    assert!(v["residual"].as_f64().unwrap() < 1e-9);
}

#[test]
fn chart_verification_passes() {
    let out = run(
        &["chart", "--samples", "100", "--seed", "7"],
        r#"{"contraction":{"class":"IV","alpha":[-0.25,0]},"structure":{"parity":"odd"}}"#,
    );
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["model"], "mu0");
    assert_eq!(v["route"], "odd_route");
    assert_eq!(v["verification"]["pass"], true);
}

#[test]
fn chart_rejects_nonexistent_structure() {
    let out = run(
        &["chart"],
        r#"{"contraction":{"class":"III","delta":[-0.5,0],"r":2},"structure":{"parity":"odd"}}"#,
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn picard_queries() {
    let out = run(&["picard"], r#"{"query":"involution","zeta":[2,3]}"#);
    let v = stdout_json(&out);
    assert_eq!(v["zeta_bar"][1].as_f64().unwrap(), -3.0);

    let out = run(
        &["picard"],
        r#"{"query":"line_bundle","parity":"odd","zeta":[4,0]}"#,
    );
    let v = stdout_json(&out);
    assert_eq!(v["datum"]["status"]["circle_radius"].as_f64().unwrap(), 2.0);

    let out = run(
        &["picard"],
        r#"{"query":"verify","contraction":{"class":"IV","alpha":[0.5,0]},
            "structure":{"parity":"odd"},"zeta":4.0,"nu":[2,0]}"#,
    );
    let v = stdout_json(&out);
    assert_eq!(v["involutive"], true);
}

#[test]
fn aut_queries() {
    let out = run(
        &["aut"],
        r#"{"query":"group","contraction":{"class":"IV","alpha":[-0.5,0]},"structure":{"parity":"odd"}}"#,
    );
    let v = stdout_json(&out);
    assert_eq!(v["group"]["presentation"], "Spin^c(3)");

    let out = run(
        &["aut"],
        r#"{"query":"spinc","matrix":[[0,0],[-1,0],[1,0],[0,0]],"contraction":{"class":"IV","alpha":[-0.5,0]}}"#,
    );
    let v = stdout_json(&out);
    assert_eq!(v["circle_part"].as_f64().unwrap(), 1.0);
}

#[test]
fn file_based_io() {
    let dir = std::env::temp_dir().join(format!("hopf-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("payload.json");
    let output = dir.join("report.json");
    std::fs::write(
        &input,
        r#"{"contraction":{"class":"IV","alpha":[0.5,0]}}"#,
    )
    .unwrap();
    let out = run(
        &[
            "existence",
            "--in",
            input.to_str().unwrap(),
            "--json-out",
            output.to_str().unwrap(),
        ],
        "",
    );
    assert!(out.status.success());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&output).unwrap()).unwrap();
    assert_eq!(report["existence"]["even_exists"], true);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_flows_suite_all_pass() {
    let out = run(
        &[
            "verify",
            "--suite",
            "flows",
            "--seed",
            "7",
            "--samples",
            "200",
        ],
        "",
    );
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["pass"], true);
    for p in v["properties"].as_array().unwrap() {
        assert!(p["max_residual"].as_f64().unwrap() < 1e-10);
    }
}

#[test]
fn verify_deterministic_and_failure_exit() {
    let a = run(
        &[
            "verify",
            "--suite",
            "picard",
            "--seed",
            "3",
            "--samples",
            "20",
        ],
        "",
    );
    let b = run(
        &[
            "verify",
            "--suite",
            "picard",
            "--seed",
            "3",
            "--samples",
            "20",
        ],
        "",
    );
    assert!(a.status.success());
    assert_eq!(
        a.stdout, b.stdout,
        "identical (payload, seed) must give identical reports"
    );

    let out = run(&["verify", "--suite", "no_such_suite"], "");
    assert_eq!(out.status.code(), Some(1));
}
