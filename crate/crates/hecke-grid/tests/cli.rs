//! End-to-end tests of the command-line binary.
//!
//! The CLI is a thin adapter, so its outputs are compared against direct
//! library calls, and the exit-code contract is pinned: 0 on success /
//! all-pass, 1 on verification failure, 2 on usage or data error.

use std::process::{Command, Output};

use hecke_grid::basis::Context;
use hecke_grid::groups::Group;
use hecke_grid::series::fmt_rat;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hecke-grid"))
        .args(args)
        .output()
        .expect("binary should run")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is utf-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is utf-8")
}

fn group(label: &str) -> Group {
    label.parse().expect("group label parses")
}

#[test]
fn basis_output_matches_direct_library_call() {
    let out = run(&["basis", "--group", "11", "--m", "3", "--prec", "10"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let ctx = Context::new();
    let g11 = group("11");
    let row = ctx
        .f_table(&g11, 3, 10)
        .unwrap()
        .row(3)
        .unwrap()
        .truncated(10);
    assert_eq!(stdout(&out), format!("f_3 on 11\n{row}\n"));
}

#[test]
fn grid_csv_matches_direct_library_call() {
    let out = run(&[
        "grid", "--group", "11", "--mmax", "5", "--nmax", "5", "--emit", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    // Header plus five rows; columns n = -1 .. 5 (seven of them) after the
    // row label.
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[0], "m\\n,-1,0,1,2,3,4,5");
    assert_eq!(lines[1], "1,0,0,0,0,0,0,0", "gap row reads as the zero row");
    let ctx = Context::new();
    let g11 = group("11");
    let table = ctx.f_table(&g11, 5, 6).unwrap();
    for (i, m) in (2..=5).enumerate() {
        let mut expected = vec![m.to_string()];
        for n in -1..=5 {
            expected.push(fmt_rat(&table.row(m).unwrap().coeff(n).unwrap()));
        }
        assert_eq!(lines[2 + i], expected.join(","), "row m = {m}");
    }
}

#[test]
fn faber_row_equals_hecke_composition() {
    // The CLI exposes the same Hecke system the library proves: J_1|T(4) is
    // J_4, whether the operator is written T(4) or T(2^2).
    let j4 = run(&["faber", "--group", "1", "--n", "4", "--prec", "4"]);
    let t4 = run(&[
        "hecke", "--group", "1", "--element", "J:1", "--op", "T(4)", "--prec", "4",
    ]);
    let t22 = run(&[
        "hecke", "--group", "1", "--element", "J:1", "--op", "T(2^2)", "--prec", "4",
    ]);
    for out in [&j4, &t4, &t22] {
        assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(out));
    }
    let series_line = |out: &Output| stdout(out).lines().nth(1).unwrap().to_string();
    assert_eq!(series_line(&j4), series_line(&t4));
    assert_eq!(series_line(&t4), series_line(&t22));
}

#[test]
fn replicate_mock_exits_two_with_residuals() {
    let out = run(&["replicate", "--group", "22+2", "--element", "f:2", "--m", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    assert!(text.contains("MOCK"), "verdict missing: {text}");
    assert!(text.contains("d_1 = -2"), "residual missing: {text}");
}

#[test]
fn congruence_example_passes_with_exit_zero() {
    let out = run(&[
        "congruence", "--variant", "tcong", "--group", "11", "--m", "8", "--p", "19",
        "--r", "1", "--nmax", "20",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    assert!(
        stdout(&out).starts_with("tcong on 11: PASS"),
        "got: {}",
        stdout(&out)
    );
}

#[test]
fn congruence_probe_fails_with_exit_one() {
    let out = run(&[
        "congruence", "--variant", "tcong", "--group", "11", "--m", "2", "--p", "3",
        "--r", "2", "--nmax", "40", "--probe",
    ]);
    assert_eq!(out.status.code(), Some(1), "stderr: {}", stderr(&out));
    assert!(
        stdout(&out).starts_with("tcong on 11: FAIL"),
        "got: {}",
        stdout(&out)
    );
}

#[test]
fn congruence_hypothesis_violation_exits_two() {
    // ladder requires p coprime to the level.
    let out = run(&[
        "congruence", "--variant", "ladder", "--group", "11", "--m", "2", "--p", "11",
        "--r", "1", "--nmax", "10",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("ladder"), "stderr: {}", stderr(&out));
}

#[test]
fn verify_duality_emits_json_certificate() {
    let out = run(&[
        "verify", "--identity", "duality", "--group", "11", "--mmax", "6", "--nmax", "6",
        "--emit", "json",
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).expect("valid json");
    assert_eq!(v["schema"], "hecke-grid/v1");
    let checks = v["checks"].as_array().expect("checks array");
    assert_eq!(checks.len(), 1);
    assert_eq!(checks[0]["name"], "duality");
    assert_eq!(checks[0]["group"], "11");
    assert_eq!(checks[0]["pass"], true);
    assert!(
        checks[0]["detail"].as_str().unwrap().contains("n ="),
        "window missing from detail: {}",
        checks[0]["detail"]
    );
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = [
        "grid", "--group", "11", "--mmax", "4", "--nmax", "4", "--emit", "json",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn usage_and_data_errors_exit_two() {
    // Unsupported group.
    let out = run(&["basis", "--group", "13", "--m", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("not in the catalog"));

    // Faber rows need genus 0.
    let out = run(&["faber", "--group", "11", "--n", "1"]);
    assert_eq!(out.status.code(), Some(2));

    // Bad flag value.
    let out = run(&["basis", "--group", "11", "--m", "3", "--emit", "bogus"]);
    assert_eq!(out.status.code(), Some(2));

    // Unknown subcommand.
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));

    // Insufficient shipped precision: the message names the required window.
    let out = run(&["basis", "--group", "11", "--m", "2", "--prec", "2000"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains("needs input known to exponent 2000"),
        "stderr: {}",
        stderr(&out)
    );
}

#[test]
fn help_and_version_exit_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("congruence"));
    let out = run(&["--version"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn catalog_validate_passes() {
    let out = run(&["catalog", "--group", "11", "--validate"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("golden-prefix on 11: PASS"), "got: {text}");
    assert!(!text.contains("FAIL"), "got: {text}");
}
