//! End-to-end tests of the `cdesc` binary: oracle outputs on the bundled
//! fixtures, byte-determinism of reports, and the exit-status contract.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn cdesc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdesc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is utf-8")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is utf-8")
}

#[test]
fn euler_reports_the_reduced_chi_values() {
    let std_fixture = fixture("standard.fixture");
    let out = cdesc(&[
        "euler",
        "--pair",
        "p2-two-lines",
        std_fixture.to_str().unwrap(),
    ]);
    let text = stdout_of(&out);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    assert!(text.contains("chi_open = 1 - L"), "got:\n{text}");
    assert!(text.contains("chi_c_open = -L + L^2"), "got:\n{text}");
    assert!(text.ends_with("result: PASS\n"), "got:\n{text}");
}

#[test]
fn serre_reports_the_cone_classes() {
    let std_fixture = fixture("standard.fixture");
    let out = cdesc(&["serre", "--atom", "P1", std_fixture.to_str().unwrap()]);
    let text = stdout_of(&out);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    assert!(text.contains("chi_c = L^2"), "got:\n{text}");
    assert!(text.contains("chi = 1"), "got:\n{text}");
    assert!(text.contains("differ in K0: yes"), "got:\n{text}");

    let out = cdesc(&["serre", "--atom", "pt", std_fixture.to_str().unwrap()]);
    let text = stdout_of(&out);
    assert!(out.status.success());
    assert!(text.contains("chi_c = L  (raw"), "got:\n{text}");
    assert!(text.contains("chi = 1"), "got:\n{text}");

    // The elliptic-curve report carries u,v realization terms.
    let out = cdesc(&["serre", "--atom", "E", std_fixture.to_str().unwrap()]);
    let text = stdout_of(&out);
    assert!(out.status.success());
    assert!(
        text.contains("E(chi_c) = u^2*v^2 - u^2*v - u*v^2 + u + v"),
        "got:\n{text}"
    );
}

#[test]
fn class_reduces_spaces_under_relations() {
    let out = cdesc(&[
        "class",
        "--atom",
        "cone-conic",
        fixture("standard.fixture").to_str().unwrap(),
    ]);
    let text = stdout_of(&out);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    assert!(text.contains("kind: space"), "got:\n{text}");
    assert!(text.contains("reduced = L^2"), "got:\n{text}");

    let out = cdesc(&[
        "class",
        "--atom",
        "p4-cells",
        fixture("pn.fixture").to_str().unwrap(),
    ]);
    let text = stdout_of(&out);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    assert!(
        text.contains("reduced = 1 + L + L^2 + L^3 + L^4"),
        "got:\n{text}"
    );
}

#[test]
fn gysin_prints_the_complex_levels() {
    let out = cdesc(&[
        "gysin",
        "--pair",
        "p2-two-lines",
        fixture("standard.fixture").to_str().unwrap(),
    ]);
    let text = stdout_of(&out);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    assert!(text.contains("G_0 = [P2]"), "got:\n{text}");
    assert!(text.contains("G_1 = 2*[P1]*L"), "got:\n{text}");
    assert!(text.contains("G_2 = L^2"), "got:\n{text}");
    assert!(text.contains("gamma^2 = 0: ok"), "got:\n{text}");
    assert!(text.contains("euler(G) = chi_open: ok"), "got:\n{text}");
}

#[test]
fn verify_manin_single_square_passes() {
    let out = cdesc(&[
        "verify",
        "manin",
        "--square",
        "p2-blowup",
        fixture("standard.fixture").to_str().unwrap(),
    ]);
    let text = stdout_of(&out);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    assert!(text.contains("sequence:p2-blowup ok"), "got:\n{text}");
    assert!(text.ends_with("result: PASS\n"), "got:\n{text}");
}

#[test]
fn verify_axioms_reports_the_case_count() {
    let out = cdesc(&[
        "verify",
        "axioms",
        "--seed",
        "7",
        "--cases",
        "25",
        fixture("standard.fixture").to_str().unwrap(),
    ]);
    let text = stdout_of(&out);
    assert!(out.status.success(), "stderr: {}", stderr_of(&out));
    assert!(text.contains("suite axioms: 25 cases"), "got:\n{text}");
    assert!(text.contains("suite saturation: 25 cases"), "got:\n{text}");
    assert!(text.ends_with("result: PASS\n"), "got:\n{text}");
}

#[test]
fn structured_reports_are_byte_identical_across_runs() {
    let path = fixture("standard.fixture");
    let args = [
        "verify",
        "descent",
        "--format",
        "structured",
        path.to_str().unwrap(),
    ];
    let first = cdesc(&args);
    let second = cdesc(&args);
    assert!(first.status.success());
    assert_eq!(
        first.stdout, second.stdout,
        "structured output must be byte-stable"
    );

    let doc: serde_json::Value = serde_json::from_slice(&first.stdout).expect("valid JSON");
    let obj = doc.as_object().expect("top-level object");
    for key in ["command", "inputs", "results", "pass"] {
        assert!(obj.contains_key(key), "missing field {key}");
    }
    assert_eq!(obj["command"], "verify");
    assert_eq!(obj["pass"], true);

    let out = cdesc(&[
        "euler",
        "--pair",
        "p2-two-lines",
        "--format",
        "structured",
        path.to_str().unwrap(),
    ]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).expect("valid JSON");
    assert_eq!(doc["results"]["chi_open"], "1 - L");
    assert_eq!(doc["results"]["chi_c_open"], "-L + L^2");
}

#[test]
fn seeded_text_reports_are_byte_identical_across_runs() {
    let path = fixture("standard.fixture");
    let args = [
        "verify",
        "functoriality",
        "--cases",
        "60",
        path.to_str().unwrap(),
    ];
    let first = cdesc(&args);
    let second = cdesc(&args);
    assert!(first.status.success(), "stderr: {}", stderr_of(&first));
    assert_eq!(
        first.stdout, second.stdout,
        "text output must be byte-stable"
    );
}

#[test]
fn unknown_names_are_usage_errors() {
    let path = fixture("standard.fixture");
    let out = cdesc(&["euler", "--pair", "nope", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr_of(&out).contains("p2-two-lines"),
        "stderr lists the bundled pairs"
    );

    let out = cdesc(&[
        "verify",
        "descent",
        "--square",
        "p2-blowup",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));

    let out = cdesc(&[
        "verify",
        "manin",
        "--square",
        "nope",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr_of(&out).contains("p2-blowup"),
        "stderr lists the realized squares"
    );
}

#[test]
fn invalid_fixtures_are_load_errors() {
    let dir = tempfile::tempdir().unwrap();

    let empty = dir.path().join("empty.fixture");
    std::fs::write(&empty, "").unwrap();
    let out = cdesc(&["verify", "descent", empty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr_of(&out).starts_with("error:"),
        "got: {}",
        stderr_of(&out)
    );

    // A Hodge table whose top entry has no matching partner in degree zero.
    let bad = dir.path().join("bad-hodge.fixture");
    std::fs::write(
        &bad,
        r#"{"atoms": [{"name": "X", "dim": 1, "hodge": [[0,0,0,1],[2,1,1,2]]}]}"#,
    )
    .unwrap();
    let out = cdesc(&["class", "--atom", "X", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr_of(&out).contains("Poincare"),
        "got: {}",
        stderr_of(&out)
    );
}

#[test]
fn failed_verification_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("contradiction.fixture");
    // Two names for the same compactification, declared unequal: the
    // comparison succeeds and therefore the declared expectation fails.
    std::fs::write(
        &path,
        r#"{
            "atoms": [{"name": "P1", "dim": 1, "hodge": [[0,0,0,1],[2,1,1,1]]}],
            "relations": ["[P1] -> 1 + L"],
            "pairs": {
                "p1-pt": {"ambient": "P1", "components": ["infinity"],
                          "strata": {"1": "pt"}, "open_part": "A1"},
                "p1-zero": {"ambient": "P1", "components": ["zero"],
                            "strata": {"1": "pt"}, "open_part": "A1"}
            },
            "independence": {
                "wrong": {"pairs": ["p1-pt", "p1-zero"], "expect_equal": false}
            }
        }"#,
    )
    .unwrap();
    let out = cdesc(&["verify", "independence", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1), "stderr: {}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("compare:wrong FAIL"), "got:\n{text}");
    assert!(text.ends_with("result: FAIL\n"), "got:\n{text}");
}
