//! End-to-end CLI tests: exit-code contract, report formats, JSON schema
//! conformance, and the induce -> verify round trip.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_postlie")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn write_fixture(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

const GOOD_ALGEBRA: &str = r#"{
  "name": "h3", "dim": 3, "params": [],
  "brackets": [{"i": 1, "j": 2, "value": [{"k": 3, "coeff": "1"}]}]
}"#;

const BAD_JACOBI_ALGEBRA: &str = r#"{
  "name": "not_a_lie_algebra", "dim": 3,
  "brackets": [
    {"i": 1, "j": 2, "value": [{"k": 3, "coeff": "1"}]},
    {"i": 1, "j": 3, "value": [{"k": 1, "coeff": "1"}]},
    {"i": 2, "j": 3, "value": [{"k": 2, "coeff": "1"}]}
  ]
}"#;

/// The rotation-action embedding, with g and h referenced by catalog name.
const GOOD_EMBEDDING: &str = r#"{
  "g": "r3p0",
  "h": "h3",
  "t": [["0","1","0"],["0","0","1"],["1","0","0"]],
  "D": [
    [["0","-1","0"],["1","0","0"],["0","0","0"]],
    [["0","0","0"],["0","0","0"],["0","-1/2","0"]],
    [["0","0","0"],["0","0","0"],["1/2","0","0"]]
  ]
}"#;

/// Same embedding with one shear entry doubled; no longer a morphism.
const PERTURBED_EMBEDDING: &str = r#"{
  "g": "r3p0",
  "h": "h3",
  "t": [["0","1","0"],["0","0","1"],["1","0","0"]],
  "D": [
    [["0","-1","0"],["1","0","0"],["0","0","0"]],
    [["0","0","0"],["0","0","0"],["0","-1/2","0"]],
    [["0","0","0"],["0","0","0"],["1","0","0"]]
  ]
}"#;

#[test]
fn exit_code_contract_on_fixture_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_fixture(dir.path(), "good.json", GOOD_ALGEBRA);
    let bad = write_fixture(dir.path(), "bad.json", BAD_JACOBI_ALGEBRA);
    let malformed = write_fixture(dir.path(), "broken.json", "{ not json");

    assert_eq!(code(&run(&["check-algebra", good.to_str().unwrap()])), 0);
    let bad_out = run(&["check-algebra", bad.to_str().unwrap()]);
    assert_eq!(code(&bad_out), 1);
    assert!(stdout(&bad_out).contains("jacobi: FAIL"));
    assert_eq!(
        code(&run(&["check-algebra", malformed.to_str().unwrap()])),
        2
    );
    assert_eq!(code(&run(&["check-algebra", "/no/such/file.json"])), 2);
    // unknown flags are usage errors
    assert_eq!(
        code(&run(&["check-algebra", "--bogus", good.to_str().unwrap()])),
        2
    );
}

#[test]
fn check_algebra_reports_series() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_fixture(dir.path(), "good.json", GOOD_ALGEBRA);
    let out = run(&["check-algebra", good.to_str().unwrap()]);
    let text = stdout(&out);
    assert!(text.contains("lower central series dims: [3, 1, 0]"));
    assert!(text.contains("nilpotent: yes (class 2)"));

    // parametric algebra: series need --param
    let param_alg = r#"{
      "name": "r3_lambda", "dim": 3, "params": ["lambda"],
      "brackets": [
        {"i": 1, "j": 2, "value": [{"k": 2, "coeff": "1"}]},
        {"i": 1, "j": 3, "value": [{"k": 3, "coeff": "lambda"}]}
      ]
    }"#;
    let p = write_fixture(dir.path(), "param.json", param_alg);
    let out = run(&["check-algebra", p.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("series: skipped"));
    let out = run(&[
        "check-algebra",
        p.to_str().unwrap(),
        "--param",
        "lambda=-1/2",
    ]);
    assert!(stdout(&out).contains("derived series dims: [3, 2, 0]"));
    assert!(stdout(&out).contains("solvable: true"));
}

#[test]
fn embedding_verification_and_defect() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_fixture(dir.path(), "emb.json", GOOD_EMBEDDING);
    let out = run(&["verify-embedding", good.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("morphism: pass"));
    assert!(stdout(&out).contains("t bijective: pass"));

    let perturbed = write_fixture(dir.path(), "emb_bad.json", PERTURBED_EMBEDDING);
    let out = run(&["verify-embedding", perturbed.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("morphism: FAIL"));
    assert!(
        stdout(&out).contains("(e1,e2)"),
        "first offending pair is reported"
    );
}

#[test]
fn induce_verify_round_trip_and_criteria() {
    let dir = tempfile::tempdir().unwrap();
    let emb = write_fixture(dir.path(), "emb.json", GOOD_EMBEDDING);
    let plas_path = dir.path().join("induced.json");

    let out = run(&[
        "induce",
        emb.to_str().unwrap(),
        "-o",
        plas_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("axioms: pass"));
    assert!(plas_path.exists());

    // re-read by verify-plas without re-deriving the embedding
    let out = run(&["verify-plas", plas_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    for line in [
        "condition 1 (product vs brackets): pass",
        "condition 2 (left morphism law): pass",
        "condition 3 (left derivations): pass",
    ] {
        assert!(stdout(&out).contains(line));
    }

    // completeness criteria on the induced structure
    let out = run(&[
        "complete",
        plas_path.to_str().unwrap(),
        "--criterion",
        "right-shifted",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("R - 1/2 ad nilpotent: true"));
    assert!(stdout(&out).contains("nilpotency locus of R - c*ad: {1/2}"));

    let out = run(&[
        "complete",
        plas_path.to_str().unwrap(),
        "--criterion",
        "right",
    ]);
    assert_eq!(code(&out), 1, "plain right-nilpotency fails here");
    assert!(stdout(&out).contains("R nilpotent: false"));

    let out = run(&[
        "complete",
        plas_path.to_str().unwrap(),
        "--criterion",
        "left",
    ]);
    assert_eq!(code(&out), 1);

    let out = run(&[
        "complete",
        plas_path.to_str().unwrap(),
        "--criterion",
        "unit-shift-det",
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("identically 1"));

    // characteristic polynomials
    let out = run(&["charpoly", plas_path.to_str().unwrap(), "--map", "left"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("lambda^3 + x3^2*lambda"));
    let out = run(&["charpoly", plas_path.to_str().unwrap(), "--map", "right"]);
    assert!(
        stdout(&out).contains("lambda^3 - 1/2*y1^2*lambda - 1/2*y2^2*lambda")
            || stdout(&out).contains("lambda^3 + (-1/2*y1^2 - 1/2*y2^2)*lambda")
    );
    let out = run(&["charpoly", plas_path.to_str().unwrap(), "--map", "shifted"]);
    assert!(stdout(&out).contains("lambda^3"));
}

#[test]
fn catalog_rows_and_exit_codes() {
    let out = run(&["catalog", "--row", "Ex5.2"]);
    assert_eq!(code(&out), 0, "expected-false row still verifies clean");
    let text = stdout(&out);
    assert!(text.contains("complete false (expected false)"));
    assert!(text.contains("caveat"));

    let out = run(&["catalog", "--row", "T1.r3"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("R nilpotent true (expected true)"));

    let out = run(&["catalog", "--row", "does-not-exist"]);
    assert_eq!(code(&out), 2);

    // out-of-domain override is flagged but is not a mismatch
    let out = run(&["catalog", "--row", "T2.r4_-1_lambda", "--param", "lambda=0"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("warning"));
    assert!(stdout(&out).contains("outside the recorded domain"));

    let out = run(&["catalog", "--param", "oops"]);
    assert_eq!(code(&out), 2, "malformed --param is a usage error");
}

#[test]
fn catalog_output_is_deterministic() {
    let a = run(&["catalog"]);
    let b = run(&["catalog"]);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("26 rows checked, 0 mismatches"));
    assert!(stdout(&a).contains("nilpotent-pair probe"));
}

#[test]
fn induce_fails_cleanly_on_a_non_morphism() {
    let dir = tempfile::tempdir().unwrap();
    let perturbed = write_fixture(dir.path(), "emb_bad.json", PERTURBED_EMBEDDING);
    let out = run(&["induce", perturbed.to_str().unwrap(), "-o", "/dev/null"]);
    assert_eq!(
        code(&out),
        1,
        "inducing from a non-morphism is a mathematical failure"
    );
}

#[test]
fn jordan_command() {
    let dir = tempfile::tempdir().unwrap();
    let m = write_fixture(dir.path(), "m.json", r#"[["1","1"],["0","1"]]"#);
    let out = run(&["jordan", m.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("element type: mixed"));
    assert!(text.contains("[1, 0]"));
    assert!(text.contains("[0, 1]"));

    // symbolic entries are an unsupported input
    let sym = write_fixture(dir.path(), "sym.json", r#"[["x1","0"],["0","0"]]"#);
    assert_eq!(code(&run(&["jordan", sym.to_str().unwrap()])), 2);
}

#[test]
fn json_reports_validate_against_bundled_schema() {
    let schema_text = std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json"),
    )
    .unwrap();
    let schema_value: serde_json::Value = serde_json::from_str(&schema_text).unwrap();
    let schema = jsonschema::JSONSchema::compile(&schema_value).unwrap();

    let dir = tempfile::tempdir().unwrap();
    let good_alg = write_fixture(dir.path(), "good.json", GOOD_ALGEBRA);
    let bad_alg = write_fixture(dir.path(), "bad.json", BAD_JACOBI_ALGEBRA);
    let emb = write_fixture(dir.path(), "emb.json", GOOD_EMBEDDING);
    let plas_path = dir.path().join("induced.json");
    assert_eq!(
        code(&run(&[
            "induce",
            emb.to_str().unwrap(),
            "-o",
            plas_path.to_str().unwrap()
        ])),
        0
    );
    let matrix = write_fixture(dir.path(), "m.json", r#"[["1","1"],["0","1"]]"#);

    let invocations: Vec<Vec<&str>> = vec![
        vec!["check-algebra", good_alg.to_str().unwrap()],
        vec!["check-algebra", bad_alg.to_str().unwrap()],
        vec!["verify-embedding", emb.to_str().unwrap()],
        vec!["induce", emb.to_str().unwrap(), "-o", "/dev/null"],
        vec!["verify-plas", plas_path.to_str().unwrap()],
        vec![
            "complete",
            plas_path.to_str().unwrap(),
            "--criterion",
            "right-shifted",
        ],
        vec![
            "complete",
            plas_path.to_str().unwrap(),
            "--criterion",
            "right",
        ],
        vec!["charpoly", plas_path.to_str().unwrap(), "--map", "left"],
        vec!["jordan", matrix.to_str().unwrap()],
        vec!["catalog", "--row", "T1.r3"],
        vec!["catalog", "--row", "Ex5.2"],
        vec!["catalog"],
    ];
    for args in invocations {
        let mut full = args.clone();
        full.push("--format");
        full.push("json");
        let out = run(&full);
        let text = stdout(&out);
        let value: serde_json::Value = serde_json::from_str(&text)
            .unwrap_or_else(|e| panic!("{args:?}: bad json: {e}\n{text}"));
        let result = schema.validate(&value);
        if let Err(errors) = result {
            let msgs: Vec<String> = errors.map(|e| e.to_string()).collect();
            panic!("{args:?}: schema violations: {msgs:?}");
        }
    }
}

#[test]
fn text_and_json_report_identical_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let emb = write_fixture(dir.path(), "emb.json", GOOD_EMBEDDING);
    let plas_path = dir.path().join("induced.json");
    run(&[
        "induce",
        emb.to_str().unwrap(),
        "-o",
        plas_path.to_str().unwrap(),
    ]);

    for criterion in ["right", "left", "right-shifted", "unit-shift-det"] {
        let text_out = run(&[
            "complete",
            plas_path.to_str().unwrap(),
            "--criterion",
            criterion,
        ]);
        let json_out = run(&[
            "complete",
            plas_path.to_str().unwrap(),
            "--criterion",
            criterion,
            "--format",
            "json",
        ]);
        assert_eq!(code(&text_out), code(&json_out), "criterion {criterion}");
        let value: serde_json::Value = serde_json::from_str(&stdout(&json_out)).unwrap();
        let json_verdict = value["value"].as_bool().unwrap();
        assert_eq!(json_verdict, code(&text_out) == 0, "criterion {criterion}");
    }
}

#[test]
fn report_can_be_written_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_fixture(dir.path(), "good.json", GOOD_ALGEBRA);
    let report = dir.path().join("report.json");
    let out = run(&[
        "check-algebra",
        good.to_str().unwrap(),
        "--format",
        "json",
        "-o",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(value["command"], "check-algebra");
}
