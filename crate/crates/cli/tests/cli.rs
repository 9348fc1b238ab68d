//! End-to-end tests of the `toda` binary: exit codes, document shapes,
//! determinism, and the round-trip of build output back into the loader.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_toda"))
}

fn write_input(name: &str, text: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn build_summarizes_family_and_exponents() {
    let p = write_input(
        "full_resonance.json",
        r#"{"n": 2, "gamma": [1, 0], "c": [{"i": 2, "j": 0, "re": 0.4, "im": -0.3}]}"#,
    );
    let out = run(&["build", "--input", p.to_str().unwrap(), "--format", "structured"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let summary = &doc["summary"];
    assert_eq!(summary["family_dimension"], 8);
    assert_eq!(summary["resonant_pairs"], serde_json::json!([[1, 0], [2, 0], [2, 1]]));
    assert_eq!(summary["alpha"], serde_json::json!(["2/3", "1/3"]));
    assert_eq!(summary["beta"], serde_json::json!(["-2/3", "4/3", "7/3"]));
    assert_eq!(summary["indicial_w"], serde_json::json!(["56/27", "-4/3"]));
    assert_eq!(doc["params"]["lambda"].as_array().unwrap().len(), 3);
    // every free coefficient doubled (real and imaginary) plus the lambdas
    let zeros = write_input("no_sources.json", r#"{"n": 2, "gamma": [0, 0]}"#);
    let out = run(&["build", "--input", zeros.to_str().unwrap(), "--format", "structured"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["summary"]["family_dimension"], 8);
}

#[test]
fn build_output_round_trips_byte_identically() {
    let p = write_input(
        "round_trip_src.json",
        r#"{"n": 2, "gamma": ["1/2", "1/2"], "lambda": [0.7, "auto", 1.1],
            "c": [{"i": 2, "j": 0, "re": -0.25, "im": 0.6}]}"#,
    );
    let echo = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("round_trip_echo.json");
    let first = run(&[
        "build",
        "--input",
        p.to_str().unwrap(),
        "--format",
        "structured",
        "--output",
        echo.to_str().unwrap(),
    ]);
    assert_eq!(code(&first), 0, "{}", stderr(&first));
    let second = run(&["build", "--input", echo.to_str().unwrap(), "--format", "structured"]);
    assert_eq!(code(&second), 0, "{}", stderr(&second));
    assert_eq!(stdout(&second), std::fs::read_to_string(&echo).unwrap());
}

#[test]
fn unknown_fields_are_rejected_with_their_name() {
    let p = write_input("typo.json", r#"{"n": 1, "gamma": [0], "lambduh": [1, "auto"]}"#);
    let out = run(&["verify", "--input", p.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let err = stderr(&out);
    assert!(err.contains("unknown field"), "{err}");
    assert!(err.contains("lambduh"), "{err}");

    // same policy inside a wrapped build document
    let p = write_input(
        "typo_wrapped.json",
        r#"{"params": {"n": 1, "gamma": [0], "lambduh": [1, "auto"]}, "summary": {}}"#,
    );
    let out = run(&["verify", "--input", p.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let err = stderr(&out);
    assert!(err.contains("lambduh"), "{err}");
    assert!(err.contains("params"), "location should name the enclosing block: {err}");
}

#[test]
fn gamma_at_or_below_minus_one_is_invalid_input() {
    let p = write_input("bad_gamma.json", r#"{"n": 1, "gamma": ["-3/2"]}"#);
    let out = run(&["build", "--input", p.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("gamma_i > -1"), "{}", stderr(&out));
}

#[test]
fn coefficient_outside_its_resonance_case_is_rejected() {
    let p = write_input(
        "inadmissible_c.json",
        r#"{"n": 2, "gamma": ["1/3", "1/2"], "c": [{"i": 2, "j": 0, "re": 0.1}]}"#,
    );
    let out = run(&["build", "--input", p.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let err = stderr(&out);
    assert!(err.contains("must vanish"), "{err}");
    assert!(err.contains("17/6"), "the offending exponent sum is named: {err}");
}

#[test]
fn lambda_product_off_the_constraint_is_rejected() {
    let p = write_input("bad_lambda.json", r#"{"n": 1, "gamma": [0], "lambda": [1, 1]}"#);
    let out = run(&["build", "--input", p.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let err = stderr(&out);
    assert!(err.contains("lambda product"), "{err}");
    assert!(err.contains("auto"), "the fix is suggested: {err}");
}

#[test]
fn verify_passes_on_a_resonant_solution_and_is_deterministic() {
    let p = write_input(
        "verify_me.json",
        r#"{"n": 2, "gamma": [1, 0],
            "c": [{"i": 1, "j": 0, "re": -0.2, "im": 0.1},
                  {"i": 2, "j": 0, "re": 0.4, "im": -0.3}]}"#,
    );
    let args = ["verify", "--input", p.to_str().unwrap(), "--format", "structured"];
    let out = run(&args);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["passed"], true);
    let again = run(&args);
    assert_eq!(stdout(&out), stdout(&again), "structured reports must be byte-identical");
    // and under a forced single-thread pool
    let single = bin().args(args).env("TODA_THREADS", "1").output().unwrap();
    assert_eq!(stdout(&out), stdout(&single), "thread count must not leak into output");
}

#[test]
fn verify_with_unreachable_tolerance_exits_one() {
    let p = write_input("verify_tight.json", r#"{"n": 1, "gamma": ["1/2"]}"#);
    let out = run(&[
        "verify",
        "--input",
        p.to_str().unwrap(),
        "--tol",
        "1e-30",
        "--grid",
        "0.05,20,4,8",
    ]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("FAIL"), "{text}");
    assert!(text.contains("system residual"), "{text}");
}

#[test]
fn quantize_reports_the_quantized_masses() {
    let p = write_input("quantize_zeros.json", r#"{"n": 2, "gamma": [0, 0]}"#);
    let out = run(&["quantize", "--input", p.to_str().unwrap(), "--format", "structured"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let items = doc["items"].as_array().unwrap();
    assert_eq!(items.len(), 4, "two masses and two weighted rows");
    for item in items {
        assert_eq!(item["passed"], true, "{item}");
    }
    // both integrals equal 8 pi here
    for item in &items[..2] {
        assert!(item["detail"].as_str().unwrap().contains("2.513274123e1"), "{item}");
    }
}

#[test]
fn quantize_budget_exhaustion_exits_three() {
    let p = write_input("quantize_tiny_budget.json", r#"{"n": 1, "gamma": ["1/2"]}"#);
    let out = run(&["quantize", "--input", p.to_str().unwrap(), "--budget", "50"]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("budget"), "{}", stderr(&out));
}

#[test]
fn nondegeneracy_rank_matches_the_family_dimension() {
    let p = write_input("nondeg_scalar.json", r#"{"n": 1, "gamma": [0]}"#);
    let out = run(&["nondegeneracy", "--input", p.to_str().unwrap(), "--format", "structured"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["passed"], true);
    let rank = doc["items"]
        .as_array()
        .unwrap()
        .iter()
        .find(|i| i["name"] == "family tangent rank")
        .unwrap();
    assert_eq!(rank["measured"], 3.0);
}

#[test]
fn sample_grid_has_the_documented_shape() {
    let p = write_input("sample_me.json", r#"{"n": 2, "gamma": [1, 0]}"#);
    let out = run(&["sample", "--input", p.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "re_z,im_z,u_1,u_2,eu_1,eu_2");
    assert_eq!(lines.len(), 1 + 8 * 16, "header plus the default 8 x 16 grid");
    for line in &lines[1..] {
        assert_eq!(line.split(',').count(), 6);
        for field in line.split(',') {
            let v: f64 = field.parse().unwrap();
            assert!(v.is_finite());
        }
    }
}

#[test]
fn sample_ray_is_monotone_on_the_real_axis() {
    let p = write_input("sample_ray.json", r#"{"n": 1, "gamma": ["1/2"]}"#);
    let out = run(&[
        "sample",
        "--input",
        p.to_str().unwrap(),
        "--mode",
        "ray",
        "--grid",
        "0.1,10,3,2",
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut last = 0.0;
    for line in text.lines().skip(1) {
        let mut fields = line.split(',');
        let r: f64 = fields.next().unwrap().parse().unwrap();
        let im: f64 = fields.next().unwrap().parse().unwrap();
        assert!(r > last, "radii must increase");
        assert_eq!(im, 0.0);
        last = r;
    }
    assert_eq!(text.lines().count(), 1 + 6);
}

#[test]
fn sample_oracle_diff_is_tiny_at_rank_two_and_invalid_elsewhere() {
    let p = write_input(
        "oracle_diff.json",
        r#"{"n": 2, "gamma": [1, 0],
            "c": [{"i": 1, "j": 0, "re": 0.3, "im": 0.2},
                  {"i": 2, "j": 1, "re": -0.4, "im": 0.1},
                  {"i": 2, "j": 0, "re": 0.15, "im": -0.35}]}"#,
    );
    let out = run(&[
        "sample",
        "--input",
        p.to_str().unwrap(),
        "--mode",
        "oracle-diff",
        "--grid",
        "0.3,5,3,4",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert_eq!(text.lines().next().unwrap(), "re_z,im_z,rel_diff_eu_1,rel_diff_eu_2");
    for line in text.lines().skip(1) {
        let fields: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
        assert!(fields[2] < 1e-9 && fields[3] < 1e-9, "{line}");
    }

    let scalar = write_input("oracle_diff_n1.json", r#"{"n": 1, "gamma": [0]}"#);
    let out = run(&["sample", "--input", scalar.to_str().unwrap(), "--mode", "oracle-diff"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("rank"), "{}", stderr(&out));
}

#[test]
fn output_flag_writes_the_same_bytes_as_stdout() {
    let p = write_input("to_file.json", r#"{"n": 1, "gamma": ["1/3"]}"#);
    let dest = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("report_copy.json");
    let direct = run(&[
        "quantize",
        "--input",
        p.to_str().unwrap(),
        "--format",
        "structured",
    ]);
    assert_eq!(code(&direct), 0);
    let filed = run(&[
        "quantize",
        "--input",
        p.to_str().unwrap(),
        "--format",
        "structured",
        "--output",
        dest.to_str().unwrap(),
    ]);
    assert_eq!(code(&filed), 0);
    assert!(stdout(&filed).is_empty());
    assert_eq!(std::fs::read_to_string(&dest).unwrap(), stdout(&direct));
}

#[test]
fn missing_input_file_is_invalid_input() {
    let out = run(&["build", "--input", "/nonexistent/params.json"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("cannot read"), "{}", stderr(&out));
}
