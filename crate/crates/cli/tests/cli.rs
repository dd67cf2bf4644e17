use std::process::{Command, Output};

use serde_json::Value;

use pglcount_cli::report::{Criterion, RunReport};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pglcount"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn validator() -> jsonschema::Validator {
    let schema: Value = serde_json::from_str(include_str!("../schema/run_report.schema.json"))
        .expect("schema parses");
    jsonschema::validator_for(&schema).expect("schema compiles")
}

fn report(args: &[&str]) -> (Value, Option<i32>) {
    let o = run(args);
    let v: Value = serde_json::from_str(&stdout(&o)).expect("json on stdout");
    let errors: Vec<String> = validator().iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{args:?}: {errors:?}");
    (v, o.status.code())
}

#[test]
fn count_prints_the_closed_form() {
    let o = run(&["count", "1", "0", "1", "4"]);
    assert_eq!(stdout(&o).trim(), "24");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&run(&["count", "2", "3", "3", "4"])).trim(), "24");
    assert_eq!(stdout(&run(&["count", "0", "0", "0", "3"])).trim(), "6");
}

#[test]
fn invalid_parameters_exit_with_an_error() {
    let o = run(&["count", "1", "1", "1", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("invalid parameters"));
}

#[test]
fn reports_validate_against_the_schema() {
    let cases: &[&[&str]] = &[
        &["count", "1", "0", "1", "4", "--json"],
        &["solve-structured", "1", "0", "--json"],
        &[
            "solve-numeric",
            "0",
            "0",
            "0",
            "3",
            "--seed",
            "3",
            "--repeats",
            "2",
            "--paths-report",
            "--json",
        ],
        &["bott-verify", "--amax", "3", "--bmax", "3", "--json"],
        &[
            "wronskian",
            "--sample",
            "1",
            "4",
            "--samples",
            "10",
            "--json",
        ],
        &["dual", "1", "0", "1", "4", "--json"],
    ];
    for args in cases {
        let (v, code) = report(args);
        assert_eq!(code, Some(0), "{args:?}");
        assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    }
}

#[test]
fn selftest_shaped_report_validates() {
    let mut r = RunReport::new("selftest", serde_json::json!({ "repeats": 5 }), Some(42));
    r.criterion(Criterion {
        id: "1".into(),
        name: "x".into(),
        passed: true,
        detail: "".into(),
        seconds: 0.1,
    });
    let v = serde_json::to_value(&r).unwrap();
    assert!(validator().is_valid(&v));
}

#[test]
fn structured_and_closed_form_agree() {
    let (v, code) = report(&["solve-structured", "1", "1", "--seed", "4", "--json"]);
    assert_eq!(code, Some(0));
    assert_eq!(v["counts"]["structured"], 96);
    assert_eq!(v["counts"]["closed_form"], 96);
    assert_eq!(v["agreement"]["verified"], true);
    assert_eq!(v["details"]["solutions"].as_array().unwrap().len(), 96);
}

#[test]
fn numeric_matches_structured_with_given_roots() {
    let (v, code) = report(&[
        "solve-numeric",
        "1",
        "0",
        "1",
        "4",
        "--structured",
        "--roots-a=-1,0,1",
        "--roots-b=-3,-1/3,1/3,3",
        "--json",
    ]);
    assert_eq!(code, Some(0));
    assert_eq!(v["counts"]["numeric"], 24);
    assert_eq!(v["counts"]["structured"], 24);
    assert_eq!(v["agreement"]["matched"], true);
    let entries = &v["details"]["solutions"][0]["entries"];
    assert!(entries[0][0].is_string());
}

#[test]
fn confirmation_drops_points_seen_by_one_randomization_only() {
    let args = [
        "solve-numeric",
        "0",
        "1",
        "1",
        "4",
        "--structured",
        "--seed",
        "12",
        "--json",
    ];
    let (single, code) = report(&args);
    assert_eq!(code, Some(1));
    assert_eq!(single["agreement"]["matched"], false);
    let (confirmed, code) = report(&[&args[..], &["--confirm"]].concat());
    assert_eq!(code, Some(0));
    assert_eq!(confirmed["counts"]["numeric"], 24);
    assert_eq!(confirmed["agreement"]["matched"], true);
    assert_eq!(
        confirmed["details"]["repeat_counts"]
            .as_array()
            .unwrap()
            .len(),
        2
    );
    assert!(validator().is_valid(&confirmed));
}

#[test]
fn generate_is_deterministic_and_feeds_other_commands() {
    let a = stdout(&run(&["generate", "1", "0", "1", "4", "--seed", "9"]));
    let b = stdout(&run(&["generate", "1", "0", "1", "4", "--seed", "9"]));
    let c = stdout(&run(&["generate", "1", "0", "1", "4", "--seed", "10"]));
    assert_eq!(a, b);
    assert_ne!(a, c);
    let dir = std::env::temp_dir().join(format!("pglcount-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("instance.json");
    std::fs::write(&path, &a).unwrap();
    let p = path.to_str().unwrap();

    let (w, code) = report(&["wronskian", p, "--json"]);
    assert_eq!(code, Some(0));
    assert_eq!(w["details"]["va"]["degree"], 6);
    assert_eq!(w["details"]["vb"]["degree"], 4);

    let (n, code) = report(&[
        "solve-numeric",
        "1",
        "0",
        "1",
        "4",
        "--instance",
        p,
        "--repeats",
        "2",
        "--json",
    ]);
    assert_eq!(code, Some(0));
    assert_eq!(n["counts"]["numeric"], 24);
    assert_eq!(n["agreement"]["stable"], true);

    let o = run(&["solve-numeric", "0", "0", "0", "3", "--instance", p]);
    assert_eq!(o.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn runs_are_deterministic_given_the_seed() {
    let strip = |mut v: Value| {
        v["wall_time"] = Value::Null;
        v
    };
    let args = [
        "solve-numeric",
        "2",
        "2",
        "2",
        "3",
        "--seed",
        "11",
        "--json",
    ];
    assert_eq!(strip(report(&args).0), strip(report(&args).0));
}

#[test]
fn structured_dual_reports_each_map() {
    let (v, code) = report(&["dual", "0", "0", "0", "3", "--structured", "--json"]);
    // the literal adjoint map does not land on the dual instance's solutions
    assert_eq!(code, Some(1));
    assert_eq!(v["agreement"]["adjoint_bijective"], false);
    assert_eq!(v["agreement"]["identity_bijective"], true);
    assert_eq!(v["agreement"]["adjoint_exchanged_bijective"], true);
    assert_eq!(v["details"]["dual_params"], serde_json::json!([2, 2, 2, 3]));
}
