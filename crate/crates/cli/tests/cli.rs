use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_schauder"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn verify_theorem_on_identity_passes() {
    let out = run(&["verify-theorem", "--system", &data("identity3.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["basis_constant"].as_f64(), Some(1.0));
}

#[test]
fn random_suite_is_deterministic_and_passes() {
    let args = ["verify-theorem", "--seed", "3", "--trials", "200"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["trials"], 200);
    assert_eq!(v["failures"], 0);
}

#[test]
fn approx_one_third() {
    let out = run(&["approx", "--x", "0.3333333333", "--n", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["b"], 3);
    assert_eq!(v["a"], serde_json::json!([1]));
    assert_eq!(v["satisfied"], true);
}

#[test]
fn approx_takes_several_coordinates() {
    let out = run(&["approx", "--x", "0.5,0.25", "--n", "16"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["b"], 4);
    assert_eq!(v["a"], serde_json::json!([2, 1]));
}

#[test]
fn moment_search_two_atoms() {
    let out = run(&["moment-search", "--measure", &data("two_point.json"), "--eps", "0.1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["b"], 2);
    assert_eq!(v["satisfied"], true);
}

#[test]
fn unsatisfied_search_exits_two() {
    let out = run(&[
        "moment-search",
        "--measure",
        &data("sqrt2_geometric_40.json"),
        "--eps",
        "0.001",
        "--cap",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["satisfied"], false);
}

#[test]
fn basis_constant_of_identity() {
    let out = run(&["basis-constant", "--system", &data("identity3.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["basis_constant"].as_f64(), Some(1.0));
    assert_eq!(v["projections"].as_array().unwrap().len(), 3);
}

#[test]
fn angles_of_identity_are_right_angles() {
    let out = run(&["angles", "--system", &data("identity3.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["pairs"].as_array().unwrap().len(), 3);
    assert!((v["min_angle"].as_f64().unwrap() - std::f64::consts::FRAC_PI_2).abs() < 1e-10);
}

#[test]
fn divergence_csv() {
    let args = [
        "divergence",
        "--measure",
        &data("sqrt2_geometric_40.json"),
        "--dmax",
        "12",
    ];
    let out = run(&args);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("d,M_d,theta_min,angle_bound,pair_bound,conditioning_flag")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.split(',').count() == 6));
    assert!(!text.contains("NaN") && !text.contains("inf"));
    assert_eq!(run(&args).stdout, out.stdout);
}

#[test]
fn divergence_json() {
    let out = run(&[
        "divergence",
        "--measure",
        &data("sqrt2_geometric_40.json"),
        "--dmax",
        "6",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out).as_array().unwrap().len(), 3);
}

#[test]
fn shift_rep_on_roots_of_unity() {
    let out = run(&["shift-rep", "--measure", &data("sixth_roots.json"), "--d", "6"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["d"], 6);
    assert!(v.to_string().find("NaN").is_none());
}

#[test]
fn example_minimal_sequence() {
    let out = run(&["example-2-2", "--n", "16"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["min_angle"].as_f64().unwrap() - (15.0f64 / 16.0).acos()).abs() < 1e-10);
    assert!(v["basis_constant"].as_f64().unwrap() >= 2.0f64.sqrt() - 1e-6);
}

#[test]
fn missing_file_is_an_input_error() {
    let out = run(&["basis-constant", "--system", "/definitely/not/here.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(stderr(&out).starts_with("error code=io.read command=basis-constant message="));
}

#[test]
fn malformed_json_is_a_parse_error() {
    let out = run(&["moment-search", "--measure", &data("identity3.json"), "--eps", "0.1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error code=io.parse command=moment-search"));
}

#[test]
fn domain_errors_name_the_module() {
    let out = run(&["approx", "--x", "0.5", "--n", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error code=diophantine."));
    let out = run(&["moment-search", "--measure", &data("two_point.json"), "--eps", "1.5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error code=measure."));
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["bogus"][..],
        &["approx", "--n", "3"],
        &["divergence", "--format", "xml"],
    ] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(stderr(&out).starts_with("error code=cli.usage"));
    }
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("basis-constant"));
}
