use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cschwarz"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn summary(out: &Output) -> serde_json::Value {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    serde_json::from_str(text.lines().last().expect("summary line")).unwrap()
}

#[test]
fn check_on_linear_fractional_passes() {
    let map = fixture("lft.json");
    let out = run(&["check", "--map", map.to_str().unwrap(), "--points", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(text.contains("check.schwarzian_vanishes_on_sp"));
    assert_eq!(summary(&out)["pass"], true);
}

#[test]
fn check_on_non_contact_map_fails_with_named_check() {
    let map = fixture("non_contact.json");
    let out = run(&["check", "--map", map.to_str().unwrap(), "--points", "5"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    let failing: Vec<serde_json::Value> = text
        .lines()
        .map(|l| serde_json::from_str::<serde_json::Value>(l).unwrap())
        .filter(|v| v["type"] == "record" && v["pass"] == false)
        .collect();
    assert_eq!(failing.len(), 1);
    assert_eq!(failing[0]["name"], "check.contactomorphism");
    assert!(String::from_utf8(out.stderr).unwrap().contains("check.contactomorphism"));
}

#[test]
fn cocycle_on_shear_and_lft() {
    let (a, b) = (fixture("shear_lft.json"), fixture("lft.json"));
    let out = run(&["cocycle", "--map", a.to_str().unwrap(), "--map", b.to_str().unwrap(), "--seed", "42", "--points", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let defect: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(defect["name"], "cocycle.defect");
    assert!(defect["max_residual"].as_f64().unwrap() < 1e-8);
}

#[test]
fn identical_seeds_give_identical_bytes() {
    for cmd in ["schwarzian", "hessian", "curvature"] {
        let a = run(&[cmd, "--n", "3", "--seed", "9", "--points", "3"]);
        let b = run(&[cmd, "--n", "3", "--seed", "9", "--points", "3"]);
        assert_eq!(a.status.code(), Some(0), "{cmd}");
        assert_eq!(a.stdout, b.stdout, "{cmd}");
    }
    let a = run(&["check", "--seed", "1", "--points", "3"]);
    let b = run(&["check", "--seed", "2", "--points", "3"]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"n\": 2, \"map\":").unwrap();
    assert_eq!(run(&["check", "--map", bad.to_str().unwrap()]).status.code(), Some(2));
    let lft = fixture("lft.json");
    assert_eq!(run(&["check", "--map", lft.to_str().unwrap(), "--n", "3"]).status.code(), Some(2));
    assert_eq!(run(&["integrability", "--n", "2"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["check", "--tol-alg", "0"]).status.code(), Some(2));
    assert_eq!(run(&["ode", "--n", "3"]).status.code(), Some(2));
}

#[test]
fn csv_output_and_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let out = run(&["hessian", "--format", "csv", "--out", path.to_str().unwrap(), "--points", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("type,name,point,indices,value,tolerance,pass\n"));
    assert!(text.lines().last().unwrap().starts_with("summary,hessian,"));
    assert!(text.lines().all(|l| l.split(',').count() == 7));
}

#[test]
fn schwarzian_components_are_reported() {
    let map = fixture("shear_lft.json");
    let out = run(&["schwarzian", "--map", map.to_str().unwrap(), "--points", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let components = text.lines().filter(|l| l.contains("\"component\"")).count();
    assert_eq!(components, 2 * 8);
}

#[test]
fn ode_writes_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("traj.csv");
    let out = run(&["ode", "--seed", "5", "--points", "3", "--trajectory", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,x_inf,x0,z,slope,constraint_drift"));
    assert_eq!(lines.count(), 51);
}

#[test]
fn integrability_runs_in_dimension_five() {
    let out = run(&["integrability", "--n", "3", "--seed", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(summary(&out)["records"], 3);
}
