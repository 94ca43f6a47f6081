use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coanalytic"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

const EXAMPLE_PHI: &str = r#"{"singular": {"factors": [
    {"theta": 3.141592653589793, "alpha": 0.6},
    {"theta": 0.0, "alpha": -0.4}
]}}"#;

#[test]
fn example_multiplier_is_accepted_by_the_divisor_rule() {
    let path = std::env::temp_dir().join("coanalytic_example_phi.json");
    std::fs::write(&path, EXAMPLE_PHI).unwrap();
    let out = run(&[
        "mult-check",
        "--a1",
        "[(π,1),(0,1)]",
        "--a2",
        "[(π,1)]",
        "--phi",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["decision"], "yes");
    assert_eq!(v["rule"], "thm1.1");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["config"]["command"]["name"], "mult-check");
}

#[test]
fn example_multiplier_is_not_in_the_larger_space() {
    let out = run(&[
        "mult-check",
        "--a1",
        "[(π,1),(0,1)]",
        "--a2",
        "[(π,1),(0,1)]",
        "--phi",
        "[(π, 0.6), (0, -0.4)]",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["decision"], "no");
    assert_eq!(v["rule"], "prop3.1");
    assert!(v["obstruction"].as_str().unwrap().contains("membership"));
}

#[test]
fn shift_norm_sweep_reaches_root_two() {
    let out = run(&["shift-norm", "--a", "[(0,1)]", "--sweep", "0:1024", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(text.starts_with("# coanalytic "));
    assert!(text.contains("\nn,sigma_max,closed_form,gap\n"));
    let rows = csv_rows(&out);
    let last = rows.last().unwrap();
    assert_eq!(last[0], "1024");
    let closed: f64 = last[2].parse().unwrap();
    let gap: f64 = last[3].parse().unwrap();
    assert!((closed - 2f64.sqrt()).abs() < 1e-15);
    assert!(gap.abs() <= 1e-9);
}

#[test]
fn reduce_keeps_only_the_circle_zero() {
    let out = run(&["reduce", "--rational", r#"{"rational":{"num":[2,-3,1],"den":[1]}}"#]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let zeros = v["classA"].as_array().unwrap();
    assert_eq!(zeros.len(), 1);
    assert_eq!(zeros[0]["mult"], 1);
    assert!(zeros[0]["theta"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn onto_exit_codes() {
    let none = run(&["onto-check", "--a1", "[(0,1),(π,1)]", "--a2", "[(π,1)]"]);
    assert_eq!(none.status.code(), Some(0));
    assert_eq!(json_of(&none)["decision"], "none");

    let unknown = run(&["onto-check", "--a1", "[(0,1)]", "--a2", "[(π,1)]"]);
    assert_eq!(unknown.status.code(), Some(2));
    assert_eq!(json_of(&unknown)["decision"], "unknown");

    let exist = run(&["onto-check", "--a1", "[(0,1)]", "--a2", "[(0,1)]", "--lambda", "0.3"]);
    assert_eq!(exist.status.code(), Some(0));
    let v = json_of(&exist);
    assert_eq!(v["decision"], "exist");
    assert!((v["lambda_bound"].as_f64().unwrap() - 0.5).abs() < 1e-9);
    assert!(v["crofoot"]["tailBound"].as_f64().unwrap() <= 1e-13);
}

#[test]
fn malformed_input_exits_one_with_a_diagnostic() {
    let out = run(&["decompose", "--a", "{\"classA\": [", "--f", "[1]"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "input");
    assert!(err["error"]["message"].as_str().unwrap().contains("malformed JSON"));
}

#[test]
fn precondition_failures_are_named() {
    let out = run(&["adjoint-check", "--a", "[(0,1)]", "--n", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "precondition");

    let out = run(&["kernel-check", "--a", "[(0,1)]", "--lambda", "1.5"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "outside-disk");
}

#[test]
fn identical_config_gives_identical_bytes() {
    let args = ["onto-check", "--a1", "[(0,2)]", "--a2", "[(0,2)]", "--lambda", "0.1,0.1", "--seed", "7"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn kernel_check_selects_the_truncation() {
    let out = run(&["kernel-check", "--a", "[(0,1),(π,1)]", "--lambda", "0,0.3", "--f", "[0,1]"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert!(v["residual"].as_f64().unwrap() <= 1e-8);
    assert!(v["tailBound"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn decompose_and_norm() {
    // (z−1)², f = z³: p = 3z − 2, f̃ = z + 2
    let out = run(&["decompose", "--a", "[(0,2)]", "--f", "[0,0,0,1]"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let p = v["decomposition"]["p"].as_array().unwrap();
    assert!((p[0][0].as_f64().unwrap() + 2.0).abs() < 1e-12);
    assert!((p[1][0].as_f64().unwrap() - 3.0).abs() < 1e-12);
    assert!(v["reconstruction"].as_f64().unwrap() < 1e-12);

    // a = z − 1, f = 1: preimage −1, norm 1
    let out = run(&["norm", "--a", "[(0,1)]", "--f", "[1]"]);
    let v = json_of(&out);
    assert!((v["rangeElement"]["norm"].as_f64().unwrap() - 1.0).abs() < 1e-15);
    assert!((v["rangeElement"]["g"][0][0].as_f64().unwrap() + 1.0).abs() < 1e-15);
}

#[test]
fn mate_of_the_half_chord() {
    let out = run(&["mate", "--rational", r#"{"num":[0.5,-0.5]}"#, "--grid", "1024"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let b = v["mate"]["b"].as_array().unwrap();
    assert!((b[0][0].as_f64().unwrap() - 0.5).abs() < 1e-8);
    assert!((b[1][0].as_f64().unwrap() - 0.5).abs() < 1e-8);
    assert!(v["mate"]["residual"].as_f64().unwrap() < 1e-8);
    assert_eq!(v["zerosInDisk"], 0);

    let extreme = run(&["mate", "--a", "[(0,1)]"]);
    assert_eq!(extreme.status.code(), Some(1));
    let scaled = run(&["mate", "--a", "[(0,1)]", "--normalize"]);
    assert_eq!(scaled.status.code(), Some(0));
    assert!((json_of(&scaled)["scale"].as_f64().unwrap() - 4.0).abs() < 1e-9);
}

#[test]
fn decay_fit_and_probe() {
    let out = run(&["decay-fit", "--sample-c", "1", "--n", "4096"]);
    let v = json_of(&out);
    assert!((v["fit"]["c"].as_f64().unwrap() - 1.0).abs() < 0.01);
    assert_eq!(v["inClass"], true);

    let out = run(&["probe", "--sample-c", "1", "--n", "64", "--levels", "16,32", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r[3].parse::<f64>().unwrap() < 1.05));
}

#[test]
fn convergence_tables() {
    let out = run(&["convergence", "--study", "kernel", "--a", "[(0,1)]", "--lambda", "0.5", "--f", "[1,1,1]", "--sweep", "0:8:1"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&run(&[
        "convergence", "--study", "kernel", "--a", "[(0,1)]", "--lambda", "0.5", "--f", "[1,1,1]",
        "--sweep", "0:8:1", "--format", "csv",
    ]));
    assert_eq!(rows.len(), 9);
    for r in &rows[2..] {
        assert_eq!(r[1].parse::<f64>().unwrap(), 0.0, "exact once n ≥ deg f");
    }
    let out = run(&["convergence", "--study", "mate", "--rational", r#"{"num":[0.5,-0.5]}"#, "--sweep", "64,128"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["rows"].as_array().unwrap().len(), 2);
}

#[test]
fn selftest_subsets_and_tampered_tolerance() {
    let out = run(&["selftest", "--only", "shift"]);
    assert_eq!(out.status.code(), Some(0));
    let log = String::from_utf8(out.stderr.clone()).unwrap();
    assert_eq!(log.lines().count(), 1);
    assert!(log.starts_with("[PASS]"));

    let out = run(&["selftest", "--only", "identities,isometry", "--tol", "1e-20"]);
    assert_eq!(out.status.code(), Some(1));
    let log = String::from_utf8(out.stderr.clone()).unwrap();
    assert_eq!(log.matches("[FAIL]").count(), 2);
    assert_eq!(json_of(&out)["failed"], 2);
}

#[test]
fn report_goes_to_out_file() {
    let path = std::env::temp_dir().join("coanalytic_out_test.json");
    let _ = std::fs::remove_file(&path);
    let out = run(&["adjoint-check", "--a", "[(0,1)]", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(v["residual"].as_f64().unwrap() <= 1e-10);
}
