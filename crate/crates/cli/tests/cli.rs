use serde_json::Value;
use std::f64::consts::PI;
use std::process::{Command, Output};

fn htk(args: &[&str]) -> Output {
    htk_env(args, &[])
}

fn htk_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_htk"));
    cmd.args(args);
    for var in ["HTK_FORMAT", "HTK_THREADS", "HTK_SEED", "HTK_REL_TOL", "HTK_GROUP", "HTK_TOLERANCE_SCALE"] {
        cmd.env_remove(var);
    }
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).expect("one JSON object per line")).collect()
}

// Γ(3/4) to double precision
const GAMMA_3_4: f64 = 1.225_416_702_465_177_6;

#[test]
fn heat_kernel_at_identity() {
    let o = htk(&["eval", "--kernel", "heat", "--group", "h1", "--z", "0,0", "--sigma", "0", "--t", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = &json_lines(&o)[0];
    assert!((v["value"].as_f64().unwrap() - 0.0625).abs() < 1e-14);
    assert_eq!(v["kernel"], "heat");
    assert!(v["error_estimate"].as_f64().is_some());
}

#[test]
fn conformal_solution_value() {
    let o = htk(&["eval", "--kernel", "fundsol_conf", "--group", "h1", "--s", "0.5", "--z", "1,0", "--sigma", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_lines(&o)[0]["value"].as_f64().unwrap();
    let oracle = 2f64.sqrt() * GAMMA_3_4 * GAMMA_3_4 / PI.powf(2.5);
    assert!((v - oracle).abs() < 1e-14 * oracle);
}

#[test]
fn negative_time_is_a_usage_error() {
    let o = htk(&["eval", "--kernel", "heat", "--t", "-1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("t must be positive"));
}

#[test]
fn malformed_input_exits_two() {
    assert_eq!(htk(&["eval", "--kernel", "heat", "--t", "1", "--z", "1,2,3"]).status.code(), Some(2));
    assert_eq!(htk(&["eval", "--kernel", "nope", "--t", "1"]).status.code(), Some(2));
    assert_eq!(htk(&["eval", "--kernel", "heat", "--t", "1", "--group", "h7x"]).status.code(), Some(2));
    assert_eq!(htk(&["eval", "--kernel", "poisson_ell"]).status.code(), Some(2));
}

#[test]
fn every_kernel_evaluates() {
    for k in [
        "heat", "modified", "thick", "bg", "composite", "poisson_par", "poisson_ell", "fundsol_conf", "fundsol_nonconf",
        "thick_fund", "folland", "riesz_neg",
    ] {
        let o = htk(&["eval", "--kernel", k, "--group", "quat", "--z", "0.5,0.2,0,-0.1", "--sigma", "0.3,0,0.1", "--t", "1", "--tau", "0.5", "--y", "0.4"]);
        assert_eq!(o.status.code(), Some(0), "{k}: {}", String::from_utf8_lossy(&o.stderr));
        let v = json_lines(&o)[0]["value"].as_f64().unwrap();
        assert!(v.is_finite() && v != 0.0, "{k}: {v}");
    }
}

#[test]
fn csv_output_and_environment_precedence() {
    let args = ["eval", "--kernel", "heat", "--z", "0.3,-0.2", "--t", "1"];
    let o = htk_env(&args, &[("HTK_FORMAT", "csv")]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("kernel,group,z,sigma,t,s,y,tau,value,error_estimate"));
    assert!(lines.next().unwrap().starts_with("heat,heisenberg(1),\"0.3,-0.2\",0,1.0,,,,"));
    let mut with_flag = vec!["--format", "json"];
    with_flag.extend(args);
    let o = htk_env(&with_flag, &[("HTK_FORMAT", "csv")]);
    assert!(stdout(&o).starts_with('{'));
}

#[test]
fn group_from_descriptor_file() {
    let path = std::env::temp_dir().join(format!("htk-group-{}.json", std::process::id()));
    std::fs::write(&path, r#"{"m": 2, "k": 1, "J": [[0, 1, -1, 0]]}"#).unwrap();
    let o = htk(&["eval", "--kernel", "heat", "--group", path.to_str().unwrap(), "--t", "2"]);
    std::fs::remove_file(&path).ok();
    assert_eq!(o.status.code(), Some(0));
    assert!((json_lines(&o)[0]["value"].as_f64().unwrap() - 1.0 / 64.0).abs() < 1e-15);
}

#[test]
fn serial_output_is_reproducible() {
    let eval = ["eval", "--kernel", "fundsol_nonconf", "--z", "0.4,0.1", "--sigma", "0.2"];
    assert_eq!(htk(&eval).stdout, htk(&eval).stdout);
    let verify = ["verify", "--suite", "duplication", "--suite", "monster", "--no-wall-time", "--seed", "11"];
    let first = htk(&verify);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, htk(&verify).stdout);
}

#[test]
fn single_check() {
    let o = htk(&["verify", "--suite", "monster"]);
    assert_eq!(o.status.code(), Some(0));
    let reports = json_lines(&o);
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0]["name"], "monster");
    assert_eq!(reports[0]["passed"], true);
    assert!(reports[0]["measured_error"].as_f64().unwrap() < 1e-10);
}

#[test]
fn unknown_suite_exits_two() {
    let o = htk(&["verify", "--suite", "nonexistent"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).is_empty());
}

#[test]
fn impossible_tolerance_fails() {
    let o = htk(&["verify", "--suite", "monster", "--suite", "pfaff", "--suite", "gegenbauer", "--tolerance-scale", "1e-6"]);
    assert_eq!(o.status.code(), Some(1));
    let reports = json_lines(&o);
    assert_eq!(reports.len(), 3);
    assert!(reports.iter().any(|r| r["passed"] == false));
}

#[test]
fn full_suite_on_two_groups() {
    let o = htk(&["verify", "--suite", "all", "--group", "h1", "--group", "quat"]);
    let reports = json_lines(&o);
    let failed: Vec<String> =
        reports.iter().filter(|r| r["passed"] != true).map(|r| format!("{} {}", r["name"], r["notes"])).collect();
    assert!(failed.is_empty(), "{failed:?}");
    assert_eq!(o.status.code(), Some(0));
    let listed = stdout(&htk(&["verify", "--list"])).lines().count();
    assert!(reports.len() >= listed);
}

fn profile(args: &[&str]) -> Vec<Vec<f64>> {
    let o = htk(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta,u,z_norm,sigma_norm,nonconformal,conformal"));
    lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect()
}

fn spread(rows: &[Vec<f64>], col: usize) -> f64 {
    let (lo, hi) = rows.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), r| (a.min(r[col]), b.max(r[col])));
    (hi - lo) / lo
}

#[test]
fn gauge_profiles() {
    let at_one = profile(&["profile", "--s", "1", "--samples", "5"]);
    assert_eq!(at_one.len(), 5);
    assert!(spread(&at_one, 4) < 1e-6 && spread(&at_one, 5) < 1e-6);
    let half = profile(&["profile", "--s", "0.5", "--samples", "5", "--gauge-radius", "1.5"]);
    assert!(spread(&half, 5) < 1e-6);
    assert!(spread(&half, 4) > 1e-3);
    for r in &half {
        // every sample lies on the gauge sphere
        let n4 = r[2].powi(4) + 16.0 * r[3] * r[3];
        assert!((n4 - 1.5f64.powi(4)).abs() < 1e-12);
    }
}

#[test]
fn profile_needs_two_samples() {
    let o = htk(&["profile", "--samples", "1"]);
    assert_eq!(o.status.code(), Some(2));
}
