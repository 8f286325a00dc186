mod common;

use std::f64::consts::FRAC_PI_4;

use common::abphase;

fn stdout(args: &[&str]) -> (i32, String) {
    let out = abphase(args, None);
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines().skip(1);
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap().to_string()).collect()
}

#[test]
fn analytic_phase_shifts_for_half_flux() {
    let (code, out) = stdout(&["phase-shifts", "--alpha", "0.5", "--m=-2..2"]);
    assert_eq!(code, 0);
    let values: Vec<f64> = column(&out, "value").iter().map(|v| v.parse().unwrap()).collect();
    assert_eq!(values, vec![FRAC_PI_4, FRAC_PI_4, -FRAC_PI_4, -FRAC_PI_4, -FRAC_PI_4]);
}

#[test]
fn zero_flux_gives_zero_rows() {
    let (_, out) = stdout(&["phase-shifts", "--alpha", "0", "--m=-3..3"]);
    assert!(column(&out, "value").iter().all(|v| v == "0"));
    let (_, out) = stdout(&["spectrum", "--m", "0", "--alpha", "0", "--n", "4"]);
    assert_eq!(column(&out, "analytic"), vec!["1", "3", "5", "7", "9"]);
}

#[test]
fn spectrum_example() {
    let (code, out) = stdout(&["spectrum", "--m", "0", "--alpha", "0.5", "--n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(column(&out, "analytic"), vec!["1.5", "3.5", "5.5", "7.5"]);
    assert!(column(&out, "numeric").iter().all(String::is_empty));
}

#[test]
fn fredholm_rows_agree_with_analytic() {
    let (code, out) = stdout(&["phase-shifts", "--alpha", "0.5", "--m=-1..1", "--method", "fredholm"]);
    assert_eq!(code, 0);
    let dev = column(&out, "deviation");
    let unc = column(&out, "uncertainty");
    for (d, u) in dev.iter().zip(&unc) {
        let (d, u): (f64, f64) = (d.parse().unwrap(), u.parse().unwrap());
        assert!(d.abs() <= u, "{d} > {u}");
    }
}

#[test]
fn forged_lowest_weight_is_rejected() {
    let out = abphase(&["algebra-check", "--m", "0", "--alpha", "0.5", "--e0-override", "-0.25"], None);
    assert_eq!(out.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["admissible"], false);
    assert_eq!(doc["pass"], false);
}

#[test]
fn small_algebra_check_passes() {
    let out = abphase(&["algebra-check", "--m", "0", "--alpha", "0", "-N", "4"], None);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn integer_flux_cross_section_is_null() {
    let (code, out) = stdout(&["cross-section", "--alpha", "1", "--angles", "10"]);
    assert_eq!(code, 0);
    assert!(column(&out, "dcs").iter().all(|v| v.parse::<f64>().unwrap() <= 1e-6));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(abphase(&["spectrum", "--m", "0"], None).status.code(), Some(2));
    assert_eq!(abphase(&["phase-shifts", "--alpha", "0.5", "--m", "3..1"], None).status.code(), Some(2));
    assert_eq!(abphase(&["spectrum", "--m", "0", "--alpha", "0.5", "--omega", "-1"], None).status.code(), Some(2));
    assert_eq!(abphase(&["hellmann", "--m", "0", "--alpha", "0"], None).status.code(), Some(2));
}

#[test]
fn partial_failures_are_reported_per_row() {
    // r_max too short for the ode route: every ode row fails, analytic rows do not.
    let (code, out) = stdout(&["phase-shifts", "--alpha", "0.5", "--m=0..1", "--method", "analytic,ode", "--r-max", "10"]);
    assert_eq!(code, 0);
    let errors = column(&out, "error");
    assert!(errors[0].is_empty() && !errors[1].is_empty());

    let (code, _) = stdout(&["phase-shifts", "--alpha", "0.5", "--m=0..1", "--method", "ode", "--r-max", "10"]);
    assert_eq!(code, 1);
}

#[test]
fn manifest_timestamp_is_pinned() {
    let out = abphase(&["phase-shifts", "--alpha", "0.5", "--timestamp", "1234"], None);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("# {"));
    assert!(text.lines().next().unwrap().contains("\"timestamp\":1234"));
}
