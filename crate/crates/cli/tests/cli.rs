use std::process::{Command, Output};

fn qzero(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qzero")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn small_angles_are_certified() {
    let out = qzero(&["certify", "--p", "2", "--theta-list", "0.2,0.2,0.2,0.2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["kind"], "zero_capacity");
    assert_eq!(v["verdict"], true);
}

#[test]
fn large_angles_are_not_certified() {
    let out = qzero(&["certify", "--p", "2", "--theta-list", "0.3,0.3,0.3"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["first_violation"], "sum_abs_theta");
}

#[test]
fn code_for_two_quarter_turns() {
    let out = qzero(&["code", "verify", "--p", "2", "--n", "2", "--theta-list", "pi/2,pi/2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let bad = qzero(&["code", "verify", "--p", "2", "--n", "2", "--theta-list", "pi/2,1.0"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn undeformed_search_finds_nothing() {
    let out = qzero(&["search", "--theta", "0", "--restarts", "50", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(3));
    let v = json(&out);
    assert_eq!(v["status"], "no_code_evidence");
    assert!((v["violation"].as_f64().unwrap() - 0.25).abs() < 1e-6);
}

#[test]
fn invalid_input_exits_with_two() {
    for args in [
        &["certify", "--theta-list", "abc"][..],
        &["channel", "--theta", "1", "--env", "3"],
        &["bounds", "--p", "0"],
        &["search", "--theta", "1", "--restarts", "0"],
        &["no-such-command"],
    ] {
        let out = qzero(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn output_is_reproducible() {
    let args = ["search", "--theta", "2.5", "--restarts", "8", "--seed", "42"];
    let (a, b) = (qzero(&args), qzero(&args));
    assert_eq!(a.stdout, b.stdout);
    let other = qzero(&["search", "--theta", "2.5", "--restarts", "8", "--seed", "43"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn out_flag_writes_the_report() {
    let path = std::env::temp_dir().join(format!("qzero-bounds-{}.json", std::process::id()));
    let out = qzero(&["bounds", "--p", "3", "--n", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    assert_eq!(v["bounds"]["m"], 12);
    assert!((v["bounds"]["theta_n"].as_f64().unwrap() - 0.26303801341252).abs() < 1e-12);
}

#[test]
fn channel_and_graph_reports() {
    let out = qzero(&["channel", "--theta", "pi", "--env", "4", "--emit", "report"]);
    assert_eq!(out.status.code(), Some(0));
    let g = qzero(&["graph", "--theta", "pi/3"]);
    assert_eq!(g.status.code(), Some(0), "{}", String::from_utf8_lossy(&g.stderr));
    let s = qzero(&["scenario", "corollary1", "--n", "1"]);
    assert_eq!(s.status.code(), Some(0));
    assert_eq!(json(&s)["code_leg"], "verified");
}
