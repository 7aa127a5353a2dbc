use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qclock(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qclock"))
        .args(args)
        .output()
        .expect("spawn qclock")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn check_identity_on_equal_spacing() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("es.txt");
    json(&qclock(&[
        "build",
        "--kind",
        "equally-spaced",
        "--p",
        "4",
        "--T",
        "1",
        "--write",
        p(&file),
    ]));
    let v = json(&qclock(&[
        "check-identity",
        "--spectrum",
        p(&file),
        "--z",
        "4",
    ]));
    let r = &v["result"];
    assert_eq!(r["p"], 4);
    assert_eq!(r["z"], 4);
    assert_eq!(r["r_max"], "4");
    assert_eq!(r["condition_zp1_gt_rp"], true);
    assert!(r["residual"].as_f64().unwrap() <= 1e-12);
    assert_eq!(v["tool"], "qclock");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["units"], "si");
    assert_eq!(v["config"]["constants"]["source"], "codata2018");
}

#[test]
fn check_identity_reports_failed_condition() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("r.txt");
    json(&qclock(&[
        "--units",
        "natural",
        "build",
        "--kind",
        "rational",
        "--ratios",
        "5/3,7/2",
        "--e1",
        "0.25",
        "--write",
        p(&file),
    ]));
    let v = json(&qclock(&[
        "--units",
        "natural",
        "check-identity",
        "--spectrum",
        p(&file),
        "--z",
        "20",
    ]));
    assert_eq!(v["result"]["condition_zp1_gt_rp"], false);
    assert_eq!(v["result"]["r_max"], "21");
    let v = json(&qclock(&[
        "--units",
        "natural",
        "check-identity",
        "--spectrum",
        p(&file),
        "--z",
        "21",
    ]));
    assert!(v["result"]["residual"].as_f64().unwrap() < 1e-12);
}

#[test]
fn inadmissible_body_exits_1_with_error_name() {
    let out = qclock(&[
        "--units", "natural", "bounds", "--lc", "2", "--mrest", "0.5", "--T", "10", "--p", "3",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("schwarzschild-violation"));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(qclock(&["bounds", "--lc", "abc"]).status.code(), Some(2));
    assert_eq!(qclock(&["nonsense"]).status.code(), Some(2));
    assert_eq!(
        qclock(&["measure", "--z", "3", "--state", "x:1", "--spectrum", "f"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn missing_spectrum_file_is_a_domain_error() {
    let out = qclock(&[
        "check-identity",
        "--spectrum",
        "/nonexistent/clock.txt",
        "--z",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("io-error"));
}

#[test]
fn measure_is_reproducible_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("es.txt");
    let csv = dir.path().join("hist.csv");
    json(&qclock(&[
        "--units",
        "natural",
        "build",
        "--kind",
        "equally-spaced",
        "--p",
        "7",
        "--T",
        "2",
        "--write",
        p(&file),
    ]));
    let args = [
        "--units",
        "natural",
        "measure",
        "--spectrum",
        p(&file),
        "--z",
        "7",
        "--state",
        "taum:3",
        "--shots",
        "500",
        "--seed",
        "11",
        "--csv",
        p(&csv),
    ];
    let a = qclock(&args);
    let b = qclock(&args);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["seed"], 11);
    assert_eq!(v["result"]["record"]["prng"], "ChaCha20");
    let counts: Vec<u64> = v["result"]["record"]["counts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_u64().unwrap())
        .collect();
    assert_eq!(counts, vec![0, 0, 0, 500, 0, 0, 0, 0]);
    let table = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(table.lines().count(), 9);
    assert!(table.starts_with("m,tau,probability,count\n"));
}

#[test]
fn measure_energy_and_time_states() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("es.txt");
    json(&qclock(&[
        "--units",
        "natural",
        "build",
        "--kind",
        "equally-spaced",
        "--p",
        "3",
        "--T",
        "4",
        "--write",
        p(&file),
    ]));
    let v = json(&qclock(&[
        "--units",
        "natural",
        "measure",
        "--spectrum",
        p(&file),
        "--z",
        "3",
        "--state",
        "energy:2",
        "--shots",
        "10",
    ]));
    for pr in v["result"]["probabilities"].as_array().unwrap() {
        assert!((pr.as_f64().unwrap() - 0.25).abs() < 1e-12);
    }
    let v = json(&qclock(&[
        "--units",
        "natural",
        "measure",
        "--spectrum",
        p(&file),
        "--z",
        "3",
        "--state",
        "t:2",
        "--shots",
        "10",
    ]));
    assert_eq!(v["result"]["record"]["estimate"].as_f64(), Some(2.0));
    let out = qclock(&[
        "--units",
        "natural",
        "measure",
        "--spectrum",
        p(&file),
        "--z",
        "3",
        "--state",
        "taum:4",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bounds_report_and_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let v = json(&qclock(&[
        "--units",
        "natural",
        "bounds",
        "--lc",
        "100",
        "--mrest",
        "10",
        "--T",
        "100",
        "--p",
        "999",
        "--sweep",
        "theta:10:100:4:log",
        "--csv",
        p(&csv),
    ]));
    let r = &v["result"]["report"];
    assert_eq!(r["binding"], "fundamental");
    assert_eq!(r["theta"].as_f64(), Some(100.0));
    assert_eq!(v["result"]["sweep"]["rows"], 4);
    let table = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[0].starts_with("x,delta_tau,"));
    assert!(lines[1..].iter().all(|l| l.ends_with(",fundamental")));

    let out = qclock(&[
        "--units",
        "natural",
        "sweep",
        "--lc",
        "4",
        "--mass",
        "1",
        "--T",
        "100",
        "--p",
        "3",
        "--sweep",
        "mrest:0:2:3",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 4);
    assert!(!rows[1].contains("error"), "{}", rows[1]);
    assert!(
        rows[3].ends_with("error:schwarzschild-violation"),
        "{}",
        rows[3]
    );
}

#[test]
fn theta_above_period_is_rejected() {
    let out = qclock(&[
        "--units", "natural", "bounds", "--lc", "100", "--T", "10", "--p", "3", "--theta", "11",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid-argument"));
}

#[test]
fn constants_file_and_natural_conflict() {
    let dir = tempfile::tempdir().unwrap();
    let consts = dir.path().join("c.txt");
    std::fs::write(&consts, "hbar = 2.0e-34\nc = 3e8\nG = 6.7e-11\n").unwrap();
    let v = json(&qclock(&[
        "--constants",
        p(&consts),
        "bounds",
        "--lc",
        "1",
        "--mrest",
        "1",
        "--T",
        "1",
        "--p",
        "3",
    ]));
    assert_eq!(v["config"]["constants"]["hbar"].as_f64(), Some(2.0e-34));
    let out = qclock(&[
        "--units",
        "natural",
        "--constants",
        p(&consts),
        "bounds",
        "--lc",
        "1",
        "--T",
        "1",
        "--p",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn json_floats_carry_17_significant_digits() {
    let out = qclock(&[
        "--units", "natural", "bounds", "--lc", "8", "--mass", "1", "--T", "10", "--p", "1",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"l_c\": 8.0000000000000000e0"), "{text}");
}
