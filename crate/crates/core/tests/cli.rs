//! The `arw` binary: exit codes, config files, output formats and
//! reproducibility.

use std::path::Path;
use std::process::{Command, Output};

fn arw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arw")).args(args).env("ARW_THREADS", "2").output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn stabilize_empty_configuration() {
    let out = arw(&["stabilize", "--mu", "0", "--lambda", "1", "--radius", "3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let jumps = v["result"]["jumps"].as_array().unwrap();
    assert_eq!(jumps.len(), 7);
    assert!(jumps.iter().all(|m| m.as_u64() == Some(0)));
}

#[test]
fn russo_check_passes_on_one_site() {
    let out = arw(&[
        "russo-check", "--topology", "line", "--law", "bernoulli", "--radius", "0", "--cap", "1", "--threshold",
        "1", "--point", "1,0.5",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn bernoulli_mean_above_one_is_invalid() {
    let out = arw(&["stabilize", "--law", "bernoulli", "--mu", "1.2", "--radius", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn unknown_config_key_is_invalid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "lambda = 1.0\nlamda = 2.0\n").unwrap();
    let out = arw(&["stabilize", "--config", path(&cfg)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "topology = \"line\"\nlambda = 1.0\nmu = 0.0\nradius = 2\nseed = 5\n").unwrap();
    let base = json(&arw(&["stabilize", "--config", path(&cfg)]));
    assert_eq!(base["result"]["jumps"].as_array().unwrap().len(), 5);
    let wider = json(&arw(&["stabilize", "--config", path(&cfg), "--radius", "4"]));
    assert_eq!(wider["result"]["jumps"].as_array().unwrap().len(), 9);
}

#[test]
fn same_seed_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = arw(&["stabilize", "--mu", "0.9", "--lambda", "0.7", "--radius", "6", "--seed", "17", "--out", path(&out)]);
        assert_eq!(o.status.code(), Some(0));
        std::fs::read(out).unwrap()
    };
    let a = run("a.json");
    assert!(!a.is_empty());
    assert_eq!(a, run("b.json"));
}

#[test]
fn essential_scan_csv_columns() {
    let out = arw(&[
        "essential-scan", "--topology", "line", "--radius", "1", "--cap", "2", "--threshold", "2,0,0", "--instances",
        "3", "--format", "csv",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines().skip_while(|l| l.starts_with('#'));
    assert_eq!(lines.next(), Some("instance,vertex,index,s_essential,p_essential,sleeps_positive,jumps"));
    assert!(lines.all(|l| l.split(',').count() == 7));
}

#[test]
fn critical_curve_csv_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("curve.toml");
    std::fs::write(
        &cfg,
        "topology = \"line\"\nseed = 3\nformat = \"csv\"\n[curve]\nlambdas = [1.0]\nradius = 12\nthreshold = 4\nsamples = 80\ntol = 0.25\n",
    )
    .unwrap();
    let out = arw(&["critical-curve", "--config", path(&cfg)]);
    assert!(matches!(out.status.code(), Some(0 | 1)), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("# ")));
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "lambda,zeta,ci_lo,ci_hi,censored");
    assert_eq!(rows.len(), 2);
    assert!(rows[1].starts_with("1,"));
}

#[test]
fn selftest_passes() {
    let out = arw(&["selftest"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}
