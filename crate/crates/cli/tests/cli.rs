//! End-to-end tests of the `qdesing` binary: outputs, exit codes,
//! byte-stable reports and cache transparency.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", &format!("{name}.json")].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qdesing")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let o = run(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

#[test]
fn qhat_dot_of_d4() {
    let dot = stdout(&["qhat", &fixture("d4")]);
    let edges = dot.lines().filter(|l| l.contains(" -> ") && !l.trim_start().starts_with("//")).count();
    let nodes = dot.lines().filter(|l| l.trim_start().starts_with('"') && !l.contains(" -> ")).count();
    assert_eq!((nodes, edges), (12, 13));
}

#[test]
fn delpezzo_total_space_counts() {
    let r = json(&["count", &fixture("delpezzo"), "--e", "[1]=1,[S1]=1,[I2]=2,[S3]=1,[3]=1,[2]=3", "--primes", "2,3"]);
    assert_eq!(r["result"]["counts"]["2"], 297);
    assert_eq!(r["result"]["counts"]["3"], 1216);
    assert_eq!(r["result"]["space"], "Gr_e(M̂)");
}

#[test]
fn blowup_count_fit() {
    let r = json(&["count", &fixture("a2_blowup"), "--fit"]);
    assert_eq!(r["result"]["poly"]["coeffs"], serde_json::json!([1, 1, 1]));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["count", &fixture("a2_blowup"), "--primes", "2,4"]).status.code(), Some(2));
    assert_eq!(run(&["count", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(run(&["count", &fixture("a2_blowup"), "--e", "7,7"]).status.code(), Some(2));
    assert_eq!(run(&["bogus-subcommand"]).status.code(), Some(2));
    let o = run(&["count", &fixture("delpezzo"), "--budget", "10"]);
    assert_eq!(o.status.code(), Some(3));
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["status"], "budget_exceeded");
}

#[test]
fn reports_are_byte_stable_across_runs_and_jobs() {
    for args in [
        vec!["desing".to_string(), fixture("a2_blowup")],
        vec!["stratify".into(), fixture("delpezzo")],
        vec!["indec-table".into(), fixture("d4")],
        vec!["a2".into(), "sweep".into(), "--bound".into(), "2".into()],
    ] {
        let base: Vec<&str> = args.iter().map(String::as_str).collect();
        let a = stdout(&base);
        let b = stdout(&base);
        let j1 = stdout(&[base.clone(), vec!["--jobs", "1"]].concat());
        let j4 = stdout(&[base.clone(), vec!["--jobs", "4"]].concat());
        assert_eq!(a, b);
        assert_eq!(a, j1, "{base:?}");
        assert_eq!(a, j4, "{base:?}");
    }
}

#[test]
fn cache_hits_do_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let out = dir.path().join("out");
    let c = cache.to_str().unwrap();
    for args in [vec!["desing", &fixture("degenerate_flag")[..]], vec!["qhat", &fixture("a3")[..]], vec!["indec-table", &fixture("a3_sink")[..]]] {
        let plain = stdout(&args);
        let miss = stdout(&[args.clone(), vec!["--cache", c]].concat());
        let hit = stdout(&[args.clone(), vec!["--cache", c, "--out", out.to_str().unwrap()]].concat());
        assert_eq!(plain, miss);
        assert_eq!(plain, hit);
    }
    assert!(std::fs::read_dir(&cache).unwrap().count() >= 3);
    assert!(out.join("qhat-a3-qhat.dot").exists());
    assert!(out.join("indec-table-a3_sink-ar.dot").exists());
}

#[test]
fn seeded_lifts_do_not_change_counts() {
    let a = json(&["count", &fixture("a2_blowup"), "--e", "[1]=1,[S1]=1,[2]=2"]);
    let b = json(&["count", &fixture("a2_blowup"), "--e", "[1]=1,[S1]=1,[2]=2", "--seed", "7"]);
    assert_eq!(a["result"]["counts"], b["result"]["counts"]);
    let m = json(&["mhat", &fixture("delpezzo"), "--seed", "3"]);
    assert_eq!(m["result"]["per_prime"]["3"]["lambda_image"], true);
}

#[test]
fn fixtures_subcommand_passes() {
    let o = run(&["fixtures", "--dir", &fixture("a3").trim_end_matches("a3.json"), "--primes", "2,3"]);
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["result"]["failed"], serde_json::json!([]), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(o.status.code(), Some(0));
}
