use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn dp2cert(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dp2cert"))
        .args(args)
        .arg("--cache-dir")
        .arg(cache)
        .env_remove("DP2CERT_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn strip_timing(mut v: Value) -> Value {
    fn walk(v: &mut Value) {
        match v {
            Value::Object(m) => {
                m.remove("timing_ms");
                m.values_mut().for_each(walk);
            }
            Value::Array(a) => a.iter_mut().for_each(walk),
            _ => {}
        }
    }
    walk(&mut v);
    v
}

#[test]
fn single_claim_prints_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let out = dp2cert(dir.path(), &["verify", "lemma-2.2"]);
    assert_eq!(out.status.code(), Some(0));
    let cert = json(&out);
    assert_eq!(cert["claim_id"], "lemma-2.2");
    assert_eq!(cert["verdict"], "verified");
    assert_eq!(cert["parameters"]["precision"], 64);
}

#[test]
fn unknown_claim_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dp2cert(dir.path(), &["verify", "lemma-9.9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lemma-9.9"));
}

#[test]
fn invalid_precision_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dp2cert(dir.path(), &["verify", "lemma-2.2", "--precision", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn empty_prime_list_is_an_error_verdict() {
    let dir = tempfile::tempdir().unwrap();
    let out = dp2cert(dir.path(), &["verify", "thm-1.4-i", "--primes"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["verdict"], "error");
}

#[test]
fn primes_of_bad_reduction_are_inconclusive() {
    let dir = tempfile::tempdir().unwrap();
    let out = dp2cert(dir.path(), &["verify", "thm-1.4-i", "--primes", "5,13"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["verdict"], "inconclusive");
}

#[test]
fn report_goes_to_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested/cert.json");
    let out = dp2cert(dir.path(), &["verify", "lemma-2.1-spotcheck", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let cert: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(cert["verdict"], "verified");
}

#[test]
fn profile_reports_counts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dp2cert(dir.path(), &["profile", "mod-residues", "--bits", "3", "--class", "w-odd-one-odd"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["modulus"], 8);
    assert_eq!(doc["class"], "w-odd-one-odd");
    let total: u64 = doc["profile"].as_object().unwrap().values().map(|v| v.as_u64().unwrap()).sum();
    assert_eq!(total, 4 * 3 * 4 * 4 * 4);

    let bad = dp2cert(dir.path(), &["profile", "mod-residues", "--class", "nonsense"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn cache_build_hit_and_clear() {
    let dir = tempfile::tempdir().unwrap();
    let first = dp2cert(dir.path(), &["cache", "build"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(json(&first)["status"], "built");
    assert_eq!(json(&first)["order"], 1_451_520);
    let second = dp2cert(dir.path(), &["cache", "build"]);
    assert_eq!(json(&second)["status"], "hit");
    assert!(dir.path().join("sp6f2.bin").exists());
    let cleared = dp2cert(dir.path(), &["cache", "clear"]);
    assert_eq!(cleared.status.code(), Some(0));
    assert!(!dir.path().join("sp6f2.bin").exists());
}

#[test]
fn cold_and_warm_cache_give_identical_group_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let cold = dp2cert(dir.path(), &["verify", "lemma-2.6"]);
    let warm = dp2cert(dir.path(), &["verify", "lemma-2.6"]);
    assert_eq!(cold.status.code(), Some(0));
    assert_eq!(strip_timing(json(&cold)), strip_timing(json(&warm)));
}

#[test]
fn verify_all_is_stable_across_job_counts() {
    let dir = tempfile::tempdir().unwrap();
    let a = dp2cert(dir.path(), &["verify-all", "--jobs", "1"]);
    let b = dp2cert(dir.path(), &["verify-all", "--jobs", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(strip_timing(json(&a)), strip_timing(json(&b)));
}

#[test]
fn minimum_precision_keeps_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dp2cert(dir.path(), &["verify-all", "--precision", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["summary"]["verified"], 10);
}
