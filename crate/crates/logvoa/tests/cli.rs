use std::path::Path;
use std::process::{Command, Output};

use logvoa::cache::{CacheKey, MatrixCache};
use logvoa_core::linalg::RationalMatrix;
use logvoa_core::Rational;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_logvoa")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn verify_to(out: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["verify", "--p", "3", "--pprime", "2", "--max-weight", "4", "--module", "V", "--out"];
    args.push(out.to_str().unwrap());
    args.extend_from_slice(extra);
    run(&args)
}

#[test]
fn coprime_parameters_required() {
    let o = run(&["verify", "--p", "4", "--pprime", "2", "--max-weight", "3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_weight_and_coset_are_config_errors() {
    assert_eq!(run(&["verify", "--p", "3", "--pprime", "2", "--max-weight", "-1"]).status.code(), Some(2));
    let o = run(&["kernel-dims", "--p", "3", "--pprime", "2", "--coset", "X"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn lattice_report_has_central_charge() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = run(&[
        "verify", "--p", "5", "--pprime", "2", "--max-weight", "3", "--module", "VL", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let checks = json["checks"].as_array().unwrap();
    let c = checks.iter().find(|c| c["name"] == "central charge (5,2)").unwrap();
    assert_eq!(c["witness"][0]["value"], "-22/5");
    assert_eq!(json["summary"]["fail"], 0);
}

#[test]
fn reports_identical_across_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    let oa = verify_to(&a, &["--jobs", "1"]);
    let ob = verify_to(&b, &["--jobs", "4"]);
    assert_eq!(oa.status.code(), Some(0));
    assert_eq!(oa.stdout, ob.stdout);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn cold_and_warm_cache_agree() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let cache_arg = cache.to_str().unwrap();
    let (a, b, c) = (dir.path().join("a.json"), dir.path().join("b.json"), dir.path().join("c.json"));
    verify_to(&a, &[]);
    verify_to(&b, &["--cache-dir", cache_arg]);
    assert!(std::fs::read_dir(&cache).unwrap().count() > 0);
    verify_to(&c, &["--cache-dir", cache_arg]);
    let read = |p: &Path| std::fs::read(p).unwrap();
    assert_eq!(read(&a), read(&b));
    assert_eq!(read(&b), read(&c));
}

/// A well-formed but wrong cache entry is trusted, so the rank certificate
/// fails and the run exits 1.
#[test]
fn failed_check_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cache = MatrixCache::open(dir.path()).unwrap();
    let key = CacheKey {
        version: env!("CARGO_PKG_VERSION").to_string(),
        p: 3,
        p_prime: 2,
        operator: "N-V".into(),
        residue: 0,
        weight: Rational::from_integer(1),
    };
    cache.put(&key, &RationalMatrix::zeros(4, 4)).unwrap();
    let o = run(&[
        "verify", "--p", "3", "--pprime", "2", "--max-weight", "2", "--module", "V", "--cache-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL     rank-3 certificate V(3,2)"));
}

#[test]
fn doublet_dims_from_cli() {
    let o = run(&["kernel-dims", "--p", "3", "--pprime", "2", "--coset", "M", "--max-weight", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    for w in 1..=6 {
        assert!(s.contains(&format!("weight {w}: 0 ")), "{s}");
    }
    assert!(s.contains("weight 7: 2 "), "{s}");
}

#[test]
fn basis_dims_from_cli() {
    let o = run(&["basis", "--p", "3", "--pprime", "2", "--module", "V", "--max-weight", "1"]);
    assert_eq!(stdout(&o), "weight 0: 2\nweight 1: 4\n");
}

#[test]
fn subsingular_from_cli() {
    let o = run(&["subsingular", "--p", "3", "--pprime", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("weight: 5"));
    assert!(s.contains("w = -1/6*a(-4) e(6)"));
    assert!(s.contains("Qw = e(12)"));
}
