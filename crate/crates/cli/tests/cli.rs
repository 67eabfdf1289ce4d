use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn stab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stab")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = stab(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).expect("valid json");
    assert_eq!(v["schema"], "stab/1");
    assert!(v["config"]["argv"].is_array());
    v["result"].clone()
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

#[test]
fn symbol_examples() {
    assert_eq!(json(&["symbol", "--a", "3", "--b", "-1", "--place", "3"])["symbol"], -1);
    assert_eq!(json(&["symbol", "--a", "-1", "--b", "-1", "--place", "inf"])["symbol"], -1);
    assert_eq!(json(&["symbol", "--a", "-1", "--b", "5", "--place", "5"])["symbol"], 1);
}

#[test]
fn count_examples() {
    let r = json(&["count", "--bound", "3", "--signs", "++", "--primes", "all", "--mode", "exact"]);
    assert_eq!((r["count"].as_u64(), r["provenance"].as_str()), (Some(6), Some("exact")));
    let r = json(&["count", "--bound", "100", "--signs", "--", "--primes", "all"]);
    assert_eq!(r["count"], 0);
    let r = json(&["count", "--bound", "200", "--primes", "complement:2"]);
    let all = json(&["count", "--bound", "200", "--primes", "all"]);
    assert_eq!(r["count"], all["count"]);
    let human = stab(&["count", "--bound", "3"]);
    assert!(String::from_utf8_lossy(&human.stdout).contains(": 6"));
}

#[test]
fn montecarlo_is_reproducible() {
    let args = ["count", "--bound", "500", "--mode", "mc", "--samples", "5000", "--seed", "11", "--format", "json"];
    let strip = |o: Output| {
        let mut v: Value = serde_json::from_slice(&o.stdout).unwrap();
        v["result"].as_object_mut().unwrap().remove("millis");
        v
    };
    let a = strip(stab(&args));
    let b = strip(stab(&args));
    assert_eq!(a, b);
    assert_eq!(a["result"]["rng"], "chacha8");
    assert_eq!(a["result"]["provenance"], "empirical");
}

#[test]
fn point_and_solvable() {
    assert_eq!(json(&["point", "--s", "2", "--t", "7"])["point"], serde_json::json!([1, 1, 3]));
    let none = json(&["point", "--s", "3", "--t", "3"]);
    assert!(none["point"].is_null() && none["certified_none"] == true);
    let human = stab(&["point", "--s", "3", "--t", "3"]);
    assert!(String::from_utf8_lossy(&human.stdout).contains("none (certified)"));
    let g = fixture("gaussian.toml");
    let r = json(&["solvable", "--s", "3", "--t", "3", "--field", &g]);
    assert_eq!((r["soluble_over_q"].as_bool(), r["soluble_over_field"].as_bool()), (Some(false), Some(true)));
    let r = json(&["solvable", "--s", "5", "--t", "2", "--field", &g]);
    assert_eq!(r["soluble_over_field"], false);
}

#[test]
fn density_and_groups() {
    let r = json(&["density", "--p", "3"]);
    assert_eq!(r["mu"]["value"], "25/32");
    assert_eq!(r["oracle"]["contains_mu"], true);
    assert_eq!(r["oracle"]["provenance"], "oracle-interval");
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("s3.txt");
    std::fs::write(&f, "# S3 regular\n(1 2)(3 4)(5 6)\n(1 3 5)(2 6 4)\n").unwrap();
    let r = json(&["group-delta", "--generators", f.to_str().unwrap()]);
    assert_eq!((r["order"].as_u64(), r["delta"].as_str()), (Some(6), Some("1/2")));
}

#[test]
fn field_analyze_fixtures() {
    let r = json(&["field", "analyze", "--fixture", &fixture("gaussian.toml"), "--scan", "100000"]);
    let hat = r["delta_hat"]["value"].as_f64().unwrap();
    assert!((hat - 0.5).abs() < 0.01);
    assert_eq!(r["verdict"]["class"], "PerfectlyUnstable");
    let r = json(&["field", "analyze", "--fixture", &fixture("cubic2.toml")]);
    assert_eq!(r["verdict"]["class"], "REquals1");
    assert_eq!(r["verdict"]["al_witness"], serde_json::json!([]));
    let r = json(&["field", "analyze", "--fixture", &fixture("sextic-a4.toml")]);
    assert_eq!(r["delta"]["value"], "1");
    assert_eq!(r["verdict"]["class"], "REquals1");
}

#[test]
fn scan_cache_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let g = fixture("gaussian.toml");
    let args = ["field", "analyze", "--fixture", &g, "--scan", "2000", "--cache-dir", dir.path().to_str().unwrap()];
    let a = json(&args);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let b = json(&args);
    assert_eq!(a, b);
}

#[test]
fn exit_codes() {
    let out = stab(&["count", "--bound", "100000"]);
    assert_eq!(out.status.code(), Some(4));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "resource");
    assert_eq!(stab(&["nonsense"]).status.code(), Some(2));
    assert_eq!(stab(&["symbol", "--a", "0", "--b", "1", "--place", "3"]).status.code(), Some(2));
    assert_eq!(stab(&["count", "--signs", "+*"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("stuck.toml");
    // the local analysis of x^4 - 40x^2 + 80 at 2 stalls on a repeated residual factor
    std::fs::write(&f, "poly = [80, 0, -40, 0, 1]\n").unwrap();
    let out = stab(&["solvable", "--s", "3", "--t", "5", "--field", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!((err["error"]["kind"].as_str(), err["error"]["prime"].as_u64()), (Some("needs-override"), Some(2)));
    let r = json(&["field", "analyze", "--fixture", f.to_str().unwrap(), "--scan", "100"]);
    assert_eq!(r["al_scan"]["needs_override"][0]["p"], 2);
    std::fs::write(&f, "poly = [80, 0, -40, 0, 1]\n[override]\n2 = [2, 2]\n").unwrap();
    assert!(stab(&["solvable", "--s", "3", "--t", "5", "--field", f.to_str().unwrap()]).status.success());
}

#[test]
fn predict_and_compare() {
    let r = json(&["predict", "--bound", "1024", "--signs", "--", "--zmax", "1000"]);
    assert_eq!(r["predicted"], 0.0);
    let r = json(&["predict", "--bound", "1024", "--zmax", "10000"]);
    assert!((r["constant"]["value"].as_f64().unwrap() - 1.0406).abs() < 1e-3);
    let out = stab(&["compare", "--ladder", "128,256", "--zmax", "1000", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# stab/1"));
    assert_eq!(lines[1], "B,constant,empirical,predicted,ratio,tail_uncertainty,varpi");
    assert_eq!(lines.len(), 4);
}

#[test]
fn sieve_subcommands() {
    let r = json(&["sieve", "gls", "--bound", "100", "--z", "5"]);
    assert_eq!((r["count"].as_u64(), r["inclusion_exclusion"].as_u64()), (Some(434), Some(434)));
    let r = json(&["sieve", "omega", "--family", "not-all-divisible", "--l", "7"]);
    assert_eq!(r["omega"], "1/49");
    let r = json(&["sieve", "lsbound", "--bound", "1000"]);
    assert_eq!(r["large_sieve_bound"], 4_000_000.0);
    let r = json(&["sieve", "report", "--ladder", "64,128,256,512", "--zs", "3,5,11,23"]);
    assert_eq!(r["rows"].as_array().unwrap().len(), 16);
}

#[test]
fn stable_count_matches_decomposition() {
    let g = fixture("gaussian.toml");
    let r = json(&["stable-count", "--bound", "60", "--signs", "+-", "--fixture", &g]);
    assert_eq!(r["stable"].as_u64().unwrap() + r["unstable"].as_u64().unwrap(), 3600);
}
