use std::process::Command;

use clap::Parser;
use reflen_cli::{execute, RunConfig};
use serde_json::Value;

fn run(args: &[&str]) -> String {
    let cfg = RunConfig::try_parse_from(std::iter::once("reflen").chain(args.iter().copied())).unwrap();
    execute(&cfg).unwrap().body
}

fn result(args: &[&str]) -> Value {
    let v: Value = serde_json::from_str(&run(args)).unwrap();
    v["result"].clone()
}

fn status(args: &[&str]) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_reflen"))
        .args(args)
        .output()
        .unwrap()
        .status
        .code()
        .unwrap()
}

#[test]
fn classify_summary() {
    let r = result(&["classify", "--inline", "rank 3; m12=3 m13=3 m23=4"]);
    assert_eq!(r["summary"], "NonAffine, minimal non-affine, signature (2,1,0)");
    let r = result(&["classify", "--inline", "rank 3; m12=3 m13=3 m23=3"]);
    assert_eq!(r["kind"], "AffineEuclidean");
    assert_eq!(r["type"], "~A2");
}

#[test]
fn affine_bound_summary() {
    let r = result(&["affine-bound", "--inline", "rank 2; m12=inf", "--L", "12"]);
    assert_eq!(r["summary"], "max reflection length 2 = 2n, attained");
}

#[test]
fn qm_certificate_bounds() {
    let r = result(&["qm-certify", "--k", "3", "--pattern", "abc", "--g", "abc", "--K", "6"]);
    assert_eq!(r["C"], "1/2");
    let bounds: Vec<u64> = r["bounds"].as_array().unwrap().iter().map(|b| b["lower"].as_u64().unwrap()).collect();
    assert_eq!(bounds, vec![1, 1, 2, 2, 3, 3]);
}

#[test]
fn subgroups_lists_minimal_sets() {
    let r = result(&["subgroups", "--inline", "rank 4; m12=3 m23=3 m34=3 m13=3 m24=3 m14=3"]);
    let list = r["minimal_nonaffine"].as_array().unwrap();
    assert_eq!(list.len(), 1);
    assert_eq!(list[0]["signature"], "(3,1,0)");
}

#[test]
fn word_forms_agree() {
    let a = result(&["reflen", "--inline", "rank 3; m12=3 m13=3 m23=3", "--word", "abc"]);
    let b = result(&["reflen", "--inline", "rank 3; m12=3 m13=3 m23=3", "--word", "1 2 3"]);
    assert_eq!(a, b);
    assert_eq!(a["upper"], 3);
}

#[test]
fn reports_are_deterministic_and_round_trip() {
    for args in [
        &["classify", "--inline", "rank 3; m12=3 m13=3 m23=4"][..],
        &["growth", "--inline", "rank 3; m12=inf m13=inf m23=inf", "--g", "abc", "--K", "3", "--pattern", "abc"][..],
        &["filling", "--grid", "64"][..],
    ] {
        let first = run(args);
        assert_eq!(first, run(args));
        assert!(!first.contains('\r'));
        let v: Value = serde_json::from_str(&first).unwrap();
        assert_eq!(v["tool"], "reflen");
        assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", first);
    }
}

#[test]
fn csv_headers() {
    let ball = run(&["reflen", "--inline", "rank 2; m12=3", "--format", "csv"]);
    assert!(ball.starts_with("key,len_S,upper,lower,status\n"));
    assert_eq!(ball.lines().count(), 7);
    let growth = run(&["growth", "--inline", "rank 2; m12=inf", "--g", "ab", "--K", "3", "--format", "csv"]);
    assert!(growth.starts_with("k,upper,lower,status\n"));
    let warp = run(&["warp", "--L", "6.5", "--grid", "32", "--format", "csv"]);
    assert!(warp.starts_with("r,f,fp,fpp\n"));
    assert_eq!(warp.lines().count(), 33);
}

#[test]
fn infinity_renders_as_inf() {
    let r = result(&["classify", "--inline", "rank 2; m12=inf"]);
    assert_eq!(r["type"], "~A1");
    let v: Value = serde_json::from_str(&run(&["filling", "--grid", "16"])).unwrap();
    let rel = &v["result"]["model"]["relations"];
    assert!(rel.as_array().unwrap().iter().any(|c| c["exponent"] == "inf"));
}

#[test]
fn exit_codes() {
    assert_eq!(status(&["classify", "--inline", "rank 2; m12=3"]), 0);
    assert_eq!(status(&["--version"]), 0);
    assert_eq!(status(&["subgroups", "--inline", "rank 2; m12=inf"]), 1);
    assert_eq!(status(&["classify", "--inline", "rank 2; m12=1"]), 1);
    assert_eq!(status(&["classify", "--input", "/nonexistent/matrix.txt"]), 1);
    assert_eq!(status(&["frobnicate"]), 1);
    assert_eq!(status(&["classify", "--inline", "rank 2; m12=3", "--format", "csv"]), 1);
    assert_eq!(status(&["filling", "--prime-cap", "5"]), 2);
    assert_eq!(status(&["reflen", "--inline", "rank 2; m12=inf", "--word", "ababab", "--L", "2", "--D", "2"]), 0);
    assert_eq!(status(&["qm-certify", "--pattern", "abcabc", "--window", "18"]), 2);
    assert_eq!(status(&["reflen", "--inline", "rank 3; m12=inf m13=inf m23=inf", "--node-cap", "10"]), 2);
}

#[test]
fn output_file_matches_stdout() {
    let path = std::env::temp_dir().join(format!("reflen-cli-{}.json", std::process::id()));
    let args = ["classify", "--inline", "rank 2; m12=5"];
    let out = Command::new(env!("CARGO_BIN_EXE_reflen")).args(args).output().unwrap();
    let code = status(&[&args[..], &["--output", path.to_str().unwrap()]].concat());
    assert_eq!(code, 0);
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    // The config records the output path, so compare the results only.
    let a: Value = serde_json::from_slice(&out.stdout).unwrap();
    let b: Value = serde_json::from_str(&written).unwrap();
    assert_eq!(a["result"], b["result"]);
}
