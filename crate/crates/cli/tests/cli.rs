use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fusion")).args(args).env_remove("FUSION_CACHE_DIR").output().unwrap()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn stderr_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).unwrap()
}

fn j(v: &Value) -> Vec<u64> {
    v.as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect()
}

const D16: [&str; 10] = [
    "--family",
    "D",
    "--rank",
    "16",
    "--plus",
    "2,3,4,5,10,11,12,13",
    "--minus",
    "1,6,7,8,9,14,15,16",
    "--method",
    "weight",
];

#[test]
fn fuse_d16_example() {
    let mut args = vec!["fuse"];
    args.extend(D16);
    let out = run(&args);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(j(&v["j"]), [2, 3, 4, 5, 7, 8, 10, 11, 12, 13, 15, 16]);
    assert_eq!(v["method"], "weight");
    assert_eq!(j(&v["partition"]), [5, 5, 5, 5, 3, 3, 3, 1, 1, 1]);

    let auto = stdout_json(&run(&args[..args.len() - 2]));
    assert_eq!(auto["method"], "partition");
    assert_eq!(auto["canonical_j"], v["canonical_j"]);
}

#[test]
fn fuse_small_examples() {
    let g2 = stdout_json(&run(&["fuse", "--family", "G", "--rank", "2", "--plus", "2", "--minus", "1"]));
    assert_eq!(j(&g2["j"]), [2]);
    assert_eq!(g2["method"], "fold");
    assert!(g2.get("partition").is_none());
    let a1 = stdout_json(&run(&["fuse", "--family", "A", "--rank", "1", "--plus", "1"]));
    assert_eq!(j(&a1["j"]), [1]);
    assert_eq!(j(&a1["partition"]), [2]);
}

#[test]
fn fuse_from_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("in.json");
    std::fs::write(&path, r#"{"family":"E","rank":8,"plus":[1,2,3,4],"minus":[5,6,7,8]}"#).unwrap();
    let out = run(&["fuse", "--input", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(j(&stdout_json(&out)["j"]), [1, 2, 3, 4, 6, 7, 8]);
}

#[test]
fn oracle_uses_cache_dir() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["fuse", "--family", "E", "--rank", "6", "--plus", "1,3,5", "--minus", "2,4,6", "--method", "oracle"];
    let first =
        Command::new(env!("CARGO_BIN_EXE_fusion")).args(args).env("FUSION_CACHE_DIR", dir.path()).output().unwrap();
    assert!(first.status.success());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    let second =
        Command::new(env!("CARGO_BIN_EXE_fusion")).args(args).env("FUSION_CACHE_DIR", dir.path()).output().unwrap();
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn usage_errors_exit_one_with_json() {
    let out = run(&["fuse", "--family", "A", "--rank", "3", "--plus", "1", "--minus", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"]["kind"], "labels_overlap");

    let out = run(&["fuse", "--family", "Q", "--rank", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"]["kind"], "usage");

    let out = run(&["fuse", "--family", "E", "--rank", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"]["kind"], "invalid_rank");

    let out = run(&["fuse", "--family", "G", "--rank", "2", "--plus", "1", "--method", "partition"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"]["kind"], "unsupported_family");

    let out = run(&["fuse", "--input", "/nonexistent/in.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_json(&out)["error"]["message"].is_string());

    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn enumerate_g2_and_a2() {
    let out = run(&["enumerate", "--family", "G", "--rank", "2"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 9);

    let out = run(&["enumerate", "--family", "A", "--rank", "2"]);
    let records: Vec<Value> =
        String::from_utf8(out.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let r = records.iter().find(|r| j(&r["plus"]) == [1] && j(&r["minus"]) == [2]).unwrap();
    assert_eq!(j(&r["canonical_j"]), [1]);
    assert_eq!(r["levi_type"], "A1");
    let full = records.iter().find(|r| j(&r["plus"]) == [1, 2]).unwrap();
    assert_eq!(j(&full["j"]), [1, 2]);

    let full_only = run(&["enumerate", "--family", "A", "--rank", "3", "--full"]);
    assert_eq!(String::from_utf8(full_only.stdout).unwrap().lines().count(), 8);
}

#[test]
fn enumerate_is_deterministic() {
    let a = run(&["enumerate", "--family", "D", "--rank", "5"]);
    let b = run(&["enumerate", "--family", "D", "--rank", "5"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_examples_exit_zero() {
    let out = run(&["verify", "--family", "A", "--rank", "10", "--methods", "weight,partition,oracle"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["inputs_checked"], 1024);
    assert_eq!(v["mismatches"].as_array().unwrap().len(), 0);

    let out = run(&["verify", "--family", "E", "--rank", "8", "--methods", "weight,epattern,oracle"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["inputs_checked"], 256);

    let out = run(&["verify", "--family", "D", "--rank", "4", "--methods", "weight,partition", "--exhaustive-ties"]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&["verify", "--family", "C", "--rank", "3", "--sparse"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["inputs_checked"], 27);
}

#[test]
fn verify_reports_tie_dependence_with_exit_two() {
    let out = run(&["verify", "--family", "E", "--rank", "7", "--methods", "weight", "--exhaustive-ties"]);
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&out);
    let inputs: Vec<Vec<u64>> = v["mismatches"].as_array().unwrap().iter().map(|m| j(&m["input"]["plus"])).collect();
    assert_eq!(inputs, [vec![2, 4, 6], vec![1, 3, 5, 7]]);
}

#[test]
fn verify_rejects_bad_method_and_rank() {
    let out = run(&["verify", "--family", "G", "--rank", "2", "--methods", "weight"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["verify", "--family", "A", "--rank", "30"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_json(&out)["error"]["kind"], "capability_exceeded");
}

#[test]
fn partition_and_conjugate() {
    let out = run(&["partition", "--family", "D", "--rank", "6", "--plus", "3,4,5", "--minus", "1,2,6", "--all"]);
    let v = stdout_json(&out);
    assert_eq!(j(&v["partition"]), [4, 4, 2, 2]);
    assert_eq!(v["vertex_count"], 12);
    assert_eq!(v["choices"].as_array().unwrap().len(), 1);

    let out = run(&["conjugate", "--family", "D", "--rank", "4", "--a", "1,3", "--b", "3,4", "--orbit"]);
    let v = stdout_json(&out);
    assert_eq!(v["conjugate"], false);
    assert_eq!(v["orbit_conjugate"], false);
    let out = run(&["conjugate", "--family", "A", "--rank", "3", "--a", "1", "--b", "3"]);
    assert_eq!(stdout_json(&out)["conjugate"], true);
}
