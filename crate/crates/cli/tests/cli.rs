use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cobarlab")).args(args).env_remove("COBARLAB_CACHE").output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn s2() -> String {
    data("s2.json").display().to_string()
}

#[test]
fn homology_of_the_sphere() {
    let o = run(&["homology", "--input", &s2(), "--ring", "Z", "--window", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["homology"]["rows"][2]["reduced_homology"], "rank 1");
    let md = run(&["homology", "--input", &s2(), "--ring", "Z", "--window", "5", "--format", "markdown"]);
    assert!(String::from_utf8_lossy(&md.stdout).contains("| 2 | rank 1 | rank 1 | true |"));
}

#[test]
fn homology_of_a_moore_space() {
    let p = data("moore_z2_2.json").display().to_string();
    let v = json(&run(&["homology", "--input", &p, "--ring", "Z", "--window", "5"]));
    assert_eq!(v["homology"]["rows"][2]["reduced_homology"], "torsion [2]");
    assert_eq!(v["violations"], 0);
}

#[test]
fn corrupted_input_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(data("s2.json")).unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, text.replacen("\"s0 pt\", \"s0 pt\", \"s0 pt\"", "\"s0 pt\", \"pt\", \"s0 pt\"", 1)).unwrap();
    let o = run(&["homology", "--input", bad.to_str().unwrap(), "--ring", "Z"]);
    assert_eq!(o.status.code(), Some(2));
    let v = json(&o);
    assert!(!v["violations"].as_array().unwrap().is_empty() || v["error"] == "input");

    let garbled = dir.path().join("garbled.json");
    std::fs::write(&garbled, "{\n  \"name\": \"x\",\n  \"cells\": [\n").unwrap();
    let o = run(&["homology", "--input", garbled.to_str().unwrap(), "--ring", "Z"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(json(&o)["message"].as_str().unwrap().contains("line"));
}

#[test]
fn job_spec_is_checked() {
    assert_eq!(run(&["homology", "--input", &s2(), "--ring", "F"]).status.code(), Some(2));
    assert_eq!(run(&["homology", "--input", &s2(), "--ring", "Z", "--prime", "2"]).status.code(), Some(2));
    assert_eq!(run(&["homology", "--input", &s2(), "--ring", "F", "--prime", "4"]).status.code(), Some(2));
    assert_eq!(run(&["homology", "--input", &s2(), "--ring", "Z", "--window", "3", "--level-cap", "3"]).status.code(), Some(2));
    assert_eq!(run(&["homology", "--input", &s2(), "--ring", "Z", "--budget", "0"]).status.code(), Some(2));
    assert_eq!(run(&["resolve", "--input", &s2(), "--ring", "Z"]).status.code(), Some(2));
}

#[test]
fn resolve_the_sphere() {
    let o = run(&["resolve", "--input", &s2(), "--ring", "F", "--prime", "2", "--depth", "2", "--window", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["stages"]["levels"][0], serde_json::json!([0, 0, 1, 3]));
    assert_eq!(v["stages"]["levels"][1], serde_json::json!([0, 0, 1, 7]));
    assert_eq!(v["stages"]["cosimplicial_identities"], "pass");
    assert!(v["tower"].as_array().unwrap().iter().all(|e| e["status"] != "violation"));

    let v = json(&run(&["resolve", "--input", &s2(), "--ring", "F", "--prime", "2", "--depth", "0"]));
    assert_eq!(v["stages"]["levels"].as_array().unwrap().len(), 1);
    assert!(v["tower"].as_array().unwrap().is_empty());
}

#[test]
fn oversized_input_exhausts_the_budget() {
    let dir = tempfile::tempdir().unwrap();
    let mut cells = vec![r#"{"id": "pt", "dim": 0, "faces": []}"#.to_string()];
    for k in 0..21 {
        cells.push(format!(r#"{{"id": "e{k}", "dim": 2, "faces": ["s0 pt", "s0 pt", "s0 pt"]}}"#));
    }
    let text = format!(r#"{{"name": "wedge", "basepoint": "pt", "cells": [{}]}}"#, cells.join(", "));
    let p = dir.path().join("wedge.json");
    std::fs::write(&p, text).unwrap();
    let o = run(&["resolve", "--input", p.to_str().unwrap(), "--ring", "F", "--prime", "2", "--depth", "1", "--window", "2"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(json(&o)["error"], "budget");
}

#[test]
fn cube_bounds() {
    let v = json(&run(&["cube", "--input", &s2(), "--prime", "2", "--depth", "2", "--window", "2"]));
    assert_eq!(v["cube"]["bound"]["k"], serde_json::json!({"Finite": 7}));
    assert_eq!(v["violations"], 0);
    let v = json(&run(&["cube", "--input", &s2(), "--prime", "2", "--depth", "3", "--window", "1"]));
    assert_eq!(v["cube"]["bound"]["k"], serde_json::json!({"Finite": 9}));
}

#[test]
fn interchange_at_stage_zero() {
    let o = run(&["interchange", "--input", &s2(), "--prime", "2", "--depth", "0", "--window", "2", "--format", "markdown"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("exact isomorphism"));
}

#[test]
fn spectral_sequence_collapses() {
    let o = run(&["ss", "--input", &s2(), "--prime", "2", "--depth", "1", "--window", "2", "--format", "markdown"]);
    assert!(String::from_utf8_lossy(&o.stdout).contains("collapsed at E², concentrated in s=0"));
}

#[test]
fn reports_are_deterministic() {
    let args = ["resolve", "--input", &s2(), "--prime", "2", "--depth", "1", "--window", "2"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["ss", "--input", &s2(), "--prime", "2", "--depth", "1", "--window", "2"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn cache_cold_and_warm_agree() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("c");
    let c = cache.to_str().unwrap();
    let args = ["resolve", "--input", &s2(), "--prime", "2", "--depth", "1", "--window", "2", "--cache", c];
    let cold = run(&args);
    let entries: Vec<_> = std::fs::read_dir(&cache).unwrap().collect();
    assert_eq!(entries.len(), 1);
    let warm = run(&args);
    assert_eq!(cold.stdout, warm.stdout);

    // a tampered entry is ignored and rewritten
    let path = entries[0].as_ref().unwrap().path();
    let text = std::fs::read_to_string(&path).unwrap().replace("pass", "fail");
    std::fs::write(&path, text).unwrap();
    assert_eq!(run(&args).stdout, cold.stdout);

    // the environment variable wins over the flag
    let env_dir = dir.path().join("env");
    let o = Command::new(env!("CARGO_BIN_EXE_cobarlab")).args(args).env("COBARLAB_CACHE", &env_dir).output().unwrap();
    assert_eq!(o.stdout, cold.stdout);
    assert_eq!(std::fs::read_dir(&env_dir).unwrap().count(), 1);
}
