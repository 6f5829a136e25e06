// SPDX-License-Identifier: MIT

//! Exit-code and output contract of the installed binary.

use std::process::Command;

use selfeq::cli::{machine_json, run_command, Opts};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_selfeq"))
}

#[test]
fn machine_format_equals_the_library_serialization() {
    let out = bin()
        .args(["nse", "CP2", "--format", "machine"])
        .output()
        .expect("the binary runs");
    assert_eq!(out.status.code(), Some(0));
    let report = run_command("nse", &["CP2".to_string()], &Opts::default()).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), machine_json(&report));
}

#[test]
fn human_format_opens_with_the_command_and_input() {
    let out = bin().args(["homology", "CP2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("homology CP2\n"), "got: {text}");
    assert!(text.ends_with('\n'));
}

#[test]
fn flags_reach_the_engine() {
    let out = bin()
        .args(["homology", "S4", "--max-degree", "8", "--seed", "9", "--format", "machine"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 9);
    assert_eq!(v["payload"]["max_degree"], 8);
}

#[test]
fn exit_codes_follow_the_documented_contract() {
    // 0: success.
    assert_eq!(bin().args(["pd", "CP2"]).output().unwrap().status.code(), Some(0));

    // 1: input errors (unknown example, unknown command, bad format flag).
    let unknown = bin().args(["nse", "NONSUCH"]).output().unwrap();
    assert_eq!(unknown.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("unknown example"));
    assert_eq!(bin().args(["frobnicate", "CP2"]).output().unwrap().status.code(), Some(1));
    assert_eq!(
        bin().args(["nse", "CP2", "--format", "yaml"]).output().unwrap().status.code(),
        Some(1)
    );

    // 2: refused computations.
    let refused = bin().args(["nse", "wedge(S3,S3)"]).output().unwrap();
    assert_eq!(refused.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&refused.stderr).contains("same-degree generators"));
}
