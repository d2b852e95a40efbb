use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn tilecoh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tilecoh")).args(args).env_remove("TILECOH_COLOR").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn exported_chair_reproduces_builtin() {
    let exported = tilecoh(&["export", "chair"]);
    assert!(exported.status.success());
    let path = scratch("chair.json", &stdout(&exported));
    let a: Value = serde_json::from_str(&stdout(&tilecoh(&["--format", "json", "builtin", "chair"]))).unwrap();
    let b: Value =
        serde_json::from_str(&stdout(&tilecoh(&["--format", "json", "complex", path.to_str().unwrap()]))).unwrap();
    assert_eq!(a["result"], b["result"]);
}

#[test]
fn json_is_deterministic_and_round_trips() {
    let args = ["--format", "json", "builtin", "pinwheel", "--rot"];
    let (x, y) = (stdout(&tilecoh(&args)), stdout(&tilecoh(&args)));
    assert_eq!(x, y);
    let v: Value = serde_json::from_str(&x).unwrap();
    for key in ["result", "rotation"] {
        let typed: tilecoh::datasets::RunOutput = serde_json::from_value(v[key].clone()).unwrap();
        assert_eq!(serde_json::to_value(&typed).unwrap(), v[key], "{key}");
    }
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(tilecoh(&["builtin", "no-such-tiling"]).status.code(), Some(2));
    let o = tilecoh(&["onedim", "a->b,b->a"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not primitive"));
    let o = tilecoh(&["onedim", "a->ab\nb=>ba"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2, column 2"));
    assert_eq!(tilecoh(&["rot"]).status.code(), Some(2));
    assert_eq!(tilecoh(&["rot", "--variant", "4,2"]).status.code(), Some(2));
    assert_eq!(tilecoh(&["builtin", "fibonacci", "--rot"]).status.code(), Some(2));
}

#[test]
fn invalid_complex_names_cell_and_degree() {
    let body = r#"{
        "cells": [
            {"id": "v", "dim": 0, "stratum": 0},
            {"id": "w", "dim": 0, "stratum": 0},
            {"id": "e", "dim": 1, "stratum": 0},
            {"id": "f", "dim": 2, "stratum": 0}
        ],
        "boundary": {"1": [["e", "v", -1], ["e", "w", 1]], "2": [["f", "e", 1]]},
        "endo": {"0": [["v", "v", 1], ["w", "w", 1]], "1": [["e", "e", 1]], "2": [["f", "f", 1]]}
    }"#;
    let path = scratch("bad.json", body);
    let o = tilecoh(&["complex", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("degree 2") && err.contains("`f`"), "{err}");
}

#[test]
fn stray_resolution_is_rejected() {
    let body = r#"{
        "cells": [{"id": "v", "dim": 0, "stratum": 0}],
        "boundary": {},
        "endo": {"0": [["v", "v", 1]]},
        "extensions": [{"degree": 0, "resolution": {"kind": "split"}}]
    }"#;
    let path = scratch("stray.json", body);
    let o = tilecoh(&["complex", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no extension problem"));
}

#[test]
fn d2_flag_overrides_input() {
    let input = r#"{"h_omega0": ["Z", "Z", "Z^2 + Z/2"], "symmetric_points": [{"order": 2, "count": 2}]}"#;
    let path = scratch("rot.json", input);
    let plain = tilecoh(&["--format", "json", "rot", path.to_str().unwrap()]);
    assert!(plain.status.success());
    let v: Value = serde_json::from_str(&stdout(&plain)).unwrap();
    assert!(!v["warnings"].as_array().unwrap().is_empty());
    let fixed = tilecoh(&["--format", "json", "rot", path.to_str().unwrap(), "--d2", "target_order=2"]);
    assert!(fixed.status.success());
    assert_ne!(stdout(&plain), stdout(&fixed));
    assert_eq!(tilecoh(&["rot", path.to_str().unwrap(), "--d2", "order=2"]).status.code(), Some(2));
}

#[test]
fn color_only_when_asked() {
    let plain = stdout(&tilecoh(&["builtin", "fibonacci"]));
    assert!(!plain.contains('\x1b'));
    let o = Command::new(env!("CARGO_BIN_EXE_tilecoh"))
        .args(["builtin", "fibonacci"])
        .env("TILECOH_COLOR", "1")
        .output()
        .unwrap();
    let colored = String::from_utf8(o.stdout).unwrap();
    assert!(colored.contains('\x1b'));
}

#[test]
fn list_names_every_dataset() {
    let out = stdout(&tilecoh(&["list"]));
    for name in tilecoh::datasets::NAMES {
        assert!(out.lines().any(|l| l == name), "{name}");
    }
}
