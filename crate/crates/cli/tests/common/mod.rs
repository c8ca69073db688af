#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn framelab(args: &[&str], cwd: &Path, env: &[(&str, &str)]) -> Outcome {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_framelab"));
    cmd.args(args).current_dir(cwd).env_remove("FRAMELAB_TOL_REL");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Outcome {
        stdout: String::from_utf8(out.stdout).expect("UTF-8 stdout"),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
        code: out.status.code().expect("exit code"),
    }
}

/// `(golden name, arguments, expected exit code)`.
pub const GOLDEN: &[(&str, &[&str], i32)] = &[
    ("analyze-fix-a", &["analyze", "FIX-A", "--bounds", "0.5", "1"], 0),
    ("analyze-fix-a-u", &["analyze", "FIX-A", "--k", "u"], 0),
    ("analyze-fix-a-overclaim", &["analyze", "FIX-A", "--bounds", "0.6", "1"], 1),
    ("analyze-fix-r03", &["analyze", "FIX-R03", "--k", "k_lowrank"], 0),
    ("dual-q-fix-i", &["dual", "FIX-I"], 0),
    ("dual-q-fix-a", &["dual", "FIX-A"], 1),
    ("dual-q-fix-r05", &["dual", "FIX-R05"], 0),
    ("dual-canonical-fix-r05", &["dual", "FIX-R05", "--method", "canonical"], 0),
    ("dual-canonical-fix-a", &["dual", "FIX-A", "--method", "canonical"], 0),
    ("identities-fix-i", &["identities", "FIX-I", "--parsevalize"], 0),
    ("identities-fix-r05", &["identities", "FIX-R05"], 0),
    ("identities-fix-r12", &["identities", "FIX-R12", "--parsevalize"], 0),
    ("perturb-fix-i-sqsum", &["perturb", "FIX-I", "--scale", "1.1", "--params", "R=0.01"], 0),
    ("perturb-fix-i-falsified", &["perturb", "FIX-I", "--scale", "1.1", "--params", "R=0.005"], 0),
    ("perturb-fix-i-required", &["perturb", "FIX-I", "--scale", "1.1", "--params", "R=0.005", "--require-hypothesis"], 1),
    ("perturb-fix-i-cp2", &["perturb", "FIX-I", "--scale", "1.1", "--mode", "C-p2-normsum", "--params", "R=0.3"], 0),
    ("gen-fixture-a", &["gen", "--fixture", "FIX-A", "--out", "out"], 0),
    ("gen-fixture-r20", &["gen", "--fixture", "FIX-R20", "--out", "out"], 0),
    ("gen-suite-douglas", &["gen", "--suite", "douglas", "--out", "out"], 0),
    ("gen-spec", &["gen", "--spec", "4", "2x2", "1", "--seed", "3", "--field", "complex", "--out", "out"], 0),
];

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn golden_path(name: &str) -> PathBuf {
    golden_dir().join(format!("{name}.json"))
}

/// Runs one golden case in a scratch directory; returns the outcome.
pub fn run_golden(args: &[&str]) -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    framelab(args, dir.path(), &[])
}

pub fn verdict_of(json: &str) -> (String, i64) {
    let v: serde_json::Value = serde_json::from_str(json).expect("report is JSON");
    (v["verdict"].as_str().unwrap().to_string(), v["exit_code"].as_i64().unwrap())
}
