//! Shared helpers for driving the `repspace` binary from tests.

use std::path::{Path, PathBuf};
use std::process::Command;

use serde::Deserialize;

#[derive(Debug, Deserialize)]
pub struct Case {
    pub name: String,
    pub exit: i32,
    pub args: Vec<String>,
}

/// The workspace root, where the commands' relative data paths resolve.
pub fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().unwrap()
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn cases() -> Vec<Case> {
    let text = std::fs::read_to_string(golden_dir().join("cases.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

/// Runs the binary from the workspace root; returns the exit code and stdout.
pub fn run<S: AsRef<str>>(args: &[S]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_repspace"))
        .args(args.iter().map(AsRef::as_ref))
        .current_dir(root())
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf-8 report"))
}

/// Runs a case twice and compares both runs with its golden file. With
/// `UPDATE_GOLDEN=1` the golden file is rewritten instead.
pub fn check_case(case: &Case) -> Result<(), String> {
    let (code, first) = run(&case.args);
    let (_, second) = run(&case.args);
    if code != case.exit {
        return Err(format!("{}: exit {code}, expected {}", case.name, case.exit));
    }
    if first != second {
        return Err(format!("{}: reruns differ", case.name));
    }
    let path = golden_dir().join(format!("{}.json", case.name));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &first).unwrap();
        return Ok(());
    }
    let golden = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if golden != first {
        return Err(format!("{}: report differs from {}", case.name, path.display()));
    }
    Ok(())
}
