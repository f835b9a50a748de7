#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

pub fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn data(rel: &str) -> String {
    root().join("data").join(rel).to_string_lossy().into_owned()
}

pub fn etalift(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_etalift")).args(args).current_dir(root()).output().expect("spawn etalift")
}

/// Runs with `--no-timing` and parses the certificate; panics on a usage error.
pub fn certificate(args: &[&str]) -> (i32, Value, Vec<u8>) {
    let mut full = vec!["--no-timing"];
    full.extend_from_slice(args);
    let out = etalift(&full);
    let code = out.status.code().expect("exit code");
    assert_ne!(code, 2, "usage error for {args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)));
    (code, v, out.stdout)
}

pub fn check<'a>(cert: &'a Value, name: &str) -> Option<&'a Value> {
    cert["checks"].as_array()?.iter().find(|c| c["name"] == name)
}

pub fn check_passed(cert: &Value, name: &str) -> bool {
    check(cert, name).is_some_and(|c| c["passed"] == true)
}
