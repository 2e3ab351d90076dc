#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

pub fn cxch() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_cxch"));
    c.env_remove("HEXCH_OUT_DIR");
    c
}

pub fn run(args: &[&str]) -> Output {
    cxch().args(args).output().expect("spawn cxch")
}

pub fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

/// Exit code and the parsed error record from stderr.
pub fn failure(out: &Output) -> (i32, Value) {
    let code = out.status.code().expect("exit code");
    let err: Value = serde_json::from_slice(&out.stderr)
        .unwrap_or_else(|_| panic!("stderr is not json: {}", String::from_utf8_lossy(&out.stderr)));
    (code, err)
}

pub fn schema_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.v1.schema.json"))
}

pub fn assert_valid(name: &str, instance: &Value) {
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(schema_path(name)).unwrap()).unwrap();
    let v = jsonschema::validator_for(&schema).expect("schema compiles");
    let errors: Vec<String> = v.iter_errors(instance).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{name}: {errors:#?}");
}
