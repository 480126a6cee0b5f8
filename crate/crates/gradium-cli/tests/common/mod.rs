#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

use jsonschema::{Draft, JSONSchema};
use serde_json::Value;

pub fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub struct Out {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Out {
    pub fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("not JSON ({e}): {}", self.stdout))
    }
}

/// Runs the binary from the workspace root.
pub fn gradium(args: &[&str]) -> Out {
    let out = Command::new(env!("CARGO_BIN_EXE_gradium"))
        .args(args)
        .current_dir(root())
        .output()
        .expect("binary runs");
    Out {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

pub fn schema() -> JSONSchema {
    let text = std::fs::read_to_string(root().join("schema/report.schema.json")).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    JSONSchema::options().with_draft(Draft::Draft202012).compile(&v).expect("schema compiles")
}

/// Panics with every violation when `doc` does not match the schema.
pub fn assert_valid(schema: &JSONSchema, doc: &Value) {
    if let Err(errs) = schema.validate(doc) {
        let msgs: Vec<String> = errs.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("report does not validate:\n{}\n{doc:#}", msgs.join("\n"));
    }
}

/// The report without its timing.
pub fn untimed(mut v: Value) -> Value {
    if let Some(o) = v.as_object_mut() {
        o.remove("elapsed_ms");
    }
    v
}
