#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

pub fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().unwrap()
}

/// The valid corpus scenarios, sorted by name.
pub fn corpus() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(repo_root().join("corpus"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    files.sort();
    files
}

/// `(file, command, exit code)` for every planted failure.
pub fn planted_failures() -> Vec<(PathBuf, String, i32)> {
    let dir = repo_root().join("corpus/failures");
    let manifest: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("expected.json")).unwrap()).unwrap();
    let mut out: Vec<_> = manifest
        .as_object()
        .unwrap()
        .iter()
        .map(|(file, v)| {
            (dir.join(file), v["command"].as_str().unwrap().to_string(), v["exit_code"].as_i64().unwrap() as i32)
        })
        .collect();
    out.sort();
    out
}

/// Validator for `schema/<name>` with the sibling schemas registered.
pub fn validator(name: &str) -> jsonschema::Validator {
    let dir = repo_root().join("schema");
    let load = |f: &str| -> Value { serde_json::from_str(&std::fs::read_to_string(dir.join(f)).unwrap()).unwrap() };
    let mut options = jsonschema::options();
    for entry in std::fs::read_dir(&dir).unwrap() {
        let file = entry.unwrap().file_name().into_string().unwrap();
        let doc = load(&file);
        let id = doc["$id"].as_str().unwrap().to_string();
        options = options.with_resource(id, jsonschema::Resource::from_contents(doc).unwrap());
    }
    options.build(&load(name)).unwrap()
}

pub fn assert_valid(validator: &jsonschema::Validator, doc: &Value, what: &str) {
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{what}: {errors:?}");
}

pub fn run_bin(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fio-nuclear"));
    cmd.args(args);
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().unwrap()
}
