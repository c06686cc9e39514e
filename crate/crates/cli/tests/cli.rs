use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas")
}

struct Hf {
    cache: tempfile::TempDir,
}

impl Hf {
    fn new() -> Self {
        Hf { cache: tempfile::tempdir().unwrap() }
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_hf")).args(args).env("HF_CACHE_DIR", self.cache.path()).output().unwrap()
    }

    fn ok(&self, args: &[&str]) -> (String, Value) {
        let out = self.run(args);
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {stderr}");
        let text = String::from_utf8(out.stdout).unwrap();
        let json = serde_json::from_str(&text).unwrap();
        (text, json)
    }

    fn cache_files(&self) -> usize {
        std::fs::read_dir(self.cache.path()).map_or(0, |d| d.count())
    }
}

fn validate(schema: &str, instance: &Value) {
    let path = schema_dir().join(format!("{schema}.schema.json"));
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).unwrap();
    let msgs: Vec<String> = match compiled.validate(instance) {
        Ok(()) => return,
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    panic!("{} does not match {}: {msgs:?}", instance, path.display());
}

fn c(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn eval_square() {
    let hf = Hf::new();
    let (_, j) = hf.ok(&["eval", "--f", "z^2", "--z", "1+1i"]);
    validate("eval", &j);
    let (re, im) = c(&j["value"]);
    assert!(re.abs() < 1e-15 && (im - 2.0).abs() < 1e-15);
    let (re, im) = c(&j["derivative"]);
    assert!((re - 2.0).abs() < 1e-15 && (im - 2.0).abs() < 1e-15);
}

#[test]
fn eval_negative_point() {
    let hf = Hf::new();
    let (_, j) = hf.ok(&["eval", "--f", "exp(z)", "--z", "-1"]);
    let (re, im) = c(&j["value"]);
    assert!((re - (-1f64).exp()).abs() < 1e-15 && im == 0.0);
}

#[test]
fn sft_full_shift() {
    let hf = Hf::new();
    let (_, j) = hf.ok(&["entropy-sft", "--matrix", r#"{"n": 2, "rows": ["11", "11"]}"#]);
    validate("entropy_sft", &j);
    assert!((j["entropy"].as_f64().unwrap() - 2f64.ln()).abs() < 1e-12);
}

#[test]
fn estimate_doubling() {
    let hf = Hf::new();
    let (_, j) = hf.ok(&["estimate", "--f", "z^2", "--samples", "2048", "--n-max", "8", "--epsilon", "0.05"]);
    validate("estimate", &j);
}

#[test]
fn islands_square() {
    let hf = Hf::new();
    let args = ["islands", "--f", "z^2", "--source-center", "0", "--source-radius", "1", "--target-center", "0.25", "--target-radius", "0.05"];
    let (_, j) = hf.ok(&args);
    validate("islands", &j);
    assert_eq!(j["islands"].as_array().unwrap().len(), 2);
}

#[test]
fn digraph_and_horseshoe() {
    let hf = Hf::new();
    let (_, j) = hf.ok(&["digraph", "--f", "z^2", "--centers", "0.5;-0.5;0.5i", "--gamma", "0.05", "--delta", "0.1"]);
    validate("digraph", &j);
    let (_, j) = hf.ok(&["horseshoe", "--f", "sin(20000*z)", "--a", "0", "--delta", "0.5", "--depth", "1"]);
    validate("horseshoe", &j);
    assert_eq!(j["report"]["pass"], Value::Bool(true));
}

#[test]
fn polylike_quadratic() {
    let hf = Hf::new();
    let (_, j) = hf.ok(&["polylike", "--f", "z^2 - 0.1", "--v-radius", "2"]);
    validate("polylike", &j);
    assert_eq!(j["degree"], 2);
    assert!((j["certificate"]["bound"].as_f64().unwrap() - 2f64.ln()).abs() < 1e-12);
}

#[test]
fn certify_is_deterministic_and_cached() {
    let hf = Hf::new();
    let args = ["certify", "--f", "cos(z) + cos(i*z)", "--target", "2"];
    let (first, j) = hf.ok(&args);
    validate("certificate", &j);
    assert!((j["bound"].as_f64().unwrap() - 2f64.ln()).abs() < 1e-12);
    assert!(j.get("metadata").is_none());
    assert_eq!(hf.cache_files(), 1);
    let (second, _) = hf.ok(&args);
    assert_eq!(first, second);
    let fresh = Hf::new();
    let (uncached, _) = fresh.ok(&["certify", "--f", "cos(z) + cos(i*z)", "--target", "2", "--no-cache"]);
    assert_eq!(first, uncached);
    assert_eq!(fresh.cache_files(), 0);

    let (_, stamped) = hf.ok(&["certify", "--f", "cos(z) + cos(i*z)", "--target", "2", "--timestamp"]);
    validate("certificate", &stamped);
    assert_eq!(stamped["content_hash"], j["content_hash"]);
    assert!(stamped["metadata"]["issued_at"].is_string());
}

#[test]
fn corrupt_cache_is_recomputed() {
    let hf = Hf::new();
    let args = ["certify", "--f", "cos(z) + cos(i*z)", "--target", "2"];
    let (first, _) = hf.ok(&args);
    for e in std::fs::read_dir(hf.cache.path()).unwrap() {
        std::fs::write(e.unwrap().path(), b"garbage").unwrap();
    }
    let (again, _) = hf.ok(&args);
    assert_eq!(first, again);
}

#[test]
fn ladder_with_plot() {
    let hf = Hf::new();
    let dir = tempfile::tempdir().unwrap();
    let png = dir.path().join("ladder.png");
    let (_, j) = hf.ok(&["ladder", "--f", "z^4", "--targets", "2,4,8", "--plot", png.to_str().unwrap()]);
    validate("ladder", &j);
    let rungs = j["rungs"].as_array().unwrap();
    assert!((rungs[0]["result"]["Ok"]["bound"].as_f64().unwrap() - 2f64.ln()).abs() < 1e-12);
    assert!((rungs[1]["result"]["Ok"]["bound"].as_f64().unwrap() - 4f64.ln()).abs() < 1e-12);
    assert!(rungs[2]["result"]["Err"].is_object());
    assert!(!j["warnings"].as_array().unwrap().is_empty());
    assert!(std::fs::read(&png).unwrap().starts_with(b"\x89PNG"));
}

#[test]
fn render_is_thread_independent() {
    let hf = Hf::new();
    let dir = tempfile::tempdir().unwrap();
    let png = dir.path().join("r.png");
    let base = ["render", "--f", "z^2 - 1", "--width", "96", "--height", "64", "--iterations", "40"];
    let mut one = base.to_vec();
    one.extend(["--threads", "1", "--image", png.to_str().unwrap()]);
    let (_, a) = hf.ok(&one);
    validate("render", &a);
    let mut eight = base.to_vec();
    eight.extend(["--threads", "8"]);
    let (_, b) = hf.ok(&eight);
    assert_eq!(a["pixel_hash"], b["pixel_hash"]);
    assert!(std::fs::read(&png).unwrap().starts_with(b"\x89PNG"));
}

#[test]
fn out_file() {
    let hf = Hf::new();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("eval.json");
    let out = hf.run(&["eval", "--f", "z", "--z", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let j: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    validate("eval", &j);
}

#[test]
fn config_file_with_override() {
    let hf = Hf::new();
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "f = \"z^3\"\nz = \"2\"\n").unwrap();
    let (_, j) = hf.ok(&["eval", "--config", cfg.to_str().unwrap()]);
    assert_eq!(c(&j["value"]), (8.0, 0.0));
    let (_, j) = hf.ok(&["eval", "--config", cfg.to_str().unwrap(), "--z", "3"]);
    assert_eq!(c(&j["value"]), (27.0, 0.0));
}

#[test]
fn usage_errors_exit_2() {
    let hf = Hf::new();
    for args in [
        vec!["eval", "--f", "z^2"],
        vec!["eval", "--f", "z^", "--z", "1"],
        vec!["eval", "--f", "z", "--z", "1+"],
        vec!["frobnicate"],
        vec!["certify", "--f", "z^2", "--target", "1"],
        vec!["ladder", "--f", "z^2", "--targets", "4,2"],
        vec!["entropy-sft", "--matrix", r#"{"n": 2, "rows": ["1"]}"#],
        vec!["eval", "--f", "z", "--z", "1", "--config", "/nonexistent.toml"],
    ] {
        let out = hf.run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn domain_errors_exit_1() {
    let hf = Hf::new();
    let out = hf.run(&["polylike", "--f", "z + 10", "--v-radius", "2", "--seed", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    validate("error", &err);
    assert_eq!(err["stage"], "polylike");

    let out = hf.run(&["certify", "--f", "z^2", "--target", "3", "--route", "zeros"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    validate("error", &err);
}
