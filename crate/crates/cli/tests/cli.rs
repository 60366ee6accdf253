use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn adlv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adlv"))
        .args(args)
        .env_remove("ADLV_CACHE")
        .output()
        .unwrap()
}

fn adlv_cached(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_adlv"))
        .args(args)
        .env("ADLV_CACHE", cache)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn rank_one_dimensions() {
    let v = json(&adlv(&["dim", "--type", "A1", "--w", "w[0 1 0]", "--b", "unit", "--format", "json"]));
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["dim"], 2);
    assert_eq!(v["virtual_dim"], 2);
    let v = json(&adlv(&["dim", "--type", "A1", "--w", "w[0 1 0]", "--b", "t[2]", "--format", "json"]));
    assert_eq!(v["dim"], 1);
    let v = json(&adlv(&["dim", "--type", "A1", "--w", "w[1]", "--b", "unit", "--format", "json"]));
    assert_eq!(v["dim"], 1);
    let v = json(&adlv(&["grassmannian", "--type", "A1", "--mu", "2", "--b", "unit", "--format", "json"]));
    assert_eq!(v["dim"], 1);
    assert_eq!(v["closed_form"], 1);
}

#[test]
fn kappa_mismatch_is_reported_not_fatal() {
    let v = json(&adlv(&["dim", "--type", "A1", "--w", "s1", "--b", "t[1]*s1", "--format", "json"]));
    assert_eq!(v["dim"], "EMPTY");
    assert_eq!(v["kappa_match"], false);
}

#[test]
fn descriptor_b_matches_representative() {
    let a = json(&adlv(&["dim", "--type", "A2", "--w", "w[0 1 2 1]", "--b", "t[1,0]*s1*s2", "--format", "json"]));
    let b = json(&adlv(&["dim", "--type", "A2", "--w", "w[0 1 2 1]", "--b", "nu=0,0;kappa=1", "--format", "json"]));
    assert_eq!(a["dim"], b["dim"]);
    assert_eq!(a["classes"], b["classes"]);
}

#[test]
fn classify_listing() {
    let o = adlv(&["classify", "--type", "A2", "--max-length", "0", "--format", "tsv"]);
    assert_eq!(stdout(&o).lines().count(), 4);
    let v = json(&adlv(&["classify", "--type", "A1", "--max-length", "2", "--format", "json"]));
    let reps: Vec<&str> = v["classes"].as_array().unwrap().iter().map(|c| c["rep"].as_str().unwrap()).collect();
    assert_eq!(reps, ["e", "t[1]*s1", "t[-1]", "t[-2]"]);
}

#[test]
fn exit_codes() {
    assert_eq!(adlv(&["classify", "--type", "Q7"]).status.code(), Some(2));
    assert_eq!(adlv(&["dim", "--type", "A1", "--w", "s9", "--b", "unit"]).status.code(), Some(2));
    assert_eq!(adlv(&["classify", "--type", "A2", "--delta", "1,1"]).status.code(), Some(2));
    assert_eq!(adlv(&["sweep", "--check", "nonsense"]).status.code(), Some(2));
    assert_eq!(adlv(&["frobnicate"]).status.code(), Some(2));
    // Point counts with negative coefficients exist in PGL_3.
    let o = adlv(&["sweep", "--type", "A2", "--check", "point-count", "--max-length", "6"]);
    assert_eq!(o.status.code(), Some(4));
    let o = adlv(&["reduce", "--type", "C2", "--w", "w[0 1 2 1 0 1 2 1]", "--budget", "1"]);
    assert_eq!(o.status.code(), Some(5), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn sweeps_are_clean() {
    for args in [
        ["sweep", "--type", "A2", "--max-length", "6", "--check", "ghkr"],
        ["sweep", "--type", "A1", "--max-length", "10", "--check", "path-independence"],
        ["sweep", "--type", "C2", "--max-length", "5", "--check", "upper-bound"],
    ] {
        let o = adlv(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        assert!(stdout(&o).contains("violations=0"));
    }
    let v = json(&adlv(&["sweep", "--type", "A1", "--check", "mazur", "--format", "json"]));
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["violations"], 0);
}

#[test]
fn empty_sweep_exits_cleanly() {
    let o = adlv(&["sweep", "--type", "A1", "--max-length", "0", "--check", "ghkr"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("rows=0"));
}

#[test]
fn reduce_emits_a_trace() {
    let o = adlv(&["reduce", "--type", "A2", "--w", "w[1 0 1]", "--emit-trace"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.lines().any(|l| l.starts_with("STEP ") && l.ends_with("dl=-2")), "{out}");
}

#[test]
fn warm_cache_gives_identical_output() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("tables.jsonl");
    let args = ["sweep", "--type", "A2", "--max-length", "5", "--check", "tables"];
    let cold = adlv_cached(&cache, &args);
    assert_eq!(cold.status.code(), Some(0));
    let text = std::fs::read_to_string(&cache).unwrap();
    let header: Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(header["type"], "A2");
    assert_eq!(header["format_version"], 1);
    let records = text.lines().count() - 1;
    assert!(records > 0);

    let warm = adlv_cached(&cache, &args);
    assert_eq!(warm.stdout, cold.stdout);
    assert_eq!(std::fs::read_to_string(&cache).unwrap().lines().count() - 1, records);

    // The --cache flag and the environment variable name the same file.
    let flag = Command::new(env!("CARGO_BIN_EXE_adlv"))
        .args(args)
        .args(["--cache", cache.to_str().unwrap()])
        .env_remove("ADLV_CACHE")
        .output()
        .unwrap();
    assert_eq!(flag.stdout, cold.stdout);
}

#[test]
fn foreign_cache_is_left_alone() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("tables.jsonl");
    adlv_cached(&cache, &["classpoly", "--type", "A1", "--w", "w[0 1 0]"]);
    let before = std::fs::read_to_string(&cache).unwrap();
    let o = adlv_cached(&cache, &["classpoly", "--type", "A2", "--w", "w[0 1 0]"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("ignoring cache"));
    assert_eq!(std::fs::read_to_string(&cache).unwrap(), before);
}

#[test]
fn corrupt_cache_is_an_integrity_failure() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("tables.jsonl");
    adlv_cached(&cache, &["classpoly", "--type", "A1", "--w", "w[0 1 0 1]"]);
    let mut lines: Vec<String> = std::fs::read_to_string(&cache).unwrap().lines().map(String::from).collect();
    lines[1] = "{\"element\": 3}".into();
    std::fs::write(&cache, lines.join("\n") + "\n").unwrap();
    let o = adlv_cached(&cache, &["classpoly", "--type", "A1", "--w", "s1"]);
    assert_eq!(o.status.code(), Some(3));

    // A table whose constant terms no longer sum to one is rejected.
    std::fs::remove_file(&cache).unwrap();
    adlv_cached(&cache, &["classpoly", "--type", "A1", "--w", "w[0 1 0]"]);
    let text = std::fs::read_to_string(&cache).unwrap();
    assert!(text.contains("\"xi_coeffs\":[1]"));
    std::fs::write(&cache, text.replace("\"xi_coeffs\":[1]", "\"xi_coeffs\":[2]")).unwrap();
    let o = adlv_cached(&cache, &["classpoly", "--type", "A1", "--w", "s1"]);
    assert_eq!(o.status.code(), Some(3));
}
