//! End-to-end runs of the `sutured-at` binary.

use std::path::PathBuf;
use std::process::Command;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_sutured-at")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn json(args: &[&str]) -> (i32, serde_json::Value) {
    let mut full = vec!["--output", "json"];
    full.extend_from_slice(args);
    let (code, out, _) = run(&full);
    (code, serde_json::from_str(&out).unwrap())
}

#[test]
fn giroux_at_report() {
    let (code, v) = json(&["at", &fixture("giroux_complex.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["value"]["finite"], 2);
    assert_eq!(v["provenance"], "fixture");
    assert_eq!(v["witness"].as_array().unwrap().len(), 3);
}

#[test]
fn output_is_deterministic() {
    for args in [["at", "giroux_complex.json"], ["disks", "giroux_complex.json"], ["disks", "fig1_overtwisted.json"]] {
        let f = fixture(args[1]);
        let a = run(&["--output", "json", args[0], &f]);
        let b = run(&["--output", "json", args[0], &f]);
        assert_eq!(a, b);
        assert_eq!(run(&[args[0], &f]), run(&[args[0], &f]));
    }
}

#[test]
fn zero_differential_is_infinite() {
    let (code, v) = json(&["at", &fixture("zero_diff.json"), "--exact"]);
    assert_eq!(code, 0);
    assert_eq!(v["value"], "infinite");
}

#[test]
fn broken_diagram_fails_validation() {
    let dir = std::env::temp_dir().join(format!("sutured-at-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let text = std::fs::read_to_string(fixture("fig1_overtwisted.json")).unwrap();
    let broken = dir.join("broken.json");
    std::fs::write(&broken, text.replace(r#""NE": "L", "NW": "A""#, r#""NE": "A", "NW": "L""#)).unwrap();
    let (code, out, _) = run(&["validate", broken.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("invalid"));
    let garbled = dir.join("garbled.json");
    std::fs::write(&garbled, "{\n  \"alpha\": [\n}").unwrap();
    let (code, _, err) = run(&["at", garbled.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(err.contains("line 3"), "{err}");
    let (code, _, _) = run(&["validate", dir.join("missing.json").to_str().unwrap()]);
    assert_eq!(code, 1);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn text_disk_table_columns() {
    let (code, out, _) = run(&["disks", &fixture("fig1_overtwisted.json")]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    let header: Vec<&str> = lines.next().unwrap().split(" | ").map(str::trim).collect();
    assert_eq!(header, ["shape", "name", "2(n_x+n_y)", "|x|-|y|", "J+"]);
    lines.next();
    let row: Vec<&str> = lines.next().unwrap().split(" | ").map(str::trim).collect();
    assert_eq!(row, ["bigon", "xy", "1", "0", "0"]);
}

#[test]
fn generators_and_pages() {
    let (code, v) = json(&["generators", &fixture("giroux_complex.json")]);
    assert_eq!(code, 0);
    let gens = v["generators"].as_array().unwrap();
    assert_eq!(gens.len(), 14);
    assert!(gens.iter().any(|g| g["name"] == "(1,1,1,1,1)" && g["cycles"] == 5 && g["eh"] == true));
    let (code, v) = json(&["pages", &fixture("zero_diff.json"), "--pages", "1", "0"]);
    assert_eq!(code, 0);
    assert_eq!(v["pages"].as_array().unwrap().len(), 2);
}

#[test]
fn small_cap_without_exact_is_undetermined() {
    let (code, v) = json(&["at", &fixture("giroux_complex.json"), "--cap", "1"]);
    assert_eq!(code, 2);
    assert_eq!(v["value"]["undetermined"]["at_least"], 2);
    let (code, v) = json(&["at", &fixture("giroux_complex.json"), "--cap", "1", "--exact"]);
    assert_eq!(code, 0);
    assert_eq!(v["value"]["finite"], 2);
}

#[test]
fn glue_command() {
    let g = |f: &str| fixture(&format!("glue/{f}"));
    let (code, out, _) = run(&["glue", &g("sub.json"), &g("super.json"), &g("map.json")]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("holds"));
    let (code, v) = json(&["glue", &g("sub.json"), &g("double.json"), &g("map_bad_xprime.json")]);
    assert_eq!(code, 1);
    assert!(!v["chain_map"]["unmatched"].as_array().unwrap().is_empty());
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["at"]).0, 1);
    assert_eq!(run(&["frobnicate"]).0, 1);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn assemble_command() {
    let out = std::env::temp_dir().join(format!("sutured-at-pob-{}.json", std::process::id()));
    let (code, v) = json(&["assemble", &fixture("pob/annulus_twist_plus.json"), "--write", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["diagram"]["eh"], serde_json::json!(["p1"]));
    assert_eq!(v["nice"], true);
    let (code, v) = json(&["at", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["value"]["finite"], 0);
    std::fs::remove_file(&out).ok();
    let (code, _, err) = run(&["assemble", &fixture("fig1_overtwisted.json")]);
    assert_eq!(code, 1);
    assert!(err.contains("error"));
}
