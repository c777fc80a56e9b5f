use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crystal-forge"))
        .args(args)
        .env("CRYSTAL_FORGE_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = run(&all);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], "crystal-forge/1");
    v
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

#[test]
fn three_block_slopes_and_verdicts() {
    let v = json(&["slopes", "catalog:ex-1.4.6"]);
    assert_eq!(v["result"]["display"], "{0:3, 1/3:3, 2/3:3, 1:3}");
    let v = json(&["slopes", "catalog:ex-1.4.6-twisted"]);
    assert_eq!(v["result"]["display"], "{0:3, 1/2:6, 1:3}");
    assert_eq!(json(&["ordinary", "catalog:ex-1.4.6"])["result"]["ordinary"], true);
    assert_eq!(json(&["ordinary", "catalog:ex-1.4.6-twisted"])["result"]["ordinary"], false);
    assert_eq!(json(&["fshw", "catalog:ex-1.4.6"])["result"]["fshw"], 3);
    assert_eq!(json(&["fshw", "catalog:ex-1.4.6-twisted"])["result"]["fshw"], 3);
}

#[test]
fn adjoint_polygon_of_twisted_a2() {
    let v = json(&["slopes", "--adjoint", "--ascii", "catalog:ex-5.2.10"]);
    let slopes = v["result"]["slopes"].as_array().unwrap();
    let total: u64 = slopes.iter().map(|s| s["multiplicity"].as_u64().unwrap()).sum();
    assert_eq!(total, 8);
    assert!(v["result"]["ascii"].as_str().unwrap().contains('*'));
}

#[test]
fn decompose_with_parameter() {
    let v = json(&["decompose", "catalog:ex-5.2.8", "--l", "6"]);
    assert_eq!(v["result"]["positive_type"]["display"], "mu^10 + D_{1/2}^5");
    let v = json(&["decompose", "catalog:ex-5.2.8:6"]);
    assert_eq!(v["result"]["positive_type"]["display"], "mu^10 + D_{1/2}^5");
    let v = json(&["decompose", &data("a3_type.json")]);
    assert_eq!(v["result"]["positive_type"]["dimension"], 10);
    assert_eq!(v["result"]["duality_exponents"]["2"][0], 3);
}

#[test]
fn count_nu_values() {
    let v = json(&["count-nu", "4"]);
    assert_eq!(v["result"]["formula"], 5);
    assert_eq!(v["result"]["oracle"], 5);
    assert_eq!(json(&["count-nu", "catalog:ex-4.3.5-n:6"])["result"]["formula"], 22);
    assert_eq!(code(&["count-nu", "99"]), 4);
}

#[test]
fn matrices_and_crystals() {
    let v = json(&["slopes", &data("cycle.json")]);
    assert_eq!(v["result"]["display"], "{2/3:3}");
    let v = json(&["classify-cyclic", &data("cycle.json")]);
    assert_eq!(v["result"]["display"], "D_{2/3}");
    let v = json(&["classify-cyclic", &data("mixed_cycles.json")]);
    assert_eq!(v["result"]["display"], "D_{2,4} + D_{1/2}");
    let v = json(&["hodge", &data("mixed_cycles.json")]);
    assert_eq!(v["result"]["display"], "{0:3, 1:3}");
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["slopes", &data("unknown_field.json")]), 2);
    assert_eq!(code(&["slopes", "no/such/file.json"]), 2);
    assert_eq!(code(&["slopes", "catalog:ex-0"]), 2);
    assert_eq!(code(&["slopes", "--bogus", "catalog:ex-1.4.6"]), 2);
    assert_eq!(code(&["slopes", &data("low_precision.json")]), 3);
    assert_eq!(code(&["slopes", &data("empty_eta.json")]), 4);
    assert_eq!(code(&["weyl-scan", "E7"]), 4);
    let out = run(&["slopes", &data("low_precision.json")]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("m >= 4"));
}

#[test]
fn catalog_entries_verify() {
    let v = json(&["catalog", "list"]);
    let ids: Vec<String> = v["result"].as_array().unwrap().iter().map(|i| i["id"].as_str().unwrap().to_string()).collect();
    for id in &ids {
        let v = json(&["catalog", "show", id]);
        for c in v["result"]["checks"].as_array().unwrap() {
            assert!(c["pass"] == true || c["tag"] == "disputed", "{id}: {c}");
        }
    }
}

#[test]
fn root_commands() {
    let v = json(&["roots", "E6"]);
    assert_eq!(v["result"]["num_positive"], 36);
    assert_eq!(v["result"]["weyl_order"], 51840);
    assert_eq!(json(&["nilradical", "E6", "1", "6"])["result"]["dimension"], 8);
    assert_eq!(json(&["nilradical", "D5", "1", "4", "5"])["result"]["dimension"], 3);
    let v = json(&["weyl-scan", "D4", "--x", "3", "--y", "4"]);
    assert_eq!(v["result"]["pairs"][0]["max"], 3);
    assert_eq!(v["result"]["weyl_order"], 192);
}

#[test]
fn reports_are_deterministic_and_round_trip() {
    for args in [
        &["--json", "decompose", "catalog:ex-5.2.9-l3"][..],
        &["--json", "slopes", "catalog:ex-7.5-hb3"][..],
        &["--json", "fshw", "catalog:ex-9.8.7-d4:2"][..],
    ] {
        let a = run(args).stdout;
        let b = run(args).stdout;
        assert_eq!(a, b);
        let v: Value = serde_json::from_slice(&a).unwrap();
        let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(again, v);
    }
}

#[test]
fn thread_variable_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_crystal-forge"))
        .args(["weyl-scan", "A2"])
        .env("CRYSTAL_FORGE_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
