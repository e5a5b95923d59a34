use std::path::PathBuf;
use std::process::Command;

use eqk::chars::CentralElement;
use eqk::galg::{reduced_norm, GAMatrix};
use eqk::groups::catalog;
use eqk::reps::Wedderburn;
use serde_json::{json, Value};

fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_eqk")).args(args).output().expect("binary runs");
    let report = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().expect("exit code"), report)
}

fn write(name: &str, v: &Value) -> PathBuf {
    let path = std::env::temp_dir().join(format!("eqk-cli-{}-{name}.json", std::process::id()));
    std::fs::write(&path, v.to_string()).unwrap();
    path
}

fn statuses(report: &Value) -> Vec<String> {
    report["checks"].as_array().unwrap().iter().map(|c| c["status"].as_str().unwrap().to_string()).collect()
}

fn int(n: i64) -> Value {
    json!({ "coeffs": [n.to_string()], "conductor": 1 })
}

/// d × d diagonal matrix with `scale` at the identity element.
fn scalar_matrix(d: usize, scale: i64) -> Value {
    let entries: Vec<Vec<Value>> =
        (0..d).map(|i| (0..d).map(|j| if i == j { json!({ "0": int(scale) }) } else { json!({}) }).collect()).collect();
    json!({ "rows": d, "cols": d, "entries": entries })
}

#[test]
fn nrd_matches_library() {
    let phi = json!({ "rows": 2, "cols": 2, "entries": [[{ "0": int(1), "1": int(2) }, { "3": int(-1) }], [{}, { "0": int(3), "4": int(1) }]] });
    let path = write("nrd", &json!({ "group": { "catalog": "s3" }, "phi": phi }));
    let (code, report) = run(&["nrd", "--complex", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let g = catalog("s3").unwrap();
    let w = Wedderburn::of(&g).unwrap();
    let m = GAMatrix::from_json(&g, &phi).unwrap();
    assert_eq!(report["nrd"], reduced_norm(&w, &m).unwrap().to_json());
    let (code, report) = run(&["wedge", "--complex", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(report["wedge"].is_object() || report["wedge"].is_array());
}

#[test]
fn primitive_basis_exit_codes() {
    let unit = write("unit", &json!({ "group": { "catalog": "s3" }, "phi": scalar_matrix(2, 1), "primes": [5, 7] }));
    let (code, report) = run(&["check", "primitive", "--complex", unit.to_str().unwrap(), "--p", "5,7"]);
    assert_eq!(code, 0);
    assert_eq!(statuses(&report), ["pass", "pass"]);
    let scaled = write("scaled", &json!({ "group": { "catalog": "s3" }, "phi": scalar_matrix(2, 5), "primes": [5, 7] }));
    let (code, report) = run(&["check", "primitive", "--complex", scaled.to_str().unwrap(), "--p", "5,7"]);
    assert_eq!(code, 2);
    assert_eq!(statuses(&report), ["fail", "pass"]);
}

#[test]
fn hsm_on_q8() {
    let g = catalog("q8").unwrap();
    let table = eqk::chars::CharacterTable::of(&g).unwrap();
    let sym = (0..table.len()).find(|&i| table.get(i).frobenius_schur() == -1).unwrap();
    let central = |x: i64| {
        let mut c = vec![json!("1"); table.len()];
        c[sym] = json!(x.to_string());
        json!({ "group": { "catalog": "q8" }, "central": c })
    };
    let (code, report) = run(&["check", "hsm", "--complex", write("hsm-pos", &central(3)).to_str().unwrap()]);
    assert_eq!((code, statuses(&report)), (0, vec!["pass".to_string()]));
    let (code, _) = run(&["check", "hsm", "--complex", write("hsm-neg", &central(-3)).to_str().unwrap()]);
    assert_eq!(code, 2);
}

#[test]
fn kerdelta_good_and_bad_primes() {
    let g = catalog("s3").unwrap();
    let table = eqk::chars::CharacterTable::of(&g).unwrap();
    let two = CentralElement::constant(&table, eqk::arith::CycloNumber::from_int(2));
    let path = write("kerdelta", &json!({ "group": { "catalog": "s3" }, "central": vec![json!("2"); table.len()] }));
    let (code, report) = run(&["check", "kerdelta", "--complex", path.to_str().unwrap(), "--p", "5"]);
    assert_eq!(code, 0);
    assert_eq!(report["checks"][0]["witness"]["value"], two.to_json());
    // 3 divides |S3|
    let (code, report) = run(&["check", "kerdelta", "--complex", path.to_str().unwrap(), "--p", "3"]);
    assert_eq!(code, 1);
    assert!(report["error"].is_string());
}

#[test]
fn distribution_and_integrality_suites() {
    let tower = write("tower", &json!({ "conductors": [3, 9, 27] }));
    let (code, report) = run(&["verify", "distribution", "--tower", tower.to_str().unwrap(), "--T", "7"]);
    assert_eq!(code, 0);
    assert_eq!(statuses(&report), ["pass", "pass", "pass"]);
    let (code, report) = run(&["verify", "integrality"]);
    assert_eq!(code, 0);
    let st = statuses(&report);
    assert!(st.contains(&"pass".to_string()) && st.contains(&"skip".to_string()) && !st.contains(&"fail".to_string()));
    let (code, report) = run(&["verify", "integrality", "--conductor", "3,5", "--T", "2"]);
    assert_eq!((code, statuses(&report)), (0, vec!["skip".to_string(), "skip".to_string()]));
}

#[test]
fn derive_reports_divisibility() {
    // σ − 1 in Q[C_3] with trivial base
    let tower = write("derive", &json!({ "base": { "catalog": "c1" }, "p": 3, "values": [["-1", "1", "0"]] }));
    let (code, report) = run(&["derive", "--tower", tower.to_str().unwrap(), "--order", "1", "--gamma", "2"]);
    assert_eq!(code, 0, "{report}");
    assert_eq!(report["values"], json!([[int(1)]]));
    assert!(statuses(&report).iter().all(|s| s == "pass"));
    let (code, report) = run(&["derive", "--tower", tower.to_str().unwrap(), "--order", "2"]);
    assert_eq!(code, 2);
    assert_eq!(report["checks"][0]["witness"]["achieved"], json!(1));
    let (code, _) = run(&["derive", "--tower", tower.to_str().unwrap(), "--order", "1", "--gamma", "3"]);
    assert_eq!(code, 1);
}

#[test]
fn out_flag_and_bad_input() {
    let target = std::env::temp_dir().join(format!("eqk-cli-{}-out.json", std::process::id()));
    let out = Command::new(env!("CARGO_BIN_EXE_eqk"))
        .args(["chartable", "--group", "d4", "--out", target.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read(&target).unwrap();
    let (_, report) = run(&["chartable", "--group", "d4"]);
    assert_eq!(serde_json::from_slice::<Value>(&written).unwrap(), report);
    let broken = std::env::temp_dir().join(format!("eqk-cli-{}-broken.json", std::process::id()));
    std::fs::write(&broken, "{ not json").unwrap();
    let (code, report) = run(&["nrd", "--complex", broken.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(report["error"].is_string());
}
