use std::path::PathBuf;
use std::process::{Command, Output};

fn ringunits(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ringunits"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ringunits-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn realize_then_verify() {
    let out = ringunits(&["realize", "Q8", "--char", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let cert = json(&out);
    assert_eq!(cert["quotient_size"], 16);
    assert_eq!(cert["method"], "star");

    let path = scratch("q8.json");
    std::fs::write(&path, &out.stdout).unwrap();
    let out = ringunits(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    let mut broken = cert.clone();
    broken["ideal_basis"].as_array_mut().unwrap().remove(0);
    std::fs::write(&path, serde_json::to_string(&broken).unwrap()).unwrap();
    assert_eq!(ringunits(&["verify", path.to_str().unwrap()]).status.code(), Some(1));

    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(ringunits(&["verify", path.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn screen_exit_codes() {
    let out = ringunits(&["screen", "M16"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["scope"], "any finite ring");

    let out = ringunits(&["screen", "C16xC2"]);
    assert_eq!(out.status.code(), Some(2));
    let allowed = json(&out)["allowed_characteristics"].clone();
    assert!(allowed.as_array().unwrap().contains(&serde_json::json!(6)));

    assert_eq!(ringunits(&["screen", "D8"]).status.code(), Some(0));
}

#[test]
fn realize_refutes_and_searches() {
    let out = ringunits(&["realize", "C16xC2", "--char", "2"]);
    assert_eq!(out.status.code(), Some(1));

    let out = ringunits(&["realize", "C8xC2", "--char", "2", "--workers", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["method"], "search");

    let out = ringunits(&["realize", "Q8", "--char", "4", "--method", "search"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["char"], 4);
}

#[test]
fn output_file_and_json_flag() {
    let path = scratch("d8.json");
    let out = ringunits(&["realize", "D8", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let _: serde_json::Value = serde_json::from_str(&text).unwrap();

    let out = ringunits(&["unitgroup", "C8", "--char", "2", "--ideal", "1+a+a^4+a^5", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["order"], 16);
    assert_eq!(v["abelian_invariants"], serde_json::json!([8, 2]));

    let out = ringunits(&["unitgroup", "C2xC2", "--cayley"]);
    // Z_2[C2xC2] has 8 units
    assert_eq!(json(&out)["table"].as_array().unwrap().len(), 64);
}

#[test]
fn usage_errors_exit_3() {
    assert_eq!(ringunits(&["realize", "C6"]).status.code(), Some(3));
    assert_eq!(ringunits(&["info", "Q8", "--bogus"]).status.code(), Some(3));
    assert_eq!(ringunits(&["realize", "Q8", "--char", "3"]).status.code(), Some(3));
    assert_eq!(ringunits(&["unitgroup", "C4", "--ideal", "1+b"]).status.code(), Some(3));
    assert_eq!(ringunits(&[]).status.code(), Some(3));
}

#[test]
fn fixtures_report_mismatches() {
    let out = ringunits(&["fixtures", "--json"]);
    // two of the printed ideals do not give the stated unit group
    assert_eq!(out.status.code(), Some(4));
    let v = json(&out);
    let verified: Vec<bool> = v.as_array().unwrap().iter().map(|r| r["verified"].as_bool().unwrap()).collect();
    assert_eq!(verified, [true, false, true, false, true, true]);
}
