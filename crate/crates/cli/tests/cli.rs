use std::path::PathBuf;
use std::process::{Command, Output};

use graphjac::linalg::GroupSummary;
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graphjac"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(name: &str) -> String {
    data(name).to_str().unwrap().to_string()
}

#[test]
fn groups_of_triangle() {
    let o = run(&["groups", &path("triangle.json")]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("J(Γ) ≅ Z/3"));

    let o = run(&["groups", &path("triangle.json"), "--modulus", "w1,w2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("J_m(Γ) ≅ Z\n"));
}

#[test]
fn embedded_modulus_is_used() {
    let a = run(&["groups", &path("figure1.json")]);
    let b = run(&["groups", &path("triangle.json"), "--modulus", "w1,w2"]);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn exit_codes() {
    let o = run(&["groups", &path("disconnected.json")]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not connected"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"vertices\": [").unwrap();
    let o = run(&["groups", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["verify", "--suite", "nope", &path("triangle.json")]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["random", "--max-v", "9", "--suite", "abel"]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["groups", &path("triangle.json"), "--modulus", "zz"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_suites_on_examples() {
    let o = run(&["verify", "--suite", "abel", &path("triangle.json")]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("abel: pass"));

    let o = run(&[
        "verify",
        "--suite",
        "ext-duality",
        &path("triangle.json"),
        "--modulus",
        "w1,w2",
        "--json",
    ]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let checks = v["verdicts"][0]["checks"]["checks"].as_array().unwrap();
    let sign = checks.iter().find(|c| c["name"] == "ext.sign").unwrap();
    assert_eq!(sign["detail"], "1");

    let o = run(&[
        "verify",
        "--suite",
        "functoriality",
        &path("cover.json"),
        &path("map.json"),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&[
        "verify",
        "--suite",
        "functoriality",
        &path("banana.json"),
        &path("collapse.json"),
    ]);
    assert!(o.status.success());

    let o = run(&["verify", "--suite", "functoriality", &path("cover.json")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn random_runs() {
    let o = run(&[
        "random", "--seed", "1", "--max-v", "6", "--count", "100", "--suite", "abel-m",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("100/100 pass"));

    let o = run(&["random", "--count", "0", "--suite", "abel"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("0/0 pass"));
}

#[test]
fn json_is_byte_identical() {
    let args = [
        "random", "--seed", "9", "--count", "25", "--suite", "diagrams", "--json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn replay_reproduces_instance_report() {
    let o = run(&[
        "random", "--seed", "4", "--count", "5", "--suite", "sheaf-m", "--json",
    ]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let dir = tempfile::tempdir().unwrap();
    for verdict in v["verdicts"].as_array().unwrap() {
        let file = dir.path().join("instance.json");
        std::fs::write(&file, verdict["instance"]["graph"].to_string()).unwrap();
        let r = run(&[
            "verify",
            "--suite",
            "sheaf-m",
            file.to_str().unwrap(),
            "--json",
        ]);
        let replay: Value = serde_json::from_str(&stdout(&r)).unwrap();
        assert_eq!(replay["verdicts"][0]["checks"], verdict["checks"]);
    }
}

#[test]
fn group_strings_round_trip() {
    let o = run(&["groups", &path("figure1.json"), "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let groups = v["groups"].as_array().unwrap();
    assert_eq!(groups.len(), 8);
    for g in groups {
        let s: GroupSummary = g["group"].as_str().unwrap().parse().unwrap();
        assert_eq!(s.free_rank as u64, g["free_rank"].as_u64().unwrap());
        let factors: Vec<String> = s.invariant_factors.iter().map(|d| d.to_string()).collect();
        let listed: Vec<String> = g["invariant_factors"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.as_str().unwrap().to_string())
            .collect();
        assert_eq!(factors, listed);
        assert_eq!(s.to_string(), g["group"].as_str().unwrap());
    }
}
