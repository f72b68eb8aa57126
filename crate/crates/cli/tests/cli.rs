use std::fs;
use std::process::{Command, Output};

fn urd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_urd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn spectrum_lists_nine_profiles_for_twelve() {
    let out = urd(&["spectrum", "--v", "12", "--json"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(value["count"], 9);
    assert_eq!(value["profiles"].as_array().unwrap().len(), 9);
}

#[test]
fn build_then_verify_then_tamper() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("urd36.json");
    let p = path.to_str().unwrap();
    let out = urd(&[
        "build", "--v", "36", "-r", "0", "-s", "24", "-t", "2", "--out", p,
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(urd(&["verify", p]).status.success());

    let text = fs::read_to_string(&path).unwrap();
    let at = text.find("\"blocks\":[[").unwrap() + "\"blocks\":[[".len();
    let end = at + text[at..].find(',').unwrap();
    let first: u32 = text[at..end].parse().unwrap();
    let mut tampered = text.clone();
    tampered.replace_range(at..end, &((first + 1) % 36).to_string());
    fs::write(&path, tampered).unwrap();
    let out = urd(&["verify", p, "--json-report"]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["valid"], false);
    assert!(!report["violations"].as_array().unwrap().is_empty());
}

#[test]
fn exit_codes() {
    assert_eq!(
        urd(&["build", "--v", "12", "-r", "3", "-s", "0", "-t", "5"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        urd(&["build", "--v", "14", "-r", "1", "-s", "3", "-t", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(urd(&["spectrum", "--v", "13"]).status.code(), Some(2));
    assert_eq!(urd(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(urd(&["build", "--v", "12"]).status.code(), Some(64));
    assert_eq!(
        urd(&["ingredient", "--family", "nope"]).status.code(),
        Some(64)
    );
    assert_eq!(
        urd(&["verify", "/nonexistent/file.json"]).status.code(),
        Some(64)
    );
    let out = urd(&["search", "--name", "urd-12-(2,0,6)", "--budget", "1:1"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn ingredients_and_search() {
    let out = urd(&[
        "ingredient",
        "--family",
        "urgdd",
        "--g",
        "12",
        "--u",
        "2",
        "--profile",
        "5,3,2",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("{\"kind\":\"urgdd\""));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rgdd.json");
    let out = urd(&[
        "search",
        "--name",
        "rgdd3-3x5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(urd(&["verify", path.to_str().unwrap()]).status.success());

    let out = urd(&[
        "ingredient",
        "--family",
        "iurd",
        "--profile",
        "0,9,8",
        "--partial",
        "11,0,0",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("\"hole\""));
}

#[test]
fn selftest_summary() {
    let out = urd(&["selftest", "--max-v", "24", "--json"]);
    assert!(out.status.success());
    let value: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = value["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1]["verified"], 30);
}
