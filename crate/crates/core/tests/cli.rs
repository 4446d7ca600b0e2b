use std::path::Path;
use std::process::{Command, Output};

use slopecert_core::Certificate;

fn slopecert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slopecert"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn emit(dir: &Path, text: &str, name: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    let o = slopecert(&["destabilize", text, "--emit", path.to_str().unwrap()]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    path
}

#[test]
fn destabilize_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let path = emit(dir.path(), "F(2)", "cert.json");
    let o = slopecert(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("accepted"));
}

#[test]
fn polystable_and_parse_errors() {
    let o = slopecert(&["destabilize", "P2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("polystable"));
    let o = slopecert(&["destabilize", "F(oops)"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1, column 3"));
}

#[test]
fn tampered_and_malformed_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let path = emit(dir.path(), "F(1); blowup generic", "cert.json");
    let mut cert = Certificate::load(&path).unwrap();
    cert.df_value = -cert.df_value.clone();
    cert.emit(&path).unwrap();
    let o = slopecert(&["verify", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("df-replay"));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let o = slopecert(&["verify", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("load"));

    // rationals must be reduced
    let text = std::fs::read_to_string(emit(dir.path(), "F(1)", "c2.json")).unwrap();
    let unreduced = text.replace("\"1/1\"", "\"2/2\"");
    assert_ne!(text, unreduced);
    std::fs::write(&bad, unreduced).unwrap();
    assert_eq!(
        slopecert(&["verify", bad.to_str().unwrap()]).status.code(),
        Some(3)
    );
}

#[test]
fn emitted_bytes_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = emit(dir.path(), "F(3); blowup generic; blowup onZ", "a.json");
    let b = emit(dir.path(), "F(3); blowup generic; blowup onZ", "b.json");
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    let leftovers: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .filter_map(|e| e.ok())
        .filter(|e| e.file_name().to_string_lossy().ends_with(".tmp"))
        .collect();
    assert!(leftovers.is_empty());
}

#[test]
fn df_scan_and_reductivity() {
    let o = slopecert(&[
        "df",
        "--surface",
        "F(1)",
        "--class",
        "1,2",
        "--lambda",
        "9/10",
    ]);
    assert_eq!(stdout(&o).trim(), "-9/100");
    let o = slopecert(&["scan", "--n", "1", "--grid", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 11);
    let o = slopecert(&["scan", "--n", "1", "--grid", "0"]);
    assert_eq!(o.status.code(), Some(1));
    let o = slopecert(&["reductivity", "F(1); blowup onZ"]);
    assert!(stdout(&o).contains("not reductive"));
}

#[test]
fn parse_outputs() {
    let o = slopecert(&[
        "parse",
        "F(2); blowup generic; blowup onZ",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["picard_rank"], 4);
    assert_eq!(v["normalized"], "F(3); blowup generic; blowup generic");
    let o = slopecert(&["parse", "F(1); blowup onZ onZ"]);
    assert_eq!(o.status.code(), Some(1));
}
