use std::path::Path;
use std::process::{Command, Output};

fn geojoin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geojoin")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_analyze_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("inst.json");
    let report = dir.path().join("report.json");
    let o = geojoin(&["gen", "--dim", "2", "--classes", "2,2,2", "--seed", "4", "--out", s(&inst)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = geojoin(&["analyze", s(&inst), "--out", s(&report)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let o = geojoin(&["verify", s(&inst), "--report", s(&report)]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("report verified"));

    // A tampered report is an inconsistency.
    let text = std::fs::read_to_string(&report).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&text).unwrap();
    v["nerve"]["counts"][0] = serde_json::json!(999);
    std::fs::write(&report, v.to_string()).unwrap();
    assert_eq!(code(&geojoin(&["verify", s(&inst), "--report", s(&report)])), 3);
}

#[test]
fn gen_writes_a_directory_and_jsonl() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("batch");
    assert_eq!(code(&geojoin(&["gen", "--count", "3", "--out", s(&out)])), 0);
    assert_eq!(std::fs::read_dir(&out).unwrap().count(), 3);
    let o = geojoin(&["gen", "--count", "2", "--seed", "9"]);
    assert_eq!(String::from_utf8_lossy(&o.stdout).lines().count(), 2);
    assert_eq!(o.stdout, geojoin(&["gen", "--count", "2", "--seed", "9"]).stdout);
}

#[test]
fn certify_and_verify_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("star.json");
    let cert = dir.path().join("cert.json");
    assert_eq!(code(&geojoin(&["gen", "--classes", "2,2,2,2,2,2,2", "--seed", "1", "--out", s(&inst)])), 0);
    for kind in ["star", "dcore", "membership"] {
        let o = geojoin(&["certify", s(&inst), "--kind", kind, "--point", "0,0", "--out", s(&cert)]);
        assert_eq!(code(&o), 0, "{kind}: {}", String::from_utf8_lossy(&o.stderr));
        if cert.exists() {
            let o = geojoin(&["verify", s(&inst), "--certificate", s(&cert)]);
            assert_eq!(code(&o), 0, "{kind}");
            std::fs::remove_file(&cert).unwrap();
        }
    }
}

#[test]
fn search_and_render() {
    let dir = tempfile::tempdir().unwrap();
    let findings = dir.path().join("f.jsonl");
    let o = geojoin(&["search", "--classes", "2,2,1", "--count", "10", "--findings", s(&findings)]);
    assert_eq!(code(&o), 0);
    let summary: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(summary["processed"], 10);
    assert_eq!(code(&geojoin(&["verify", "--findings", s(&findings)])), 0);

    let inst = dir.path().join("i.json");
    assert_eq!(code(&geojoin(&["gen", "--out", s(&inst)])), 0);
    let o = geojoin(&["render", s(&inst)]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.starts_with(b"<svg"));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&geojoin(&["--help"])), 0);
    assert_eq!(code(&geojoin(&["frobnicate"])), 1);
    assert_eq!(code(&geojoin(&["gen", "--classes", "2,x"])), 1);
    assert_eq!(code(&geojoin(&["gen", "--matroid", "nope"])), 1);
    assert_eq!(code(&geojoin(&["analyze", "/nonexistent/instance.json"])), 1);
    assert_eq!(code(&geojoin(&["verify"])), 1);
    // One LP is not enough for a planar nerve.
    let o = geojoin(&["analyze", "--classes", "3,3,3", "--seed", "2", "--budget-lp", "1"]);
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stderr));
    let o = geojoin(&["search", "--classes", "3,3,3", "--count", "2", "--budget-lp", "1"]);
    assert_eq!(code(&o), 2);
}
