use std::path::Path;
use std::process::{Command, Output};

use dynrank::format::ProfileDoc;
use dynrank_core::fixtures;
use serde_json::Value;

fn dynrank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dynrank")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_profile(dir: &Path, name: &str, profile: &dynrank_core::ApprovalProfile) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(&ProfileDoc::from_profile(profile)).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn rank_prints_one_name_per_line() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_profile(dir.path(), "p.json", &fixtures::five_three_one());
    let out = stdout(&dynrank(&["rank", "--rule", "dyn-seqpav", "--profile", &p]));
    assert_eq!(out, "a\nc\nb\nd\ne\n");
    let out = stdout(&dynrank(&["rank", "--rule", "myopic-phragmen", "--profile", &p, "--implemented", "b"]));
    assert_eq!(out, "c\nd\na\ne\n");
}

#[test]
fn rank_prints_debts() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_profile(dir.path(), "p.json", &fixtures::five_three_one());
    let out = stdout(&dynrank(&["rank", "--rule", "dyn-phragmen", "--profile", &p, "--implemented", "b", "--debts"]));
    let (ranking, debts) = out.split_once("\n\n").unwrap();
    assert_eq!(ranking, "c\na\nd\ne");
    let debts: Vec<&str> = debts.lines().collect();
    assert_eq!(debts.len(), 9);
    assert_eq!(debts[0], "0 1/5");
    assert_eq!(debts[5], "5 0/1");
}

#[test]
fn trajectory_then_check() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_profile(dir.path(), "parties.json", &fixtures::two_parties(2, 6));
    let traj = dir.path().join("t.json");
    let traj = traj.to_str().unwrap();
    stdout(&dynrank(&[
        "trajectory",
        "--rule",
        "dyn-phragmen",
        "--profile",
        &p,
        "--implemented",
        "b1,b2,b3",
        "--h",
        "4",
        "-o",
        traj,
    ]));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(traj).unwrap()).unwrap();
    assert_eq!(doc["steps"].as_array().unwrap().len(), 4);

    let report: Value =
        serde_json::from_str(&stdout(&dynrank(&["check", "--axiom", "js", "--trajectory", traj]))).unwrap();
    assert_eq!(report["holds"], false);
    assert!(!report["violations"].as_array().unwrap().is_empty());

    let report: Value =
        serde_json::from_str(&stdout(&dynrank(&["check", "--axiom", "mono", "--trajectory", traj]))).unwrap();
    assert!(report["holds"].is_boolean());
}

#[test]
fn gen_is_deterministic() {
    let a = stdout(&dynrank(&["gen", "--model", "spatial", "--group-size", "10", "--seed", "7"]));
    let b = stdout(&dynrank(&["gen", "--model", "spatial", "--group-size", "10", "--seed", "7"]));
    let c = stdout(&dynrank(&["gen", "--model", "spatial", "--group-size", "10", "--seed", "8"]));
    assert_eq!(a, b);
    assert_ne!(a, c);
    let doc: ProfileDoc = serde_json::from_str(&a).unwrap();
    doc.to_profile().unwrap();
}

#[test]
fn experiment_writes_csv_svg_and_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let args = [
        "experiment",
        "--figure",
        "row2",
        "--model",
        "spatial",
        "-o",
        out,
        "--elections",
        "3",
        "--rules",
        "av,dyn-seqpav",
    ];
    stdout(&dynrank(&args));
    let csv = std::fs::read_to_string(dir.path().join("row2_spatial.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "model,rule,alpha_num,alpha_den,iteration,mean_satisfaction,stddev,runs,seed_base"
    );
    assert_eq!(lines.count(), 2 * 8);
    assert!(std::fs::read_to_string(dir.path().join("row2_spatial.svg")).unwrap().starts_with("<svg"));
    let meta: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("row2_spatial.json")).unwrap()).unwrap();
    assert_eq!(meta["elections"], 3);

    stdout(&dynrank(&args));
    assert_eq!(csv, std::fs::read_to_string(dir.path().join("row2_spatial.csv")).unwrap());
}

#[test]
fn bad_input_fails_with_message() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_profile(dir.path(), "p.json", &fixtures::five_three_one());
    let out = dynrank(&["rank", "--rule", "dyn-seqpav", "--profile", &p, "--implemented", "zz"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    let out = dynrank(&["rank", "--rule", "borda", "--profile", &p]);
    assert!(!out.status.success());
    let out = dynrank(&["rank", "--rule", "av", "--profile", "/nonexistent.json"]);
    assert!(!out.status.success());
}
