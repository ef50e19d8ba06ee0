//! The binary end to end: exit codes and files.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ratmip"))
}

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}.mps", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn solve_check_and_bench() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("parity.cert");
    let stats = dir.path().join("stats.tsv");
    let out = bin()
        .args(["solve", &fixture("parity"), "--certificate"])
        .arg(&cert)
        .arg("--stats")
        .arg(&stats)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("infeasible - "));

    let check = bin().args(["check", &fixture("parity")]).arg(&cert).output().unwrap();
    assert_eq!(check.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&check.stdout).starts_with("accepted"));

    // The same certificate does not prove anything about another model.
    let wrong = bin().args(["check", &fixture("knapsack")]).arg(&cert).output().unwrap();
    assert_eq!(wrong.status.code(), Some(1));

    let missing = bin().args(["check", &fixture("parity"), "/nonexistent/cert"]).output().unwrap();
    assert_eq!(missing.status.code(), Some(2));

    let limited = bin().args(["solve", &fixture("parity"), "--presolve", "off", "--node-limit", "1"]).output().unwrap();
    assert_eq!(limited.status.code(), Some(3));

    let bench = bin()
        .args(["bench", &fixture("knapsack"), &fixture("decimal"), "--seeds", "2", "--compare", "auto,exlp"])
        .output()
        .unwrap();
    assert_eq!(bench.status.code(), Some(0));
    let text = String::from_utf8_lossy(&bench.stdout);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3, "{text}");
    assert!(lines[1].starts_with("auto\t4\t4\t") && lines[2].starts_with("exlp\t4\t4\t"));

    let tsv = std::fs::read_to_string(&stats).unwrap();
    assert_eq!(tsv.lines().count(), 2);
}
