use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncpart")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn enumerate_nc4() {
    let o = run(&["enumerate", "--family", "A", "--n", "4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 14);
    let first: serde_json::Value = serde_json::from_str(stdout(&o).lines().next().unwrap()).unwrap();
    assert_eq!(first["rank"], 0);
    assert_eq!(first["blocks"], serde_json::json!([[1], [2], [3], [4]]));
}

#[test]
fn enumerate_csv_has_header() {
    let o = run(&["enumerate", "--family", "b", "--n", "3", "--output", "csv"]);
    let s = stdout(&o);
    assert_eq!(s.lines().next(), Some("index,rank,type,blocks"));
    assert_eq!(s.lines().count(), 21);
}

#[test]
fn psi_roundtrip_summary() {
    let o = run(&["bijection", "--map", "psi", "--roundtrip", "--n", "4", "--output", "table"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "C(8,4)=70 elements, 70/70 round-trips ok");
}

#[test]
fn tau_d_prime_summary() {
    let o = run(&["bijection", "--map", "tau-d-prime", "--n", "3", "--k", "1", "--l", "2", "--roundtrip"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["elements"], 40);
    assert_eq!(v["match"], true);
}

#[test]
fn chains_against_formula() {
    let o = run(&["chains", "--family", "b", "--n", "3", "--l", "2", "--id", "THM-B", "--jumps", "1,1,1", "--ktype", "2;1,1,0"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["brute"], "18");
    assert_eq!(v["formula"], "18");
}

#[test]
fn zeta_d4() {
    let o = run(&["zeta", "--family", "d", "--n", "4", "--l", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["zeta"], "336");
}

#[test]
fn verify_summary() {
    let o = run(&["verify", "--id", "thm-d", "--max-n", "4", "--max-k", "1", "--max-l", "2"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["mismatches"], serde_json::json!([]));
    assert!(v["summary"].as_str().unwrap().starts_with("all "));
}

#[test]
fn deterministic_output() {
    let a = stdout(&run(&["verify", "--id", "A-CHAIN-TYPE", "--max-kn", "6", "--max-l", "2"]));
    let b = stdout(&run(&["verify", "--id", "A-CHAIN-TYPE", "--max-kn", "6", "--max-l", "2"]));
    assert_eq!(a, b);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["enumerate", "--family", "a", "--n", "0"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["chains", "--family", "b", "--n", "3", "--l", "2", "--ktype", "1;1,1"]).status.code(), Some(2));
}

#[test]
fn scale_guard_exit_2() {
    let o = run(&["--max-ground", "4", "enumerate", "--family", "a", "--n", "5"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("scale guard"));
}
