use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn lattice_file(name: &str, body: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn hplane() -> PathBuf {
    lattice_file("hplane.json", r#"{"p":3,"diag":[{"unit":1,"exp":0},{"unit":-1,"exp":0}]}"#)
}

fn u3() -> PathBuf {
    lattice_file("u3.json", r#"{"p":3,"diag":[{"unit":1},{"unit":1},{"unit":1}]}"#)
}

fn repdense(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_repdense")).args(args).output().unwrap()
}

fn repdense_env(args: &[&str], key: &str, val: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_repdense")).args(args).env(key, val).output().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn yang_on_hyperbolic_plane() {
    let h = hplane();
    let o = repdense(&["yang", "--lattice", h.to_str().unwrap(), "--q", "1", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["results"]["yang"]["display"], "1 - 1/3*X");
}

#[test]
fn orbit_equation_instance_passes() {
    let l = u3();
    let o = repdense(&["verify", "orbit-eq", "--lattice", l.to_str().unwrap(), "--q", "9", "--bruteforce"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert!(String::from_utf8_lossy(&o.stdout).contains("orbit-eq: PASS"));
}

#[test]
fn q_zero_without_cut_is_a_usage_error() {
    let h = hplane();
    let o = repdense(&["beta", "--lattice", h.to_str().unwrap(), "--q", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let o = repdense(&["beta", "--lattice", h.to_str().unwrap(), "--q", "0", "--kmax", "3"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn unknown_subcommand_and_bad_input_exit_2() {
    assert_eq!(repdense(&["frobnicate"]).status.code(), Some(2));
    let bad = lattice_file("bad.json", r#"{"p":3}"#);
    let o = repdense(&["lambda", "--lattice", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn size_guard_exits_3() {
    let l = lattice_file("u4.json", r#"{"p":3,"diag":[{"unit":1},{"unit":1},{"unit":1},{"unit":1}]}"#);
    let args = ["orbits", "--bruteforce", "--lattice", l.to_str().unwrap(), "--q", "9"];
    let o = repdense_env(&args, "REPDENSE_SIZE_GUARD", "100");
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn failing_identity_exits_1() {
    let o = repdense(&["global", "--example", "heegner:7", "--compare"]);
    assert_eq!(o.status.code(), Some(1));
    let o = repdense(&["global", "--example", "modular:15", "--compare"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn json_output_is_deterministic() {
    let l = u3();
    let args = ["orbits", "--lattice", l.to_str().unwrap(), "--q", "9", "--json"];
    let a = repdense(&args);
    let b = repdense(&args);
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["results"]["count"], 2);
    assert!(v["inputs_digest"].as_str().unwrap().len() == 16);
}

#[test]
fn suite_runs_from_the_cli() {
    let o = repdense(&["verify", "zeta", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["verdicts"][0]["verdict"]["verdict"], "PASS");
    assert_eq!(repdense(&["verify", "no-such-suite"]).status.code(), Some(2));
}

#[test]
fn lambda_and_zeta_commands() {
    let l = u3();
    let o = repdense(&["lambda", "--lattice", l.to_str().unwrap(), "--json"]);
    assert_eq!(json(&o)["results"]["vol_so_prime"], "8/9");
    let h = hplane();
    let o = repdense(&["zeta", "--lattice", h.to_str().unwrap(), "--counts", "12"]);
    assert_eq!(o.status.code(), Some(0));
}
