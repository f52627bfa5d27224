use std::path::PathBuf;
use std::process::{Command, Output};

use asd_forge::Report;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_asd-forge"));
    c.env_remove("ASD_FORGE_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn expand_delta_prints_coefficients() {
    let o = run(&["expand", "--form", "delta", "--order", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("1, -24, 252, -1472, 4830"), "{s}");
}

#[test]
fn asd_ec_suite_exits_zero() {
    let o = run(&["suite", "asd-ec", "--primes", "5..13", "--nmax", "200"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn malformed_range_is_rejected() {
    for bad in ["5..x", "13..5", "4", ""] {
        let o = run(&["suite", "asd-ec", "--primes", bad]);
        assert_eq!(o.status.code(), Some(2), "{bad}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn failing_check_exits_one() {
    // kibelbek refuses n_max below p^3, which is a failed cell, not a usage error
    let o = run(&["suite", "kibelbek", "--primes", "13", "--nmax", "400"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn json_is_reproducible_across_thread_counts() {
    let args = ["suite", "asd-ec", "thm15", "--primes", "5..13", "--nmax", "200"];
    let one = tmp("one.json");
    let many = tmp("many.json");
    let o = bin().args(args).args(["--json", one.to_str().unwrap()]).env("ASD_FORGE_THREADS", "1").output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let o = bin().args(args).args(["--json", many.to_str().unwrap(), "--threads", "4"]).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let a = std::fs::read(&one).unwrap();
    assert_eq!(a, std::fs::read(&many).unwrap());

    let r = Report::from_json(std::str::from_utf8(&a).unwrap()).unwrap();
    assert!(r.passed());
    let e = r.entries.iter().find(|e| e.suite == "asd-ec" && e.prime == Some(5)).unwrap();
    assert!(e.spec.is_some() && !e.verdicts.is_empty());

    let o = run(&["report", one.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("suite,prime,label,pass"));
}

#[test]
fn config_file_and_flag_precedence() {
    let cfg = tmp("run.toml");
    std::fs::write(&cfg, "suites = [\"atkin-j\"]\nn_max = 300\nformat = \"json\"\n[suite.atkin-j]\nprimes = \"11\"\n").unwrap();
    let o = run(&["suite", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r = Report::from_json(&stdout(&o)).unwrap();
    assert!(r.entries.iter().all(|e| e.suite == "atkin-j" && e.prime == Some(11)));
    // flags win over the file
    let o = run(&["suite", "--config", cfg.to_str().unwrap(), "--format", "csv"]);
    assert!(stdout(&o).starts_with("suite,"));

    std::fs::write(&cfg, "bogus = 1\n").unwrap();
    let o = run(&["suite", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn conjectural_findings_are_flagged() {
    let o = run(&["hyp", "--check", "sb1", "--prime", "7", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let r = Report::from_json(&stdout(&o)).unwrap();
    assert!(r.entries.iter().any(|e| e.conjectural));
}
