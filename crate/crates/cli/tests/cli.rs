use std::process::Command;

use fgroup::cogen::CogenCertificate;
use fgroup::dynamics::Orbital;
use fgroup::Element;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn fgroup(args: &[&str]) -> Run {
    fgroup_env(args, &[])
}

fn fgroup_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fgroup"));
    cmd.args(args).env_remove("FGROUP_ITER_CAP");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

#[test]
fn pi_examples() {
    assert_eq!(fgroup(&["pi", "x0"]).stdout, "(1,-1)\n");
    assert_eq!(fgroup(&["pi", "{00->0,01->10,1->11}"]).stdout, "(1,-1)\n");
    assert_eq!(fgroup(&["pi", "x0^-1 x0"]).stdout, "(0,0)\n");
    assert_eq!(fgroup(&["pi", "@x1"]).stdout, "(0,-1)\n");
    assert_eq!(
        fgroup(&["--format", "json", "pi", "x1"]).stdout.trim(),
        r#"{"c":0,"d":-1}"#
    );
}

#[test]
fn orbital_examples() {
    assert_eq!(fgroup(&["orbitals", "x1"]).stdout, "(1/2,1) up\n");
    assert_eq!(fgroup(&["orbitals", "x0^-1"]).stdout, "(0,1) down\n");
    let id = fgroup(&["orbitals", ""]);
    assert_eq!((id.code, id.stdout.as_str()), (0, ""));
    let json = fgroup(&["--format", "json", "orbitals", "x1"]).stdout;
    let orbs: Vec<Orbital> = serde_json::from_str(&json).unwrap();
    assert_eq!(orbs.len(), 1);
}

#[test]
fn parse_errors_exit_one() {
    let r = fgroup(&["pi", "x2"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("syntax error"));
    let r = fgroup(&["cogen", "--set", "x0;{0->1}"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("element 2"), "{}", r.stderr);
    assert_eq!(fgroup(&["pi", "@paper-pair"]).code, 1);
}

#[test]
fn certificate_with_verification() {
    let r = fgroup(&["cogen", "--set", "x1", "--g", "x0", "--verify-depth", "4"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("construction: no interior fixed point"));
    assert!(r.stdout.contains("collapsed: yes"));
    assert!(!r.stdout.contains("FAILED"));
}

#[test]
fn certificate_search() {
    let r = fgroup(&["cogen", "--set", "x0;x1"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.starts_with("construction:"));
}

#[test]
fn verification_reports_pairs_in_input_order() {
    let r = fgroup(&["cogen", "--set", "x1;x0 x1^2;x0^-1", "--verify-depth", "3"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let pairs: Vec<&str> = r.stdout.lines().filter(|l| l.starts_with("pair")).collect();
    assert_eq!(pairs.len(), 3);
    for (i, line) in pairs.iter().enumerate() {
        assert!(
            line.starts_with(&format!("pair (f{}, g^σ)", i + 1)),
            "{line}"
        );
    }
}

#[test]
fn json_certificates_round_trip() {
    let r = fgroup(&[
        "--format",
        "json",
        "cogen",
        "--set",
        "x1",
        "--g",
        "x0",
        "--verify-depth",
        "4",
    ]);
    assert_eq!(r.code, 0);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["status"], "certificate");
    assert_eq!(v["valid"], true);
    assert_eq!(v["verification"][0]["collapsed"], true);
    let cert: CogenCertificate = serde_json::from_value(v["certificate"].clone()).unwrap();
    assert!(cert.is_valid(&[Element::x1()]));
    let printed: Element = cert.conjugated.to_string().parse().unwrap();
    assert_eq!(printed, cert.conjugated);
}

#[test]
fn obstructed_sets_exit_two() {
    let r = fgroup(&["cogen", "--set", "@paper-triple"]);
    assert_eq!(r.code, 2);
    assert!(r.stdout.starts_with("OBSTRUCTED: "));
    let r = fgroup(&["cogen", "--set", "@paper-pair", "--g", "x0 x1^-2"]);
    assert_eq!(r.code, 2);
    let r = fgroup(&[
        "--format",
        "json",
        "cogen",
        "--set",
        "@paper-pair",
        "--g",
        "x0 x1^-2",
    ]);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["status"], "obstructed");
    assert_eq!(v["report"]["verdict"], "obstructed");
}

#[test]
fn precondition_failures_name_the_element() {
    let r = fgroup(&["cogen", "--set", "x0;x1", "--g", "x0"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("f1"), "{}", r.stderr);
}

#[test]
fn eqrel_examples() {
    assert_eq!(
        fgroup(&["eqrel", "--gens", "x0;x1", "--collapsed", "4"]).stdout,
        "collapsed (evidence for [F,F] ≤ Cl(H))\n"
    );
    assert_eq!(
        fgroup(&["eqrel", "--gens", "x0", "--collapsed", "4"]).stdout,
        "not collapsed at this budget (inconclusive)\n"
    );
    assert_eq!(
        fgroup(&["eqrel", "--gens", "x0", "--query", "01", "10"]).stdout,
        "equivalent\n"
    );
    let r = fgroup(&[
        "--format",
        "json",
        "eqrel",
        "--gens",
        "x0",
        "--L",
        "2",
        "--D",
        "4",
        "--collapsed",
        "3",
        "--dump",
    ]);
    let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
    assert_eq!(v["collapsed"], false);
    assert!(v["relation"]["log"]
        .as_array()
        .is_some_and(|l| !l.is_empty()));
}

#[test]
fn eqrel_requires_one_question() {
    assert_ne!(fgroup(&["eqrel", "--gens", "x0"]).code, 0);
    assert_ne!(
        fgroup(&[
            "eqrel",
            "--gens",
            "x0",
            "--collapsed",
            "3",
            "--query",
            "0",
            "1"
        ])
        .code,
        0
    );
}

#[test]
fn budget_errors_exit_three() {
    let r = fgroup(&["eqrel", "--gens", "x0;x1", "--L", "9", "--collapsed", "4"]);
    assert_eq!(r.code, 3, "{}", r.stderr);
    assert!(r.stderr.contains("budget"));
    assert_eq!(
        fgroup(&["eqrel", "--gens", "x0", "--D", "4", "--query", "00000", "0"]).code,
        1
    );
}

#[test]
fn iteration_cap_from_environment() {
    let ok = fgroup(&["cogen", "--set", "x1", "--g", "x0"]);
    let capped = fgroup_env(
        &["cogen", "--set", "x1", "--g", "x0"],
        &[("FGROUP_ITER_CAP", "1")],
    );
    assert_eq!(ok.code, 0);
    assert_eq!(capped.code, 3, "{}", capped.stderr);
    assert_ne!(fgroup(&["--iter-cap", "0", "pi", "x0"]).code, 0);
}

#[test]
fn samples_are_reproducible_and_reparse() {
    let a = fgroup(&["--seed", "9", "sample", "--count", "5", "--len", "8"]).stdout;
    let b = fgroup(&["--seed", "9", "sample", "--count", "5", "--len", "8"]).stdout;
    assert_eq!(a, b);
    for line in a.lines() {
        let e: Element = line.parse().unwrap();
        assert_eq!(e.to_string(), line);
    }
}
