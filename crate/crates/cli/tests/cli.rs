//! End-to-end command-line checks: exit codes, report formats, golden
//! replay, idempotent output, and the data-directory override.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_setfun"))
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn replay_scenarios_match_their_goldens() {
    for name in ["eq42-derivation", "prop6-derivation", "sumf-unfold-3"] {
        let out = run(&["replay", name]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", stdout(&out));
    }
    let out = run(&["replay", "does-not-exist"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn replay_honours_the_data_directory_override() {
    let out = bin()
        .args(["replay", "eq42-derivation"])
        .env("NONCLASSICAL_KERNEL_DATA", fixtures())
        .output()
        .expect("spawn");
    assert_eq!(out.status.code(), Some(0));
    // Pointing at an empty directory fails to find the fixture.
    let empty = std::env::temp_dir().join("setfun-empty-fixture-dir");
    std::fs::create_dir_all(&empty).unwrap();
    let out = bin()
        .args(["replay", "eq42-derivation"])
        .env("NONCLASSICAL_KERNEL_DATA", &empty)
        .output()
        .expect("spawn");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_accepts_the_bundled_scripts() {
    let script = fixtures().join("prop6-derivation.prf");
    let out = run(&["check", script.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.lines().next().unwrap().starts_with("1 OK"));
    assert!(text.trim_end().ends_with("ACCEPTED"));
}

#[test]
fn check_rejects_a_damaged_script() {
    let script = std::env::temp_dir().join("setfun-damaged.prf");
    std::fs::write(
        &script,
        "theory T-inf-0\n\
         goal 0 = 0\n\
         1. 0 = succ(0) ; logic refl\n",
    )
    .unwrap();
    let out = run(&["check", script.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn parse_error_exit_code_and_position() {
    let bad = std::env::temp_dir().join("setfun-bad.fml");
    std::fs::write(&bad, "all X . (X = \n").unwrap();
    let out = run(&["parse", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("expected"));
}

#[test]
fn translate_matches_the_expected_file() {
    let input = fixtures().join("gamma30.fml");
    let expect = fixtures().join("eq42.fml");
    let out = run(&[
        "translate",
        "--in",
        input.to_str().unwrap(),
        "--expect",
        expect.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    // The audit file lists one line per input node.
    let audit = std::env::temp_dir().join("setfun-audit.tsv");
    let out = run(&[
        "translate",
        "--in",
        input.to_str().unwrap(),
        "--audit",
        audit.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let lines = std::fs::read_to_string(&audit).unwrap().lines().count();
    assert!(lines > 20, "audit too small: {lines}");
}

#[test]
fn model_check_report_format_and_expectations() {
    let out = run(&["model-check", "--theory", "T", "--rank", "2", "--expect-fail", "INF"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("INF EXPECTED-FAIL"));
    for line in text.lines() {
        let mut parts = line.split_whitespace();
        let _id = parts.next().unwrap();
        let verdict = parts.next().unwrap();
        assert!(matches!(verdict, "PASS" | "FAIL" | "EXPECTED-FAIL"));
        let _ms: u128 = parts.next().unwrap().parse().expect("elapsed ms");
    }
    // Without the expectation the check is rejected.
    let out = run(&["model-check", "--theory", "T", "--rank", "2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn saturate_reports_depth_counts_and_contradictions() {
    let seed = std::env::temp_dir().join("setfun-seed.fml");
    std::fs::write(&seed, "alpha in X\n~(alpha in X)\n").unwrap();
    let out = run(&["saturate", "--seed", seed.to_str().unwrap(), "--depth", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("depth 0: 2 formulas"));
    assert!(text.contains("CONTRADICTION"));

    let consistent = std::env::temp_dir().join("setfun-seed2.fml");
    std::fs::write(&consistent, "alpha in X\n").unwrap();
    let out = run(&["saturate", "--seed", consistent.to_str().unwrap(), "--depth", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("consistent"));
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let config = std::env::temp_dir().join("setfun.conf");
    std::fs::write(&config, "theory = T\nrank = 1\nexpect-fail = INF\n").unwrap();
    let out = run(&["--config", config.to_str().unwrap(), "model-check"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    // A flag overrides the config value: unknown theory wins as an error.
    let out = run(&["--config", config.to_str().unwrap(), "model-check", "--theory", "nope"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn outputs_are_byte_identical_across_reruns() {
    let input = fixtures().join("gamma30.fml");
    let a = run(&["translate", "--in", input.to_str().unwrap()]);
    let b = run(&["translate", "--in", input.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
    let a = run(&["model-check", "--theory", "T-inf-0", "--rank", "1", "--expect-fail", "INF"]);
    let b = run(&["model-check", "--theory", "T-inf-0", "--rank", "1", "--expect-fail", "INF"]);
    // Timing columns may differ; compare the verdict columns.
    let strip = |o: &Output| {
        stdout(o)
            .lines()
            .map(|l| l.rsplit_once(' ').map(|(head, _)| head.to_string()).unwrap_or_default())
            .collect::<Vec<_>>()
    };
    assert_eq!(strip(&a), strip(&b));
}

#[test]
fn instantiate_prints_schema_instances() {
    let out = run(&["instantiate", "separation", "--phi", "alpha = alpha"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("all X . ex Y . all alpha ."));

    let out = run(&["instantiate", "set-matrix", "--rows", "1", "--cols", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out).trim(),
        "all alpha11 . all alpha12 . ex beta . beta = [alpha11 alpha12]"
    );

    let out = run(&["instantiate", "epsilon", "--rows", "1", "--cols", "1"]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["instantiate", "sum-f", "--elements", "alpha, beta, gamma"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("folded: all-ur"));
}
