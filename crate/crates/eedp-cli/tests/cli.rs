//! End-to-end checks of the command-line driver against the shipped
//! fixtures.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_eedp"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

#[test]
fn check_reports_the_bowtie_shape() {
    let out = bin().arg("check").arg(fixture("bowtie.eedp")).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("vertices: 7"));
    assert!(text.contains("demands: 4"));
    assert!(text.contains("eulerian: yes"));
}

#[test]
fn bowtie_is_infeasible_under_both_methods() {
    for method in ["oracle", "frank"] {
        let out = bin()
            .args(["solve", "--method", method])
            .arg(fixture("bowtie.eedp"))
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(1), "method {method}");
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.contains("feasible: no"), "method {method}: {text}");
    }
}

#[test]
fn parallel_fixture_agrees_across_methods() {
    let mut answers = Vec::new();
    for method in ["oracle", "frank"] {
        let out = bin()
            .args(["solve", "--method", method])
            .arg(fixture("parallel.eedp"))
            .output()
            .unwrap();
        let text = String::from_utf8(out.stdout).unwrap();
        answers.push(text.contains("feasible: yes"));
        assert!(out.status.success(), "method {method}: {text}");
    }
    assert_eq!(answers[0], answers[1]);
}

#[test]
fn triangle_cycle_demand_solves() {
    let out = bin()
        .arg("solve")
        .arg(fixture("triangle.eedp"))
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("feasible: yes"));
    assert!(text.contains("path 0: 0 1 2"));
}

#[test]
fn generated_instances_parse_back() {
    let out = bin()
        .args(["gen", "random-euler", "--n", "8", "--r", "3", "--seed", "4"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(text.starts_with("eedp 1\n"));
    let dir = std::env::temp_dir().join("eedp-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("gen.eedp");
    std::fs::write(&file, &out.stdout).unwrap();
    let check = bin().arg("check").arg(&file).output().unwrap();
    assert!(check.status.success());
    // determinism under the seed
    let again = bin()
        .args(["gen", "random-euler", "--n", "8", "--r", "3", "--seed", "4"])
        .output()
        .unwrap();
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn analyze_census_sums_to_the_matching() {
    let out = bin()
        .args(["analyze", "--wall", "8", "--seed", "3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let field = |key: &str| -> usize {
        text.lines()
            .find(|l| l.starts_with(key))
            .map(|l| l.split(": ").nth(1).unwrap().parse().unwrap())
            .unwrap_or(0)
    };
    let total = field("matching-edges");
    let sum =
        field("up-path") + field("type-0") + field("type-1") + field("type-2");
    assert_eq!(total, sum);
}

#[test]
fn export_dot_is_wellformed() {
    let out = bin()
        .args(["export-dot", "--swirl", "3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("digraph"));
    assert!(text.trim_end().ends_with('}'));
    assert!(text.contains("swirl-cycle-2"));
}

#[test]
fn reduce_reports_sizes_and_answer() {
    let out = bin()
        .args(["reduce", "--verify"])
        .arg(fixture("bowtie.eedp"))
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("size-before:"));
    assert!(text.contains("size-after:"));
    assert!(text.contains("feasible: no"));
}

#[test]
fn parse_errors_exit_with_usage_code() {
    let dir = std::env::temp_dir().join("eedp-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("broken.eedp");
    std::fs::write(&file, "eedp 1\nv 2\ne 0 9\n").unwrap();
    let out = bin().arg("check").arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3"));
}
