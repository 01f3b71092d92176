//! End-to-end checks of the binary: output shapes, exit codes, determinism.

use std::process::{Command, Output};

fn clonecalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clonecalc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn profile_of_median() {
    let out = clonecalc(&["profile", "med3(x1,x2,x3)"]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out).trim(),
        r#"{"n":3,"minimal_wild":[[1,2],[1,3],[2,3]]}"#
    );
}

#[test]
fn profile_outside_fragment_reports_bounds() {
    let out = clonecalc(&["profile", "min2(pD(x1,x2),pN(x1,x2))"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(doc["exact"], false);
}

#[test]
fn classify_term_and_profile_file() {
    let out = clonecalc(&["classify", "--term", "m[5,3](x1,x2,x3,x4,x5)"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), r#"{"index":"M","m":3}"#);

    let dir = std::env::temp_dir().join(format!("clonecalc-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("profile.json");
    std::fs::write(&path, r#"{"n":2,"minimal_wild":[[1]]}"#).unwrap();
    let out = clonecalc(&["classify", "--profile", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), r#"{"index":"almost_unary"}"#);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn classify_non_intersecting_profile_is_everything() {
    let out = clonecalc(&["classify", "--term", "max2(x1,x2)"]);
    assert_eq!(stdout(&out).trim(), r#"{"index":"M","m":2}"#);
}

#[test]
fn synth_prints_median_tower() {
    let out = clonecalc(&["synth", "--family", "[[1,2],[1,3],[2,3]]", "--n", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), r#""med3(x1,x2,x3)""#);

    let out = clonecalc(&[
        "synth",
        "--family",
        "[[1,2],[1,3],[2,3]]",
        "--n",
        "3",
        "--certify",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(doc["certificate"]["status"], "verified");
}

#[test]
fn synth_rejects_disjoint_family() {
    let out = clonecalc(&["synth", "--family", "[[1],[2]]", "--n", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_and_reduce() {
    let out = clonecalc(&["eval", "med3(x1,x2,x3)", "--args", "1,5,2"]);
    assert_eq!(stdout(&out).trim(), "2");

    let out = clonecalc(&["eval", "med3(x1,x2,x3)", "--args", "1,5"]);
    assert_eq!(out.status.code(), Some(2));

    let out = clonecalc(&["reduce", "--n", "5", "--k", "3", "--certify"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(doc["certificate"]["status"], "verified");
}

#[test]
fn enumerate_counts_and_streams() {
    let out = clonecalc(&["enumerate", "--n", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[0], r#"{"n":2,"minimal_wild":[]}"#);

    let out = clonecalc(&["enumerate", "--n", "3", "--intersecting"]);
    let all: Vec<serde_json::Value> = stdout(&out)
        .trim()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    for doc in &all {
        let sets = doc["minimal_wild"].as_array().unwrap();
        for (i, a) in sets.iter().enumerate() {
            for b in &sets[i + 1..] {
                let a: Vec<u64> = a
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|v| v.as_u64().unwrap())
                    .collect();
                let b: Vec<u64> = b
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(|v| v.as_u64().unwrap())
                    .collect();
                assert!(a.iter().any(|x| b.contains(x)), "disjoint members in {doc}");
            }
        }
    }

    let out = clonecalc(&["enumerate", "--n", "9"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn export_dot_draws_the_chain() {
    let out = clonecalc(&["export-dot", "--max-n", "5"]);
    assert!(out.status.success());
    let dot = stdout(&out);
    assert!(dot.contains("Pol(T1) = M3"));
    // A path through M2..M5, the ellipsis and the sink: 5 edges, 6 nodes.
    assert_eq!(dot.matches("->").count(), 5);
    assert_eq!(dot.lines().filter(|l| l.contains("[label=")).count(), 6);
}

#[test]
fn check_suite_runs_and_is_deterministic() {
    let a = clonecalc(&["check", "--suite", "setfam", "--seed", "42"]);
    assert!(a.status.success());
    let b = clonecalc(&["check", "--suite", "setfam", "--seed", "42"]);
    assert_eq!(stdout(&a), stdout(&b), "reports must be byte-identical");

    let unknown = clonecalc(&["check", "--suite", "nonsense"]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    let out = clonecalc(&["classify"]);
    assert_eq!(out.status.code(), Some(2));
    let out = clonecalc(&["profile", "med4(x1,x2,x3,x4)"]);
    assert_eq!(out.status.code(), Some(2));
    let out = clonecalc(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn max_window_env_caps_oracle() {
    let out = Command::new(env!("CARGO_BIN_EXE_clonecalc"))
        .args(["check", "--suite", "setfam", "--seed", "7"])
        .env("CLONECALC_MAX_WINDOW", "256")
        .output()
        .expect("binary runs");
    assert!(out.status.success());
}
