//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line. Run with `cargo test -p clonecalc --test acceptance -- --nocapture`
//! to see the lines; budgets are enforced inside `run_criterion`.

use clonecalc::suites::{criterion_name, run_criterion, SuiteConfig};

fn run(k: usize) {
    let cfg = SuiteConfig {
        seed: 0,
        ..SuiteConfig::default()
    };
    let report = run_criterion(k, &cfg);
    let verdict = if report.passed() { "PASS" } else { "FAIL" };
    println!(
        "ACCEPTANCE {k} ({}): {verdict} — {} cases in {:?}",
        criterion_name(k),
        report.cases,
        report.wall
    );
    for f in &report.failures {
        println!("  {}: {}", f.case, f.detail);
    }
    assert!(
        report.passed(),
        "criterion {k} failed: {:?}",
        report.failures
    );
}

#[test]
fn criterion_1_closed_form_classification() {
    run(1);
}

#[test]
fn criterion_2_intersection_criterion_exhaustive() {
    run(2);
}

#[test]
fn criterion_3_kary_parts_census() {
    run(3);
}

#[test]
fn criterion_4_equal_clones_without_witness() {
    run(4);
}

#[test]
fn criterion_5_synthesis_soundness() {
    run(5);
}

#[test]
fn criterion_6_construction_certificates() {
    run(6);
}

#[test]
fn criterion_7_monotone_majorant_contract() {
    run(7);
}

#[test]
fn criterion_8_quasiorder_laws() {
    run(8);
}

#[test]
fn criterion_9_chain_structure() {
    run(9);
}
