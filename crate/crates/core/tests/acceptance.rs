//! Acceptance suite: one test per built-in verification check, printing
//! the same pass/fail line as the CLI `verify` command (visible with
//! `cargo test --test acceptance -- --nocapture`).

use ptzeno::verify::{self, CheckResult};

fn run(check: fn() -> CheckResult) {
    let r = check();
    println!("{}", r.line());
    assert!(r.passed, "{}", r.line());
}

#[test]
fn criterion_1_analytic_vs_numeric_floquet() {
    run(verify::check_floquet_equivalence);
}

#[test]
fn criterion_2_resonance_condition() {
    run(verify::check_resonance_condition);
}

#[test]
fn criterion_3_tau1_independence() {
    run(verify::check_tau1_independence);
}

#[test]
fn criterion_4_static_formulas_and_asymptotics() {
    run(verify::check_static_formulas);
}

#[test]
fn criterion_5_projective_measurement_equivalence() {
    run(verify::check_projective_equivalence);
}

#[test]
fn criterion_6_lifetime_coincidence() {
    run(verify::check_lifetime_coincidence);
}

#[test]
fn criterion_7_regime_ordering() {
    run(verify::check_regime_ordering);
}

#[test]
fn criterion_8_invariant_suite() {
    run(verify::check_invariant_suite);
}
