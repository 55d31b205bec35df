//! Acceptance criteria, one test each. Every test prints its gate table
//! before asserting, so `--nocapture` shows the measured numbers.

use subrad_core::experiments::check::{criterion, CriterionReport};

fn assert_criterion(id: u8) {
    let report: CriterionReport = criterion(id).expect("known criterion");
    println!("{}", report.render());
    assert!(report.passed(), "criterion {id} failed:\n{}", report.render());
}

#[test]
fn criterion_1_ideal_waveguide_scaling() {
    assert_criterion(1);
}

#[test]
fn criterion_2_parity_branches() {
    assert_criterion(2);
}

#[test]
fn criterion_3_quoted_spectral_shifts() {
    assert_criterion(3);
}

#[test]
fn criterion_4_fom_scaling() {
    assert_criterion(4);
}

#[test]
fn criterion_5_fisher_scaling() {
    assert_criterion(5);
}

#[test]
fn criterion_6_cramer_rao_resolution() {
    assert_criterion(6);
}

#[test]
fn criterion_7_disorder_robustness() {
    assert_criterion(7);
}

#[test]
fn criterion_8_property_suite() {
    assert_criterion(8);
}
