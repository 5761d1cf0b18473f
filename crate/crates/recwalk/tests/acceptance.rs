//! Acceptance suite: one test per verification criterion, at the pinned
//! tolerances. Each test prints its `PASS`/`FAIL` lines (visible under
//! `--nocapture`, or automatically on failure).
//!
//! The tests share a lock so the Monte Carlo criteria run one at a time:
//! each already saturates the worker pool, and the heavy ones hold
//! multi-hundred-MB laws.

use std::sync::Mutex;

use recwalk::verify::{run_criterion, CriterionReport};

static GATE: Mutex<()> = Mutex::new(());

/// Seed for the whole acceptance run; results are byte-stable under it.
const ACCEPTANCE_SEED: u64 = 7;

fn check(id: u32) -> CriterionReport {
    let _guard = GATE.lock().unwrap_or_else(|poisoned| poisoned.into_inner());
    let report = run_criterion(id, ACCEPTANCE_SEED).expect("criterion must run");
    print!("{}", report.render());
    report
}

fn assert_criterion(id: u32) {
    let report = check(id);
    assert!(report.passed, "criterion {id} failed:\n{}", report.render());
}

#[test]
fn criterion_01_spitzer_identity_exact() {
    assert_criterion(1);
}

#[test]
fn criterion_02_sparre_andersen_exact() {
    assert_criterion(2);
}

#[test]
fn criterion_03_record_count_distribution_exact() {
    assert_criterion(3);
}

#[test]
fn criterion_04_weak_convergence_at_rho_half() {
    assert_criterion(4);
}

#[test]
fn criterion_05_heavy_tail_family_normalization() {
    assert_criterion(5);
}

#[test]
fn criterion_06_geometric_r_infinity() {
    assert_criterion(6);
}

#[test]
fn criterion_07_last_max_asymptotic_exact() {
    assert_criterion(7);
}

#[test]
fn criterion_08_sigma_records() {
    assert_criterion(8);
}

#[test]
fn criterion_09_large_deviations() {
    assert_criterion(9);
}

#[test]
fn criterion_10_moderate_deviations() {
    assert_criterion(10);
}

#[test]
fn criterion_11_iterated_logarithm() {
    assert_criterion(11);
}

#[test]
fn criterion_12_ctrw_scaling() {
    assert_criterion(12);
}

#[test]
fn criterion_13_determinism() {
    assert_criterion(13);
}
