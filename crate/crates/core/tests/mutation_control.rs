//! A wrong Beta-function denominator must be caught by the check suite.

use spinclone_core::fidelity::moment_unchecked;
use spinclone_core::verify::{all_passed, Verifier};

/// `(p/2)! (q/2)! / (2d)!` instead of `/ (2d - 1)!`.
fn tampered(d: usize, n_out: usize, k_out: usize, k: usize, n: usize) -> f64 {
    moment_unchecked(d, n_out, k_out, k, n) / (2 * d) as f64
}

#[test]
fn tampered_beta_fails_named_checks() {
    let outcomes = Verifier {
        moment: tampered,
        ..Verifier::default()
    }
    .run_all();
    assert!(!all_passed(&outcomes));
    let failed: Vec<&str> = outcomes
        .iter()
        .filter(|o| !o.passed)
        .map(|o| o.id.as_str())
        .collect();
    for id in ["1", "2", "4", "10"] {
        assert!(
            failed.contains(&id),
            "check {id} should fail; failed = {failed:?}"
        );
    }
    let line = outcomes.iter().find(|o| o.id == "10").unwrap().line();
    assert!(
        line.starts_with("[FAIL]") && line.contains("quadrature"),
        "{line}"
    );
}

#[test]
fn untampered_suite_passes() {
    assert!(all_passed(&Verifier::default().run_all()));
}
