//! The acceptance battery: twelve exhaustive desk-scale checks, one test
//! per criterion, each printing a pass/fail line and holding its stated
//! time budget.
//!
//! Criterion 7 asserts that every linear-hyperplane preimage at (2, 2) is a
//! maximal subspace with connected complement and spanning images. The
//! battery finds 42 counterexamples among the 255 hyperplanes (all of size
//! 9, the nilpotent tensor type); the statement holds from n = 3 on (see
//! tests/battery_extra.rs) but genuinely fails in the generalized hexagon,
//! so that test is expected to stay red. The README documents the
//! counterexample.

use flagpg::battery::{self, CriterionOutcome};
use std::time::{Duration, Instant};

fn run(budget: Duration, battery: impl FnOnce() -> CriterionOutcome) {
    let start = Instant::now();
    let outcome = battery();
    let elapsed = start.elapsed();
    let verdict = if outcome.pass {
        "PASS"
    } else if outcome.inconclusive {
        "INCONCLUSIVE"
    } else {
        "FAIL"
    };
    println!(
        "{:<12} {} — {} [{:?}]",
        verdict, outcome.id, outcome.details, elapsed
    );
    assert!(
        elapsed <= budget,
        "{} exceeded its {:?} budget: {:?}",
        outcome.id,
        budget,
        elapsed
    );
    assert!(
        outcome.pass,
        "{} failed: {} (witness: {:?})",
        outcome.id, outcome.details, outcome.witness
    );
}

#[test]
fn criterion_01_geometry_sanity() {
    run(Duration::from_secs(5), battery::criterion_geometry_sanity);
}

#[test]
fn criterion_02_generalized_hexagon() {
    run(Duration::from_secs(1), battery::criterion_hexagon);
}

#[test]
fn criterion_03_symps_and_special_pairs() {
    run(Duration::from_secs(10), battery::criterion_symps);
}

#[test]
fn criterion_04_eigen_containment() {
    run(Duration::from_secs(30), battery::criterion_eigen_containment);
}

#[test]
fn criterion_05_quasi_singular_hyperplanes() {
    run(Duration::from_secs(30), battery::criterion_quasi_singular);
}

#[test]
fn criterion_06_perp_classes() {
    run(Duration::from_secs(60), battery::criterion_perp_classes);
}

#[test]
fn criterion_07_linear_hyperplane_battery() {
    // Expected red: 42 of the 255 preimages at (2, 2) are not maximal
    // subspaces (verified independently by hand for the functional picking
    // the (0,2) and (1,0) matrix entries); the same 42 have disconnected
    // complements and deficient spans. The claim is a theorem for n >= 3
    // only. Kept as stated rather than weakened.
    run(Duration::from_secs(60), battery::criterion_linear_hyperplanes);
}

#[test]
fn criterion_08_smat_symmetry() {
    run(Duration::from_secs(60), battery::criterion_smat_equivalence);
}

#[test]
fn criterion_09_spread_battery() {
    run(Duration::from_secs(60), battery::criterion_spread_battery);
}

#[test]
fn criterion_10_piecemeal_battery() {
    run(Duration::from_secs(600), || {
        battery::criterion_piecemeal(1_000_000)
    });
}

#[test]
fn criterion_11_spread_search_catalog() {
    run(Duration::from_secs(600), || {
        battery::criterion_spread_search(1_000_000, 1_000_000)
    });
}

#[test]
fn criterion_12_gram_diagnostics() {
    run(Duration::from_secs(60), battery::criterion_gram);
}
