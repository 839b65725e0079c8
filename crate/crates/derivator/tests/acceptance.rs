//! The acceptance gate: every characterization theorem exercised at desk
//! scale in both models, one test per criterion, each printing a pass/fail
//! line. Trial counts and tolerances are pinned here; all comparisons are
//! exact (dimension tables and quasi-isomorphism checks over F_p).

use derivator::suites::{run_suite, SuiteConfig};

const FIVE_MINUTES_MS: u128 = 300_000;

fn run(criterion: usize, label: &str, suite: &str, trials: usize, budget: usize) {
    let cfg = SuiteConfig {
        seed: 1,
        trials,
        primes: vec![2, 3, 7],
        budget,
        ..Default::default()
    };
    let report = run_suite(suite, &cfg).expect("suite must run");
    let status = if report.passed { "PASS" } else { "FAIL" };
    println!("criterion {} ({}): {} [{} ms]", criterion, label, status, report.wall_ms);
    for c in report.checks.iter().filter(|c| !c.pass) {
        println!("  failed: {} -- {}", c.name, c.detail);
    }
    assert!(report.passed, "criterion {} ({}) failed", criterion, label);
    assert!(
        report.wall_ms < FIVE_MINUTES_MS,
        "criterion {} exceeded the five-minute budget: {} ms",
        criterion,
        report.wall_ms
    );
}

#[test]
fn acceptance_1_total_cofiber_equivalence() {
    // >= 100 random squares per prime for the dimension tables, >= 10
    // figure witnesses with explicit quasi-isomorphisms and audits
    run(1, "total cofiber versus iterated cones", "tcof-equivalence", 100, 18);
}

#[test]
fn acceptance_2_vanishing_on_cocartesian_squares() {
    // >= 100 generated cocartesian squares and >= 100 arbitrary squares
    // for the seven-condition coincidence (34 per prime each)
    run(2, "vanishing on cocartesian squares", "cocartesian-vanishing", 102, 18);
}

#[test]
fn acceptance_3_sigma_f_c_comparison() {
    // >= 100 random morphisms, plus the represented-model contrast
    run(3, "Sigma F equals C and F equals Omega C", "sigma-f-c", 102, 18);
}

#[test]
fn acceptance_4_commuting_homotopy_finite_kan() {
    // >= 25 canonical mates and >= 100 dimension-table comparisons across
    // the catalogued pairs
    run(4, "commuting homotopy finite (co)limits", "commuting-kan", 100, 16);
}

#[test]
fn acceptance_5_pointedness() {
    run(5, "pointedness commutations in both models", "pointedness", 100, 14);
}

#[test]
fn acceptance_6_nonstability_witness() {
    // the witness dims 0 versus 1, and Sigma = 0 on >= 20 random spaces
    run(6, "non-stability witness in the represented model", "nonstable-witness", 100, 18);
}

#[test]
fn acceptance_7_stability_detectors() {
    // cocartesian iff cartesian on >= 200 squares (67 per prime), strongly
    // cocartesian 3-cubes strongly cartesian on >= 25 trials
    run(7, "cocartesian iff cartesian and strong cubes", "stability-detectors", 201, 18);
}

#[test]
fn acceptance_8_adjoint_chains() {
    // >= 50 trials per adjoint pair, naturality on generators, the
    // non-extension witness, and >= 25 Barratt-Puppe windows
    run(8, "adjoint chains and Barratt-Puppe windows", "adjoint-chains", 300, 12);
}

#[test]
fn acceptance_9_oracle_equivalence() {
    // the Kan-built cone, fiber, suspension and loop against the mapping
    // cone and fiber formulas, on >= 100 generated morphisms
    run(9, "oracle equivalence of cones and fibers", "oracle-equivalence", 102, 18);
}
