//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! with its worst residual. All tolerances are pinned here.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::time::Instant;

use hopf_core::verify::{self, Options, PropertyReport};

const SEED: u64 = 0;

fn check(criterion: &str, started: Instant, budget_s: f64, reports: &[PropertyReport]) {
    let elapsed = started.elapsed().as_secs_f64();
    let pass = reports.iter().all(|r| r.pass) && elapsed <= budget_s;
    let worst = reports
        .iter()
        .map(|r| r.max_residual)
        .fold(0.0_f64, f64::max);
    println!(
        "{}: {criterion} (max residual {worst:.3e}, {elapsed:.2}s)",
        if pass { "PASS" } else { "FAIL" }
    );
    for r in reports {
        assert!(
            r.pass,
            "criterion '{criterion}' property {} failed: residual {:.3e} > {:.3e}\ncounterexample: {}",
            r.name,
            r.max_residual,
            r.tolerance,
            r.counterexample
                .as_ref()
                .map(|c| c.to_string())
                .unwrap_or_default()
        );
    }
    assert!(
        elapsed <= budget_s,
        "criterion '{criterion}' exceeded its runtime budget: {elapsed:.2}s > {budget_s}s"
    );
}

#[test]
fn criterion_01_root_and_flow_algebra() {
    let started = Instant::now();
    let opts = Options::new(SEED);
    let reports = vec![
        // k in {2..6} for every admissible class, coefficientwise 1e-12
        verify::root_composition(&opts, 3),
        // 200 seeded (t, s) pairs, 1e-10
        verify::flow_group_law(&opts, 200),
    ];
    check("1 root/flow algebra", started, 5.0, &reports);
}

#[test]
fn criterion_02_even_normalization() {
    let started = Instant::now();
    let opts = Options::new(SEED);
    // 100 seeded valid even lifts per class (IV, III, IIa, IIb, IIc, II'c),
    // identity verified to 1e-9, psi commutes with f.
    let reports = vec![verify::even_normalization(&opts, 100)];
    check("2 even normalization", started, 10.0, &reports);
}

#[test]
fn criterion_03_odd_normalization() {
    let started = Instant::now();
    let opts = Options::new(SEED);
    // canonical odd lifts c f^{1/2}, c' f^{1/2}, J f^{1/2}; 100 conjugated
    // lifts per admissible class including the IV-negative quaternionic case.
    let reports = vec![
        verify::odd_normalization(&opts, 100),
        verify::canonical_odd_squares(&opts, 10),
        verify::quaternionic_antilinear_square(&opts, 100),
    ];
    check("3 odd normalization", started, 10.0, &reports);
}

#[test]
fn criterion_04_parity_well_definedness() {
    let started = Instant::now();
    let opts = Options::new(SEED);
    // parity(phi o f^k) = parity(phi) and deck power shifts by 2k, k in [-3, 3]
    let reports = vec![verify::parity_well_defined(&opts, 100)];
    check("4 parity well-definedness", started, 10.0, &reports);
}

#[test]
fn criterion_05_differential_inequality() {
    let started = Instant::now();
    let opts = Options::new(SEED);
    let reports = vec![
        // 10^4 seeded points per class, eta' <= C eta + 1e-9
        verify::differential_inequality(&opts, 10_000),
        // class IV attains equality to 1e-12
        verify::differential_equality_iv(&opts, 10_000),
    ];
    check("5 differential inequality", started, 10.0, &reports);
}

#[test]
fn criterion_06_trivialization() {
    let started = Instant::now();
    let opts = Options::new(SEED);
    let reports = vec![
        // 10^3 seeded points per class, round trip to 1e-8
        verify::trivialization_round_trip(&opts, 1000),
        // canonical representatives of Z and f(Z) agree to 1e-8
        verify::hopf_canonical_representatives(&opts, 1000),
    ];
    check("6 trivialization", started, 20.0, &reports);
}

#[test]
fn criterion_07_classification_charts() {
    let started = Instant::now();
    let opts = Options::new(SEED);
    let reports = vec![
        // all seven routes, 10^3 seeded points each, equivariance to 1e-8
        verify::chart_equivariance(&opts, 1000),
        // a' o j' = a', a'' o j'' = a'' to 1e-12
        verify::cover_invariance(&opts, 1000),
        // forward o backward = id on model samples (chart type invariant)
        verify::chart_round_trip(&opts, 100),
    ];
    check("7 classification charts", started, 30.0, &reports);
}

#[test]
fn criterion_08_real_locus() {
    let started = Instant::now();
    let opts = Options::new(SEED);
    let reports = vec![
        // 50+ case grid against the diagonal sign rule, II'c tori, odd empty
        verify::locus_classifier_grid(&opts, 0),
        // sampling oracle: no near-fixed points of odd structures below 1e-3
        verify::odd_freeness(&opts, 250),
    ];
    check("8 real locus", started, 10.0, &reports);
}

#[test]
fn criterion_09_picard() {
    let started = Instant::now();
    let opts = Options::new(SEED);
    let reports = vec![
        // 200 seeded (parity, zeta, nu) against the closed-form circle rule
        verify::bundle_involution_agreement(&opts, 200),
        verify::pic_involution_properties(&opts, 200),
        // odd non-surjectivity set is exactly { zeta < 0 }
        verify::odd_nonsurjectivity_grid(&opts, 50),
        verify::circle_action_reaches_all(&opts, 100),
    ];
    check("9 picard", started, 10.0, &reports);
}

#[test]
fn criterion_10_automorphism_groups() {
    let started = Instant::now();
    let opts = Options::new(SEED);
    let reports = vec![
        // 200 seeded elements per class: idempotence + coset constancy
        verify::canonical_rep_idempotent(&opts, 200),
        verify::coset_multiplication_well_defined(&opts, 200),
        // Phi homomorphism on 100 seeded pairs to 1e-10
        verify::spinc_homomorphism(&opts, 100),
        // rho_r(a,d)(b) = a d^{-r} b law on 100 samples
        verify::iii_semidirect_law(&opts, 100),
    ];
    check("10 automorphism groups", started, 20.0, &reports);
}
