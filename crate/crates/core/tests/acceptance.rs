//! The release gate: one test per published acceptance criterion. Each test
//! prints a single PASS/FAIL line (run with `--nocapture` to see them all)
//! and enforces the pinned tolerances and runtime budgets.

use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::time::Instant;

use einfib_core::catalog::kowalski::{
    adapted_closed_form, cubic_coefficients, expected_binormal_xs, kowalski_fibration,
};
use einfib_core::catalog::table::representative_rows;
use einfib_core::catalog::{bundles, catalog_fibrations};
use einfib_core::fibration::{invariant_residuals, Setup};
use einfib_core::linalg::max_abs;
use einfib_core::ricci::{
    horizontal_coefficients, ricci_connection, ricci_q_forms, ricci_trace_form, MetricSpec,
};
use einfib_core::solver::{
    fiber_base_relations, solve_adapted, solve_binormal, AdaptedOptions, VerifiedMetric,
};
use einfib_core::tol::Tolerance;

fn criterion<F: FnOnce() + std::panic::UnwindSafe>(number: u32, label: &str, body: F) {
    let start = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(body));
    let elapsed = start.elapsed().as_secs_f64();
    match result {
        Ok(()) => println!("criterion {number} ({label}): PASS in {elapsed:.2}s"),
        Err(e) => {
            println!("criterion {number} ({label}): FAIL in {elapsed:.2}s");
            resume_unwind(e);
        }
    }
}

fn analyzed(cf: einfib_core::catalog::CatalogFibration) -> (String, Setup) {
    let name = cf.name.clone();
    let prescribed = cf.prescribed();
    let setup = cf
        .fibration
        .analyze(Tolerance::default(), prescribed)
        .unwrap_or_else(|e| panic!("analysis of {name}: {e}"));
    (name, setup)
}

const KOWALSKI_PAIRS: [(usize, usize); 9] = [
    (4, 2),
    (5, 2),
    (6, 2),
    (6, 3),
    (7, 2),
    (7, 3),
    (8, 2),
    (8, 3),
    (8, 4),
];

const ADAPTED_CASES: [(usize, usize); 8] = [
    (5, 2),
    (6, 2),
    (6, 3),
    (7, 2),
    (7, 3),
    (8, 2),
    (8, 3),
    (8, 4),
];

fn check_scaled(name: &str, sol: &VerifiedMetric) {
    assert!(
        sol.defect < 1e-7,
        "{name}: defect {:.3e} for {:?}",
        sol.defect,
        sol.metric.nu
    );
    assert!(
        sol.scaled_defect < 1e-7,
        "{name}: doubled-metric defect {:.3e} for {:?}",
        sol.scaled_defect,
        sol.metric.nu
    );
    assert!(
        (sol.scaled_einstein_constant - sol.einstein_constant / 2.0).abs()
            < 1e-9 * (1.0 + sol.einstein_constant.abs()),
        "{name}: Einstein constant did not halve under doubling"
    );
}

#[test]
fn criterion_1_circle_bundle_table() {
    criterion(1, "circle-bundle table", || {
        let start = Instant::now();
        let cases: Vec<einfib_core::catalog::CatalogFibration> = vec![
            bundles::circle_bundle_su(3, 1).unwrap(),
            bundles::circle_bundle_su(4, 1).unwrap(),
            bundles::circle_bundle_su(4, 2).unwrap(),
            bundles::circle_bundle_su(5, 1).unwrap(),
            bundles::circle_bundle_su(5, 2).unwrap(),
            bundles::circle_bundle_so(5).unwrap(),
            bundles::circle_bundle_so(6).unwrap(),
            bundles::circle_bundle_so(7).unwrap(),
            bundles::circle_bundle_so_even(3).unwrap(),
            bundles::circle_bundle_so_even(4).unwrap(),
            bundles::circle_bundle_sp(2).unwrap(),
            bundles::circle_bundle_sp(3).unwrap(),
        ];
        for cf in cases {
            let closed = cf.closed_form_x.expect("closed form");
            let (name, setup) = analyzed(cf);
            let rep = solve_binormal(&setup).unwrap();
            assert!(rep.certified_complete, "{name}");
            assert_eq!(rep.xs.len(), 1, "{name}: expected a unique ratio");
            assert!(
                (rep.xs[0] - closed).abs() < 1e-9,
                "{name}: solver {} vs closed form {closed}",
                rep.xs[0]
            );
        }
        // exceptional rows are arithmetic only
        let rows = representative_rows();
        let e6 = rows.iter().find(|r| r.name.starts_with("e6")).unwrap();
        assert_eq!((e6.x_num, e6.x_den), (17, 32));
        let e7 = rows.iter().find(|r| r.name.starts_with("e7")).unwrap();
        assert_eq!((e7.x_num, e7.x_den), (14, 27));
        assert!((e6.x - 17.0 / 32.0).abs() < 1e-15);
        assert!((e7.x - 14.0 / 27.0).abs() < 1e-15);
        let elapsed = start.elapsed().as_secs_f64();
        assert!(elapsed < 30.0, "table sweep took {elapsed:.1}s (budget 30s)");
    });
}

#[test]
fn criterion_2_product_chain_binormal() {
    criterion(2, "product-chain binormal", || {
        let start = Instant::now();
        for (n, p) in KOWALSKI_PAIRS {
            let cf = kowalski_fibration("su2", n, p).unwrap();
            let (name, setup) = analyzed(cf);
            let rep = solve_binormal(&setup).unwrap();
            assert!(rep.certified_complete, "{name}");
            let expected = expected_binormal_xs(n, p).unwrap();
            assert_eq!(
                rep.xs.len(),
                expected.len(),
                "{name}: got ratios {:?}, expected {expected:?}",
                rep.xs
            );
            for (got, want) in rep.xs.iter().zip(expected.iter()) {
                assert!(
                    (got - want).abs() < 1e-9,
                    "{name}: ratio {got} vs expected {want}"
                );
            }
        }
        let elapsed = start.elapsed().as_secs_f64();
        assert!(elapsed < 10.0, "binormal sweep took {elapsed:.1}s (budget 10s)");
    });
}

#[test]
fn criterion_3_product_chain_adapted() {
    criterion(3, "product-chain adapted", || {
        let start = Instant::now();
        for (n, p) in ADAPTED_CASES {
            let q = n - p;
            let cf = kowalski_fibration("su2", n, p).unwrap();
            let (name, setup) = analyzed(cf);
            let rep = solve_adapted(&setup, &AdaptedOptions::default()).unwrap();
            assert_eq!(
                rep.solutions.len(),
                2,
                "{name}: expected standard + one further solution, got {:?}",
                rep.solutions
                    .iter()
                    .map(|s| s.metric.nu.clone())
                    .collect::<Vec<_>>()
            );
            let standard = rep
                .solutions
                .iter()
                .find(|s| s.metric.nu.iter().all(|v| (v - 1.0).abs() < 1e-8))
                .unwrap_or_else(|| panic!("{name}: standard solution missing"));
            let nonstandard = rep
                .solutions
                .iter()
                .find(|s| s.metric.nu.iter().any(|v| (v - 1.0).abs() > 1e-6))
                .unwrap_or_else(|| panic!("{name}: non-standard solution missing"));
            check_scaled(&name, standard);
            check_scaled(&name, nonstandard);

            // the first base ratio solves the closed-form cubic inside the
            // pinned window, uniquely
            let x1 = nonstandard.metric.nu[0] / nonstandard.metric.nu[1];
            let acf = adapted_closed_form(n, p).unwrap();
            assert!((x1 - acf.x1).abs() < 1e-8, "{name}: x1 {x1} vs {}", acf.x1);
            let c = cubic_coefficients(n, p).unwrap();
            let t = ((c[0] * x1 + c[1]) * x1 + c[2]) * x1 + c[3];
            assert!(t.abs() < 1e-8, "{name}: cubic residual {t:.3e} at {x1}");
            let (lo, hi) = (n as f64 / (q as f64 * (p as f64 + 1.0)), n as f64 / q as f64);
            assert!(lo < x1 && x1 < hi, "{name}: {x1} outside ({lo}, {hi})");
            let x2 = nonstandard.metric.nu[0] / nonstandard.metric.nu[2];
            assert!((x2 - acf.x2).abs() < 1e-8, "{name}: x2 {x2} vs {}", acf.x2);

            // binormal (equal horizontal coefficients) exactly for p = q
            let binormal = (nonstandard.metric.nu[1] - nonstandard.metric.nu[2]).abs() < 1e-8;
            assert_eq!(binormal, p == q, "{name}: binormal iff equal halves");

            // base projection Einstein exactly for p = q
            let mu = nonstandard.metric.mu(&setup).to_vec();
            let r = horizontal_coefficients(&setup, &mu);
            let ratios: Vec<f64> = r.iter().zip(mu.iter()).map(|(r, m)| r / m).collect();
            let spread = (ratios[0] - ratios[1]).abs();
            assert_eq!(
                spread < 1e-8,
                p == q,
                "{name}: base Einstein spread {spread:.3e}"
            );
        }
        let elapsed = start.elapsed().as_secs_f64();
        assert!(elapsed < 60.0, "adapted sweep took {elapsed:.1}s (budget 60s)");
    });
}

#[test]
fn criterion_4_ricci_route_agreement() {
    criterion(4, "Ricci route agreement", || {
        use rand::Rng;
        use rand::SeedableRng;
        for cf in catalog_fibrations().unwrap() {
            if cf.fibration.algebra.dim() > 24 {
                continue;
            }
            let (name, setup) = analyzed(cf);
            let seed = name.bytes().fold(7u64, |a, b| a.wrapping_mul(131).wrapping_add(b as u64));
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..100 {
                let nu: Vec<f64> = (0..setup.blocks())
                    .map(|_| rng.random_range(0.4..2.5))
                    .collect();
                let metric = MetricSpec::new(nu);
                let a = ricci_connection(&setup, &metric).unwrap();
                let b = ricci_trace_form(&setup, &metric).unwrap();
                let c = ricci_q_forms(&setup, &metric).unwrap();
                let worst = max_abs(&(&a - &b))
                    .max(max_abs(&(&a - &c)))
                    .max(max_abs(&(&b - &c)));
                assert!(
                    worst < 1e-8,
                    "{name}: Ricci routes spread {worst:.3e} on {:?}",
                    metric.nu
                );
            }
        }
    });
}

#[test]
fn criterion_5_invariant_suite() {
    criterion(5, "invariant suite", || {
        for cf in catalog_fibrations().unwrap() {
            let (name, setup) = analyzed(cf);
            let inv = invariant_residuals(&setup).unwrap();
            assert!(
                inv.max() < 1e-9,
                "{name}: invariant residual {:.3e}",
                inv.max()
            );
        }
    });
}

#[test]
fn criterion_6_verification_closure() {
    criterion(6, "verification closure", || {
        // every solution emitted by the two solver paths, across both sweeps
        for cf in catalog_fibrations().unwrap() {
            let (name, setup) = analyzed(cf);
            let rep = solve_binormal(&setup).unwrap();
            assert!(!rep.solutions.is_empty(), "{name}: no binormal solution");
            for sol in &rep.solutions {
                check_scaled(&name, sol);
            }
        }
        for (n, p) in ADAPTED_CASES {
            let cf = kowalski_fibration("su2", n, p).unwrap();
            let (name, setup) = analyzed(cf);
            let rep = solve_adapted(&setup, &AdaptedOptions::default()).unwrap();
            for sol in &rep.solutions {
                check_scaled(&name, sol);
            }
        }
    });
}

#[test]
fn criterion_7_fiber_base_relations() {
    criterion(7, "fiber/base relations", || {
        for (n, p) in [(6, 3), (8, 4)] {
            let cf = kowalski_fibration("su2", n, p).unwrap();
            let (name, setup) = analyzed(cf);
            let rep = solve_adapted(&setup, &AdaptedOptions::default()).unwrap();
            assert_eq!(rep.solutions.len(), 2, "{name}");
            for sol in &rep.solutions {
                let rel =
                    fiber_base_relations(&setup, &sol.metric, sol.einstein_constant).unwrap();
                assert!(
                    rel.mu_ratio_dev < 1e-8,
                    "{name}: horizontal ratio law violated by {:.3e} on {:?}",
                    rel.mu_ratio_dev,
                    sol.metric.nu
                );
                assert!(
                    rel.reconstruction_dev < 1e-8,
                    "{name}: reconstruction off by {:.3e} on {:?}",
                    rel.reconstruction_dev,
                    sol.metric.nu
                );
            }
        }
    });
}
