//! Frozen end-to-end values for the Einstein solvers: closed-form ratios of
//! the circle bundles, the product-chain adapted family, the special-family
//! gates, and the structure conditions, all pinned to precomputed numbers.

use einfib_core::catalog::bundles::{circle_bundle_so, circle_bundle_so_even, circle_bundle_su};
use einfib_core::catalog::kowalski::{adapted_closed_form, kowalski_fibration};
use einfib_core::ricci::MetricSpec;
use einfib_core::solver::{
    binormal_alpha_family, circle_bundle_x, fiber_base_relations, necessary_conditions,
    solve_adapted, solve_binormal, AdaptedOptions, Certainty,
};
use einfib_core::tol::Tolerance;

#[test]
fn odd_rotation_bundle_frozen_solution() {
    let tol = Tolerance::default();
    let cf = circle_bundle_so(5).unwrap();
    let setup = cf.fibration.analyze(tol, None).unwrap();
    let rep = solve_binormal(&setup).unwrap();
    assert!(rep.certified_complete);
    assert_eq!(rep.xs.len(), 1);
    assert!((rep.xs[0] - 2.0 / 3.0).abs() < 1e-12, "x = {}", rep.xs[0]);
    let sol = &rep.solutions[0];
    assert!((sol.einstein_constant - 0.5625).abs() < 1e-10);
    assert!(sol.defect < 1e-10);
    assert!(sol.scaled_defect < 1e-10);
    assert!((sol.scaled_einstein_constant - 0.5625 / 2.0).abs() < 1e-10);
}

#[test]
fn circle_reports_carry_the_symmetric_base_form() {
    let tol = Tolerance::default();
    for (cf, expect_x) in [
        (circle_bundle_su(3, 1).unwrap(), 0.75),
        (circle_bundle_su(4, 1).unwrap(), 2.0 / 3.0),
        (circle_bundle_so_even(3).unwrap(), 2.0 / 3.0),
    ] {
        let name = cf.name.clone();
        let closed = cf.closed_form_x.unwrap();
        assert!((closed - expect_x).abs() < 1e-15, "{name}: table value");
        let setup = cf.fibration.analyze(tol, None).unwrap();
        let circle = circle_bundle_x(&setup)
            .unwrap_or_else(|| panic!("{name}: circle-fiber report missing"));
        assert!(
            (circle.x - expect_x).abs() < 1e-10,
            "{name}: closed form {expect_x} vs report {}",
            circle.x
        );
        assert!(circle.consistency < 1e-10, "{name}");
        assert!(circle.symmetric_base_form, "{name}");
        let rep = solve_binormal(&setup).unwrap();
        assert_eq!(rep.xs.len(), 1, "{name}");
        assert!((rep.xs[0] - expect_x).abs() < 1e-9, "{name}");
    }
}

#[test]
fn structure_conditions_on_the_even_grassmannian_bundle() {
    let tol = Tolerance::default();
    let cf = circle_bundle_su(4, 2).unwrap();
    let setup = cf.fibration.analyze(tol, None).unwrap();
    let cond = necessary_conditions(&setup).unwrap();
    assert!(cond.fiber.holds);
    assert!(matches!(cond.fiber.certainty, Certainty::Certified));
    assert_eq!(cond.fiber.null_dim, 1);
    assert!(cond.fiber.residual < 1e-9);
    // single horizontal summand: only the balanced combination maps into k
    assert_eq!(cond.base.null_dim, 1);
    assert!(!cond.base.holds);
}

#[test]
fn product_chain_adapted_family_is_frozen() {
    let acf = adapted_closed_form(6, 2).unwrap();
    assert!((acf.x1 - 0.6775508818919328).abs() < 1e-12, "x1 = {}", acf.x1);
    assert!((acf.x2 - 0.7642684508242629).abs() < 1e-12, "x2 = {}", acf.x2);
    assert!(acf.cubic_residual < 1e-10);
    // cubic at 1 equals p (q + 2) (q - 1) (n - 4) = 2 * 6 * 3 * 2
    let c = acf.cubic;
    let at_one = c[0] + c[1] + c[2] + c[3];
    assert!((at_one - 72.0).abs() < 1e-9);
    assert!(acf.interval.0 < acf.x1 && acf.x1 < acf.interval.1);
}

#[test]
fn adapted_search_matches_the_closed_form_on_the_product_chain() {
    let tol = Tolerance::default();
    let cf = kowalski_fibration("su2", 6, 2).unwrap();
    let prescribed = cf.prescribed();
    let setup = cf.fibration.analyze(tol, prescribed).unwrap();
    let rep = solve_adapted(&setup, &AdaptedOptions::default()).unwrap();
    assert_eq!(
        rep.solutions.len(),
        2,
        "expected the standard and one further metric, got {:?}",
        rep.solutions
            .iter()
            .map(|s| s.metric.nu.clone())
            .collect::<Vec<_>>()
    );
    let acf = adapted_closed_form(6, 2).unwrap();
    let expected: [&MetricSpec; 2] = [&acf.standard, &acf.nonstandard];
    for want in expected {
        let hit = rep.solutions.iter().any(|s| {
            s.metric
                .nu
                .iter()
                .zip(want.nu.iter())
                .all(|(a, b)| (a - b).abs() < 1e-8)
        });
        assert!(hit, "missing solution {:?}", want.nu);
    }
    for s in &rep.solutions {
        assert!(s.defect < 1e-7);
        assert!(s.scaled_defect < 1e-7);
    }
}

#[test]
fn balanced_product_chain_relations_reconstruct_the_metric() {
    let tol = Tolerance::default();
    let cf = kowalski_fibration("su2", 6, 3).unwrap();
    let prescribed = cf.prescribed();
    let setup = cf.fibration.analyze(tol, prescribed).unwrap();
    let rep = solve_adapted(&setup, &AdaptedOptions::default()).unwrap();
    let nonstandard = rep
        .solutions
        .iter()
        .find(|s| (s.metric.nu[1] - 1.0).abs() > 1e-6)
        .expect("non-normal solution");
    // equal halves: equal horizontal coefficients
    assert!((nonstandard.metric.nu[1] - nonstandard.metric.nu[2]).abs() < 1e-9);
    let rel = fiber_base_relations(&setup, &nonstandard.metric, nonstandard.einstein_constant)
        .unwrap();
    assert!(rel.mu_ratio_dev < 1e-8, "mu ratios: {}", rel.mu_ratio_dev);
    assert!(
        rel.reconstruction_dev < 1e-8,
        "reconstruction: {}",
        rel.reconstruction_dev
    );
    assert!(rel.e_base > rel.e_total);
}

/// The proportional-Casimir shortcut only opens for two or more fiber
/// summands with distinct nonzero Casimir scalars; none of the catalog
/// setups qualifies, and on a doctored copy with a consistent synthetic
/// family the pinned ratio comes out exactly.
#[test]
fn alpha_family_gate_and_formula() {
    let tol = Tolerance::default();
    let cf = circle_bundle_so(5).unwrap();
    let setup = cf.fibration.analyze(tol, None).unwrap();
    assert!(binormal_alpha_family(&setup).is_none(), "single fiber summand");

    let cf = kowalski_fibration("su2", 5, 2).unwrap();
    let prescribed = cf.prescribed();
    let mut doctored = cf.fibration.analyze(tol, prescribed).unwrap();
    // repartition the blocks: two "fiber" summands with c_l = 4 gamma
    doctored.s = 2;
    doctored.r = 1;
    doctored.constants.gamma = vec![0.1, 0.3];
    doctored.constants.c_l_p = vec![0.4, 1.2];
    let rep = binormal_alpha_family(&doctored).expect("gate should open");
    assert!((rep.alpha - 4.0).abs() < 1e-12);
    assert!(rep.alpha_dev < 1e-12);
    assert!((rep.x - 1.0 / 3.0).abs() < 1e-12);
    assert_eq!(rep.inverse_x_rational, Some((3, 1)));
}
