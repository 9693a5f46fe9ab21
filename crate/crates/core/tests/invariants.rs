//! Structural-identity suite: every catalog setup must satisfy the full set
//! of internal invariants (Jacobi, Killing ad-invariance, Casimir partition
//! and additivity, bracket-form symmetries, trace sum rules) at the working
//! tolerance, and curvature must transform correctly under metric scaling.

use std::sync::OnceLock;

use einfib_core::catalog::catalog_fibrations;
use einfib_core::fibration::{invariant_residuals, Setup};
use einfib_core::ricci::{einstein_quality, ricci_connection, MetricSpec};
use einfib_core::tol::Tolerance;

fn all_setups() -> &'static Vec<(String, Setup)> {
    static SETUPS: OnceLock<Vec<(String, Setup)>> = OnceLock::new();
    SETUPS.get_or_init(|| {
        let tol = Tolerance::default();
        catalog_fibrations()
            .expect("catalog construction")
            .into_iter()
            .map(|cf| {
                let name = cf.name.clone();
                let prescribed = cf.prescribed();
                let setup = cf
                    .fibration
                    .analyze(tol, prescribed)
                    .unwrap_or_else(|e| panic!("analysis of {name}: {e}"));
                (name, setup)
            })
            .collect()
    })
}

#[test]
fn every_catalog_setup_passes_the_invariant_suite() {
    let eps = 1e-9;
    for (name, setup) in all_setups() {
        let inv = invariant_residuals(setup).unwrap_or_else(|e| panic!("{name}: {e}"));
        let max = inv.max();
        assert!(
            max < eps,
            "{name}: worst invariant residual {max:.3e} (jacobi {:.1e}, killing {:.1e}, \
             partition {:.1e}, q-symmetry {:.1e}, sum rules {:.1e}/{:.1e}, scalar {:.1e})",
            inv.jacobi,
            inv.killing_ad_invariance,
            inv.casimir_partition,
            inv.q_symmetry,
            inv.gamma_sum_rule,
            inv.r_sum_rule,
            inv.scalar_deviation,
        );
    }
}

#[test]
fn setup_block_data_is_consistent() {
    for (name, setup) in all_setups() {
        assert_eq!(
            setup.blocks(),
            setup.s + setup.r,
            "{name}: block count mismatch"
        );
        let total: usize = (0..setup.blocks()).map(|i| setup.block_dim(i)).sum();
        assert_eq!(total, setup.dim_m(), "{name}: block dims do not tile m");
        for (x, &blk) in setup.block_of.iter().enumerate() {
            assert!(
                setup.ranges[blk].contains(&x),
                "{name}: block_of[{x}] = {blk} outside its range"
            );
        }
    }
}

/// Scaling the metric by c divides the Einstein constant by c and leaves the
/// defect unchanged; checked on a spread of anisotropic metrics.
#[test]
fn curvature_scales_covariantly() {
    use rand::Rng;
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5343414c45);
    let setups = all_setups();
    // a small representative sample keeps the sweep fast
    let picks = [
        "so(5)/(so(2)+so(3))",
        "su(4)/s(u(2)+u(2))",
        "su(2)^5/delta(2+3)",
    ];
    for pick in picks {
        let (name, setup) = setups
            .iter()
            .find(|(n, _)| n == pick)
            .unwrap_or_else(|| panic!("{pick} not in catalog"));
        for _ in 0..12 {
            let nu: Vec<f64> = (0..setup.blocks())
                .map(|_| rng.random_range(0.5..2.0))
                .collect();
            let c: f64 = rng.random_range(0.3..3.0);
            let m1 = MetricSpec::new(nu);
            let m2 = m1.scaled(c);
            let r1 = ricci_connection(setup, &m1).unwrap();
            let r2 = ricci_connection(setup, &m2).unwrap();
            let (e1, d1) = einstein_quality(setup, &m1, &r1);
            let (e2, d2) = einstein_quality(setup, &m2, &r2);
            assert!(
                (e1 / c - e2).abs() < 1e-9 * (1.0 + e1.abs()),
                "{name}: Einstein constant did not scale as 1/c"
            );
            assert!(
                (d1 - d2).abs() < 1e-9 * (1.0 + d1),
                "{name}: defect is not scale-invariant"
            );
        }
    }
}
