//! Shared fixtures for the criterion benches: fully analyzed setups so the
//! benches measure curvature and solver work, not catalog construction.

use einfib_core::catalog::kowalski::kowalski_fibration;
use einfib_core::catalog::{catalog_fibrations, CatalogFibration};
use einfib_core::fibration::Setup;
use einfib_core::tol::Tolerance;

fn analyze(cf: CatalogFibration) -> Setup {
    let name = cf.name.clone();
    let prescribed = cf.prescribed();
    cf.fibration
        .analyze(Tolerance::default(), prescribed)
        .unwrap_or_else(|e| panic!("analysis of {name}: {e}"))
}

/// Analyzed setup for a catalog fibration, by its catalog name.
pub fn bundle_setup(name: &str) -> Setup {
    let cf = catalog_fibrations()
        .expect("catalog builds")
        .into_iter()
        .find(|cf| cf.name == name)
        .unwrap_or_else(|| panic!("no catalog fibration named {name}"));
    analyze(cf)
}

/// Analyzed setup for the su(2)-product chain with the given split.
pub fn product_setup(n: usize, p: usize) -> Setup {
    analyze(kowalski_fibration("su2", n, p).expect("product chain builds"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        let bundle = bundle_setup("so(5)/(so(2)+so(3))");
        assert_eq!(bundle.blocks(), 2);
        let product = product_setup(5, 2);
        assert_eq!(product.blocks(), 3);
    }
}
