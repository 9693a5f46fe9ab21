//! Ready-made algebras and fibrations: the classical matrix families, the
//! circle-bundle chains over irreducible Hermitian symmetric bases, and the
//! n-fold product construction with prescribed base summands.

pub mod bundles;
pub mod classical;
pub mod kowalski;
pub mod table;

use crate::error::Result;
use crate::fibration::{Fibration, PrescribedSummands};
use crate::subspace::Subspace;

/// A fibration from the catalog, optionally carrying prescribed base
/// summands and a closed-form prediction for its binormal solution.
pub struct CatalogFibration {
    pub name: String,
    pub fibration: Fibration,
    pub prescribed_n: Option<Vec<Subspace>>,
    /// Predicted base-to-fiber ratio of the (non-normal) binormal Einstein
    /// metric, when the family has one in closed form.
    pub closed_form_x: Option<f64>,
    pub closed_form_x_exact: Option<(i64, i64)>,
}

impl CatalogFibration {
    pub fn prescribed(&self) -> Option<PrescribedSummands> {
        self.prescribed_n.clone().map(|n| PrescribedSummands {
            p: None,
            n: Some(n),
        })
    }
}

/// Every catalog fibration the test suites sweep: the circle bundles over
/// the four classical Hermitian symmetric families and a sample of the
/// product construction.
pub fn catalog_fibrations() -> Result<Vec<CatalogFibration>> {
    Ok(vec![
        bundles::circle_bundle_su(3, 1)?,
        bundles::circle_bundle_su(4, 1)?,
        bundles::circle_bundle_su(4, 2)?,
        bundles::circle_bundle_su(5, 1)?,
        bundles::circle_bundle_su(5, 2)?,
        bundles::circle_bundle_so(5)?,
        bundles::circle_bundle_so(6)?,
        bundles::circle_bundle_so(7)?,
        bundles::circle_bundle_so_even(3)?,
        bundles::circle_bundle_so_even(4)?,
        bundles::circle_bundle_sp(2)?,
        bundles::circle_bundle_sp(3)?,
        kowalski::kowalski_fibration("su2", 4, 2)?,
        kowalski::kowalski_fibration("su2", 5, 2)?,
        kowalski::kowalski_fibration("su2", 6, 3)?,
        kowalski::kowalski_fibration("su2", 8, 4)?,
    ])
}
