//! Tolerances. One user-facing epsilon drives validation and scalar checks;
//! the remaining constants are fixed contract values used by tests and the
//! solution verifier.

/// Default working tolerance for validation and scalar-deviation checks.
/// Structure constants of catalog algebras are exact small rationals, so f64
/// arithmetic keeps residuals near 1e-13; 1e-9 leaves three orders of margin
/// while still rejecting anything structurally wrong.
pub const EPS_DEFAULT: f64 = 1e-9;

/// Every emitted Einstein solution must reproduce, through the curvature
/// oracle, a Ricci tensor within this distance of E·g (entrywise max).
pub const TOL_SOLUTION_DEFECT: f64 = 1e-7;

/// Pairwise agreement required of the three independent Ricci routes.
pub const TOL_RICCI_PATHS: f64 = 1e-8;

/// Metric reconstruction from (E, E_fiber, E_base) must reproduce the
/// original coefficients to this accuracy.
pub const TOL_RECONSTRUCTION: f64 = 1e-8;

/// Eigenvalue clusters of a generic commutant element are merged when closer
/// than this factor times the working epsilon (relative to the spectral
/// scale). Distinct Casimir-type eigenvalues in the catalog differ by O(1/n),
/// far above 10·eps.
pub const CLUSTER_FACTOR: f64 = 10.0;

/// Two normalized metrics are considered the same solution when their
/// coefficient vectors differ by less than this (after fixing the first
/// fiber coefficient to 1).
pub const DEDUP_DISTANCE: f64 = 1e-6;

/// Working tolerance, threaded through validation and decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub eps: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { eps: EPS_DEFAULT }
    }
}

impl Tolerance {
    pub fn new(eps: f64) -> Self {
        Tolerance { eps }
    }

    /// Threshold for merging eigenvalue clusters at spectral scale `scale`.
    pub fn cluster_gap(&self, scale: f64) -> f64 {
        CLUSTER_FACTOR * self.eps * scale.max(1.0)
    }
}
