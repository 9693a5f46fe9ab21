//! Invariant Ricci curvature and Einstein metrics on homogeneous fibrations
//! G/L -> G/K of compact semisimple Lie groups.
//!
//! The pipeline: build a compact semisimple Lie algebra g with a subalgebra
//! chain l ⊂ k ⊂ g ([`liealg`], [`catalog`]), split the isotropy complement
//! into irreducible pieces ([`decomp`]), extract the Casimir and bracket-form
//! constants that control curvature ([`casimir`]), evaluate the Ricci tensor
//! of invariant metrics along three independent routes ([`ricci`]), and solve
//! the Einstein equations for adapted and binormal metrics ([`solver`]).

pub mod casimir;
pub mod catalog;
pub mod decomp;
pub mod error;
pub mod exact;
pub mod fibration;
pub mod input;
pub mod liealg;
pub mod linalg;
pub mod report;
pub mod ricci;
pub mod solver;
pub mod subspace;
pub mod tol;

pub use error::{EinfibError, Result};
pub use fibration::{Fibration, Setup};
pub use liealg::LieAlgebra;
pub use ricci::MetricSpec;
pub use subspace::Subspace;
pub use tol::Tolerance;
