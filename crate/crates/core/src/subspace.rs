//! Subspaces of a Lie algebra in ambient coordinates, with B-orthonormal
//! bases and B-orthogonal complements.

use nalgebra::{DMatrix, DVector};

use crate::error::{EinfibError, Result};
use crate::liealg::LieAlgebra;
use crate::linalg::{b_orthonormalize, null_space};
use crate::tol::Tolerance;

/// A linear subspace, stored as a matrix whose columns are spanning vectors
/// in ambient coordinates. Columns are kept as given (tests and reports want
/// the caller's frame); orthonormalization happens on demand.
#[derive(Clone, Debug)]
pub struct Subspace {
    cols: DMatrix<f64>,
}

impl Subspace {
    pub fn from_columns(cols: DMatrix<f64>) -> Self {
        Subspace { cols }
    }

    pub fn from_vectors(ambient: usize, vs: &[DVector<f64>]) -> Self {
        let mut cols = DMatrix::zeros(ambient, vs.len());
        for (j, v) in vs.iter().enumerate() {
            cols.set_column(j, v);
        }
        Subspace { cols }
    }

    pub fn empty(ambient: usize) -> Self {
        Subspace {
            cols: DMatrix::zeros(ambient, 0),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            cols: DMatrix::identity(ambient, ambient),
        }
    }

    pub fn dim(&self) -> usize {
        self.cols.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.cols.nrows()
    }

    pub fn cols(&self) -> &DMatrix<f64> {
        &self.cols
    }

    /// Columns spanning the same space, orthonormal for the form `b`.
    pub fn b_onb(&self, b: &DMatrix<f64>, tol: Tolerance) -> Result<DMatrix<f64>> {
        b_orthonormalize(&self.cols, b, tol.eps)
    }

    /// Relative B-distance of `v` from this subspace (0 when contained).
    pub fn containment_residual(
        &self,
        b: &DMatrix<f64>,
        v: &DVector<f64>,
        tol: Tolerance,
    ) -> Result<f64> {
        let norm = (v.transpose() * b * v)[(0, 0)].sqrt();
        if norm == 0.0 {
            return Ok(0.0);
        }
        let onb = self.b_onb(b, tol)?;
        let proj = &onb * (onb.transpose() * (b * v));
        let diff = v - proj;
        Ok((diff.transpose() * b * &diff)[(0, 0)].max(0.0).sqrt() / norm)
    }

    /// Whether the two subspaces coincide at tolerance `tol` (mutual
    /// containment of basis vectors).
    pub fn same_space(&self, other: &Subspace, b: &DMatrix<f64>, tol: Tolerance) -> Result<bool> {
        if self.dim() != other.dim() {
            return Ok(false);
        }
        for j in 0..other.dim() {
            let r = self.containment_residual(b, &other.cols.column(j).into_owned(), tol)?;
            if r > tol.eps.sqrt() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// B-orthogonal complement of `small` inside `big`. The result's columns are
/// B-orthonormal.
pub fn complement_within(
    b: &DMatrix<f64>,
    big: &Subspace,
    small: &Subspace,
    tol: Tolerance,
) -> Result<Subspace> {
    let big_onb = big.b_onb(b, tol)?;
    if small.dim() == 0 {
        return Ok(Subspace::from_columns(big_onb));
    }
    let small_onb = small.b_onb(b, tol)?;
    let overlap = small_onb.transpose() * b * &big_onb;
    let ns = null_space(&overlap, tol.eps);
    let expected = big.dim() - small.dim();
    if ns.ncols() != expected {
        return Err(EinfibError::validation(format!(
            "orthogonal complement has dimension {} where {} was expected \
             (is the smaller space contained in the larger?)",
            ns.ncols(),
            expected
        )));
    }
    Ok(Subspace::from_columns(big_onb * ns))
}

/// Largest relative residual of [x_i, x_j] outside the span, with the
/// offending basis pair. Zero for a subalgebra.
pub fn closure_residual(
    alg: &LieAlgebra,
    sub: &Subspace,
    tol: Tolerance,
) -> Result<(f64, (usize, usize))> {
    let mut worst = (0.0f64, (0usize, 0usize));
    for i in 0..sub.dim() {
        for j in (i + 1)..sub.dim() {
            let br = alg.bracket(
                &sub.cols().column(i).into_owned(),
                &sub.cols().column(j).into_owned(),
            );
            if br.amax() == 0.0 {
                continue;
            }
            let r = sub.containment_residual(alg.b(), &br, tol)?;
            if r > worst.0 {
                worst = (r, (i, j));
            }
        }
    }
    Ok(worst)
}

/// Largest relative residual of [h_i, w_j] outside `module`, with the
/// offending (acting, module) index pair.
pub fn invariance_residual(
    alg: &LieAlgebra,
    acting: &Subspace,
    module: &Subspace,
    tol: Tolerance,
) -> Result<(f64, (usize, usize))> {
    let mut worst = (0.0f64, (0usize, 0usize));
    for i in 0..acting.dim() {
        for j in 0..module.dim() {
            let br = alg.bracket(
                &acting.cols().column(i).into_owned(),
                &module.cols().column(j).into_owned(),
            );
            let r = module.containment_residual(alg.b(), &br, tol)?;
            if r > worst.0 {
                worst = (r, (i, j));
            }
        }
    }
    Ok(worst)
}
