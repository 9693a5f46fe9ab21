//! Real Lie algebras given by structure constants, with the Killing form.

use nalgebra::{DMatrix, DVector};

use crate::error::{EinfibError, Result};
use crate::exact::ExactStructure;
use crate::linalg::{max_abs, sym_eigen_sorted};
use crate::tol::Tolerance;

/// A finite-dimensional real Lie algebra presented by its structure tensor
/// [e_i, e_j] = sum_k c_ijk e_k. Stores the adjoint matrices ad_i (column j
/// holds the coordinates of [e_i, e_j]), the Killing form Phi and B = -Phi.
#[derive(Clone, Debug)]
pub struct LieAlgebra {
    dim: usize,
    ad: Vec<DMatrix<f64>>,
    killing: DMatrix<f64>,
    b: DMatrix<f64>,
}

/// Residuals measured by [`LieAlgebra::validate`].
#[derive(Clone, Debug)]
pub struct AlgebraChecks {
    pub antisymmetry_residual: f64,
    pub jacobi_residual: f64,
    pub b_min_eigenvalue: f64,
    pub b_max_eigenvalue: f64,
}

impl LieAlgebra {
    /// Build from explicit structure constants. Every nonzero c_ijk must be
    /// listed (both orientations); duplicate (i,j,k) triples are rejected.
    pub fn from_structure_entries(
        dim: usize,
        entries: &[(usize, usize, usize, f64)],
    ) -> Result<Self> {
        let mut ad = vec![DMatrix::zeros(dim, dim); dim];
        let mut seen = std::collections::HashSet::new();
        for &(i, j, k, v) in entries {
            if i >= dim || j >= dim || k >= dim {
                return Err(EinfibError::validation(format!(
                    "structure constant index ({i},{j},{k}) out of range for dimension {dim}"
                )));
            }
            if !seen.insert((i, j, k)) {
                return Err(EinfibError::validation(format!(
                    "duplicate structure constant entry ({i},{j},{k})"
                )));
            }
            ad[i][(k, j)] = v;
        }
        Ok(Self::from_ad(dim, ad))
    }

    pub fn from_exact(s: &ExactStructure) -> Self {
        let dim = s.dim;
        let mut ad = vec![DMatrix::zeros(dim, dim); dim];
        for (i, j, k, v) in s.entries_f64() {
            ad[i][(k, j)] = v;
        }
        Self::from_ad(dim, ad)
    }

    fn from_ad(dim: usize, ad: Vec<DMatrix<f64>>) -> Self {
        let mut killing = DMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in i..dim {
                let v = (&ad[i] * &ad[j]).trace();
                killing[(i, j)] = v;
                killing[(j, i)] = v;
            }
        }
        let b = -killing.clone();
        LieAlgebra {
            dim,
            ad,
            killing,
            b,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Killing form Phi as a matrix in the defining basis.
    pub fn killing(&self) -> &DMatrix<f64> {
        &self.killing
    }

    /// B = -Phi, positive definite exactly when the algebra is compact
    /// semisimple.
    pub fn b(&self) -> &DMatrix<f64> {
        &self.b
    }

    pub fn ad_basis(&self, i: usize) -> &DMatrix<f64> {
        &self.ad[i]
    }

    /// Adjoint matrix of an arbitrary element (coordinates in the basis).
    pub fn ad(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let mut m: DMatrix<f64> = DMatrix::zeros(self.dim, self.dim);
        for (i, &xi) in x.iter().enumerate() {
            if xi != 0.0 {
                m += &self.ad[i] * xi;
            }
        }
        m
    }

    pub fn bracket(&self, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
        let mut out = DVector::zeros(self.dim);
        for (i, &xi) in x.iter().enumerate() {
            if xi != 0.0 {
                out.axpy(xi, &(&self.ad[i] * y), 1.0);
            }
        }
        out
    }

    pub fn b_inner(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        (x.transpose() * &self.b * y)[(0, 0)]
    }

    /// Check antisymmetry, the Jacobi identity (as ad[x,y] = [ad x, ad y]),
    /// and that B = -Phi is positive definite (compact semisimple). Residuals
    /// are relative to the structure-constant scale.
    pub fn validate(&self, tol: Tolerance) -> Result<AlgebraChecks> {
        let d = self.dim;
        if d == 0 {
            return Err(EinfibError::validation("algebra has dimension 0"));
        }
        let scale = self
            .ad
            .iter()
            .map(max_abs)
            .fold(0.0f64, f64::max)
            .max(1.0);
        let mut anti = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    anti = anti.max((self.ad[i][(k, j)] + self.ad[j][(k, i)]).abs());
                }
            }
        }
        if anti > tol.eps * scale {
            return Err(EinfibError::validation(format!(
                "structure constants are not antisymmetric (residual {:.3e})",
                anti
            )));
        }
        let mut jac = 0.0f64;
        for i in 0..d {
            for j in (i + 1)..d {
                let lhs = self.ad(&self.ad[i].column(j).into_owned());
                let rhs = &self.ad[i] * &self.ad[j] - &self.ad[j] * &self.ad[i];
                jac = jac.max(max_abs(&(lhs - rhs)));
            }
        }
        if jac > tol.eps * scale * scale {
            return Err(EinfibError::validation(format!(
                "Jacobi identity fails (residual {:.3e})",
                jac
            )));
        }
        let (bvals, _) = sym_eigen_sorted(&self.b);
        let bmin = bvals[0];
        let bmax = *bvals.last().unwrap();
        if bmin <= tol.eps * bmax.max(1.0) {
            return Err(EinfibError::validation(format!(
                "Killing form is not negative definite (min eigenvalue of B = {:.3e}); \
                 the algebra is not compact semisimple",
                bmin
            )));
        }
        Ok(AlgebraChecks {
            antisymmetry_residual: anti,
            jacobi_residual: jac,
            b_min_eigenvalue: bmin,
            b_max_eigenvalue: bmax,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::classical::su;

    /// su(2) in the basis e1 = diag(i,-i), e2 = [[0,1],[-1,0]],
    /// e3 = [[0,i],[i,0]]: brackets [e1,e2] = 2e3, [e2,e3] = 2e1,
    /// [e3,e1] = 2e2 and Phi = -8 Id.
    #[test]
    fn su2_frozen_brackets_and_killing() {
        let alg = su(2).unwrap().algebra;
        assert_eq!(alg.dim(), 3);
        let e = |i: usize| {
            let mut v = DVector::zeros(3);
            v[i] = 1.0;
            v
        };
        // Catalog basis order for su(2): A_01, S_01, D_0; relabel to match
        // the classical (e1,e2,e3) frame: D_0 = e1, A_01 = e2, S_01 = e3.
        let (e1, e2, e3) = (e(2), e(0), e(1));
        assert_eq!(alg.bracket(&e1, &e2), e3.clone() * 2.0);
        assert_eq!(alg.bracket(&e2, &e3), e1.clone() * 2.0);
        assert_eq!(alg.bracket(&e3, &e1), e2.clone() * 2.0);
        let phi = alg.killing();
        assert!(max_abs(&(phi + 8.0 * DMatrix::identity(3, 3))) < 1e-12);
        alg.validate(Tolerance::default()).unwrap();
    }

    #[test]
    fn rejects_jacobi_violation() {
        // [e1,e2] = e2, [e2,e3] = e1: the (e1,e2,e3) Jacobi sum is e1.
        let entries = vec![
            (0usize, 1usize, 1usize, 1.0),
            (1, 0, 1, -1.0),
            (1, 2, 0, 1.0),
            (2, 1, 0, -1.0),
        ];
        let alg = LieAlgebra::from_structure_entries(3, &entries).unwrap();
        let err = alg.validate(Tolerance::default()).unwrap_err();
        assert!(err.to_string().contains("Jacobi"));
    }

    #[test]
    fn rejects_noncompact_structure() {
        // so(2,1)-type signs: [e1,e2] = e3, [e2,e3] = e1, [e3,e1] = -e2 is a
        // Lie algebra, but its Killing form is indefinite.
        let entries = vec![
            (0usize, 1usize, 2usize, 1.0),
            (1, 0, 2, -1.0),
            (1, 2, 0, 1.0),
            (2, 1, 0, -1.0),
            (2, 0, 1, -1.0),
            (0, 2, 1, 1.0),
        ];
        let alg = LieAlgebra::from_structure_entries(3, &entries).unwrap();
        let err = alg.validate(Tolerance::default()).unwrap_err();
        assert!(err.to_string().contains("not compact semisimple"));
    }

    #[test]
    fn rejects_duplicate_entries() {
        let entries = vec![(0usize, 1usize, 2usize, 1.0), (0, 1, 2, 2.0)];
        assert!(LieAlgebra::from_structure_entries(3, &entries).is_err());
    }
}
