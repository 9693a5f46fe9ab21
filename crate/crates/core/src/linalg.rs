//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{EinfibError, Result};

/// Symmetric eigendecomposition with eigenvalues sorted ascending and the
/// eigenvector columns permuted to match.
pub fn sym_eigen_sorted(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let se = m.clone().symmetric_eigen();
    let n = se.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let vals: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut vecs = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vecs.set_column(dst, &se.eigenvectors.column(src));
    }
    (vals, vecs)
}

/// Orthonormal basis (columns) of the null space of `m`, i.e. all v with
/// m·v ≈ 0. Computed from the symmetric eigendecomposition of mᵀm, which
/// handles wide matrices uniformly. The requested relative threshold tol² on
/// the eigenvalues is floored at the eigensolver's own resolution, which is
/// machine epsilon relative to ‖mᵀm‖ — below that, a true zero and noise are
/// indistinguishable and must both count as null.
pub fn null_space(m: &DMatrix<f64>, tol: f64) -> DMatrix<f64> {
    let gram = m.transpose() * m;
    let (vals, vecs) = sym_eigen_sorted(&gram);
    let scale2 = vals.last().copied().unwrap_or(0.0).max(0.0);
    let rel = (tol * tol).max(1e-12);
    let cut = (rel * scale2).max(tol * tol);
    let k = vals.iter().take_while(|&&v| v < cut).count();
    vecs.columns(0, k).into_owned()
}

/// Entrywise max absolute value.
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0f64, |acc, &x| acc.max(x.abs()))
}

/// Build a matrix whose columns are the given vectors.
pub fn from_columns(ambient: usize, cols: &[DVector<f64>]) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(ambient, cols.len());
    for (j, c) in cols.iter().enumerate() {
        m.set_column(j, c);
    }
    m
}

/// Given independent columns `c` and a symmetric positive-definite form `b`,
/// return columns spanning the same space that are orthonormal with respect
/// to b. Uses the inverse square root of the Gram matrix, so the output is
/// basis-continuous and deterministic. Fails if the Gram matrix is singular
/// at tolerance `tol` (dependent columns).
pub fn b_orthonormalize(c: &DMatrix<f64>, b: &DMatrix<f64>, tol: f64) -> Result<DMatrix<f64>> {
    if c.ncols() == 0 {
        return Ok(c.clone());
    }
    let gram = c.transpose() * b * c;
    let (vals, vecs) = sym_eigen_sorted(&gram);
    let vmax = vals.last().copied().unwrap_or(0.0);
    if vals[0] <= tol * vmax.max(1.0) {
        return Err(EinfibError::validation(format!(
            "dependent or null basis vectors: Gram eigenvalue {:.3e} (scale {:.3e})",
            vals[0], vmax
        )));
    }
    let inv_sqrt = DMatrix::from_fn(vals.len(), vals.len(), |i, j| {
        if i == j {
            1.0 / vals[i].sqrt()
        } else {
            0.0
        }
    });
    Ok(c * &vecs * inv_sqrt * vecs.transpose())
}

/// B-orthogonal projection of `v` onto the span of B-orthonormal columns `onb`.
pub fn project_onto(onb: &DMatrix<f64>, b: &DMatrix<f64>, v: &DVector<f64>) -> DVector<f64> {
    onb * (onb.transpose() * (b * v))
}

/// All roots of the real polynomial with coefficients `coeffs` (highest
/// degree first), via the companion-matrix eigenvalues. Leading zeros are
/// trimmed at `lead_tol`.
pub fn poly_roots(coeffs: &[f64], lead_tol: f64) -> Vec<Complex<f64>> {
    let scale = coeffs.iter().fold(0.0f64, |a, &c| a.max(c.abs()));
    if scale == 0.0 {
        return Vec::new();
    }
    let mut cs: Vec<f64> = coeffs.to_vec();
    while cs.len() > 1 && cs[0].abs() <= lead_tol * scale {
        cs.remove(0);
    }
    let n = cs.len().saturating_sub(1);
    if n == 0 {
        return Vec::new();
    }
    let lead = cs[0];
    let mut comp = DMatrix::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        comp[(i, n - 1)] = -cs[n - i] / lead;
    }
    comp.complex_eigenvalues().iter().copied().collect()
}

/// Real roots of a real polynomial (highest degree first), deduplicated.
pub fn poly_real_roots(coeffs: &[f64], imag_tol: f64) -> Vec<f64> {
    let mut out: Vec<f64> = poly_roots(coeffs, 1e-12)
        .into_iter()
        .filter(|z| z.im.abs() < imag_tol * (1.0 + z.re.abs()))
        .map(|z| z.re)
        .collect();
    out.sort_by(|a, b| a.total_cmp(b));
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-10 * (1.0 + a.abs()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_of_wide_matrix() {
        // 1x3 row [1,1,1]: null space is 2-dimensional.
        let m = DMatrix::from_row_slice(1, 3, &[1.0, 1.0, 1.0]);
        let ns = null_space(&m, 1e-9);
        assert_eq!(ns.ncols(), 2);
        assert!(max_abs(&(&m * &ns)) < 1e-9);
    }

    #[test]
    fn b_orthonormalize_gram_identity() {
        let b = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 3.0, 5.0]));
        let c = DMatrix::from_row_slice(3, 2, &[1.0, 1.0, 0.0, 1.0, 1.0, 0.0]);
        let q = b_orthonormalize(&c, &b, 1e-12).unwrap();
        let g = q.transpose() * &b * &q;
        assert!(max_abs(&(&g - DMatrix::identity(2, 2))) < 1e-12);
    }

    #[test]
    fn cubic_roots_match_factorization() {
        // (x-1)(x-2)(x+3) = x^3 - 7x + 6
        let roots = poly_real_roots(&[1.0, 0.0, -7.0, 6.0], 1e-9);
        assert_eq!(roots.len(), 3);
        assert!((roots[0] + 3.0).abs() < 1e-9);
        assert!((roots[1] - 1.0).abs() < 1e-9);
        assert!((roots[2] - 2.0).abs() < 1e-9);
    }

    #[test]
    fn degenerate_leading_coefficient_falls_back_to_linear() {
        let roots = poly_real_roots(&[0.0, 2.0, -3.0], 1e-9);
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - 1.5).abs() < 1e-12);
    }
}
