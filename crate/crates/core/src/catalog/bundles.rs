//! Circle bundles over the irreducible Hermitian symmetric spaces of the
//! classical families. Each chain l ⊂ k ⊂ g has a one-dimensional fiber
//! direction (the center of k), so the binormal Einstein condition is linear
//! with root (m + 2) / (2 m) in the base dimension m.

use nalgebra::DVector;
use num_rational::Rational64;

use super::CatalogFibration;
use crate::catalog::classical;
use crate::error::{EinfibError, Result};
use crate::fibration::Fibration;
use crate::subspace::Subspace;

/// Lexicographic position of the pair (j, k), j < k, among all pairs in
/// {0..n}.
fn pair_lex(n: usize, j: usize, k: usize) -> usize {
    debug_assert!(j < k && k < n);
    j * n - j * (j + 1) / 2 + (k - j - 1)
}

fn coord_vec(dim: usize, entries: &[(usize, f64)]) -> DVector<f64> {
    let mut v = DVector::zeros(dim);
    for &(i, c) in entries {
        v[i] += c;
    }
    v
}

fn closed_form(m: usize) -> (f64, (i64, i64)) {
    let exact = Rational64::new(m as i64 + 2, 2 * m as i64);
    (
        (m as f64 + 2.0) / (2.0 * m as f64),
        (*exact.numer(), *exact.denom()),
    )
}

// su(n) basis layout: antisymmetric pairs, imaginary symmetric pairs,
// diagonal differences.
fn su_a(n: usize, j: usize, k: usize) -> usize {
    pair_lex(n, j, k)
}
fn su_s(n: usize, j: usize, k: usize) -> usize {
    n * (n - 1) / 2 + pair_lex(n, j, k)
}
fn su_d(n: usize, j: usize) -> usize {
    n * (n - 1) + j
}

/// The chain su(p) + su(q) ⊂ s(u(p) + u(q)) ⊂ su(n), q = n - p. The base
/// is the complex Grassmannian, the fiber circle is the central direction
/// diag(iq, .., iq, -ip, .., -ip).
pub fn circle_bundle_su(n: usize, p: usize) -> Result<CatalogFibration> {
    if n < 2 || p == 0 || p >= n {
        return Err(EinfibError::validation(format!(
            "su({n}) needs a split 0 < p < n (got p = {p})"
        )));
    }
    let q = n - p;
    let built = classical::su(n)?;
    let dim = built.algebra.dim();

    let mut l_vecs: Vec<DVector<f64>> = Vec::new();
    for (size, offset) in [(p, 0usize), (q, p)] {
        if size < 2 {
            continue;
        }
        for j in 0..size {
            for k in (j + 1)..size {
                l_vecs.push(coord_vec(dim, &[(su_a(n, offset + j, offset + k), 1.0)]));
                l_vecs.push(coord_vec(dim, &[(su_s(n, offset + j, offset + k), 1.0)]));
            }
        }
        for j in 0..(size - 1) {
            l_vecs.push(coord_vec(dim, &[(su_d(n, offset + j), 1.0)]));
        }
    }

    // Center diag(iq I_p, -ip I_q) expanded over the diagonal differences:
    // the coefficient of D_t is the partial sum of the diagonal weights.
    let mut center_entries = Vec::new();
    let mut partial = 0i64;
    for t in 0..(n - 1) {
        partial += if t < p { q as i64 } else { -(p as i64) };
        if partial != 0 {
            center_entries.push((su_d(n, t), partial as f64));
        }
    }
    let mut k_vecs = l_vecs.clone();
    k_vecs.push(coord_vec(dim, &center_entries));

    let fibration = Fibration::new(
        built.algebra,
        Subspace::from_vectors(dim, &k_vecs),
        Subspace::from_vectors(dim, &l_vecs),
    )
    .named(format!("su({n})/s(u({p})+u({q}))"));
    let m = 2 * p * q;
    let (x, x_exact) = closed_form(m);
    Ok(CatalogFibration {
        name: fibration.name.clone(),
        fibration,
        prescribed_n: None,
        closed_form_x: Some(x),
        closed_form_x_exact: Some(x_exact),
    })
}

/// The chain so(n-2) ⊂ so(2) + so(n-2) ⊂ so(n). The base is the real
/// quadric, the fiber circle is the so(2) factor.
pub fn circle_bundle_so(n: usize) -> Result<CatalogFibration> {
    if n < 5 {
        return Err(EinfibError::validation(format!(
            "so({n}) needs n >= 5 for a semisimple corner block"
        )));
    }
    let built = classical::so(n)?;
    let dim = built.algebra.dim();
    let mut l_vecs = Vec::new();
    for j in 2..n {
        for k in (j + 1)..n {
            l_vecs.push(coord_vec(dim, &[(pair_lex(n, j, k), 1.0)]));
        }
    }
    let mut k_vecs = l_vecs.clone();
    k_vecs.push(coord_vec(dim, &[(pair_lex(n, 0, 1), 1.0)]));

    let fibration = Fibration::new(
        built.algebra,
        Subspace::from_vectors(dim, &k_vecs),
        Subspace::from_vectors(dim, &l_vecs),
    )
    .named(format!("so({n})/(so(2)+so({}))", n - 2));
    let m = 2 * (n - 2);
    let (x, x_exact) = closed_form(m);
    Ok(CatalogFibration {
        name: fibration.name.clone(),
        fibration,
        prescribed_n: None,
        closed_form_x: Some(x),
        closed_form_x_exact: Some(x_exact),
    })
}

/// The chain su(n) ⊂ u(n) ⊂ so(2n) through A + iB -> [[A, -B], [B, A]].
pub fn circle_bundle_so_even(half: usize) -> Result<CatalogFibration> {
    let n = half;
    if n < 3 {
        return Err(EinfibError::validation(format!(
            "so({}) / u({n}) needs n >= 3",
            2 * n
        )));
    }
    let built = classical::so(2 * n)?;
    let dim = built.algebra.dim();
    let big = 2 * n;
    // Images of the u(n) basis, as combinations of so(2n) basis vectors.
    let a_lift = |j: usize, k: usize| {
        coord_vec(
            dim,
            &[
                (pair_lex(big, j, k), 1.0),
                (pair_lex(big, n + j, n + k), 1.0),
            ],
        )
    };
    let s_lift = |j: usize, k: usize| {
        coord_vec(
            dim,
            &[
                (pair_lex(big, j, n + k), -1.0),
                (pair_lex(big, k, n + j), -1.0),
            ],
        )
    };
    let ie_lift = |j: usize| coord_vec(dim, &[(pair_lex(big, j, n + j), -1.0)]);
    let d_lift = |j: usize| {
        coord_vec(
            dim,
            &[
                (pair_lex(big, j, n + j), -1.0),
                (pair_lex(big, j + 1, n + j + 1), 1.0),
            ],
        )
    };

    let mut l_vecs = Vec::new();
    let mut k_vecs = Vec::new();
    for j in 0..n {
        for k in (j + 1)..n {
            l_vecs.push(a_lift(j, k));
            l_vecs.push(s_lift(j, k));
            k_vecs.push(a_lift(j, k));
            k_vecs.push(s_lift(j, k));
        }
    }
    for j in 0..(n - 1) {
        l_vecs.push(d_lift(j));
    }
    for j in 0..n {
        k_vecs.push(ie_lift(j));
    }

    let fibration = Fibration::new(
        built.algebra,
        Subspace::from_vectors(dim, &k_vecs),
        Subspace::from_vectors(dim, &l_vecs),
    )
    .named(format!("so({})/u({n})", 2 * n));
    let m = n * (n - 1);
    let (x, x_exact) = closed_form(m);
    Ok(CatalogFibration {
        name: fibration.name.clone(),
        fibration,
        prescribed_n: None,
        closed_form_x: Some(x),
        closed_form_x_exact: Some(x_exact),
    })
}

/// The chain su(n) ⊂ u(n) ⊂ sp(n) through Z -> diag(Z, conj(Z)). The u(n)
/// lift is an initial segment of the sp(n) basis, so the subalgebras are
/// coordinate spans.
pub fn circle_bundle_sp(n: usize) -> Result<CatalogFibration> {
    if n < 1 {
        return Err(EinfibError::validation("sp(0) is empty".to_string()));
    }
    let built = classical::sp(n)?;
    let dim = built.algebra.dim();
    let pairs = n * (n - 1) / 2;
    let mut l_vecs = Vec::new();
    for idx in 0..(2 * pairs) {
        l_vecs.push(coord_vec(dim, &[(idx, 1.0)]));
    }
    for j in 0..n.saturating_sub(1) {
        l_vecs.push(coord_vec(
            dim,
            &[(2 * pairs + j, 1.0), (2 * pairs + j + 1, -1.0)],
        ));
    }
    let mut k_vecs = Vec::new();
    for idx in 0..(n * n) {
        k_vecs.push(coord_vec(dim, &[(idx, 1.0)]));
    }

    let fibration = Fibration::new(
        built.algebra,
        Subspace::from_vectors(dim, &k_vecs),
        Subspace::from_vectors(dim, &l_vecs),
    )
    .named(format!("sp({n})/u({n})"));
    let m = n * (n + 1);
    let (x, x_exact) = closed_form(m);
    Ok(CatalogFibration {
        name: fibration.name.clone(),
        fibration,
        prescribed_n: None,
        closed_form_x: Some(x),
        closed_form_x_exact: Some(x_exact),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::solve_binormal;
    use crate::tol::Tolerance;

    #[test]
    fn grassmannian_bundle_solution_matches_the_closed_form() {
        let tol = Tolerance::default();
        let cf = circle_bundle_su(4, 1).unwrap();
        let expected = cf.closed_form_x.unwrap();
        assert!((expected - 2.0 / 3.0).abs() < 1e-15);
        let setup = cf.fibration.analyze(tol, None).unwrap();
        assert_eq!(setup.s, 1);
        assert_eq!(setup.r, 1);
        assert_eq!(setup.block_dim(0), 1);
        assert_eq!(setup.block_dim(1), 6);
        let report = solve_binormal(&setup).unwrap();
        assert_eq!(report.xs.len(), 1);
        assert!((report.xs[0] - expected).abs() < 1e-10);
    }

    #[test]
    fn quaternionic_bundle_solution_matches_the_closed_form() {
        let tol = Tolerance::default();
        let cf = circle_bundle_sp(2).unwrap();
        let expected = cf.closed_form_x.unwrap();
        let setup = cf.fibration.analyze(tol, None).unwrap();
        assert_eq!(setup.block_dim(0), 1);
        assert_eq!(setup.block_dim(1), 6);
        let report = solve_binormal(&setup).unwrap();
        assert_eq!(report.xs.len(), 1);
        assert!((report.xs[0] - expected).abs() < 1e-10);
    }

    #[test]
    fn guards_reject_bad_parameters() {
        assert!(circle_bundle_su(3, 0).is_err());
        assert!(circle_bundle_su(3, 3).is_err());
        assert!(circle_bundle_so(4).is_err());
        assert!(circle_bundle_so_even(2).is_err());
    }
}
