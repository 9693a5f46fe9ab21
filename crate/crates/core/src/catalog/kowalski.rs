//! The n-fold product construction: g = g0^n with the full diagonal as l
//! and a two-block diagonal as k. The base summands are prescribed (adjacent
//! differences within each block), the scalar structure constants depend
//! only on (n, p), and the adapted Einstein metrics reduce to one cubic.

use nalgebra::DVector;

use super::CatalogFibration;
use crate::catalog::classical;
use crate::error::{EinfibError, Result};
use crate::fibration::Fibration;
use crate::linalg::poly_real_roots;
use crate::ricci::MetricSpec;
use crate::subspace::Subspace;

fn check_split(n: usize, p: usize) -> Result<usize> {
    if p < 2 || n < p + p {
        return Err(EinfibError::validation(format!(
            "product split needs 2 <= p <= n - p (got n = {n}, p = {p})"
        )));
    }
    Ok(n - p)
}

/// Build g0^n with l the full diagonal and k the (p, q)-block diagonal,
/// q = n - p. Base summands n_1 (differences inside the first p copies) and
/// n_2 (differences inside the last q copies) are prescribed: they are
/// isotypic, not irreducible, but every structure constant is still scalar.
pub fn kowalski_fibration(g0: &str, n: usize, p: usize) -> Result<CatalogFibration> {
    let q = check_split(n, p)?;
    let built = classical::by_name(g0)?;
    let d0 = built.algebra.dim();
    let copies: Vec<&crate::exact::ExactStructure> = (0..n).map(|_| &built.exact).collect();
    let sum = crate::exact::ExactStructure::direct_sum(&copies);
    let algebra = crate::liealg::LieAlgebra::from_exact(&sum);
    let dim = n * d0;
    let at = |copy: usize, t: usize| copy * d0 + t;

    let mut l_vecs = Vec::with_capacity(d0);
    for t in 0..d0 {
        let mut v = DVector::zeros(dim);
        for c in 0..n {
            v[at(c, t)] = 1.0;
        }
        l_vecs.push(v);
    }
    let mut k_vecs = Vec::with_capacity(2 * d0);
    for range in [0..p, p..n] {
        for t in 0..d0 {
            let mut v = DVector::zeros(dim);
            for c in range.clone() {
                v[at(c, t)] = 1.0;
            }
            k_vecs.push(v);
        }
    }

    let mut n1_vecs = Vec::with_capacity((p - 1) * d0);
    for c in 0..(p - 1) {
        for t in 0..d0 {
            let mut v = DVector::zeros(dim);
            v[at(c, t)] = 1.0;
            v[at(c + 1, t)] = -1.0;
            n1_vecs.push(v);
        }
    }
    let mut n2_vecs = Vec::with_capacity((q - 1) * d0);
    for c in p..(n - 1) {
        for t in 0..d0 {
            let mut v = DVector::zeros(dim);
            v[at(c, t)] = 1.0;
            v[at(c + 1, t)] = -1.0;
            n2_vecs.push(v);
        }
    }

    let fibration = Fibration::new(
        algebra,
        Subspace::from_vectors(dim, &k_vecs),
        Subspace::from_vectors(dim, &l_vecs),
    )
    .named(format!("{}^{n}/delta({p}+{q})", built.name));
    Ok(CatalogFibration {
        name: fibration.name.clone(),
        fibration,
        prescribed_n: Some(vec![
            Subspace::from_vectors(dim, &n1_vecs),
            Subspace::from_vectors(dim, &n2_vecs),
        ]),
        closed_form_x: None,
        closed_form_x_exact: None,
    })
}

/// Closed-form structure constants of the (n, p) product chain. They do not
/// depend on the simple factor g0.
#[derive(Clone, Debug)]
pub struct ExpectedConstants {
    pub c_l_p: f64,
    pub gamma: f64,
    pub b: [f64; 2],
    pub c_k_n: [f64; 2],
    pub c_l_n: [f64; 2],
    pub c_n_on_p: [f64; 2],
    /// Self-interaction scalars r^{jj}_j; every cross scalar vanishes
    /// because the two blocks commute.
    pub r_self: [f64; 2],
}

pub fn expected_constants(n: usize, p: usize) -> Result<ExpectedConstants> {
    let q = check_split(n, p)?;
    let (nf, pf, qf) = (n as f64, p as f64, q as f64);
    Ok(ExpectedConstants {
        c_l_p: 1.0 / nf,
        gamma: (pf * pf + qf * qf) / (nf * pf * qf),
        b: [qf / (nf * pf), pf / (nf * qf)],
        c_k_n: [1.0 / pf, 1.0 / qf],
        c_l_n: [1.0 / nf, 1.0 / nf],
        c_n_on_p: [(pf - 1.0) * qf / (pf * nf), (qf - 1.0) * pf / (qf * nf)],
        r_self: [1.0 - 2.0 / pf, 1.0 - 2.0 / qf],
    })
}

/// The complete set of binormal Einstein ratios of the (n, p) chain: always
/// {1}, plus n/4 when the split is even (and n > 4, where n/4 is distinct
/// from 1).
pub fn expected_binormal_xs(n: usize, p: usize) -> Result<Vec<f64>> {
    let q = check_split(n, p)?;
    let mut xs = vec![1.0];
    if p == q {
        let extra = n as f64 / 4.0;
        if (extra - 1.0).abs() > 1e-12 {
            xs.push(extra);
        }
    }
    Ok(xs)
}

/// The adapted (three-coefficient) Einstein metrics of the (n, p) chain:
/// the normal metric, plus exactly one non-normal metric
/// `(1, 1/x1, 1/x2)` whose first ratio x1 is the unique root of a cubic in
/// a pinned interval.
#[derive(Clone, Debug)]
pub struct AdaptedClosedForm {
    /// Cubic coefficients, highest degree first.
    pub cubic: [f64; 4],
    /// Open interval that contains exactly one root.
    pub interval: (f64, f64),
    pub x1: f64,
    pub x2: f64,
    pub cubic_residual: f64,
    pub standard: MetricSpec,
    pub nonstandard: MetricSpec,
}

pub fn cubic_coefficients(n: usize, p: usize) -> Result<[f64; 4]> {
    let q = check_split(n, p)?;
    let (nf, pf, qf) = (n as f64, p as f64, q as f64);
    Ok([
        4.0 * qf * qf,
        -4.0 * qf * (nf + pf * qf + 2.0),
        nf * (qf * (qf + 2.0) * (pf + 1.0) + nf + 8.0),
        -(qf + 3.0) * nf * nf,
    ])
}

pub fn adapted_closed_form(n: usize, p: usize) -> Result<AdaptedClosedForm> {
    let q = check_split(n, p)?;
    let (nf, pf, qf) = (n as f64, p as f64, q as f64);
    let cubic = cubic_coefficients(n, p)?;
    let lo = nf / (qf * (pf + 1.0));
    let hi = nf / qf;
    let eval = |z: f64| ((cubic[0] * z + cubic[1]) * z + cubic[2]) * z + cubic[3];
    let deriv = |z: f64| (3.0 * cubic[0] * z + 2.0 * cubic[1]) * z + cubic[2];

    let roots = poly_real_roots(&cubic, 1e-8);
    let inside: Vec<f64> = roots
        .iter()
        .cloned()
        .filter(|z| *z > lo + 1e-12 && *z < hi - 1e-12)
        .collect();
    if inside.len() != 1 {
        return Err(EinfibError::numerical(format!(
            "expected exactly one cubic root in ({lo:.6}, {hi:.6}), found {:?}",
            inside
        )));
    }
    let mut x1 = inside[0];
    for _ in 0..8 {
        let f = eval(x1);
        let df = deriv(x1);
        if df.abs() < 1e-14 {
            break;
        }
        x1 -= f / df;
    }
    let x2_sq = (-qf * qf * (pf + 1.0) * x1 * x1 + nf * qf * (pf + 2.0) * x1 - nf * nf)
        / (pf * pf * (qf - 1.0));
    if x2_sq <= 0.0 {
        return Err(EinfibError::numerical(format!(
            "second ratio is not real at x1 = {x1:.8} (square {x2_sq:.3e})"
        )));
    }
    let x2 = x2_sq.sqrt();
    Ok(AdaptedClosedForm {
        cubic,
        interval: (lo, hi),
        x1,
        x2,
        cubic_residual: eval(x1).abs(),
        standard: MetricSpec::new(vec![1.0, 1.0, 1.0]),
        nonstandard: MetricSpec::new(vec![1.0, 1.0 / x1, 1.0 / x2]),
    })
}
