//! Ricci curvature of invariant metrics on the isotropy complement.
//!
//! Three independent routes compute the same Ricci tensor:
//!
//! 1. `ricci_connection` — assemble the canonical connection operators and
//!    contract the full curvature tensor (slow, definitional; the oracle).
//! 2. `ricci_trace_form` — the trace formula in a metric-orthonormal frame.
//! 3. `ricci_q_forms` — the block formula driven by the precomputed Q-form
//!    blocks; evaluation cost is quadratic in the frame size and this is the
//!    route the solvers iterate.
//!
//! All three return the Ricci tensor as a symmetric matrix of values
//! `Ric(W_x, W_y)` over the fixed B-orthonormal frame of the setup, so the
//! results are directly comparable entry by entry.

use nalgebra::{DMatrix, DVector};

use crate::error::{EinfibError, Result};
use crate::fibration::Setup;

/// An invariant metric: one positive coefficient per summand, fiber blocks
/// first (`lambda_1..lambda_s`), then base blocks (`mu_1..mu_r`). The metric
/// on the complement is `sum_a lambda_a B|p_a + sum_j mu_j B|n_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricSpec {
    pub nu: Vec<f64>,
}

impl MetricSpec {
    pub fn new(nu: Vec<f64>) -> Self {
        MetricSpec { nu }
    }

    pub fn adapted(lambda: &[f64], mu: &[f64]) -> Self {
        let mut nu = Vec::with_capacity(lambda.len() + mu.len());
        nu.extend_from_slice(lambda);
        nu.extend_from_slice(mu);
        MetricSpec { nu }
    }

    /// The binormal metric `B_p + x B_n`: every fiber coefficient 1 and every
    /// base coefficient `x`.
    pub fn binormal(x: f64, s: usize, r: usize) -> Self {
        let mut nu = vec![1.0; s + r];
        for v in nu.iter_mut().skip(s) {
            *v = x;
        }
        MetricSpec { nu }
    }

    pub fn lambda<'a>(&'a self, setup: &Setup) -> &'a [f64] {
        &self.nu[..setup.s]
    }

    pub fn mu<'a>(&'a self, setup: &Setup) -> &'a [f64] {
        &self.nu[setup.s..]
    }

    pub fn scaled(&self, c: f64) -> Self {
        MetricSpec {
            nu: self.nu.iter().map(|v| v * c).collect(),
        }
    }

    pub fn validate(&self, setup: &Setup) -> Result<()> {
        if self.nu.len() != setup.blocks() {
            return Err(EinfibError::validation(format!(
                "metric has {} coefficients, setup has {} summands",
                self.nu.len(),
                setup.blocks()
            )));
        }
        if let Some(v) = self.nu.iter().find(|v| !v.is_finite() || **v <= 0.0) {
            return Err(EinfibError::validation(format!(
                "metric coefficients must be positive and finite (found {v})"
            )));
        }
        Ok(())
    }
}

/// Per-frame-index metric coefficients and their square roots.
fn frame_scaling(setup: &Setup, metric: &MetricSpec) -> (Vec<f64>, Vec<f64>) {
    let nu: Vec<f64> = setup
        .block_of
        .iter()
        .map(|&blk| metric.nu[blk])
        .collect();
    let sqrt: Vec<f64> = nu.iter().map(|v| v.sqrt()).collect();
    (nu, sqrt)
}

/// Matrices of `X -> [Z_x, X]_m` in the metric-orthonormal frame
/// `Z_x = W_x / sqrt(nu_x)`.
fn projected_brackets(setup: &Setup, sq: &[f64]) -> Vec<DMatrix<f64>> {
    let d = setup.dim_m();
    (0..d)
        .map(|x| {
            DMatrix::from_fn(d, d, |z, y| {
                setup.c3[x][(y, z)] * sq[z] / (sq[x] * sq[y])
            })
        })
        .collect()
}

/// The symmetric part `U` of the connection, as components
/// `u[z][(x,y)] = <U(Z_x, Z_y), Z_z>`.
fn u_component(setup: &Setup, sq: &[f64], z: usize, x: usize, y: usize) -> f64 {
    0.5 * (setup.c3[z][(x, y)] * sq[y] / (sq[z] * sq[x])
        + setup.c3[z][(y, x)] * sq[x] / (sq[z] * sq[y]))
}

/// Definitional route: build the connection operators, form the curvature
/// operator of every frame pair and contract.
pub fn ricci_connection(setup: &Setup, metric: &MetricSpec) -> Result<DMatrix<f64>> {
    metric.validate(setup)?;
    let (_, sq) = frame_scaling(setup, metric);
    let d = setup.dim_m();
    let alg = &setup.fib.algebra;
    let b = alg.b();

    let p = projected_brackets(setup, &sq);
    // Connection operators Lambda(Z_x) = 1/2 [Z_x, .]_m + U(Z_x, .).
    let lam: Vec<DMatrix<f64>> = (0..d)
        .map(|x| {
            DMatrix::from_fn(d, d, |z, y| {
                0.5 * p[x][(z, y)] + u_component(setup, &sq, z, x, y)
            })
        })
        .collect();

    // Isotropy action on the complement, one matrix per l-frame vector, in
    // the unscaled frame; these commute with the block structure.
    let dim_l = setup.l_onb.ncols();
    let mut iso = Vec::with_capacity(dim_l);
    for t in 0..dim_l {
        let h = setup.l_onb.column(t).into_owned();
        let ad_h = alg.ad(&h);
        iso.push(setup.m_onb.transpose() * b * ad_h * &setup.m_onb);
    }
    // l-components of [W_i, W_j] in the l frame.
    let mut l_coords = vec![DVector::zeros(dim_l); d * d];
    if dim_l > 0 {
        for i in 0..d {
            let wi = setup.m_onb.column(i).into_owned();
            for j in (i + 1)..d {
                let wj = setup.m_onb.column(j).into_owned();
                let br = alg.bracket(&wi, &wj);
                l_coords[i * d + j] = setup.l_onb.transpose() * b * br;
            }
        }
    }

    let mut ric_z: DMatrix<f64> = DMatrix::zeros(d, d);
    let mut rij: DMatrix<f64> = DMatrix::zeros(d, d);
    for i in 0..d {
        for j in (i + 1)..d {
            // R(Z_i, Z_j) = [Lam_i, Lam_j] - Lam([Z_i,Z_j]_m) - ad([Z_i,Z_j]_l)
            rij.copy_from(&(&lam[i] * &lam[j] - &lam[j] * &lam[i]));
            for y in 0..d {
                let coef = p[i][(y, j)];
                if coef != 0.0 {
                    rij -= &lam[y] * coef;
                }
            }
            if dim_l > 0 {
                let lc = &l_coords[i * d + j];
                let scale = 1.0 / (sq[i] * sq[j]);
                for t in 0..dim_l {
                    let c = lc[t] * scale;
                    if c != 0.0 {
                        // iso matrices are block-preserving, so the frame
                        // scaling cancels entrywise on their support
                        rij -= &iso[t] * c;
                    }
                }
            }
            // Ric(Z_a, Z_b) = sum_i <R(Z_i, Z_a) Z_b, Z_i>; the pair (i,j)
            // feeds row i into Ric[j, .] and (by antisymmetry) row j into
            // -Ric[i, .].
            for bcol in 0..d {
                ric_z[(j, bcol)] += rij[(i, bcol)];
                ric_z[(i, bcol)] -= rij[(j, bcol)];
            }
        }
    }

    Ok(DMatrix::from_fn(d, d, |x, y| ric_z[(x, y)] * sq[x] * sq[y]))
}

/// Trace-formula route in the metric-orthonormal frame.
pub fn ricci_trace_form(setup: &Setup, metric: &MetricSpec) -> Result<DMatrix<f64>> {
    metric.validate(setup)?;
    let (nu, sq) = frame_scaling(setup, metric);
    let d = setup.dim_m();

    let p = projected_brackets(setup, &sq);
    // t[x][(z,y)] = <T(Z_x, Z_y), Z_z> = <Z_x, [Z_y, Z_z]_m>
    let t: Vec<DMatrix<f64>> = (0..d)
        .map(|x| DMatrix::from_fn(d, d, |z, y| p[y][(x, z)]))
        .collect();
    let tr_p: Vec<f64> = (0..d).map(|z| setup.trace_p[z] / sq[z]).collect();

    let mut ric_z = DMatrix::zeros(d, d);
    for x in 0..d {
        for y in x..d {
            let mut acc = 0.0;
            // -1/2 tr(P_x^* P_y) with the adjoint equal to the transpose in
            // this frame, and -1/4 tr(T_x T_y).
            for pcol in 0..d {
                for q in 0..d {
                    acc -= 0.5 * p[x][(pcol, q)] * p[y][(pcol, q)];
                    acc -= 0.25 * t[x][(pcol, q)] * t[y][(q, pcol)];
                }
            }
            // -1/2 Phi(Z_x, Z_y) = +1/2 delta_xy / nu_x
            if x == y {
                acc += 0.5 / nu[x];
            }
            // + tr(P_{U(Z_x, Z_y)})
            for z in 0..d {
                if tr_p[z] != 0.0 {
                    acc += u_component(setup, &sq, z, x, y) * tr_p[z];
                }
            }
            ric_z[(x, y)] = acc;
            ric_z[(y, x)] = acc;
        }
    }

    Ok(DMatrix::from_fn(d, d, |x, y| ric_z[(x, y)] * sq[x] * sq[y]))
}

/// Q-form route: for frame indices x, y in summands a, b,
/// `Ric(W_x, W_y) = 1/2 sum_{j,k} (nu_k/nu_j - nu_a nu_b / (2 nu_k nu_j))
/// Q_{jk}(W_x, W_y) + 1/2 delta_xy`, the sum running over all summand pairs.
pub fn ricci_q_forms(setup: &Setup, metric: &MetricSpec) -> Result<DMatrix<f64>> {
    metric.validate(setup)?;
    let d = setup.dim_m();
    let nb = setup.blocks();
    let mut ric = DMatrix::identity(d, d) * 0.5;
    for j in 0..nb {
        let nu_j = metric.nu[j];
        for k in 0..nb {
            let nu_k = metric.nu[k];
            let blk = &setup.qblk[j][k];
            for x in 0..d {
                let nu_a = metric.nu[setup.block_of[x]];
                for y in x..d {
                    let nu_b = metric.nu[setup.block_of[y]];
                    let kcoef = nu_k / nu_j - nu_a * nu_b / (2.0 * nu_k * nu_j);
                    let term = 0.5 * kcoef * blk[(x, y)];
                    ric[(x, y)] += term;
                    if y > x {
                        ric[(y, x)] += term;
                    }
                }
            }
        }
    }
    Ok(ric)
}

/// Einstein constant estimate and defect for a computed Ricci tensor:
/// `E = tr(g^{-1} Ric) / dim m` and the max-entry deviation of
/// `Ric - E g` over the frame.
pub fn einstein_quality(setup: &Setup, metric: &MetricSpec, ric: &DMatrix<f64>) -> (f64, f64) {
    let d = setup.dim_m();
    let mut trace = 0.0;
    for x in 0..d {
        trace += ric[(x, x)] / metric.nu[setup.block_of[x]];
    }
    let e = trace / d as f64;
    let mut defect = 0.0f64;
    for x in 0..d {
        for y in 0..d {
            let g_xy = if x == y {
                metric.nu[setup.block_of[x]]
            } else {
                0.0
            };
            defect = defect.max((ric[(x, y)] - e * g_xy).abs());
        }
    }
    (e, defect)
}

/// Fiber self-interaction coefficients `q_a` of an adapted metric: the
/// Ricci curvature of the fiber with metric `sum lambda_a B|p_a`, expressed
/// by `Ric_F|p_a = (q_a / lambda_a) g|p_a`.
pub fn q_coefficients(setup: &Setup, lambda: &[f64]) -> Vec<f64> {
    let c = &setup.constants;
    (0..setup.s)
        .map(|a| {
            let mut acc = c.gamma[a] / 2.0;
            for bb in 0..setup.s {
                for cc in 0..setup.s {
                    let w = lambda[a] * lambda[a] / (2.0 * lambda[cc] * lambda[bb])
                        - lambda[cc] / lambda[bb];
                    acc += 0.5 * w * c.q_p[a][bb][cc];
                }
            }
            acc
        })
        .collect()
}

/// Vertical Ricci coefficients of an adapted metric: on `p_a` the Ricci
/// tensor is `v_a B|p_a`.
pub fn vertical_coefficients(setup: &Setup, lambda: &[f64], mu: &[f64]) -> Vec<f64> {
    let c = &setup.constants;
    let q = q_coefficients(setup, lambda);
    (0..setup.s)
        .map(|a| {
            let horiz: f64 = (0..setup.r)
                .map(|j| c.c_n_on_p[j][a] / (mu[j] * mu[j]))
                .sum();
            q[a] + lambda[a] * lambda[a] / 4.0 * horiz
        })
        .collect()
}

/// Base interaction coefficients `r_k` of an adapted metric: the scalar part
/// of the horizontal Ricci block on `n_k`.
pub fn horizontal_coefficients(setup: &Setup, mu: &[f64]) -> Vec<f64> {
    let c = &setup.constants;
    (0..setup.r)
        .map(|k| {
            let mut acc = 0.5;
            for j in 0..setup.r {
                for i in 0..setup.r {
                    let w = mu[k] * mu[k] / (2.0 * mu[i] * mu[j]) - mu[i] / mu[j];
                    acc += 0.5 * w * c.r_n[k][j][i];
                }
            }
            acc
        })
        .collect()
}

/// Closed-form Ricci tensor of an adapted metric, assembled blockwise:
/// `v_a` on the fiber summands and
/// `-(1/(2 mu_k)) sum_a lambda_a C_{p_a}|n_k + r_k Id` on the base summands.
/// Mixed blocks are returned as zero; their actual size is
/// `mixed_block_residual`.
pub fn adapted_ricci(setup: &Setup, metric: &MetricSpec) -> Result<DMatrix<f64>> {
    metric.validate(setup)?;
    let lambda = metric.lambda(setup);
    let mu = metric.mu(setup);
    let v = vertical_coefficients(setup, lambda, mu);
    let r = horizontal_coefficients(setup, mu);
    let b = setup.fib.algebra.b();

    let d = setup.dim_m();
    let mut ric = DMatrix::zeros(d, d);
    for a in 0..setup.s {
        for x in setup.ranges[a].clone() {
            ric[(x, x)] = v[a];
        }
    }
    for k in 0..setup.r {
        let range = setup.ranges[setup.s + k].clone();
        let onb = setup.block_onb(setup.s + k);
        let mut blk = DMatrix::identity(range.len(), range.len()) * r[k];
        for a in 0..setup.s {
            let cmat = onb.transpose() * b * &setup.cas_p_summands[a] * &onb;
            blk -= cmat * (lambda[a] / (2.0 * mu[k]));
        }
        for (xi, x) in range.clone().enumerate() {
            for (yi, y) in range.clone().enumerate() {
                ric[(x, y)] = blk[(xi, yi)];
            }
        }
    }
    Ok(ric)
}

/// Largest mixed (fiber x base) Ricci entry of a metric, from the Q-form
/// route. Adapted Einstein metrics need this to vanish.
pub fn mixed_block_residual(setup: &Setup, metric: &MetricSpec) -> Result<f64> {
    let ric = ricci_q_forms(setup, metric)?;
    let p_dim: usize = (0..setup.s).map(|a| setup.block_dim(a)).sum();
    let d = setup.dim_m();
    let mut worst = 0.0f64;
    for x in 0..p_dim {
        for y in p_dim..d {
            worst = worst.max(ric[(x, y)].abs());
        }
    }
    Ok(worst)
}

/// Residual of the geometric mixed-block criterion: the part of
/// `sum_j mu_j^{-2} C_{n_j}(p)` sticking out of k. Zero exactly when the
/// mixed Ricci blocks of the adapted metric vanish.
pub fn mixed_condition_residual(setup: &Setup, mu: &[f64]) -> f64 {
    let alg = &setup.fib.algebra;
    let b = alg.b();
    let dim = alg.dim();
    let mut op = DMatrix::zeros(dim, dim);
    for j in 0..setup.r {
        op += &setup.cas_n_summands[j] * (1.0 / (mu[j] * mu[j]));
    }
    let p_dim: usize = (0..setup.s).map(|a| setup.block_dim(a)).sum();
    let p_frame = setup.m_onb.columns(0, p_dim);
    let image = &op * p_frame;
    // n-component of the image: project onto the base frame.
    let n_dim = setup.dim_m() - p_dim;
    let n_frame = setup.m_onb.columns(p_dim, n_dim);
    let coords = n_frame.transpose() * b * image;
    crate::linalg::max_abs(&coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::bundles::circle_bundle_so;
    use crate::catalog::classical::su;
    use crate::fibration::Fibration;
    use crate::linalg::max_abs;
    use crate::subspace::Subspace;
    use crate::tol::Tolerance;

    fn su2_biinvariant_setup() -> Setup {
        // l = 0, k = span(first basis vector): the complement decomposes as
        // one 2-dim base block and one 1-dim fiber block.
        let tol = Tolerance::default();
        let alg = su(2).unwrap().algebra;
        let k = Subspace::from_columns(nalgebra::DMatrix::identity(3, 3).columns(2, 1).into_owned());
        let l = Subspace::empty(3);
        Fibration::new(alg, k, l).analyze(tol, None).unwrap()
    }

    #[test]
    fn biinvariant_metric_is_einstein_with_positive_constant() {
        let setup = su2_biinvariant_setup();
        let metric = MetricSpec::new(vec![1.0; setup.blocks()]);
        for ric in [
            ricci_connection(&setup, &metric).unwrap(),
            ricci_trace_form(&setup, &metric).unwrap(),
            ricci_q_forms(&setup, &metric).unwrap(),
        ] {
            let (e, defect) = einstein_quality(&setup, &metric, &ric);
            assert!((e - 0.25).abs() < 1e-12, "E = {e}");
            assert!(defect < 1e-12, "defect = {defect}");
        }
    }

    #[test]
    fn three_routes_agree_on_an_asymmetric_metric() {
        let tol = Tolerance::default();
        let cf = circle_bundle_so(5).unwrap();
        let setup = cf.fibration.analyze(tol, None).unwrap();
        let metric = MetricSpec::new(vec![1.3, 0.7]);
        let r1 = ricci_connection(&setup, &metric).unwrap();
        let r2 = ricci_trace_form(&setup, &metric).unwrap();
        let r3 = ricci_q_forms(&setup, &metric).unwrap();
        assert!(max_abs(&(&r1 - &r2)) < 1e-10);
        assert!(max_abs(&(&r1 - &r3)) < 1e-10);
    }

    #[test]
    fn known_einstein_ratio_on_the_smallest_odd_bundle() {
        let tol = Tolerance::default();
        let cf = circle_bundle_so(5).unwrap();
        let setup = cf.fibration.analyze(tol, None).unwrap();
        let metric = MetricSpec::binormal(2.0 / 3.0, setup.s, setup.r);
        let ric = ricci_connection(&setup, &metric).unwrap();
        let (e, defect) = einstein_quality(&setup, &metric, &ric);
        assert!((e - 9.0 / 16.0).abs() < 1e-12, "E = {e}");
        assert!(defect < 1e-12, "defect = {defect}");
        // closed-form route agrees
        let cf_ric = adapted_ricci(&setup, &metric).unwrap();
        assert!(max_abs(&(&ric - &cf_ric)) < 1e-12);
        assert!(mixed_block_residual(&setup, &metric).unwrap() < 1e-12);
    }

    #[test]
    fn scaling_the_metric_divides_the_einstein_constant() {
        let tol = Tolerance::default();
        let cf = circle_bundle_so(5).unwrap();
        let setup = cf.fibration.analyze(tol, None).unwrap();
        let metric = MetricSpec::binormal(2.0 / 3.0, setup.s, setup.r);
        let scaled = metric.scaled(2.0);
        let (e1, d1) = {
            let ric = ricci_q_forms(&setup, &metric).unwrap();
            einstein_quality(&setup, &metric, &ric)
        };
        let (e2, d2) = {
            let ric = ricci_q_forms(&setup, &scaled).unwrap();
            einstein_quality(&setup, &scaled, &ric)
        };
        assert!((e2 - e1 / 2.0).abs() < 1e-12);
        assert!(d1 < 1e-12 && d2 < 1e-12);
    }
}
