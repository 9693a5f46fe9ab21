//! Casimir operators, the bracket bilinear forms Q, and the scalar constants
//! they induce on irreducible summands.

use nalgebra::DMatrix;

use crate::error::{EinfibError, Result};
use crate::liealg::LieAlgebra;
use crate::subspace::Subspace;
use crate::tol::Tolerance;

/// Casimir operator of a subspace U with respect to the Killing form:
/// C_U = sum_i ad(u_i) ad(u_i') where {u_i'} is the Phi-dual basis of {u_i}.
/// Defined for any subspace on which Phi is nondegenerate (here B|U is
/// definite, so that always holds); the zero-dimensional case gives 0.
pub fn casimir_operator(alg: &LieAlgebra, u: &Subspace) -> Result<DMatrix<f64>> {
    let d = alg.dim();
    if u.dim() == 0 {
        return Ok(DMatrix::zeros(d, d));
    }
    let cols = u.cols();
    let gram = cols.transpose() * alg.killing() * cols;
    let inv = gram.clone().try_inverse().ok_or_else(|| {
        EinfibError::validation(
            "Killing form degenerate on a summand; cannot form its Casimir".to_string(),
        )
    })?;
    let dual = cols * inv;
    let mut c = DMatrix::zeros(d, d);
    for i in 0..u.dim() {
        let adu = alg.ad(&cols.column(i).into_owned());
        let add = alg.ad(&dual.column(i).into_owned());
        c += adu * add;
    }
    Ok(c)
}

/// Scalar value of an ambient operator restricted to a subspace with
/// B-orthonormal basis `onb`, together with the largest entrywise deviation
/// of the restricted matrix from that scalar.
pub fn scalar_on(op: &DMatrix<f64>, onb: &DMatrix<f64>, b: &DMatrix<f64>) -> (f64, f64) {
    let w = onb.ncols();
    if w == 0 {
        return (0.0, 0.0);
    }
    let m = onb.transpose() * b * op * onb;
    let val = m.trace() / w as f64;
    let mut dev = 0.0f64;
    for i in 0..w {
        for j in 0..w {
            let target = if i == j { val } else { 0.0 };
            dev = dev.max((m[(i, j)] - target).abs());
        }
    }
    (val, dev)
}

/// The tensor C3[x][(i,l)] = B([W_x, W_i], W_l) over a B-orthonormal frame W
/// of the isotropy complement. Everything curvature-related contracts against
/// this tensor.
pub fn c3_tensor(alg: &LieAlgebra, m_onb: &DMatrix<f64>) -> Vec<DMatrix<f64>> {
    let d = m_onb.ncols();
    let b = alg.b();
    (0..d)
        .map(|x| {
            let adx = alg.ad(&m_onb.column(x).into_owned());
            // (m_onbᵀ B adx m_onb)[(l,i)] = B([W_x, W_i], W_l); transpose to
            // put the bracketed index first.
            (m_onb.transpose() * b * adx * m_onb).transpose()
        })
        .collect()
}

/// Q_{m_j m_k}(W_x, W_y) = sum_{i in block j, l in block k}
/// B([W_y, W_i], W_l) B([W_x, W_l], W_i), assembled for every block pair as
/// full d x d matrices over (x, y). Symmetric in (x, y) and in (j, k) after
/// transposing the summation, which the tests check.
pub fn q_blocks(
    c3: &[DMatrix<f64>],
    ranges: &[std::ops::Range<usize>],
) -> Vec<Vec<DMatrix<f64>>> {
    let d = c3.len();
    let nb = ranges.len();
    let mut out = vec![vec![DMatrix::zeros(d, d); nb]; nb];
    for j in 0..nb {
        for k in 0..nb {
            let q = &mut out[j][k];
            for x in 0..d {
                for y in x..d {
                    let mut s = 0.0;
                    for i in ranges[j].clone() {
                        for l in ranges[k].clone() {
                            s += c3[y][(i, l)] * c3[x][(l, i)];
                        }
                    }
                    q[(x, y)] = s;
                    q[(y, x)] = s;
                }
            }
        }
    }
    out
}

/// Scalar structure constants of a decomposed fibration. Index conventions:
/// `gamma[a]` is C_k on p_a, `c_l_p[a]` is C_l on p_a, `c_n_on_p[j][a]` is
/// C_{n_j} on p_a, `b_n[j]` is C_p on n_j, `c_k_n[j]`, `c_l_n[j]` likewise,
/// `q_p[a][b][c]` is the scalar with Q_{p_b p_c}|_{p_a} = q Phi, and
/// `r_n[k][j][i]` the scalar with Q_{n_j n_i}|_{n_k} = r Phi.
#[derive(Clone, Debug)]
pub struct StructuralConstants {
    pub s: usize,
    pub r: usize,
    pub gamma: Vec<f64>,
    pub c_l_p: Vec<f64>,
    pub c_n_on_p: Vec<Vec<f64>>,
    pub b_n: Vec<f64>,
    pub c_k_n: Vec<f64>,
    pub c_l_n: Vec<f64>,
    pub q_p: Vec<Vec<Vec<f64>>>,
    pub r_n: Vec<Vec<Vec<f64>>>,
    /// Worst deviation of any of the operators above from a scalar on its
    /// summand.
    pub max_dev: f64,
}

pub struct ConstantsInput<'a> {
    pub alg: &'a LieAlgebra,
    pub m_onb: &'a DMatrix<f64>,
    pub ranges: &'a [std::ops::Range<usize>],
    pub s: usize,
    pub r: usize,
    pub cas_l: &'a DMatrix<f64>,
    pub cas_k: &'a DMatrix<f64>,
    pub cas_p: &'a DMatrix<f64>,
    pub cas_n_summands: &'a [DMatrix<f64>],
    pub qblk: &'a [Vec<DMatrix<f64>>],
}

impl StructuralConstants {
    pub fn compute(inp: &ConstantsInput<'_>, tol: Tolerance) -> Result<Self> {
        let b = inp.alg.b();
        let (s, r) = (inp.s, inp.r);
        let mut max_dev = 0.0f64;
        let track = |name: String, pair: (f64, f64), max_dev: &mut f64| -> Result<f64> {
            let (val, dev) = pair;
            *max_dev = max_dev.max(dev);
            if dev > tol.eps {
                return Err(EinfibError::numerical(format!(
                    "{name} is not scalar on its summand (deviation {dev:.3e})"
                )));
            }
            Ok(val)
        };
        let onb_of = |idx: usize| inp.m_onb.columns(inp.ranges[idx].start, inp.ranges[idx].len());

        let mut gamma = Vec::with_capacity(s);
        let mut c_l_p = Vec::with_capacity(s);
        for a in 0..s {
            let onb = onb_of(a).into_owned();
            gamma.push(track(
                format!("C_k on fiber summand {a}"),
                scalar_on(inp.cas_k, &onb, b),
                &mut max_dev,
            )?);
            c_l_p.push(track(
                format!("C_l on fiber summand {a}"),
                scalar_on(inp.cas_l, &onb, b),
                &mut max_dev,
            )?);
        }
        let mut c_n_on_p = vec![vec![0.0; s]; r];
        for j in 0..r {
            for a in 0..s {
                let onb = onb_of(a).into_owned();
                c_n_on_p[j][a] = track(
                    format!("C_n[{j}] on fiber summand {a}"),
                    scalar_on(&inp.cas_n_summands[j], &onb, b),
                    &mut max_dev,
                )?;
            }
        }
        let mut b_n = Vec::with_capacity(r);
        let mut c_k_n = Vec::with_capacity(r);
        let mut c_l_n = Vec::with_capacity(r);
        for j in 0..r {
            let onb = onb_of(s + j).into_owned();
            b_n.push(track(
                format!("C_p on base summand {j}"),
                scalar_on(inp.cas_p, &onb, b),
                &mut max_dev,
            )?);
            c_k_n.push(track(
                format!("C_k on base summand {j}"),
                scalar_on(inp.cas_k, &onb, b),
                &mut max_dev,
            )?);
            c_l_n.push(track(
                format!("C_l on base summand {j}"),
                scalar_on(inp.cas_l, &onb, b),
                &mut max_dev,
            )?);
        }

        // Q-form scalars: on a B-orthonormal frame Phi = -Id, so the scalar
        // against Phi is minus the average diagonal of the restricted block.
        let scalar_against_phi = |qm: &DMatrix<f64>,
                                  rng: &std::ops::Range<usize>,
                                  name: String,
                                  max_dev: &mut f64|
         -> Result<f64> {
            let w = rng.len();
            let mut tr = 0.0;
            for x in rng.clone() {
                tr += qm[(x, x)];
            }
            let val = -tr / w as f64;
            let mut dev = 0.0f64;
            for x in rng.clone() {
                for y in rng.clone() {
                    let target = if x == y { -val } else { 0.0 };
                    dev = dev.max((qm[(x, y)] - target).abs());
                }
            }
            *max_dev = max_dev.max(dev);
            if dev > tol.eps {
                return Err(EinfibError::numerical(format!(
                    "{name} is not proportional to the Killing form on its summand \
                     (deviation {dev:.3e})"
                )));
            }
            Ok(val)
        };

        let mut q_p = vec![vec![vec![0.0; s]; s]; s];
        for a in 0..s {
            for bb in 0..s {
                for c in 0..s {
                    q_p[a][bb][c] = scalar_against_phi(
                        &inp.qblk[bb][c],
                        &inp.ranges[a],
                        format!("Q(p_{bb}, p_{c}) on fiber summand {a}"),
                        &mut max_dev,
                    )?;
                }
            }
        }
        let mut r_n = vec![vec![vec![0.0; r]; r]; r];
        for k in 0..r {
            for j in 0..r {
                for i in 0..r {
                    r_n[k][j][i] = scalar_against_phi(
                        &inp.qblk[s + j][s + i],
                        &inp.ranges[s + k],
                        format!("Q(n_{j}, n_{i}) on base summand {k}"),
                        &mut max_dev,
                    )?;
                }
            }
        }

        Ok(StructuralConstants {
            s,
            r,
            gamma,
            c_l_p,
            c_n_on_p,
            b_n,
            c_k_n,
            c_l_n,
            q_p,
            r_n,
            max_dev,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::classical::su;
    use crate::linalg::max_abs;

    /// The Casimir of the full algebra is the identity in the Killing
    /// normalization, including for non-simple semisimple products.
    #[test]
    fn full_casimir_is_identity() {
        for alg in [su(2).unwrap().algebra, su(3).unwrap().algebra] {
            let c = casimir_operator(&alg, &Subspace::full(alg.dim())).unwrap();
            let d = alg.dim();
            assert!(max_abs(&(c - DMatrix::identity(d, d))) < 1e-10);
        }
    }

    #[test]
    fn casimir_is_additive_over_orthogonal_pieces() {
        let alg = su(3).unwrap().algebra;
        let d = alg.dim();
        let first = Subspace::from_columns(DMatrix::identity(d, d).columns(0, 3).into_owned());
        let rest = crate::subspace::complement_within(
            alg.b(),
            &Subspace::full(d),
            &first,
            Tolerance::default(),
        )
        .unwrap();
        let c1 = casimir_operator(&alg, &first).unwrap();
        let c2 = casimir_operator(&alg, &rest).unwrap();
        let cg = casimir_operator(&alg, &Subspace::full(d)).unwrap();
        assert!(max_abs(&(c1 + c2 - cg)) < 1e-10);
    }
}
