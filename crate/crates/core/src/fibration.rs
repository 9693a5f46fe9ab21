//! The homogeneous fibration setup: a chain l ⊂ k ⊂ g of compact algebras,
//! its isotropy decomposition, and every cached quantity the curvature and
//! solver layers consume.

use std::ops::Range;

use nalgebra::DMatrix;

use crate::casimir::{
    c3_tensor, casimir_operator, q_blocks, ConstantsInput, StructuralConstants,
};
use crate::decomp::{decompose_module, hom_dimension};
use crate::error::{EinfibError, Result};
use crate::liealg::{AlgebraChecks, LieAlgebra};
use crate::linalg::max_abs;
use crate::subspace::{closure_residual, complement_within, invariance_residual, Subspace};
use crate::tol::Tolerance;

/// A chain l ⊂ k ⊂ g defining the fibration G/L -> G/K with fiber K/L.
#[derive(Clone, Debug)]
pub struct Fibration {
    pub algebra: LieAlgebra,
    pub k: Subspace,
    pub l: Subspace,
    pub name: String,
}

/// Residuals recorded while validating a fibration.
#[derive(Clone, Debug)]
pub struct FibrationChecks {
    pub algebra: AlgebraChecks,
    pub k_closure_residual: f64,
    pub l_closure_residual: f64,
    pub l_in_k_residual: f64,
}

/// Caller-supplied summands that replace the automatic decomposition. Used
/// for isotypic splittings that the theory treats as single blocks (the
/// n-symmetric family); irreducibility is then not certified and the setup
/// is flagged `relaxed`.
#[derive(Clone, Debug, Default)]
pub struct PrescribedSummands {
    pub p: Option<Vec<Subspace>>,
    pub n: Option<Vec<Subspace>>,
}

/// A fully analyzed fibration: frames, Casimirs, the C3 bracket tensor, the
/// Q-form blocks and the scalar structure constants.
pub struct Setup {
    pub fib: Fibration,
    pub tol: Tolerance,
    pub checks: FibrationChecks,
    /// True when summands were prescribed rather than certified irreducible.
    pub relaxed: bool,
    /// Pairwise inequivalence of the summands (intertwiner dimension zero
    /// for every distinct pair).
    pub hypothesis_ok: bool,
    pub p_summands: Vec<Subspace>,
    pub n_summands: Vec<Subspace>,
    pub s: usize,
    pub r: usize,
    /// B-orthonormal frame of m = p ⊕ n, blocks in order p_1..p_s, n_1..n_r.
    pub m_onb: DMatrix<f64>,
    pub l_onb: DMatrix<f64>,
    pub ranges: Vec<Range<usize>>,
    pub block_of: Vec<usize>,
    pub cas_l: DMatrix<f64>,
    pub cas_k: DMatrix<f64>,
    pub cas_p: DMatrix<f64>,
    pub cas_p_summands: Vec<DMatrix<f64>>,
    pub cas_n_summands: Vec<DMatrix<f64>>,
    pub c3: Vec<DMatrix<f64>>,
    pub qblk: Vec<Vec<DMatrix<f64>>>,
    pub constants: StructuralConstants,
    /// tr(P_{W_x}) for each frame vector; all vanish for these spaces and
    /// the trace-form Ricci route relies on that.
    pub trace_p: Vec<f64>,
}

impl Fibration {
    pub fn new(algebra: LieAlgebra, k: Subspace, l: Subspace) -> Self {
        Fibration {
            algebra,
            k,
            l,
            name: String::from("custom"),
        }
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn validate(&self, tol: Tolerance) -> Result<FibrationChecks> {
        let alg_checks = self.algebra.validate(tol)?;
        let d = self.algebra.dim();
        if self.k.ambient_dim() != d || self.l.ambient_dim() != d {
            return Err(EinfibError::validation(
                "subalgebra basis vectors have the wrong ambient dimension".to_string(),
            ));
        }
        if self.k.dim() == 0 || self.k.dim() >= d {
            return Err(EinfibError::validation(format!(
                "k must be a proper nonzero subalgebra (dim k = {}, dim g = {})",
                self.k.dim(),
                d
            )));
        }
        if self.l.dim() >= self.k.dim() {
            return Err(EinfibError::validation(format!(
                "l must be a proper subalgebra of k (dim l = {}, dim k = {})",
                self.l.dim(),
                self.k.dim()
            )));
        }
        let (k_res, k_pair) = closure_residual(&self.algebra, &self.k, tol)?;
        if k_res > tol.eps {
            return Err(EinfibError::validation(format!(
                "k is not closed under the bracket: [v_{}, v_{}] leaves the span \
                 (relative residual {:.3e})",
                k_pair.0, k_pair.1, k_res
            )));
        }
        let (l_res, l_pair) = closure_residual(&self.algebra, &self.l, tol)?;
        if l_res > tol.eps {
            return Err(EinfibError::validation(format!(
                "l is not closed under the bracket: [v_{}, v_{}] leaves the span \
                 (relative residual {:.3e})",
                l_pair.0, l_pair.1, l_res
            )));
        }
        let mut l_in_k = 0.0f64;
        for j in 0..self.l.dim() {
            let res = self
                .k
                .containment_residual(self.algebra.b(), &self.l.cols().column(j).into_owned(), tol)?;
            if res > tol.eps {
                return Err(EinfibError::validation(format!(
                    "l basis vector {} is not contained in k (relative residual {:.3e})",
                    j, res
                )));
            }
            l_in_k = l_in_k.max(res);
        }
        Ok(FibrationChecks {
            algebra: alg_checks,
            k_closure_residual: k_res,
            l_closure_residual: l_res,
            l_in_k_residual: l_in_k,
        })
    }

    /// Validate, decompose and cache everything curvature needs.
    pub fn analyze(
        self,
        tol: Tolerance,
        prescribed: Option<PrescribedSummands>,
    ) -> Result<Setup> {
        let checks = self.validate(tol)?;
        let alg = &self.algebra;
        let b = alg.b();
        let d = alg.dim();
        let full = Subspace::full(d);
        let n_space = complement_within(b, &full, &self.k, tol)?;
        let p_space = complement_within(b, &self.k, &self.l, tol)?;
        let cas_l = casimir_operator(alg, &self.l)?;
        let cas_k = casimir_operator(alg, &self.k)?;
        let cas_p = casimir_operator(alg, &p_space)?;

        let prescribed = prescribed.unwrap_or_default();
        let relaxed = prescribed.p.is_some() || prescribed.n.is_some();
        let p_summands = match prescribed.p {
            Some(ps) => {
                validate_prescribed(alg, &self.l, &p_space, &ps, "fiber", tol)?;
                ps.iter()
                    .map(|sub| sub.b_onb(b, tol).map(Subspace::from_columns))
                    .collect::<Result<Vec<_>>>()?
            }
            None => decompose_module(alg, &self.l, &p_space, &cas_l, tol)?,
        };
        let n_summands = match prescribed.n {
            Some(ns) => {
                validate_prescribed(alg, &self.k, &n_space, &ns, "base", tol)?;
                ns.iter()
                    .map(|sub| sub.b_onb(b, tol).map(Subspace::from_columns))
                    .collect::<Result<Vec<_>>>()?
            }
            None => decompose_module(alg, &self.k, &n_space, &cas_k, tol)?,
        };
        let s = p_summands.len();
        let r = n_summands.len();
        if r == 0 {
            return Err(EinfibError::validation(
                "base decomposition is empty (k = g?)".to_string(),
            ));
        }
        if s == 0 {
            return Err(EinfibError::validation(
                "fiber decomposition is empty (l = k?)".to_string(),
            ));
        }

        let mut hypothesis_ok = true;
        for group in [(&p_summands, &self.l), (&n_summands, &self.k)] {
            let (summands, acting) = group;
            for i in 0..summands.len() {
                for j in (i + 1)..summands.len() {
                    let h = hom_dimension(alg, acting, &summands[i], &summands[j], tol)?;
                    if h > 0 {
                        hypothesis_ok = false;
                        if !relaxed {
                            return Err(EinfibError::validation(format!(
                                "summands {i} and {j} are equivalent modules \
                                 (intertwiner dimension {h}); the pairwise-inequivalence \
                                 hypothesis fails"
                            )));
                        }
                    }
                }
            }
        }

        let cas_p_summands = p_summands
            .iter()
            .map(|ps| casimir_operator(alg, ps))
            .collect::<Result<Vec<_>>>()?;
        let cas_n_summands = n_summands
            .iter()
            .map(|ns| casimir_operator(alg, ns))
            .collect::<Result<Vec<_>>>()?;

        let dim_m = p_space.dim() + n_space.dim();
        let mut m_onb = DMatrix::zeros(d, dim_m);
        let mut ranges = Vec::with_capacity(s + r);
        let mut block_of = vec![0usize; dim_m];
        let mut off = 0usize;
        for (bi, sub) in p_summands.iter().chain(n_summands.iter()).enumerate() {
            let onb = sub.b_onb(b, tol)?;
            let w = onb.ncols();
            m_onb.columns_mut(off, w).copy_from(&onb);
            ranges.push(off..off + w);
            for x in off..off + w {
                block_of[x] = bi;
            }
            off += w;
        }
        let l_onb = self.l.b_onb(b, tol)?;

        let c3 = c3_tensor(alg, &m_onb);
        let qblk = q_blocks(&c3, &ranges);
        let trace_p: Vec<f64> = c3.iter().map(|m| m.trace()).collect();
        let worst_trace = trace_p.iter().fold(0.0f64, |a, &t| a.max(t.abs()));
        if worst_trace > tol.eps {
            return Err(EinfibError::numerical(format!(
                "tr P_X does not vanish on the isotropy complement (max {:.3e})",
                worst_trace
            )));
        }

        let constants = StructuralConstants::compute(
            &ConstantsInput {
                alg,
                m_onb: &m_onb,
                ranges: &ranges,
                s,
                r,
                cas_l: &cas_l,
                cas_k: &cas_k,
                cas_p: &cas_p,
                cas_n_summands: &cas_n_summands,
                qblk: &qblk,
            },
            tol,
        )?;

        Ok(Setup {
            fib: self,
            tol,
            checks,
            relaxed,
            hypothesis_ok,
            p_summands,
            n_summands,
            s,
            r,
            m_onb,
            l_onb,
            ranges,
            block_of,
            cas_l,
            cas_k,
            cas_p,
            cas_p_summands,
            cas_n_summands,
            c3,
            qblk,
            constants,
            trace_p,
        })
    }
}

fn validate_prescribed(
    alg: &LieAlgebra,
    acting: &Subspace,
    space: &Subspace,
    summands: &[Subspace],
    what: &str,
    tol: Tolerance,
) -> Result<()> {
    let total: usize = summands.iter().map(|su| su.dim()).sum();
    if total != space.dim() {
        return Err(EinfibError::validation(format!(
            "prescribed {what} summands span dimension {total}, expected {}",
            space.dim()
        )));
    }
    let b = alg.b();
    for (i, sub) in summands.iter().enumerate() {
        for j in 0..sub.dim() {
            let res =
                space.containment_residual(b, &sub.cols().column(j).into_owned(), tol)?;
            if res > tol.eps {
                return Err(EinfibError::validation(format!(
                    "prescribed {what} summand {i}, vector {j}, lies outside the \
                     complement (residual {:.3e})",
                    res
                )));
            }
        }
        let (inv_res, pair) = invariance_residual(alg, acting, sub, tol)?;
        if inv_res > tol.eps {
            return Err(EinfibError::validation(format!(
                "prescribed {what} summand {i} is not invariant: bracket of acting \
                 vector {} with summand vector {} leaves it (residual {:.3e})",
                pair.0, pair.1, inv_res
            )));
        }
    }
    for i in 0..summands.len() {
        for j in (i + 1)..summands.len() {
            let oi = summands[i].b_onb(b, tol)?;
            let oj = summands[j].b_onb(b, tol)?;
            let cross = oi.transpose() * b * oj;
            if max_abs(&cross) > tol.eps {
                return Err(EinfibError::validation(format!(
                    "prescribed {what} summands {i} and {j} are not B-orthogonal \
                     (overlap {:.3e})",
                    max_abs(&cross)
                )));
            }
        }
    }
    Ok(())
}

impl Setup {
    pub fn dim_m(&self) -> usize {
        self.m_onb.ncols()
    }

    pub fn blocks(&self) -> usize {
        self.s + self.r
    }

    pub fn block_dim(&self, idx: usize) -> usize {
        self.ranges[idx].len()
    }

    /// B-orthonormal columns of summand `idx` (p blocks first).
    pub fn block_onb(&self, idx: usize) -> DMatrix<f64> {
        self.m_onb
            .columns(self.ranges[idx].start, self.ranges[idx].len())
            .into_owned()
    }
}

/// Residuals of the structural identities every valid setup satisfies. These
/// are the checks the invariant test suite pins at the working tolerance.
#[derive(Clone, Debug)]
pub struct InvariantResiduals {
    pub jacobi: f64,
    pub killing_ad_invariance: f64,
    pub full_casimir_identity: f64,
    pub casimir_partition: f64,
    pub casimir_k_additivity: f64,
    pub q_symmetry: f64,
    pub q_casimir_contraction: f64,
    pub gamma_sum_rule: f64,
    pub r_sum_rule: f64,
    pub casimir_chain_rule: f64,
    pub trace_p_vanishing: f64,
    pub scalar_deviation: f64,
}

impl InvariantResiduals {
    pub fn max(&self) -> f64 {
        [
            self.jacobi,
            self.killing_ad_invariance,
            self.full_casimir_identity,
            self.casimir_partition,
            self.casimir_k_additivity,
            self.q_symmetry,
            self.q_casimir_contraction,
            self.gamma_sum_rule,
            self.r_sum_rule,
            self.casimir_chain_rule,
            self.trace_p_vanishing,
            self.scalar_deviation,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Compute every structural-identity residual for an analyzed setup.
pub fn invariant_residuals(setup: &Setup) -> Result<InvariantResiduals> {
    let alg = &setup.fib.algebra;
    let d = alg.dim();
    let phi = alg.killing();

    let algebra_checks = alg.validate(setup.tol)?;

    // ad-invariance of the Killing form: Phi([x,y],z) + Phi(y,[x,z]) = 0.
    let mut ad_inv = 0.0f64;
    for i in 0..d {
        let adi = alg.ad_basis(i);
        let m = adi.transpose() * phi + phi * adi;
        ad_inv = ad_inv.max(max_abs(&m));
    }

    let full_cas = casimir_operator(alg, &Subspace::full(d))?;
    let full_dev = max_abs(&(&full_cas - DMatrix::identity(d, d)));

    let mut sum_n = setup.cas_k.clone();
    for cn in &setup.cas_n_summands {
        sum_n += cn;
    }
    let partition_dev = max_abs(&(sum_n - DMatrix::identity(d, d)));

    let k_add_dev = max_abs(&(&setup.cas_l + &setup.cas_p - &setup.cas_k));

    let nb = setup.blocks();
    let mut q_sym = 0.0f64;
    for j in 0..nb {
        for k in 0..nb {
            q_sym = q_sym.max(max_abs(&(&setup.qblk[j][k] - &setup.qblk[k][j])));
        }
    }

    // Contraction identity: for X, Y in p, summing Q_{n_j, n_k} over all base
    // blocks k gives Phi(C_{n_j} X, Y), because ad_X n_j stays inside n.
    let mut q_cas = 0.0f64;
    let p_dim: usize = (0..setup.s).map(|a| setup.block_dim(a)).sum();
    for j in 0..setup.r {
        let mut q_sum = DMatrix::zeros(p_dim, p_dim);
        for k in 0..setup.r {
            let blk = &setup.qblk[setup.s + j][setup.s + k];
            q_sum += blk.view((0, 0), (p_dim, p_dim));
        }
        let p_frame = setup.m_onb.columns(0, p_dim);
        let target = p_frame.transpose() * phi * &setup.cas_n_summands[j] * p_frame;
        q_cas = q_cas.max(max_abs(&(q_sum - target)));
    }

    let c = &setup.constants;
    let mut gamma_rule = 0.0f64;
    for a in 0..setup.s {
        let total: f64 = (0..setup.r).map(|j| c.c_n_on_p[j][a]).sum::<f64>() + c.gamma[a];
        gamma_rule = gamma_rule.max((total - 1.0).abs());
    }
    let mut r_rule = 0.0f64;
    for k in 0..setup.r {
        let total: f64 = (0..setup.r)
            .flat_map(|j| (0..setup.r).map(move |i| (j, i)))
            .map(|(j, i)| c.r_n[k][j][i])
            .sum();
        r_rule = r_rule.max((total - (1.0 - 2.0 * c.c_k_n[k])).abs());
    }
    let mut chain = 0.0f64;
    for j in 0..setup.r {
        chain = chain.max((c.c_k_n[j] - c.c_l_n[j] - c.b_n[j]).abs());
    }

    Ok(InvariantResiduals {
        jacobi: algebra_checks.jacobi_residual,
        killing_ad_invariance: ad_inv,
        full_casimir_identity: full_dev,
        casimir_partition: partition_dev,
        casimir_k_additivity: k_add_dev,
        q_symmetry: q_sym,
        q_casimir_contraction: q_cas,
        gamma_sum_rule: gamma_rule,
        r_sum_rule: r_rule,
        casimir_chain_rule: chain,
        trace_p_vanishing: setup.trace_p.iter().fold(0.0, |a, &t| a.max(t.abs())),
        scalar_deviation: c.max_dev,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::bundles::circle_bundle_so;
    use crate::catalog::classical::su;

    #[test]
    fn so5_setup_dimensions_and_frozen_constants() {
        let tol = Tolerance::default();
        let cf = circle_bundle_so(5).unwrap();
        let prescribed = cf.prescribed();
        let setup = cf.fibration.analyze(tol, prescribed).unwrap();
        assert_eq!(setup.s, 1);
        assert_eq!(setup.r, 1);
        assert_eq!(setup.block_dim(0), 1);
        assert_eq!(setup.block_dim(1), 6);
        let c = &setup.constants;
        // Frozen independently: C_k on n is exactly 1/2, C_p on n is 1/6,
        // C_l on n is 1/3, and the fiber is abelian (gamma = c_l_p = 0).
        assert!((c.c_k_n[0] - 0.5).abs() < 1e-12);
        assert!((c.b_n[0] - 1.0 / 6.0).abs() < 1e-12);
        assert!((c.c_l_n[0] - 1.0 / 3.0).abs() < 1e-12);
        assert!(c.gamma[0].abs() < 1e-12);
        assert!(c.c_l_p[0].abs() < 1e-12);
        let inv = invariant_residuals(&setup).unwrap();
        assert!(inv.max() < 1e-9, "residuals: {:?}", inv);
    }

    #[test]
    fn rejects_non_subalgebra_k() {
        let tol = Tolerance::default();
        let alg = su(3).unwrap().algebra;
        // first two basis vectors (A_01, A_02): [A_01, A_02] = -A_12 leaves
        // the span
        let k = Subspace::from_columns(DMatrix::identity(8, 8).columns(0, 2).into_owned());
        let l = Subspace::empty(8);
        let fib = Fibration::new(alg, k, l);
        let err = fib.validate(tol).unwrap_err();
        assert!(err.to_string().contains("not closed"));
    }
}
