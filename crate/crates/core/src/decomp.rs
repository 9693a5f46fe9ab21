//! Decomposition of an invariant module into irreducible pieces via the
//! symmetric commutant, plus intertwiner dimensions for equivalence checks.
//!
//! For a module with an invariant inner product, a subrepresentation exists
//! exactly when some B-symmetric operator commutes with the action without
//! being scalar, so: symmetric commutant of dimension 1 ⟺ irreducible. This
//! covers real, complex and quaternionic type uniformly (the extra
//! endomorphisms are antisymmetric). Reducible modules are split along the
//! eigenspaces of a generic element of the symmetric commutant and the
//! pieces are refined recursively.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::casimir::scalar_on;
use crate::error::{EinfibError, Result};
use crate::liealg::LieAlgebra;
use crate::linalg::{null_space, sym_eigen_sorted};
use crate::subspace::Subspace;
use crate::tol::Tolerance;

/// Fixed seed for the generic commutant element; decomposition output is
/// fully deterministic.
const GENERIC_ELEMENT_SEED: u64 = 0x45494e4649420001;

const MAX_SPLIT_DEPTH: usize = 16;

/// Matrices of the acting subalgebra restricted to the module, in a
/// B-orthonormal basis of the module (so they are antisymmetric).
fn restricted_action(
    alg: &LieAlgebra,
    acting: &Subspace,
    module_onb: &DMatrix<f64>,
) -> Vec<DMatrix<f64>> {
    let b = alg.b();
    (0..acting.dim())
        .map(|i| {
            let ad = alg.ad(&acting.cols().column(i).into_owned());
            module_onb.transpose() * b * ad * module_onb
        })
        .collect()
}

fn sym_basis_index(w: usize) -> Vec<(usize, usize)> {
    let mut idx = Vec::with_capacity(w * (w + 1) / 2);
    for i in 0..w {
        for j in i..w {
            idx.push((i, j));
        }
    }
    idx
}

/// Basis of the space of symmetric matrices commuting with every action
/// matrix, as coordinate vectors over the symmetric-entry basis.
fn symmetric_commutant(action: &[DMatrix<f64>], w: usize, tol: Tolerance) -> DMatrix<f64> {
    let sym_idx = sym_basis_index(w);
    let nvars = sym_idx.len();
    if action.is_empty() {
        // trivial action: every symmetric matrix commutes
        return DMatrix::identity(nvars, nvars);
    }
    let mut m = DMatrix::zeros(action.len() * w * w, nvars);
    for (col, &(i, j)) in sym_idx.iter().enumerate() {
        let mut e = DMatrix::zeros(w, w);
        e[(i, j)] = 1.0;
        e[(j, i)] = 1.0;
        for (xi, a) in action.iter().enumerate() {
            let c = a * &e - &e * a;
            for r in 0..w {
                for s in 0..w {
                    m[(xi * w * w + r * w + s, col)] = c[(r, s)];
                }
            }
        }
    }
    null_space(&m, tol.eps)
}

fn sym_from_coords(coords: &DVector<f64>, w: usize) -> DMatrix<f64> {
    let sym_idx = sym_basis_index(w);
    let mut s = DMatrix::zeros(w, w);
    for (col, &(i, j)) in sym_idx.iter().enumerate() {
        s[(i, j)] += coords[col];
        s[(j, i)] += if i == j { 0.0 } else { coords[col] };
    }
    s
}

/// Dimension of the symmetric commutant of the action on `module`.
pub fn symmetric_commutant_dim(
    alg: &LieAlgebra,
    acting: &Subspace,
    module: &Subspace,
    tol: Tolerance,
) -> Result<usize> {
    let onb = module.b_onb(alg.b(), tol)?;
    let action = restricted_action(alg, acting, &onb);
    Ok(symmetric_commutant(&action, module.dim(), tol).ncols())
}

/// Split eigenvalues (ascending) into clusters separated by more than the
/// merge threshold.
fn cluster_cuts(vals: &[f64], tol: Tolerance) -> Vec<usize> {
    let scale = vals
        .iter()
        .fold(0.0f64, |a, &v| a.max(v.abs()));
    let gap = tol.cluster_gap(scale);
    let mut cuts = Vec::new();
    for i in 1..vals.len() {
        if vals[i] - vals[i - 1] > gap {
            cuts.push(i);
        }
    }
    cuts
}

fn split_once(
    alg: &LieAlgebra,
    acting: &Subspace,
    module_onb: &DMatrix<f64>,
    tol: Tolerance,
    depth: usize,
    out: &mut Vec<Subspace>,
) -> Result<()> {
    let w = module_onb.ncols();
    if w == 0 {
        return Ok(());
    }
    if depth > MAX_SPLIT_DEPTH {
        return Err(EinfibError::numerical(
            "invariant decomposition did not stabilize (recursion depth exceeded)".to_string(),
        ));
    }
    if acting.dim() == 0 {
        // trivial action: irreducible pieces are the coordinate lines
        for j in 0..w {
            out.push(Subspace::from_columns(module_onb.columns(j, 1).into_owned()));
        }
        return Ok(());
    }
    let action = restricted_action(alg, acting, module_onb);
    let comm = symmetric_commutant(&action, w, tol);
    if comm.ncols() == 0 {
        return Err(EinfibError::numerical(
            "commutant computation lost the identity operator".to_string(),
        ));
    }
    if comm.ncols() == 1 {
        out.push(Subspace::from_columns(module_onb.clone()));
        return Ok(());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(GENERIC_ELEMENT_SEED ^ (depth as u64) << 32 ^ w as u64);
    let coeffs = DVector::from_fn(comm.ncols(), |_, _| rng.random_range(-1.0..1.0));
    let generic = sym_from_coords(&(&comm * coeffs), w);
    let (vals, vecs) = sym_eigen_sorted(&generic);
    let cuts = cluster_cuts(&vals, tol);
    if cuts.is_empty() {
        return Err(EinfibError::numerical(format!(
            "eigenvalue clustering failed to split a {}-dimensional module with commutant \
             dimension {}; eigenvalues were merged at the working tolerance",
            w,
            comm.ncols()
        )));
    }
    let mut start = 0usize;
    let mut bounds: Vec<usize> = cuts.clone();
    bounds.push(w);
    for &end in &bounds {
        let piece = module_onb * vecs.columns(start, end - start);
        split_once(alg, acting, &piece, tol, depth + 1, out)?;
        start = end;
    }
    Ok(())
}

/// Decompose `module` into irreducible invariant summands under `acting`.
/// Pieces come back in canonical order (see [`order_summands`]); each piece's
/// columns are B-orthonormal.
pub fn decompose_module(
    alg: &LieAlgebra,
    acting: &Subspace,
    module: &Subspace,
    casimir_acting: &DMatrix<f64>,
    tol: Tolerance,
) -> Result<Vec<Subspace>> {
    if module.dim() == 0 {
        return Ok(Vec::new());
    }
    let onb = module.b_onb(alg.b(), tol)?;
    let mut out = Vec::new();
    split_once(alg, acting, &onb, tol, 0, &mut out)?;
    order_summands(alg, casimir_acting, out, tol)
}

/// Canonical summand order: dimension ascending, then the Casimir eigenvalue
/// of the acting algebra ascending, then a lexicographic tie-break on the
/// B-orthogonal projection matrices (basis-independent, hence deterministic).
pub fn order_summands(
    alg: &LieAlgebra,
    casimir_acting: &DMatrix<f64>,
    summands: Vec<Subspace>,
    tol: Tolerance,
) -> Result<Vec<Subspace>> {
    const KEY_TOL: f64 = 1e-6;
    let b = alg.b();
    let mut keyed: Vec<(usize, f64, Vec<f64>, Subspace)> = Vec::with_capacity(summands.len());
    for s in summands {
        let onb = s.b_onb(b, tol)?;
        let (cas, _) = scalar_on(casimir_acting, &onb, b);
        let proj = &onb * onb.transpose() * b;
        let flat: Vec<f64> = proj.iter().copied().collect();
        keyed.push((s.dim(), cas, flat, s));
    }
    keyed.sort_by(|a, bb| {
        a.0.cmp(&bb.0).then_with(|| {
            if (a.1 - bb.1).abs() > KEY_TOL {
                a.1.total_cmp(&bb.1)
            } else {
                for (x, y) in a.2.iter().zip(bb.2.iter()) {
                    if (x - y).abs() > KEY_TOL {
                        return x.total_cmp(y);
                    }
                }
                std::cmp::Ordering::Equal
            }
        })
    });
    Ok(keyed.into_iter().map(|(_, _, _, s)| s).collect())
}

/// Dimension of the space of intertwiners w1 -> w2 (no symmetry constraint).
/// Zero exactly when the modules share no irreducible constituent.
pub fn hom_dimension(
    alg: &LieAlgebra,
    acting: &Subspace,
    w1: &Subspace,
    w2: &Subspace,
    tol: Tolerance,
) -> Result<usize> {
    let (d1, d2) = (w1.dim(), w2.dim());
    if d1 == 0 || d2 == 0 {
        return Ok(0);
    }
    if acting.dim() == 0 {
        return Ok(d1 * d2);
    }
    let onb1 = w1.b_onb(alg.b(), tol)?;
    let onb2 = w2.b_onb(alg.b(), tol)?;
    let a1 = restricted_action(alg, acting, &onb1);
    let a2 = restricted_action(alg, acting, &onb2);
    let id1 = DMatrix::<f64>::identity(d1, d1);
    let id2 = DMatrix::<f64>::identity(d2, d2);
    let mut m = DMatrix::zeros(acting.dim() * d1 * d2, d1 * d2);
    for x in 0..acting.dim() {
        // vec(A2 T - T A1) = (I ⊗ A2 - A1ᵀ ⊗ I) vec(T), column-major
        let k = id1.kronecker(&a2[x]) - a1[x].transpose().kronecker(&id2);
        m.rows_mut(x * d1 * d2, d1 * d2).copy_from(&k);
    }
    Ok(null_space(&m, tol.eps).ncols())
}
