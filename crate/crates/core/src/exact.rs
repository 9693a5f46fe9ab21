//! Exact Gaussian-rational arithmetic for the built-in algebra constructors.
//!
//! The catalog builds its Lie algebras from explicit matrices with entries in
//! Q + iQ. Brackets, basis coordinates, antisymmetry, the Jacobi identity and
//! the Killing form are all computed exactly here; only the final structure
//! tensor is lowered to f64 for the numerical pipeline.
//!
//! Coordinates of a bracket in the chosen basis are found by an f64
//! least-squares solve followed by rational snapping; the snapped coordinates
//! are then verified exactly against the matrices, so a wrong snap cannot
//! slip through.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use num_rational::Rational64;
use num_traits::Zero;

use crate::error::{EinfibError, Result};

pub type Q = Rational64;
pub type CQ = Complex<Q>;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(num, den)
}

pub fn qi(num: i64) -> Q {
    Q::from_integer(num)
}

pub fn cq<R: Into<Q>, I: Into<Q>>(re: R, im: I) -> CQ {
    Complex::new(re.into(), im.into())
}

/// Nearest rational with bounded denominator, via the continued-fraction
/// convergents of `x`. Returns None when no convergent with denominator at
/// most `max_den` lands within `tol`.
pub fn rationalize(x: f64, max_den: i64, tol: f64) -> Option<Q> {
    if !x.is_finite() {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (1i64, 0i64, x.floor() as i64, 1i64);
    let mut frac = x - x.floor();
    for _ in 0..64 {
        let approx = p1 as f64 / q1 as f64;
        if (approx - x).abs() <= tol {
            return Some(Q::new(p1, q1));
        }
        if frac.abs() < 1e-15 {
            break;
        }
        let r = 1.0 / frac;
        let a = r.floor();
        if a >= 9.0e18 {
            break;
        }
        frac = r - a;
        let a = a as i64;
        let p2 = a.checked_mul(p1)?.checked_add(p0)?;
        let q2 = a.checked_mul(q1)?.checked_add(q0)?;
        if q2 > max_den {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    let approx = p1 as f64 / q1 as f64;
    if (approx - x).abs() <= tol {
        Some(Q::new(p1, q1))
    } else {
        None
    }
}

pub fn q_to_f64(v: Q) -> f64 {
    *v.numer() as f64 / *v.denom() as f64
}

/// Dense complex-rational matrix, row-major.
#[derive(Clone, PartialEq, Debug)]
pub struct CMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<CQ>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![CQ::zero(); rows * cols],
        }
    }

    pub fn from_entries(rows: usize, cols: usize, entries: &[(usize, usize, CQ)]) -> Self {
        let mut m = CMat::zeros(rows, cols);
        for &(i, j, v) in entries {
            m.data[i * cols + j] = v;
        }
        m
    }

    pub fn at(&self, i: usize, j: usize) -> CQ {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: CQ) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows);
        let mut out = CMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if !b.is_zero() {
                        let cur = out.at(i, j);
                        out.set(i, j, cur + a * b);
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a = *a - *b;
        }
        out
    }

    pub fn commutator(a: &CMat, b: &CMat) -> CMat {
        a.mul(b).sub(&b.mul(a))
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> CMat {
        let mut out = self.clone();
        for v in out.data.iter_mut() {
            *v = v.conj();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn trace(&self) -> CQ {
        (0..self.rows.min(self.cols)).fold(CQ::zero(), |acc, i| acc + self.at(i, i))
    }

    /// Real coordinate vector (re then im of each entry, row-major) as f64.
    fn flatten_f64(&self) -> DVector<f64> {
        let mut v = DVector::zeros(2 * self.rows * self.cols);
        for (idx, e) in self.data.iter().enumerate() {
            v[2 * idx] = q_to_f64(e.re);
            v[2 * idx + 1] = q_to_f64(e.im);
        }
        v
    }
}

/// Expresses matrices as exact rational combinations of a fixed independent
/// basis. The least-squares solve runs in f64; candidate coordinates are
/// snapped to rationals and verified exactly.
pub struct BasisExpander {
    basis: Vec<CMat>,
    normal_solve: DMatrix<f64>,
}

impl BasisExpander {
    pub fn new(basis: Vec<CMat>) -> Result<Self> {
        assert!(!basis.is_empty());
        let m = 2 * basis[0].rows * basis[0].cols;
        let n = basis.len();
        let mut flat = DMatrix::zeros(m, n);
        for (j, b) in basis.iter().enumerate() {
            flat.set_column(j, &b.flatten_f64());
        }
        let gram = flat.transpose() * &flat;
        let inv = gram.clone().try_inverse().ok_or_else(|| {
            EinfibError::validation("matrix basis is numerically dependent".to_string())
        })?;
        Ok(BasisExpander {
            basis,
            normal_solve: inv * flat.transpose(),
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[CMat] {
        &self.basis
    }

    /// Exact coordinates of `target` in the basis. Errors if `target` is not
    /// in the span or a coordinate fails to snap to a rational of height
    /// below 10^6.
    pub fn express(&self, target: &CMat) -> Result<Vec<Q>> {
        let approx = &self.normal_solve * target.flatten_f64();
        let mut coords = Vec::with_capacity(self.basis.len());
        for (j, &x) in approx.iter().enumerate() {
            let r = rationalize(x, 1_000_000, 1e-7).ok_or_else(|| {
                EinfibError::validation(format!(
                    "coordinate {} of a bracket did not snap to a rational (value {:.6e})",
                    j, x
                ))
            })?;
            coords.push(r);
        }
        // Exact residual check: sum coords_j * basis_j must equal target.
        let mut residual = target.clone();
        for (c, b) in coords.iter().zip(self.basis.iter()) {
            if c.is_zero() {
                continue;
            }
            for i in 0..residual.rows {
                for jj in 0..residual.cols {
                    let bv = b.at(i, jj);
                    if !bv.is_zero() {
                        let cur = residual.at(i, jj);
                        residual.set(i, jj, cur - bv * cq(*c, Q::zero()));
                    }
                }
            }
        }
        if !residual.is_zero() {
            return Err(EinfibError::validation(
                "matrix is not an exact rational combination of the basis".to_string(),
            ));
        }
        Ok(coords)
    }
}

/// Sparse coordinate list: (basis index, exact coefficient).
pub type SparseVec = Vec<(usize, Q)>;

fn sparse_coeff(v: &SparseVec, idx: usize) -> Q {
    v.iter()
        .find(|&&(i, _)| i == idx)
        .map(|&(_, c)| c)
        .unwrap_or_else(Q::zero)
}

/// Structure tensor of a Lie algebra with exact rational structure constants:
/// [e_i, e_j] = sum_k c[i][j][k] e_k, stored sparsely.
#[derive(Clone, Debug)]
pub struct ExactStructure {
    pub dim: usize,
    c: Vec<Vec<SparseVec>>,
}

impl ExactStructure {
    pub fn new(dim: usize) -> Self {
        ExactStructure {
            dim,
            c: vec![vec![Vec::new(); dim]; dim],
        }
    }

    /// Build from an explicit matrix basis: all brackets are computed and
    /// expressed exactly.
    pub fn from_matrix_basis(basis: &[CMat]) -> Result<(Self, BasisExpander)> {
        let expander = BasisExpander::new(basis.to_vec())?;
        let dim = basis.len();
        let mut s = ExactStructure::new(dim);
        for i in 0..dim {
            for j in (i + 1)..dim {
                let br = CMat::commutator(&basis[i], &basis[j]);
                let coords = if br.is_zero() {
                    Vec::new()
                } else {
                    expander
                        .express(&br)?
                        .into_iter()
                        .enumerate()
                        .filter(|(_, v)| !v.is_zero())
                        .collect()
                };
                s.c[j][i] = coords.iter().map(|&(k, v)| (k, -v)).collect();
                s.c[i][j] = coords;
            }
        }
        Ok((s, expander))
    }

    pub fn set_bracket(&mut self, i: usize, j: usize, coords: SparseVec) {
        self.c[j][i] = coords.iter().map(|&(k, v)| (k, -v)).collect();
        self.c[i][j] = coords;
    }

    pub fn bracket_coords(&self, i: usize, j: usize) -> &SparseVec {
        &self.c[i][j]
    }

    /// Block direct sum: factors keep their internal structure, cross
    /// brackets vanish.
    pub fn direct_sum(parts: &[&ExactStructure]) -> Self {
        let dim = parts.iter().map(|p| p.dim).sum();
        let mut s = ExactStructure::new(dim);
        let mut off = 0;
        for part in parts {
            for i in 0..part.dim {
                for j in 0..part.dim {
                    s.c[off + i][off + j] = part.c[i][j]
                        .iter()
                        .map(|&(k, v)| (off + k, v))
                        .collect();
                }
            }
            off += part.dim;
        }
        s
    }

    /// Exact antisymmetry and Jacobi identity.
    pub fn validate(&self) -> Result<()> {
        let d = self.dim;
        for i in 0..d {
            if !self.c[i][i].is_empty() {
                return Err(EinfibError::validation(format!(
                    "[e_{i}, e_{i}] is nonzero"
                )));
            }
            for j in 0..d {
                for &(k, v) in &self.c[i][j] {
                    if sparse_coeff(&self.c[j][i], k) != -v {
                        return Err(EinfibError::validation(format!(
                            "structure constants not antisymmetric at ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        let mut acc: Vec<Q> = vec![Q::zero(); d];
        let mut touched: Vec<usize> = Vec::new();
        for i in 0..d {
            for j in (i + 1)..d {
                for k in (j + 1)..d {
                    for &(x, y, z) in &[(i, j, k), (j, k, i), (k, i, j)] {
                        for &(a, va) in &self.c[x][y] {
                            for &(t, vt) in &self.c[a][z] {
                                if acc[t].is_zero() {
                                    touched.push(t);
                                }
                                acc[t] = acc[t] + va * vt;
                            }
                        }
                    }
                    let bad = touched.iter().any(|&t| !acc[t].is_zero());
                    for &t in &touched {
                        acc[t] = Q::zero();
                    }
                    touched.clear();
                    if bad {
                        return Err(EinfibError::validation(format!(
                            "Jacobi identity fails exactly on basis triple ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Exact Killing form Phi_ij = tr(ad_i ad_j).
    pub fn killing(&self) -> Vec<Vec<Q>> {
        let d = self.dim;
        let mut phi = vec![vec![Q::zero(); d]; d];
        for i in 0..d {
            for j in i..d {
                // tr(ad_i ad_j) = sum_b <[e_i, [e_j, e_b]], e_b*> in coords
                let mut s = Q::zero();
                for b in 0..d {
                    for &(a, va) in &self.c[j][b] {
                        s = s + va * sparse_coeff(&self.c[i][a], b);
                    }
                }
                phi[i][j] = s;
                phi[j][i] = s;
            }
        }
        phi
    }

    /// All nonzero structure constants as f64 triples (i, j, k, value).
    pub fn entries_f64(&self) -> Vec<(usize, usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                for &(k, v) in &self.c[i][j] {
                    out.push((i, j, k, q_to_f64(v)));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn su2_basis() -> Vec<CMat> {
        // e1 = diag(i, -i), e2 = [[0,1],[-1,0]], e3 = [[0,i],[i,0]]
        let i1 = cq(qi(0), qi(1));
        let m1 = CMat::from_entries(2, 2, &[(0, 0, i1), (1, 1, cq(qi(0), qi(-1)))]);
        let m2 = CMat::from_entries(2, 2, &[(0, 1, cq(qi(1), qi(0))), (1, 0, cq(qi(-1), qi(0)))]);
        let m3 = CMat::from_entries(2, 2, &[(0, 1, i1), (1, 0, i1)]);
        vec![m1, m2, m3]
    }

    #[test]
    fn su2_structure_constants_exact() {
        let (s, _) = ExactStructure::from_matrix_basis(&su2_basis()).unwrap();
        s.validate().unwrap();
        // [e1,e2] = 2e3, [e2,e3] = 2e1, [e3,e1] = 2e2
        assert_eq!(s.bracket_coords(0, 1), &vec![(2, qi(2))]);
        assert_eq!(s.bracket_coords(1, 2), &vec![(0, qi(2))]);
        assert_eq!(s.bracket_coords(2, 0), &vec![(1, qi(2))]);
    }

    #[test]
    fn su2_killing_is_minus_eight_identity() {
        let (s, _) = ExactStructure::from_matrix_basis(&su2_basis()).unwrap();
        let phi = s.killing();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { qi(-8) } else { qi(0) };
                assert_eq!(phi[i][j], expect);
            }
        }
    }

    #[test]
    fn direct_sum_keeps_blocks() {
        let (s, _) = ExactStructure::from_matrix_basis(&su2_basis()).unwrap();
        let double = ExactStructure::direct_sum(&[&s, &s]);
        double.validate().unwrap();
        assert_eq!(double.dim, 6);
        assert_eq!(double.bracket_coords(3, 4), &vec![(5, qi(2))]);
        assert!(double.bracket_coords(0, 4).is_empty());
    }

    #[test]
    fn rationalize_simple_fractions() {
        assert_eq!(rationalize(0.5, 100, 1e-9), Some(q(1, 2)));
        assert_eq!(rationalize(-2.0 / 3.0, 100, 1e-9), Some(q(-2, 3)));
        assert_eq!(rationalize(17.0 / 32.0, 100, 1e-9), Some(q(17, 32)));
        assert!(rationalize(std::f64::consts::SQRT_2, 50, 1e-12).is_none());
    }

    #[test]
    fn expander_rejects_out_of_span() {
        let basis = su2_basis();
        let (_, expander) = ExactStructure::from_matrix_basis(&basis).unwrap();
        // identity matrix is not in su(2)
        let id = CMat::from_entries(2, 2, &[(0, 0, cq(qi(1), qi(0))), (1, 1, cq(qi(1), qi(0)))]);
        assert!(expander.express(&id).is_err());
    }
}
