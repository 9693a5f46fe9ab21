//! Compact classical matrix algebras with exact rational-coefficient
//! structure constants, built from explicit matrix bases.

use crate::error::{EinfibError, Result};
use crate::exact::{cq, BasisExpander, CMat, ExactStructure, CQ};
use crate::liealg::LieAlgebra;

/// An algebra built from a matrix basis: the exact structure tensor, its
/// numeric form, and an expander that writes further matrices in the basis.
pub struct BuiltAlgebra {
    pub name: String,
    pub exact: ExactStructure,
    pub algebra: LieAlgebra,
    pub expander: BasisExpander,
}

fn build(name: String, basis: Vec<CMat>) -> Result<BuiltAlgebra> {
    let (exact, expander) = ExactStructure::from_matrix_basis(&basis)?;
    let algebra = LieAlgebra::from_exact(&exact);
    Ok(BuiltAlgebra {
        name,
        exact,
        algebra,
        expander,
    })
}

fn entry(j: usize, k: usize, v: CQ) -> (usize, usize, CQ) {
    (j, k, v)
}

/// E_jk - E_kj.
fn a_mat(n: usize, j: usize, k: usize) -> CMat {
    CMat::from_entries(n, n, &[entry(j, k, cq(1, 0)), entry(k, j, cq(-1, 0))])
}

/// i (E_jk + E_kj).
fn s_mat(n: usize, j: usize, k: usize) -> CMat {
    CMat::from_entries(n, n, &[entry(j, k, cq(0, 1)), entry(k, j, cq(0, 1))])
}

/// i (E_jj - E_{j+1,j+1}).
fn d_mat(n: usize, j: usize) -> CMat {
    CMat::from_entries(n, n, &[entry(j, j, cq(0, 1)), entry(j + 1, j + 1, cq(0, -1))])
}

/// Traceless anti-Hermitian n x n matrices. Basis order: the real
/// antisymmetric pairs (lexicographic), then the imaginary symmetric pairs,
/// then the diagonal differences.
pub fn su(n: usize) -> Result<BuiltAlgebra> {
    if n < 2 {
        return Err(EinfibError::validation(format!(
            "su({n}) is not semisimple"
        )));
    }
    let mut basis = Vec::with_capacity(n * n - 1);
    for j in 0..n {
        for k in (j + 1)..n {
            basis.push(a_mat(n, j, k));
        }
    }
    for j in 0..n {
        for k in (j + 1)..n {
            basis.push(s_mat(n, j, k));
        }
    }
    for j in 0..(n - 1) {
        basis.push(d_mat(n, j));
    }
    build(format!("su({n})"), basis)
}

/// Real antisymmetric n x n matrices, basis E_jk - E_kj in lexicographic
/// order.
pub fn so(n: usize) -> Result<BuiltAlgebra> {
    if n < 3 {
        return Err(EinfibError::validation(format!(
            "so({n}) is not semisimple"
        )));
    }
    let mut basis = Vec::with_capacity(n * (n - 1) / 2);
    for j in 0..n {
        for k in (j + 1)..n {
            basis.push(a_mat(n, j, k));
        }
    }
    build(format!("so({n})"), basis)
}

/// The compact symplectic algebra as 2n x 2n complex matrices
/// [[Z, W], [-conj(W), conj(Z)]] with Z anti-Hermitian and W symmetric.
/// Basis order: lifts of the u(n) basis (antisymmetric pairs, imaginary
/// symmetric pairs, imaginary diagonals), then the W part (real diagonals,
/// imaginary diagonals, real off-diagonal pairs, imaginary off-diagonal
/// pairs).
pub fn sp(n: usize) -> Result<BuiltAlgebra> {
    if n < 1 {
        return Err(EinfibError::validation("sp(0) is empty".to_string()));
    }
    let m = 2 * n;
    let mut basis = Vec::with_capacity(n * (2 * n + 1));
    // u(n) lift: Z -> diag(Z, conj(Z)).
    for j in 0..n {
        for k in (j + 1)..n {
            basis.push(CMat::from_entries(
                m,
                m,
                &[
                    entry(j, k, cq(1, 0)),
                    entry(k, j, cq(-1, 0)),
                    entry(n + j, n + k, cq(1, 0)),
                    entry(n + k, n + j, cq(-1, 0)),
                ],
            ));
        }
    }
    for j in 0..n {
        for k in (j + 1)..n {
            basis.push(CMat::from_entries(
                m,
                m,
                &[
                    entry(j, k, cq(0, 1)),
                    entry(k, j, cq(0, 1)),
                    entry(n + j, n + k, cq(0, -1)),
                    entry(n + k, n + j, cq(0, -1)),
                ],
            ));
        }
    }
    for j in 0..n {
        basis.push(CMat::from_entries(
            m,
            m,
            &[entry(j, j, cq(0, 1)), entry(n + j, n + j, cq(0, -1))],
        ));
    }
    // W part: X -> [[0, W], [-conj(W), 0]].
    for j in 0..n {
        basis.push(CMat::from_entries(
            m,
            m,
            &[entry(j, n + j, cq(1, 0)), entry(n + j, j, cq(-1, 0))],
        ));
    }
    for j in 0..n {
        basis.push(CMat::from_entries(
            m,
            m,
            &[entry(j, n + j, cq(0, 1)), entry(n + j, j, cq(0, 1))],
        ));
    }
    for j in 0..n {
        for k in (j + 1)..n {
            basis.push(CMat::from_entries(
                m,
                m,
                &[
                    entry(j, n + k, cq(1, 0)),
                    entry(k, n + j, cq(1, 0)),
                    entry(n + j, k, cq(-1, 0)),
                    entry(n + k, j, cq(-1, 0)),
                ],
            ));
        }
    }
    for j in 0..n {
        for k in (j + 1)..n {
            basis.push(CMat::from_entries(
                m,
                m,
                &[
                    entry(j, n + k, cq(0, 1)),
                    entry(k, n + j, cq(0, 1)),
                    entry(n + j, k, cq(0, 1)),
                    entry(n + k, j, cq(0, 1)),
                ],
            ));
        }
    }
    build(format!("sp({n})"), basis)
}

/// Build a classical algebra by family name ("su", "so", "sp") and rank
/// parameter.
pub fn classical(kind: &str, n: usize) -> Result<BuiltAlgebra> {
    match kind {
        "su" => su(n),
        "so" => so(n),
        "sp" => sp(n),
        other => Err(EinfibError::validation(format!(
            "unknown classical family '{other}' (expected su, so or sp)"
        ))),
    }
}

/// Parse compact names like "su2", "so5", "sp(3)".
pub fn by_name(name: &str) -> Result<BuiltAlgebra> {
    let cleaned: String = name
        .chars()
        .filter(|c| !matches!(c, '(' | ')' | ' '))
        .collect();
    let split = cleaned
        .find(|c: char| c.is_ascii_digit())
        .ok_or_else(|| EinfibError::validation(format!("cannot parse algebra name '{name}'")))?;
    let (kind, digits) = cleaned.split_at(split);
    let n: usize = digits
        .parse()
        .map_err(|_| EinfibError::validation(format!("cannot parse algebra name '{name}'")))?;
    classical(kind, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol::Tolerance;

    #[test]
    fn dimensions_match_the_closed_forms() {
        assert_eq!(su(3).unwrap().algebra.dim(), 8);
        assert_eq!(su(5).unwrap().algebra.dim(), 24);
        assert_eq!(so(5).unwrap().algebra.dim(), 10);
        assert_eq!(so(8).unwrap().algebra.dim(), 28);
        assert_eq!(sp(2).unwrap().algebra.dim(), 10);
        assert_eq!(sp(3).unwrap().algebra.dim(), 21);
    }

    #[test]
    fn all_families_validate_as_compact_semisimple() {
        let tol = Tolerance::default();
        for built in [
            su(2).unwrap(),
            su(4).unwrap(),
            so(5).unwrap(),
            so(6).unwrap(),
            sp(1).unwrap(),
            sp(2).unwrap(),
        ] {
            let checks = built.algebra.validate(tol).unwrap();
            assert!(checks.jacobi_residual < 1e-12, "{}", built.name);
            assert!(checks.b_min_eigenvalue > 0.0, "{}", built.name);
        }
        assert!(su(1).is_err());
        assert!(by_name("sl2").is_err());
    }

    #[test]
    fn exact_structures_pass_the_rational_checks() {
        for built in [su(3).unwrap(), so(5).unwrap(), sp(2).unwrap()] {
            built.exact.validate().unwrap();
        }
    }

    #[test]
    fn name_parsing_accepts_both_spellings() {
        assert_eq!(by_name("su2").unwrap().algebra.dim(), 3);
        assert_eq!(by_name("sp(2)").unwrap().algebra.dim(), 10);
    }

    #[test]
    fn sp1_matches_su2_killing_scale() {
        // sp(1) and su(2) are isomorphic; their Killing forms on matching
        // bases differ only by the basis normalization.
        let sp1 = sp(1).unwrap();
        let checks = sp1.algebra.validate(Tolerance::default()).unwrap();
        assert!(checks.b_min_eigenvalue > 0.0);
        assert_eq!(sp1.algebra.dim(), 3);
    }
}
