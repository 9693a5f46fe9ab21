//! JSON input schema for algebras and fibrations.
//!
//! An algebra is one of:
//! - `{"classical": "su", "n": 3}`
//! - `{"product": [<algebra>, <algebra>, ...]}`
//! - `{"dim": d, "structure": [[i, j, k, "c"], ...]}` with decimal-string
//!   coefficients, meaning `[e_i, e_j] = sum_k c e_k`.
//!
//! A fibration wraps an algebra with `k_basis` (required) and `l_basis`
//! (optional, empty means a trivial isotropy group) given as coordinate
//! rows.

use nalgebra::DVector;
use serde::Deserialize;

use crate::catalog::classical;
use crate::error::{EinfibError, Result};
use crate::fibration::Fibration;
use crate::liealg::LieAlgebra;
use crate::subspace::Subspace;

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum AlgebraInput {
    Classical { classical: String, n: usize },
    Product { product: Vec<AlgebraInput> },
    Structure {
        dim: usize,
        structure: Vec<(usize, usize, usize, String)>,
    },
}

#[derive(Debug, Deserialize)]
pub struct FibrationInput {
    pub algebra: AlgebraInput,
    pub k_basis: Vec<Vec<f64>>,
    #[serde(default)]
    pub l_basis: Vec<Vec<f64>>,
    #[serde(default)]
    pub name: Option<String>,
}

fn parse_coefficient(raw: &str, position: usize) -> Result<f64> {
    raw.trim().parse::<f64>().map_err(|_| {
        EinfibError::validation(format!(
            "structure entry {position} has a non-numeric coefficient '{raw}'"
        ))
    })
}

/// Nonzero structure entries (i, j, k, c) of an algebra, read back from its
/// bracket tensor.
fn structure_entries(alg: &LieAlgebra) -> Vec<(usize, usize, usize, f64)> {
    let d = alg.dim();
    let mut out = Vec::new();
    for i in 0..d {
        let ad = alg.ad_basis(i);
        for j in 0..d {
            for k in 0..d {
                let c = ad[(k, j)];
                if c != 0.0 {
                    out.push((i, j, k, c));
                }
            }
        }
    }
    out
}

pub fn algebra_from_input(input: &AlgebraInput) -> Result<LieAlgebra> {
    match input {
        AlgebraInput::Classical { classical: kind, n } => {
            Ok(classical::classical(kind, *n)?.algebra)
        }
        AlgebraInput::Product { product } => {
            if product.is_empty() {
                return Err(EinfibError::validation(
                    "product algebra needs at least one factor".to_string(),
                ));
            }
            let parts: Vec<LieAlgebra> = product
                .iter()
                .map(algebra_from_input)
                .collect::<Result<_>>()?;
            let total: usize = parts.iter().map(|p| p.dim()).sum();
            let mut entries = Vec::new();
            let mut off = 0usize;
            for part in &parts {
                for (i, j, k, c) in structure_entries(part) {
                    entries.push((i + off, j + off, k + off, c));
                }
                off += part.dim();
            }
            LieAlgebra::from_structure_entries(total, &entries)
        }
        AlgebraInput::Structure { dim, structure } => {
            // Entries may list either or both orientations of a bracket;
            // complete them antisymmetrically and reject contradictions.
            let mut map: std::collections::BTreeMap<(usize, usize, usize), f64> =
                std::collections::BTreeMap::new();
            for (pos, (i, j, k, raw)) in structure.iter().enumerate() {
                let c = parse_coefficient(raw, pos)?;
                if i == j && c != 0.0 {
                    return Err(EinfibError::validation(format!(
                        "structure entry {pos} has [e_{i}, e_{i}] != 0"
                    )));
                }
                for (key, val) in [((*i, *j, *k), c), ((*j, *i, *k), -c)] {
                    if let Some(old) = map.insert(key, val) {
                        if (old - val).abs() > 1e-15 {
                            return Err(EinfibError::validation(format!(
                                "structure entries contradict antisymmetry at \
                                 ({}, {}, {}): {} vs {}",
                                key.0, key.1, key.2, old, val
                            )));
                        }
                    }
                }
            }
            let entries: Vec<(usize, usize, usize, f64)> = map
                .into_iter()
                .map(|((i, j, k), c)| (i, j, k, c))
                .collect();
            LieAlgebra::from_structure_entries(*dim, &entries)
        }
    }
}

fn basis_from_rows(rows: &[Vec<f64>], dim: usize, what: &str) -> Result<Subspace> {
    let mut vecs = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        if row.len() != dim {
            return Err(EinfibError::validation(format!(
                "{what} vector {i} has {} coordinates, the algebra has dimension {dim}",
                row.len()
            )));
        }
        vecs.push(DVector::from_vec(row.clone()));
    }
    Ok(Subspace::from_vectors(dim, &vecs))
}

pub fn fibration_from_input(input: &FibrationInput) -> Result<Fibration> {
    let algebra = algebra_from_input(&input.algebra)?;
    let dim = algebra.dim();
    let k = basis_from_rows(&input.k_basis, dim, "k basis")?;
    let l = basis_from_rows(&input.l_basis, dim, "l basis")?;
    let mut fib = Fibration::new(algebra, k, l);
    if let Some(name) = &input.name {
        fib = fib.named(name.clone());
    }
    Ok(fib)
}

pub fn fibration_from_json(text: &str) -> Result<Fibration> {
    let input: FibrationInput = serde_json::from_str(text)?;
    fibration_from_input(&input)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tol::Tolerance;

    #[test]
    fn structure_schema_builds_the_rotation_algebra() {
        let text = r#"{
            "algebra": {"dim": 3, "structure": [
                [0, 1, 2, "1"], [1, 2, 0, "1"], [2, 0, 1, "1"]
            ]},
            "k_basis": [[0.0, 0.0, 1.0]]
        }"#;
        let fib = fibration_from_json(text).unwrap();
        assert_eq!(fib.algebra.dim(), 3);
        assert_eq!(fib.k.dim(), 1);
        assert_eq!(fib.l.dim(), 0);
        fib.validate(Tolerance::default()).unwrap();
    }

    #[test]
    fn classical_schema_matches_the_catalog() {
        let text = r#"{
            "algebra": {"classical": "su", "n": 2},
            "k_basis": [[0.0, 0.0, 1.0]]
        }"#;
        let fib = fibration_from_json(text).unwrap();
        assert_eq!(fib.algebra.dim(), 3);
    }

    #[test]
    fn product_schema_concatenates_blocks() {
        let text = r#"{
            "algebra": {"product": [
                {"classical": "su", "n": 2},
                {"classical": "su", "n": 2}
            ]},
            "k_basis": [
                [0.0, 0.0, 1.0, 0.0, 0.0, 1.0],
                [1.0, 0.0, 0.0, 1.0, 0.0, 0.0],
                [0.0, 1.0, 0.0, 0.0, 1.0, 0.0]
            ]
        }"#;
        let fib = fibration_from_json(text).unwrap();
        assert_eq!(fib.algebra.dim(), 6);
        fib.validate(Tolerance::default()).unwrap();
    }

    #[test]
    fn wrong_length_vector_is_named_in_the_error() {
        let text = r#"{
            "algebra": {"classical": "su", "n": 2},
            "k_basis": [[0.0, 1.0]]
        }"#;
        let err = fibration_from_json(text).unwrap_err();
        assert!(err.to_string().contains("k basis vector 0"));
    }

    #[test]
    fn bad_coefficient_is_rejected() {
        let text = r#"{
            "algebra": {"dim": 2, "structure": [[0, 1, 0, "abc"]]},
            "k_basis": [[1.0, 0.0]]
        }"#;
        assert!(fibration_from_json(text).is_err());
    }
}
