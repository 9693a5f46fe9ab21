//! The summary table of circle bundles over irreducible Hermitian symmetric
//! bases: base dimension m and the non-normal binormal Einstein ratio
//! (m + 2) / (2 m) for each family, with buildable representatives for the
//! classical rows and arithmetic-only rows for the two exceptional spaces.

use num_rational::Rational64;

use super::{bundles, CatalogFibration};
use crate::error::Result;

/// How to construct a representative fibration for a table row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowBuilder {
    Su(usize, usize),
    So(usize),
    SoEven(usize),
    Sp(usize),
}

impl RowBuilder {
    pub fn build(self) -> Result<CatalogFibration> {
        match self {
            RowBuilder::Su(n, p) => bundles::circle_bundle_su(n, p),
            RowBuilder::So(n) => bundles::circle_bundle_so(n),
            RowBuilder::SoEven(half) => bundles::circle_bundle_so_even(half),
            RowBuilder::Sp(n) => bundles::circle_bundle_sp(n),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TableRow {
    pub name: String,
    pub base_dim: usize,
    pub x_num: i64,
    pub x_den: i64,
    pub x: f64,
    pub builder: Option<RowBuilder>,
}

fn row(name: &str, base_dim: usize, builder: Option<RowBuilder>) -> TableRow {
    let exact = Rational64::new(base_dim as i64 + 2, 2 * base_dim as i64);
    TableRow {
        name: name.to_string(),
        base_dim,
        x_num: *exact.numer(),
        x_den: *exact.denom(),
        x: (base_dim as f64 + 2.0) / (2.0 * base_dim as f64),
        builder,
    }
}

pub fn row_su(n: usize, p: usize) -> TableRow {
    let q = n - p;
    row(
        &format!("su({n})/s(u({p})+u({q}))"),
        2 * p * q,
        Some(RowBuilder::Su(n, p)),
    )
}

pub fn row_so(n: usize) -> TableRow {
    row(
        &format!("so({n})/(so(2)+so({}))", n - 2),
        2 * (n - 2),
        Some(RowBuilder::So(n)),
    )
}

pub fn row_so_even(half: usize) -> TableRow {
    row(
        &format!("so({})/u({half})", 2 * half),
        half * (half - 1),
        Some(RowBuilder::SoEven(half)),
    )
}

pub fn row_sp(n: usize) -> TableRow {
    row(&format!("sp({n})/u({n})"), n * (n + 1), Some(RowBuilder::Sp(n)))
}

/// e6 over so(10) + u(1): base dimension 32, ratio 17/32. Arithmetic only.
pub fn row_e6() -> TableRow {
    row("e6/(so(10)+u(1))", 32, None)
}

/// e7 over e6 + u(1): base dimension 54, ratio 14/27. Arithmetic only.
pub fn row_e7() -> TableRow {
    row("e7/(e6+u(1))", 54, None)
}

/// One representative per family, in the order the summary table lists them.
pub fn representative_rows() -> Vec<TableRow> {
    vec![
        row_su(4, 1),
        row_so_even(3),
        row_so(5),
        row_sp(2),
        row_e6(),
        row_e7(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exceptional_ratios_reduce_to_the_golden_fractions() {
        let e6 = row_e6();
        assert_eq!((e6.x_num, e6.x_den), (17, 32));
        let e7 = row_e7();
        assert_eq!((e7.x_num, e7.x_den), (14, 27));
    }

    #[test]
    fn classical_rows_carry_builders_and_reduced_ratios() {
        let r = row_su(4, 1);
        assert_eq!(r.base_dim, 6);
        assert_eq!((r.x_num, r.x_den), (2, 3));
        assert!(r.builder.is_some());
        let r = row_so(6);
        assert_eq!(r.base_dim, 8);
        assert_eq!((r.x_num, r.x_den), (5, 8));
        let r = row_so_even(4);
        assert_eq!(r.base_dim, 12);
        assert_eq!((r.x_num, r.x_den), (7, 12));
        let r = row_sp(3);
        assert_eq!(r.base_dim, 12);
        assert_eq!((r.x_num, r.x_den), (7, 12));
    }
}
