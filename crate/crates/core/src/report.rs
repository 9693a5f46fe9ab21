//! Serializable result types shared by the command-line surface, plus the
//! text renderers (CSV and markdown tables) and input fingerprinting.
//!
//! Floating-point values serialize through `F17`, which prints a fixed
//! 17-significant-digit scientific form so JSON output round-trips the f64
//! exactly and is byte-stable across runs.

use serde::{Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::fibration::{InvariantResiduals, Setup};
use crate::solver::{BaseCondition, Certainty, FiberCondition, VerifiedMetric};

/// A float that serializes as a JSON number with 17 significant digits.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct F17(pub f64);

impl From<f64> for F17 {
    fn from(v: f64) -> Self {
        F17(v)
    }
}

impl Serialize for F17 {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            // `{:.16e}` keeps 17 significant digits, enough to round-trip
            // any finite f64 exactly, and is always valid JSON number syntax.
            serde_json::Number::from_string_unchecked(format!("{:.16e}", self.0))
                .serialize(serializer)
        } else {
            serializer.serialize_f64(self.0)
        }
    }
}

pub fn f17s(values: &[f64]) -> Vec<F17> {
    values.iter().map(|v| F17(*v)).collect()
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub const TOOL_NAME: &str = "einfib";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, Serialize)]
pub struct ReportMeta {
    pub tool: &'static str,
    pub version: &'static str,
    pub tolerance: F17,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_sha256: Option<String>,
}

impl ReportMeta {
    pub fn new(tolerance: f64, input: Option<&[u8]>) -> Self {
        ReportMeta {
            tool: TOOL_NAME,
            version: TOOL_VERSION,
            tolerance: F17(tolerance),
            input_sha256: input.map(sha256_hex),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstantsReport {
    pub gamma: Vec<F17>,
    pub c_l_p: Vec<F17>,
    pub b_n: Vec<F17>,
    pub c_k_n: Vec<F17>,
    pub c_l_n: Vec<F17>,
    pub c_n_on_p: Vec<Vec<F17>>,
    pub max_scalar_deviation: F17,
}

impl ConstantsReport {
    pub fn from_setup(setup: &Setup) -> Self {
        let c = &setup.constants;
        ConstantsReport {
            gamma: f17s(&c.gamma),
            c_l_p: f17s(&c.c_l_p),
            b_n: f17s(&c.b_n),
            c_k_n: f17s(&c.c_k_n),
            c_l_n: f17s(&c.c_l_n),
            c_n_on_p: c.c_n_on_p.iter().map(|row| f17s(row)).collect(),
            max_scalar_deviation: F17(c.max_dev),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InvariantsReport {
    pub jacobi: F17,
    pub killing_ad_invariance: F17,
    pub full_casimir_identity: F17,
    pub casimir_partition: F17,
    pub casimir_k_additivity: F17,
    pub q_symmetry: F17,
    pub q_casimir_contraction: F17,
    pub gamma_sum_rule: F17,
    pub r_sum_rule: F17,
    pub casimir_chain_rule: F17,
    pub trace_p_vanishing: F17,
    pub scalar_deviation: F17,
    pub max: F17,
}

impl From<&InvariantResiduals> for InvariantsReport {
    fn from(r: &InvariantResiduals) -> Self {
        InvariantsReport {
            jacobi: F17(r.jacobi),
            killing_ad_invariance: F17(r.killing_ad_invariance),
            full_casimir_identity: F17(r.full_casimir_identity),
            casimir_partition: F17(r.casimir_partition),
            casimir_k_additivity: F17(r.casimir_k_additivity),
            q_symmetry: F17(r.q_symmetry),
            q_casimir_contraction: F17(r.q_casimir_contraction),
            gamma_sum_rule: F17(r.gamma_sum_rule),
            r_sum_rule: F17(r.r_sum_rule),
            casimir_chain_rule: F17(r.casimir_chain_rule),
            trace_p_vanishing: F17(r.trace_p_vanishing),
            scalar_deviation: F17(r.scalar_deviation),
            max: F17(r.max()),
        }
    }
}

fn certainty_name(c: Certainty) -> &'static str {
    match c {
        Certainty::Certified => "certified",
        Certainty::BestEffort => "best-effort",
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionsReport {
    pub fiber_holds: bool,
    pub fiber_certainty: &'static str,
    pub fiber_null_dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fiber_witness: Option<Vec<F17>>,
    pub fiber_detail: String,
    pub base_holds: bool,
    pub base_null_dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base_witness: Option<Vec<F17>>,
    pub base_detail: String,
}

impl ConditionsReport {
    pub fn new(fiber: &FiberCondition, base: &BaseCondition) -> Self {
        ConditionsReport {
            fiber_holds: fiber.holds,
            fiber_certainty: certainty_name(fiber.certainty),
            fiber_null_dim: fiber.null_dim,
            fiber_witness: fiber.witness_lambda.as_deref().map(f17s),
            fiber_detail: fiber.detail.clone(),
            base_holds: base.holds,
            base_null_dim: base.null_dim,
            base_witness: base.witness_nu.as_deref().map(f17s),
            base_detail: base.detail.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SolutionReport {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<F17>,
    pub metric: Vec<F17>,
    pub einstein_constant: F17,
    pub defect: F17,
    pub scaled_defect: F17,
    pub scaled_einstein_constant: F17,
    pub certainty: &'static str,
}

impl SolutionReport {
    pub fn from_verified(
        kind: &str,
        x: Option<f64>,
        vm: &VerifiedMetric,
        certainty: Certainty,
    ) -> Self {
        SolutionReport {
            kind: kind.to_string(),
            x: x.map(F17),
            metric: f17s(&vm.metric.nu),
            einstein_constant: F17(vm.einstein_constant),
            defect: F17(vm.defect),
            scaled_defect: F17(vm.scaled_defect),
            scaled_einstein_constant: F17(vm.scaled_einstein_constant),
            certainty: certainty_name(certainty),
        }
    }
}

// ---------------------------------------------------------------------------
// Text rendering
// ---------------------------------------------------------------------------

/// A rectangular table that renders to CSV or a markdown pipe table. All
/// text output flows through this so the two formats cannot drift apart.
#[derive(Clone, Debug, Default)]
pub struct TextTable {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl TextTable {
    pub fn new<S: Into<String>>(headers: Vec<S>) -> Self {
        TextTable {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row<S: Into<String>>(&mut self, row: Vec<S>) {
        let row: Vec<String> = row.into_iter().map(Into::into).collect();
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let escape = |s: &str| {
            if s.contains(',') || s.contains('"') || s.contains('\n') {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s.to_string()
            }
        };
        let mut out = String::new();
        out.push_str(
            &self
                .headers
                .iter()
                .map(|h| escape(h))
                .collect::<Vec<_>>()
                .join(","),
        );
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.iter().map(|c| escape(c)).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.len()).collect();
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                widths[i] = widths[i].max(cell.len());
            }
        }
        let render_row = |cells: &[String]| {
            let padded: Vec<String> = cells
                .iter()
                .enumerate()
                .map(|(i, c)| format!("{:width$}", c, width = widths[i]))
                .collect();
            format!("| {} |", padded.join(" | "))
        };
        let mut out = render_row(&self.headers);
        out.push('\n');
        let dashes: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
        out.push_str(&format!("| {} |", dashes.join(" | ")));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&render_row(row));
            out.push('\n');
        }
        out
    }
}

/// Fixed-notation float for text tables: enough digits to compare against
/// the working tolerances without the full 17-digit JSON form.
pub fn fmt_f(v: f64) -> String {
    format!("{v:.12}")
}

/// Scientific-notation float for residual columns.
pub fn fmt_e(v: f64) -> String {
    format!("{v:.3e}")
}
