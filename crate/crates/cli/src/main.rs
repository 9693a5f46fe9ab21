//! `einfib`: invariant Ricci curvature and Einstein metrics on homogeneous
//! fibrations G/L -> G/K, from the command line.
//!
//! Subcommands: `analyze`, `solve`, `ricci`, `kowalski`, `circle-bundle`,
//! `table1`. Reports go to stdout (or `--output`) as JSON by default; `csv`
//! and `markdown` render the tabular core of each report. Exit codes: 0 on
//! success, 2 when the input does not describe a valid setup, 3 when a
//! well-formed computation misses its numerical tolerance.

mod commands;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use einfib_core::tol::Tolerance;
use einfib_core::{EinfibError, Result};

#[derive(Parser)]
#[command(
    name = "einfib",
    version,
    about = "Invariant Einstein metrics on homogeneous fibrations of compact semisimple Lie groups"
)]
pub struct Cli {
    /// Output format for the report.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,

    /// Write the report to a file instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub output: Option<PathBuf>,

    /// Working tolerance for rank, containment, and scalarity decisions.
    /// Precedence: this flag, then the EINFIB_TOLERANCE environment
    /// variable, then 1e-9.
    #[arg(long, global = true, value_name = "EPS")]
    pub tolerance: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Canonical report; floats carry 17 significant digits.
    Json,
    /// The report's main table as comma-separated values.
    Csv,
    /// The report's main table as a markdown pipe table.
    Markdown,
}

#[derive(Subcommand)]
pub enum Command {
    /// Validate a fibration, decompose it, and report structure constants,
    /// invariant residuals, and the necessary Einstein conditions.
    Analyze(FibrationArgs),
    /// Solve the Einstein equations: binormal metrics exactly, adapted
    /// metrics by deterministic multistart search.
    Solve(SolveArgs),
    /// Evaluate the Ricci tensor of one invariant metric and print the
    /// per-block coefficient table.
    Ricci(RicciArgs),
    /// The n-fold product chain g0^n / delta with a two-block diagonal:
    /// binormal ratios and the closed-form adapted solutions.
    Kowalski(KowalskiArgs),
    /// A circle bundle over an irreducible Hermitian symmetric base:
    /// closed-form ratio against the generic solver.
    CircleBundle(CircleBundleArgs),
    /// The summary table of circle-bundle ratios (m + 2) / (2 m), one row
    /// per family; --verify recomputes the constructible rows.
    Table1(Table1Args),
}

/// Where a fibration comes from: a JSON description or the built-in catalog.
#[derive(Args)]
pub struct FibrationArgs {
    /// JSON fibration description; '-' reads stdin.
    #[arg(long, value_name = "FILE", conflicts_with = "catalog")]
    pub input: Option<PathBuf>,

    /// A built-in fibration, by its catalog name.
    #[arg(long, value_name = "NAME")]
    pub catalog: Option<String>,
}

#[derive(Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub fibration: FibrationArgs,

    /// Skip the adapted multistart search and solve only binormal metrics.
    #[arg(long)]
    pub skip_adapted: bool,

    /// Number of multistart seeds for the adapted search.
    #[arg(long, value_name = "N")]
    pub starts: Option<usize>,

    /// RNG seed for the adapted search (fixed default keeps runs
    /// byte-identical).
    #[arg(long, value_name = "SEED")]
    pub seed: Option<u64>,
}

#[derive(Args)]
pub struct RicciArgs {
    #[command(flatten)]
    pub fibration: FibrationArgs,

    /// Metric coefficients, one per summand: fiber blocks first, then base
    /// blocks (e.g. --metric 1,0.75).
    #[arg(long, value_name = "NU", value_delimiter = ',', required = true)]
    pub metric: Vec<f64>,

    /// Which Ricci computation to run; `all` runs the three independent
    /// routes and reports their maximum disagreement.
    #[arg(long, value_enum, default_value = "all")]
    pub route: Route,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Route {
    /// Connection-operator curvature sum.
    Connection,
    /// Trace-form route.
    Trace,
    /// Bracket-form (Q-form) route.
    Form,
    /// All three, cross-checked.
    All,
}

#[derive(Args)]
pub struct KowalskiArgs {
    /// The simple factor, by classical name (e.g. su2, so3).
    #[arg(long, default_value = "su2")]
    pub g0: String,

    /// Number of copies of g0.
    #[arg(long)]
    pub n: usize,

    /// First block size of the (p, q) split, q = n - p, 2 <= p <= q.
    #[arg(long)]
    pub p: usize,

    /// Skip the adapted multistart search; keep binormal ratios and the
    /// closed-form solutions.
    #[arg(long)]
    pub skip_adapted: bool,
}

#[derive(Args)]
pub struct CircleBundleArgs {
    /// Which circle-bundle family to build.
    #[arg(long, value_enum)]
    pub family: Family,

    /// Family parameter: su(n), so(n), sp(n); for so-even, the n of
    /// so(2n)/u(n).
    #[arg(long)]
    pub n: usize,

    /// Split parameter for the su family: su(n)/s(u(p)+u(q)).
    #[arg(long)]
    pub p: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// su(n)/s(u(p)+u(q)) over the complex Grassmannian.
    Su,
    /// so(n)/(so(2)+so(n-2)) over the real quadric.
    So,
    /// so(2n)/u(n).
    SoEven,
    /// sp(n)/u(n).
    Sp,
}

#[derive(Args)]
pub struct Table1Args {
    /// Build each constructible row and solve it, reporting the solver's
    /// ratio and its deviation from the closed form.
    #[arg(long)]
    pub verify: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("einfib: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// The published exit-code contract: 2 for anything wrong with the input or
/// environment, 3 for a numerical failure on well-formed input.
fn exit_code(e: &EinfibError) -> u8 {
    match e {
        EinfibError::Numerical(_) => 3,
        EinfibError::Validation(_) | EinfibError::Io(_) | EinfibError::Json(_) => 2,
    }
}

fn run(cli: Cli) -> Result<()> {
    let tol = Tolerance::new(resolve_tolerance(cli.tolerance)?);
    let rendered = match &cli.command {
        Command::Analyze(args) => commands::analyze(args, tol)?,
        Command::Solve(args) => commands::solve(args, tol)?,
        Command::Ricci(args) => commands::ricci(args, tol)?,
        Command::Kowalski(args) => commands::kowalski(args, tol)?,
        Command::CircleBundle(args) => commands::circle_bundle(args, tol)?,
        Command::Table1(args) => commands::table1(args, tol)?,
    };
    let text = match cli.format {
        Format::Json => {
            let mut s = rendered.json;
            s.push('\n');
            s
        }
        Format::Csv => rendered.table.to_csv(),
        Format::Markdown => rendered.table.to_markdown(),
    };
    write_report(&text, cli.output.as_deref())
}

/// Flag, then EINFIB_TOLERANCE, then 1e-9; the value must be a positive
/// number small enough to mean anything.
fn resolve_tolerance(flag: Option<f64>) -> Result<f64> {
    let eps = match flag {
        Some(v) => v,
        None => match std::env::var("EINFIB_TOLERANCE") {
            Ok(raw) => raw.trim().parse::<f64>().map_err(|_| {
                EinfibError::validation(format!(
                    "EINFIB_TOLERANCE is set to '{raw}', which is not a number"
                ))
            })?,
            Err(_) => return Ok(Tolerance::default().eps),
        },
    };
    if !eps.is_finite() || eps <= 0.0 || eps >= 0.1 {
        return Err(EinfibError::validation(format!(
            "tolerance must be a positive number below 0.1, got {eps}"
        )));
    }
    Ok(eps)
}

fn write_report(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_follow_the_contract() {
        assert_eq!(exit_code(&EinfibError::validation("bad input")), 2);
        assert_eq!(exit_code(&EinfibError::numerical("no convergence")), 3);
        let io = EinfibError::Io(std::io::Error::other("gone"));
        assert_eq!(exit_code(&io), 2);
    }

    #[test]
    fn tolerance_rejects_nonsense_values() {
        for bad in [0.0, -1e-9, 0.5, f64::NAN, f64::INFINITY] {
            assert!(resolve_tolerance(Some(bad)).is_err(), "{bad}");
        }
        assert_eq!(resolve_tolerance(Some(1e-7)).unwrap(), 1e-7);
    }
}
