//! The six subcommand implementations. Each returns a [`Rendered`] pair:
//! the canonical JSON report and the table that csv/markdown output renders.

use std::io::Read;

use serde::Serialize;

use einfib_core::catalog::kowalski::{
    adapted_closed_form, expected_binormal_xs, kowalski_fibration,
};
use einfib_core::catalog::table::representative_rows;
use einfib_core::catalog::{bundles, catalog_fibrations, CatalogFibration};
use einfib_core::fibration::{invariant_residuals, Setup};
use einfib_core::input::fibration_from_json;
use einfib_core::linalg::max_abs;
use einfib_core::report::{
    f17s, fmt_e, fmt_f, ConditionsReport, ConstantsReport, InvariantsReport, ReportMeta,
    SolutionReport, TextTable, F17,
};
use einfib_core::ricci::{
    adapted_ricci, einstein_quality, ricci_connection, ricci_q_forms, ricci_trace_form,
    MetricSpec,
};
use einfib_core::solver::{
    binormal_alpha_family, circle_bundle_x, necessary_conditions, solve_adapted,
    solve_binormal, verify_einstein, AdaptedOptions, AdaptedReport, BinormalReport, Certainty,
};
use einfib_core::tol::Tolerance;
use einfib_core::{EinfibError, Result};

use crate::{
    CircleBundleArgs, Family, FibrationArgs, KowalskiArgs, RicciArgs, Route, SolveArgs,
    Table1Args,
};

/// A finished report in both output shapes.
pub struct Rendered {
    pub json: String,
    pub table: TextTable,
}

fn rendered<T: Serialize>(report: &T, table: TextTable) -> Result<Rendered> {
    Ok(Rendered {
        json: serde_json::to_string_pretty(report)?,
        table,
    })
}

fn certainty_str(c: Certainty) -> &'static str {
    match c {
        Certainty::Certified => "certified",
        Certainty::BestEffort => "best-effort",
    }
}

// ---------------------------------------------------------------------------
// Fibration sources
// ---------------------------------------------------------------------------

struct Loaded {
    setup: Setup,
    /// Raw bytes of the JSON input, for provenance hashing; `None` when the
    /// fibration came from the catalog.
    input_bytes: Option<Vec<u8>>,
}

fn load_fibration(args: &FibrationArgs, tol: Tolerance) -> Result<Loaded> {
    match (&args.input, &args.catalog) {
        (Some(path), None) => {
            let bytes = if path.as_os_str() == "-" {
                let mut buf = Vec::new();
                std::io::stdin().lock().read_to_end(&mut buf)?;
                buf
            } else {
                std::fs::read(path)?
            };
            let text = std::str::from_utf8(&bytes)
                .map_err(|_| EinfibError::validation("input file is not valid UTF-8"))?;
            let fib = fibration_from_json(text)?;
            let setup = fib.analyze(tol, None)?;
            Ok(Loaded {
                setup,
                input_bytes: Some(bytes),
            })
        }
        (None, Some(name)) => Ok(Loaded {
            setup: catalog_setup(name, tol)?,
            input_bytes: None,
        }),
        _ => Err(EinfibError::validation(
            "provide a fibration with --input FILE or --catalog NAME",
        )),
    }
}

fn catalog_setup(name: &str, tol: Tolerance) -> Result<Setup> {
    let all = catalog_fibrations()?;
    match all.into_iter().find(|cf| cf.name == name) {
        Some(cf) => analyze_catalog(cf, tol),
        None => {
            let names: Vec<String> = catalog_fibrations()?
                .iter()
                .map(|cf| cf.name.clone())
                .collect();
            Err(EinfibError::validation(format!(
                "no catalog fibration named '{name}'; available: {}",
                names.join(", ")
            )))
        }
    }
}

fn analyze_catalog(cf: CatalogFibration, tol: Tolerance) -> Result<Setup> {
    let prescribed = cf.prescribed();
    cf.fibration.analyze(tol, prescribed)
}

// ---------------------------------------------------------------------------
// Shared report sections
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct BinormalSection {
    candidates: Vec<F17>,
    xs: Vec<F17>,
    certified_complete: bool,
    detail: String,
    solutions: Vec<SolutionReport>,
}

impl BinormalSection {
    fn new(rep: &BinormalReport) -> Self {
        let solutions = rep
            .xs
            .iter()
            .zip(&rep.solutions)
            .map(|(x, vm)| {
                SolutionReport::from_verified("binormal", Some(*x), vm, Certainty::Certified)
            })
            .collect();
        BinormalSection {
            candidates: f17s(&rep.candidates),
            xs: f17s(&rep.xs),
            certified_complete: rep.certified_complete,
            detail: rep.detail.clone(),
            solutions,
        }
    }
}

#[derive(Serialize)]
struct AdaptedSection {
    attempts: usize,
    converged: usize,
    certainty: &'static str,
    solutions: Vec<SolutionReport>,
}

impl AdaptedSection {
    fn new(rep: &AdaptedReport) -> Self {
        AdaptedSection {
            attempts: rep.attempts,
            converged: rep.converged,
            certainty: certainty_str(rep.certainty),
            solutions: rep
                .solutions
                .iter()
                .map(|vm| SolutionReport::from_verified("adapted", None, vm, rep.certainty))
                .collect(),
        }
    }
}

#[derive(Serialize)]
struct CircleSection {
    x: F17,
    consistency: F17,
    b: F17,
    c_k: F17,
    symmetric_base_form: bool,
}

fn circle_section(setup: &Setup) -> Option<CircleSection> {
    circle_bundle_x(setup).map(|c| CircleSection {
        x: F17(c.x),
        consistency: F17(c.consistency),
        b: F17(c.b),
        c_k: F17(c.c_k),
        symmetric_base_form: c.symmetric_base_form,
    })
}

#[derive(Serialize)]
struct AlphaSection {
    alpha: F17,
    alpha_dev: F17,
    x: F17,
    base_condition_residual: F17,
    casimir_scalar_dev: F17,
    #[serde(skip_serializing_if = "Option::is_none")]
    inverse_x_rational: Option<(i64, i64)>,
}

fn alpha_section(setup: &Setup) -> Option<AlphaSection> {
    binormal_alpha_family(setup).map(|a| AlphaSection {
        alpha: F17(a.alpha),
        alpha_dev: F17(a.alpha_dev),
        x: F17(a.x),
        base_condition_residual: F17(a.base_condition_residual),
        casimir_scalar_dev: F17(a.casimir_scalar_dev),
        inverse_x_rational: a.inverse_x_rational,
    })
}

fn solutions_table() -> TextTable {
    TextTable::new(vec![
        "kind",
        "x",
        "metric",
        "einstein_constant",
        "defect",
        "certainty",
    ])
}

fn push_solution_rows(table: &mut TextTable, solutions: &[SolutionReport]) {
    for sol in solutions {
        table.push_row(vec![
            sol.kind.clone(),
            sol.x.map(|x| fmt_f(x.0)).unwrap_or_default(),
            sol.metric
                .iter()
                .map(|v| fmt_f(v.0))
                .collect::<Vec<_>>()
                .join(", "),
            fmt_f(sol.einstein_constant.0),
            fmt_e(sol.defect.0),
            sol.certainty.to_string(),
        ]);
    }
}

fn join_usize(values: &[usize]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct AnalyzeReport {
    meta: ReportMeta,
    name: String,
    algebra_dim: usize,
    k_dim: usize,
    l_dim: usize,
    fiber_dim: usize,
    base_dim: usize,
    fiber_blocks: usize,
    base_blocks: usize,
    fiber_block_dims: Vec<usize>,
    base_block_dims: Vec<usize>,
    relaxed_decomposition: bool,
    scalar_hypothesis_ok: bool,
    constants: ConstantsReport,
    invariants: InvariantsReport,
    conditions: ConditionsReport,
}

pub fn analyze(args: &FibrationArgs, tol: Tolerance) -> Result<Rendered> {
    let loaded = load_fibration(args, tol)?;
    let setup = &loaded.setup;
    let residuals = invariant_residuals(setup)?;
    let nc = necessary_conditions(setup)?;

    let algebra_dim = setup.fib.algebra.dim();
    let k_dim = setup.fib.k.dim();
    let l_dim = setup.fib.l.dim();
    let report = AnalyzeReport {
        meta: ReportMeta::new(tol.eps, loaded.input_bytes.as_deref()),
        name: setup.fib.name.clone(),
        algebra_dim,
        k_dim,
        l_dim,
        fiber_dim: k_dim - l_dim,
        base_dim: algebra_dim - k_dim,
        fiber_blocks: setup.s,
        base_blocks: setup.r,
        fiber_block_dims: (0..setup.s).map(|a| setup.block_dim(a)).collect(),
        base_block_dims: (0..setup.r).map(|j| setup.block_dim(setup.s + j)).collect(),
        relaxed_decomposition: setup.relaxed,
        scalar_hypothesis_ok: setup.hypothesis_ok,
        constants: ConstantsReport::from_setup(setup),
        invariants: InvariantsReport::from(&residuals),
        conditions: ConditionsReport::new(&nc.fiber, &nc.base),
    };

    let mut table = TextTable::new(vec!["property", "value"]);
    table.push_row(vec!["name".to_string(), report.name.clone()]);
    table.push_row(vec!["algebra_dim".to_string(), algebra_dim.to_string()]);
    table.push_row(vec!["k_dim".to_string(), k_dim.to_string()]);
    table.push_row(vec!["l_dim".to_string(), l_dim.to_string()]);
    table.push_row(vec!["fiber_dim".to_string(), report.fiber_dim.to_string()]);
    table.push_row(vec!["base_dim".to_string(), report.base_dim.to_string()]);
    table.push_row(vec![
        "fiber_block_dims".to_string(),
        join_usize(&report.fiber_block_dims),
    ]);
    table.push_row(vec![
        "base_block_dims".to_string(),
        join_usize(&report.base_block_dims),
    ]);
    table.push_row(vec![
        "relaxed_decomposition".to_string(),
        report.relaxed_decomposition.to_string(),
    ]);
    table.push_row(vec![
        "scalar_hypothesis_ok".to_string(),
        report.scalar_hypothesis_ok.to_string(),
    ]);
    table.push_row(vec![
        "max_invariant_residual".to_string(),
        fmt_e(residuals.max()),
    ]);
    table.push_row(vec![
        "fiber_condition".to_string(),
        format!(
            "holds={} ({}, null_dim={})",
            nc.fiber.holds,
            certainty_str(nc.fiber.certainty),
            nc.fiber.null_dim
        ),
    ]);
    table.push_row(vec![
        "base_condition".to_string(),
        format!("holds={} (null_dim={})", nc.base.holds, nc.base.null_dim),
    ]);
    table.push_row(vec!["tolerance".to_string(), fmt_e(tol.eps)]);
    rendered(&report, table)
}

// ---------------------------------------------------------------------------
// solve
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct SolveReport {
    meta: ReportMeta,
    name: String,
    conditions: ConditionsReport,
    binormal: BinormalSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    adapted: Option<AdaptedSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    circle: Option<CircleSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha_family: Option<AlphaSection>,
}

pub fn solve(args: &SolveArgs, tol: Tolerance) -> Result<Rendered> {
    let loaded = load_fibration(&args.fibration, tol)?;
    let setup = &loaded.setup;
    let nc = necessary_conditions(setup)?;
    let bin = solve_binormal(setup)?;
    let adapted = if args.skip_adapted {
        None
    } else {
        let mut opts = AdaptedOptions::default();
        if let Some(starts) = args.starts {
            opts.starts = starts;
        }
        if let Some(seed) = args.seed {
            opts.seed = seed;
        }
        Some(solve_adapted(setup, &opts)?)
    };

    let report = SolveReport {
        meta: ReportMeta::new(tol.eps, loaded.input_bytes.as_deref()),
        name: setup.fib.name.clone(),
        conditions: ConditionsReport::new(&nc.fiber, &nc.base),
        binormal: BinormalSection::new(&bin),
        adapted: adapted.as_ref().map(AdaptedSection::new),
        circle: circle_section(setup),
        alpha_family: alpha_section(setup),
    };

    let mut table = solutions_table();
    push_solution_rows(&mut table, &report.binormal.solutions);
    if let Some(sec) = &report.adapted {
        push_solution_rows(&mut table, &sec.solutions);
    }
    rendered(&report, table)
}

// ---------------------------------------------------------------------------
// ricci
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct BlockRow {
    block: String,
    dim: usize,
    metric: F17,
    ricci: F17,
    formula: F17,
    ratio: F17,
}

#[derive(Serialize)]
struct RicciReport {
    meta: ReportMeta,
    name: String,
    route: &'static str,
    metric: Vec<F17>,
    blocks: Vec<BlockRow>,
    einstein_constant: F17,
    defect: F17,
    in_block_scalar_dev: F17,
    off_block_max: F17,
    #[serde(skip_serializing_if = "Option::is_none")]
    route_max_deviation: Option<F17>,
}

pub fn ricci(args: &RicciArgs, tol: Tolerance) -> Result<Rendered> {
    let loaded = load_fibration(&args.fibration, tol)?;
    let setup = &loaded.setup;
    let metric = MetricSpec::new(args.metric.clone());
    metric.validate(setup)?;

    let (route_name, ric, route_max_deviation) = match args.route {
        Route::Connection => ("connection", ricci_connection(setup, &metric)?, None),
        Route::Trace => ("trace", ricci_trace_form(setup, &metric)?, None),
        Route::Form => ("form", ricci_q_forms(setup, &metric)?, None),
        Route::All => {
            let a = ricci_connection(setup, &metric)?;
            let b = ricci_trace_form(setup, &metric)?;
            let c = ricci_q_forms(setup, &metric)?;
            let dev = max_abs(&(&a - &b))
                .max(max_abs(&(&a - &c)))
                .max(max_abs(&(&b - &c)));
            ("all", a, Some(F17(dev)))
        }
    };

    // Independent cross-check column: the closed-form blockwise Ricci.
    let formula_ric = adapted_ricci(setup, &metric)?;

    let mut blocks = Vec::with_capacity(setup.blocks());
    let mut in_block_dev = 0.0f64;
    let mut table = TextTable::new(vec!["block", "dim", "metric", "ricci", "formula", "ratio"]);
    for idx in 0..setup.blocks() {
        let rg = setup.ranges[idx].clone();
        let dim = rg.len();
        let mean: f64 = rg.clone().map(|x| ric[(x, x)]).sum::<f64>() / dim as f64;
        for x in rg.clone() {
            for y in rg.clone() {
                let expected = if x == y { mean } else { 0.0 };
                in_block_dev = in_block_dev.max((ric[(x, y)] - expected).abs());
            }
        }
        let label = if idx < setup.s {
            format!("p_{}", idx + 1)
        } else {
            format!("n_{}", idx + 1 - setup.s)
        };
        let formula = rg.clone().map(|x| formula_ric[(x, x)]).sum::<f64>() / dim as f64;
        let ratio = mean / metric.nu[idx];
        table.push_row(vec![
            label.clone(),
            dim.to_string(),
            fmt_f(metric.nu[idx]),
            fmt_f(mean),
            fmt_f(formula),
            fmt_f(ratio),
        ]);
        blocks.push(BlockRow {
            block: label,
            dim,
            metric: F17(metric.nu[idx]),
            ricci: F17(mean),
            formula: F17(formula),
            ratio: F17(ratio),
        });
    }
    let mut off_block_max = 0.0f64;
    for x in 0..setup.dim_m() {
        for y in 0..setup.dim_m() {
            if setup.block_of[x] != setup.block_of[y] {
                off_block_max = off_block_max.max(ric[(x, y)].abs());
            }
        }
    }
    let (einstein_constant, defect) = einstein_quality(setup, &metric, &ric);

    let report = RicciReport {
        meta: ReportMeta::new(tol.eps, loaded.input_bytes.as_deref()),
        name: setup.fib.name.clone(),
        route: route_name,
        metric: f17s(&metric.nu),
        blocks,
        einstein_constant: F17(einstein_constant),
        defect: F17(defect),
        in_block_scalar_dev: F17(in_block_dev),
        off_block_max: F17(off_block_max),
        route_max_deviation,
    };
    rendered(&report, table)
}

// ---------------------------------------------------------------------------
// kowalski
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ClosedFormSection {
    /// Cubic coefficients of the generating polynomial, highest degree
    /// first.
    cubic: Vec<F17>,
    /// Open interval containing exactly one root.
    interval: [F17; 2],
    x1: F17,
    x2: F17,
    cubic_residual: F17,
    standard_metric: Vec<F17>,
    standard_defect: F17,
    nonstandard_metric: Vec<F17>,
    nonstandard_defect: F17,
}

#[derive(Serialize)]
struct KowalskiReport {
    meta: ReportMeta,
    name: String,
    g0: String,
    n: usize,
    p: usize,
    q: usize,
    expected_binormal_xs: Vec<F17>,
    binormal: BinormalSection,
    closed_form: ClosedFormSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    adapted: Option<AdaptedSection>,
}

pub fn kowalski(args: &KowalskiArgs, tol: Tolerance) -> Result<Rendered> {
    let cf = kowalski_fibration(&args.g0, args.n, args.p)?;
    let name = cf.name.clone();
    let setup = analyze_catalog(cf, tol)?;
    let q = args.n - args.p;

    let expected = expected_binormal_xs(args.n, args.p)?;
    let bin = solve_binormal(&setup)?;
    let closed = adapted_closed_form(args.n, args.p)?;
    let standard_check = verify_einstein(&setup, &closed.standard)?;
    let nonstandard_check = verify_einstein(&setup, &closed.nonstandard)?;
    let adapted = if args.skip_adapted {
        None
    } else {
        Some(solve_adapted(&setup, &AdaptedOptions::default())?)
    };

    let report = KowalskiReport {
        meta: ReportMeta::new(tol.eps, None),
        name,
        g0: args.g0.clone(),
        n: args.n,
        p: args.p,
        q,
        expected_binormal_xs: f17s(&expected),
        binormal: BinormalSection::new(&bin),
        closed_form: ClosedFormSection {
            cubic: f17s(&closed.cubic),
            interval: [F17(closed.interval.0), F17(closed.interval.1)],
            x1: F17(closed.x1),
            x2: F17(closed.x2),
            cubic_residual: F17(closed.cubic_residual),
            standard_metric: f17s(&closed.standard.nu),
            standard_defect: F17(standard_check.defect),
            nonstandard_metric: f17s(&closed.nonstandard.nu),
            nonstandard_defect: F17(nonstandard_check.defect),
        },
        adapted: adapted.as_ref().map(AdaptedSection::new),
    };

    let mut table = solutions_table();
    push_solution_rows(&mut table, &report.binormal.solutions);
    push_solution_rows(
        &mut table,
        &[
            SolutionReport::from_verified(
                "closed-form standard",
                None,
                &standard_check,
                Certainty::Certified,
            ),
            SolutionReport::from_verified(
                "closed-form nonstandard",
                Some(closed.x1),
                &nonstandard_check,
                Certainty::Certified,
            ),
        ],
    );
    if let Some(sec) = &report.adapted {
        push_solution_rows(&mut table, &sec.solutions);
    }
    rendered(&report, table)
}

// ---------------------------------------------------------------------------
// circle-bundle
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct CircleBundleReport {
    meta: ReportMeta,
    name: String,
    family: &'static str,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    p: Option<usize>,
    base_dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    x_exact: Option<[i64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    x_closed_form: Option<F17>,
    #[serde(skip_serializing_if = "Option::is_none")]
    solver_deviation: Option<F17>,
    #[serde(skip_serializing_if = "Option::is_none")]
    circle: Option<CircleSection>,
    binormal: BinormalSection,
}

pub fn circle_bundle(args: &CircleBundleArgs, tol: Tolerance) -> Result<Rendered> {
    let family = match args.family {
        Family::Su => "su",
        Family::So => "so",
        Family::SoEven => "so-even",
        Family::Sp => "sp",
    };
    if args.family != Family::Su && args.p.is_some() {
        return Err(EinfibError::validation(format!(
            "--p only applies to the su family, not {family}"
        )));
    }
    let cf = match args.family {
        Family::Su => {
            let p = args.p.ok_or_else(|| {
                EinfibError::validation(
                    "the su family needs --p for the split su(n)/s(u(p)+u(q))",
                )
            })?;
            bundles::circle_bundle_su(args.n, p)?
        }
        Family::So => bundles::circle_bundle_so(args.n)?,
        Family::SoEven => bundles::circle_bundle_so_even(args.n)?,
        Family::Sp => bundles::circle_bundle_sp(args.n)?,
    };
    let name = cf.name.clone();
    let x_exact = cf.closed_form_x_exact.map(|(num, den)| [num, den]);
    let closed_x = cf.closed_form_x;
    let setup = analyze_catalog(cf, tol)?;
    let base_dim = setup.fib.algebra.dim() - setup.fib.k.dim();

    let bin = solve_binormal(&setup)?;
    let circle = circle_section(&setup);
    let solver_deviation = closed_x.and_then(|cx| {
        bin.xs
            .iter()
            .map(|x| (x - cx).abs())
            .min_by(|a, b| a.partial_cmp(b).expect("finite deviations"))
    });

    let report = CircleBundleReport {
        meta: ReportMeta::new(tol.eps, None),
        name: name.clone(),
        family,
        n: args.n,
        p: args.p,
        base_dim,
        x_exact,
        x_closed_form: closed_x.map(F17),
        solver_deviation: solver_deviation.map(F17),
        circle,
        binormal: BinormalSection::new(&bin),
    };

    let mut table = TextTable::new(vec!["property", "value"]);
    table.push_row(vec!["name".to_string(), name]);
    table.push_row(vec!["family".to_string(), family.to_string()]);
    table.push_row(vec!["base_dim".to_string(), base_dim.to_string()]);
    if let Some([num, den]) = x_exact {
        table.push_row(vec!["x_exact".to_string(), format!("{num}/{den}")]);
    }
    if let Some(cx) = closed_x {
        table.push_row(vec!["x_closed_form".to_string(), fmt_f(cx)]);
    }
    table.push_row(vec![
        "solver_xs".to_string(),
        report
            .binormal
            .xs
            .iter()
            .map(|x| fmt_f(x.0))
            .collect::<Vec<_>>()
            .join(", "),
    ]);
    if let Some(dev) = solver_deviation {
        table.push_row(vec!["solver_deviation".to_string(), fmt_e(dev)]);
    }
    if let Some(c) = &report.circle {
        table.push_row(vec![
            "symmetric_base_form".to_string(),
            c.symmetric_base_form.to_string(),
        ]);
        table.push_row(vec!["circle_consistency".to_string(), fmt_e(c.consistency.0)]);
    }
    for sol in &report.binormal.solutions {
        table.push_row(vec!["solution_defect".to_string(), fmt_e(sol.defect.0)]);
    }
    rendered(&report, table)
}

// ---------------------------------------------------------------------------
// table1
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct VerifiedRow {
    solver_x: F17,
    deviation: F17,
    defect: F17,
}

#[derive(Serialize)]
struct Table1Row {
    name: String,
    base_dim: usize,
    x_num: i64,
    x_den: i64,
    x: F17,
    constructible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    verification: Option<VerifiedRow>,
}

#[derive(Serialize)]
struct Table1Report {
    meta: ReportMeta,
    rows: Vec<Table1Row>,
}

pub fn table1(args: &Table1Args, tol: Tolerance) -> Result<Rendered> {
    let mut table = if args.verify {
        TextTable::new(vec!["space", "base_dim", "x_exact", "x", "solver_x", "deviation"])
    } else {
        TextTable::new(vec!["space", "base_dim", "x_exact", "x"])
    };
    let mut rows = Vec::new();
    for row in representative_rows() {
        let verification = match (args.verify, row.builder) {
            (true, Some(builder)) => {
                let setup = analyze_catalog(builder.build()?, tol)?;
                let bin = solve_binormal(&setup)?;
                let best = bin
                    .xs
                    .iter()
                    .enumerate()
                    .min_by(|(_, a), (_, b)| {
                        (*a - row.x)
                            .abs()
                            .partial_cmp(&(*b - row.x).abs())
                            .expect("finite ratios")
                    })
                    .map(|(i, x)| (i, *x));
                let Some((idx, x)) = best else {
                    return Err(EinfibError::numerical(format!(
                        "no binormal Einstein metric found for {}",
                        row.name
                    )));
                };
                Some(VerifiedRow {
                    solver_x: F17(x),
                    deviation: F17((x - row.x).abs()),
                    defect: F17(bin.solutions[idx].defect),
                })
            }
            _ => None,
        };

        let mut cells = vec![
            row.name.clone(),
            row.base_dim.to_string(),
            format!("{}/{}", row.x_num, row.x_den),
            fmt_f(row.x),
        ];
        if args.verify {
            match &verification {
                Some(v) => {
                    cells.push(fmt_f(v.solver_x.0));
                    cells.push(fmt_e(v.deviation.0));
                }
                None => {
                    cells.push(String::new());
                    cells.push(String::new());
                }
            }
        }
        table.push_row(cells);

        rows.push(Table1Row {
            name: row.name,
            base_dim: row.base_dim,
            x_num: row.x_num,
            x_den: row.x_den,
            x: F17(row.x),
            constructible: row.builder.is_some(),
            verification,
        });
    }
    let report = Table1Report {
        meta: ReportMeta::new(tol.eps, None),
        rows,
    };
    rendered(&report, table)
}
