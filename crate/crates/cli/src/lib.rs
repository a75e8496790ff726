//! Command-line front end for `skinning-bounds`.
//!
//! Every command writes its data payload to the supplied writer and its
//! diagnostics to a separate one, so identical flags give byte-identical
//! output. Exit codes: 0 success, 1 verification failure, 2 input error,
//! 3 I/O error.

mod args;
pub mod input;

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use skinning_bounds::constants::{constants, CheckStatus, IdentityCheck, C6_PRINTED, PRINTED};
use skinning_bounds::contraction::{contraction_constant, skinning_factor, BoundReport, SkinningReport};
use skinning_bounds::oracles::{verify_all, OracleConfig, OracleResult, OracleStatus, VerificationReport};
use skinning_bounds::surface::{make_geometry, make_topology, SurfaceGeometry};

pub use args::{Cli, Command, Format, Params};

#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    Verification(String),
    Input(String),
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Input(_) => 2,
            Failure::Io(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Verification(m) | Failure::Input(m) | Failure::Io(m) => f.write_str(m),
        }
    }
}

impl From<skinning_bounds::Error> for Failure {
    fn from(e: skinning_bounds::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

/// One CSV row per evaluated surface.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub g: u64,
    pub n: u64,
    pub abs_chi: u64,
    pub kappa: u64,
    pub ell: f64,
    pub epsilon: f64,
    pub t: f64,
    pub a1: f64,
    pub ln_a2: f64,
    /// `ln C` in the exact tower grammar.
    pub ln_c: String,
    pub loglog_ell_over_c: f64,
    pub asymptotic_rhs: f64,
    pub asymptotic_ratio: f64,
}

impl From<&BoundReport> for SweepRow {
    fn from(r: &BoundReport) -> Self {
        SweepRow {
            g: r.g,
            n: r.n,
            abs_chi: r.abs_chi,
            kappa: r.kappa,
            ell: r.ell,
            epsilon: r.epsilon,
            t: r.t_used,
            a1: r.a1,
            ln_a2: r.ln_a2,
            ln_c: r.ln_c.exact_string(),
            loglog_ell_over_c: r.loglog_ell_over_c,
            asymptotic_rhs: r.asymptotic_rhs,
            asymptotic_ratio: r.asymptotic_ratio,
        }
    }
}

/// Runs one parsed command line.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    if !cli.quiet {
        writeln!(err, "skinning-bounds {}", env!("CARGO_PKG_VERSION"))?;
    }
    let format = cli.format;
    match &cli.command {
        Command::Bound {
            genus,
            punctures,
            systole,
            params,
        } => cmd_bound(*genus, *punctures, *systole, params, format, out),
        Command::Sweep {
            genus,
            punctures,
            systole,
            params,
            output,
        } => {
            let cells = sweep_cells(genus, punctures, systole, params)?;
            let reports = evaluate_cells(&cells, params, cli.threads)?;
            match output {
                Some(path) => {
                    let file = File::create(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
                    let mut w = BufWriter::new(file);
                    write_sweep(&cells, &reports, format, &mut w, err)?;
                    w.flush()?;
                    Ok(())
                }
                None => write_sweep(&cells, &reports, format, out, err),
            }
        }
        Command::Constants => cmd_constants(format, out),
        Command::Verify { grid, tol } => cmd_verify(*grid, *tol, format, out),
        Command::Asymptotic {
            max_genus,
            systole,
            params,
        } => cmd_asymptotic(*max_genus, *systole, params, format, out),
        Command::Skinning { boundary, params } => cmd_skinning(boundary, params, format, out),
    }
}

fn geometry(g: u64, n: u64, l: f64, params: &Params) -> skinning_bounds::Result<SurfaceGeometry> {
    make_geometry(make_topology(g, n)?, l, params.epsilon)
}

fn write_json<T: Serialize + ?Sized>(out: &mut dyn Write, value: &T) -> Outcome {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn write_csv<T: Serialize>(out: &mut dyn Write, rows: &[T]) -> Outcome {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

fn write_report_text(out: &mut dyn Write, r: &BoundReport) -> Outcome {
    writeln!(
        out,
        "surface          (g, n) = ({}, {}), |chi| = {}, kappa = {}",
        r.g, r.n, r.abs_chi, r.kappa
    )?;
    writeln!(out, "systole          {}", r.ell)?;
    writeln!(out, "epsilon          {}", r.epsilon)?;
    writeln!(out, "t                {}", r.t_used)?;
    writeln!(out, "a1               {}", r.a1)?;
    writeln!(out, "ln a2            {}", r.ln_a2)?;
    writeln!(out, "ln C             {}", r.ln_c.render())?;
    writeln!(out, "ln C finite part {}", r.ln_c_prefactor)?;
    writeln!(out, "C                {}", r.c.render())?;
    writeln!(out, "gap              {}", r.gap.render())?;
    writeln!(out, "norm bound       {}", r.norm_bound.render())?;
    writeln!(out, "loglog(l/C)      {}", r.loglog_ell_over_c)?;
    writeln!(out, "asymptotic rhs   {}", r.asymptotic_rhs)?;
    writeln!(out, "asymptotic ratio {}", r.asymptotic_ratio)?;
    Ok(())
}

fn cmd_bound(g: u64, n: u64, l: f64, params: &Params, format: Format, out: &mut dyn Write) -> Outcome {
    let report = contraction_constant(&geometry(g, n, l, params)?, params.t)?;
    match format {
        Format::Json => write_json(out, &report),
        Format::Csv => write_csv(out, &[SweepRow::from(&report)]),
        Format::Text => write_report_text(out, &report),
    }
}

/// Cells of a sweep in lexicographic `(g, n, ℓ)` order.
fn sweep_cells(genus: &str, punctures: &str, systole: &str, params: &Params) -> Result<Vec<(u64, u64, f64)>, Failure> {
    let gs = input::parse_int_range("genus", genus).map_err(Failure::Input)?;
    let ns = input::parse_int_range("punctures", punctures).map_err(Failure::Input)?;
    let ls = input::parse_real_list("systole", systole).map_err(Failure::Input)?;
    // Systole, epsilon and t do not depend on the surface: reject them up front.
    let probe = make_topology(1, 1)?;
    for &l in &ls {
        make_geometry(probe, l, params.epsilon)?;
    }
    if !(params.t >= 1.0 && params.t.is_finite()) {
        return Err(skinning_bounds::Error::InvalidT(params.t).into());
    }
    let total = gs.len() as u128 * ns.len() as u128 * ls.len() as u128;
    if total > 10_000_000 {
        return Err(Failure::Input(format!("sweep of {total} cells is too large")));
    }
    let mut cells = Vec::with_capacity(total as usize);
    for &g in &gs {
        for &n in &ns {
            cells.extend(ls.iter().map(|&l| (g, n, l)));
        }
    }
    Ok(cells)
}

fn evaluate_cells(
    cells: &[(u64, u64, f64)],
    params: &Params,
    threads: Option<usize>,
) -> Result<Vec<skinning_bounds::Result<BoundReport>>, Failure> {
    if threads == Some(0) {
        return Err(Failure::Input("threads must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Failure::Io(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| {
        cells
            .par_iter()
            .map(|&(g, n, l)| contraction_constant(&geometry(g, n, l, params)?, params.t))
            .collect()
    }))
}

fn write_sweep(
    cells: &[(u64, u64, f64)],
    results: &[skinning_bounds::Result<BoundReport>],
    format: Format,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let mut reports = Vec::with_capacity(results.len());
    let mut skipped = 0usize;
    for (&(g, n, l), result) in cells.iter().zip(results) {
        match result {
            Ok(r) => reports.push(r),
            Err(e) => {
                skipped += 1;
                writeln!(err, "skipped (g={g}, n={n}, l={l}): {e}")?;
            }
        }
    }
    match format {
        Format::Json => write_json(out, &reports)?,
        Format::Csv => {
            let rows: Vec<SweepRow> = reports.iter().map(|r| SweepRow::from(*r)).collect();
            write_csv(out, &rows)?;
        }
        Format::Text => {
            writeln!(
                out,
                "{:>6} {:>6} {:>10} {:>14} {:>24} {:>10}  ln C",
                "g", "n", "ell", "ln a2", "loglog(l/C)", "ratio"
            )?;
            for r in &reports {
                writeln!(
                    out,
                    "{:>6} {:>6} {:>10} {:>14.6} {:>24.10} {:>10.6}  {}",
                    r.g,
                    r.n,
                    r.ell,
                    r.ln_a2,
                    r.loglog_ell_over_c,
                    r.asymptotic_ratio,
                    r.ln_c.render()
                )?;
            }
        }
    }
    writeln!(err, "sweep: {} rows generated, {skipped} cells skipped", reports.len())?;
    Ok(())
}

#[derive(Serialize)]
struct ConstantRow {
    name: &'static str,
    value: f64,
    printed: Option<f64>,
    definition: &'static str,
}

fn constant_rows() -> Vec<ConstantRow> {
    let k = constants();
    let printed = |name: &str| PRINTED.iter().find(|(n, _)| *n == name).map(|(_, v)| *v);
    let row = |name: &'static str, value: f64, definition: &'static str| ConstantRow {
        name,
        value,
        printed: printed(name),
        definition,
    };
    vec![
        row("eps0", k.eps0, "arcsinh(1)"),
        row("c1", k.c1, "coth(pi/12)"),
        row("c2", k.c2, "arcsinh(tanh(pi/12))"),
        row("c3", k.c3, "pi*sinh(c2/2)/c2"),
        row("c4", k.c4, "(1 - tanh^2(1/2))^2"),
        row("c5", k.c5, "4*pi*(1 + sinh(1))"),
        ConstantRow {
            name: "c6",
            value: k.c6_formula.to_f64(),
            printed: Some(C6_PRINTED),
            definition: "(e*c4)^exp(2*c3 + 2)",
        },
        row("c7", k.c7, "max over x > 0 of x*arcsinh(csch(x/2))"),
        row("k", k.contraction_prefactor(), "e*pi^2*c4/(288*(c5 + c7))"),
    ]
}

fn cmd_constants(format: Format, out: &mut dyn Write) -> Outcome {
    let rows = constant_rows();
    match format {
        Format::Json => write_json(out, &rows),
        Format::Csv => write_csv(out, &rows),
        Format::Text => {
            writeln!(out, "{:<6} {:>22} {:>10}  definition", "name", "value", "printed")?;
            for r in &rows {
                let printed = r.printed.map(|p| p.to_string()).unwrap_or_else(|| "-".into());
                let value = if r.value.abs() >= 1e6 {
                    format!("{:e}", r.value)
                } else {
                    r.value.to_string()
                };
                writeln!(out, "{:<6} {:>22} {:>10}  {}", r.name, value, printed, r.definition)?;
            }
            writeln!(
                out,
                "note: c6 from its formula disagrees with the printed 76.5904; see `verify`"
            )?;
            Ok(())
        }
    }
}

fn identity_status(s: CheckStatus) -> &'static str {
    match s {
        CheckStatus::Pass => "pass",
        CheckStatus::Fail => "FAIL",
        CheckStatus::Inconsistent => "inconsistent",
    }
}

fn oracle_status(s: OracleStatus) -> &'static str {
    match s {
        OracleStatus::Pass => "pass",
        OracleStatus::Fail => "FAIL",
        OracleStatus::DocumentedFailure => "documented",
    }
}

#[derive(Serialize)]
struct VerifyCsvRow<'a> {
    kind: &'static str,
    name: &'a str,
    status: &'static str,
    point: Option<f64>,
    residual: f64,
    tolerance: f64,
    samples: Option<usize>,
    detail: &'a str,
}

fn verify_csv_rows(report: &VerificationReport) -> Vec<VerifyCsvRow<'_>> {
    let ids = report.identities.iter().map(|c: &IdentityCheck| VerifyCsvRow {
        kind: "identity",
        name: &c.name,
        status: identity_status(c.status),
        point: None,
        residual: c.residual,
        tolerance: c.tolerance,
        samples: None,
        detail: &c.detail,
    });
    let oracles = report.oracles.iter().map(|o: &OracleResult| VerifyCsvRow {
        kind: "oracle",
        name: &o.claim_id,
        status: oracle_status(o.status),
        point: Some(o.worst_point),
        residual: o.worst_residual,
        tolerance: o.tolerance,
        samples: Some(o.samples),
        detail: &o.note,
    });
    ids.chain(oracles).collect()
}

#[derive(Serialize)]
struct VerifyJson<'a> {
    passed: bool,
    failures: usize,
    #[serde(flatten)]
    report: &'a VerificationReport,
}

fn write_verify_text(out: &mut dyn Write, report: &VerificationReport) -> Outcome {
    writeln!(out, "identity checks")?;
    for c in &report.identities {
        writeln!(
            out,
            "  {:<28} {:<12} residual {:>10.3e}  tol {:>8.1e}",
            c.name,
            identity_status(c.status),
            c.residual,
            c.tolerance
        )?;
    }
    writeln!(out, "oracles")?;
    for o in &report.oracles {
        writeln!(
            out,
            "  {:<28} {:<12} residual {:>10.3e}  tol {:>8.1e}  at {:<12.6e} n={}",
            o.claim_id,
            oracle_status(o.status),
            o.worst_residual,
            o.tolerance,
            o.worst_point,
            o.samples
        )?;
    }
    writeln!(out, "documented findings")?;
    for c in report
        .identities
        .iter()
        .filter(|c| c.status == CheckStatus::Inconsistent)
    {
        writeln!(out, "  {}: {}", c.name, c.detail)?;
    }
    for o in report
        .oracles
        .iter()
        .filter(|o| o.status == OracleStatus::DocumentedFailure)
    {
        writeln!(out, "  {}: {}", o.claim_id, o.note)?;
    }
    let failures = report.failures();
    if failures == 0 {
        writeln!(out, "result: pass")?;
    } else {
        writeln!(out, "result: {failures} failure(s)")?;
        for c in report.identities.iter().filter(|c| c.status == CheckStatus::Fail) {
            writeln!(out, "  {}: {}", c.name, c.detail)?;
        }
        for o in report.oracles.iter().filter(|o| !o.passed()) {
            writeln!(out, "  {}: {}", o.claim_id, o.note)?;
        }
    }
    Ok(())
}

fn cmd_verify(grid: usize, tol: Option<f64>, format: Format, out: &mut dyn Write) -> Outcome {
    if tol.is_some_and(|t| t.is_nan() || t < 0.0) {
        return Err(Failure::Input(format!(
            "tol must be non-negative, got {}",
            tol.unwrap()
        )));
    }
    let report = verify_all(&OracleConfig { grid, tolerance: tol })?;
    match format {
        Format::Json => write_json(
            out,
            &VerifyJson {
                passed: report.passed(),
                failures: report.failures(),
                report: &report,
            },
        )?,
        Format::Csv => write_csv(out, &verify_csv_rows(&report))?,
        Format::Text => write_verify_text(out, &report)?,
    }
    match report.failures() {
        0 => Ok(()),
        k => Err(Failure::Verification(format!(
            "{k} undocumented verification failure(s)"
        ))),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsymptoticRow {
    pub g: u64,
    pub n: u64,
    pub abs_chi: u64,
    pub kappa: u64,
    pub loglog_ell_over_c: f64,
    pub asymptotic_rhs: f64,
    pub ratio: f64,
    /// `loglog(ℓ/C) / (4χ²/ε₀)`.
    pub leading_ratio: f64,
    /// `|ratio − 1|` smaller than at the previous genus with the same
    /// puncture rule (`true` for the first genus).
    pub deviation_decreasing: bool,
}

#[derive(Serialize)]
struct AsymptoticTable {
    rows: Vec<AsymptoticRow>,
    /// `|ratio − 1|` strictly decreasing in `g` for `n = 0`.
    monotone_n0: bool,
    /// `|ratio − 1|` strictly decreasing in `g` for `n = g`.
    monotone_n_eq_g: bool,
}

fn asymptotic_table(max_genus: u64, systole: f64, params: &Params) -> Result<AsymptoticTable, Failure> {
    if max_genus < 10 {
        return Err(Failure::Input(format!(
            "max-genus must be at least 10, got {max_genus}"
        )));
    }
    let eps0 = constants().eps0;
    let mut series: [Vec<AsymptoticRow>; 2] = [Vec::new(), Vec::new()];
    for g in input::genus_ladder(max_genus) {
        for (slot, n) in [0, g].into_iter().enumerate() {
            let r = contraction_constant(&geometry(g, n, systole, params)?, params.t)?;
            let chi = r.abs_chi as f64;
            let prev = series[slot].last().map(|p: &AsymptoticRow| (p.ratio - 1.0).abs());
            series[slot].push(AsymptoticRow {
                g,
                n,
                abs_chi: r.abs_chi,
                kappa: r.kappa,
                loglog_ell_over_c: r.loglog_ell_over_c,
                asymptotic_rhs: r.asymptotic_rhs,
                ratio: r.asymptotic_ratio,
                leading_ratio: r.loglog_ell_over_c / (4.0 * chi * chi / eps0),
                deviation_decreasing: prev.is_none_or(|p| (r.asymptotic_ratio - 1.0).abs() < p),
            });
        }
    }
    let monotone = |rows: &[AsymptoticRow]| rows.iter().all(|r| r.deviation_decreasing);
    let (monotone_n0, monotone_n_eq_g) = (monotone(&series[0]), monotone(&series[1]));
    let [zero, equal] = series;
    let mut rows: Vec<AsymptoticRow> = zero.into_iter().zip(equal).flat_map(|(a, b)| [a, b]).collect();
    rows.sort_by_key(|r| (r.g, r.n));
    Ok(AsymptoticTable {
        rows,
        monotone_n0,
        monotone_n_eq_g,
    })
}

fn cmd_asymptotic(max_genus: u64, systole: f64, params: &Params, format: Format, out: &mut dyn Write) -> Outcome {
    let table = asymptotic_table(max_genus, systole, params)?;
    match format {
        Format::Json => write_json(out, &table),
        Format::Csv => write_csv(out, &table.rows),
        Format::Text => {
            writeln!(
                out,
                "{:>8} {:>8} {:>10} {:>10} {:>24} {:>24} {:>10} {:>10}",
                "g", "n", "|chi|", "kappa", "loglog(l/C)", "asymptotic", "ratio", "leading"
            )?;
            for r in &table.rows {
                writeln!(
                    out,
                    "{:>8} {:>8} {:>10} {:>10} {:>24.6} {:>24.6} {:>10.6} {:>10.6}",
                    r.g, r.n, r.abs_chi, r.kappa, r.loglog_ell_over_c, r.asymptotic_rhs, r.ratio, r.leading_ratio
                )?;
            }
            writeln!(
                out,
                "|ratio - 1| decreasing in g: n = 0 {}, n = g {}",
                table.monotone_n0, table.monotone_n_eq_g
            )?;
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct SkinningCsvRow {
    component: usize,
    dominating: bool,
    g: u64,
    n: u64,
    ell: f64,
    ln_c: String,
    gap: String,
    norm_bound: String,
}

fn cmd_skinning(boundary: &str, params: &Params, format: Format, out: &mut dyn Write) -> Outcome {
    let components = input::parse_boundary(boundary).map_err(Failure::Input)?;
    let report: SkinningReport = skinning_factor(&components, params.epsilon, params.t)?;
    match format {
        Format::Json => write_json(out, &report),
        Format::Csv => {
            let rows: Vec<SkinningCsvRow> = report
                .components
                .iter()
                .enumerate()
                .map(|(i, r)| SkinningCsvRow {
                    component: i + 1,
                    dominating: i == report.dominating,
                    g: r.g,
                    n: r.n,
                    ell: r.ell,
                    ln_c: r.ln_c.exact_string(),
                    gap: r.gap.exact_string(),
                    norm_bound: r.norm_bound.render(),
                })
                .collect();
            write_csv(out, &rows)
        }
        Format::Text => {
            for (i, r) in report.components.iter().enumerate() {
                writeln!(
                    out,
                    "component {} (g={}, n={}, l={}): ln C = {}, norm bound {}",
                    i + 1,
                    r.g,
                    r.n,
                    r.ell,
                    r.ln_c.render(),
                    r.norm_bound.render()
                )?;
            }
            let d = &report.components[report.dominating];
            writeln!(out, "max norm bound   {}", report.max_norm_bound.render())?;
            writeln!(
                out,
                "dominated by     component {} (g={}, n={}, l={})",
                report.dominating + 1,
                d.g,
                d.n,
                d.ell
            )?;
            Ok(())
        }
    }
}
