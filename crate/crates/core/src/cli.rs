//! The `idforge` command line: `verify`, `list`, `mc-check` and `bench`.
//!
//! [`run`] parses arguments, writes the report and returns the exit code:
//! 0 on success, 1 when an identity or a Monte Carlo cell fails, 2 on a
//! usage or configuration error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::identities::{
    lookup, registry, verify_descriptor, verify_descriptors, GridRanges, IdentityDescriptor, Params,
    ParamSpec, Ring, Status, VerificationResult,
};
use crate::orthopoly::Case;
use crate::stochastic::{
    mc_check_point, standard_mc_points, standard_statistics, GammaPairSampler,
    GaussianPairSampler, McCell, McPoint, Z_GATE,
};

/// Version of the JSON report layout.
pub const REPORT_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "idforge", version, about = "Exact verification of binomial and rising-factorial identities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Verify identities over a parameter grid.
    Verify(VerifyArgs),
    /// List the registered identities.
    List(ListArgs),
    /// Compare Monte Carlo moment estimates with their exact values.
    #[command(name = "mc-check")]
    McCheck(McArgs),
    /// Time the exact engine at increasing parameter sizes.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Markdown,
    Csv,
}

#[derive(Args, Debug)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Leave out the timestamp and per-cell timings, so that equal runs give
    /// byte-identical reports.
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Args, Debug)]
pub struct Selection {
    /// Every registered identity (the default when no --id is given).
    #[arg(long, conflicts_with = "ids")]
    pub all: bool,
    /// Identity id; repeatable.
    #[arg(long = "id")]
    pub ids: Vec<String>,
}

/// Inclusive integer range written `a..b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IntRange(pub i64, pub i64);

impl FromStr for IntRange {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (a, b) = s
            .split_once("..")
            .ok_or_else(|| format!("expected a..b, got {s:?}"))?;
        let b = b.strip_prefix('=').unwrap_or(b);
        let parse = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("{t:?}: {e}"));
        Ok(IntRange(parse(a)?, parse(b)?))
    }
}

/// Sample count, accepting `1e6` as well as `1000000`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SampleCount(pub u64);

impl FromStr for SampleCount {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let t = s.replace('_', "");
        if let Ok(n) = t.parse::<u64>() {
            return Ok(SampleCount(n));
        }
        let x: f64 = t.parse().map_err(|_| format!("not a sample count: {s:?}"))?;
        if x.is_finite() && x >= 0.0 && x.fract() == 0.0 && x <= u64::MAX as f64 {
            Ok(SampleCount(x as u64))
        } else {
            Err(format!("not a whole sample count: {s:?}"))
        }
    }
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub selection: Selection,
    #[arg(long, default_value_t = 12)]
    pub k_max: i64,
    #[arg(long, default_value_t = 12)]
    pub n_max: i64,
    /// Range of `m`, e.g. `-5..10` (inclusive); defaults to `0..n-max`.
    #[arg(long, allow_hyphen_values = true)]
    pub m_range: Option<IntRange>,
    #[arg(long, env = "IDFORGE_WORKERS")]
    pub workers: Option<usize>,
    /// Add 1 to every right-hand side, so every cell must fail.
    #[arg(long)]
    pub perturb_rhs: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct ListArgs {
    #[arg(long = "id")]
    pub ids: Vec<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Args, Debug)]
pub struct McArgs {
    #[arg(long, default_value = "1e6")]
    pub samples: SampleCount,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Only this law.
    #[arg(long, value_enum)]
    pub case: Option<CaseArg>,
    /// Only this correlation.
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Option<f64>,
    /// Only this gamma shape.
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long, env = "IDFORGE_WORKERS")]
    pub workers: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    Normal,
    Gamma,
}

impl From<CaseArg> for Case {
    fn from(c: CaseArg) -> Case {
        match c {
            CaseArg::Normal => Case::Normal,
            CaseArg::Gamma => Case::Gamma,
        }
    }
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Identity id; repeatable. Defaults to the five theorem families.
    #[arg(long = "id")]
    pub ids: Vec<String>,
    #[arg(long, default_value_t = 60)]
    pub k_max: i64,
    #[arg(long, default_value_t = 20)]
    pub n_max: i64,
    #[arg(long, env = "IDFORGE_WORKERS")]
    pub workers: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// A rendered report and the exit code it implies.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub text: String,
    pub code: i32,
    /// Printed to stderr.
    pub warnings: Vec<String>,
}

impl Outcome {
    fn new(text: String, code: i32) -> Self {
        Outcome { text, code, warnings: Vec::new() }
    }
}

/// What a run was asked to do, echoed into its report.
#[derive(Clone, Debug, Default, Serialize)]
pub struct RunConfig {
    pub subcommand: String,
    pub ids: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_max: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_range: Option<[i64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub perturb_rhs: bool,
    pub format: Option<Format>,
}

#[derive(Serialize)]
struct Report<R: Serialize, S: Serialize> {
    version: u32,
    tool: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<String>,
    config: RunConfig,
    results: Vec<R>,
    summary: S,
}

fn report<R: Serialize, S: Serialize>(
    config: RunConfig,
    results: Vec<R>,
    summary: S,
    no_timestamp: bool,
) -> Report<R, S> {
    Report {
        version: REPORT_VERSION,
        tool: format!("idforge {}", env!("CARGO_PKG_VERSION")),
        timestamp: (!no_timestamp).then(|| chrono::Utc::now().to_rfc3339()),
        config,
        results,
        summary,
    }
}

/// Parses `args` (program name first), runs the command and writes its report
/// to `out` (or the `--output` file). Diagnostics go to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_CONFIG
                }
            };
        }
    };
    let (result, output) = match cli.command {
        Command::Verify(a) => (cmd_verify(&a), a.output),
        Command::List(a) => (cmd_list(&a), a.output),
        Command::McCheck(a) => (cmd_mc_check(&a), a.output),
        Command::Bench(a) => (cmd_bench(&a), a.output),
    };
    match result {
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_CONFIG
        }
        Ok(Outcome { text, code, warnings }) => {
            for w in &warnings {
                let _ = writeln!(err, "warning: {w}");
            }
            let written = match &output.output {
                Some(path) => std::fs::write(path, &text),
                None => out.write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: cannot write report: {e}");
                return EXIT_CONFIG;
            }
            code
        }
    }
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn resolve_workers(w: Option<usize>) -> Result<usize> {
    match w {
        Some(0) => Err(Error::Config("workers must be at least 1".into())),
        Some(n) => Ok(n),
        None => Ok(default_workers()),
    }
}

/// Known ids, in registry order when none are named.
fn resolve_ids(ids: &[String]) -> Result<Vec<&'static IdentityDescriptor>> {
    if ids.is_empty() {
        return Ok(registry().iter().collect());
    }
    ids.iter().map(|id| lookup(id)).collect()
}

fn ms(secs: f64) -> f64 {
    (secs * 1e6).round() / 1e3
}

fn params_text(p: &Params) -> String {
    p.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

fn render<R: Serialize, S: Serialize>(
    fmt: Format,
    rep: &Report<R, S>,
    markdown: impl FnOnce() -> String,
    csv_rows: impl FnOnce() -> (Vec<&'static str>, Vec<Vec<String>>),
) -> Result<String> {
    match fmt {
        Format::Json => serde_json::to_string_pretty(rep)
            .map(|s| s + "\n")
            .map_err(|e| Error::Config(e.to_string())),
        Format::Markdown => Ok(markdown()),
        Format::Csv => {
            let (header, rows) = csv_rows();
            to_csv(&header, &rows)
        }
    }
}

fn to_csv(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Config(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Config(e.to_string()))
}

fn md_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = format!("| {} |\n|{}\n", header.join(" | "), "---|".repeat(header.len()));
    for r in rows {
        let cells: Vec<String> = r.iter().map(|c| c.replace('|', "\\|")).collect();
        s += &format!("| {} |\n", cells.join(" | "));
    }
    s
}

#[derive(Serialize)]
struct VerifyRow {
    id: String,
    params: Params,
    status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<String>,
    elapsed_ms: Option<f64>,
    paper_ref: String,
    empirical: bool,
}

#[derive(Serialize)]
struct FamilySummary {
    id: String,
    cells: usize,
    passed: usize,
    failed: usize,
    empirical: usize,
}

#[derive(Serialize)]
struct VerifySummary {
    total: usize,
    passed: usize,
    failed: usize,
    empirical_cells: usize,
    empirical_failed: usize,
    all_passed: bool,
    elapsed_ms: Option<f64>,
    identities: Vec<FamilySummary>,
}

fn summarize(results: &[VerificationResult]) -> Vec<FamilySummary> {
    let mut out: Vec<FamilySummary> = Vec::new();
    for r in results {
        if out.last().is_none_or(|f| f.id != r.id) {
            out.push(FamilySummary {
                id: r.id.clone(),
                cells: 0,
                passed: 0,
                failed: 0,
                empirical: 0,
            });
        }
        let f = out.last_mut().unwrap();
        f.cells += 1;
        if r.passed() {
            f.passed += 1;
        } else {
            f.failed += 1;
        }
        if r.empirical {
            f.empirical += 1;
        }
    }
    out
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<Outcome> {
    let ids = if a.selection.all { Vec::new() } else { a.selection.ids.clone() };
    let descs = resolve_ids(&ids)?;
    let m = a.m_range.unwrap_or(IntRange(0, a.n_max));
    let ranges = GridRanges {
        k_max: a.k_max,
        n_max: a.n_max,
        m_min: m.0,
        m_max: m.1,
    };
    ranges.validate()?;
    let workers = resolve_workers(a.workers)?;
    let start = Instant::now();
    let results = if a.perturb_rhs {
        let bad: Vec<IdentityDescriptor> = descs.iter().map(|d| d.with_perturbed_rhs()).collect();
        verify_descriptors(&bad.iter().collect::<Vec<_>>(), &ranges, workers)?
    } else {
        verify_descriptors(&descs, &ranges, workers)?
    };
    let total_ms = ms(start.elapsed().as_secs_f64());

    let fmt = a.output.format.unwrap_or(Format::Json);
    let hide = a.output.no_timestamp;
    let failed = results.iter().filter(|r| !r.passed()).count();
    let summary = VerifySummary {
        total: results.len(),
        passed: results.len() - failed,
        failed,
        empirical_cells: results.iter().filter(|r| r.empirical).count(),
        empirical_failed: results.iter().filter(|r| r.empirical && !r.passed()).count(),
        all_passed: failed == 0,
        elapsed_ms: (!hide).then_some(total_ms),
        identities: summarize(&results),
    };
    let config = RunConfig {
        subcommand: "verify".into(),
        ids: if ids.is_empty() { vec!["all".into()] } else { ids },
        k_max: Some(a.k_max),
        n_max: Some(a.n_max),
        m_range: Some([m.0, m.1]),
        workers: Some(workers),
        perturb_rhs: a.perturb_rhs,
        format: Some(fmt),
        ..Default::default()
    };
    let rows: Vec<VerifyRow> = results
        .iter()
        .map(|r| VerifyRow {
            id: r.id.clone(),
            params: r.params.clone(),
            status: r.status,
            witness: r.witness.clone(),
            elapsed_ms: (!hide).then(|| (r.elapsed_ms * 1e3).round() / 1e3),
            paper_ref: r.paper_ref.clone(),
            empirical: r.empirical,
        })
        .collect();
    let code = if failed == 0 { EXIT_OK } else { EXIT_FAIL };
    let rep = report(config, rows, summary, hide);
    let text = render(
        fmt,
        &rep,
        || {
            let fams: Vec<Vec<String>> = rep
                .summary
                .identities
                .iter()
                .map(|f| {
                    let anchor = lookup(&f.id).map(|d| d.paper_ref).unwrap_or("");
                    vec![
                        f.id.clone(),
                        f.cells.to_string(),
                        f.passed.to_string(),
                        f.failed.to_string(),
                        f.empirical.to_string(),
                        anchor.to_string(),
                    ]
                })
                .collect();
            let mut s = format!(
                "# Verification\n\n{} cells, {} passed, {} failed ({} empirical)\n\n",
                rep.summary.total, rep.summary.passed, rep.summary.failed, rep.summary.empirical_cells
            );
            s += &md_table(&["id", "cells", "passed", "failed", "empirical", "anchor"], &fams);
            let fails: Vec<Vec<String>> = rep
                .results
                .iter()
                .filter(|r| r.status == Status::Fail)
                .map(|r| vec![r.id.clone(), params_text(&r.params), r.witness.clone().unwrap_or_default()])
                .collect();
            if !fails.is_empty() {
                s += "\n## Failures\n\n";
                s += &md_table(&["id", "params", "witness"], &fails);
            }
            s
        },
        || {
            let rows = rep
                .results
                .iter()
                .map(|r| {
                    vec![
                        r.id.clone(),
                        params_text(&r.params),
                        r.status.to_string(),
                        r.empirical.to_string(),
                        r.elapsed_ms.map(|x| x.to_string()).unwrap_or_default(),
                        r.witness.clone().unwrap_or_default(),
                        r.paper_ref.clone(),
                    ]
                })
                .collect();
            (vec!["id", "params", "status", "empirical", "elapsed_ms", "witness", "paper_ref"], rows)
        },
    )?;
    Ok(Outcome::new(text, code))
}

#[derive(Serialize)]
struct ListEntry {
    id: &'static str,
    title: &'static str,
    params: Vec<ParamSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    constraint: Option<&'static str>,
    ring: Ring,
    paper_ref: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    derived_from: Option<&'static str>,
    has_empirical_range: bool,
}

fn schema_text(d: &IdentityDescriptor) -> String {
    let mut s = d
        .params
        .iter()
        .map(|p| format!("{} in [{}, {}]", p.name, p.min, p.max))
        .collect::<Vec<_>>()
        .join(", ");
    if let Some(c) = &d.constraint {
        s += &format!(", {}", c.text);
    }
    s
}

pub fn cmd_list(a: &ListArgs) -> Result<Outcome> {
    let descs = resolve_ids(&a.ids)?;
    let entries: Vec<ListEntry> = descs
        .iter()
        .map(|d| ListEntry {
            id: d.id,
            title: d.title,
            params: d.params.clone(),
            constraint: d.constraint.map(|c| c.text),
            ring: d.ring.clone(),
            paper_ref: d.paper_ref,
            derived_from: d.derivation.map(|x| x.parent),
            has_empirical_range: d.empirical.is_some(),
        })
        .collect();
    let rows: Vec<Vec<String>> = descs
        .iter()
        .map(|d| {
            vec![
                d.id.to_string(),
                schema_text(d),
                d.ring.to_string(),
                d.paper_ref.to_string(),
                d.derivation.map(|x| x.parent).unwrap_or("").to_string(),
                d.title.to_string(),
            ]
        })
        .collect();
    let header = ["id", "parameters", "ring", "anchor", "derived from", "statement"];
    let text = match a.output.format.unwrap_or(Format::Markdown) {
        Format::Json => serde_json::to_string_pretty(&entries).map_err(|e| Error::Config(e.to_string()))? + "\n",
        Format::Markdown => md_table(&header, &rows),
        Format::Csv => to_csv(&header, &rows)?,
    };
    Ok(Outcome::new(text, EXIT_OK))
}

#[derive(Serialize)]
struct McSummary {
    cells: usize,
    passed: usize,
    failed: usize,
    retried: usize,
    max_abs_z: f64,
    z_gate: f64,
    all_passed: bool,
    warnings: Vec<String>,
}

/// Sample counts below this draw a warning about wide standard errors.
pub const WIDE_SE_SAMPLES: u64 = 100_000;

fn mc_points(a: &McArgs) -> Result<Vec<McPoint>> {
    let mut points = standard_mc_points();
    if let Some(c) = a.case {
        let c = Case::from(c);
        points.retain(|p| p.case == c);
    }
    if let Some(rho) = a.rho {
        for p in &mut points {
            p.rho = rho;
        }
    }
    if let Some(beta) = a.beta {
        for p in points.iter_mut().filter(|p| p.case == Case::Gamma) {
            p.beta = beta;
        }
    }
    let mut uniq: Vec<McPoint> = Vec::new();
    for p in points {
        if !uniq.contains(&p) {
            uniq.push(p);
        }
    }
    for p in &uniq {
        match p.case {
            Case::Normal => GaussianPairSampler::new(p.rho, a.seed).map(|_| ())?,
            Case::Gamma => GammaPairSampler::new(p.beta, p.rho, a.seed).map(|_| ())?,
        }
    }
    Ok(uniq)
}

pub fn cmd_mc_check(a: &McArgs) -> Result<Outcome> {
    let n = a.samples.0;
    if n < crate::stochastic::MIN_SAMPLES {
        return Err(Error::Config(format!(
            "--samples must be at least {}",
            crate::stochastic::MIN_SAMPLES
        )));
    }
    let points = mc_points(a)?;
    let workers = resolve_workers(a.workers)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let stats = standard_statistics();
    let cells: Vec<McCell> = pool.install(|| -> Result<Vec<McCell>> {
        let mut all = Vec::new();
        for p in &points {
            all.extend(mc_check_point(p, &stats, n, a.seed)?);
        }
        Ok(all)
    })?;
    let mut warnings = Vec::new();
    if n < WIDE_SE_SAMPLES {
        warnings.push(format!(
            "only {n} samples per cell: standard errors are wide, the |z| <= {Z_GATE} gate still applies"
        ));
    }
    let failed = cells.iter().filter(|c| !c.passed).count();
    let summary = McSummary {
        cells: cells.len(),
        passed: cells.len() - failed,
        failed,
        retried: cells.iter().filter(|c| c.attempts > 1).count(),
        max_abs_z: cells.iter().map(|c| c.z.abs()).fold(0.0, f64::max),
        z_gate: Z_GATE,
        all_passed: failed == 0,
        warnings,
    };
    let fmt = a.output.format.unwrap_or(Format::Json);
    let config = RunConfig {
        subcommand: "mc-check".into(),
        ids: Vec::new(),
        workers: Some(workers),
        seed: Some(a.seed),
        samples: Some(n),
        format: Some(fmt),
        ..Default::default()
    };
    let code = if failed == 0 { EXIT_OK } else { EXIT_FAIL };
    let rep = report(config, cells, summary, a.output.no_timestamp);
    let row = |c: &McCell| {
        vec![
            c.case.to_string(),
            c.statistic.to_string(),
            c.rho.to_string(),
            c.beta.map(|b| b.to_string()).unwrap_or_default(),
            format!("{:.6}", c.estimate.mean),
            format!("{:.6}", c.estimate.std_error),
            format!("{:.6}", c.exact),
            format!("{:.3}", c.z),
            c.attempts.to_string(),
            if c.passed { "pass" } else { "fail" }.to_string(),
        ]
    };
    let header = ["case", "statistic", "rho", "beta", "estimate", "std_error", "exact", "z", "attempts", "status"];
    let text = render(
        fmt,
        &rep,
        || {
            let mut s = format!(
                "# Monte Carlo check\n\n{} cells, {} passed, {} failed, {} retried; {} samples, seed {}\n\n",
                rep.summary.cells, rep.summary.passed, rep.summary.failed, rep.summary.retried, n, a.seed
            );
            for w in &rep.summary.warnings {
                s += &format!("warning: {w}\n\n");
            }
            s + &md_table(&header, &rep.results.iter().map(row).collect::<Vec<_>>())
        },
        || (header.to_vec(), rep.results.iter().map(row).collect()),
    )?;
    let warnings = rep.summary.warnings.clone();
    Ok(Outcome { text, code, warnings })
}

#[derive(Serialize)]
struct BenchRow {
    id: String,
    size: i64,
    params: Params,
    status: Status,
    elapsed_ms: f64,
}

#[derive(Serialize)]
struct BenchSummary {
    workers: usize,
    single_worker_ms: f64,
    multi_worker_ms: f64,
    speedup: f64,
    all_passed: bool,
}

const BENCH_LADDER: [i64; 7] = [5, 10, 20, 40, 60, 80, 100];

/// The cell of `d` with every parameter set to `size`, clipped to its range.
fn bench_cell(d: &IdentityDescriptor, size: i64) -> Params {
    d.params
        .iter()
        .map(|p| (p.name.to_string(), size.clamp(p.min, p.max)))
        .collect()
}

fn bench_sizes(d: &IdentityDescriptor, k_max: i64, n_max: i64) -> Vec<i64> {
    let cap = if d.params.iter().any(|p| p.name == "k") { k_max } else { n_max };
    let top = d.params.iter().map(|p| p.max).min().unwrap_or(cap).min(cap);
    let mut sizes: Vec<i64> = BENCH_LADDER.iter().copied().filter(|s| *s < top).collect();
    sizes.push(top);
    sizes
}

pub fn cmd_bench(a: &BenchArgs) -> Result<Outcome> {
    GridRanges {
        k_max: a.k_max,
        n_max: a.n_max,
        m_min: 0,
        m_max: 0,
    }
    .validate()?;
    let default_ids: Vec<String> = ["THM1.i", "THM1.ii", "THM1.iii", "THM1.iv", "THM1.v"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let ids = if a.ids.is_empty() { default_ids } else { a.ids.clone() };
    let descs = resolve_ids(&ids)?;
    let workers = resolve_workers(a.workers)?;
    let mut cells: Vec<(&IdentityDescriptor, i64, Params)> = Vec::new();
    for d in &descs {
        for s in bench_sizes(d, a.k_max, a.n_max) {
            let p = bench_cell(d, s);
            if d.check_params(&p).is_ok() {
                cells.push((d, s, p));
            }
        }
    }
    let timed = |w: usize| -> Result<(Vec<VerificationResult>, f64)> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?;
        let start = Instant::now();
        let res = pool.install(|| {
            cells
                .par_iter()
                .map(|(d, _, p)| verify_descriptor(d, p))
                .collect::<Result<Vec<_>>>()
        })?;
        Ok((res, ms(start.elapsed().as_secs_f64())))
    };
    let (single, single_ms) = timed(1)?;
    let (_, multi_ms) = timed(workers)?;
    let rows: Vec<BenchRow> = cells
        .iter()
        .zip(&single)
        .map(|((d, s, p), r)| BenchRow {
            id: d.id.to_string(),
            size: *s,
            params: p.clone(),
            status: r.status,
            elapsed_ms: (r.elapsed_ms * 1e3).round() / 1e3,
        })
        .collect();
    let all_passed = rows.iter().all(|r| r.status == Status::Pass);
    let summary = BenchSummary {
        workers,
        single_worker_ms: single_ms,
        multi_worker_ms: multi_ms,
        speedup: if multi_ms > 0.0 { single_ms / multi_ms } else { 1.0 },
        all_passed,
    };
    let fmt = a.output.format.unwrap_or(Format::Json);
    let config = RunConfig {
        subcommand: "bench".into(),
        ids,
        k_max: Some(a.k_max),
        n_max: Some(a.n_max),
        workers: Some(workers),
        format: Some(fmt),
        ..Default::default()
    };
    let rep = report(config, rows, summary, a.output.no_timestamp);
    let row = |r: &BenchRow| {
        vec![
            r.id.clone(),
            r.size.to_string(),
            params_text(&r.params),
            r.status.to_string(),
            format!("{:.3}", r.elapsed_ms),
        ]
    };
    let header = ["id", "size", "params", "status", "elapsed_ms"];
    let text = render(
        fmt,
        &rep,
        || {
            let s = format!(
                "# Bench\n\n1 worker: {:.1} ms, {} workers: {:.1} ms, speedup {:.2}\n\n",
                rep.summary.single_worker_ms, rep.summary.workers, rep.summary.multi_worker_ms, rep.summary.speedup
            );
            s + &md_table(&header, &rep.results.iter().map(row).collect::<Vec<_>>())
        },
        || (header.to_vec(), rep.results.iter().map(row).collect()),
    )?;
    Ok(Outcome::new(text, if all_passed { EXIT_OK } else { EXIT_FAIL }))
}
