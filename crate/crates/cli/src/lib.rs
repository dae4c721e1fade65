//! Commands behind the `concurrence` binary.
//!
//! Every command writes its outputs plus a `<output>.manifest.json`
//! [`RunManifest`] from which the run can be repeated with `replay`.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use concurrence_core::{
    bounds::compute_report,
    derive_seed, family_exact_concurrence, family_state,
    io::{load_density, IoError},
    random_induced_state, BipartiteDims, BoundReport, DensityMatrix, Error, FamilyParams,
    OptimizerConfig, ReportJson, ReportOptions,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const FIGURE1_SCHEMA: &str = "figure1/v1";
pub const FAMILY_SCHEMA: &str = "family-scan/v1";
pub const GAP_SCHEMA: &str = "gap-scan/v1";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("i/o failure: {0}")]
    Io(String),
    #[error("numerical fault: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Io(_) => 3,
            CliError::Numerical(_) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::ConvergenceFailure { .. } | Error::DomainError { .. } => {
                CliError::Numerical(e.to_string())
            }
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        match e {
            IoError::Io(e) => CliError::Io(e.to_string()),
            IoError::Json(e) => CliError::Validation(format!("malformed JSON: {e}")),
            IoError::Invalid(e) => e.into(),
        }
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(
    name = "concurrence",
    version,
    about = "Concurrence bounds for 2xK mixed states"
)]
pub struct Cli {
    #[command(flatten)]
    pub opts: RunOptions,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by all commands.
#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct RunOptions {
    /// Master seed
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Optimizer restarts per search
    #[arg(long, global = true, default_value_t = 20)]
    pub restarts: usize,
    /// Iterations per restart
    #[arg(long, global = true, default_value_t = 2000)]
    pub max_iters: usize,
    /// Optimizer convergence tolerance
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// Output path (stdout for `bounds` when omitted)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads (all cores when omitted)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Decomposition length for the upper bound
    #[arg(long, global = true)]
    pub ub_length: Option<usize>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            restarts: 20,
            max_iters: 2000,
            tol: 1e-9,
            out: None,
            threads: None,
            ub_length: None,
        }
    }
}

impl RunOptions {
    pub fn optimizer(&self, seed: u64) -> OptimizerConfig {
        OptimizerConfig {
            restarts: self.restarts,
            max_iters: self.max_iters,
            tol: self.tol,
            seed,
            ..OptimizerConfig::default()
        }
    }

    fn report_options(&self, seed: u64) -> ReportOptions {
        ReportOptions {
            optimizer: self.optimizer(seed),
            ub_length: self.ub_length,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Bound report for one state
    Bounds(BoundsArgs),
    /// Random 2x3 ensembles: bounds, PPT test and certificates per state
    Figure1(Figure1Args),
    /// Scan the analytic 2x3 family over an (x, y) grid
    FamilyScan(FamilyScanArgs),
    /// Rank random states and family points by upper minus lower bound
    GapScan(GapScanArgs),
    /// Repeat a run from its manifest
    Replay(ReplayArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Bounds(_) => "bounds",
            Command::Figure1(_) => "figure1",
            Command::FamilyScan(_) => "family-scan",
            Command::GapScan(_) => "gap-scan",
            Command::Replay(_) => "replay",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct BoundsArgs {
    /// Density matrix JSON file
    #[arg(required_unless_present = "family", conflicts_with = "family")]
    pub input: Option<PathBuf>,
    /// Use the family state with parameters X Y
    #[arg(long, num_args = 2, value_names = ["X", "Y"], allow_negative_numbers = true)]
    pub family: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct Figure1Args {
    /// Environment dimensions M of the induced ensembles
    #[arg(long = "m", value_delimiter = ',', default_values_t = [4, 6, 10])]
    pub m_list: Vec<usize>,
    /// States per ensemble
    #[arg(long, default_value_t = 100)]
    pub per_m: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct FamilyScanArgs {
    /// x values; with --y the full product grid is scanned
    #[arg(
        long,
        value_delimiter = ',',
        allow_negative_numbers = true,
        requires = "y"
    )]
    pub x: Vec<f64>,
    #[arg(
        long,
        value_delimiter = ',',
        allow_negative_numbers = true,
        requires = "x"
    )]
    pub y: Vec<f64>,
    /// Spacing of the default grid over the whole parameter triangle
    #[arg(long, default_value_t = 0.05)]
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct GapScanArgs {
    /// Random states per environment dimension
    #[arg(long, default_value_t = 20)]
    pub random: usize,
    #[arg(long = "m", value_delimiter = ',', default_values_t = [4, 6, 10])]
    pub m_list: Vec<usize>,
    /// Spacing of the family grid
    #[arg(long, default_value_t = 0.1)]
    pub family_step: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}

/// Record written next to every output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: Command,
    pub options: RunOptions,
    pub tool_version: String,
    pub timestamp: String,
    pub outputs: Vec<PathBuf>,
    #[serde(default)]
    pub summary: serde_json::Value,
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".manifest.json");
    PathBuf::from(name)
}

fn write_manifest(
    command: &Command,
    opts: &RunOptions,
    output: &Path,
    summary: serde_json::Value,
) -> CliResult<PathBuf> {
    let manifest = RunManifest {
        command: command.clone(),
        options: opts.clone(),
        tool_version: TOOL_VERSION.to_string(),
        timestamp: chrono::Utc::now().to_rfc3339(),
        outputs: vec![output.to_path_buf()],
        summary,
    };
    let path = manifest_path(output);
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    fs::write(&path, json).map_err(|e| io_err(&path, e))?;
    Ok(path)
}

pub fn load_manifest(path: &Path) -> CliResult<RunManifest> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("manifest {}: {e}", path.display())))
}

/// Runs a parsed command inside a worker pool of the requested size.
pub fn run(command: &Command, opts: &RunOptions) -> CliResult<()> {
    if let Command::Replay(args) = command {
        let manifest = load_manifest(&args.manifest)?;
        if matches!(manifest.command, Command::Replay(_)) {
            return Err(CliError::Validation(
                "a manifest cannot replay another replay".into(),
            ));
        }
        return run(&manifest.command, &manifest.options);
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = opts.threads {
        if n == 0 {
            return Err(CliError::Validation("--threads must be positive".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Validation(format!("thread pool: {e}")))?;
    pool.install(|| match command {
        Command::Bounds(args) => cmd_bounds(command, args, opts),
        Command::Figure1(args) => cmd_figure1(command, args, opts).map(|_| ()),
        Command::FamilyScan(args) => cmd_family_scan(command, args, opts).map(|_| ()),
        Command::GapScan(args) => cmd_gap_scan(command, args, opts).map(|_| ()),
        Command::Replay(_) => unreachable!("handled above"),
    })
}

fn bounds_state(args: &BoundsArgs) -> CliResult<DensityMatrix<f64>> {
    match (&args.family, &args.input) {
        (Some(p), _) => {
            let [x, y] = p[..] else {
                return Err(CliError::Validation("--family takes two values".into()));
            };
            Ok(family_state(FamilyParams::new(x, y)?))
        }
        (None, Some(path)) => Ok(load_density(path)?),
        (None, None) => Err(CliError::Validation(
            "either an input file or --family is required".into(),
        )),
    }
}

/// Full bound report for one state as JSON.
pub fn bounds_report(args: &BoundsArgs, opts: &RunOptions) -> CliResult<ReportJson> {
    let rho = bounds_state(args)?;
    let report = compute_report(&rho, &opts.report_options(opts.seed))?;
    Ok(ReportJson::from_report(rho.dims(), &report))
}

fn cmd_bounds(command: &Command, args: &BoundsArgs, opts: &RunOptions) -> CliResult<()> {
    let report = bounds_report(args, opts)?;
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    match &opts.out {
        Some(path) => {
            fs::write(path, json + "\n").map_err(|e| io_err(path, e))?;
            write_manifest(command, opts, path, serde_json::Value::Null)?;
        }
        None => println!("{json}"),
    }
    Ok(())
}

fn output_path(opts: &RunOptions, default: &str) -> PathBuf {
    opts.out.clone().unwrap_or_else(|| PathBuf::from(default))
}

/// Writes the schema comment, the header and the rows.
fn write_csv<R: Serialize>(path: &Path, schema: &str, rows: &[R]) -> CliResult<()> {
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let mut out = BufWriter::new(file);
    writeln!(out, "# schema {schema}, concurrence {TOOL_VERSION}").map_err(|e| io_err(path, e))?;
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row).map_err(|e| io_err(path, e))?;
    }
    w.flush().map_err(|e| io_err(path, e))?;
    Ok(())
}

/// One state of a random ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Figure1Row {
    pub seed: u64,
    #[serde(rename = "M")]
    pub m: usize,
    pub rank: usize,
    pub lb_standard: f64,
    pub lb_optimized: f64,
    pub ub: f64,
    pub gap: f64,
    pub eof_lb: f64,
    pub ppt_min_eig: f64,
    pub certified: bool,
}

impl Figure1Row {
    fn new(seed: u64, m: usize, report: &BoundReport<f64>) -> Self {
        Self {
            seed,
            m,
            rank: report.ub.rank,
            lb_standard: report.lb_standard.value,
            lb_optimized: report.lb_optimized.value,
            ub: report.ub.value,
            gap: report.gap(),
            eof_lb: report.eof_lb,
            ppt_min_eig: report.ppt.min_eigenvalue,
            certified: report.exactness.is_certified(),
        }
    }
}

/// Seed of state `index` in the ensemble with environment dimension `m`.
pub fn ensemble_seed(master: u64, m: usize, index: usize) -> u64 {
    derive_seed(master, ((m as u64) << 32) | index as u64)
}

/// Per-ensemble tallies stored in the manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSummary {
    #[serde(rename = "M")]
    pub m: usize,
    pub states: usize,
    pub certified: usize,
    pub certified_fraction: f64,
    pub entangled_npt: usize,
    pub detected_by_lb: usize,
    pub min_gap: f64,
}

pub fn summarize(rows: &[Figure1Row], m_list: &[usize]) -> Vec<EnsembleSummary> {
    m_list
        .iter()
        .map(|&m| {
            let sel: Vec<&Figure1Row> = rows.iter().filter(|r| r.m == m).collect();
            let npt: Vec<&&Figure1Row> = sel.iter().filter(|r| r.ppt_min_eig < -1e-10).collect();
            let certified = sel.iter().filter(|r| r.certified).count();
            EnsembleSummary {
                m,
                states: sel.len(),
                certified,
                certified_fraction: certified as f64 / sel.len().max(1) as f64,
                entangled_npt: npt.len(),
                detected_by_lb: npt.iter().filter(|r| r.lb_optimized > 1e-6).count(),
                min_gap: sel.iter().map(|r| r.gap).fold(f64::INFINITY, f64::min),
            }
        })
        .collect()
}

/// Computes the ensemble rows in deterministic order.
pub fn figure1_rows(args: &Figure1Args, opts: &RunOptions) -> CliResult<Vec<Figure1Row>> {
    if args.m_list.is_empty() || args.per_m == 0 {
        return Err(CliError::Validation(
            "need at least one M and per_m >= 1".into(),
        ));
    }
    let dims = BipartiteDims::qubit_by(3).expect("2x3");
    let jobs: Vec<(usize, u64)> = args
        .m_list
        .iter()
        .flat_map(|&m| (0..args.per_m).map(move |i| (m, i)))
        .map(|(m, i)| (m, ensemble_seed(opts.seed, m, i)))
        .collect();
    jobs.par_iter()
        .map(|&(m, seed)| {
            let rho = random_induced_state::<f64>(m, dims, seed)?;
            let report = compute_report(&rho, &opts.report_options(seed))?;
            Ok(Figure1Row::new(seed, m, &report))
        })
        .collect()
}

fn cmd_figure1(command: &Command, args: &Figure1Args, opts: &RunOptions) -> CliResult<PathBuf> {
    let path = output_path(opts, "figure1.csv");
    let rows = figure1_rows(args, opts)?;
    write_csv(&path, FIGURE1_SCHEMA, &rows)?;
    let summary = summarize(&rows, &args.m_list);
    for s in &summary {
        eprintln!(
            "M={}: {} states, {} certified, {}/{} NPT states detected by the lower bound, min gap {:.3e}",
            s.m, s.states, s.certified, s.detected_by_lb, s.entangled_npt, s.min_gap
        );
    }
    write_manifest(
        command,
        opts,
        &path,
        serde_json::to_value(summary).expect("summary serializes"),
    )?;
    Ok(path)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyRow {
    pub x: f64,
    pub y: f64,
    pub classification: String,
    pub c_tilde: f64,
    pub lb_standard: f64,
    pub lb_optimized: f64,
    pub ub: f64,
    pub certified: bool,
}

fn snap(v: f64) -> f64 {
    (v * 1e12).round() / 1e12
}

/// Points `(x, y)` with `x >= y >= 0`, `x + y <= 1` on a square lattice.
pub fn triangle_grid(step: f64) -> CliResult<Vec<(f64, f64)>> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(CliError::Validation(format!(
            "grid step {step} must be in (0, 1]"
        )));
    }
    let n = (1.0 / step + 1e-9).floor() as usize;
    let mut points = Vec::new();
    for j in 0..=n {
        for i in 0..=n {
            let (x, y) = (snap(i as f64 * step), snap(j as f64 * step));
            if x >= y && x + y <= 1.0 + 1e-12 {
                points.push((x, y));
            }
        }
    }
    Ok(points)
}

fn family_point(x: f64, y: f64, opts: &RunOptions, seed: u64) -> CliResult<FamilyRow> {
    let p = FamilyParams::new(x, y)?;
    let rho = family_state(p);
    let report = compute_report(&rho, &opts.report_options(seed))?;
    Ok(FamilyRow {
        x,
        y,
        classification: family_exact_concurrence(p).label().to_string(),
        c_tilde: p.c_tilde(),
        lb_standard: report.lb_standard.value,
        lb_optimized: report.lb_optimized.value,
        ub: report.ub.value,
        certified: report.exactness.is_certified(),
    })
}

pub fn family_scan_rows(args: &FamilyScanArgs, opts: &RunOptions) -> CliResult<Vec<FamilyRow>> {
    let points: Vec<(f64, f64)> = if args.x.is_empty() {
        triangle_grid(args.step)?
    } else {
        let pts: Vec<(f64, f64)> = args
            .y
            .iter()
            .flat_map(|&y| args.x.iter().map(move |&x| (x, y)))
            .collect();
        // reject the whole grid before any work is done
        for &(x, y) in &pts {
            FamilyParams::new(x, y)?;
        }
        pts
    };
    points
        .par_iter()
        .enumerate()
        .map(|(i, &(x, y))| family_point(x, y, opts, derive_seed(opts.seed, i as u64)))
        .collect()
}

fn cmd_family_scan(
    command: &Command,
    args: &FamilyScanArgs,
    opts: &RunOptions,
) -> CliResult<PathBuf> {
    let rows = family_scan_rows(args, opts)?;
    let path = output_path(opts, "family_scan.csv");
    write_csv(&path, FAMILY_SCHEMA, &rows)?;
    let exact = rows.iter().filter(|r| r.classification == "exact").count();
    let summary = serde_json::json!({ "points": rows.len(), "exact": exact });
    write_manifest(command, opts, &path, summary)?;
    Ok(path)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapRow {
    pub source: String,
    #[serde(rename = "M")]
    pub m: Option<usize>,
    pub seed: Option<u64>,
    pub x: Option<f64>,
    pub y: Option<f64>,
    pub lb_optimized: f64,
    pub ub: f64,
    pub gap: f64,
}

pub fn gap_scan_rows(args: &GapScanArgs, opts: &RunOptions) -> CliResult<Vec<GapRow>> {
    let dims = BipartiteDims::qubit_by(3).expect("2x3");
    let mut family = triangle_grid(args.family_step)?;
    if !family.contains(&(0.5, 0.5)) {
        family.push((0.5, 0.5));
    }
    let randoms: Vec<(usize, u64)> = args
        .m_list
        .iter()
        .flat_map(|&m| (0..args.random).map(move |i| (m, ensemble_seed(opts.seed, m, i))))
        .collect();
    let mut rows: Vec<GapRow> = family
        .par_iter()
        .enumerate()
        .map(|(i, &(x, y))| {
            let rho = family_state(FamilyParams::new(x, y)?);
            let report =
                compute_report(&rho, &opts.report_options(derive_seed(opts.seed, i as u64)))?;
            Ok(GapRow {
                source: "family".into(),
                m: None,
                seed: None,
                x: Some(x),
                y: Some(y),
                lb_optimized: report.lb_optimized.value,
                ub: report.ub.value,
                gap: report.gap(),
            })
        })
        .collect::<CliResult<_>>()?;
    let random_rows: Vec<GapRow> = randoms
        .par_iter()
        .map(|&(m, seed)| {
            let rho = random_induced_state::<f64>(m, dims, seed)?;
            let report = compute_report(&rho, &opts.report_options(seed))?;
            Ok(GapRow {
                source: "random".into(),
                m: Some(m),
                seed: Some(seed),
                x: None,
                y: None,
                lb_optimized: report.lb_optimized.value,
                ub: report.ub.value,
                gap: report.gap(),
            })
        })
        .collect::<CliResult<_>>()?;
    rows.extend(random_rows);
    // stable sort keeps generation order among equal gaps
    rows.sort_by(|a, b| b.gap.total_cmp(&a.gap));
    Ok(rows)
}

fn cmd_gap_scan(command: &Command, args: &GapScanArgs, opts: &RunOptions) -> CliResult<PathBuf> {
    let rows = gap_scan_rows(args, opts)?;
    let path = output_path(opts, "gap_scan.csv");
    write_csv(&path, GAP_SCHEMA, &rows)?;
    let summary = serde_json::json!({
        "rows": rows.len(),
        "largest_gap": rows.first().map(|r| r.gap),
    });
    write_manifest(command, opts, &path, summary)?;
    Ok(path)
}
