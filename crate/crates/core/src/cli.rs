//! Command-line front end. The binary forwards to [`main_with_args`].
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage/config/input
//! error, 3 runtime error.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::analytics::{degree_census, measured_ecum, threshold_stats, DegreeCensus, ThresholdStats};
use crate::config::{ConfigDoc, ConfigError, GrowthConfig, Mode, Overrides};
use crate::export;
use crate::graph::{Distance, NetworkModel};
use crate::growth::{rng_for_run, Growth, GrowthError, StepTrace};
use crate::predictor::{counts_deterministic, counts_deterministic_big, ModelParams};
use crate::seed::SelectionPolicy;
use crate::verify::{verify_suite, CountOracle, SuiteOptions, VerifyError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

pub const EDGES_FILE: &str = "edges.txt";
pub const BOUND_FILE: &str = "bound_edges.txt";
pub const TRACE_FILE: &str = "trace.csv";
pub const PROVENANCE_FILE: &str = "provenance.csv";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Parser)]
#[command(name = "motifgrow", version, about = "Grow, measure and verify motif-based scale-free network models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a model and write its edge lists, trace and provenance.
    Grow(GrowArgs),
    /// Measure an exported model: degree census, cumulative edges, thresholds, diameter.
    Stats(StatsArgs),
    /// Generate a model and compare it with every applicable closed form.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Deterministic,
    Randomized,
    Rewire,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Deterministic => Mode::Deterministic,
            ModeArg::Randomized => Mode::Randomized,
            ModeArg::Rewire => Mode::Rewire,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    ByBoundOrder,
    ByDescendingDegree,
    UniformRandom,
}

impl From<PolicyArg> for SelectionPolicy {
    fn from(p: PolicyArg) -> SelectionPolicy {
        match p {
            PolicyArg::ByBoundOrder => SelectionPolicy::ByBoundOrder,
            PolicyArg::ByDescendingDegree => SelectionPolicy::ByDescendingDegree,
            PolicyArg::UniformRandom => SelectionPolicy::UniformRandom,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Args, Default)]
pub struct OverrideArgs {
    /// Bound thickness.
    #[arg(long)]
    pub r: Option<u32>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Edge removal probability.
    #[arg(long = "pr")]
    pub p_r: Option<f64>,
    /// Edge addition probability.
    #[arg(long = "pa")]
    pub p_a: Option<f64>,
    /// Rewiring probability.
    #[arg(long = "pw")]
    pub p_w: Option<f64>,
    #[arg(long)]
    pub steps: Option<u32>,
    #[arg(long = "rng-seed")]
    pub rng_seed: Option<u64>,
    /// Bound-vertex selection policy.
    #[arg(long, value_enum)]
    pub policy: Option<PolicyArg>,
}

impl OverrideArgs {
    fn to_overrides(&self) -> Overrides {
        Overrides {
            r: self.r,
            mode: self.mode.map(Mode::from),
            p_r: self.p_r,
            p_a: self.p_a,
            p_w: self.p_w,
            steps: self.steps,
            rng_seed: self.rng_seed,
            selection_policy: self.policy.map(SelectionPolicy::from),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct GrowArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub overrides: OverrideArgs,
    /// Allow step counts whose edge count exceeds 64 bits.
    #[arg(long)]
    pub allow_big: bool,
    /// Comma-separated p_r values; runs a randomized sweep.
    #[arg(long = "sweep-pr", value_delimiter = ',')]
    pub sweep_pr: Vec<f64>,
    /// Comma-separated p_a values; runs a randomized sweep.
    #[arg(long = "sweep-pa", value_delimiter = ',')]
    pub sweep_pa: Vec<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct StatsArgs {
    /// Output directory of a `grow` run; supplies default file paths.
    #[arg(long)]
    pub run: Option<PathBuf>,
    #[arg(long)]
    pub edges: Option<PathBuf>,
    #[arg(long)]
    pub provenance: Option<PathBuf>,
    #[arg(long)]
    pub trace: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Skip the all-pairs diameter computation.
    #[arg(long)]
    pub no_diameter: bool,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub overrides: OverrideArgs,
    /// Replace the edge-count oracle with a known-wrong form.
    #[arg(long)]
    pub negative_control: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("{path}: {source}")]
    Input {
        path: PathBuf,
        source: export::FormatError,
    },
    #[error("generation failed: {0}")]
    Growth(#[from] GrowthError),
    #[error(transparent)]
    Verify(VerifyError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) | CliError::Input { .. } => EXIT_USAGE,
            CliError::Growth(GrowthError::Config(_)) => EXIT_USAGE,
            CliError::Verify(VerifyError::Growth(GrowthError::Config(_))) => EXIT_USAGE,
            CliError::Growth(_) | CliError::Verify(_) | CliError::Io { .. } => EXIT_RUNTIME,
        }
    }
}

impl From<VerifyError> for CliError {
    fn from(e: VerifyError) -> CliError {
        CliError::Verify(e)
    }
}

/// Record of one command invocation, written as `manifest.json`.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: &'static str,
    pub config_path: Option<PathBuf>,
    pub config: Option<ConfigDoc>,
    pub out_dir: PathBuf,
    pub files: Vec<String>,
    pub duration_ms: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub predicted: Option<PredictedCounts>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub runs: Vec<RunManifest>,
}

/// Deterministic closed-form counts, as decimal strings (may exceed 64 bits).
#[derive(Debug, Clone, Serialize)]
pub struct PredictedCounts {
    pub n_v: String,
    pub n_e: String,
    pub n_be: String,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_owned(),
        source,
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| {
        if source.kind() == std::io::ErrorKind::NotFound {
            CliError::Usage(format!("{}: file not found", path.display()))
        } else {
            CliError::Io {
                path: path.to_owned(),
                source,
            }
        }
    })
}

/// Writes `contents` to `dir/name` and records the name.
fn emit(dir: &Path, name: &str, contents: &str, files: &mut Vec<String>) -> Result<(), CliError> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(io_err(&path))?;
    files.push(name.to_owned());
    Ok(())
}

fn write_manifest(manifest: &RunManifest) -> Result<(), CliError> {
    let path = manifest.out_dir.join(MANIFEST_FILE);
    let mut text = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    text.push('\n');
    fs::write(&path, text).map_err(io_err(&path))
}

fn load_config(path: &Path, overrides: &OverrideArgs) -> Result<(ConfigDoc, GrowthConfig), CliError> {
    let mut doc = ConfigDoc::parse(&read(path)?)?;
    doc.apply(&overrides.to_overrides());
    let config = doc.resolve()?;
    Ok((doc, config))
}

fn predicted_counts(config: &GrowthConfig) -> Option<PredictedCounts> {
    let params = ModelParams::from_config(config).ok()?;
    let c = counts_deterministic_big(&params, config.steps);
    Some(PredictedCounts {
        n_v: c.n_v.to_string(),
        n_e: c.n_e.to_string(),
        n_be: c.n_be.to_string(),
    })
}

/// Rejects step counts whose deterministic edge count overflows `u64`
/// unless `allow_big` is set.
fn check_step_cap(config: &GrowthConfig, allow_big: bool) -> Result<(), CliError> {
    if allow_big {
        return Ok(());
    }
    let Ok(params) = ModelParams::from_config(config) else {
        return Ok(());
    };
    if counts_deterministic(&params, config.steps).is_err() {
        let cap = crate::predictor::max_steps_u64(&params);
        return Err(CliError::Usage(format!(
            "steps = {} exceeds the 64-bit cap of {cap} for this configuration; pass --allow-big to override",
            config.steps
        )));
    }
    Ok(())
}

fn write_model(dir: &Path, model: &NetworkModel, trace: &StepTrace) -> Result<Vec<String>, CliError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut files = Vec::new();
    emit(dir, EDGES_FILE, &export::model_edge_list(model), &mut files)?;
    emit(dir, BOUND_FILE, &export::bound_edge_list(model), &mut files)?;
    emit(dir, TRACE_FILE, &export::trace_csv(trace), &mut files)?;
    emit(dir, PROVENANCE_FILE, &export::provenance_csv(model), &mut files)?;
    files.push(MANIFEST_FILE.to_owned());
    Ok(files)
}

fn grow_one(
    config: GrowthConfig,
    rng_index: u64,
    dir: &Path,
    config_path: &Path,
) -> Result<RunManifest, CliError> {
    let start = Instant::now();
    let growth = Growth::with_rng(config.clone(), rng_for_run(config.rng_seed, rng_index))?;
    let (model, trace) = growth.run_to_end()?;
    let files = write_model(dir, &model, &trace)?;
    let manifest = RunManifest {
        command: "grow",
        config_path: Some(config_path.to_owned()),
        config: Some(config.to_doc()),
        out_dir: dir.to_owned(),
        files,
        duration_ms: start.elapsed().as_millis(),
        predicted: predicted_counts(&config),
        warnings: config.warnings(),
        runs: Vec::new(),
    };
    write_manifest(&manifest)?;
    Ok(manifest)
}

pub fn cmd_grow(args: &GrowArgs) -> Result<RunManifest, CliError> {
    let start = Instant::now();
    let (_, config) = load_config(&args.config, &args.overrides)?;
    check_step_cap(&config, args.allow_big)?;
    for w in config.warnings() {
        eprintln!("warning: {w}");
    }
    if args.sweep_pr.is_empty() && args.sweep_pa.is_empty() {
        return grow_one(config, 0, &args.out, &args.config);
    }

    let prs = if args.sweep_pr.is_empty() { vec![config.p_r] } else { args.sweep_pr.clone() };
    let pas = if args.sweep_pa.is_empty() { vec![config.p_a] } else { args.sweep_pa.clone() };
    let mut grid = Vec::new();
    for &p_r in &prs {
        for &p_a in &pas {
            let mut c = config.clone();
            c.mode = Mode::Randomized;
            if config.mode == Mode::Deterministic && args.overrides.policy.is_none() {
                c.selection = GrowthConfig::default_selection(Mode::Randomized);
            }
            c.p_r = p_r;
            c.p_a = p_a;
            c.validate()?;
            grid.push(c);
        }
    }
    fs::create_dir_all(&args.out).map_err(io_err(&args.out))?;
    let runs = grid
        .into_par_iter()
        .enumerate()
        .map(|(i, c)| {
            let dir = args.out.join(format!("pr{}_pa{}", c.p_r, c.p_a));
            grow_one(c, i as u64 + 1, &dir, &args.config)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let manifest = RunManifest {
        command: "grow",
        config_path: Some(args.config.clone()),
        config: Some(config.to_doc()),
        out_dir: args.out.clone(),
        files: vec![MANIFEST_FILE.to_owned()],
        duration_ms: start.elapsed().as_millis(),
        predicted: None,
        warnings: Vec::new(),
        runs,
    };
    write_manifest(&manifest)?;
    Ok(manifest)
}

/// Everything `stats` measures, also its JSON output.
#[derive(Debug, Clone, Serialize)]
pub struct StatsSummary {
    pub n_v: u64,
    pub n_e: u64,
    pub step: u32,
    pub histogram: Vec<(u32, u64)>,
    pub ecum: Vec<(u32, f64)>,
    pub thresholds: Vec<(u32, ThresholdStats)>,
    /// `None` when skipped; `"infinite"` for a disconnected model.
    pub diameter: Option<String>,
}

fn resolve_input(explicit: &Option<PathBuf>, run: &Option<PathBuf>, name: &str) -> Option<PathBuf> {
    explicit.clone().or_else(|| run.as_ref().map(|d| d.join(name)))
}

fn parse_file<T>(path: &Path, f: impl FnOnce(&str) -> Result<T, export::FormatError>) -> Result<T, CliError> {
    f(&read(path)?).map_err(|source| CliError::Input {
        path: path.to_owned(),
        source,
    })
}

pub fn stats_summary(model: &NetworkModel, trace: Option<&StepTrace>, census: &DegreeCensus, with_diameter: bool) -> StatsSummary {
    let ecum = match trace {
        Some(tr) => (1..tr.final_step())
            .map(|d| (d, measured_ecum(tr, d).expect("delta in range")))
            .collect(),
        None => Vec::new(),
    };
    let thresholds = census.histogram.keys().map(|&k| (k, threshold_stats(census, k))).collect();
    let diameter = with_diameter.then(|| match model.diameter() {
        Distance::Finite(d) => d.to_string(),
        Distance::Infinite => "infinite".to_owned(),
    });
    StatsSummary {
        n_v: model.vertex_count() as u64,
        n_e: model.edge_count() as u64,
        step: model.step(),
        histogram: census.histogram.iter().map(|(&d, &c)| (d, c)).collect(),
        ecum,
        thresholds,
        diameter,
    }
}

pub fn cmd_stats(args: &StatsArgs) -> Result<RunManifest, CliError> {
    let start = Instant::now();
    let edges_path = resolve_input(&args.edges, &args.run, EDGES_FILE)
        .ok_or_else(|| CliError::Usage("stats needs --run or --edges".into()))?;
    let prov_path = resolve_input(&args.provenance, &args.run, PROVENANCE_FILE)
        .ok_or_else(|| CliError::Usage("stats needs --run or --provenance".into()))?;
    let trace_path = resolve_input(&args.trace, &args.run, TRACE_FILE).filter(|p| args.trace.is_some() || p.exists());

    let edges = parse_file(&edges_path, export::parse_edge_list)?;
    let provenance = parse_file(&prov_path, export::parse_provenance_csv)?;
    let trace = trace_path
        .as_deref()
        .map(|p| parse_file(p, export::parse_trace_csv))
        .transpose()?;
    let step = match &trace {
        Some(t) => t.final_step(),
        None => provenance.iter().map(|p| p.birth_step).max().unwrap_or(0),
    };
    let model = export::model_from_parts(provenance, &edges, &[], step).map_err(|source| CliError::Input {
        path: edges_path.clone(),
        source,
    })?;
    let census = degree_census(&model);
    let summary = stats_summary(&model, trace.as_ref(), &census, !args.no_diameter);

    fs::create_dir_all(&args.out).map_err(io_err(&args.out))?;
    let mut files = Vec::new();
    match args.format {
        Format::Text => {
            emit(&args.out, "census.csv", &export::census_csv(&census), &mut files)?;
            emit(&args.out, "vertices.csv", &export::vertex_csv(&census), &mut files)?;
            if trace.is_some() {
                emit(&args.out, "ecum.csv", &export::ecum_csv(&summary.ecum), &mut files)?;
            }
            emit(&args.out, "threshold.csv", &export::threshold_csv(&summary.thresholds), &mut files)?;
            if let Some(d) = &summary.diameter {
                emit(&args.out, "diameter.txt", &format!("{d}\n"), &mut files)?;
            }
        }
        Format::Json => {
            let mut text = serde_json::to_string_pretty(&summary).expect("summary serializes");
            text.push('\n');
            emit(&args.out, "stats.json", &text, &mut files)?;
        }
    }
    files.push(MANIFEST_FILE.to_owned());
    println!(
        "{} vertices, {} edges, degree sum {}{}",
        summary.n_v,
        summary.n_e,
        census.degree_sum(),
        summary.diameter.as_ref().map(|d| format!(", diameter {d}")).unwrap_or_default()
    );
    let manifest = RunManifest {
        command: "stats",
        config_path: None,
        config: None,
        out_dir: args.out.clone(),
        files,
        duration_ms: start.elapsed().as_millis(),
        predicted: None,
        warnings: Vec::new(),
        runs: Vec::new(),
    };
    write_manifest(&manifest)?;
    Ok(manifest)
}

/// Runs the suite and writes `report.txt` and `report.json`. Returns
/// whether every gating entry passed.
pub fn cmd_verify(args: &VerifyArgs) -> Result<bool, CliError> {
    let start = Instant::now();
    let (doc, config) = load_config(&args.config, &args.overrides)?;
    check_step_cap(&config, false)?;
    let mut options = SuiteOptions::default();
    if let Some(pairs) = &doc.compare_pairs {
        options.compare_pairs = pairs.iter().map(|&[a, b]| (a, b)).collect();
    }
    if args.negative_control {
        options.oracle = match config.mode {
            Mode::Randomized => CountOracle::BareLeadingTerm,
            Mode::Deterministic | Mode::Rewire => CountOracle::AllEdgeRecursion,
        };
    }
    let outcome = verify_suite(&config, &options)?;
    let report = outcome.report;

    fs::create_dir_all(&args.out).map_err(io_err(&args.out))?;
    let mut files = Vec::new();
    let text = report.to_text();
    let json = report.to_json();
    emit(&args.out, "report.txt", &text, &mut files)?;
    emit(&args.out, "report.json", &json, &mut files)?;
    files.push(MANIFEST_FILE.to_owned());
    match args.format {
        Format::Text => print!("{text}"),
        Format::Json => print!("{json}"),
    }
    let failures: Vec<_> = report.failures().collect();
    for f in &failures {
        eprintln!("FAIL {}: predicted {}, measured {} ({})", f.name, f.predicted, f.measured, f.mode);
    }
    eprintln!("{} entries, {} failed", report.entries.len(), failures.len());
    let manifest = RunManifest {
        command: "verify",
        config_path: Some(args.config.clone()),
        config: Some(config.to_doc()),
        out_dir: args.out.clone(),
        files,
        duration_ms: start.elapsed().as_millis(),
        predicted: predicted_counts(&config),
        warnings: config.warnings(),
        runs: Vec::new(),
    };
    write_manifest(&manifest)?;
    Ok(report.passed())
}

pub fn run_cli(cli: &Cli) -> Result<i32, CliError> {
    match &cli.command {
        Command::Grow(a) => cmd_grow(a).map(|_| EXIT_OK),
        Command::Stats(a) => cmd_stats(a).map(|_| EXIT_OK),
        Command::Verify(a) => cmd_verify(a).map(|ok| if ok { EXIT_OK } else { EXIT_VERIFY_FAILED }),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run_cli(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
