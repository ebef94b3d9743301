//! Command-line front end for `ifm-core`.
//!
//! Each subcommand writes one machine-readable artifact: CSV for curves,
//! JSON for scalar reports. Settings come from built-in defaults (the
//! reference slit: w = 1000λ, b = 500λ, l₂ = 6·10⁶λ), then an optional
//! `--config` file, then flags.
//!
//! Exit status: 0 on success, 1 on I/O or numerical failure, 2 on usage or
//! configuration errors, 3 when `--strict` is set and a numerical warning was
//! raised.

pub mod config;
pub mod io;

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use ifm_core::inference::{eta_tilde, optimal_outcome_probabilities, posterior_table};
use ifm_core::momentum::{kick_statistics, momentum_pattern};
use ifm_core::montecarlo::{run_trials, summarize, ExperimentConfig};
use ifm_core::screen::{pattern, DEFAULT_BIN_WIDTH};
use ifm_core::zeno::{apodized_slit_state, zeno_run, zeno_sweep, GridSpec, DESK_SCALE_SWEEP};
use ifm_core::{
    ApparatusGeometry, ClassifierConfig, LikelihoodMode, Normalization, SlitHypothesis, Warning, Window, ZenoConfig,
};
use serde::Serialize;

pub use config::RunConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] ifm_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed file: {0}")]
    Format(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }
}

fn invalid(e: ifm_core::Error) -> CliError {
    CliError::Config(e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "ifm", version, about = "Diffraction-based interaction-free measurement simulator")]
pub struct Cli {
    /// JSON or TOML run configuration; flags override its values.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Exit with status 3 if any numerical warning is raised.
    #[arg(long, global = true)]
    pub strict: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Screen patterns of both hypotheses (CSV).
    Pattern(PatternArgs),
    /// Posterior P(Bomb | x₂) per screen bin (CSV).
    Posterior(PosteriorArgs),
    /// Threshold-based IFM efficiency η̃ (JSON).
    Efficiency(EfficiencyArgs),
    /// Efficiency and outcome probabilities of the optimal measurement (JSON).
    Optimal(OptimalArgs),
    /// Transverse-momentum distributions (CSV), optionally kick statistics (JSON).
    Momentum(MomentumArgs),
    /// Monte Carlo classification experiment (JSON report, optional trial log).
    Classify(ClassifyArgs),
    /// Absorption under repeated bomb checks during propagation (CSV).
    Zeno(ZenoArgs),
}

#[derive(Debug, Clone, Args)]
pub struct GeometryArgs {
    /// Slit width in wavelengths.
    #[arg(long)]
    pub w: Option<f64>,
    /// Bomb length in wavelengths.
    #[arg(long)]
    pub b: Option<f64>,
    /// Slit-to-screen distance in wavelengths.
    #[arg(long)]
    pub l2: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct ScreenArgs {
    /// Window lower edge on the screen (wavelengths).
    #[arg(long, allow_hyphen_values = true)]
    pub x_lo: Option<f64>,
    /// Window upper edge on the screen (wavelengths).
    #[arg(long, allow_hyphen_values = true)]
    pub x_hi: Option<f64>,
    /// Bin width (wavelengths).
    #[arg(long)]
    pub bin_width: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct ClassifierArgs {
    /// Posterior threshold T for a conclusive verdict.
    #[arg(short = 'T', long = "threshold")]
    pub threshold: Option<f64>,
    /// Prior probability that the bomb is present.
    #[arg(long)]
    pub prior: Option<f64>,
    /// Normalization of the bomb-case likelihood.
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    FluxAware,
    UnitNormalized,
}

impl From<ModeArg> for LikelihoodMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::FluxAware => LikelihoodMode::FluxAware,
            ModeArg::UnitNormalized => LikelihoodMode::UnitNormalized,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HypothesisArg {
    Both,
    NoBomb,
    Bomb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormalizationArg {
    /// Both curves divided by the no-bomb peak (the figure convention).
    Figure,
    PeakOne,
    UnitMass,
    FluxMass,
}

impl From<NormalizationArg> for Normalization {
    fn from(n: NormalizationArg) -> Self {
        match n {
            NormalizationArg::Figure => Normalization::RelativeToNoBombPeak,
            NormalizationArg::PeakOne => Normalization::PeakOne,
            NormalizationArg::UnitMass => Normalization::UnitMass,
            NormalizationArg::FluxMass => Normalization::FluxMass,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct PatternArgs {
    #[command(flatten)]
    pub geometry: GeometryArgs,
    #[command(flatten)]
    pub screen: ScreenArgs,
    /// Which hypothesis to write; `both` writes two density columns.
    #[arg(long, value_enum, default_value = "both")]
    pub hypothesis: HypothesisArg,
    #[arg(long, value_enum, default_value = "figure")]
    pub normalization: NormalizationArg,
    /// Output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PosteriorArgs {
    #[command(flatten)]
    pub geometry: GeometryArgs,
    #[command(flatten)]
    pub screen: ScreenArgs,
    #[command(flatten)]
    pub classifier: ClassifierArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EfficiencyArgs {
    #[command(flatten)]
    pub geometry: GeometryArgs,
    #[command(flatten)]
    pub screen: ScreenArgs,
    #[command(flatten)]
    pub classifier: ClassifierArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct OptimalArgs {
    /// Bomb-to-slit ratio b/w (default: from the geometry).
    #[arg(long)]
    pub ratio: Option<f64>,
    #[command(flatten)]
    pub geometry: GeometryArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct MomentumArgs {
    #[command(flatten)]
    pub geometry: GeometryArgs,
    /// Window lower edge in units of k₀.
    #[arg(long, allow_hyphen_values = true)]
    pub k_lo: Option<f64>,
    /// Window upper edge in units of k₀.
    #[arg(long, allow_hyphen_values = true)]
    pub k_hi: Option<f64>,
    /// Bin width in units of k₀.
    #[arg(long)]
    pub bin_width: Option<f64>,
    #[arg(long, value_enum, default_value = "both")]
    pub hypothesis: HypothesisArg,
    #[arg(long, value_enum, default_value = "figure")]
    pub normalization: NormalizationArg,
    /// Kick threshold in units of k₀ (default λ/w, the first no-bomb zero).
    #[arg(long)]
    pub kc: Option<f64>,
    /// Also write kick statistics (JSON) here.
    #[arg(long)]
    pub kicks_out: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub geometry: GeometryArgs,
    #[command(flatten)]
    pub screen: ScreenArgs,
    #[command(flatten)]
    pub classifier: ClassifierArgs,
    /// Number of slits holding a bomb.
    #[arg(long)]
    pub n_bomb: Option<u64>,
    /// Number of empty slits.
    #[arg(long)]
    pub n_empty: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Per-trial CSV log.
    #[arg(long)]
    pub trials_out: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ZenoArgs {
    /// Slit width in wavelengths (default 64).
    #[arg(long)]
    pub w: Option<f64>,
    /// Bomb length in wavelengths (default 8).
    #[arg(long)]
    pub b: Option<f64>,
    /// Total propagation distance across the bomb, in wavelengths (default 32).
    #[arg(long)]
    pub total_distance: Option<f64>,
    /// Numbers of checks, ascending (default 1,2,4,8,16,32).
    #[arg(long, value_delimiter = ',')]
    pub n_values: Option<Vec<usize>>,
    /// Grid points, a power of two (default 4096).
    #[arg(long)]
    pub grid_points: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub x_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x_max: Option<f64>,
    /// Raised-cosine edge width of the initial state (default 2).
    #[arg(long)]
    pub edge_width: Option<f64>,
    /// Survival curve (CSV) for the largest number of checks.
    #[arg(long)]
    pub survival_out: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the subcommand;
/// returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(warnings) => {
            for w in &warnings {
                eprintln!("warning: {w}");
            }
            if cli.strict && !warnings.is_empty() {
                3
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs the parsed command and returns the warnings it raised.
pub fn execute(cli: &Cli) -> Result<Vec<Warning>, CliError> {
    let file = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let mut warnings = Vec::new();
    match &cli.command {
        Command::Pattern(a) => cmd_pattern(a, &file, &mut warnings)?,
        Command::Posterior(a) => cmd_posterior(a, &file, &mut warnings)?,
        Command::Efficiency(a) => cmd_efficiency(a, &file, &mut warnings)?,
        Command::Optimal(a) => cmd_optimal(a, &file)?,
        Command::Momentum(a) => cmd_momentum(a, &file, &mut warnings)?,
        Command::Classify(a) => cmd_classify(a, &file, &mut warnings)?,
        Command::Zeno(a) => cmd_zeno(a, &file, &mut warnings)?,
    }
    let mut unique: Vec<Warning> = Vec::new();
    for w in warnings {
        if !unique.contains(&w) {
            unique.push(w);
        }
    }
    Ok(unique)
}

fn geometry(a: &GeometryArgs, file: &RunConfig, warnings: &mut Vec<Warning>) -> Result<ApparatusGeometry, CliError> {
    let d = ApparatusGeometry::reference();
    let g = ApparatusGeometry::new(
        a.w.or(file.geometry.w).unwrap_or(d.w()),
        a.b.or(file.geometry.b).unwrap_or(d.b()),
        a.l2.or(file.geometry.l2).unwrap_or(d.l2()),
    )
    .map_err(invalid)?;
    warnings.extend(g.diagnostics());
    Ok(g)
}

fn screen(a: &ScreenArgs, file: &RunConfig) -> Result<(Window, f64), CliError> {
    let d = Window::default();
    let [flo, fhi] = file.screen.window.unwrap_or([d.lo, d.hi]);
    let window = Window::new(a.x_lo.unwrap_or(flo), a.x_hi.unwrap_or(fhi)).map_err(invalid)?;
    let bin_width = a.bin_width.or(file.screen.bin_width).unwrap_or(DEFAULT_BIN_WIDTH);
    window.bin_count(bin_width).map_err(invalid)?;
    Ok((window, bin_width))
}

fn classifier(a: &ClassifierArgs, file: &RunConfig) -> Result<ClassifierConfig, CliError> {
    let d = ClassifierConfig::default();
    ClassifierConfig::new(
        a.prior.or(file.classifier.prior).unwrap_or(d.prior_bomb()),
        a.threshold.or(file.classifier.threshold).unwrap_or(d.threshold()),
        a.mode.map(Into::into).or(file.classifier.mode).unwrap_or(d.likelihood_mode()),
    )
    .map_err(invalid)
}

/// Opens `flag`, else the configured path, else stdout.
fn sink(flag: &Option<PathBuf>, configured: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    match flag.as_ref().or(configured.as_ref()) {
        Some(path) => Ok(Box::new(BufWriter::new(create(path)?))),
        None => Ok(Box::new(std::io::stdout().lock())),
    }
}

fn create(path: &Path) -> Result<File, CliError> {
    File::create(path).map_err(|e| CliError::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn finish(mut out: Box<dyn Write>) -> Result<(), CliError> {
    out.flush()?;
    Ok(())
}

fn cmd_pattern(a: &PatternArgs, file: &RunConfig, warnings: &mut Vec<Warning>) -> Result<(), CliError> {
    let g = geometry(&a.geometry, file, warnings)?;
    let (window, bw) = screen(&a.screen, file)?;
    let norm: Normalization = a.normalization.into();
    let out = sink(&a.out, &file.output.pattern)?;
    match a.hypothesis {
        HypothesisArg::Both => {
            let none = pattern(SlitHypothesis::NoBomb, &g, window, bw, norm)?;
            let bomb = pattern(SlitHypothesis::Bomb, &g, window, bw, norm)?;
            warnings.extend(none.warnings);
            warnings.extend(bomb.warnings);
            io::write_pattern_pair(out, &none.value, &bomb.value)
        }
        HypothesisArg::NoBomb | HypothesisArg::Bomb => {
            let h = if a.hypothesis == HypothesisArg::Bomb { SlitHypothesis::Bomb } else { SlitHypothesis::NoBomb };
            let p = pattern(h, &g, window, bw, norm)?;
            warnings.extend(p.warnings);
            io::write_pattern(out, &p.value)
        }
    }
}

fn cmd_posterior(a: &PosteriorArgs, file: &RunConfig, warnings: &mut Vec<Warning>) -> Result<(), CliError> {
    let g = geometry(&a.geometry, file, warnings)?;
    let (window, bw) = screen(&a.screen, file)?;
    let cfg = classifier(&a.classifier, file)?;
    let table = posterior_table(&g, cfg.prior_bomb(), cfg.likelihood_mode(), window, bw)?;
    let mut out = sink(&a.out, &file.output.posterior)?;
    io::write_posterior(&mut out, window, bw, &table)?;
    finish(out)
}

fn cmd_efficiency(a: &EfficiencyArgs, file: &RunConfig, warnings: &mut Vec<Warning>) -> Result<(), CliError> {
    let g = geometry(&a.geometry, file, warnings)?;
    let (window, bw) = screen(&a.screen, file)?;
    let cfg = classifier(&a.classifier, file)?;
    let report = eta_tilde(&g, &cfg, window, bw)?;
    warnings.extend(report.warnings);
    let mut out = sink(&a.out, &file.output.efficiency)?;
    io::write_json(&mut out, &report.value)?;
    finish(out)
}

#[derive(Serialize)]
struct OptimalReport {
    ratio: f64,
    eta: f64,
    p_bright: f64,
    p_dark: f64,
    p_explosion: f64,
    p_bright_given_survival: f64,
    p_dark_given_survival: f64,
}

fn cmd_optimal(a: &OptimalArgs, file: &RunConfig) -> Result<(), CliError> {
    let ratio = match a.ratio.or(file.optimal.ratio) {
        Some(r) => r,
        None => geometry(&a.geometry, file, &mut Vec::new())?.ratio(),
    };
    let o = optimal_outcome_probabilities(ratio).map_err(invalid)?;
    let report = OptimalReport {
        ratio,
        eta: o.eta(),
        p_bright: o.p_bright,
        p_dark: o.p_dark,
        p_explosion: o.p_explosion,
        p_bright_given_survival: o.p_bright_given_survival,
        p_dark_given_survival: o.p_dark_given_survival,
    };
    let mut out = sink(&a.out, &file.output.optimal)?;
    io::write_json(&mut out, &report)?;
    finish(out)
}

/// Default momentum window: ±0.2 k₀ (two hundred no-bomb zeros for the
/// reference slit) in 10⁻⁵ k₀ bins.
const MOMENTUM_HALF_WIDTH: f64 = 0.2;
const MOMENTUM_BIN_WIDTH: f64 = 1e-5;

fn cmd_momentum(a: &MomentumArgs, file: &RunConfig, warnings: &mut Vec<Warning>) -> Result<(), CliError> {
    let g = geometry(&a.geometry, file, warnings)?;
    let [flo, fhi] = file.momentum.window.unwrap_or([-MOMENTUM_HALF_WIDTH, MOMENTUM_HALF_WIDTH]);
    let window = Window::new(a.k_lo.unwrap_or(flo), a.k_hi.unwrap_or(fhi)).map_err(invalid)?;
    let bw = a.bin_width.or(file.momentum.bin_width).unwrap_or(MOMENTUM_BIN_WIDTH);
    window.bin_count(bw).map_err(invalid)?;
    let norm: Normalization = a.normalization.into();
    let out = sink(&a.out, &file.output.momentum)?;
    match a.hypothesis {
        HypothesisArg::Both => {
            let none = momentum_pattern(SlitHypothesis::NoBomb, &g, window, bw, norm)?;
            let bomb = momentum_pattern(SlitHypothesis::Bomb, &g, window, bw, norm)?;
            warnings.extend(none.warnings);
            warnings.extend(bomb.warnings);
            io::write_pattern_pair(out, &none.value, &bomb.value)?;
        }
        HypothesisArg::NoBomb | HypothesisArg::Bomb => {
            let h = if a.hypothesis == HypothesisArg::Bomb { SlitHypothesis::Bomb } else { SlitHypothesis::NoBomb };
            let p = momentum_pattern(h, &g, window, bw, norm)?;
            warnings.extend(p.warnings);
            io::write_pattern(out, &p.value)?;
        }
    }
    if let Some(path) = a.kicks_out.as_ref().or(file.output.kicks.as_ref()) {
        let kc = a.kc.or(file.momentum.kc).unwrap_or(1.0 / g.w());
        let stats = kick_statistics(&g, kc * g.k0()).map_err(invalid)?;
        let mut out = BufWriter::new(create(path)?);
        io::write_json(&mut out, &stats)?;
        out.flush()?;
    }
    Ok(())
}

fn cmd_classify(a: &ClassifyArgs, file: &RunConfig, warnings: &mut Vec<Warning>) -> Result<(), CliError> {
    let g = geometry(&a.geometry, file, warnings)?;
    let (window, bin_width) = screen(&a.screen, file)?;
    let classifier = classifier(&a.classifier, file)?;
    let d = ExperimentConfig::default();
    let config = ExperimentConfig {
        geometry: g,
        classifier,
        window,
        bin_width,
        n_bomb: a.n_bomb.or(file.experiment.n_bomb).unwrap_or(d.n_bomb),
        n_empty: a.n_empty.or(file.experiment.n_empty).unwrap_or(d.n_empty),
    };
    let seed = a.seed.or(file.experiment.seed).unwrap_or(0);
    let records = run_trials(&config, seed)?;
    warnings.extend(records.warnings);
    let report = summarize(&config, seed, &records.value);
    let mut out = sink(&a.out, &file.output.classify)?;
    io::write_json(&mut out, &report)?;
    finish(out)?;
    if let Some(path) = a.trials_out.as_ref().or(file.output.trials.as_ref()) {
        let mut out = BufWriter::new(create(path)?);
        io::write_trials(&mut out, &records.value)?;
        out.flush()?;
    }
    Ok(())
}

fn cmd_zeno(a: &ZenoArgs, file: &RunConfig, warnings: &mut Vec<Warning>) -> Result<(), CliError> {
    let z = &file.zeno;
    let d = ZenoConfig::desk_scale();
    let (dg, dgrid) = (d.geometry(), d.grid());
    let g = ApparatusGeometry::new(
        a.w.or(z.w).unwrap_or(dg.w()),
        a.b.or(z.b).unwrap_or(dg.b()),
        // the screen distance plays no role here
        dg.l2(),
    )
    .map_err(invalid)?;
    let grid = GridSpec {
        x_min: a.x_min.or(z.x_min).unwrap_or(dgrid.x_min),
        x_max: a.x_max.or(z.x_max).unwrap_or(dgrid.x_max),
        n: a.grid_points.or(z.grid_points).unwrap_or(dgrid.n),
    };
    let total = a.total_distance.or(z.total_distance).unwrap_or(d.total_distance());
    let cfg = ZenoConfig::new(grid, g, total, 1, d.guard()).map_err(invalid)?;
    let n_values = a.n_values.clone().or_else(|| z.n_values.clone()).unwrap_or_else(|| DESK_SCALE_SWEEP.to_vec());
    if n_values.is_empty() || n_values.contains(&0) || n_values.windows(2).any(|w| w[0] > w[1]) {
        return Err(CliError::Config("n_values must be positive and ascending".into()));
    }
    let edge = a.edge_width.or(z.edge_width).unwrap_or(2.0);
    let psi0 = apodized_slit_state(SlitHypothesis::Bomb, &g, grid, edge).map_err(invalid)?;
    let rows = zeno_sweep(&psi0, &cfg, &n_values)?;
    warnings.extend(rows.warnings);
    let mut out = sink(&a.out, &file.output.zeno)?;
    io::write_zeno_sweep(&mut out, &rows.value)?;
    finish(out)?;
    if let Some(path) = a.survival_out.as_ref().or(file.output.survival.as_ref()) {
        let n_max = *n_values.last().expect("non-empty");
        let run = zeno_run(&psi0, &cfg.with_measurements(n_max).map_err(invalid)?)?;
        let mut out = BufWriter::new(create(path)?);
        io::write_survival(&mut out, &run.value.survival_curve)?;
        out.flush()?;
    }
    Ok(())
}
