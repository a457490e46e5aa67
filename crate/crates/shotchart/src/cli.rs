//! Command-line interface: `fit`, `chart`, `summary`, `simulate`.
//!
//! Every command writes its outputs plus a `<output>.manifest.json` next to
//! the primary output. Outputs depend only on inputs, flags and seed.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde::Serialize;
use shotchart_core::geometry::nba_court;
use shotchart_core::rng::stream;
use shotchart_core::{
    evaluate_surface_with, fit_shot_chart_with, CourtSpec, FitConfig, FitMeta, GridSpec, Outcome,
    Scenario, ShotChartModel, SurfaceKind,
};

use crate::error::{Error, Result};
use crate::ingest::{read_shots, IngestPolicy, OnInvalid};
use crate::io::{read_court, read_model, write_model, write_text};
use crate::manifest::{manifest_path, RunManifest};
use crate::parallel::Threads;
use crate::render::{export_grid, render_chart, ChartOptions, HdrBands};
use crate::report::{summary_csv, summary_text};

#[derive(Debug, Parser)]
#[command(name = "shotchart", version, about = "Bounded Gaussian-mixture shot charts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit made and missed shot densities from a CSV of shots.
    Fit(FitArgs),
    /// Render a density, probability, expected-points or HDR chart as SVG.
    Chart(ChartArgs),
    /// Compare observed and estimated statistics for 2- and 3-point attempts.
    Summary(SummaryArgs),
    /// Sample a shot CSV from a model file or a built-in scenario.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct CourtArgs {
    /// `nba`, or `custom <FILE>` with a court spec JSON document.
    #[arg(long, num_args = 1..=2, value_names = ["KIND", "FILE"])]
    pub court: Option<Vec<String>>,
}

impl CourtArgs {
    fn resolve(&self) -> Result<Option<(CourtSpec, Option<PathBuf>)>> {
        let Some(v) = &self.court else {
            return Ok(None);
        };
        match v.as_slice() {
            [k] if k == "nba" => Ok(Some((nba_court(), None))),
            [k, file] if k == "custom" => {
                let path = PathBuf::from(file);
                Ok(Some((read_court(&path)?, Some(path))))
            }
            _ => Err(Error::Usage(format!(
                "--court expects `nba` or `custom <FILE>`, got `{}`",
                v.join(" ")
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InvalidRows {
    Skip,
    Fail,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PolicyArgs {
    /// Move rows this close outside a bound just inside it (0 disables).
    #[arg(long = "policy-clamp", value_name = "FEET", default_value_t = 1e-6)]
    pub policy_clamp: f64,
    /// Reflect shots from the far half of a full court onto the near half.
    #[arg(long)]
    pub mirror: bool,
    /// What to do with rows that cannot be used.
    #[arg(long = "on-invalid", value_enum, default_value_t = InvalidRows::Skip)]
    pub on_invalid: InvalidRows,
}

impl PolicyArgs {
    fn policy(&self) -> IngestPolicy {
        IngestPolicy {
            clamp_epsilon: self.policy_clamp,
            mirror_full_court: self.mirror,
            on_invalid: match self.on_invalid {
                InvalidRows::Skip => OnInvalid::SkipAndReport,
                InvalidRows::Fail => OnInvalid::Fail,
            },
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FitArgs {
    /// Shot CSV with columns x, y, made.
    pub shots: PathBuf,
    #[command(flatten)]
    #[serde(flatten)]
    pub court: CourtArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub policy: PolicyArgs,
    #[arg(long, default_value_t = 1)]
    pub gmin: usize,
    #[arg(long, default_value_t = 9)]
    pub gmax: usize,
    #[arg(long)]
    pub seed: u64,
    /// EM restarts per component count.
    #[arg(long, default_value_t = 10)]
    pub restarts: usize,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long = "max-iter", default_value_t = 1000)]
    pub max_iter: usize,
    /// Plain maximum likelihood instead of MAP with the default prior.
    #[arg(long = "no-prior")]
    pub no_prior: bool,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long)]
    #[serde(skip)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChartKind {
    DensityMade,
    DensityMissed,
    Probability,
    Eps,
    HdrMade,
    HdrMissed,
}

impl ChartKind {
    fn surface(self) -> SurfaceKind {
        match self {
            ChartKind::DensityMade | ChartKind::HdrMade => SurfaceKind::Density1,
            ChartKind::DensityMissed | ChartKind::HdrMissed => SurfaceKind::Density0,
            ChartKind::Probability => SurfaceKind::Probability,
            ChartKind::Eps => SurfaceKind::Eps,
        }
    }

    fn hdr_outcome(self) -> Option<Outcome> {
        match self {
            ChartKind::HdrMade => Some(Outcome::Made),
            ChartKind::HdrMissed => Some(Outcome::Missed),
            _ => None,
        }
    }

    fn title(self) -> &'static str {
        match self {
            ChartKind::DensityMade => "Made-shot density",
            ChartKind::DensityMissed => "Missed-shot density",
            ChartKind::Probability => "Estimated success probability",
            ChartKind::Eps => "Expected points per attempt",
            ChartKind::HdrMade => "Made-shot highest density regions",
            ChartKind::HdrMissed => "Missed-shot highest density regions",
        }
    }
}

/// `NXxNY`, for example `200x188`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GridSize {
    pub nx: usize,
    pub ny: usize,
}

impl FromStr for GridSize {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (a, b) = s
            .split_once(['x', 'X'])
            .ok_or_else(|| format!("expected NXxNY, got `{s}`"))?;
        let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("`{t}`: {e}"));
        Ok(GridSize {
            nx: parse(a)?,
            ny: parse(b)?,
        })
    }
}

impl std::fmt::Display for GridSize {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.nx, self.ny)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ChartArgs {
    /// Model JSON written by `fit`.
    pub model: PathBuf,
    #[arg(long, value_enum)]
    pub kind: ChartKind,
    #[arg(long, default_value = "200x188")]
    pub grid: GridSize,
    /// HDR coverage percentages, ascending.
    #[arg(long, value_delimiter = ',', default_value = "25,50,75,95")]
    pub levels: Vec<f64>,
    /// Monte Carlo draws for HDR thresholds.
    #[arg(long, default_value_t = 100_000)]
    pub mc: usize,
    /// Seed for the HDR Monte Carlo draws.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub title: Option<String>,
    /// Also write the evaluated grid as CSV.
    #[arg(long = "grid-csv")]
    pub grid_csv: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SummaryArgs {
    pub model: PathBuf,
    pub shots: PathBuf,
    /// Court of the shot file; defaults to the model's court and must match it.
    #[command(flatten)]
    #[serde(flatten)]
    pub court: CourtArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub policy: PolicyArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    /// Model JSON, or one of the built-in scenarios: two-cluster,
    /// three-cluster, ring.
    pub source: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

fn options_json<T: Serialize>(args: &T) -> serde_json::Value {
    serde_json::to_value(args).expect("options serialize")
}

fn report_diagnostics(diags: &[crate::ingest::Diagnostic]) {
    for d in diags {
        eprintln!("{d}");
    }
}

/// Runs a parsed command. `argv` (without the program name) is recorded in
/// the manifest; `out` receives the human-readable report.
pub fn run(cli: &Cli, argv: &[String], out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Fit(a) => cmd_fit(a, argv, out),
        Command::Chart(a) => cmd_chart(a, argv, out),
        Command::Summary(a) => cmd_summary(a, argv, out),
        Command::Simulate(a) => cmd_simulate(a, argv, out),
    }
}

/// Parses `argv` (without the program name) and runs it.
pub fn run_args(argv: &[String], out: &mut dyn Write) -> Result<()> {
    let cli = Cli::try_parse_from(std::iter::once("shotchart".to_string()).chain(argv.iter().cloned()))
        .map_err(|e| Error::Usage(e.to_string()))?;
    run(&cli, argv, out)
}

fn print(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| Error::io("<stdout>", e))
}

fn fit_line(name: &str, m: Option<&FitMeta>) -> String {
    match m {
        Some(m) => format!(
            "{name}: G={} BIC={:?} loglik={:?} n={} iterations={} converged={}\n",
            m.n_components, m.bic, m.loglik_at_map, m.n_obs, m.n_iter, m.converged
        ),
        None => format!("{name}: no fit metadata\n"),
    }
}

pub fn cmd_fit(a: &FitArgs, argv: &[String], out: &mut dyn Write) -> Result<()> {
    let (court, court_file) = a.court.resolve()?.unwrap_or((nba_court(), None));
    if a.gmin == 0 || a.gmin > a.gmax {
        return Err(Error::Usage(format!("invalid component range {}..{}", a.gmin, a.gmax)));
    }
    let (data, diags) = read_shots(&a.shots, &court, &a.policy.policy())?;
    report_diagnostics(&diags);
    let config = FitConfig {
        tol: a.tol,
        max_iter: a.max_iter,
        n_restarts: a.restarts,
        seed: a.seed,
        prior_enabled: !a.no_prior,
    };
    let threads = Threads::new(a.jobs)?;
    let model = fit_shot_chart_with(&threads, &data, a.gmin..=a.gmax, &config)?;
    write_model(&a.out, &model)?;

    let mut text = fit_line("made", model.made_fit());
    text += &fit_line("missed", model.missed_fit());
    text += &format!(
        "tau_made={:?} tau_missed={:?} shots={} skipped={}\n",
        model.tau_made(),
        model.tau_missed(),
        data.len(),
        diags.iter().filter(|d| d.reason.is_skip()).count()
    );
    print(out, &text)?;

    let mut m = RunManifest::new("fit", argv, options_json(a), Some(a.seed));
    m.input(&a.shots)?;
    if let Some(f) = court_file {
        m.input(&f)?;
    }
    m.output(&a.out)?;
    m.write(&manifest_path(&a.out))
}

fn check_levels(levels: &[f64]) -> Result<Vec<f64>> {
    if levels.is_empty() {
        return Err(Error::Usage("--levels needs at least one value".into()));
    }
    if levels.iter().any(|l| !(*l > 0.0 && *l <= 100.0)) {
        return Err(Error::Usage("HDR levels are percentages in (0, 100]".into()));
    }
    if levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Usage("HDR levels must be strictly ascending".into()));
    }
    Ok(levels.iter().map(|l| l / 100.0).collect())
}

pub fn cmd_chart(a: &ChartArgs, argv: &[String], out: &mut dyn Write) -> Result<()> {
    let model = read_model(&a.model)?;
    let grid = GridSpec::new(a.grid.nx, a.grid.ny, model.court())?;
    let threads = Threads::new(a.jobs)?;
    let surface = evaluate_surface_with(&threads, &model, &grid, a.kind.surface())?;
    let hdr = match a.kind.hdr_outcome() {
        Some(outcome) => {
            let levels = check_levels(&a.levels)?;
            let thresholds = model.hdr_thresholds(outcome, &levels, a.mc, a.seed)?;
            Some(HdrBands { levels, thresholds })
        }
        None => None,
    };
    let options = ChartOptions {
        title: Some(a.title.clone().unwrap_or_else(|| a.kind.title().to_string())),
        hdr,
    };
    render_chart(&surface, model.court(), &options, &a.out)?;
    if let Some(p) = &a.grid_csv {
        export_grid(&surface, p)?;
    }
    print(
        out,
        &format!(
            "{}: {} cells, min={:?} max={:?}\n",
            a.out.display(),
            grid.len(),
            surface.min(),
            surface.max()
        ),
    )?;

    let seed = a.kind.hdr_outcome().map(|_| a.seed);
    let mut m = RunManifest::new("chart", argv, options_json(a), seed);
    m.input(&a.model)?;
    m.output(&a.out)?;
    if let Some(p) = &a.grid_csv {
        m.output(p)?;
    }
    m.write(&manifest_path(&a.out))
}

pub fn cmd_summary(a: &SummaryArgs, argv: &[String], out: &mut dyn Write) -> Result<()> {
    let model = read_model(&a.model)?;
    let (court, court_file) = a.court.resolve()?.unwrap_or((*model.court(), None));
    if court != *model.court() {
        return Err(Error::Usage("the shot court does not match the model's court".into()));
    }
    let (data, diags) = read_shots(&a.shots, &court, &a.policy.policy())?;
    report_diagnostics(&diags);
    let table = model.summarize(&data)?;
    write_text(&a.out, &summary_csv(&table))?;
    print(out, &summary_text(&table))?;

    let mut m = RunManifest::new("summary", argv, options_json(a), None);
    m.input(&a.model)?;
    m.input(&a.shots)?;
    if let Some(f) = court_file {
        m.input(&f)?;
    }
    m.output(&a.out)?;
    m.write(&manifest_path(&a.out))
}

/// Draws `n` shots: outcomes by `τ₁`, then locations from the class mixtures.
/// Each of the three steps uses its own stream derived from `seed`.
pub fn simulate_shots(model: &ShotChartModel, n: usize, seed: u64) -> Vec<(f64, f64, bool)> {
    let mut r = stream(seed, &[0]);
    let tau = model.tau_made();
    let made: Vec<bool> = (0..n).map(|_| r.random::<f64>() < tau).collect();
    let n_made = made.iter().filter(|m| **m).count();
    let pts_made = model.made_model().sample_with(n_made, &mut stream(seed, &[1]));
    let pts_missed = model
        .missed_model()
        .sample_with(n - n_made, &mut stream(seed, &[2]));
    let (mut a, mut b) = (pts_made.into_iter(), pts_missed.into_iter());
    made.into_iter()
        .map(|m| {
            let p = if m { a.next() } else { b.next() }.expect("class sizes match");
            (p.x, p.y, m)
        })
        .collect()
}

pub fn shots_csv(shots: &[(f64, f64, bool)]) -> String {
    let mut s = String::with_capacity(shots.len() * 40 + 16);
    s.push_str("x,y,made\n");
    for (x, y, m) in shots {
        s.push_str(&format!("{x:?},{y:?},{}\n", u8::from(*m)));
    }
    s
}

pub fn cmd_simulate(a: &SimulateArgs, argv: &[String], out: &mut dyn Write) -> Result<()> {
    if a.n == 0 {
        return Err(Error::Usage("--n must be at least 1".into()));
    }
    let (model, input) = match Scenario::from_name(&a.source) {
        Some(s) => (s.model(), None),
        None => {
            let path = Path::new(&a.source);
            if !path.is_file() {
                return Err(Error::Usage(format!(
                    "`{}` is neither a model file nor a scenario (two-cluster, three-cluster, ring)",
                    a.source
                )));
            }
            (read_model(path)?, Some(path.to_path_buf()))
        }
    };
    let shots = simulate_shots(&model, a.n, a.seed);
    write_text(&a.out, &shots_csv(&shots))?;
    let made = shots.iter().filter(|s| s.2).count();
    print(out, &format!("{}: {} shots, {} made\n", a.out.display(), a.n, made))?;

    let mut m = RunManifest::new("simulate", argv, options_json(a), Some(a.seed));
    if let Some(p) = input {
        m.input(&p)?;
    }
    m.output(&a.out)?;
    m.write(&manifest_path(&a.out))
}
