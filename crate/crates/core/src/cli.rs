//! Command-line driver. Exit codes: 0 pass, 1 statistical failure, 2
//! configuration or usage error.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::garch_sim::simulate_path;
use crate::innovations::{validate_spec, InnovationSpec, RngStream};
use crate::localization::{realize_params, GarchParams, LocalizationScheme, Regime};
use crate::mc_harness::{run_experiment_full, run_n_sweep, HarnessError, McConfig, TestKind};
use crate::statistics::{CheckpointGrid, NormalizationMode};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("malformed config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Harness(#[from] HarnessError),
}

#[derive(Debug, Parser)]
#[command(name = "mildgarch", version, about = "Simulate and verify GARCH(1,1) limit laws near the integrated boundary")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write simulated paths as CSV, one file per replication.
    Simulate(CommonArgs),
    /// Run the enabled tests and write a JSON report.
    Verify(CommonArgs),
    /// Write remainder, decomposition, τ, lemma and QQ diagnostics.
    Diagnose(CommonArgs),
    /// Run the tests over the config's n-grid and check trends.
    Sweep(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long)]
    pub mode: Option<NormalizationMode>,
    #[arg(long)]
    pub level: Option<f64>,
    /// Shift every volatility statistic by +1 (self-test of the failure path).
    #[arg(long)]
    pub corrupt_centering: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub n: usize,
    pub reps: usize,
    pub master_seed: u64,
    #[serde(default = "default_mode")]
    pub mode: NormalizationMode,
    #[serde(default)]
    pub tests: BTreeSet<TestKind>,
    #[serde(default = "default_level")]
    pub level: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_grid: Option<Vec<usize>>,
}

fn default_mode() -> NormalizationMode {
    NormalizationMode::Classical
}

fn default_level() -> f64 {
    crate::gof::DEFAULT_LEVEL
}

/// Fixed `(α, β)` overriding the localization scheme; `simulate` only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedParams {
    pub alpha: f64,
    pub beta: f64,
}

/// The JSON config document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentFile {
    pub scheme: LocalizationScheme,
    pub innovation: InnovationSpec,
    pub grid: CheckpointGrid,
    pub run: RunSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed: Option<FixedParams>,
}

impl ExperimentFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_owned(),
            source,
        })?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn to_mc_config(&self, args: &CommonArgs) -> McConfig {
        McConfig {
            scheme: self.scheme,
            innovation: self.innovation,
            n: self.run.n,
            grid: self.grid.clone(),
            reps: args.reps.unwrap_or(self.run.reps),
            master_seed: args.seed.unwrap_or(self.run.master_seed),
            mode: args.mode.unwrap_or(self.run.mode),
            tests: self.run.tests.clone(),
            level: args.level.unwrap_or(self.run.level),
            corrupt_centering: args.corrupt_centering,
        }
    }
}

/// A loaded config plus where to write and the flag overrides.
#[derive(Debug, Clone)]
pub struct ExperimentManifest {
    pub file: ExperimentFile,
    pub out: PathBuf,
    pub args: CommonArgs,
}

impl ExperimentManifest {
    pub fn load(args: &CommonArgs) -> Result<Self, CliError> {
        let file = ExperimentFile::load(&args.config)?;
        fs::create_dir_all(&args.out).map_err(|source| CliError::Write {
            path: args.out.clone(),
            source,
        })?;
        Ok(Self {
            file,
            out: args.out.clone(),
            args: args.clone(),
        })
    }

    pub fn config(&self) -> McConfig {
        self.file.to_mc_config(&self.args)
    }

    fn write(&self, name: &str, contents: &str) -> Result<PathBuf, CliError> {
        let path = self.out.join(name);
        fs::write(&path, contents).map_err(|source| CliError::Write {
            path: path.clone(),
            source,
        })?;
        Ok(path)
    }
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn simulation_params(file: &ExperimentFile) -> Result<GarchParams, CliError> {
    let n = file.run.n;
    match file.fixed {
        None => Ok(realize_params(&file.scheme, n).map_err(HarnessError::from)?),
        Some(FixedParams { alpha, beta }) => {
            if !(alpha >= 0.0 && beta >= 0.0 && alpha.is_finite() && beta.is_finite()) {
                return Err(CliError::Invalid(format!("fixed alpha, beta must be finite and >= 0, got {alpha}, {beta}")));
            }
            if n < 2 {
                return Err(CliError::Invalid(format!("n = {n} < 2")));
            }
            file.scheme.validate().map_err(HarnessError::from)?;
            Ok(GarchParams {
                n,
                alpha_n: alpha,
                beta_n: beta,
                gamma_n: alpha + beta - 1.0,
                omega: file.scheme.omega,
                sigma0_sq: file.scheme.sigma0_sq,
            })
        }
    }
}

pub fn cmd_simulate(m: &ExperimentManifest) -> Result<i32, CliError> {
    let config = m.config();
    validate_spec(config.innovation).map_err(HarnessError::from)?;
    let params = simulation_params(&m.file)?;
    if config.reps == 0 {
        return Err(CliError::Invalid("reps must be >= 1".into()));
    }
    for i in 0..config.reps as u64 {
        let stream = RngStream::new(config.master_seed, i);
        let path = simulate_path(&params, &config.innovation, stream);
        let mut out = format!(
            "# master_seed={}, stream_index={}\nt,eps,u,sigma_sq,log_sigma_sq\n",
            stream.master_seed, stream.stream_index
        );
        for t in 0..=path.n {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                t,
                num(path.eps[t]),
                num(path.u[t]),
                num(path.sigma_sq[t]),
                num(path.log_sigma_sq[t])
            );
        }
        m.write(&format!("path_{i:05}.csv"), &out)?;
    }
    println!("wrote {} path file(s) to {}", config.reps, m.out.display());
    Ok(EXIT_PASS)
}

fn timing_json(elapsed_secs: f64) -> String {
    format!("{{\n  \"elapsed_secs\": {elapsed_secs}\n}}\n")
}

fn print_verdicts(report: &crate::mc_harness::McReport) {
    for t in &report.tests {
        println!("{:<14} {}", serde_json::to_string(&t.test).unwrap_or_default().trim_matches('"'), if t.pass { "pass" } else { "FAIL" });
    }
}

pub fn cmd_verify(m: &ExperimentManifest) -> Result<i32, CliError> {
    let config = m.config();
    if config.mode == NormalizationMode::Literal {
        return Err(CliError::Invalid(
            "verify runs classical mode only; literal statistics are diagnostic (use diagnose)".into(),
        ));
    }
    if let Some(grid) = &m.file.run.n_grid {
        return run_sweep(m, &config, grid);
    }
    let run = run_experiment_full(&config)?;
    m.write("report.json", &run.report.to_json())?;
    m.write("stats.csv", &run.stats_csv())?;
    m.write("timing.json", &timing_json(run.elapsed.as_secs_f64()))?;
    print_verdicts(&run.report);
    Ok(if run.report.pass { EXIT_PASS } else { EXIT_FAIL })
}

fn run_sweep(m: &ExperimentManifest, config: &McConfig, grid: &[usize]) -> Result<i32, CliError> {
    let start = Instant::now();
    let sweep = run_n_sweep(config, grid)?;
    m.write("sweep.json", &sweep.to_json())?;
    m.write("timing.json", &timing_json(start.elapsed().as_secs_f64()))?;
    for t in &sweep.trends {
        println!("{:<18} {:?} {}", t.name, t.values, if t.pass { "pass" } else { "FAIL" });
    }
    Ok(if sweep.pass { EXIT_PASS } else { EXIT_FAIL })
}

pub fn cmd_sweep(m: &ExperimentManifest) -> Result<i32, CliError> {
    let config = m.config();
    let grid = m
        .file
        .run
        .n_grid
        .clone()
        .ok_or_else(|| CliError::Invalid("sweep needs run.n_grid in the config".into()))?;
    run_sweep(m, &config, &grid)
}

/// Diagnostics always include remainders, plus the lemma (near-explosive) or
/// τ coupling (near-stationary). Distributional tests are dropped so literal
/// mode is accepted.
pub fn cmd_diagnose(m: &ExperimentManifest) -> Result<i32, CliError> {
    let mut config = m.config();
    let mut tests: BTreeSet<TestKind> = BTreeSet::from([TestKind::Remainders]);
    match config.scheme.regime() {
        Regime::NearExplosive => {
            tests.insert(TestKind::Lemma);
        }
        Regime::NearStationary => {
            tests.insert(TestKind::TauCoupling);
        }
        Regime::Integrated => {}
    }
    config.tests = tests;
    let run = run_experiment_full(&config)?;
    m.write("diagnose.json", &run.report.to_json())?;
    m.write("remainders.csv", &run.remainders_csv())?;
    m.write("decomposition.csv", &run.decomposition_csv())?;
    m.write("qq.csv", &run.qq_csv())?;
    m.write("stats.csv", &run.stats_csv())?;
    if config.tests.contains(&TestKind::TauCoupling) {
        m.write("tau.csv", &run.tau_csv())?;
    }
    if config.tests.contains(&TestKind::Lemma) {
        m.write("lemma.csv", &run.lemma_csv())?;
    }
    if let Some(grid) = &m.file.run.n_grid {
        let sweep = run_n_sweep(&config, grid)?;
        let mut out = String::from("n,t_m,k_m,lemma_mean,tau_coupling_mean,r2_scaled,r3_scaled\n");
        for r in &sweep.reports {
            let rem = r.remainders().unwrap_or_default();
            for (m_idx, cp) in r.checkpoints.iter().enumerate() {
                let per_cp = |test| match &r.outcome(test).map(|o| &o.detail) {
                    Some(crate::mc_harness::TestDetail::Mean { checkpoints, .. }) => num(checkpoints[m_idx].mean),
                    _ => String::new(),
                };
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    r.params.n,
                    num(cp.t),
                    cp.k,
                    per_cp(TestKind::Lemma),
                    per_cp(TestKind::TauCoupling),
                    num(rem[m_idx].r2_scaled),
                    num(rem[m_idx].r3_scaled)
                );
            }
        }
        m.write("sweep.csv", &out)?;
    }
    println!("wrote diagnostics to {}", m.out.display());
    Ok(EXIT_PASS)
}

type Handler = fn(&ExperimentManifest) -> Result<i32, CliError>;

pub fn execute(cli: &Cli) -> Result<i32, CliError> {
    let (args, f): (&CommonArgs, Handler) = match &cli.command {
        Command::Simulate(a) => (a, cmd_simulate),
        Command::Verify(a) => (a, cmd_verify),
        Command::Diagnose(a) => (a, cmd_diagnose),
        Command::Sweep(a) => (a, cmd_sweep),
    };
    let manifest = ExperimentManifest::load(args)?;
    f(&manifest)
}

/// Parse `argv` and run; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}
