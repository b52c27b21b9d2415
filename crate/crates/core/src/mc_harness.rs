//! Monte Carlo experiments: replicate paths, evaluate the regime statistics at
//! each checkpoint and compare them with their limit laws.
//!
//! Replication `i` always draws from stream `(master_seed, i)`, and every
//! reduction runs over records sorted by stream index, so reports do not
//! depend on thread scheduling.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use thiserror::Error;

use crate::garch_sim::{decompose_volatility, simulate_path, DecompositionReport, SimError};
use crate::gof::{self, GofError, GofResult};
use crate::innovations::{validate_spec, xi_second_moment, InnovationError, InnovationSpec, RngStream};
use crate::limits::{self, normal_cdf};
use crate::localization::{realize_params, GarchParams, LocalizationError, LocalizationScheme, Regime};
use crate::statistics::{
    int_return_stat, int_volatility_stat, lemma_discrepancy, ne_return_stat, ne_volatility_stat,
    ns_return_stat, ns_volatility_stat, tau_coupling, tau_stats, CheckpointGrid, NormalizationMode,
    ReturnObs, SigmaSq, StatError, StatValue,
};

/// XORed into the master seed for the reference-law sample.
pub const REFERENCE_SALT: u64 = 0x05EE_D0F1_1A17;
/// Added to `3/√reps` in the independence check.
pub const INDEPENDENCE_MARGIN: f64 = 0.003;
pub const MIN_GOF_REPS: usize = 100;
/// Largest max/min ratio accepted for remainder medians across an n-sweep.
pub const REMAINDER_BAND: f64 = 3.0;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Localization(#[from] LocalizationError),
    #[error(transparent)]
    Innovation(#[from] InnovationError),
    #[error(transparent)]
    Statistic(#[from] StatError),
    #[error(transparent)]
    Simulation(#[from] SimError),
    #[error(transparent)]
    Gof(#[from] GofError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestKind {
    VolGof,
    RetGof,
    Independence,
    Lemma,
    Remainders,
    TauCoupling,
}

impl TestKind {
    pub fn is_distributional(self) -> bool {
        matches!(self, TestKind::VolGof | TestKind::RetGof | TestKind::Independence)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub scheme: LocalizationScheme,
    pub innovation: InnovationSpec,
    pub n: usize,
    pub grid: CheckpointGrid,
    pub reps: usize,
    pub master_seed: u64,
    pub mode: NormalizationMode,
    pub tests: BTreeSet<TestKind>,
    pub level: f64,
    /// Self-test: shift every volatility statistic by +1.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub corrupt_centering: bool,
}

struct Context {
    params: GarchParams,
    regime: Regime,
    ks: Vec<usize>,
    xi_var: f64,
}

impl McConfig {
    fn prepare(&self) -> Result<Context, HarnessError> {
        self.scheme.validate()?;
        validate_spec(self.innovation)?;
        let params = realize_params(&self.scheme, self.n)?;
        let ks = self.grid.checkpoints(self.n)?;
        if self.tests.is_empty() {
            return Err(HarnessError::Config("no tests enabled".into()));
        }
        if !(self.level > 0.0 && self.level < 1.0) {
            return Err(HarnessError::Config(format!("level {} outside (0, 1)", self.level)));
        }
        let distributional = self.tests.iter().any(|t| t.is_distributional());
        if distributional && self.mode == NormalizationMode::Literal {
            return Err(HarnessError::Config(
                "literal mode is diagnostic only; goodness-of-fit and independence tests need classical mode".into(),
            ));
        }
        if distributional && self.reps < MIN_GOF_REPS {
            return Err(HarnessError::Config(format!(
                "reps = {} < {MIN_GOF_REPS} with a goodness-of-fit test enabled",
                self.reps
            )));
        }
        if self.reps < gof::MIN_SAMPLE {
            return Err(HarnessError::Config(format!("reps = {} < {}", self.reps, gof::MIN_SAMPLE)));
        }
        if self.tests.contains(&TestKind::Independence) && ks.len() < 2 {
            return Err(HarnessError::Config("independence needs at least 2 checkpoints".into()));
        }
        let regime = self.scheme.regime();
        if self.tests.contains(&TestKind::Lemma) && regime != Regime::NearExplosive {
            return Err(HarnessError::Config(format!("lemma test needs the near-explosive regime, scheme is {regime}")));
        }
        if self.tests.contains(&TestKind::TauCoupling) && regime != Regime::NearStationary {
            return Err(HarnessError::Config(format!(
                "tau_coupling needs the near-stationary regime, scheme is {regime}"
            )));
        }
        Ok(Context {
            params,
            regime,
            ks,
            xi_var: xi_second_moment(&self.innovation),
        })
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        self.prepare().map(|_| ())
    }
}

/// Everything computed for one replication.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationRecord {
    pub index: u64,
    pub vol: Vec<StatValue>,
    pub ret: Vec<StatValue>,
    pub lemma: Vec<f64>,
    /// `(τ, τ*, coupling)` per checkpoint.
    pub tau: Vec<(f64, f64, f64)>,
    pub decomposition: Vec<DecompositionReport>,
}

fn replicate(config: &McConfig, ctx: &Context, index: u64) -> Result<ReplicationRecord, HarnessError> {
    let params = &ctx.params;
    let mode = config.mode;
    let path = simulate_path(params, &config.innovation, RngStream::new(config.master_seed, index));
    let mut rec = ReplicationRecord {
        index,
        vol: Vec::with_capacity(ctx.ks.len()),
        ret: Vec::with_capacity(ctx.ks.len()),
        lemma: Vec::new(),
        tau: Vec::new(),
        decomposition: Vec::new(),
    };
    for &k in &ctx.ks {
        let s = SigmaSq::from_path(&path, k);
        let u = ReturnObs::from_path(&path, k);
        let (mut vol, ret) = match ctx.regime {
            Regime::NearStationary => (
                ns_volatility_stat(s, params, k, ctx.xi_var, mode)?,
                ns_return_stat(u, params, k, mode)?,
            ),
            Regime::Integrated => (
                int_volatility_stat(s, params, k, ctx.xi_var, mode)?,
                int_return_stat(u, params, k, mode)?,
            ),
            Regime::NearExplosive => (
                ne_volatility_stat(s, params, k, ctx.xi_var, mode)?,
                ne_return_stat(u, params, k, mode)?,
            ),
        };
        if config.corrupt_centering {
            vol.value += 1.0;
        }
        rec.vol.push(vol);
        rec.ret.push(ret);
        if config.tests.contains(&TestKind::Lemma) {
            rec.lemma.push(lemma_discrepancy(&path, params, k, mode)?);
        }
        if config.tests.contains(&TestKind::TauCoupling) {
            let (t, ts) = tau_stats(&path, params, k, mode)?;
            rec.tau.push((t, ts, tau_coupling(t, ts, params.gamma_n)));
        }
        if config.tests.contains(&TestKind::Remainders) {
            rec.decomposition.push(decompose_volatility(&path, params, k, mode)?);
        }
    }
    Ok(rec)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: f64,
    pub sd: f64,
    /// `None` when the sample has zero spread.
    pub skewness: Option<f64>,
    pub excess_kurtosis: Option<f64>,
}

impl Moments {
    pub fn of(x: &[f64]) -> Self {
        let n = x.len() as f64;
        let mean = x.iter().sum::<f64>() / n;
        let m2 = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        let m3 = x.iter().map(|v| (v - mean).powi(3)).sum::<f64>() / n;
        let m4 = x.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / n;
        let spread = m2 > 0.0 && m2.is_finite();
        Self {
            mean,
            sd: (m2 * n / (n - 1.0)).sqrt(),
            skewness: spread.then(|| m3 / m2.powf(1.5)),
            excess_kurtosis: spread.then(|| m4 / (m2 * m2) - 3.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointSummary {
    pub t: f64,
    pub k: usize,
    pub vol: Moments,
    pub ret: Moments,
    pub vol_log10_scale: f64,
    pub ret_log10_scale: f64,
    pub literal_degenerate: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointGof {
    pub t: f64,
    pub k: usize,
    #[serde(flatten)]
    pub result: GofResult,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanEstimate {
    pub t: f64,
    pub k: usize,
    pub mean: f64,
    pub std_err: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RemainderMedians {
    pub t: f64,
    pub k: usize,
    pub r1: f64,
    pub r2_max: f64,
    /// `median(max_j |R⁽²⁾|) / α_n²`
    pub r2_scaled: f64,
    pub r2_lil_max: f64,
    pub r3_rel_max: f64,
    /// `median(max_j |R⁽³⁾|/j) · k / (α_n² + γ_n²)`
    pub r3_scaled: f64,
    pub identity_log10_gap: f64,
    pub literal_degenerate: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestDetail {
    Gof {
        reference: String,
        checkpoints: Vec<CheckpointGof>,
    },
    Independence {
        columns: String,
        max_abs_corr: f64,
        threshold: f64,
        correlations: Vec<Vec<f64>>,
    },
    Mean {
        mean: f64,
        checkpoints: Vec<MeanEstimate>,
    },
    Remainders {
        checkpoints: Vec<RemainderMedians>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub test: TestKind,
    pub pass: bool,
    pub detail: TestDetail,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub master_seed: u64,
    /// Replications use streams `0..reps`.
    pub reps: usize,
    pub reference_seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub config: McConfig,
    pub regime: Regime,
    pub params: GarchParams,
    pub provenance: Provenance,
    pub checkpoints: Vec<CheckpointSummary>,
    pub tests: Vec<TestOutcome>,
    pub pass: bool,
}

impl McReport {
    pub fn outcome(&self, test: TestKind) -> Option<&TestOutcome> {
        self.tests.iter().find(|o| o.test == test)
    }

    pub fn gof(&self, test: TestKind) -> Option<&[CheckpointGof]> {
        match &self.outcome(test)?.detail {
            TestDetail::Gof { checkpoints, .. } => Some(checkpoints),
            _ => None,
        }
    }

    pub fn mean_of(&self, test: TestKind) -> Option<f64> {
        match &self.outcome(test)?.detail {
            TestDetail::Mean { mean, .. } => Some(*mean),
            _ => None,
        }
    }

    pub fn remainders(&self) -> Option<&[RemainderMedians]> {
        match &self.outcome(TestKind::Remainders)?.detail {
            TestDetail::Remainders { checkpoints } => Some(checkpoints),
            _ => None,
        }
    }

    pub fn max_abs_corr(&self) -> Option<f64> {
        match &self.outcome(TestKind::Independence)?.detail {
            TestDetail::Independence { max_abs_corr, .. } => Some(*max_abs_corr),
            _ => None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

/// A report plus the raw per-replication data and wall-clock time, which is
/// kept out of the report so that reports stay byte-reproducible.
#[derive(Debug, Clone)]
pub struct McRun {
    pub report: McReport,
    pub records: Vec<ReplicationRecord>,
    pub elapsed: Duration,
}

fn median(mut x: Vec<f64>) -> f64 {
    x.sort_by(f64::total_cmp);
    let n = x.len();
    if n % 2 == 1 {
        x[n / 2]
    } else {
        0.5 * (x[n / 2 - 1] + x[n / 2])
    }
}

fn mean_estimate(t: f64, k: usize, x: &[f64]) -> MeanEstimate {
    let m = Moments::of(x);
    MeanEstimate {
        t,
        k,
        mean: m.mean,
        std_err: m.sd / (x.len() as f64).sqrt(),
    }
}

fn column(rows: &[ReplicationRecord], f: impl Fn(&ReplicationRecord) -> f64) -> Vec<f64> {
    rows.iter().map(f).collect()
}

fn reference_sample(config: &McConfig, regime: Regime) -> Option<(u64, limits::LimitSample)> {
    let seed = config.master_seed ^ REFERENCE_SALT;
    let stream = RngStream::new(seed, 0);
    match regime {
        Regime::NearStationary => None,
        Regime::Integrated => Some((seed, limits::sample_time_weighted_wiener(&config.grid, config.reps, stream))),
        Regime::NearExplosive => Some((seed, limits::sample_wiener_marginals(&config.grid, config.reps, stream))),
    }
}

fn reference_name(regime: Regime) -> &'static str {
    match regime {
        Regime::NearStationary => "standard-normal",
        Regime::Integrated => "time-weighted-wiener",
        Regime::NearExplosive => "wiener-marginals",
    }
}

fn summarise(
    config: &McConfig,
    ctx: &Context,
    records: &[ReplicationRecord],
) -> Result<McReport, HarnessError> {
    let t_values = &config.grid.t_values;
    let checkpoints = ctx
        .ks
        .iter()
        .enumerate()
        .map(|(m, &k)| {
            let vol = column(records, |r| r.vol[m].value);
            let ret = column(records, |r| r.ret[m].value);
            CheckpointSummary {
                t: t_values[m],
                k,
                vol: Moments::of(&vol),
                ret: Moments::of(&ret),
                vol_log10_scale: records[0].vol[m].log10_scale,
                ret_log10_scale: records[0].ret[m].log10_scale,
                literal_degenerate: records
                    .iter()
                    .filter(|r| r.vol[m].literal_degenerate || r.ret[m].literal_degenerate)
                    .count(),
            }
        })
        .collect();

    let reference = if config.tests.contains(&TestKind::VolGof) {
        reference_sample(config, ctx.regime)
    } else {
        None
    };
    let mut tests = Vec::with_capacity(config.tests.len());
    for &test in &config.tests {
        let outcome = match test {
            TestKind::VolGof => {
                let mut rows = Vec::with_capacity(ctx.ks.len());
                for (m, &k) in ctx.ks.iter().enumerate() {
                    let x = column(records, |r| r.vol[m].value);
                    let result = match &reference {
                        None => gof::ks_one_sample(&x, normal_cdf)?,
                        Some((_, sample)) => gof::ks_two_sample(&x, &sample.column(m))?,
                    }
                    .with_level(config.level);
                    rows.push(CheckpointGof {
                        t: t_values[m],
                        k,
                        result,
                        pass: result.passes(),
                    });
                }
                TestOutcome {
                    test,
                    pass: rows.iter().all(|r| r.pass),
                    detail: TestDetail::Gof {
                        reference: reference_name(ctx.regime).into(),
                        checkpoints: rows,
                    },
                }
            }
            TestKind::RetGof => {
                let spec = config.innovation;
                let mut rows = Vec::with_capacity(ctx.ks.len());
                for (m, &k) in ctx.ks.iter().enumerate() {
                    let x = column(records, |r| r.ret[m].value);
                    let result = gof::ks_one_sample(&x, |v| spec.cdf(v))?.with_level(config.level);
                    rows.push(CheckpointGof {
                        t: t_values[m],
                        k,
                        result,
                        pass: result.passes(),
                    });
                }
                TestOutcome {
                    test,
                    pass: rows.iter().all(|r| r.pass),
                    detail: TestDetail::Gof {
                        reference: "innovation".into(),
                        checkpoints: rows,
                    },
                }
            }
            TestKind::Independence => {
                let increments = ctx.regime != Regime::NearStationary;
                let matrix: Vec<Vec<f64>> = records
                    .iter()
                    .map(|r| {
                        let v: Vec<f64> = r.vol.iter().map(|s| s.value).collect();
                        if increments {
                            let mut out = vec![v[0]];
                            out.extend(v.windows(2).map(|w| w[1] - w[0]));
                            out
                        } else {
                            v
                        }
                    })
                    .collect();
                let corr = gof::pairwise_correlation(&matrix)?;
                let max_abs_corr = gof::max_abs_offdiag(&corr);
                let threshold = 3.0 / (config.reps as f64).sqrt() + INDEPENDENCE_MARGIN;
                TestOutcome {
                    test,
                    pass: max_abs_corr < threshold,
                    detail: TestDetail::Independence {
                        columns: if increments { "increments" } else { "levels" }.into(),
                        max_abs_corr,
                        threshold,
                        correlations: corr,
                    },
                }
            }
            TestKind::Lemma | TestKind::TauCoupling => {
                let rows: Vec<MeanEstimate> = ctx
                    .ks
                    .iter()
                    .enumerate()
                    .map(|(m, &k)| {
                        let x = if test == TestKind::Lemma {
                            column(records, |r| r.lemma[m])
                        } else {
                            column(records, |r| r.tau[m].2)
                        };
                        mean_estimate(t_values[m], k, &x)
                    })
                    .collect();
                let mean = rows.iter().map(|r| r.mean).sum::<f64>() / rows.len() as f64;
                TestOutcome {
                    test,
                    pass: mean.is_finite(),
                    detail: TestDetail::Mean { mean, checkpoints: rows },
                }
            }
            TestKind::Remainders => {
                let (a2, g2) = (ctx.params.alpha_n.powi(2), ctx.params.gamma_n.powi(2));
                let rows: Vec<RemainderMedians> = ctx
                    .ks
                    .iter()
                    .enumerate()
                    .map(|(m, &k)| {
                        let med = |f: fn(&DecompositionReport) -> f64| median(column(records, |r| f(&r.decomposition[m])));
                        let r2_max = med(|d| d.r2_max);
                        let r3_rel_max = med(|d| d.r3_rel_max);
                        RemainderMedians {
                            t: t_values[m],
                            k,
                            r1: med(|d| d.r1),
                            r2_max,
                            r2_scaled: r2_max / a2,
                            r2_lil_max: med(|d| d.r2_lil_max),
                            r3_rel_max,
                            r3_scaled: r3_rel_max * k as f64 / (a2 + g2),
                            identity_log10_gap: med(|d| d.identity_log10_gap),
                            literal_degenerate: records.iter().filter(|r| r.decomposition[m].literal_degenerate).count(),
                        }
                    })
                    .collect();
                let finite = rows.iter().all(|r| {
                    [r.r1, r.r2_max, r.r2_scaled, r.r3_rel_max, r.r3_scaled, r.identity_log10_gap]
                        .iter()
                        .all(|v| v.is_finite())
                });
                TestOutcome {
                    test,
                    pass: finite,
                    detail: TestDetail::Remainders { checkpoints: rows },
                }
            }
        };
        tests.push(outcome);
    }

    Ok(McReport {
        config: config.clone(),
        regime: ctx.regime,
        params: ctx.params,
        provenance: Provenance {
            master_seed: config.master_seed,
            reps: config.reps,
            reference_seed: reference.map(|(s, _)| s),
        },
        checkpoints,
        pass: tests.iter().all(|t| t.pass),
        tests,
    })
}

/// Run on an explicit set of stream indices; records are reduced in index
/// order whatever order the indices arrive in.
pub fn run_on_streams(config: &McConfig, indices: &[u64]) -> Result<McRun, HarnessError> {
    let start = Instant::now();
    let ctx = config.prepare()?;
    let mut records = indices
        .par_iter()
        .map(|&i| replicate(config, &ctx, i))
        .collect::<Result<Vec<_>, _>>()?;
    records.sort_by_key(|r| r.index);
    let report = summarise(config, &ctx, &records)?;
    Ok(McRun {
        report,
        records,
        elapsed: start.elapsed(),
    })
}

pub fn run_experiment_full(config: &McConfig) -> Result<McRun, HarnessError> {
    let indices: Vec<u64> = (0..config.reps as u64).collect();
    run_on_streams(config, &indices)
}

pub fn run_experiment(config: &McConfig) -> Result<McReport, HarnessError> {
    run_experiment_full(config).map(|r| r.report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrendCheck {
    pub name: String,
    pub t: Option<f64>,
    pub values: Vec<f64>,
    pub rule: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub n_grid: Vec<usize>,
    pub reports: Vec<McReport>,
    pub trends: Vec<TrendCheck>,
    pub pass: bool,
}

impl SweepReport {
    pub fn trend(&self, name: &str) -> impl Iterator<Item = &TrendCheck> {
        let name = name.to_owned();
        self.trends.iter().filter(move |t| t.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }
}

fn strictly_decreasing(name: &str, values: Vec<f64>) -> TrendCheck {
    let pass = values.windows(2).all(|w| w[1] < w[0]);
    TrendCheck {
        name: name.into(),
        t: None,
        values,
        rule: "strictly decreasing".into(),
        pass,
    }
}

fn within_band(name: &str, t: f64, values: Vec<f64>) -> TrendCheck {
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    TrendCheck {
        name: name.into(),
        t: Some(t),
        pass: min > 0.0 && max / min <= REMAINDER_BAND,
        values,
        rule: format!("max/min <= {REMAINDER_BAND}"),
    }
}

pub fn run_n_sweep(config: &McConfig, n_grid: &[usize]) -> Result<SweepReport, HarnessError> {
    if n_grid.len() < 3 {
        return Err(HarnessError::Config(format!("n-grid needs at least 3 points, got {}", n_grid.len())));
    }
    if n_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(HarnessError::Config(format!("n-grid must be increasing: {n_grid:?}")));
    }
    let configs: Vec<McConfig> = n_grid
        .iter()
        .map(|&n| McConfig { n, ..config.clone() })
        .collect();
    for c in &configs {
        c.validate()?;
    }
    let reports = configs.iter().map(run_experiment).collect::<Result<Vec<_>, _>>()?;

    let mut trends = Vec::new();
    for test in [TestKind::Lemma, TestKind::TauCoupling] {
        if config.tests.contains(&test) {
            let name = if test == TestKind::Lemma { "lemma_mean" } else { "tau_coupling_mean" };
            let values = reports.iter().map(|r| r.mean_of(test).unwrap_or(f64::NAN)).collect();
            trends.push(strictly_decreasing(name, values));
        }
    }
    if config.tests.contains(&TestKind::Remainders) {
        for (m, &t) in config.grid.t_values.iter().enumerate() {
            let pick = |f: fn(&RemainderMedians) -> f64| -> Vec<f64> {
                reports.iter().map(|r| r.remainders().map_or(f64::NAN, |rows| f(&rows[m]))).collect()
            };
            trends.push(within_band("r2_scaled", t, pick(|r| r.r2_scaled)));
            trends.push(within_band("r3_scaled", t, pick(|r| r.r3_scaled)));
        }
    }
    let pass = reports.iter().all(|r| r.pass) && trends.iter().all(|t| t.pass);
    Ok(SweepReport {
        n_grid: n_grid.to_vec(),
        reports,
        trends,
        pass,
    })
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

impl McRun {
    /// `replication,t_m,k_m,regime,mode,stat_vol,stat_ret`
    pub fn stats_csv(&self) -> String {
        let r = &self.report;
        let mut out = String::from("replication,t_m,k_m,regime,mode,stat_vol,stat_ret\n");
        for rec in &self.records {
            for (m, cp) in r.checkpoints.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    rec.index,
                    num(cp.t),
                    cp.k,
                    r.regime,
                    r.config.mode,
                    num(rec.vol[m].value),
                    num(rec.ret[m].value)
                );
            }
        }
        out
    }

    /// Sorted volatility statistic against the reference law's quantiles at
    /// `(i − 0.5)/reps`, one row per replication and checkpoint.
    pub fn qq_csv(&self) -> String {
        let r = &self.report;
        let reps = self.records.len();
        let mut out = String::from("t_m,k_m,rank,stat_vol,reference_quantile\n");
        for (m, cp) in r.checkpoints.iter().enumerate() {
            let sd = match r.regime {
                Regime::NearStationary => 1.0,
                Regime::Integrated => (cp.t.powi(3) / 3.0).sqrt(),
                Regime::NearExplosive => cp.t.sqrt(),
            };
            let law = Normal::new(0.0, sd).expect("positive sd");
            let mut x: Vec<f64> = self.records.iter().map(|rec| rec.vol[m].value).collect();
            x.sort_by(f64::total_cmp);
            for (i, v) in x.iter().enumerate() {
                let q = law.inverse_cdf((i as f64 + 0.5) / reps as f64);
                let _ = writeln!(out, "{},{},{},{},{}", num(cp.t), cp.k, i + 1, num(*v), num(q));
            }
        }
        out
    }

    /// Per replication and checkpoint remainder magnitudes.
    pub fn remainders_csv(&self) -> String {
        let mut out = String::from(
            "replication,k_m,mode,r1,r2_max,r2_lil_max,r3_rel_max,factor_deviation_max,fluctuation_max,literal_degenerate\n",
        );
        for rec in &self.records {
            for d in &rec.decomposition {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{}",
                    rec.index,
                    d.k,
                    d.mode,
                    num(d.r1),
                    num(d.r2_max),
                    num(d.r2_lil_max),
                    num(d.r3_rel_max),
                    num(d.factor_deviation_max),
                    num(d.fluctuation_max),
                    d.literal_degenerate
                );
            }
        }
        out
    }

    /// Component signs and log10 magnitudes.
    pub fn decomposition_csv(&self) -> String {
        let mut out = String::from(
            "replication,k_m,mode,c1_sign,c1_log10,c2_sign,c2_log10,c3_sign,c3_log10,c4_sign,c4_log10,log_k_power,identity_log10_gap,literal_degenerate\n",
        );
        for rec in &self.records {
            for d in &rec.decomposition {
                let _ = write!(out, "{},{},{}", rec.index, d.k, d.mode);
                for c in &d.components {
                    let _ = write!(out, ",{},{}", c.sign, num(c.log10_abs));
                }
                let _ = writeln!(
                    out,
                    ",{},{},{}",
                    num(d.log_k_power),
                    num(d.identity_log10_gap),
                    d.literal_degenerate
                );
            }
        }
        out
    }

    pub fn tau_csv(&self) -> String {
        let mut out = String::from("replication,k_m,tau,tau_star,coupling\n");
        for rec in &self.records {
            for (m, (t, ts, c)) in rec.tau.iter().enumerate() {
                let k = self.report.checkpoints[m].k;
                let _ = writeln!(out, "{},{},{},{},{}", rec.index, k, num(*t), num(*ts), num(*c));
            }
        }
        out
    }

    pub fn lemma_csv(&self) -> String {
        let mut out = String::from("replication,k_m,discrepancy\n");
        for rec in &self.records {
            for (m, v) in rec.lemma.iter().enumerate() {
                let k = self.report.checkpoints[m].k;
                let _ = writeln!(out, "{},{},{}", rec.index, k, num(*v));
            }
        }
        out
    }
}
