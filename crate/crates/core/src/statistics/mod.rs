//! Normalised volatility and return statistics for the three regimes, the
//! `τ`/`τ*` coupling pair and the near-explosive L² discrepancy.
//!
//! Two normalisations are available. [`NormalizationMode::Literal`] keeps the
//! per-factor `√k` scalings and the `k^{k/2}` prefactors, evaluated in log
//! space; those statistics are numerically degenerate and only used for
//! diagnostics. [`NormalizationMode::Classical`] drops them (exponents `jγ_n`,
//! no `k`-power prefactors) and is the mode whose limits are tested.

pub mod sums;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::garch_sim::GarchPath;
use crate::localization::{classify_regime, GarchParams, Regime};
use sums::{geometric_exp_sum, log_geometric_exp_sum};

/// Relative size below which a non-zero centred difference is treated as
/// rounding noise (ten significant digits lost).
pub const CANCELLATION_LIMIT: f64 = 1e-10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatError {
    #[error("statistic requires the {expected} regime, parameters are {actual}")]
    WrongRegime { expected: Regime, actual: Regime },
    #[error("centred difference lost more than 10 significant digits ({lhs} − {rhs})")]
    Cancellation { lhs: f64, rhs: f64 },
    #[error("E ξ² must be positive, got {0}")]
    BadXiVariance(f64),
    #[error("checkpoint k = {k} outside 1..={n}")]
    CheckpointOutOfRange { k: usize, n: usize },
    #[error("checkpoint grid invalid: {0}")]
    BadGrid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormalizationMode {
    Literal,
    Classical,
}

impl std::fmt::Display for NormalizationMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            NormalizationMode::Literal => "literal",
            NormalizationMode::Classical => "classical",
        })
    }
}

impl std::str::FromStr for NormalizationMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "literal" => Ok(Self::Literal),
            "classical" => Ok(Self::Classical),
            other => Err(format!("unknown mode {other:?}")),
        }
    }
}

/// Checkpoint fractions `0 < t_1 < … < t_N < 1`; `k(m) = ⌊n t_m⌋`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointGrid {
    #[serde(rename = "t")]
    pub t_values: Vec<f64>,
}

impl CheckpointGrid {
    pub fn new(t_values: Vec<f64>) -> Result<Self, StatError> {
        let grid = Self { t_values };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<(), StatError> {
        if self.t_values.is_empty() {
            return Err(StatError::BadGrid("no checkpoints".into()));
        }
        if self.t_values.iter().any(|&t| !(t > 0.0 && t < 1.0)) {
            return Err(StatError::BadGrid(format!(
                "fractions must lie in (0, 1): {:?}",
                self.t_values
            )));
        }
        if self.t_values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(StatError::BadGrid("fractions must be strictly increasing".into()));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.t_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t_values.is_empty()
    }

    /// `k(m)` for sample size `n`, each at least 3.
    pub fn checkpoints(&self, n: usize) -> Result<Vec<usize>, StatError> {
        self.validate()?;
        let ks: Vec<usize> = self
            .t_values
            .iter()
            .map(|&t| (n as f64 * t).floor() as usize)
            .collect();
        if ks[0] < 3 {
            return Err(StatError::BadGrid(format!(
                "k(1) = {} < 3 at n = {n}",
                ks[0]
            )));
        }
        if ks.windows(2).any(|w| w[1] <= w[0]) {
            return Err(StatError::BadGrid(format!("checkpoints collide at n = {n}: {ks:?}")));
        }
        Ok(ks)
    }
}

/// `σ_k²` given either directly or as its natural log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SigmaSq {
    Linear(f64),
    Log(f64),
}

impl From<f64> for SigmaSq {
    fn from(v: f64) -> Self {
        SigmaSq::Linear(v)
    }
}

impl SigmaSq {
    pub fn from_path(path: &GarchPath, k: usize) -> Self {
        let s = path.sigma_sq[k];
        if s.is_finite() {
            SigmaSq::Linear(s)
        } else {
            SigmaSq::Log(path.log_sigma_sq[k])
        }
    }

    fn ln(&self) -> f64 {
        match *self {
            SigmaSq::Linear(v) => v.ln(),
            SigmaSq::Log(l) => l,
        }
    }
}

/// `u_k` given directly or as `(sign, ln|u_k|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReturnObs {
    Linear(f64),
    Log { sign: f64, ln_abs: f64 },
}

impl From<f64> for ReturnObs {
    fn from(v: f64) -> Self {
        ReturnObs::Linear(v)
    }
}

impl ReturnObs {
    pub fn from_path(path: &GarchPath, k: usize) -> Self {
        let u = path.u[k];
        if u.is_finite() {
            ReturnObs::Linear(u)
        } else {
            let (sign, ln_abs) = path.log_abs_return(k);
            ReturnObs::Log { sign, ln_abs }
        }
    }

    fn parts(&self) -> (f64, f64) {
        match *self {
            ReturnObs::Linear(u) => {
                let sign = if u > 0.0 {
                    1.0
                } else if u < 0.0 {
                    -1.0
                } else {
                    0.0
                };
                (sign, u.abs().ln())
            }
            ReturnObs::Log { sign, ln_abs } => (sign, ln_abs),
        }
    }
}

/// A statistic's value with the log10 of the divisor applied to `σ_k²` (or to
/// `u_k²`): `log10 ω` in classical mode, `log10(ω k^{k/2})` and friends in
/// literal mode.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatValue {
    pub value: f64,
    pub log10_scale: f64,
    /// Set when the random part of the statistic is below rounding level.
    pub literal_degenerate: bool,
}

/// One statistic at each checkpoint of a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedStat {
    pub regime: Regime,
    pub mode: NormalizationMode,
    pub values: Vec<StatValue>,
}

fn require(params: &GarchParams, expected: Regime) -> Result<(), StatError> {
    let actual = classify_regime(params);
    if actual == expected {
        Ok(())
    } else {
        Err(StatError::WrongRegime { expected, actual })
    }
}

fn check_xi_var(xi_var: f64) -> Result<(), StatError> {
    if xi_var > 0.0 && xi_var.is_finite() {
        Ok(())
    } else {
        Err(StatError::BadXiVariance(xi_var))
    }
}

const LOG10_E: f64 = std::f64::consts::LOG10_E;

// a − c with the cancellation guard; an exactly zero difference is legitimate.
fn guarded_difference(a: f64, c: f64) -> Result<f64, StatError> {
    let d = a - c;
    if d != 0.0 && d.abs() < CANCELLATION_LIMIT * a.abs().max(c.abs()) {
        return Err(StatError::Cancellation { lhs: a, rhs: c });
    }
    Ok(d)
}

/// Literal centring `σ²/(ω k^{k/2}) − C`: the first term is formed in log
/// space and underflows harmlessly.
fn literal_centred(ln_sigma_sq: f64, omega: f64, k: usize, centring: f64) -> (f64, f64, bool) {
    let kf = k as f64;
    let ln_div = omega.ln() + 0.5 * kf * kf.ln();
    let ln_ratio = ln_sigma_sq - ln_div;
    let ratio = ln_ratio.exp();
    let degenerate = ln_ratio - centring.abs().ln() < f64::EPSILON.ln();
    (ratio - centring, ln_div * LOG10_E, degenerate)
}

/// Near-stationary volatility statistic.
///
/// Classical: `√(2|γ|³)/(α √Eξ²) · (σ_k²/ω − Σ_{j=1}^{k−1} e^{jγ})`.
pub fn ns_volatility_stat(
    sigma_k_sq: impl Into<SigmaSq>,
    params: &GarchParams,
    k: usize,
    xi_var: f64,
    mode: NormalizationMode,
) -> Result<StatValue, StatError> {
    require(params, Regime::NearStationary)?;
    check_xi_var(xi_var)?;
    let sigma = sigma_k_sq.into();
    let (alpha, gamma, omega) = (params.alpha_n, params.gamma_n, params.omega);
    let g3 = (2.0 * gamma.abs().powi(3)).sqrt();
    let kf = k as f64;
    match mode {
        NormalizationMode::Classical => {
            let centring = geometric_exp_sum(gamma, k);
            let ratio = match sigma {
                SigmaSq::Linear(v) => v / omega,
                SigmaSq::Log(l) => (l - omega.ln()).exp(),
            };
            let d = guarded_difference(ratio, centring)?;
            Ok(StatValue {
                value: g3 / (alpha * xi_var.sqrt()) * d,
                log10_scale: omega.log10(),
                literal_degenerate: false,
            })
        }
        NormalizationMode::Literal => {
            let centring = geometric_exp_sum(gamma / kf.sqrt(), k);
            let (d, log10_scale, degenerate) = literal_centred(sigma.ln(), omega, k, centring);
            Ok(StatValue {
                value: g3 / (alpha * kf.powf(0.25) * xi_var.sqrt()) * d,
                log10_scale,
                literal_degenerate: degenerate,
            })
        }
    }
}

// sign(u) · exp(½ ln(scale) + ln|u|) with scale = exp(ln_scale).
fn scaled_return(u: ReturnObs, ln_scale: f64, log10_div: f64, degenerate: bool) -> StatValue {
    let (sign, ln_abs) = u.parts();
    let value = if sign == 0.0 {
        0.0
    } else {
        sign * (0.5 * ln_scale + ln_abs).exp()
    };
    StatValue {
        value,
        log10_scale: log10_div,
        literal_degenerate: degenerate,
    }
}

fn literal_return_degenerate(ln_scale: f64) -> bool {
    // the normaliser underflows: the statistic is 0 for any finite u
    ln_scale < f64::MIN_POSITIVE.ln()
}

/// Classical: `(|γ|/ω)^{1/2} u_k`.
pub fn ns_return_stat(
    u_k: impl Into<ReturnObs>,
    params: &GarchParams,
    k: usize,
    mode: NormalizationMode,
) -> Result<StatValue, StatError> {
    require(params, Regime::NearStationary)?;
    let (gamma, omega) = (params.gamma_n.abs(), params.omega);
    let kf = k as f64;
    let ln_div = match mode {
        NormalizationMode::Classical => omega.ln(),
        NormalizationMode::Literal => omega.ln() + 0.5 * (kf + 1.0) * kf.ln(),
    };
    let ln_scale = gamma.ln() - ln_div;
    let degenerate = mode == NormalizationMode::Literal && literal_return_degenerate(ln_scale);
    Ok(scaled_return(u_k.into(), ln_scale, ln_div * LOG10_E, degenerate))
}

/// Integrated volatility statistic.
///
/// Classical: `(σ_k²/ω − k) / (n^{3/2} α √Eξ²)`, whose leading term is
/// `n^{-3/2} Σ_{j<k} Σ_{i≤j} ξ_{k−i} / √Eξ²`. Literal keeps the `k^{1/2}`
/// prefactor and the `k^{k/2}` divisor.
pub fn int_volatility_stat(
    sigma_k_sq: impl Into<SigmaSq>,
    params: &GarchParams,
    k: usize,
    xi_var: f64,
    mode: NormalizationMode,
) -> Result<StatValue, StatError> {
    require(params, Regime::Integrated)?;
    check_xi_var(xi_var)?;
    let sigma = sigma_k_sq.into();
    let (alpha, omega) = (params.alpha_n, params.omega);
    let n32 = (params.n as f64).powf(1.5);
    let kf = k as f64;
    match mode {
        NormalizationMode::Classical => {
            let ratio = match sigma {
                SigmaSq::Linear(v) => v / omega,
                SigmaSq::Log(l) => (l - omega.ln()).exp(),
            };
            let d = guarded_difference(ratio, kf)?;
            Ok(StatValue {
                value: d / (n32 * alpha * xi_var.sqrt()),
                log10_scale: omega.log10(),
                literal_degenerate: false,
            })
        }
        NormalizationMode::Literal => {
            let (d, log10_scale, degenerate) = literal_centred(sigma.ln(), omega, k, kf);
            Ok(StatValue {
                value: kf.sqrt() / (n32 * alpha * xi_var.sqrt()) * d,
                log10_scale,
                literal_degenerate: degenerate,
            })
        }
    }
}

/// Classical: `(ω k)^{-1/2} u_k`.
pub fn int_return_stat(
    u_k: impl Into<ReturnObs>,
    params: &GarchParams,
    k: usize,
    mode: NormalizationMode,
) -> Result<StatValue, StatError> {
    require(params, Regime::Integrated)?;
    let kf = k as f64;
    let ln_div = match mode {
        NormalizationMode::Classical => params.omega.ln() + kf.ln(),
        NormalizationMode::Literal => params.omega.ln() + (0.5 * kf + 1.0) * kf.ln(),
    };
    let degenerate = mode == NormalizationMode::Literal && literal_return_degenerate(-ln_div);
    Ok(scaled_return(u_k.into(), -ln_div, ln_div * LOG10_E, degenerate))
}

/// Near-explosive volatility statistic.
///
/// Classical: `γ e^{−kγ}/(α √n √Eξ²) · (σ_k²/ω − Σ_{j=1}^{k−1} e^{jγ})`. When
/// `σ_k²` or the centring overflows, both terms are rescaled by `e^{−kγ}`
/// before differencing: `e^{ln(σ_k²/ω) − kγ} − Σ_{m=1}^{k−1} e^{−mγ}`.
pub fn ne_volatility_stat(
    sigma_k_sq: impl Into<SigmaSq>,
    params: &GarchParams,
    k: usize,
    xi_var: f64,
    mode: NormalizationMode,
) -> Result<StatValue, StatError> {
    require(params, Regime::NearExplosive)?;
    check_xi_var(xi_var)?;
    let sigma = sigma_k_sq.into();
    let (alpha, gamma, omega) = (params.alpha_n, params.gamma_n, params.omega);
    let kf = k as f64;
    match mode {
        NormalizationMode::Classical => {
            let pref = gamma / (alpha * (params.n as f64).sqrt() * xi_var.sqrt());
            let centring = geometric_exp_sum(gamma, k);
            let damp = (-kf * gamma).exp();
            let scaled = match sigma {
                SigmaSq::Linear(v) if (v / omega).is_finite() && centring.is_finite() && damp > 0.0 => {
                    guarded_difference(v / omega, centring)? * damp
                }
                _ => {
                    let lhs = (sigma.ln() - omega.ln() - kf * gamma).exp();
                    let rhs = geometric_exp_sum(-gamma, k);
                    guarded_difference(lhs, rhs)?
                }
            };
            Ok(StatValue {
                value: pref * scaled,
                log10_scale: omega.log10(),
                literal_degenerate: false,
            })
        }
        NormalizationMode::Literal => {
            let root_k = kf.sqrt();
            let pref = gamma * (-root_k * gamma).exp() / (alpha * root_k * xi_var.sqrt());
            let centring = geometric_exp_sum(gamma / root_k, k);
            let (d, log10_scale, degenerate) = literal_centred(sigma.ln(), omega, k, centring);
            Ok(StatValue {
                value: pref * d,
                log10_scale,
                literal_degenerate: degenerate,
            })
        }
    }
}

/// Classical: `(γ e^{−kγ}/ω)^{1/2} u_k`, formed from `ln|u_k|`.
pub fn ne_return_stat(
    u_k: impl Into<ReturnObs>,
    params: &GarchParams,
    k: usize,
    mode: NormalizationMode,
) -> Result<StatValue, StatError> {
    require(params, Regime::NearExplosive)?;
    let (gamma, omega) = (params.gamma_n, params.omega);
    let kf = k as f64;
    let (ln_scale, ln_div) = match mode {
        NormalizationMode::Classical => (gamma.ln() - kf * gamma - omega.ln(), omega.ln()),
        NormalizationMode::Literal => {
            let ln_div = omega.ln() + 0.5 * (kf + 1.0) * kf.ln();
            (gamma.ln() - kf.sqrt() * gamma - ln_div, ln_div)
        }
    };
    let degenerate = mode == NormalizationMode::Literal && literal_return_degenerate(ln_scale);
    Ok(scaled_return(u_k.into(), ln_scale, ln_div * LOG10_E, degenerate))
}

/// Exponential weights `w_j = e^{j a}` for `j = 1..k−1`, with `a = γ` or `γ/√k`.
fn weight_exponent(gamma: f64, k: usize, mode: NormalizationMode) -> f64 {
    match mode {
        NormalizationMode::Classical => gamma,
        NormalizationMode::Literal => gamma / (k as f64).sqrt(),
    }
}

fn check_k(xi: &[f64], k: usize) -> Result<(), StatError> {
    if k < 2 || k >= xi.len() {
        return Err(StatError::CheckpointOutOfRange {
            k,
            n: xi.len().saturating_sub(1),
        });
    }
    Ok(())
}

/// `(τ, τ*)` for any `γ`:
/// `τ = Σ_{j<k} w_j ξ_{k−j}`, `τ* = Σ_{j<k} w_j Σ_{i≤j} ξ_{k−i}`; literal mode
/// uses `w_j = e^{jγ/√k}` and scales by `k^{−1/4}` and `k^{−1/2}`.
pub fn tau_pair(xi: &[f64], gamma: f64, k: usize, mode: NormalizationMode) -> Result<(f64, f64), StatError> {
    check_k(xi, k)?;
    let a = weight_exponent(gamma, k, mode);
    let (mut tau, mut tau_star, mut s) = (0.0, 0.0, 0.0);
    for j in 1..k {
        let w = (j as f64 * a).exp();
        let x = xi[k - j];
        s += x;
        tau += w * x;
        tau_star += w * s;
    }
    Ok(match mode {
        NormalizationMode::Classical => (tau, tau_star),
        NormalizationMode::Literal => {
            let kf = k as f64;
            (tau * kf.powf(-0.25), tau_star / kf.sqrt())
        }
    })
}

pub fn tau_stats(
    path: &GarchPath,
    params: &GarchParams,
    k: usize,
    mode: NormalizationMode,
) -> Result<(f64, f64), StatError> {
    require(params, Regime::NearStationary)?;
    tau_pair(&path.xi, params.gamma_n, k, mode)
}

/// `(√(2|γ|³) τ* − √(2|γ|) τ)²`.
pub fn tau_coupling(tau: f64, tau_star: f64, gamma: f64) -> f64 {
    let g = gamma.abs();
    let d = (2.0 * g.powi(3)).sqrt() * tau_star - (2.0 * g).sqrt() * tau;
    d * d
}

/// Single-replicate squared discrepancy whose mean should vanish.
///
/// Classical: `(γ²/n) e^{−2kγ} (Σ_{j<k} e^{jγ} S_j − (e^{kγ}/γ) Σ_{i=1}^{k−1} ξ_i)²`,
/// evaluated with weights `e^{(j−k)γ}` so nothing overflows. Literal:
/// `(γ²/k) e^{−2√kγ} (k^{−1/2} Σ_{j<k} e^{jγ/√k} S_j − (e^{√kγ}/γ) Σ ξ_i)²`.
pub fn lemma_discrepancy(
    path: &GarchPath,
    params: &GarchParams,
    k: usize,
    mode: NormalizationMode,
) -> Result<f64, StatError> {
    require(params, Regime::NearExplosive)?;
    lemma_discrepancy_raw(&path.xi, params.gamma_n, params.n, k, mode)
}

pub fn lemma_discrepancy_raw(
    xi: &[f64],
    gamma: f64,
    n: usize,
    k: usize,
    mode: NormalizationMode,
) -> Result<f64, StatError> {
    check_k(xi, k)?;
    let kf = k as f64;
    let (a, top, pre, inner_scale) = match mode {
        NormalizationMode::Classical => (gamma, kf * gamma, gamma * gamma / n as f64, 1.0),
        NormalizationMode::Literal => {
            let r = kf.sqrt();
            (gamma / r, r * gamma, gamma * gamma / kf, 1.0 / r)
        }
    };
    let (mut weighted, mut s) = (0.0, 0.0);
    for j in 1..k {
        s += xi[k - j];
        weighted += (j as f64 * a - top).exp() * s;
    }
    // s is now Σ_{i=1}^{k−1} ξ_i
    let d = inner_scale * weighted - s / gamma;
    Ok(pre * d * d)
}

/// `ln Σ_{j=1}^{k−1} e^{jγ}`; finite where the linear sum overflows.
pub fn log_centring(gamma: f64, k: usize) -> f64 {
    log_geometric_exp_sum(gamma, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::garch_sim::simulate_path;
    use crate::innovations::{InnovationSpec, RngStream};
    use crate::localization::{realize_params, LocalizationScheme};
    use approx::assert_relative_eq;

    fn scheme(c_gamma: f64, p: f64, kappa: f64) -> LocalizationScheme {
        LocalizationScheme {
            omega: 1.0,
            sigma0_sq: 1.0,
            c_alpha: 1.0,
            p,
            c_gamma,
            kappa,
        }
    }

    const C: NormalizationMode = NormalizationMode::Classical;
    const L: NormalizationMode = NormalizationMode::Literal;

    fn direct_geo(a: f64, k: usize) -> f64 {
        (1..k).map(|j| (j as f64 * a).exp()).sum()
    }

    #[test]
    fn grid_validation() {
        assert!(CheckpointGrid::new(vec![0.2, 0.4]).is_ok());
        assert!(CheckpointGrid::new(vec![0.4, 0.2]).is_err());
        assert!(CheckpointGrid::new(vec![0.5, 1.0]).is_err());
        assert!(CheckpointGrid::new(vec![]).is_err());
        let g = CheckpointGrid::new(vec![0.2, 0.4, 0.6, 0.8]).unwrap();
        assert_eq!(g.checkpoints(5000).unwrap(), vec![1000, 2000, 3000, 4000]);
        assert!(g.checkpoints(10).is_err());
    }

    #[test]
    fn centring_gives_zero_in_every_regime() {
        let ns = realize_params(&scheme(-1.0, 0.5, 0.4), 5000).unwrap();
        let k = 1000;
        let c = ns.omega * geometric_exp_sum(ns.gamma_n, k);
        assert_eq!(ns_volatility_stat(c, &ns, k, 2.0, C).unwrap().value, 0.0);

        let int = realize_params(&scheme(0.0, 0.6, 0.4), 5000).unwrap();
        assert_eq!(int_volatility_stat(int.omega * k as f64, &int, k, 2.0, C).unwrap().value, 0.0);

        let ne = realize_params(&scheme(1.0, 0.5, 0.6), 5000).unwrap();
        let c = ne.omega * geometric_exp_sum(ne.gamma_n, k);
        assert_eq!(ne_volatility_stat(c, &ne, k, 2.0, C).unwrap().value, 0.0);
    }

    #[test]
    fn return_normalisations_cancel() {
        let ns = realize_params(&scheme(-1.0, 0.5, 0.4), 5000).unwrap();
        assert_eq!(ns_return_stat(0.0, &ns, 100, C).unwrap().value, 0.0);
        let u = (ns.omega / ns.gamma_n.abs()).sqrt();
        assert_relative_eq!(ns_return_stat(u, &ns, 100, C).unwrap().value, 1.0, max_relative = 1e-14);

        let int = realize_params(&scheme(0.0, 0.6, 0.4), 5000).unwrap();
        let k = 700;
        let u = -(int.omega * k as f64).sqrt();
        assert_relative_eq!(int_return_stat(u, &int, k, C).unwrap().value, -1.0, max_relative = 1e-14);
        assert_eq!(int_return_stat(0.0, &int, k, C).unwrap().value, 0.0);

        let ne = realize_params(&scheme(1.0, 0.5, 0.6), 5000).unwrap();
        let k = 3000;
        let sigma_sq = ne.omega * (k as f64 * ne.gamma_n).exp() / ne.gamma_n;
        let v = ne_return_stat(sigma_sq.sqrt(), &ne, k, C).unwrap().value;
        assert_relative_eq!(v, 1.0, max_relative = 1e-12);
        assert_eq!(ne_return_stat(0.0, &ne, k, C).unwrap().value, 0.0);
        // the log route agrees
        let v = ne_return_stat(ReturnObs::Log { sign: 1.0, ln_abs: 0.5 * sigma_sq.ln() }, &ne, k, C).unwrap();
        assert_relative_eq!(v.value, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn wrong_regime_is_rejected() {
        let ns = realize_params(&scheme(-1.0, 0.5, 0.4), 100).unwrap();
        assert!(matches!(int_volatility_stat(1.0, &ns, 10, 2.0, C), Err(StatError::WrongRegime { .. })));
        assert!(matches!(ne_return_stat(1.0, &ns, 10, C), Err(StatError::WrongRegime { .. })));
        let ne = realize_params(&scheme(1.0, 0.5, 0.6), 100).unwrap();
        assert!(matches!(ns_volatility_stat(1.0, &ne, 10, 2.0, C), Err(StatError::WrongRegime { .. })));
        assert!(matches!(int_return_stat(1.0, &ne, 10, C), Err(StatError::WrongRegime { .. })));
        assert!(ns_volatility_stat(1.0, &ns, 10, 0.0, C).is_err());
    }

    // Independent straightforward evaluation: direct summation of the
    // centring and the prefactors spelled out.
    #[test]
    fn classical_stats_match_direct_evaluation() {
        let ns = realize_params(&scheme(-1.0, 0.5, 0.4), 5000).unwrap();
        let path = simulate_path(&ns, &InnovationSpec::StandardNormal, RngStream::new(77, 3));
        for &k in &[1000usize, 4000] {
            let s = path.sigma_sq[k];
            let g = ns.gamma_n;
            let oracle = (2.0 * (-g).powi(3)).sqrt() / ns.alpha_n / 2f64.sqrt() * (s / ns.omega - direct_geo(g, k));
            let v = ns_volatility_stat(s, &ns, k, 2.0, C).unwrap().value;
            assert_relative_eq!(v, oracle, max_relative = 1e-10);
        }

        let int = realize_params(&scheme(0.0, 0.6, 0.4), 5000).unwrap();
        let path = simulate_path(&int, &InnovationSpec::StandardNormal, RngStream::new(77, 4));
        let k = 2500;
        let s = path.sigma_sq[k];
        let oracle = (s / int.omega - k as f64) / (5000f64.powf(1.5) * int.alpha_n * 2f64.sqrt());
        assert_relative_eq!(int_volatility_stat(s, &int, k, 2.0, C).unwrap().value, oracle, max_relative = 1e-10);

        let ne = realize_params(&scheme(1.0, 0.5, 0.6), 5000).unwrap();
        let path = simulate_path(&ne, &InnovationSpec::StandardNormal, RngStream::new(77, 5));
        for &k in &[1000usize, 4000] {
            let s = path.sigma_sq[k];
            let g = ne.gamma_n;
            let oracle = g * (-(k as f64) * g).exp() / (ne.alpha_n * 5000f64.sqrt() * 2f64.sqrt())
                * (s / ne.omega - direct_geo(g, k));
            let v = ne_volatility_stat(s, &ne, k, 2.0, C).unwrap().value;
            assert_relative_eq!(v, oracle, max_relative = 1e-8);
            // log-space input takes the rescaled route
            let v_log = ne_volatility_stat(SigmaSq::Log(s.ln()), &ne, k, 2.0, C).unwrap().value;
            assert_relative_eq!(v_log, oracle, max_relative = 1e-8);
        }
    }

    #[test]
    fn integrated_stat_on_unit_squares() {
        // ε² ≡ 1, σ_0² = ω: σ_k² = ω(k + 1), so the statistic is 1/(n^{3/2} α √Eξ²)
        let int = realize_params(&scheme(0.0, 0.6, 0.4), 5000).unwrap();
        let eps: Vec<f64> = (0..=5000).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let path = crate::garch_sim::GarchPath::from_innovations(&int, eps, RngStream::new(0, 0)).unwrap();
        let k = 1000;
        assert_relative_eq!(path.sigma_sq[k], 1001.0, max_relative = 1e-12);
        let v = int_volatility_stat(path.sigma_sq[k], &int, k, 2.0, C).unwrap().value;
        let expect = 1.0 / (5000f64.powf(1.5) * int.alpha_n * 2f64.sqrt());
        assert_relative_eq!(v, expect, max_relative = 1e-9);
    }

    #[test]
    fn literal_stats_are_finite_and_flagged() {
        let ns = realize_params(&scheme(-1.0, 0.5, 0.4), 5000).unwrap();
        let path = simulate_path(&ns, &InnovationSpec::StandardNormal, RngStream::new(1, 1));
        let k = 1000;
        let v = ns_volatility_stat(path.sigma_sq[k], &ns, k, 2.0, L).unwrap();
        assert!(v.value.is_finite());
        assert!(v.literal_degenerate);
        let kf = k as f64;
        assert_relative_eq!(v.log10_scale, (0.5 * kf * kf.ln()) * LOG10_E, max_relative = 1e-14);
        let r = ns_return_stat(path.u[k], &ns, k, L).unwrap();
        assert!(r.value.is_finite() && r.literal_degenerate);

        let ne = realize_params(&scheme(1.0, 0.5, 0.6), 5000).unwrap();
        let path = simulate_path(&ne, &InnovationSpec::StandardNormal, RngStream::new(1, 2));
        let v = ne_volatility_stat(path.sigma_sq[k], &ne, k, 2.0, L).unwrap();
        assert!(v.value.is_finite() && v.literal_degenerate);
    }

    #[test]
    fn cancellation_guard_trips() {
        let ne = realize_params(&scheme(1.0, 0.5, 0.6), 5000).unwrap();
        let k = 1000;
        let c = ne.omega * geometric_exp_sum(ne.gamma_n, k);
        let err = ne_volatility_stat(c * (1.0 + 1e-13), &ne, k, 2.0, C).unwrap_err();
        assert!(matches!(err, StatError::Cancellation { .. }));
    }

    #[test]
    fn tau_examples() {
        let xi = vec![0.0; 50];
        assert_eq!(tau_pair(&xi, -0.1, 40, C).unwrap(), (0.0, 0.0));

        // γ = 0: τ = Σ_{j<k} ξ_{k−j}, τ* = Σ_{j<k} Σ_{i≤j} ξ_{k−i}
        let xi: Vec<f64> = (0..30).map(|i| ((i * 7919) % 13) as f64 - 6.0).collect();
        let k = 25;
        let tau_oracle: f64 = (1..k).map(|j| xi[k - j]).sum();
        let mut star_oracle = 0.0;
        for j in 1..k {
            for i in 1..=j {
                star_oracle += xi[k - i];
            }
        }
        let (t, ts) = tau_pair(&xi, 0.0, k, C).unwrap();
        assert_relative_eq!(t, tau_oracle);
        assert_relative_eq!(ts, star_oracle);
        // same double sum regrouped by ξ index
        let regrouped: f64 = (1..k).map(|i| (k - i) as f64 * xi[k - i]).sum();
        assert_relative_eq!(ts, regrouped);
    }

    #[test]
    fn lemma_examples() {
        let ne = realize_params(&scheme(1.0, 0.5, 0.6), 3000).unwrap();
        let xi = vec![0.0; 3001];
        assert_eq!(lemma_discrepancy_raw(&xi, ne.gamma_n, 3000, 2000, C).unwrap(), 0.0);

        let path = simulate_path(&ne, &InnovationSpec::StandardNormal, RngStream::new(3, 3));
        let k = 2000;
        let g = ne.gamma_n;
        // brute-force double sum with unscaled weights
        let mut weighted = 0.0;
        for j in 1..k {
            let s: f64 = (1..=j).map(|i| path.xi[k - i]).sum();
            weighted += (j as f64 * g).exp() * s;
        }
        let total: f64 = (1..k).map(|i| path.xi[i]).sum();
        let inner = weighted - (k as f64 * g).exp() / g * total;
        let oracle = g * g / 3000.0 * (-2.0 * k as f64 * g).exp() * inner * inner;
        let v = lemma_discrepancy(&path, &ne, k, C).unwrap();
        assert_relative_eq!(v, oracle, max_relative = 1e-10);

        let lit = lemma_discrepancy(&path, &ne, k, L).unwrap();
        assert!(lit.is_finite());
    }

    #[test]
    fn replayed_path_gives_identical_classical_stats() {
        let ns = realize_params(&scheme(-1.0, 0.5, 0.4), 3000).unwrap();
        let a = simulate_path(&ns, &InnovationSpec::StandardNormal, RngStream::new(10, 10));
        let b = simulate_path(&ns, &InnovationSpec::StandardNormal, a.stream);
        for k in [100, 1500, 2999] {
            let va = ns_volatility_stat(a.sigma_sq[k], &ns, k, 2.0, C).unwrap();
            let vb = ns_volatility_stat(b.sigma_sq[k], &ns, k, 2.0, C).unwrap();
            assert_eq!(va.value.to_bits(), vb.value.to_bits());
            assert_eq!(tau_stats(&a, &ns, k, C).unwrap(), tau_stats(&b, &ns, k, C).unwrap());
        }
    }

    #[test]
    fn ne_deterministic_centring_gap_shrinks() {
        // (γ/√k) e^{−√kγ} (Σ_{j<k} e^{jγ/√k} − √k e^{√kγ}/γ) → 0
        let g = 0.05;
        let vals: Vec<f64> = [1_000usize, 10_000, 100_000]
            .iter()
            .map(|&k| {
                let r = (k as f64).sqrt();
                let gap = geometric_exp_sum(g / r, k) - r * (r * g).exp() / g;
                (g / r * (-r * g).exp() * gap).abs()
            })
            .collect();
        assert!(vals[0] > vals[1] && vals[1] > vals[2], "{vals:?}");
    }

    #[test]
    fn mode_parses() {
        assert_eq!("classical".parse::<NormalizationMode>().unwrap(), C);
        assert_eq!("literal".parse::<NormalizationMode>().unwrap(), L);
        assert!("other".parse::<NormalizationMode>().is_err());
    }
}
