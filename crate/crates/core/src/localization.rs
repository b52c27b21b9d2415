//! Sample-size dependent GARCH(1,1) parameters.
//!
//! A [`LocalizationScheme`] fixes `α_n = c_α n^{-p}` and `γ_n = c_γ n^{-κ}`;
//! `β_n = 1 + γ_n − α_n` is derived, so the persistence gap `α_n + β_n − 1`
//! is exactly `γ_n`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LocalizationError {
    #[error("scheme parameter {name} = {value} is out of range ({expected})")]
    OutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("sample size n = {0} must be at least 2")]
    SampleTooSmall(usize),
    #[error("scheme infeasible at n = {n}: beta_n = {beta} < 0")]
    NegativeBeta { n: usize, beta: f64 },
    #[error("n-grid needs at least 3 strictly increasing sizes >= 2, got {0:?}")]
    BadGrid(Vec<usize>),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocalizationScheme {
    pub omega: f64,
    pub sigma0_sq: f64,
    pub c_alpha: f64,
    pub p: f64,
    /// Zero encodes the integrated case; `kappa` is then ignored.
    pub c_gamma: f64,
    #[serde(default)]
    pub kappa: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GarchParams {
    pub n: usize,
    pub alpha_n: f64,
    pub beta_n: f64,
    pub gamma_n: f64,
    pub omega: f64,
    pub sigma0_sq: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Regime {
    NearStationary,
    Integrated,
    NearExplosive,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::NearStationary => "near-stationary",
            Regime::Integrated => "integrated",
            Regime::NearExplosive => "near-explosive",
        })
    }
}

fn check_range(
    name: &'static str,
    value: f64,
    ok: bool,
    expected: &'static str,
) -> Result<(), LocalizationError> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(LocalizationError::OutOfRange {
            name,
            value,
            expected,
        })
    }
}

impl LocalizationScheme {
    pub fn validate(&self) -> Result<(), LocalizationError> {
        check_range("omega", self.omega, self.omega > 0.0, "> 0")?;
        check_range("sigma0_sq", self.sigma0_sq, self.sigma0_sq > 0.0, "> 0")?;
        check_range("c_alpha", self.c_alpha, self.c_alpha > 0.0, "> 0")?;
        check_range("p", self.p, self.p > 0.0 && self.p < 1.0, "in (0, 1)")?;
        check_range("c_gamma", self.c_gamma, true, "finite")?;
        if self.c_gamma != 0.0 {
            check_range(
                "kappa",
                self.kappa,
                self.kappa > 0.0 && self.kappa < 1.0,
                "in (0, 1)",
            )?;
        }
        Ok(())
    }

    /// The regime is fixed by the sign of `c_gamma` for every `n`.
    pub fn regime(&self) -> Regime {
        if self.c_gamma < 0.0 {
            Regime::NearStationary
        } else if self.c_gamma > 0.0 {
            Regime::NearExplosive
        } else {
            Regime::Integrated
        }
    }

    pub fn alpha_at(&self, n: usize) -> f64 {
        self.c_alpha * (n as f64).powf(-self.p)
    }

    pub fn gamma_at(&self, n: usize) -> f64 {
        if self.c_gamma == 0.0 {
            0.0
        } else {
            self.c_gamma * (n as f64).powf(-self.kappa)
        }
    }
}

pub fn realize_params(
    scheme: &LocalizationScheme,
    n: usize,
) -> Result<GarchParams, LocalizationError> {
    scheme.validate()?;
    if n < 2 {
        return Err(LocalizationError::SampleTooSmall(n));
    }
    let alpha_n = scheme.alpha_at(n);
    let gamma_n = scheme.gamma_at(n);
    let beta_n = 1.0 + gamma_n - alpha_n;
    if beta_n < 0.0 {
        return Err(LocalizationError::NegativeBeta { n, beta: beta_n });
    }
    Ok(GarchParams {
        n,
        alpha_n,
        beta_n,
        gamma_n,
        omega: scheme.omega,
        sigma0_sq: scheme.sigma0_sq,
    })
}

/// Exact sign test; integrated schemes store `gamma_n == 0.0` exactly.
pub fn classify_regime(params: &GarchParams) -> Regime {
    if params.gamma_n < 0.0 {
        Regime::NearStationary
    } else if params.gamma_n > 0.0 {
        Regime::NearExplosive
    } else {
        Regime::Integrated
    }
}

/// Diagnostics at one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateDiagnostics {
    pub n: usize,
    /// `α_n log log n`, should vanish.
    pub alpha_loglog: f64,
    /// `n α_n`, should diverge.
    pub n_alpha: f64,
    /// `√|γ_n| / (α_n n^{1/4})`, should diverge in the near-stationary case.
    pub sqrt_gamma_ratio: f64,
    /// `|γ_n|^{3/2} / (α_n n^{1/4})`, should vanish in the near-stationary case.
    pub gamma_three_halves_ratio: f64,
    /// `γ_n / α_n`, should vanish in the near-explosive case.
    pub gamma_alpha_ratio: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssumptionVerdict {
    /// Decided from the exponents of `n`.
    pub analytic: bool,
    /// Monotone trend in the right direction along the supplied grid.
    pub numeric_trend: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssumptionReport {
    pub regime: Regime,
    pub rows: Vec<RateDiagnostics>,
    pub rate_conditions: AssumptionVerdict,
    /// Only evaluated for near-stationary schemes.
    pub near_stationary_rates: Option<AssumptionVerdict>,
    /// Only evaluated for near-explosive schemes.
    pub near_explosive_rates: Option<AssumptionVerdict>,
}

fn increasing(xs: impl Iterator<Item = f64>) -> bool {
    let v: Vec<f64> = xs.collect();
    v.windows(2).all(|w| w[1] > w[0])
}

fn decreasing(xs: impl Iterator<Item = f64>) -> bool {
    let v: Vec<f64> = xs.collect();
    v.windows(2).all(|w| w[1] < w[0])
}

pub fn rate_diagnostics(scheme: &LocalizationScheme, n: usize) -> RateDiagnostics {
    let nf = n as f64;
    let alpha = scheme.alpha_at(n);
    let gamma = scheme.gamma_at(n);
    let quarter = nf.powf(0.25);
    RateDiagnostics {
        n,
        alpha_loglog: alpha * nf.ln().ln(),
        n_alpha: nf * alpha,
        sqrt_gamma_ratio: gamma.abs().sqrt() / (alpha * quarter),
        gamma_three_halves_ratio: gamma.abs().powf(1.5) / (alpha * quarter),
        gamma_alpha_ratio: gamma / alpha,
    }
}

pub fn check_assumptions(
    scheme: &LocalizationScheme,
    n_grid: &[usize],
) -> Result<AssumptionReport, LocalizationError> {
    scheme.validate()?;
    if n_grid.len() < 3 || n_grid[0] < 2 || n_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(LocalizationError::BadGrid(n_grid.to_vec()));
    }
    let rows: Vec<RateDiagnostics> = n_grid.iter().map(|&n| rate_diagnostics(scheme, n)).collect();
    let (p, kappa) = (scheme.p, scheme.kappa);
    let regime = scheme.regime();

    let rate_conditions = AssumptionVerdict {
        analytic: p > 0.0 && p < 1.0,
        numeric_trend: decreasing(rows.iter().map(|r| r.alpha_loglog))
            && increasing(rows.iter().map(|r| r.n_alpha)),
    };
    let near_stationary_rates = (regime == Regime::NearStationary).then(|| AssumptionVerdict {
        analytic: kappa / 2.0 + 0.25 < p && p < 1.5 * kappa + 0.25,
        numeric_trend: increasing(rows.iter().map(|r| r.sqrt_gamma_ratio))
            && decreasing(rows.iter().map(|r| r.gamma_three_halves_ratio)),
    });
    let near_explosive_rates = (regime == Regime::NearExplosive).then(|| AssumptionVerdict {
        analytic: kappa > p,
        numeric_trend: decreasing(rows.iter().map(|r| r.gamma_alpha_ratio)),
    });
    Ok(AssumptionReport {
        regime,
        rows,
        rate_conditions,
        near_stationary_rates,
        near_explosive_rates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn scheme(c_alpha: f64, p: f64, c_gamma: f64, kappa: f64) -> LocalizationScheme {
        LocalizationScheme {
            omega: 1.0,
            sigma0_sq: 1.0,
            c_alpha,
            p,
            c_gamma,
            kappa,
        }
    }

    #[test]
    fn realize_examples() {
        let g = realize_params(&scheme(1.0, 0.5, 0.0, 0.3), 100).unwrap();
        assert_relative_eq!(g.alpha_n, 0.1, max_relative = 1e-15);
        assert_eq!(g.gamma_n, 0.0);
        assert_relative_eq!(g.beta_n, 0.9, max_relative = 1e-15);

        let g = realize_params(&scheme(1.0, 0.5, -1.0, 0.4), 10_000).unwrap();
        assert_relative_eq!(g.alpha_n, 0.01, max_relative = 1e-15);
        // −10^{−1.6}
        assert_relative_eq!(g.gamma_n, -0.025_118_864_315_095_8, max_relative = 1e-13);
        assert_relative_eq!(g.beta_n, 0.964_881_135_684_904_2, max_relative = 1e-13);
        assert!((g.alpha_n + g.beta_n - 1.0 - g.gamma_n).abs() < 1e-16);

        let err = realize_params(&scheme(2.0, 0.1, 0.0, 0.5), 2).unwrap_err();
        assert!(matches!(err, LocalizationError::NegativeBeta { n: 2, .. }));
        assert!(realize_params(&scheme(1.0, 0.5, 0.0, 0.5), 1).is_err());
    }

    #[test]
    fn classify_examples() {
        let mut g = realize_params(&scheme(1.0, 0.5, -1.0, 0.4), 100).unwrap();
        g.gamma_n = -0.025;
        assert_eq!(classify_regime(&g), Regime::NearStationary);
        let g = realize_params(&scheme(1.0, 0.5, 0.0, 0.4), 100).unwrap();
        assert_eq!(classify_regime(&g), Regime::Integrated);
        let mut g = realize_params(&scheme(1.0, 0.5, 1.0, 0.6), 100).unwrap();
        g.gamma_n = 0.01;
        assert_eq!(classify_regime(&g), Regime::NearExplosive);
    }

    #[test]
    fn assumption_examples() {
        let grid = [1_000, 10_000, 100_000];
        let r = check_assumptions(&scheme(1.0, 0.6, -1.0, 0.4), &grid).unwrap();
        assert!(r.near_stationary_rates.unwrap().analytic);
        assert!(r.near_stationary_rates.unwrap().numeric_trend);
        assert!(r.near_explosive_rates.is_none());

        let r = check_assumptions(&scheme(1.0, 0.5, 1.0, 0.6), &grid).unwrap();
        assert!(r.near_explosive_rates.unwrap().analytic);

        let r = check_assumptions(&scheme(1.0, 0.3, -1.0, 0.4), &grid).unwrap();
        assert!(!r.near_stationary_rates.unwrap().analytic);

        assert!(matches!(
            check_assumptions(&scheme(1.0, 0.5, 1.0, 0.6), &[100, 1000]),
            Err(LocalizationError::BadGrid(_))
        ));
    }

    #[test]
    fn scheme_rejects_bad_exponents() {
        assert!(scheme(1.0, 1.0, 0.0, 0.5).validate().is_err());
        assert!(scheme(1.0, 0.5, -1.0, 0.0).validate().is_err());
        // kappa is ignored in the integrated case
        assert!(scheme(1.0, 0.5, 0.0, 0.0).validate().is_ok());
    }

    proptest! {
        #[test]
        fn regime_tracks_sign_of_c_gamma(
            c_gamma in prop_oneof![Just(0.0), -2.0f64..-0.01, 0.01f64..2.0],
            kappa in 0.05f64..0.95,
            n in 10usize..1_000_000,
        ) {
            let s = scheme(0.5, 0.5, c_gamma, kappa);
            if let Ok(g) = realize_params(&s, n) {
                prop_assert_eq!(classify_regime(&g), s.regime());
            }
        }

        #[test]
        // α_n log log n only decreases from n = 16 on when p ln n ln ln n > 1
        // there, i.e. p above roughly 0.354.
        fn alpha_diagnostics_are_monotone(p in 0.36f64..0.99, c in 0.1f64..3.0) {
            let s = scheme(c, p, 0.0, 0.5);
            let rows: Vec<_> = (0..20).map(|e| rate_diagnostics(&s, 16usize << e)).collect();
            for w in rows.windows(2) {
                prop_assert!(w[1].n_alpha > w[0].n_alpha);
                prop_assert!(w[1].alpha_loglog < w[0].alpha_loglog);
            }
        }

        #[test]
        fn analytic_verdicts_follow_exponent_signs(p in 0.01f64..0.99, kappa in 0.01f64..0.99) {
            let grid = [1_000, 10_000, 100_000];
            let ns = check_assumptions(&scheme(1.0, p, -1.0, kappa), &grid).unwrap();
            let v = ns.near_stationary_rates.unwrap();
            // exponents of √|γ|/(α n^{1/4}) and |γ|^{3/2}/(α n^{1/4})
            let e1 = p - kappa / 2.0 - 0.25;
            let e2 = p - 1.5 * kappa - 0.25;
            prop_assert_eq!(v.analytic, e1 > 0.0 && e2 < 0.0);
            if e1.abs() > 1e-3 && e2.abs() > 1e-3 {
                prop_assert_eq!(v.numeric_trend, v.analytic);
            }

            let ne = check_assumptions(&scheme(1.0, p, 1.0, kappa), &grid).unwrap();
            let v = ne.near_explosive_rates.unwrap();
            prop_assert_eq!(v.analytic, p - kappa < 0.0);
            if (p - kappa).abs() > 1e-3 {
                prop_assert_eq!(v.numeric_trend, v.analytic);
            }
        }
    }
}
