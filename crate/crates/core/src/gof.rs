//! Kolmogorov–Smirnov tests and cross-checkpoint correlations.

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_LEVEL: f64 = 0.01;
pub const MIN_SAMPLE: usize = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GofError {
    #[error("sample of size {got} is below the minimum {min}")]
    TooSmall { got: usize, min: usize },
    #[error("sample contains NaN")]
    NaN,
    #[error("need at least 2 columns, got {0}")]
    TooFewColumns(usize),
    #[error("column {0} has zero variance")]
    ZeroVariance(usize),
    #[error("row {row} has {got} columns, expected {expected}")]
    Ragged { row: usize, got: usize, expected: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GofResult {
    #[serde(rename = "D")]
    pub statistic: f64,
    pub p_value: f64,
    pub n_effective: f64,
    pub level: f64,
}

impl GofResult {
    fn new(statistic: f64, n_effective: f64) -> Self {
        Self {
            statistic,
            p_value: kolmogorov_p(n_effective.sqrt() * statistic),
            n_effective,
            level: DEFAULT_LEVEL,
        }
    }

    pub fn with_level(mut self, level: f64) -> Self {
        self.level = level;
        self
    }

    /// Not rejected at `level`.
    pub fn passes(&self) -> bool {
        self.p_value >= self.level
    }
}

/// `Q(λ) = P(K > λ) = 2 Σ_{k≥1} (−1)^{k−1} e^{−2k²λ²}`; for small `λ` the
/// dual series `1 − (√(2π)/λ) Σ e^{−(2k−1)²π²/(8λ²)}` is used.
pub fn kolmogorov_p(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    if lambda < 1.18 {
        let c = -std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda);
        let s: f64 = (1..=6)
            .map(|k| {
                let m = (2 * k - 1) as f64;
                (c * m * m).exp()
            })
            .sum();
        let cdf = (2.0 * std::f64::consts::PI).sqrt() / lambda * s;
        return (1.0 - cdf).clamp(0.0, 1.0);
    }
    let mut s = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        s += if k % 2 == 1 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}

fn sorted_checked(sample: &[f64]) -> Result<Vec<f64>, GofError> {
    if sample.iter().any(|x| x.is_nan()) {
        return Err(GofError::NaN);
    }
    let mut v = sample.to_vec();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

fn max_envelope(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        let d_plus = (i + 1) as f64 / n - f;
        let d_minus = f - i as f64 / n;
        d = d.max(d_plus).max(d_minus);
    }
    d
}

/// `D = sup |F̂ − F|`. Requires `MIN_SAMPLE` points; tiny samples are only
/// accepted through [`ks_statistic`].
pub fn ks_one_sample(sample: &[f64], cdf: impl Fn(f64) -> f64) -> Result<GofResult, GofError> {
    if sample.len() < MIN_SAMPLE {
        return Err(GofError::TooSmall {
            got: sample.len(),
            min: MIN_SAMPLE,
        });
    }
    let d = ks_statistic(sample, cdf)?;
    Ok(GofResult::new(d, sample.len() as f64))
}

/// The one-sample distance without a size floor.
pub fn ks_statistic(sample: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64, GofError> {
    let sorted = sorted_checked(sample)?;
    Ok(max_envelope(&sorted, cdf))
}

pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<GofResult, GofError> {
    for s in [a, b] {
        if s.len() < MIN_SAMPLE {
            return Err(GofError::TooSmall {
                got: s.len(),
                min: MIN_SAMPLE,
            });
        }
    }
    let a = sorted_checked(a)?;
    let b = sorted_checked(b)?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < a.len() && j < b.len() {
        // step past every copy of the smaller value in both samples
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] == x {
            i += 1;
        }
        while j < b.len() && b[j] == x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(GofResult::new(d, na * nb / (na + nb)))
}

/// Pearson correlations, `out[i][j]` for columns `i, j`.
pub fn pairwise_correlation(rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>, GofError> {
    if rows.len() < MIN_SAMPLE {
        return Err(GofError::TooSmall {
            got: rows.len(),
            min: MIN_SAMPLE,
        });
    }
    let dim = rows[0].len();
    if dim < 2 {
        return Err(GofError::TooFewColumns(dim));
    }
    for (r, row) in rows.iter().enumerate() {
        if row.len() != dim {
            return Err(GofError::Ragged {
                row: r,
                got: row.len(),
                expected: dim,
            });
        }
        if row.iter().any(|x| x.is_nan()) {
            return Err(GofError::NaN);
        }
    }
    let n = rows.len() as f64;
    let means: Vec<f64> = (0..dim)
        .map(|c| rows.iter().map(|r| r[c]).sum::<f64>() / n)
        .collect();
    let centred: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| r.iter().zip(&means).map(|(x, m)| x - m).collect())
        .collect();
    let mut cov = vec![vec![0.0; dim]; dim];
    for r in &centred {
        for i in 0..dim {
            for j in i..dim {
                cov[i][j] += r[i] * r[j];
            }
        }
    }
    for (c, row) in cov.iter().enumerate() {
        if row[c] <= 0.0 {
            return Err(GofError::ZeroVariance(c));
        }
    }
    let mut out = vec![vec![1.0; dim]; dim];
    for i in 0..dim {
        for j in i + 1..dim {
            let r = (cov[i][j] / (cov[i][i] * cov[j][j]).sqrt()).clamp(-1.0, 1.0);
            out[i][j] = r;
            out[j][i] = r;
        }
    }
    Ok(out)
}

/// Largest off-diagonal `|ρ|`.
pub fn max_abs_offdiag(corr: &[Vec<f64>]) -> f64 {
    let mut m: f64 = 0.0;
    for (i, row) in corr.iter().enumerate() {
        for (j, r) in row.iter().enumerate() {
            if i != j {
                m = m.max(r.abs());
            }
        }
    }
    m
}
