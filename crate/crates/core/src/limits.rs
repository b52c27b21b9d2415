//! Reference limit laws sampled jointly on a checkpoint grid.

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::innovations::RngStream;
use crate::statistics::CheckpointGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimitLaw {
    StdNormalIid,
    /// `∫_0^t x dW(x)`, `Cov = min(t, s)³/3`.
    TimeWeightedWiener,
    /// `W(t)`, `Cov = min(t, s)`.
    WienerMarginals,
}

/// `reps × checkpoints` draws, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitSample {
    pub law: LimitLaw,
    pub t_values: Vec<f64>,
    pub draws: Vec<Vec<f64>>,
}

impl LimitSample {
    pub fn column(&self, m: usize) -> Vec<f64> {
        self.draws.iter().map(|row| row[m]).collect()
    }
}

/// `Φ(x)` via `erfc`, accurate to ~1e-16 absolute.
pub fn normal_cdf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    0.5 * statrs::function::erf::erfc(-x / std::f64::consts::SQRT_2)
}

pub fn covariance(law: LimitLaw, t_values: &[f64]) -> Vec<Vec<f64>> {
    let n = t_values.len();
    let mut c = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let m = t_values[i].min(t_values[j]);
            c[i][j] = match law {
                LimitLaw::StdNormalIid => {
                    if i == j {
                        1.0
                    } else {
                        0.0
                    }
                }
                LimitLaw::TimeWeightedWiener => m.powi(3) / 3.0,
                LimitLaw::WienerMarginals => m,
            };
        }
    }
    c
}

/// Lower-triangular `L` with `L Lᵀ = c`. Tiny negative pivots from rounding
/// are clamped to zero, so semi-definite input is accepted.
pub fn cholesky(c: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = c.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..j).map(|m| l[i][m] * l[j][m]).sum();
            if i == j {
                l[i][i] = (c[i][i] - s).max(0.0).sqrt();
            } else if l[j][j] > 0.0 {
                l[i][j] = (c[i][j] - s) / l[j][j];
            }
        }
    }
    l
}

/// Joint draws of `law` at arbitrary time points.
pub fn sample_law(law: LimitLaw, t_values: &[f64], reps: usize, stream: RngStream) -> LimitSample {
    let l = cholesky(&covariance(law, t_values));
    let dim = t_values.len();
    let mut rng = stream.rng();
    let draws = (0..reps)
        .map(|_| {
            let z: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(&mut rng)).collect();
            (0..dim)
                .map(|i| (0..=i).map(|j| l[i][j] * z[j]).sum())
                .collect()
        })
        .collect();
    LimitSample {
        law,
        t_values: t_values.to_vec(),
        draws,
    }
}

pub fn sample_std_normal_iid(dim: usize, reps: usize, stream: RngStream) -> LimitSample {
    assert!(dim >= 1 && reps >= 1, "need at least one column and one row");
    let t: Vec<f64> = (1..=dim).map(|m| m as f64 / (dim + 1) as f64).collect();
    sample_law(LimitLaw::StdNormalIid, &t, reps, stream)
}

pub fn sample_time_weighted_wiener(grid: &CheckpointGrid, reps: usize, stream: RngStream) -> LimitSample {
    sample_law(LimitLaw::TimeWeightedWiener, &grid.t_values, reps, stream)
}

pub fn sample_wiener_marginals(grid: &CheckpointGrid, reps: usize, stream: RngStream) -> LimitSample {
    sample_law(LimitLaw::WienerMarginals, &grid.t_values, reps, stream)
}
