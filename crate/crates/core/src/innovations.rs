//! i.i.d. innovation sequences with zero mean, unit variance and a finite
//! moment of order strictly above four.
//!
//! Randomness is keyed by an [`RngStream`]: a master seed plus a stream
//! index. Each `(master_seed, stream_index)` pair maps to its own ChaCha8
//! stream, so replication `i` draws the same numbers no matter which worker
//! runs it or in what order.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, StudentT};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};
use thiserror::Error;

use crate::limits::normal_cdf;

/// Student-t degrees of freedom must exceed this so that `E|ε|^{4+δ}` is
/// finite with `δ = 0.5`.
pub const MIN_STUDENT_DF: f64 = 4.5;

const UNIT_MEAN_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InnovationError {
    #[error("fourth-plus-δ moment not guaranteed: df = {0} must exceed {MIN_STUDENT_DF}")]
    HeavyTail(f64),
    #[error("Var(ε²) = 0: two-point values a = {a}, b = {b} give a degenerate ε²")]
    DegenerateXi { a: f64, b: f64 },
    #[error("two-point values of ε² must be non-negative (a = {a}, b = {b})")]
    NegativeSquare { a: f64, b: f64 },
    #[error("two-point weight w = {0} must lie in (0, 1)")]
    BadWeight(f64),
    #[error("two-point mixture has E ε² = {0}, expected 1")]
    NotUnitVariance(f64),
    #[error("innovation parameter is not finite")]
    NonFinite,
}

/// Law of the innovations `ε_t`.
///
/// The two-point mixture is parameterised on `ε²`: it takes value `a` with
/// probability `w` and `b` otherwise, and `ε = ±√(ε²)` with a fair sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InnovationSpec {
    StandardNormal,
    StudentTNormalized { df: f64 },
    TwoPointMixture { a: f64, b: f64, w: f64 },
}

/// Independent, reproducible random stream for one replication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        Self {
            master_seed,
            stream_index,
        }
    }

    /// Fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

impl InnovationSpec {
    pub fn validate(self) -> Result<Self, InnovationError> {
        validate_spec(self)
    }

    /// `E ε⁴`.
    pub fn fourth_moment(&self) -> f64 {
        match *self {
            InnovationSpec::StandardNormal => 3.0,
            InnovationSpec::StudentTNormalized { df } => 3.0 * (df - 2.0) / (df - 4.0),
            InnovationSpec::TwoPointMixture { a, b, w } => w * a * a + (1.0 - w) * b * b,
        }
    }

    /// CDF of `ε₀`, used as the reference law for normalised returns.
    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            InnovationSpec::StandardNormal => normal_cdf(x),
            InnovationSpec::StudentTNormalized { df } => {
                let t = StudentsT::new(0.0, 1.0, df).expect("validated df");
                t.cdf(x / student_scale(df))
            }
            InnovationSpec::TwoPointMixture { a, b, w } => {
                // atoms at ±√a (mass w/2 each) and ±√b (mass (1-w)/2 each)
                let atoms = [
                    (-a.sqrt(), w / 2.0),
                    (a.sqrt(), w / 2.0),
                    (-b.sqrt(), (1.0 - w) / 2.0),
                    (b.sqrt(), (1.0 - w) / 2.0),
                ];
                atoms
                    .iter()
                    .filter(|(v, _)| *v <= x)
                    .map(|(_, m)| m)
                    .sum::<f64>()
                    .min(1.0)
            }
        }
    }

    /// Quantile of `ε₀` (left-continuous inverse of [`InnovationSpec::cdf`]).
    pub fn quantile(&self, p: f64) -> f64 {
        use statrs::distribution::Normal;
        match *self {
            InnovationSpec::StandardNormal => Normal::standard().inverse_cdf(p),
            InnovationSpec::StudentTNormalized { df } => {
                let t = StudentsT::new(0.0, 1.0, df).expect("validated df");
                t.inverse_cdf(p) * student_scale(df)
            }
            InnovationSpec::TwoPointMixture { a, b, w } => {
                let mut atoms = [
                    (-a.sqrt(), w / 2.0),
                    (a.sqrt(), w / 2.0),
                    (-b.sqrt(), (1.0 - w) / 2.0),
                    (b.sqrt(), (1.0 - w) / 2.0),
                ];
                atoms.sort_by(|x, y| x.0.total_cmp(&y.0));
                let mut acc = 0.0;
                for (v, m) in atoms {
                    acc += m;
                    if p <= acc {
                        return v;
                    }
                }
                atoms[3].0
            }
        }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            InnovationSpec::StandardNormal => StandardNormal.sample(rng),
            InnovationSpec::StudentTNormalized { df } => {
                let t = StudentT::new(df).expect("validated df");
                t.sample(rng) * student_scale(df)
            }
            InnovationSpec::TwoPointMixture { a, b, w } => {
                let sq = if rng.random::<f64>() < w { a } else { b };
                let mag = sq.sqrt();
                if rng.random::<bool>() {
                    mag
                } else {
                    -mag
                }
            }
        }
    }
}

fn student_scale(df: f64) -> f64 {
    ((df - 2.0) / df).sqrt()
}

/// Check mean zero, unit variance, a finite `(4+δ)`-moment and `Var(ε²) > 0`.
pub fn validate_spec(spec: InnovationSpec) -> Result<InnovationSpec, InnovationError> {
    match spec {
        InnovationSpec::StandardNormal => Ok(spec),
        InnovationSpec::StudentTNormalized { df } => {
            if !df.is_finite() {
                return Err(InnovationError::NonFinite);
            }
            if df <= MIN_STUDENT_DF {
                return Err(InnovationError::HeavyTail(df));
            }
            Ok(spec)
        }
        InnovationSpec::TwoPointMixture { a, b, w } => {
            if !(a.is_finite() && b.is_finite() && w.is_finite()) {
                return Err(InnovationError::NonFinite);
            }
            // |a| = |b| makes ε² constant whether the pair is read as values
            // of ε or of ε².
            if a.abs() == b.abs() {
                return Err(InnovationError::DegenerateXi { a, b });
            }
            if a < 0.0 || b < 0.0 {
                return Err(InnovationError::NegativeSquare { a, b });
            }
            if !(w > 0.0 && w < 1.0) {
                return Err(InnovationError::BadWeight(w));
            }
            let mean_sq = w * a + (1.0 - w) * b;
            if (mean_sq - 1.0).abs() > UNIT_MEAN_TOL {
                return Err(InnovationError::NotUnitVariance(mean_sq));
            }
            Ok(spec)
        }
    }
}

/// Draw `count` i.i.d. innovations from the start of `stream`.
pub fn sample_innovations(spec: &InnovationSpec, count: usize, stream: RngStream) -> Vec<f64> {
    let mut rng = stream.rng();
    (0..count).map(|_| spec.draw(&mut rng)).collect()
}

/// `E ξ₀² = E ε₀⁴ − 1` where `ξ = ε² − 1`.
pub fn xi_second_moment(spec: &InnovationSpec) -> f64 {
    spec.fourth_moment() - 1.0
}
