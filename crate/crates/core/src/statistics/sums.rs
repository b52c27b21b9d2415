//! Closed forms for the exponential sums that centre the volatility statistics.
//!
//! Direct summation is only used as a test oracle.

/// `Σ_{j=1}^{k-1} e^{j a}`, exact `k − 1` at `a = 0`.
///
/// Evaluated as `e^a · expm1((k−1)a) / expm1(a)`, which keeps full relative
/// accuracy for `|a|` near zero.
pub fn geometric_exp_sum(a: f64, k: usize) -> f64 {
    assert!(k >= 2, "geometric_exp_sum needs k >= 2");
    let m = (k - 1) as f64;
    if a == 0.0 {
        return m;
    }
    a.exp() * (m * a).exp_m1() / a.exp_m1()
}

/// `ln Σ_{j=1}^{k-1} e^{j a}`, finite for any `a` and `k ≥ 2`.
pub fn log_geometric_exp_sum(a: f64, k: usize) -> f64 {
    assert!(k >= 2, "log_geometric_exp_sum needs k >= 2");
    let m = (k - 1) as f64;
    if a == 0.0 {
        return m.ln();
    }
    if a > 0.0 {
        // e^{(k-1)a} · (1 − e^{-(k-1)a}) / (1 − e^{-a})
        m * a + (-(-m * a).exp_m1()).ln() - (-(-a).exp_m1()).ln()
    } else {
        a + (-(m * a).exp_m1()).ln() - (-a.exp_m1()).ln()
    }
}

// Σ_{j=1}^{k} j^p for p = 1..=6.
fn power_sums(k: f64) -> [f64; 6] {
    let k1 = k + 1.0;
    let s1 = k * k1 / 2.0;
    let s2 = k * k1 * (2.0 * k + 1.0) / 6.0;
    let s3 = s1 * s1;
    let s4 = k * k1 * (2.0 * k + 1.0) * (3.0 * k * k + 3.0 * k - 1.0) / 30.0;
    let s5 = k * k * k1 * k1 * (2.0 * k * k + 2.0 * k - 1.0) / 12.0;
    let s6 = k * k1 * (2.0 * k + 1.0) * (3.0 * k.powi(4) + 6.0 * k.powi(3) - 3.0 * k + 1.0) / 42.0;
    [s1, s2, s3, s4, s5, s6]
}

/// `Σ_{j=1}^{k} j e^{j a}`.
///
/// For `k|a| < 10⁻³` a Taylor expansion in `a` over power sums is used; above
/// that the telescoped form `(Σ_{j≤k} e^{ja} − k e^{(k+1)a}) / (1 − e^a)`
/// loses at most `log10(2/(k|a|))` digits.
pub fn weighted_exp_sum(a: f64, k: usize) -> f64 {
    assert!(k >= 1, "weighted_exp_sum needs k >= 1");
    let kf = k as f64;
    if (kf * a).abs() < 1e-3 {
        let sums = power_sums(kf);
        let mut term = 1.0;
        let mut acc = 0.0;
        for (m, s) in sums.iter().enumerate() {
            if m > 0 {
                term *= a / m as f64;
            }
            acc += term * s;
        }
        return acc;
    }
    // Σ_{j=1}^{k} e^{ja} = geometric_exp_sum(a, k + 1)
    let g = geometric_exp_sum(a, k + 1);
    (g - kf * ((kf + 1.0) * a).exp()) / -a.exp_m1()
}

/// Streaming `ln Σ e^{x_i}`.
#[derive(Debug, Clone, Copy)]
pub struct LogSumExp {
    max: f64,
    sum: f64,
}

impl Default for LogSumExp {
    fn default() -> Self {
        Self {
            max: f64::NEG_INFINITY,
            sum: 0.0,
        }
    }
}

impl LogSumExp {
    pub fn push(&mut self, x: f64) {
        if x == f64::NEG_INFINITY {
            return;
        }
        if x <= self.max {
            self.sum += (x - self.max).exp();
        } else {
            self.sum = self.sum * (self.max - x).exp() + 1.0;
            self.max = x;
        }
    }

    pub fn value(&self) -> f64 {
        if self.sum == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.max + self.sum.ln()
        }
    }
}
