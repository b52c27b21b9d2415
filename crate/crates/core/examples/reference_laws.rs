//! Sample the Gaussian limit laws and check their covariances, then run
//! the KS primitives on them.
//!
//! ```bash
//! cargo run --example reference_laws
//! ```

use mildgarch::gof::{ks_one_sample, ks_two_sample};
use mildgarch::innovations::RngStream;
use mildgarch::limits::{covariance, normal_cdf, sample_time_weighted_wiener, sample_wiener_marginals, LimitLaw};
use mildgarch::statistics::CheckpointGrid;

fn sample_cov(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let (ma, mb) = (a.iter().sum::<f64>() / n, b.iter().sum::<f64>() / n);
    a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)).sum::<f64>() / (n - 1.0)
}

fn main() {
    let grid = CheckpointGrid::new(vec![0.5, 0.8]).unwrap();
    let reps = 100_000;
    let tw = sample_time_weighted_wiener(&grid, reps, RngStream::new(5, 0));
    let w = sample_wiener_marginals(&grid, reps, RngStream::new(5, 1));
    for (name, s, law) in [("int x dW", &tw, LimitLaw::TimeWeightedWiener), ("W(t)", &w, LimitLaw::WienerMarginals)] {
        let c = covariance(law, &grid.t_values);
        println!(
            "{name:<9} Cov(0.5, 0.8) sample {:.5} exact {:.5}   Var(0.8) sample {:.5} exact {:.5}",
            sample_cov(&s.column(0), &s.column(1)),
            c[0][1],
            sample_cov(&s.column(1), &s.column(1)),
            c[1][1]
        );
    }
    let z: Vec<f64> = w.column(1).iter().map(|x| x / 0.8f64.sqrt()).collect();
    let one = ks_one_sample(&z, normal_cdf).unwrap();
    println!("W(0.8)/sqrt(0.8) vs N(0,1): D={:.5} p={:.3}", one.statistic, one.p_value);
    let two = ks_two_sample(&tw.column(0), &w.column(0)).unwrap();
    println!("int x dW at 0.5 vs W(0.5): D={:.4} p={:.2e}", two.statistic, two.p_value);
}
