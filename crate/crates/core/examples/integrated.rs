//! Integrated regime: the volatility statistic against sampled
//! `∫_0^t x dW(x)` at each checkpoint.
//!
//! ```bash
//! cargo run --release --example integrated
//! ```

use mildgarch::innovations::InnovationSpec;
use mildgarch::localization::LocalizationScheme;
use mildgarch::mc_harness::{run_experiment, McConfig, TestKind};
use mildgarch::statistics::{CheckpointGrid, NormalizationMode};

fn main() {
    let config = McConfig {
        scheme: LocalizationScheme {
            omega: 1.0,
            sigma0_sq: 1.0,
            c_alpha: 1.0,
            p: 0.6,
            c_gamma: 0.0,
            kappa: 0.0,
        },
        innovation: InnovationSpec::StudentTNormalized { df: 10.0 },
        n: 5000,
        grid: CheckpointGrid::new(vec![0.2, 0.4, 0.6, 0.8]).unwrap(),
        reps: 2000,
        master_seed: 7,
        mode: NormalizationMode::Classical,
        tests: [TestKind::VolGof, TestKind::RetGof, TestKind::Independence].into_iter().collect(),
        level: 0.01,
        corrupt_centering: false,
    };
    let report = run_experiment(&config).unwrap();
    for (row, cp) in report.gof(TestKind::VolGof).unwrap().iter().zip(&report.checkpoints) {
        let target_sd = (row.t.powi(3) / 3.0).sqrt();
        println!(
            "t={:.1}: sd {:.4} (limit {:.4})  two-sample D={:.4} p={:.3}",
            row.t, cp.vol.sd, target_sd, row.result.statistic, row.result.p_value
        );
    }
    for row in report.gof(TestKind::RetGof).unwrap() {
        println!("returns t={:.1}: D={:.4}", row.t, row.result.statistic);
    }
    println!("increment |corr| {:.4}, pass {}", report.max_abs_corr().unwrap(), report.pass);
}
