//! Near-explosive regime: volatility statistic against W(t) marginals, with
//! overflow-safe evaluation once σ² leaves the f64 range.
//!
//! ```bash
//! cargo run --release --example near_explosive
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
            p: 0.5,
            c_gamma: 1.0,
            kappa: 0.6,
        },
        innovation: InnovationSpec::StandardNormal,
        n: 5000,
        grid: CheckpointGrid::new(vec![0.2, 0.4, 0.6, 0.8]).unwrap(),
        reps: 2000,
        master_seed: 99,
        mode: NormalizationMode::Classical,
        tests: [TestKind::VolGof, TestKind::RetGof, TestKind::Independence].into_iter().collect(),
        level: 0.01,
        corrupt_centering: false,
    };
    let report = run_experiment(&config).unwrap();
    println!("gamma_n = {:.5}, k*gamma at last checkpoint = {:.2}", report.params.gamma_n, report.params.gamma_n * report.checkpoints.last().unwrap().k as f64);
    for (row, cp) in report.gof(TestKind::VolGof).unwrap().iter().zip(&report.checkpoints) {
        println!(
            "t={:.1}: sd {:.4} (limit {:.4}) skew {:+.3}  D={:.4}",
            row.t,
            cp.vol.sd,
            row.t.sqrt(),
            cp.vol.skewness.unwrap_or(0.0),
            row.result.statistic
        );
    }
    println!("pass {}", report.pass);
}
