//! Near-stationary limit check: volatility statistic against N(0, 1) and
//! returns against the innovation law.
//!
//! ```bash
//! cargo run --release --example near_stationary
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
            c_gamma: -1.0,
            kappa: 0.4,
        },
        innovation: InnovationSpec::StandardNormal,
        n: 5000,
        grid: CheckpointGrid::new(vec![0.2, 0.4, 0.6, 0.8]).unwrap(),
        reps: 2000,
        master_seed: 2024,
        mode: NormalizationMode::Classical,
        tests: [TestKind::VolGof, TestKind::RetGof, TestKind::Independence, TestKind::TauCoupling]
            .into_iter()
            .collect(),
        level: 0.01,
        corrupt_centering: false,
    };
    let report = run_experiment(&config).unwrap();
    for cp in &report.checkpoints {
        println!(
            "t={:.1} k={:>4}  vol mean {:+.3} sd {:.3} skew {:+.3}   ret sd {:.3}",
            cp.t,
            cp.k,
            cp.vol.mean,
            cp.vol.sd,
            cp.vol.skewness.unwrap_or(0.0),
            cp.ret.sd
        );
    }
    for test in [TestKind::VolGof, TestKind::RetGof] {
        for row in report.gof(test).unwrap() {
            println!("{test:?} t={:.1}: D={:.4} p={:.3}", row.t, row.result.statistic, row.result.p_value);
        }
    }
    println!("max |corr| {:.4}", report.max_abs_corr().unwrap());
    println!("E coupling {:.3e}", report.mean_of(TestKind::TauCoupling).unwrap());
    println!("overall pass: {}", report.pass);
}
