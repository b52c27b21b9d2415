//! Mean squared discrepancy between the weighted double sum and its
//! single-sum replacement, near-explosive regime.
//!
//! ```bash
//! cargo run --release --example lemma_sweep
//! ```

use mildgarch::innovations::InnovationSpec;
use mildgarch::localization::LocalizationScheme;
use mildgarch::mc_harness::{run_n_sweep, McConfig, TestKind};
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
        n: 1000,
        grid: CheckpointGrid::new(vec![0.2, 0.4, 0.6, 0.8]).unwrap(),
        reps: 500,
        master_seed: 11,
        mode: NormalizationMode::Classical,
        tests: [TestKind::Lemma].into_iter().collect(),
        level: 0.01,
        corrupt_centering: false,
    };
    let sweep = run_n_sweep(&config, &[1_000, 10_000, 100_000]).unwrap();
    for r in &sweep.reports {
        let g = r.params.gamma_n;
        // E discrepancy ≈ Eξ²/(2nγ) once kγ is large
        let approx = 2.0 / (2.0 * r.params.n as f64 * g);
        println!("n={:>6}  mean {:.5}  (2/(2n gamma) = {:.5})", r.params.n, r.mean_of(TestKind::Lemma).unwrap(), approx);
    }
    println!("strictly decreasing: {}", sweep.pass);
}
