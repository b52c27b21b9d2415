//! Median remainder magnitudes across sample sizes.
//!
//! ```bash
//! cargo run --release --example remainder_orders
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
            c_gamma: -1.0,
            kappa: 0.4,
        },
        innovation: InnovationSpec::StandardNormal,
        n: 1000,
        grid: CheckpointGrid::new(vec![0.5]).unwrap(),
        reps: 200,
        master_seed: 3,
        mode: NormalizationMode::Classical,
        tests: [TestKind::Remainders].into_iter().collect(),
        level: 0.01,
        corrupt_centering: false,
    };
    let sweep = run_n_sweep(&config, &[1_000, 10_000, 100_000]).unwrap();
    println!("{:>7} {:>12} {:>12} {:>12} {:>12}", "n", "R2/a^2", "R2 lil", "R3 k/(a+g)", "|R1|");
    for r in &sweep.reports {
        let row = r.remainders().unwrap()[0];
        println!(
            "{:>7} {:>12.3} {:>12.3e} {:>12.3} {:>12.3e}",
            r.params.n, row.r2_scaled, row.r2_lil_max, row.r3_scaled, row.r1.abs()
        );
    }
    for t in &sweep.trends {
        println!("{} {:?}: {}", t.name, t.values, if t.pass { "within band" } else { "outside band" });
    }
}
