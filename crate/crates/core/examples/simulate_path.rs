//! Simulate one path in each regime and print a few volatility values.
//!
//! ```bash
//! cargo run --example simulate_path
//! ```

use mildgarch::garch_sim::simulate_path;
use mildgarch::innovations::{InnovationSpec, RngStream};
use mildgarch::localization::{realize_params, LocalizationScheme};

fn main() {
    let n = 5000;
    for (c_gamma, p, kappa) in [(-1.0, 0.5, 0.4), (0.0, 0.6, 0.4), (1.0, 0.5, 0.6)] {
        let scheme = LocalizationScheme {
            omega: 1.0,
            sigma0_sq: 1.0,
            c_alpha: 1.0,
            p,
            c_gamma,
            kappa,
        };
        let params = realize_params(&scheme, n).expect("valid scheme");
        let path = simulate_path(&params, &InnovationSpec::StandardNormal, RngStream::new(7, 0));
        println!(
            "{:<15} alpha={:.5} beta={:.5} gamma={:+.5}",
            scheme.regime(),
            params.alpha_n,
            params.beta_n,
            params.gamma_n
        );
        for t in [0, n / 4, n / 2, 3 * n / 4, n] {
            println!("  t={t:>5}  sigma^2={:>14.4}  u={:>+10.4}", path.sigma_sq[t], path.u[t]);
        }
    }
}
