//! Closed-form exponential sums against direct summation.
//!
//! ```bash
//! cargo run --example sum_identities
//! ```

use mildgarch::statistics::sums::{geometric_exp_sum, log_geometric_exp_sum, weighted_exp_sum};

fn main() {
    for (a, k) in [(0.0, 10usize), (-1e-9, 1_000_000), (-0.05, 100_000), (0.01, 5000)] {
        let direct: f64 = (1..k).map(|j| (j as f64 * a).exp()).sum();
        println!("sum_(j<{k}) e^(j*{a:e}) = {:.12e} (direct {:.12e})", geometric_exp_sum(a, k), direct);
    }
    // stays finite where the linear sum overflows
    println!("ln sum_(j<5000) e^j = {:.6}", log_geometric_exp_sum(1.0, 5000));

    let (g, k) = (-0.05f64, 1_000_000usize);
    let kf = k as f64;
    println!(
        "(g^2/k) sum_(j<=k) j e^(j g/sqrt k) = {:.6}  (Gamma(2) = 1)",
        g * g / kf * weighted_exp_sum(g / kf.sqrt(), k)
    );
}
