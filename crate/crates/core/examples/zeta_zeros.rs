//! Zeros of zeta and of L(s, chi_D) on the critical line, counted by the
//! argument principle.
//!
//! cargo run --release --example zeta_zeros -- -4 60

use explicit_formula::zeros::{self, LFunctionId};
use num_complex::Complex64;

fn main() -> explicit_formula::Result<()> {
    let mut args = std::env::args().skip(1);
    let d: i64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(-4);
    let height: f64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(40.0);

    for id in [LFunctionId::zeta(), LFunctionId::dirichlet(d)?] {
        let list = zeros::find_zeros(&id, height)?;
        println!(
            "{id}: N({height}) = {} by the argument principle, main term {:.2}, certified = {}",
            zeros::argument_count(&id, height)?,
            zeros::zero_count_estimate(&id, height)?,
            list.certified
        );
        for g in list.ordinates.iter().take(5) {
            let residual = zeros::l_value(&id, Complex64::new(0.5, *g))?.norm();
            println!("  gamma = {g:.12}  |L(1/2 + i gamma)| = {residual:.1e}");
        }
    }
    let l1 = zeros::l_value(&LFunctionId::dirichlet(-4)?, Complex64::new(1.0, 0.0))?;
    println!("L(1, chi_-4) - pi/4 = {:.1e}", l1.re - std::f64::consts::FRAC_PI_4);
    Ok(())
}
