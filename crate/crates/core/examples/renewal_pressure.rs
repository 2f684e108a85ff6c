//! Liftable pressure and Gibbs measure of the renewal scheme `R(beta)`.
//!
//! One block per inducing time `n` with `phi_bar = -beta n`, so the root of
//! `sum_n exp(-(beta + q) n) = 1` is `q* = log 2 - beta` and the Gibbs
//! weights are `2^-n`.

use inducing::catalog;
use inducing::pressure::{self, Truncation};
use inducing::BlockId;

fn main() -> inducing::Result<()> {
    let sys = catalog::renewal(0.3)?;
    let phi = sys.potential("phi")?;
    let (solve, g) = pressure::liftable_pressure(&phi, &sys.scheme, &Truncation::default())?;

    println!(
        "P_L(phi) = {:.12}  (log 2 - 0.3 = {:.12})",
        solve.q_star,
        std::f64::consts::LN_2 - 0.3
    );
    println!(
        "bisection bracket {:?} after {} evaluations",
        solve.bracket, solve.evaluations
    );
    for a in 1..=6 {
        println!("  nu(J_{a}) = {:.6}", g.weight(BlockId::new(a, 1))?);
    }
    println!("gibbs K = {:.3e}, Q = {:.10}", g.gibbs_k, g.kac);
    Ok(())
}
