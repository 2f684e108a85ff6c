//! The parameter interval where `kappa(t)` stays below the tangent line
//! `q_t = p + lambda t`, and the pressure curve on it.

use inducing::catalog;
use inducing::complexity::{admissible_interval, grid};
use inducing::pressure::{pressure_curve, Truncation, SOLVE_TOL};

fn main() -> inducing::Result<()> {
    let sys = catalog::renewal(0.3)?;
    let phi = sys.potential("phi")?;
    let psi = sys.potential("indicator1")?;
    let trunc = Truncation::default();
    let ts = grid(-0.5, 0.5, 0.1)?;

    let iv = admissible_interval(&sys.scheme, &phi, &psi, -5.0, 2.0, &ts, &trunc)?;
    println!("p = {:.9}, lambda = {:.9}", iv.p, iv.lambda);
    println!("interval ({:.6}, {:.6})", iv.t_lower, iv.t_upper);

    let curve = pressure_curve(&phi, &psi, &sys.scheme, &iv, &ts, &trunc, SOLVE_TOL)?;
    println!("{:>6} {:>12} {:>12} {:>10}", "t", "p_t", "q_t", "chain");
    for c in &curve.points {
        let p = c.p_t.unwrap_or(f64::NAN);
        println!(
            "{:>6.2} {:>12.9} {:>12.9} {:>10}",
            c.t, p, c.q_t, !c.chain_failed
        );
    }
    Ok(())
}
