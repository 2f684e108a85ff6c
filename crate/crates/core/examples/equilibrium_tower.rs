//! Equilibrium measure `mu_t` of `phi + t psi` lifted to the tower.

use inducing::catalog;
use inducing::complexity::{admissible_interval, grid};
use inducing::pressure::{equilibrium_measure, Truncation};
use inducing::BlockId;

fn main() -> inducing::Result<()> {
    let sys = catalog::renewal(0.3)?;
    let phi = sys.potential("phi")?;
    let psi = sys.potential("indicator1")?;
    let trunc = Truncation::default();
    let iv = admissible_interval(
        &sys.scheme,
        &phi,
        &psi,
        -1.0,
        1.0,
        &grid(-1.0, 1.0, 0.25)?,
        &trunc,
    )?;

    for t in [-0.5, 0.0, 0.5] {
        let mu = equilibrium_measure(&phi, &psi, t, &sys.scheme, &iv, &trunc)?;
        let floors: Vec<String> = (0..5)
            .map(|k| Ok(format!("{:.4}", mu.level_mass(k)?)))
            .collect::<inducing::Result<_>>()?;
        println!(
            "t = {t:+.1}: Q = {:.6}, mu(height = k) = [{}]",
            mu.kac,
            floors.join(", ")
        );
        println!(
            "         slab (J_3, 2) = {:.6}",
            mu.slab(BlockId::new(3, 1), 2)?
        );
    }
    Ok(())
}
