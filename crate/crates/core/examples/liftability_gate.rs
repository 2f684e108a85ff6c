use inducing::catalog;
use inducing::complexity::kappa_of;
use inducing::liftability::{lifting_gate, measure_pressure, GateInput};
use inducing::measure::lift_measure;
use inducing::pressure::{liftable_pressure, Truncation};

fn main() -> inducing::Result<()> {
    let sys = catalog::renewal(0.3)?;
    let phi = sys.potential("phi")?;
    let (_, g) = liftable_pressure(&phi, &sys.scheme, &Truncation::default())?;

    let p_mu = measure_pressure(&g.measure, &phi)?;
    let mass_on_w = lift_measure(&g.measure)?.level_mass(0)?;
    let k = kappa_of(&sys.scheme, &phi, (1, 30))?.value;
    println!("P_mu = {p_mu:.9}, mu(W) = {mass_on_w}, K(phi) = {k}");
    println!("{:?}", lifting_gate(GateInput { p_mu, mass_on_w }, k));
    println!("{:?}", lifting_gate(GateInput { p_mu: k, mass_on_w }, k));
    Ok(())
}
