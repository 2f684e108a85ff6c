//! Correlation decay and the CLT for a height observable on the tower over
//! the renewal Gibbs measure.

use inducing::catalog;
use inducing::pressure::{liftable_pressure, Truncation};
use inducing::stats::{clt_check, correlation_decay, sample_orbit};
use inducing::BlockId;

fn main() -> inducing::Result<()> {
    let sys = catalog::renewal(0.3)?;
    let (_, g) = liftable_pressure(&sys.potential("phi")?, &sys.scheme, &Truncation::default())?;
    let orbit = sample_orbit(&g.measure, 1_000_000, 2024)?;

    let half_power = |_: BlockId, k: u32| 0.5f64.powi(k as i32);
    let d = correlation_decay(&orbit, &half_power, &half_power, 10)?;
    for (k, c) in d.lags.iter().zip(&d.correlations) {
        println!("C({k:>2}) = {c:+.5}");
    }
    println!("fit {:?}", d.fit);

    let height0 = |_: BlockId, k: u32| if k == 0 { 0.5 } else { -0.5 };
    let clt = clt_check(&orbit, &height0, 1000)?;
    println!(
        "sigma^2 = {:.4}, KS = {:.4}, passed = {}",
        clt.sigma2, clt.ks, clt.passed
    );
    Ok(())
}
