//! Share of time spent low in the tower: positive for a liftable measure,
//! drifting to zero for one with infinite mean return time.

use inducing::catalog;
use inducing::liftability::frequency_diagnostic;
use inducing::measure::InducedMeasure;
use inducing::pressure::{liftable_pressure, Truncation};

fn main() -> inducing::Result<()> {
    let sys = catalog::renewal(0.3)?;
    let (_, g) = liftable_pressure(&sys.potential("phi")?, &sys.scheme, &Truncation::default())?;
    let ns = [1_000, 10_000, 100_000];

    let rep = frequency_diagnostic(&g.measure, &[1, 3], &ns, 5, 1)?;
    for r in &rep.rows {
        println!(
            "renewal  N={} n={:>6}: {:.4} +- {:.4}",
            r.big_n, r.n, r.mean, r.std
        );
    }
    println!("tower mass below N: {:?}", rep.tower_mass);

    let heavy = InducedMeasure::power_law(2.0)?;
    let rep = frequency_diagnostic(&heavy, &[3], &ns, 10, 1)?;
    for r in &rep.rows {
        println!(
            "a^-2     N={} n={:>6}: {:.4} +- {:.4}",
            r.big_n, r.n, r.mean, r.std
        );
    }
    Ok(())
}
