//! Weighted complexity on a scheme with infinitely many blocks per level.

use inducing::catalog;
use inducing::complexity::{kappa_of, level_sum_u, u_t};

fn main() -> inducing::Result<()> {
    let sys = catalog::weighted_infinite(0.3)?;
    let phi = sys.potential("phi")?;
    let neg_j = sys.potential("neg_j")?;

    for n in [1, 5, 10, 20] {
        println!(
            "n = {n:>2}: cardinality {:?}, U_n = {:?}",
            sys.scheme.cardinality(n)?,
            level_sum_u(&sys.scheme, &phi, n)?
        );
    }
    let k = kappa_of(&sys.scheme, &phi, (1, 40))?;
    println!("kappa = {} ({:?})", k.value, k.status);

    // psi = -j: the index sum diverges once t <= -log 2
    for t in [-1.0, -0.7, -0.69, 0.0, 0.5] {
        println!("u_5({t:+.2}) = {:?}", u_t(&sys.scheme, &phi, &neg_j, t, 5)?);
    }
    Ok(())
}
