use inducing::catalog;
use inducing::liftability::{check_compatible, AmbientPartition};

fn main() -> inducing::Result<()> {
    let sys = catalog::mp_linear(0.5, 1.0)?;
    let canonical = AmbientPartition::canonical(&sys.scheme)?;
    println!(
        "canonical: {:?}",
        check_compatible(&canonical, &sys.scheme, 30)?
    );

    // f(J_3) = [1/8, 1/4), so a cut at 3/16 splits an intermediate image
    let split = canonical.split("left", 0.1875)?;
    println!(
        "split at 3/16: {:?}",
        check_compatible(&split, &sys.scheme, 30)?
    );
    Ok(())
}
