//! Caratheodory-Pesin sums and set pressure on a finite full shift.

use inducing::liftability::{carath_sum, set_pressure, FiniteShift, SymbolSet, DEFAULT_CAP};

fn main() -> inducing::Result<()> {
    let shift = FiniteShift::counting(2)?;
    let all = SymbolSet::everything();

    for alpha in [0.5, 0.69, 0.7, 1.0] {
        let c = carath_sum(&shift, &all, alpha, 16, 2000)?;
        println!(
            "M(Z, {alpha}, 16) <= {:.4e} (uniform depth {})",
            c.value, c.uniform_depth
        );
    }

    let sp = set_pressure(
        &shift,
        &all,
        (-1.0, 3.0),
        &[8, 16, 32, 64],
        1e-6,
        DEFAULT_CAP,
    )?;
    println!(
        "P_Z(full shift) = {:.5} in {:?} ({:?})",
        sp.estimate, sp.bracket, sp.status
    );

    let union = SymbolSet::Cylinders(vec![vec![0, 1], vec![1, 1, 0]]);
    let sp = set_pressure(
        &shift,
        &union,
        (-1.0, 3.0),
        &[8, 16, 32, 64],
        1e-6,
        DEFAULT_CAP,
    )?;
    println!("P_Z([01] u [110]) = {:.5}", sp.estimate);

    let point = SymbolSet::PeriodicPoint(vec![0, 1]);
    let sp = set_pressure(
        &shift,
        &point,
        (-1.0, 3.0),
        &[8, 16, 32, 64],
        1e-6,
        DEFAULT_CAP,
    )?;
    println!("P_Z(periodic point) = {:.5}", sp.estimate);
    Ok(())
}
