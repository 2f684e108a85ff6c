//! P3, P4 and P5 for a shifted potential, with their witnesses.

use inducing::catalog;
use inducing::potential::{check_p3, check_p4, check_p5, default_eps_grid, normalize};
use inducing::pressure::{gibbs, solve_pl, Truncation, SOLVE_TOL};

fn main() -> inducing::Result<()> {
    let sys = catalog::weighted_infinite(0.3)?;
    let phi = sys.potential("phi")?;
    let trunc = Truncation::default();
    let q = solve_pl(&phi, &sys.scheme, &trunc, SOLVE_TOL)?.q_star;

    let p3 = check_p3(&phi, &sys.scheme)?;
    println!("P3 {:?}: sum = {:?}", p3.status, p3.witness.sum);

    let norm = normalize(&phi, q);
    let p4 = check_p4(&norm, &sys.scheme, &default_eps_grid())?;
    println!("P4 {:?}: eps = {:?}", p4.status, p4.parameters.epsilon);

    let g = gibbs(&norm, &sys.scheme, &trunc, 3)?;
    let p5 = check_p5(&g.tail, 1..=30);
    println!(
        "P5 {:?}: C = {:?}, theta = {:?}",
        p5.status, p5.parameters.c, p5.parameters.theta
    );

    // pushing the tail weight up to the root breaks P3
    let heavy = phi.plus_tau(0.4);
    println!(
        "P3 for phi + 0.4 tau: {:?}",
        check_p3(&heavy, &sys.scheme)?.status
    );
    Ok(())
}
