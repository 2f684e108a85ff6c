//! A depth-2 potential on a two-symbol scheme: pressure from the truncated
//! transfer operator and the resulting Markov Gibbs measure.

use inducing::catalog::{self, MARKOV2_SYMBOLS};
use inducing::measure::InducedMeasure;
use inducing::potential::normalize;
use inducing::pressure::{
    gibbs, induced_pressure, solve_pl, TransferOperatorTruncation, Truncation, SOLVE_TOL,
};

fn main() -> inducing::Result<()> {
    let c = [[0.1, -0.4], [0.3, 0.2]];
    let sys = catalog::markov2(c)?;
    let pot = sys.potential("c")?;
    let trunc = Truncation::default();

    let op = TransferOperatorTruncation::build(&pot, &sys.scheme, &trunc)?;
    println!("states {:?}", op.alphabet);
    println!("spectral radius {:.12}", op.spectral.eigenvalue);
    println!("P(c) = {:?}", induced_pressure(&pot, &sys.scheme, &trunc)?);

    let q = solve_pl(&pot, &sys.scheme, &trunc, SOLVE_TOL)?.q_star;
    let g = gibbs(&normalize(&pot, q), &sys.scheme, &trunc, 4)?;
    println!("q* = {q:.12}, gibbs K = {:.6}", g.gibbs_k);
    for a in MARKOV2_SYMBOLS {
        println!("  nu({a}) = {:.10}", g.weight(a)?);
    }
    if let InducedMeasure::Markov(m) = &g.measure {
        println!("transition {:?}", m.transition);
    }
    Ok(())
}
