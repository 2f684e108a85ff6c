//! Schemes can come from JSON instead of the built-in catalog.

use inducing::descriptor;
use inducing::pressure::{solve_pl, Truncation, SOLVE_TOL};

const DESCRIPTOR: &str = r#"{
    "name": "two-then-geometric",
    "levels": [
        {"n": 1, "blocks": [{"j": 1, "tau": 1, "log_weights": {"phi": -0.2}},
                            {"j": 2, "tau": 1, "log_weights": {"phi": -1.0}}]},
        {"n": 2, "closed_form": {"phi": {"constant": -0.5, "per_index": -0.7}}}
    ],
    "tail": {"from_level": 3, "shape": "single", "weights": {"phi": {"per_level": -0.6}}},
    "potentials": {"phi": {"weights": {"phi": 1.0}}, "neg_tau": {"tau": -1.0}}
}"#;

fn main() -> inducing::Result<()> {
    let sys = descriptor::from_json(DESCRIPTOR)?;
    for n in 1..=4 {
        println!("level {n}: {:?}", sys.scheme.cardinality(n)?);
    }
    let s = solve_pl(
        &sys.potential("phi")?,
        &sys.scheme,
        &Truncation::default(),
        SOLVE_TOL,
    )?;
    println!("P_L(phi) = {:.12}", s.q_star);
    Ok(())
}
