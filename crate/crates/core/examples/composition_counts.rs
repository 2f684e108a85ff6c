//! The counting bounds behind the liftability argument.

use inducing::liftability::{binom_entropy_check, gamma_count, k1_threshold, GammaMode};

fn main() -> inducing::Result<()> {
    let b = binom_entropy_check(30)?;
    println!(
        "C(n, m) <= exp(n h(m/n)) for n <= 30: {} (worst ratio {:.4})",
        b.holds(),
        b.worst_ratio
    );

    println!(
        "{:>3} {:>3} {:>6} {:>12} {:>14}",
        "n", "N", "delta", "exact", "bound"
    );
    for (n, big_n, delta) in [(10, 2, 0.1), (16, 5, 0.05), (20, 10, 0.1), (24, 10, 0.05)] {
        let exact = gamma_count(n, big_n, delta, GammaMode::Exact)?.as_f64();
        let bound = gamma_count(n, big_n, delta, GammaMode::Bound)?.as_f64();
        println!("{n:>3} {big_n:>3} {delta:>6} {exact:>12} {bound:>14.2}");
    }
    println!("K_1(0.5, 0.05, 2) = {:.7}", k1_threshold(0.5, 0.05, 2.0)?);
    Ok(())
}
