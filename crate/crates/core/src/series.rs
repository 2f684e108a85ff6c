//! Extended-real sums and the geometric closed forms every certified sum
//! in the crate reduces to.

use serde::{Deserialize, Serialize};

/// Outcome of a possibly infinite series of nonnegative (or absolutely
/// summable) terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "kebab-case")]
pub enum SeriesValue {
    Finite(f64),
    Divergent,
    Undetermined,
}

impl SeriesValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            SeriesValue::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_divergent(self) -> bool {
        matches!(self, SeriesValue::Divergent)
    }

    pub fn is_finite(self) -> bool {
        matches!(self, SeriesValue::Finite(_))
    }

    /// Natural log with `log 0 = -inf`, `log inf = +inf`.
    pub fn ln(self) -> Option<f64> {
        match self {
            SeriesValue::Finite(v) => Some(v.ln()),
            SeriesValue::Divergent => Some(f64::INFINITY),
            SeriesValue::Undetermined => None,
        }
    }
}

/// Divergence dominates; an undetermined part poisons an otherwise finite
/// total.
impl std::ops::Add for SeriesValue {
    type Output = SeriesValue;

    fn add(self, other: SeriesValue) -> SeriesValue {
        use SeriesValue::*;
        match (self, other) {
            (Divergent, _) | (_, Divergent) => Divergent,
            (Undetermined, _) | (_, Undetermined) => Undetermined,
            (Finite(a), Finite(b)) => Finite(a + b),
        }
    }
}

impl std::iter::Sum for SeriesValue {
    fn sum<I: Iterator<Item = SeriesValue>>(iter: I) -> Self {
        iter.fold(SeriesValue::Finite(0.0), |a, b| a + b)
    }
}

/// `sum_{j >= start} j^k e^{b j}` for `k in {0, 1}`; `None` when `b >= 0`.
pub fn exp_power_sum(b: f64, k: u32, start: u64) -> Option<f64> {
    if !(b < 0.0) {
        return None;
    }
    let s = start as f64;
    let x = b.exp();
    let one_minus = -b.exp_m1();
    let lead = (b * s).exp();
    match k {
        0 => Some(lead / one_minus),
        1 => Some(lead * (s - (s - 1.0) * x) / (one_minus * one_minus)),
        _ => panic!("exp_power_sum supports k in {{0, 1}}"),
    }
}

/// Binary entropy `-t log t - (1-t) log(1-t)` on `[0, 1]`, zero at the ends.
pub fn binary_entropy(t: f64) -> f64 {
    let term = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.ln() };
    term(t) + term(1.0 - t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(b: f64, k: u32, start: u64) -> f64 {
        (start..start + 4000)
            .map(|j| (j as f64).powi(k as i32) * (b * j as f64).exp())
            .sum()
    }

    #[test]
    fn closed_forms_match_partial_sums() {
        for &b in &[-0.05, -0.3, -std::f64::consts::LN_2, -2.0] {
            for k in 0..2 {
                for start in [1u64, 2, 7] {
                    let cf = exp_power_sum(b, k, start).unwrap();
                    let bf = brute(b, k, start);
                    assert!(
                        (cf - bf).abs() <= 1e-10 * bf.max(1.0),
                        "b={b} k={k} s={start}"
                    );
                }
            }
        }
    }

    #[test]
    fn nonnegative_exponent_diverges() {
        assert_eq!(exp_power_sum(0.0, 0, 1), None);
        assert_eq!(exp_power_sum(0.1, 1, 1), None);
    }

    #[test]
    fn divergence_dominates() {
        let s: SeriesValue = [
            SeriesValue::Finite(1.0),
            SeriesValue::Undetermined,
            SeriesValue::Divergent,
        ]
        .into_iter()
        .sum();
        assert_eq!(s, SeriesValue::Divergent);
        assert_eq!(SeriesValue::Finite(0.0).ln(), Some(f64::NEG_INFINITY));
    }
}
