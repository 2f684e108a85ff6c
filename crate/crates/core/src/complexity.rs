//! Weighted level sums `U_n(omega)`, `u_n(t)` and the complexity `kappa(t)`.
//!
//! `u_n(t) = sum_{a in S_n} sup exp(phi_bar + t psi_bar)` and
//! `kappa(t) = limsup (1/n) log u_n(t)`. On the eventually affine schemes of
//! this crate the tail law fixes `kappa` exactly; elsewhere it is a windowed
//! regression slope.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::potential::{InducedPotential, PieceForm};
use crate::pressure::{self, Truncation};
use crate::report::Status;
use crate::scheme::{InducingScheme, Piece, TailShape};
use crate::series::SeriesValue;
use crate::sums::{self, Moment};

/// `U_n(omega)`.
pub fn level_sum_u(
    scheme: &InducingScheme,
    omega: &InducedPotential,
    n: u32,
) -> Result<SeriesValue> {
    sums::at_level(scheme, omega, Moment::One, n)
}

/// `u_n(t)`.
pub fn u_t(
    scheme: &InducingScheme,
    phi: &InducedPotential,
    psi: &InducedPotential,
    t: f64,
    n: u32,
) -> Result<SeriesValue> {
    level_sum_u(scheme, &phi.add_scaled(psi, t), n)
}

/// Exact `kappa` of a block-constant potential, read off the tail law.
pub(crate) fn kappa_closed_form(scheme: &InducingScheme, pot: &InducedPotential) -> Result<f64> {
    let Some(law) = scheme.tail() else {
        return Ok(f64::NEG_INFINITY);
    };
    let piece = Piece::Tail {
        from: law.from_level,
        law,
    };
    let a = match pot.on_piece(scheme, &piece)? {
        PieceForm::Affine(a) => a,
        PieceForm::Scalar(_) => unreachable!(),
    };
    if law.shape == TailShape::Geometric && a.per_index >= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(a.per_level)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KappaEstimate {
    pub value: f64,
    pub status: Status,
    pub window: (u32, u32),
    /// Largest absolute residual of the linear fit of `log u_n`.
    pub residual: f64,
    pub note: Option<String>,
}

/// Slope of `log u_n` against `n` over `(n, value)` samples.
pub fn kappa_from_values(values: &[(u32, SeriesValue)]) -> KappaEstimate {
    let window = (
        values.first().map_or(0, |v| v.0),
        values.last().map_or(0, |v| v.0),
    );
    let est = |value, status, residual, note: Option<&str>| KappaEstimate {
        value,
        status,
        window,
        residual,
        note: note.map(str::to_owned),
    };
    if values.iter().any(|v| v.1.is_divergent()) {
        let all = values.iter().all(|v| v.1.is_divergent());
        return est(
            f64::INFINITY,
            Status::RegressionOnly,
            0.0,
            Some(if all {
                "every level diverges"
            } else {
                "some levels diverge"
            }),
        );
    }
    if values
        .iter()
        .any(|v| matches!(v.1, SeriesValue::Undetermined))
    {
        return est(
            f64::NAN,
            Status::Undetermined,
            f64::NAN,
            Some("level sums have no closed form"),
        );
    }
    let pts: Vec<(f64, f64)> = values
        .iter()
        .filter_map(|(n, v)| v.finite().filter(|x| *x > 0.0).map(|x| (*n as f64, x.ln())))
        .collect();
    if pts.is_empty() {
        return est(
            f64::NEG_INFINITY,
            Status::RegressionOnly,
            0.0,
            Some("all levels empty"),
        );
    }
    if pts.len() < 2 {
        return est(
            f64::NAN,
            Status::Undetermined,
            f64::NAN,
            Some("need two non-empty levels"),
        );
    }
    let (slope, intercept) = crate::stats::least_squares(&pts);
    let residual = pts
        .iter()
        .map(|(x, y)| (y - slope * x - intercept).abs())
        .fold(0.0, f64::max);
    est(slope, Status::RegressionOnly, residual, None)
}

/// `kappa(t)` with the `log u_n` fit over `window` attached. The value is
/// certified whenever the tail law determines it.
pub fn kappa(
    scheme: &InducingScheme,
    phi: &InducedPotential,
    psi: &InducedPotential,
    t: f64,
    window: (u32, u32),
) -> Result<KappaEstimate> {
    kappa_of(scheme, &phi.add_scaled(psi, t), window)
}

pub fn kappa_of(
    scheme: &InducingScheme,
    pot: &InducedPotential,
    window: (u32, u32),
) -> Result<KappaEstimate> {
    let (n0, n1) = window;
    if n0 == 0 || n1 < n0 {
        return invalid("window must satisfy 1 <= n0 <= n1");
    }
    let values = (n0..=n1)
        .map(|n| Ok((n, level_sum_u(scheme, pot, n)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut fit = kappa_from_values(&values);
    match kappa_closed_form(scheme, pot) {
        Ok(k) => {
            fit.value = k;
            fit.status = Status::Certified;
            fit.note = None;
        }
        Err(Error::Undetermined(_)) => {}
        Err(Error::InvalidArgument(_)) if !pot.is_block_constant() => {}
        Err(e) => return Err(e),
    }
    Ok(fit)
}

/// `U_n` / `u_n` table plus the `kappa` estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexityReport {
    pub n_range: (u32, u32),
    pub values: Vec<(u32, SeriesValue)>,
    pub kappa: KappaEstimate,
}

pub fn complexity_report(
    scheme: &InducingScheme,
    pot: &InducedPotential,
    n_range: (u32, u32),
) -> Result<ComplexityReport> {
    let kappa = kappa_of(scheme, pot, n_range)?;
    let values = (n_range.0..=n_range.1)
        .map(|n| Ok((n, level_sum_u(scheme, pot, n)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ComplexityReport {
        n_range,
        values,
        kappa,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityViolation {
    pub triple: (f64, f64, f64),
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityReport {
    pub triples_checked: usize,
    pub violations: Vec<ConvexityViolation>,
}

impl ConvexityReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check `k(t_j) <= chord(t_i, t_k)(t_j) + tol` on all sampled triples.
pub fn check_convexity(samples: &[(f64, f64)], tol: f64) -> Result<ConvexityReport> {
    let mut s: Vec<(f64, f64)> = samples.to_vec();
    s.sort_by(|a, b| a.0.total_cmp(&b.0));
    if s.iter().filter(|p| p.1.is_finite()).count() < 3 {
        return invalid("need at least three finite samples");
    }
    let mut violations = Vec::new();
    let mut checked = 0;
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            for k in j + 1..s.len() {
                let ((a, fa), (b, fb), (c, fc)) = (s[i], s[j], s[k]);
                if fa == f64::INFINITY || fc == f64::INFINITY || c == a {
                    continue;
                }
                checked += 1;
                let w = (c - b) / (c - a);
                let chord = if fa == fc {
                    fa
                } else {
                    w * fa + (1.0 - w) * fc
                };
                let excess = fb - chord;
                if excess > tol || (fb.is_nan() && !chord.is_nan()) {
                    violations.push(ConvexityViolation {
                        triple: (a, b, c),
                        excess,
                    });
                }
            }
        }
    }
    Ok(ConvexityReport {
        triples_checked: checked,
        violations,
    })
}

/// `v_n(t) = sum_{a in S_n} rho_a xi_a^t` with `rho_a = exp phi_bar` and
/// `xi_a = exp psi_bar` at one representative point of each block.
pub fn v_t(
    scheme: &InducingScheme,
    phi: &InducedPotential,
    psi: &InducedPotential,
    t: f64,
    n: u32,
    budget: usize,
) -> Result<SeriesValue> {
    let pot = phi.add_scaled(psi, t);
    if pot.is_block_constant() {
        return level_sum_u(scheme, &pot, n);
    }
    let level = scheme.blocks_at_level(n, budget)?;
    if level.blocks.len() >= budget
        && level.cardinality != crate::scheme::Cardinality::Finite(level.blocks.len())
    {
        return Ok(SeriesValue::Undetermined);
    }
    let mut s = 0.0;
    for b in &level.blocks {
        let w = crate::potential::words_from(scheme, b.id, pot.depth())?;
        s += pot.eval_word(scheme, &w[0])?.exp();
    }
    Ok(SeriesValue::Finite(s))
}

/// `H = max_a (sup - inf)` of `psi_bar` over enumerated blocks.
pub fn psi_oscillation(
    scheme: &InducingScheme,
    psi: &InducedPotential,
    max_level: u32,
    per_level: usize,
) -> Result<f64> {
    if psi.is_block_constant() {
        return Ok(0.0);
    }
    let mut h: f64 = 0.0;
    for a in scheme.enumerate(max_level, per_level)? {
        let (lo, hi) = psi.block_range(scheme, a)?;
        h = h.max(hi - lo);
    }
    Ok(h)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichRow {
    pub n: u32,
    pub t: f64,
    pub u: SeriesValue,
    pub v: SeriesValue,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SandwichReport {
    pub h: f64,
    pub rows: Vec<SandwichRow>,
}

impl SandwichReport {
    pub fn holds(&self) -> bool {
        self.rows.iter().all(|r| r.holds)
    }
}

/// `v_n(t) e^{-H|t|} <= u_n(t) <= v_n(t) e^{H|t|}` on a grid of `(n, t)`.
pub fn check_sandwich(
    scheme: &InducingScheme,
    phi: &InducedPotential,
    psi: &InducedPotential,
    ts: &[f64],
    ns: &[u32],
    tol: f64,
) -> Result<SandwichReport> {
    let budget = 256;
    let h = psi_oscillation(scheme, psi, scheme.max_enumeration_level(), budget)?;
    let mut rows = Vec::new();
    for &n in ns {
        for &t in ts {
            let u = u_t(scheme, phi, psi, t, n)?;
            let v = v_t(scheme, phi, psi, t, n, budget)?;
            let holds = match (u, v) {
                (SeriesValue::Finite(u), SeriesValue::Finite(v)) => {
                    let e = (h * t.abs()).exp();
                    v / e <= u * (1.0 + tol) + tol && u <= v * e * (1.0 + tol) + tol
                }
                (SeriesValue::Divergent, SeriesValue::Divergent) => true,
                _ => false,
            };
            rows.push(SandwichRow { n, t, u, v, holds });
        }
    }
    Ok(SandwichReport { h, rows })
}

/// `u_n(a t1 + (1-a) t2) <= u_n(t1)^a u_n(t2)^(1-a) e^{2H(a|t1| + (1-a)|t2|)}`
/// for every ordered pair of grid points and the given weights.
pub fn check_interpolation(
    scheme: &InducingScheme,
    phi: &InducedPotential,
    psi: &InducedPotential,
    ts: &[f64],
    alphas: &[f64],
    n: u32,
    tol: f64,
) -> Result<bool> {
    let h = psi_oscillation(scheme, psi, scheme.max_enumeration_level(), 256)?;
    for &t1 in ts {
        for &t2 in ts {
            for &a in alphas {
                let (Some(u1), Some(u2)) = (
                    u_t(scheme, phi, psi, t1, n)?.finite(),
                    u_t(scheme, phi, psi, t2, n)?.finite(),
                ) else {
                    continue;
                };
                let mid = match u_t(scheme, phi, psi, a * t1 + (1.0 - a) * t2, n)? {
                    SeriesValue::Finite(m) => m,
                    _ => return Ok(false),
                };
                let bound = u1.powf(a)
                    * u2.powf(1.0 - a)
                    * (2.0 * h * (a * t1.abs() + (1.0 - a) * t2.abs())).exp();
                if mid > bound * (1.0 + tol) + tol {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// The admissible parameter interval `(t_lower, t_upper)` around 0 on which
/// `kappa_1(t) = kappa(t) - q_t < 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamInterval {
    pub t_lower: f64,
    pub t_upper: f64,
    pub t0_lower: f64,
    pub t0_upper: f64,
    pub p: f64,
    pub lambda: f64,
    /// `(t, kappa_1(t))` on the grid.
    pub kappa1_values: Vec<(f64, f64)>,
}

impl ParamInterval {
    pub fn contains(&self, t: f64) -> bool {
        self.t_lower < t && t < self.t_upper
    }

    pub fn q_t(&self, t: f64) -> f64 {
        self.p + self.lambda * t
    }
}

/// Bisection tolerance in `t`.
pub const INTERVAL_TOL: f64 = 1e-8;

fn kappa_exact(scheme: &InducingScheme, pot: &InducedPotential) -> Result<f64> {
    let k = kappa_of(scheme, pot, (1, scheme.max_enumeration_level().max(2)))?;
    match k.status {
        Status::Undetermined => Err(Error::Undetermined(
            k.note.unwrap_or_else(|| "kappa is undetermined".into()),
        )),
        _ => Ok(k.value),
    }
}

pub fn admissible_interval(
    scheme: &Arc<InducingScheme>,
    phi: &InducedPotential,
    psi: &InducedPotential,
    t0_lower: f64,
    t0_upper: f64,
    grid: &[f64],
    trunc: &Truncation,
) -> Result<ParamInterval> {
    if !(t0_lower < 0.0 && 0.0 < t0_upper) {
        return invalid("need t0_lower < 0 < t0_upper");
    }
    let kappa_at = |t: f64| kappa_exact(scheme, &phi.add_scaled(psi, t));
    for t0 in [t0_lower, t0_upper] {
        let k = kappa_at(t0)?;
        if k == f64::INFINITY {
            return Err(Error::Hypothesis(format!(
                "kappa({t0}) is infinite: complexity is not finite there"
            )));
        }
    }
    let (p, lambda, _) = pressure::tangent_line(phi, psi, scheme, trunc)?;
    let kappa1 = |t: f64| -> Result<f64> { Ok(kappa_at(t)? - (p + lambda * t)) };
    let mut pts: Vec<f64> = grid
        .iter()
        .copied()
        .filter(|t| *t > t0_lower && *t < t0_upper)
        .collect();
    pts.push(0.0);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let kappa1_values = pts
        .iter()
        .map(|&t| Ok((t, kappa1(t)?)))
        .collect::<Result<Vec<_>>>()?;
    let all_neg_inf = [t0_lower, 0.0, t0_upper]
        .iter()
        .map(|&t| kappa_at(t))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .all(|k| *k == f64::NEG_INFINITY);
    if all_neg_inf {
        return Ok(ParamInterval {
            t_lower: t0_lower,
            t_upper: t0_upper,
            t0_lower,
            t0_upper,
            p,
            lambda,
            kappa1_values,
        });
    }
    let k0 = kappa1(0.0)?;
    if !(k0 < 0.0) {
        return Err(Error::Hypothesis(format!(
            "kappa_1(0) = {k0} is not negative"
        )));
    }
    let edge = |mut inside: f64, outer: &[f64], limit: f64| -> Result<f64> {
        for &t in outer.iter().chain(std::iter::once(&limit)) {
            if kappa1(t)? >= 0.0 {
                let mut out = t;
                while (out - inside).abs() > INTERVAL_TOL {
                    let mid = 0.5 * (inside + out);
                    if kappa1(mid)? < 0.0 {
                        inside = mid;
                    } else {
                        out = mid;
                    }
                }
                return Ok(if kappa1(out)? < 0.0 {
                    out
                } else {
                    0.5 * (inside + out)
                });
            }
            inside = t;
        }
        Ok(limit)
    };
    let right: Vec<f64> = pts.iter().copied().filter(|t| *t > 0.0).collect();
    let left: Vec<f64> = pts.iter().rev().copied().filter(|t| *t < 0.0).collect();
    let t_upper = edge(0.0, &right, t0_upper)?;
    let t_lower = edge(0.0, &left, t0_lower)?;
    Ok(ParamInterval {
        t_lower,
        t_upper,
        t0_lower,
        t0_upper,
        p,
        lambda,
        kappa1_values,
    })
}

/// Grid `a, a + step, ..., b` with the end point included when it lands on
/// the grid up to rounding.
pub fn grid(a: f64, b: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || b < a {
        return invalid("grid needs a <= b and step > 0");
    }
    let count = ((b - a) / step + 1e-9).floor() as usize;
    Ok((0..=count)
        .map(|i| {
            let t = a + step * i as f64;
            // snap values that should be integers multiples of step
            (t / step).round() * step
        })
        .map(|t| if t.abs() < 1e-12 { 0.0 } else { t })
        .collect())
}
