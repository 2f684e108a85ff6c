//! Induced pressure, liftable pressure, Gibbs and equilibrium measures.
//!
//! `P_L(phi)` is the unique `q` with zero induced pressure of
//! `phi_bar - q tau`. For block-constant potentials on the full shift the
//! induced pressure is `log sum_a exp phi_bar(a)`, summed in closed form;
//! otherwise it is the log spectral radius of a transfer matrix on words of
//! length `depth - 1` over a finite alphabet.

use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::complexity::{self, ParamInterval};
use crate::error::{invalid, Error, Result};
use crate::measure::{kac_integral, lift_measure, InducedMeasure, MarkovMeasure, TowerMeasure};
use crate::potential::{
    check_p3, check_p4, check_p5, default_eps_grid, normalize, words_from, CheckStatus,
    ConditionReport, InducedPotential, NormalizedPotential, TailProfile,
};
use crate::report::Status;
use crate::scheme::{BlockId, InducingScheme};
use crate::series::SeriesValue;
use crate::sums::{self, Moment};

/// Size of the alphabet cut used by spectral computations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Truncation {
    pub cut: usize,
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation { cut: 64 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralData {
    pub eigenvalue: f64,
    pub left: Vec<f64>,
    pub right: Vec<f64>,
    pub iterations: usize,
}

/// Transfer matrix of a potential restricted to the first `cut` symbols.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransferOperatorTruncation {
    pub alphabet: Vec<BlockId>,
    pub depth: usize,
    pub states: Vec<Vec<BlockId>>,
    pub matrix: Vec<Vec<f64>>,
    pub spectral: SpectralData,
}

/// Symbols sorted by level, heaviest first within a level.
fn ordered_alphabet(pot: &InducedPotential, scheme: &InducingScheme) -> Result<Vec<BlockId>> {
    let alphabet = scheme
        .finite_alphabet()
        .ok_or_else(|| Error::InvalidArgument("transfer matrices need a finite alphabet".into()))?;
    let mut keyed = alphabet
        .into_iter()
        .map(|a| Ok((a.level, -pot.block_sup(scheme, a)?, a)))
        .collect::<Result<Vec<_>>>()?;
    keyed.sort_by(|x, y| x.0.cmp(&y.0).then(x.1.total_cmp(&y.1)).then(x.2.cmp(&y.2)));
    Ok(keyed.into_iter().map(|k| k.2).collect())
}

fn strongly_connected(m: &[Vec<f64>]) -> bool {
    let n = m.len();
    let reach = |forward: bool| {
        let mut seen = vec![false; n];
        let mut q = VecDeque::from([0usize]);
        seen[0] = true;
        while let Some(u) = q.pop_front() {
            for v in 0..n {
                let e = if forward { m[u][v] } else { m[v][u] };
                if e > 0.0 && !seen[v] {
                    seen[v] = true;
                    q.push_back(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    n > 0 && reach(true) && reach(false)
}

/// Perron vector of `m` (or its transpose) by power iteration on `m + s I`.
fn perron(m: &[Vec<f64>], transpose: bool) -> (f64, Vec<f64>, usize) {
    let n = m.len();
    let entry = |i: usize, j: usize| if transpose { m[j][i] } else { m[i][j] };
    let shift = m.iter().flatten().fold(0.0f64, |a, b| a.max(*b)) * 0.1 + f64::MIN_POSITIVE;
    let mut x = vec![1.0 / n as f64; n];
    let mut lambda = 0.0;
    let mut calm = 0;
    for it in 1..=1_000_000 {
        let mut y: Vec<f64> = (0..n)
            .map(|i| (0..n).map(|j| entry(i, j) * x[j]).sum::<f64>() + shift * x[i])
            .collect();
        let norm: f64 = y.iter().sum();
        y.iter_mut().for_each(|v| *v /= norm);
        let new_lambda = norm - shift;
        let dx = x
            .iter()
            .zip(&y)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let rel = ((new_lambda - lambda) / new_lambda).abs();
        x = y;
        lambda = new_lambda;
        if rel < 1e-12 && dx < 1e-15 {
            calm += 1;
            if calm >= 10 {
                return (lambda, x, it);
            }
        } else {
            calm = 0;
        }
    }
    (lambda, x, 1_000_000)
}

impl TransferOperatorTruncation {
    pub fn build(
        pot: &InducedPotential,
        scheme: &InducingScheme,
        trunc: &Truncation,
    ) -> Result<Self> {
        if trunc.cut == 0 {
            return invalid("truncation cut must be positive");
        }
        let mut alphabet = ordered_alphabet(pot, scheme)?;
        alphabet.truncate(trunc.cut);
        let keep: BTreeSet<BlockId> = alphabet.iter().copied().collect();
        let depth = pot
            .depth()
            .max(if scheme.markov().is_some() { 2 } else { 1 });
        let k = depth.saturating_sub(1).max(1);
        let mut states: Vec<Vec<BlockId>> = Vec::new();
        for &a in &alphabet {
            for w in words_from(scheme, a, k)? {
                if w.iter().all(|b| keep.contains(b)) {
                    states.push(w);
                }
            }
        }
        let n = states.len();
        let mut matrix = vec![vec![0.0; n]; n];
        for (i, u) in states.iter().enumerate() {
            for (j, v) in states.iter().enumerate() {
                let joined = if depth == 1 {
                    // memoryless: every transition allowed, weight of the source
                    u.clone()
                } else {
                    if u[1..] != v[..k - 1] {
                        continue;
                    }
                    let last = *v.last().unwrap();
                    if !scheme
                        .markov()
                        .is_none_or(|m| m.permits(*u.last().unwrap(), last))
                    {
                        continue;
                    }
                    let mut w = u.clone();
                    w.push(last);
                    w
                };
                matrix[i][j] = pot.eval_word(scheme, &joined)?.exp();
            }
        }
        if !strongly_connected(&matrix) {
            return Err(Error::Reducible);
        }
        let (eigenvalue, right, iterations) = perron(&matrix, false);
        let (_, left, it2) = perron(&matrix, true);
        Ok(TransferOperatorTruncation {
            alphabet,
            depth,
            states,
            matrix,
            spectral: SpectralData {
                eigenvalue,
                left,
                right,
                iterations: iterations.max(it2),
            },
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PressureMethod {
    ClosedForm,
    Spectral,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InducedPressure {
    /// `+inf` when the partition function diverges.
    pub value: f64,
    pub method: PressureMethod,
    /// Spectral values at cuts `A` and `2A` agree to `1e-8`.
    pub converged: bool,
    pub status: Status,
}

fn uses_closed_form(pot: &InducedPotential, scheme: &InducingScheme) -> bool {
    pot.is_block_constant() && scheme.markov().is_none()
}

pub fn induced_pressure(
    pot: &InducedPotential,
    scheme: &InducingScheme,
    trunc: &Truncation,
) -> Result<InducedPressure> {
    if uses_closed_form(pot, scheme) {
        let value = match sums::total(scheme, pot, Moment::One)? {
            SeriesValue::Finite(z) => z.ln(),
            SeriesValue::Divergent => f64::INFINITY,
            SeriesValue::Undetermined => {
                return Err(Error::Undetermined(
                    "partition function has no closed form".into(),
                ))
            }
        };
        return Ok(InducedPressure {
            value,
            method: PressureMethod::ClosedForm,
            converged: true,
            status: Status::Certified,
        });
    }
    let a = TransferOperatorTruncation::build(pot, scheme, trunc)?;
    let b = TransferOperatorTruncation::build(
        pot,
        scheme,
        &Truncation {
            cut: trunc.cut.saturating_mul(2),
        },
    )?;
    let value = a.spectral.eigenvalue.ln();
    let converged = (value - b.spectral.eigenvalue.ln()).abs() < 1e-8;
    let complete = a.alphabet.len() == scheme.finite_alphabet().map_or(usize::MAX, |x| x.len());
    let status = if complete {
        Status::Certified
    } else {
        Status::RegressionOnly
    };
    Ok(InducedPressure {
        value,
        method: PressureMethod::Spectral,
        converged,
        status,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PressureSolve {
    pub q_star: f64,
    pub bracket: (f64, f64),
    pub evaluations: usize,
    pub residual: f64,
}

/// Root `q*` of `q -> P(phi_bar - q tau)`, by bracketing from `kappa(0)`
/// upward and bisection down to `tol`.
pub fn solve_pl(
    pot: &InducedPotential,
    scheme: &InducingScheme,
    trunc: &Truncation,
    tol: f64,
) -> Result<PressureSolve> {
    if !(tol > 0.0) {
        return invalid("tolerance must be positive");
    }
    let mut evaluations = 0;
    let mut f = |q: f64| -> Result<f64> {
        evaluations += 1;
        let v = induced_pressure(&pot.plus_tau(-q), scheme, trunc)?.value;
        if v.is_nan() {
            return Err(Error::Undetermined(format!("pressure is NaN at q = {q}")));
        }
        Ok(v)
    };
    let start = match complexity::kappa_closed_form(scheme, pot) {
        Ok(k) if k.is_finite() => k,
        _ => 0.0,
    };
    let limit = 1e6;
    let (mut lo, mut hi);
    let f0 = f(start)?;
    if f0 == 0.0 {
        return Ok(PressureSolve {
            q_star: start,
            bracket: (start, start),
            evaluations: 1,
            residual: 0.0,
        });
    }
    let mut step = 1.0;
    if f0 > 0.0 {
        lo = start;
        hi = start + step;
        while f(hi)? >= 0.0 {
            lo = hi;
            step *= 2.0;
            hi += step;
            if hi > limit {
                return Err(Error::PressureSolveFailed { lo: start, hi });
            }
        }
    } else {
        hi = start;
        lo = start - step;
        while f(lo)? <= 0.0 {
            hi = lo;
            step *= 2.0;
            lo -= step;
            if lo < -limit {
                return Err(Error::PressureSolveFailed { lo, hi: start });
            }
        }
    }
    let bracket = (lo, hi);
    for _ in 0..400 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let q_star = 0.5 * (lo + hi);
    let residual = f(q_star)?;
    Ok(PressureSolve {
        q_star,
        bracket,
        evaluations,
        residual,
    })
}

/// A Gibbs measure of a normalized induced potential.
#[derive(Debug, Clone)]
pub struct GibbsSolution {
    pub q_star: f64,
    pub measure: InducedMeasure,
    /// Normalization mass before renormalization.
    pub raw_mass: f64,
    /// Enumerated mass plus certified tail after renormalization.
    pub mass: f64,
    pub gibbs_k: f64,
    pub tail: TailProfile,
    pub kac: f64,
}

/// Serializable digest of a [`GibbsSolution`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GibbsSummary {
    pub q_star: f64,
    pub raw_mass: f64,
    pub total_mass: f64,
    pub gibbs_k: f64,
    pub kac: f64,
    pub weights: Vec<(BlockId, f64)>,
    pub tail: Vec<(u32, f64)>,
}

impl GibbsSolution {
    pub fn weight(&self, a: BlockId) -> Result<f64> {
        self.measure.block_mass(a)
    }

    pub fn summary(&self, max_level: u32, per_level: usize) -> Result<GibbsSummary> {
        let blocks: Vec<BlockId> = match &self.measure {
            InducedMeasure::Bernoulli { scheme, .. } => scheme.enumerate(max_level, per_level)?,
            InducedMeasure::Markov(m) => {
                let mut b: Vec<BlockId> = m.states.iter().map(|s| s[0]).collect();
                b.dedup();
                b
            }
            InducedMeasure::Explicit { weights } => weights.iter().map(|w| w.0).collect(),
            InducedMeasure::PowerLaw { .. } => {
                (1..=max_level).map(|a| BlockId::new(a, 1)).collect()
            }
        };
        Ok(GibbsSummary {
            q_star: self.q_star,
            raw_mass: self.raw_mass,
            total_mass: self.mass,
            gibbs_k: self.gibbs_k,
            kac: self.kac,
            weights: blocks
                .into_iter()
                .map(|b| Ok((b, self.weight(b)?)))
                .collect::<Result<_>>()?,
            tail: self.tail.points.clone(),
        })
    }
}

/// Levels summed explicitly before the certified tail takes over.
const MASS_SPLIT: u32 = 32;
const NORMALIZATION_TOL: f64 = 1e-9;
const AUDIT_WORDS: usize = 50_000;

/// Gibbs measure of `phi_plus = phi_bar - q tau`, audited over cylinders of
/// length up to `audit_depth`.
pub fn gibbs(
    norm: &NormalizedPotential,
    scheme: &Arc<InducingScheme>,
    trunc: &Truncation,
    audit_depth: usize,
) -> Result<GibbsSolution> {
    if audit_depth == 0 {
        return invalid("audit depth must be positive");
    }
    let pot = norm.potential();
    let (measure, raw_mass) = if uses_closed_form(&pot, scheme) {
        let z = match sums::total(scheme, &pot, Moment::One)? {
            SeriesValue::Finite(z) => z,
            SeriesValue::Divergent => return Err(Error::Normalization(f64::INFINITY)),
            SeriesValue::Undetermined => {
                return Err(Error::Undetermined("mass has no closed form".into()))
            }
        };
        if (z - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Normalization(z));
        }
        (
            InducedMeasure::Bernoulli {
                scheme: scheme.clone(),
                log_mass: pot.plus_constant(-z.ln()),
            },
            z,
        )
    } else {
        let t = TransferOperatorTruncation::build(&pot, scheme, trunc)?;
        let rho = t.spectral.eigenvalue;
        if (rho - 1.0).abs() > NORMALIZATION_TOL {
            return Err(Error::Normalization(rho));
        }
        let (l, r) = (&t.spectral.left, &t.spectral.right);
        let n = t.states.len();
        let z: f64 = (0..n).map(|i| l[i] * r[i]).sum();
        let stationary: Vec<f64> = (0..n).map(|i| l[i] * r[i] / z).collect();
        let transition: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| t.matrix[i][j] * r[j] / (rho * r[i]))
                    .collect()
            })
            .collect();
        let mm = MarkovMeasure {
            scheme: scheme.clone(),
            depth: t.depth.max(2),
            states: t.states.clone(),
            stationary,
            transition,
        };
        (InducedMeasure::Markov(mm), rho)
    };
    let mass = match &measure {
        InducedMeasure::Bernoulli { scheme, log_mass } => {
            let mut head = 0.0;
            for n in 1..=MASS_SPLIT {
                head += sums::at_level(scheme, log_mass, Moment::One, n)?
                    .finite()
                    .unwrap_or(f64::NAN);
            }
            head + sums::over_levels_from(scheme, log_mass, Moment::One, MASS_SPLIT + 1)?
                .finite()
                .unwrap_or(f64::NAN)
        }
        m => m.tail(1)?.finite().unwrap_or(f64::NAN),
    };
    if !((mass - 1.0).abs() <= 1e-10) {
        return Err(Error::Normalization(mass));
    }
    let gibbs_k = audit(&measure, &pot, scheme, audit_depth)?;
    let kac = kac_integral(&measure)?
        .q
        .finite()
        .ok_or_else(|| Error::Undetermined("Kac integral is not finite".into()))?;
    let tail = measure.tail_profile(scheme.max_enumeration_level())?;
    Ok(GibbsSolution {
        q_star: norm.q,
        measure,
        raw_mass,
        mass,
        gibbs_k,
        tail,
        kac,
    })
}

/// Largest two-sided ratio `nu([w]) / exp(S_n phi_plus(x))` over audited
/// cylinders `w` and points `x` in them.
fn audit(
    measure: &InducedMeasure,
    pot: &InducedPotential,
    scheme: &InducingScheme,
    depth: usize,
) -> Result<f64> {
    let symbols: Vec<BlockId> = match scheme.finite_alphabet() {
        Some(a) => a,
        None => scheme.enumerate(4, 2)?,
    };
    let d = pot.depth();
    let admissible = |a: BlockId, b: BlockId| scheme.markov().is_none_or(|m| m.permits(a, b));
    let mut k: f64 = 1.0;
    let mut words: Vec<Vec<BlockId>> = symbols.iter().map(|&a| vec![a]).collect();
    for len in 1..=depth {
        if len > 1 {
            let mut next = Vec::new();
            for w in &words {
                for &b in &symbols {
                    if admissible(*w.last().unwrap(), b) {
                        let mut w2 = w.clone();
                        w2.push(b);
                        next.push(w2);
                    }
                }
            }
            if next.len() > AUDIT_WORDS {
                break;
            }
            words = next;
        }
        for w in &words {
            let nu = measure.cylinder_mass(w)?;
            if nu == 0.0 {
                continue;
            }
            for tail in words_from(scheme, *w.last().unwrap(), d)? {
                let mut x = w.clone();
                x.extend_from_slice(&tail[1..]);
                let mut s = 0.0;
                for i in 0..w.len() {
                    s += pot.eval_word(scheme, &x[i..])?;
                }
                let ratio = nu / s.exp();
                k = k.max(ratio).max(1.0 / ratio);
            }
        }
    }
    Ok(k)
}

/// `lambda = int psi_bar d nu / Q_nu`.
pub fn lambda_of(psi: &InducedPotential, gibbs: &GibbsSolution) -> Result<f64> {
    match gibbs.measure.integral(psi)? {
        SeriesValue::Finite(v) => Ok(v / gibbs.kac),
        SeriesValue::Divergent => Err(Error::Undetermined("integral of psi_bar diverges".into())),
        SeriesValue::Undetermined => Err(Error::Undetermined(
            "integral of psi_bar has no closed form".into(),
        )),
    }
}

/// Default tolerance of the pressure root.
pub const SOLVE_TOL: f64 = 1e-13;
/// Default audit depth of Gibbs constants.
pub const AUDIT_DEPTH: usize = 6;

/// `P_L(phi)` with its Gibbs measure.
pub fn liftable_pressure(
    pot: &InducedPotential,
    scheme: &Arc<InducingScheme>,
    trunc: &Truncation,
) -> Result<(PressureSolve, GibbsSolution)> {
    let solve = solve_pl(pot, scheme, trunc, SOLVE_TOL)?;
    let g = gibbs(&normalize(pot, solve.q_star), scheme, trunc, AUDIT_DEPTH)?;
    Ok((solve, g))
}

/// `(p, lambda)` of the tangent line `q_t = p + lambda t`.
pub fn tangent_line(
    phi: &InducedPotential,
    psi: &InducedPotential,
    scheme: &Arc<InducingScheme>,
    trunc: &Truncation,
) -> Result<(f64, f64, GibbsSolution)> {
    let (solve, g) = liftable_pressure(phi, scheme, trunc)?;
    let lambda = lambda_of(psi, &g)?;
    Ok((solve.q_star, lambda, g))
}

/// P3, P4, P5 for `phi + t psi - q_t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainReport {
    pub p3: ConditionReport,
    pub p4: ConditionReport,
    pub p5: ConditionReport,
}

impl ChainReport {
    pub fn passed(&self) -> bool {
        self.p3.passed() && self.p4.passed() && self.p5.passed()
    }
}

/// Run the P3-P5 checks for `pot - q_t tau`, whose liftable pressure is
/// `p_t - q_t`.
pub fn check_chain(
    pot: &InducedPotential,
    q_t: f64,
    p_t: f64,
    scheme: &Arc<InducingScheme>,
    trunc: &Truncation,
) -> Result<ChainReport> {
    let shifted = pot.plus_tau(-q_t);
    let p3 = check_p3(&shifted, scheme)?;
    let norm = normalize(&shifted, p_t - q_t);
    let p4 = check_p4(&norm, scheme, &default_eps_grid())?;
    let g = gibbs(&norm, scheme, trunc, 2)?;
    let hi = scheme.max_enumeration_level();
    let p5 = check_p5(&g.tail, 1..=hi);
    Ok(ChainReport { p3, p4, p5 })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePoint {
    pub t: f64,
    pub p_t: Option<f64>,
    pub q_t: f64,
    pub inside_interval: bool,
    pub chain: Option<ChainReport>,
    pub chain_failed: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PressureCurve {
    pub p: f64,
    pub lambda: f64,
    pub points: Vec<CurvePoint>,
}

impl PressureCurve {
    /// `(t, p_t)` for the points that solved.
    pub fn solved(&self) -> Vec<(f64, f64)> {
        self.points
            .iter()
            .filter_map(|c| c.p_t.map(|p| (c.t, p)))
            .collect()
    }
}

/// `p_t = P_L(phi + t psi)` on a grid with the tangent line attached; the
/// P3-P5 chain is re-checked at every grid point inside the interval.
pub fn pressure_curve(
    phi: &InducedPotential,
    psi: &InducedPotential,
    scheme: &Arc<InducingScheme>,
    interval: &ParamInterval,
    grid: &[f64],
    trunc: &Truncation,
    tol: f64,
) -> Result<PressureCurve> {
    let (p, lambda) = (interval.p, interval.lambda);
    let mut points = Vec::with_capacity(grid.len());
    for &t in grid {
        let pot = phi.add_scaled(psi, t);
        let q_t = p + lambda * t;
        let inside = interval.contains(t);
        let mut point = CurvePoint {
            t,
            p_t: None,
            q_t,
            inside_interval: inside,
            chain: None,
            chain_failed: false,
            error: None,
        };
        match solve_pl(&pot, scheme, trunc, tol) {
            Ok(s) => {
                point.p_t = Some(s.q_star);
                if inside {
                    match check_chain(&pot, q_t, s.q_star, scheme, trunc) {
                        Ok(c) => {
                            point.chain_failed = !c.passed();
                            point.chain = Some(c);
                        }
                        Err(e) => {
                            point.chain_failed = true;
                            point.error = Some(e.to_string());
                        }
                    }
                }
            }
            Err(e) => point.error = Some(e.to_string()),
        }
        points.push(point);
    }
    Ok(PressureCurve { p, lambda, points })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChainBound {
    pub label: String,
    /// Exact value of the sum.
    pub actual: SeriesValue,
    /// The bound obtained from `D_t`.
    pub bound: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstUnReport {
    pub t: f64,
    pub kappa: f64,
    pub eps: f64,
    pub q_t: f64,
    pub d_t: f64,
    pub window: (u32, u32),
    pub chains: Vec<ChainBound>,
}

/// Smallest `D_t` with `u_n(t) <= D_t e^{n (kappa(t) + eps)}` on the window
/// and the three bounds it yields for P3, P4 and the tail in P5.
pub fn est_un_bound_check(
    scheme: &Arc<InducingScheme>,
    phi: &InducedPotential,
    psi: &InducedPotential,
    t: f64,
    eps: f64,
    window: (u32, u32),
    trunc: &Truncation,
) -> Result<EstUnReport> {
    let (n0, n1) = window;
    if n0 == 0 || n1 < n0 {
        return invalid("window must be 1 <= n0 <= n1");
    }
    let pot = phi.add_scaled(psi, t);
    let kappa = complexity::kappa_closed_form(scheme, &pot)?;
    if !kappa.is_finite() {
        return Err(Error::Hypothesis(format!(
            "kappa({t}) = {kappa} is not finite"
        )));
    }
    let (p, lambda, _) = tangent_line(phi, psi, scheme, trunc)?;
    let q_t = p + lambda * t;
    if !(eps > 0.0 && 2.0 * eps < q_t - kappa) {
        return Err(Error::Hypothesis(format!(
            "need 0 < 2 eps < q_t - kappa = {}",
            q_t - kappa
        )));
    }
    let mut d_t: f64 = 0.0;
    for n in n0..=n1 {
        let u = sums::at_level(scheme, &pot, Moment::One, n)?
            .finite()
            .ok_or_else(|| Error::Hypothesis(format!("u_{n}({t}) is not finite")))?;
        d_t = d_t.max(u * (-(n as f64) * (kappa + eps)).exp());
    }
    let r = kappa + eps - q_t;
    let shifted = pot.plus_tau(-q_t);
    let geo =
        |b: f64, k: u32| crate::series::exp_power_sum(b, k, n0 as u64).unwrap_or(f64::INFINITY);
    let within = |actual: SeriesValue, bound: f64| match actual {
        SeriesValue::Finite(a) => a <= bound * (1.0 + 1e-12),
        _ => false,
    };
    let p3_actual = sums::over_levels_from(scheme, &shifted, Moment::One, n0)?;
    let p3_bound = d_t * geo(r, 0);
    let p4_actual = sums::over_levels_from(scheme, &shifted.plus_tau(eps), Moment::Tau, n0)?;
    let p4_bound = d_t * geo(r + eps, 1);
    let tail_actual = sums::over_levels_from(scheme, &shifted, Moment::One, n1)?;
    let tail_bound = d_t * crate::series::exp_power_sum(r, 0, n1 as u64).unwrap_or(f64::INFINITY);
    let chains = vec![
        ChainBound {
            label: "P3".into(),
            actual: p3_actual,
            bound: p3_bound,
            holds: within(p3_actual, p3_bound),
        },
        ChainBound {
            label: "P4".into(),
            actual: p4_actual,
            bound: p4_bound,
            holds: within(p4_actual, p4_bound),
        },
        ChainBound {
            label: "P5".into(),
            actual: tail_actual,
            bound: tail_bound,
            holds: within(tail_actual, tail_bound),
        },
    ];
    Ok(EstUnReport {
        t,
        kappa,
        eps,
        q_t,
        d_t,
        window,
        chains,
    })
}

/// `mu_t`: the lift of the Gibbs measure of `(phi + t psi - q_t)^+`.
pub fn equilibrium_measure(
    phi: &InducedPotential,
    psi: &InducedPotential,
    t: f64,
    scheme: &Arc<InducingScheme>,
    interval: &ParamInterval,
    trunc: &Truncation,
) -> Result<TowerMeasure> {
    if !interval.contains(t) {
        return Err(Error::OutsideInterval {
            t,
            lower: interval.t_lower,
            upper: interval.t_upper,
        });
    }
    let pot = phi.add_scaled(psi, t);
    let s = solve_pl(&pot, scheme, trunc, SOLVE_TOL)?;
    let g = gibbs(&normalize(&pot, s.q_star), scheme, trunc, 2)?;
    lift_measure(&g.measure)
}

/// Whether every P-check in a chain passed.
pub fn chain_status(c: &ChainReport) -> CheckStatus {
    if c.passed() {
        CheckStatus::Pass
    } else if [&c.p3, &c.p4, &c.p5]
        .iter()
        .any(|r| r.status == CheckStatus::Fail)
    {
        CheckStatus::Fail
    } else {
        CheckStatus::Undetermined
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::LN_2;

    fn two_symbols() -> InducingScheme {
        InducingScheme::builder("two")
            .listed_level(
                1,
                vec![
                    crate::scheme::Block::new(BlockId::new(1, 1)).with_weight("zero", 0.0),
                    crate::scheme::Block::new(BlockId::new(1, 2)).with_weight("zero", 0.0),
                ],
            )
            .build()
            .unwrap()
    }

    #[test]
    fn counting_pressure_of_two_symbols() {
        let p = induced_pressure(
            &InducedPotential::zero(),
            &two_symbols(),
            &Truncation::default(),
        )
        .unwrap();
        assert_abs_diff_eq!(p.value, LN_2, epsilon = 1e-15);
    }

    #[test]
    fn geometric_weights_pressure() {
        let sys = catalog::renewal(0.3).unwrap();
        let p = induced_pressure(
            &sys.potential("phi").unwrap(),
            &sys.scheme,
            &Truncation::default(),
        )
        .unwrap();
        let x = (-0.3f64).exp();
        assert_abs_diff_eq!(p.value, (x / (1.0 - x)).ln(), epsilon = 1e-14);
    }

    #[test]
    fn markov2_zero_potential_has_log2_pressure() {
        let sys = catalog::markov2([[0.0; 2]; 2]).unwrap();
        let p = induced_pressure(
            &sys.potential("c").unwrap(),
            &sys.scheme,
            &Truncation::default(),
        )
        .unwrap();
        assert_eq!(p.method, PressureMethod::Spectral);
        assert!(p.converged);
        assert_abs_diff_eq!(p.value, LN_2, epsilon = 1e-12);
    }

    #[test]
    fn renewal_solve_and_gibbs() {
        let sys = catalog::renewal(0.3).unwrap();
        let phi = sys.potential("phi").unwrap();
        let s = solve_pl(&phi, &sys.scheme, &Truncation::default(), 1e-13).unwrap();
        assert_abs_diff_eq!(s.q_star, LN_2 - 0.3, epsilon = 1e-12);
        let g = gibbs(
            &normalize(&phi, s.q_star),
            &sys.scheme,
            &Truncation::default(),
            6,
        )
        .unwrap();
        assert_abs_diff_eq!(g.weight(BlockId::new(1, 1)).unwrap(), 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(
            g.weight(BlockId::new(3, 1)).unwrap(),
            0.125,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(g.gibbs_k, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(g.kac, 2.0, epsilon = 1e-10);
    }

    #[test]
    fn counting_series_root_is_log2() {
        let sys = catalog::renewal(0.0).unwrap();
        let s = solve_pl(
            &sys.potential("phi").unwrap(),
            &sys.scheme,
            &Truncation::default(),
            1e-13,
        )
        .unwrap();
        assert_abs_diff_eq!(s.q_star, LN_2, epsilon = 1e-12);
    }

    #[test]
    fn lambda_examples() {
        let sys = catalog::renewal(0.3).unwrap();
        let (_, g) = liftable_pressure(
            &sys.potential("phi").unwrap(),
            &sys.scheme,
            &Truncation::default(),
        )
        .unwrap();
        assert_abs_diff_eq!(
            lambda_of(&sys.potential("indicator1").unwrap(), &g).unwrap(),
            0.25,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            lambda_of(&InducedPotential::tau(-1.0), &g).unwrap(),
            -1.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            lambda_of(&InducedPotential::tau(0.37), &g).unwrap(),
            0.37,
            epsilon = 1e-12
        );
    }

    #[test]
    fn unnormalized_potential_is_rejected() {
        let sys = catalog::renewal(0.3).unwrap();
        let r = gibbs(
            &normalize(&sys.potential("phi").unwrap(), 0.1),
            &sys.scheme,
            &Truncation::default(),
            2,
        );
        assert!(matches!(r, Err(Error::Normalization(_))));
    }

    #[test]
    fn reducible_truncation_is_an_error() {
        let a = BlockId::new(1, 1);
        let b = BlockId::new(1, 2);
        let s = InducingScheme::builder("r")
            .listed_level(
                1,
                vec![crate::scheme::Block::new(a), crate::scheme::Block::new(b)],
            )
            .markov(crate::scheme::MarkovConstraint {
                allowed: [(a, a), (a, b), (b, b)].into_iter().collect(),
            })
            .build()
            .unwrap();
        let r = induced_pressure(&InducedPotential::zero(), &s, &Truncation::default());
        assert!(matches!(r, Err(Error::Reducible)));
    }
}
