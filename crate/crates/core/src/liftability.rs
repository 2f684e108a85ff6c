//! Liftability machinery: compatible partitions, Caratheodory-Pesin sums and
//! set pressure, the binomial and composition counting bounds, tower
//! frequencies and the final gate on `(P_mu, mu(W))`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::measure::{kac_integral, lift_measure, InducedMeasure};
use crate::potential::InducedPotential;
use crate::report::Status;
use crate::scheme::{BlockId, InducingScheme, Interval};
use crate::series::{binary_entropy, SeriesValue};
use crate::stats::{rng, SymbolSampler};
use crate::tower::frequencies_from_times;

/// A finite partition of the ambient space.
#[derive(Clone)]
pub enum AmbientPartition {
    /// Labeled half-open intervals.
    Intervals(Vec<(String, Interval)>),
    /// Cell of each slab `f^i(J_a)`, `None` when the slab meets two cells.
    Labeled(Arc<dyn Fn(BlockId, u32) -> Option<String> + Send + Sync>),
}

impl fmt::Debug for AmbientPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AmbientPartition::Intervals(c) => f.debug_tuple("Intervals").field(c).finish(),
            AmbientPartition::Labeled(_) => f.write_str("Labeled(..)"),
        }
    }
}

impl AmbientPartition {
    /// `{left, W}` for an ambient interval map.
    pub fn canonical(scheme: &InducingScheme) -> Result<Self> {
        let amb = scheme
            .ambient()
            .ok_or_else(|| Error::NotCheckable("scheme has no ambient images".into()))?;
        let (d, w) = (amb.domain(), amb.base());
        Ok(AmbientPartition::Intervals(vec![
            ("left".into(), Interval::new(d.lo, w.lo)),
            ("W".into(), w),
        ]))
    }

    /// Replace the cell `label` by its two halves cut at `at`.
    pub fn split(&self, label: &str, at: f64) -> Result<Self> {
        let AmbientPartition::Intervals(cells) = self else {
            return invalid("only interval partitions can be split");
        };
        let mut out = Vec::new();
        let mut found = false;
        for (l, c) in cells {
            if l == label && c.lo < at && at < c.hi {
                found = true;
                out.push((format!("{l}-"), Interval::new(c.lo, at)));
                out.push((format!("{l}+"), Interval::new(at, c.hi)));
            } else {
                out.push((l.clone(), *c));
            }
        }
        if !found {
            return invalid(format!("cell `{label}` does not contain {at}"));
        }
        Ok(AmbientPartition::Intervals(out))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Compatibility {
    Compatible {
        blocks_checked: usize,
    },
    /// `f^iterate(J_block)` meets two cells.
    Violated {
        block: BlockId,
        iterate: u32,
    },
    NotCheckable {
        reason: String,
    },
}

/// Does every slab `f^i(J_a)`, `0 <= i < tau(a)`, of the blocks up to
/// `level_budget` lie in a single cell?
pub fn check_compatible(
    partition: &AmbientPartition,
    scheme: &InducingScheme,
    level_budget: u32,
) -> Result<Compatibility> {
    let blocks = scheme.enumerate(level_budget, 64)?;
    let cell_of = |a: BlockId, i: u32| -> std::result::Result<bool, String> {
        match partition {
            AmbientPartition::Labeled(f) => Ok(f(a, i).is_some()),
            AmbientPartition::Intervals(cells) => {
                let amb = scheme
                    .ambient()
                    .ok_or_else(|| "scheme has no ambient images".to_owned())?;
                let img = amb.image(a, i);
                Ok(cells.iter().any(|(_, c)| c.contains_interval(&img)))
            }
        }
    };
    for &a in &blocks {
        for i in 0..a.tau() {
            match cell_of(a, i) {
                Ok(true) => {}
                Ok(false) => {
                    return Ok(Compatibility::Violated {
                        block: a,
                        iterate: i,
                    })
                }
                Err(reason) => return Ok(Compatibility::NotCheckable { reason }),
            }
        }
    }
    Ok(Compatibility::Compatible {
        blocks_checked: blocks.len(),
    })
}

/// Full shift on `phi.len()` symbols with a depth-1 potential.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteShift {
    pub phi: Vec<f64>,
}

impl FiniteShift {
    pub fn new(phi: Vec<f64>) -> Result<Self> {
        if phi.is_empty() || phi.iter().any(|v| !v.is_finite()) {
            return invalid("need at least one symbol and finite potential values");
        }
        Ok(FiniteShift { phi })
    }

    /// `phi = 0` on `n` symbols.
    pub fn counting(n: usize) -> Result<Self> {
        Self::new(vec![0.0; n])
    }

    pub fn symbols(&self) -> usize {
        self.phi.len()
    }

    pub fn shifted(&self, c: f64) -> Self {
        FiniteShift {
            phi: self.phi.iter().map(|v| v + c).collect(),
        }
    }

    fn birkhoff(&self, word: &[usize]) -> f64 {
        word.iter().map(|&i| self.phi[i]).sum()
    }

    fn log_z1(&self) -> f64 {
        log_sum_exp(self.phi.iter().copied())
    }

    /// `P_mu(phi) = h(mu) + int phi dmu` of the Bernoulli measure `p`.
    pub fn bernoulli_pressure(&self, p: &[f64]) -> Result<f64> {
        if p.len() != self.symbols()
            || (p.iter().sum::<f64>() - 1.0).abs() > 1e-12
            || p.iter().any(|x| *x < 0.0)
        {
            return invalid("weights must be a probability vector on the alphabet");
        }
        Ok(p.iter()
            .zip(&self.phi)
            .filter(|(q, _)| **q > 0.0)
            .map(|(q, f)| q * (f - q.ln()))
            .sum())
    }
}

fn log_sum_exp(it: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = it.collect();
    let m = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

/// A subset `Z` of the full shift.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SymbolSet {
    /// Union of the cylinders `[w]`.
    Cylinders(Vec<Vec<usize>>),
    /// The single point `w w w ...`.
    PeriodicPoint(Vec<usize>),
}

impl SymbolSet {
    pub fn everything() -> Self {
        SymbolSet::Cylinders(vec![vec![]])
    }

    /// `mu(Z)` for the Bernoulli measure `p`.
    pub fn bernoulli_mass(&self, p: &[f64]) -> f64 {
        match self {
            SymbolSet::Cylinders(words) => antichain(words)
                .iter()
                .map(|w| w.iter().map(|&i| p[i]).product::<f64>())
                .sum(),
            SymbolSet::PeriodicPoint(_) => 0.0,
        }
    }
}

/// Drop words that extend another word of the list.
fn antichain(words: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut w: Vec<Vec<usize>> = words.to_vec();
    w.sort();
    w.dedup();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for x in w {
        if !out.iter().any(|p| x.starts_with(p)) {
            out.push(x);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CarathSum {
    /// Smallest cover sum found; an upper bound for the infimum.
    pub value: f64,
    pub log_value: f64,
    /// Best cover using a single depth.
    pub uniform_value: f64,
    pub uniform_depth: usize,
    pub status: Status,
}

/// `M(Z, phi, alpha, m)` over covers by cylinders of depths in `[m, cap]`:
/// the best uniform-depth cover and the optimum over all cylinder covers of
/// those depths (computed on the trie of `Z`).
pub fn carath_sum(
    shift: &FiniteShift,
    z: &SymbolSet,
    alpha: f64,
    m: usize,
    cap: usize,
) -> Result<CarathSum> {
    if m == 0 || cap < m {
        return invalid("need 1 <= m <= cap");
    }
    if let SymbolSet::PeriodicPoint(p) = z {
        if p.is_empty() || p.iter().any(|&i| i >= shift.symbols()) {
            return invalid("periodic word must be non-empty over the alphabet");
        }
        let mut s = 0.0;
        let mut best = (f64::INFINITY, m);
        for n in 1..=cap {
            s += shift.phi[p[(n - 1) % p.len()]];
            if n >= m {
                let v = -alpha * n as f64 + s;
                if v < best.0 {
                    best = (v, n);
                }
            }
        }
        return Ok(CarathSum {
            value: best.0.exp(),
            log_value: best.0,
            uniform_value: best.0.exp(),
            uniform_depth: best.1,
            status: Status::UpperBound,
        });
    }
    let SymbolSet::Cylinders(words) = z else {
        unreachable!()
    };
    if words.iter().flatten().any(|&i| i >= shift.symbols()) {
        return invalid("cylinder word uses a symbol outside the alphabet");
    }
    let words = antichain(words);
    let lz = shift.log_z1();
    if words.is_empty() {
        return Ok(CarathSum {
            value: 0.0,
            log_value: f64::NEG_INFINITY,
            uniform_value: 0.0,
            uniform_depth: m,
            status: Status::UpperBound,
        });
    }
    // uniform covers
    let mut uniform = (f64::INFINITY, m);
    for n in m..=cap {
        let mut terms = Vec::new();
        let mut prefixes: Vec<&[usize]> = Vec::new();
        for w in &words {
            if w.len() <= n {
                terms.push(shift.birkhoff(w) + (n - w.len()) as f64 * lz - alpha * n as f64);
            } else {
                prefixes.push(&w[..n]);
            }
        }
        prefixes.sort();
        prefixes.dedup();
        terms.extend(
            prefixes
                .iter()
                .map(|p| shift.birkhoff(p) - alpha * n as f64),
        );
        let v = log_sum_exp(terms.into_iter());
        if v < uniform.0 {
            uniform = (v, n);
        }
    }
    // log G(l): best cover of a full subtree rooted at depth l, per unit weight
    let mut g = vec![0.0; cap + 1];
    g[cap] = -alpha * cap as f64;
    for l in (0..cap).rev() {
        let refine = lz + g[l + 1];
        g[l] = if l >= m {
            refine.min(-alpha * l as f64)
        } else {
            refine
        };
    }
    let best = trie_cost(shift, &words, &[], alpha, m, cap, &g);
    Ok(CarathSum {
        value: best.exp(),
        log_value: best,
        uniform_value: uniform.0.exp(),
        uniform_depth: uniform.1,
        status: Status::UpperBound,
    })
}

fn trie_cost(
    shift: &FiniteShift,
    words: &[Vec<usize>],
    node: &[usize],
    alpha: f64,
    m: usize,
    cap: usize,
    g: &[f64],
) -> f64 {
    let l = node.len();
    let s = shift.birkhoff(node);
    if words.iter().any(|w| w.len() == l) {
        // the whole cylinder lies in Z
        return s + g[l];
    }
    let own = -alpha * l as f64 + s;
    if l == cap {
        return own;
    }
    let mut children = Vec::new();
    for c in 0..shift.symbols() {
        let mut child = node.to_vec();
        child.push(c);
        let sub: Vec<Vec<usize>> = words
            .iter()
            .filter(|w| w.starts_with(&child))
            .cloned()
            .collect();
        if !sub.is_empty() {
            children.push(trie_cost(shift, &sub, &child, alpha, m, cap, g));
        }
    }
    let refine = log_sum_exp(children.into_iter());
    if l >= m {
        refine.min(own)
    } else {
        refine
    }
}

/// How `M(Z, phi, alpha, m)` behaves along the schedule of `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    ToZero,
    Bounded,
    Unclear,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SetPressure {
    pub estimate: f64,
    /// `alpha` with bounded sums below, vanishing sums above.
    pub bracket: (f64, f64),
    pub status: Status,
    /// `(alpha, trend, values along the schedule)` for every probe.
    pub evidence: Vec<(f64, Trend, Vec<f64>)>,
}

pub const ZERO_LEVEL: f64 = 1e-12;
pub const BOUNDED_LEVEL: f64 = 1e-3;
pub const DEFAULT_CAP: usize = 20_000;

pub fn trend(values: &[f64]) -> Trend {
    if values.last().is_some_and(|v| *v < ZERO_LEVEL) {
        Trend::ToZero
    } else if !values.is_empty() && values.iter().all(|v| *v > BOUNDED_LEVEL) {
        Trend::Bounded
    } else {
        Trend::Unclear
    }
}

/// `P_Z(phi)` by bisection on the threshold `alpha` where the sums switch
/// from bounded away from 0 to vanishing along `m_schedule`.
pub fn set_pressure(
    shift: &FiniteShift,
    z: &SymbolSet,
    alpha_bracket: (f64, f64),
    m_schedule: &[usize],
    tol: f64,
    cap: usize,
) -> Result<SetPressure> {
    let (mut lo, mut hi) = alpha_bracket;
    if !(lo < hi) || !(tol > 0.0) || m_schedule.is_empty() {
        return invalid("need lo < hi, tol > 0 and a non-empty schedule");
    }
    let mut evidence = Vec::new();
    let mut probe = |alpha: f64| -> Result<Trend> {
        let values = m_schedule
            .iter()
            .map(|&m| Ok(carath_sum(shift, z, alpha, m, cap)?.value))
            .collect::<Result<Vec<f64>>>()?;
        let t = trend(&values);
        evidence.push((alpha, t, values));
        Ok(t)
    };
    let (tl, th) = (probe(lo)?, probe(hi)?);
    if tl != Trend::Bounded || th != Trend::ToZero {
        let estimate = if tl == Trend::ToZero { lo } else { hi };
        return Ok(SetPressure {
            estimate,
            bracket: (lo, hi),
            status: Status::Undetermined,
            evidence,
        });
    }
    let mut unclear = None;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        match probe(mid)? {
            Trend::Bounded => lo = mid,
            Trend::ToZero => hi = mid,
            Trend::Unclear => {
                unclear = Some(mid);
                break;
            }
        }
    }
    // bracket the unresolved band from both sides
    if let Some(u) = unclear {
        let mut b = u;
        while b - lo > tol {
            let mid = 0.5 * (lo + b);
            if probe(mid)? == Trend::Bounded {
                lo = mid;
            } else {
                b = mid;
            }
        }
        let mut c = u;
        while hi - c > tol {
            let mid = 0.5 * (c + hi);
            if probe(mid)? == Trend::ToZero {
                hi = mid;
            } else {
                c = mid;
            }
        }
    }
    Ok(SetPressure {
        estimate: 0.5 * (lo + hi),
        bracket: (lo, hi),
        status: Status::UpperBound,
        evidence,
    })
}

/// `h(t) = -t log t - (1-t) log(1-t)`.
pub fn entropy_h(t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return invalid(format!("h is defined on [0, 1], got {t}"));
    }
    Ok(binary_entropy(t))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinomReport {
    pub n_max: u32,
    pub pairs_checked: usize,
    /// Largest `C(n, m) / exp(n h(m/n))`.
    pub worst_ratio: f64,
    pub first_violation: Option<(u32, u32)>,
}

impl BinomReport {
    pub fn holds(&self) -> bool {
        self.first_violation.is_none()
    }
}

/// `C(n, m) <= exp(n h(m/n)) < e^n` for all `0 <= m <= n <= n_max`, with
/// exact integer binomials.
pub fn binom_entropy_check(n_max: u32) -> Result<BinomReport> {
    if n_max == 0 || n_max > 120 {
        return invalid("n_max must lie in 1..=120");
    }
    let mut row: Vec<u128> = vec![1];
    let mut pairs = 0;
    let mut worst: f64 = 0.0;
    let mut first = None;
    for n in 1..=n_max {
        let mut next = vec![1u128; n as usize + 1];
        for m in 1..n as usize {
            next[m] = row[m - 1] + row[m];
        }
        row = next;
        for m in 0..=n {
            pairs += 1;
            let bound = (n as f64 * binary_entropy(m as f64 / n as f64)).exp();
            let ratio = row[m as usize] as f64 / bound;
            worst = worst.max(ratio);
            let ok = ratio <= 1.0 + 1e-12 && bound < (n as f64).exp();
            if !ok && first.is_none() {
                first = Some((n, m));
            }
        }
    }
    Ok(BinomReport {
        n_max,
        pairs_checked: pairs,
        worst_ratio: worst,
        first_violation: first,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GammaMode {
    Exact,
    Bound,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GammaCount {
    Exact(u128),
    Bound(f64),
}

impl GammaCount {
    pub fn as_f64(self) -> f64 {
        match self {
            GammaCount::Exact(c) => c as f64,
            GammaCount::Bound(b) => b,
        }
    }
}

pub const GAMMA_EXACT_MAX: u32 = 24;

/// Compositions `n = tau_0 + ... + tau_{s-1}` whose parts `<= N` sum to less
/// than `delta n` (exact), or `exp(n (3 delta + h(2 delta)))` (bound).
pub fn gamma_count(n: u32, big_n: u32, delta: f64, mode: GammaMode) -> Result<GammaCount> {
    if n == 0 || big_n == 0 || !(delta > 0.0 && delta < 0.5) {
        return invalid("need n >= 1, N >= 1 and 0 < delta < 1/2");
    }
    match mode {
        GammaMode::Bound => Ok(GammaCount::Bound(
            (n as f64 * (3.0 * delta + binary_entropy(2.0 * delta))).exp(),
        )),
        GammaMode::Exact => {
            if n > GAMMA_EXACT_MAX {
                return invalid(format!(
                    "exact enumeration is limited to n <= {GAMMA_EXACT_MAX}"
                ));
            }
            let limit = delta * n as f64;
            let n = n as usize;
            // ways[r][s]: compositions of r whose small parts sum to s
            let mut ways = vec![vec![0u128; n + 1]; n + 1];
            ways[0][0] = 1;
            for r in 1..=n {
                for part in 1..=r {
                    let small = part <= big_n as usize;
                    for s in 0..=n {
                        let c = ways[r - part][s];
                        if c == 0 {
                            continue;
                        }
                        let s2 = if small { s + part } else { s };
                        if s2 <= n {
                            ways[r][s2] += c;
                        }
                    }
                }
            }
            Ok(GammaCount::Exact(
                (0..=n)
                    .filter(|&s| (s as f64) < limit)
                    .map(|s| ways[n][s])
                    .sum(),
            ))
        }
    }
}

/// `K_1 = K + 3 delta + h(2 delta) + 2 delta log D`.
pub fn k1_threshold(k: f64, delta: f64, d: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 0.1) {
        return invalid("delta must lie in (0, 1/10)");
    }
    if !(d > 1.0) {
        return invalid("D must exceed 1");
    }
    Ok(k + 3.0 * delta + binary_entropy(2.0 * delta) + 2.0 * delta * d.ln())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyRow {
    pub big_n: u32,
    pub n: u64,
    pub mean: f64,
    pub std: f64,
    pub samples: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrequencyReport {
    pub rows: Vec<FrequencyRow>,
    /// `mu_hat(E_N)` per `N` when the measure lifts.
    pub tower_mass: Option<Vec<(u32, f64)>>,
}

impl FrequencyReport {
    pub fn row(&self, big_n: u32, n: u64) -> Option<&FrequencyRow> {
        self.rows.iter().find(|r| r.big_n == big_n && r.n == n)
    }
}

/// Empirical `A_n^N` over `trials` orbits of `measure`-typical base points
/// (trial `i` uses seed `seed + i`).
pub fn frequency_diagnostic(
    measure: &InducedMeasure,
    big_ns: &[u32],
    ns: &[u64],
    trials: usize,
    seed: u64,
) -> Result<FrequencyReport> {
    if trials == 0 || ns.contains(&0) || big_ns.contains(&0) {
        return invalid("trials, n and N must be positive");
    }
    let mut samples: BTreeMap<(u32, u64), Vec<f64>> = BTreeMap::new();
    for i in 0..trials {
        let mut r = rng(seed.wrapping_add(i as u64));
        let mut s = SymbolSampler::new(measure)?;
        let taus: Vec<u32> = {
            let max_n = ns.iter().copied().max().unwrap_or(0);
            let mut steps = 0u64;
            let mut out = Vec::new();
            while steps < max_n {
                let t = s.sample(&mut r).tau();
                steps += t as u64;
                out.push(t);
            }
            out
        };
        for &big_n in big_ns {
            let a = frequencies_from_times(taus.iter().copied(), ns, big_n);
            for (&n, v) in ns.iter().zip(a) {
                samples.entry((big_n, n)).or_default().push(v);
            }
        }
    }
    let rows = samples
        .into_iter()
        .map(|((big_n, n), v)| {
            let mean = v.iter().sum::<f64>() / v.len() as f64;
            let var =
                v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (v.len().max(2) - 1) as f64;
            FrequencyRow {
                big_n,
                n,
                mean,
                std: var.sqrt(),
                samples: v,
            }
        })
        .collect();
    let tower_mass = match lift_measure(measure) {
        Ok(mu) => Some(
            big_ns
                .iter()
                .map(|&b| Ok((b, mu.mass_up_to_height(b)?)))
                .collect::<Result<Vec<_>>>()?,
        ),
        Err(Error::NotLiftable(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(FrequencyReport { rows, tower_mass })
}

/// `P_mu(phi) = (h(nu) + int phi_bar dnu) / Q_nu` for the lift `mu` of `nu`.
pub fn measure_pressure(nu: &InducedMeasure, phi: &InducedPotential) -> Result<f64> {
    let h = nu.entropy()?;
    let i = nu.integral(phi)?;
    let q = kac_integral(nu)?.q;
    match (h, i, q) {
        (SeriesValue::Finite(h), SeriesValue::Finite(i), SeriesValue::Finite(q)) => Ok((h + i) / q),
        _ => Err(Error::Undetermined(
            "entropy, integral or Kac integral is not finite in closed form".into(),
        )),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GateInput {
    pub p_mu: f64,
    pub mass_on_w: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum GateVerdict {
    Liftable,
    NotCovered { reason: String },
}

/// Liftable when `mu(W) > 0` and `K(phi) < P_mu < inf`.
pub fn lifting_gate(input: GateInput, k_phi: f64) -> GateVerdict {
    let GateInput { p_mu, mass_on_w } = input;
    if !(mass_on_w > 0.0) {
        GateVerdict::NotCovered {
            reason: format!("mu(W) = {mass_on_w} is not positive"),
        }
    } else if !p_mu.is_finite() {
        GateVerdict::NotCovered {
            reason: "P_mu is not finite".into(),
        }
    } else if !(k_phi < p_mu) {
        GateVerdict::NotCovered {
            reason: format!("P_mu = {p_mu} does not exceed K(phi) = {k_phi}"),
        }
    } else {
        GateVerdict::Liftable
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::LN_2;

    #[test]
    fn mp_linear_canonical_partition_is_compatible() {
        let sys = catalog::mp_linear(0.5, 1.0).unwrap();
        let p = AmbientPartition::canonical(&sys.scheme).unwrap();
        assert!(matches!(
            check_compatible(&p, &sys.scheme, 30).unwrap(),
            Compatibility::Compatible { .. }
        ));
    }

    #[test]
    fn split_intermediate_image_is_detected() {
        let sys = catalog::mp_linear(0.5, 1.0).unwrap();
        // f^1(J_3) = D_2 = [1/8, 1/4)
        let p = AmbientPartition::canonical(&sys.scheme)
            .unwrap()
            .split("left", 0.1875)
            .unwrap();
        assert_eq!(
            check_compatible(&p, &sys.scheme, 30).unwrap(),
            Compatibility::Violated {
                block: BlockId::new(3, 1),
                iterate: 1
            }
        );
    }

    #[test]
    fn no_ambient_data_is_not_checkable() {
        let sys = catalog::renewal(0.3).unwrap();
        let p = AmbientPartition::Intervals(vec![("all".into(), Interval::new(0.0, 1.0))]);
        assert!(matches!(
            check_compatible(&p, &sys.scheme, 5).unwrap(),
            Compatibility::NotCheckable { .. }
        ));
    }

    #[test]
    fn carath_examples() {
        let s = FiniteShift::counting(2).unwrap();
        let c = carath_sum(&s, &SymbolSet::everything(), 1.0, 3, 10).unwrap();
        assert_abs_diff_eq!(
            c.uniform_value,
            (2.0 / std::f64::consts::E).powi(10),
            epsilon = 1e-12
        );
        assert_eq!(c.uniform_depth, 10);
        let one = carath_sum(&s, &SymbolSet::PeriodicPoint(vec![0]), 0.7, 4, 4).unwrap();
        assert_abs_diff_eq!(one.value, (-2.8f64).exp(), epsilon = 1e-14);
        let mut last = f64::INFINITY;
        for a in [0.1, 0.5, 1.0, 2.0, 5.0] {
            let v = carath_sum(
                &s,
                &SymbolSet::Cylinders(vec![vec![0, 1], vec![1]]),
                a,
                2,
                12,
            )
            .unwrap()
            .value;
            assert!(v <= last);
            last = v;
        }
    }

    #[test]
    fn set_pressure_of_full_shift() {
        let s = FiniteShift::counting(2).unwrap();
        let sp = set_pressure(
            &s,
            &SymbolSet::everything(),
            (-1.0, 3.0),
            &[8, 16, 32, 64],
            1e-6,
            DEFAULT_CAP,
        )
        .unwrap();
        assert_eq!(sp.status, Status::UpperBound);
        assert_abs_diff_eq!(sp.estimate, LN_2, epsilon = 0.01);
        let shifted = set_pressure(
            &s.shifted(0.4),
            &SymbolSet::everything(),
            (-1.0, 3.0),
            &[8, 16, 32, 64],
            1e-6,
            DEFAULT_CAP,
        )
        .unwrap();
        assert_abs_diff_eq!(shifted.estimate, sp.estimate + 0.4, epsilon = 1e-5);
        let point = set_pressure(
            &s,
            &SymbolSet::PeriodicPoint(vec![1]),
            (-1.0, 3.0),
            &[8, 16, 32, 64],
            1e-6,
            DEFAULT_CAP,
        )
        .unwrap();
        assert!(point.estimate <= 1e-2);
    }

    #[test]
    fn entropy_values() {
        assert_eq!(entropy_h(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(entropy_h(0.5).unwrap(), LN_2, epsilon = 1e-15);
        assert_abs_diff_eq!(
            entropy_h(0.25).unwrap(),
            0.5623351446188083,
            epsilon = 1e-15
        );
        assert!(entropy_h(1.5).is_err());
    }

    #[test]
    fn binomial_bounds_hold() {
        let r = binom_entropy_check(30).unwrap();
        assert!(r.holds());
        assert_eq!(r.pairs_checked, (1..=30).map(|n| n + 1).sum::<usize>());
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(
            gamma_count(3, 1, 0.4, GammaMode::Exact).unwrap(),
            GammaCount::Exact(3)
        );
        // delta n < 1 and N >= n: every part is small, nothing qualifies
        assert_eq!(
            gamma_count(5, 5, 0.1, GammaMode::Exact).unwrap(),
            GammaCount::Exact(0)
        );
        let b = gamma_count(20, 3, 0.1, GammaMode::Bound).unwrap().as_f64();
        assert_abs_diff_eq!(
            b,
            (20.0 * (0.3 + binary_entropy(0.2))).exp(),
            epsilon = 1e-9
        );
        assert!(gamma_count(25, 2, 0.1, GammaMode::Exact).is_err());
    }

    #[test]
    fn k1_value() {
        assert_abs_diff_eq!(
            k1_threshold(0.5, 0.05, 2.0).unwrap(),
            1.0443983,
            epsilon = 1e-6
        );
        assert!(k1_threshold(0.5, 0.1, 2.0).is_err());
        assert!(k1_threshold(0.5, 0.05, 1.0).is_err());
    }

    #[test]
    fn gate_verdicts() {
        assert_eq!(
            lifting_gate(
                GateInput {
                    p_mu: 0.393,
                    mass_on_w: 0.5
                },
                -0.3
            ),
            GateVerdict::Liftable
        );
        assert!(matches!(
            lifting_gate(
                GateInput {
                    p_mu: -0.3,
                    mass_on_w: 0.5
                },
                -0.3
            ),
            GateVerdict::NotCovered { .. }
        ));
        assert!(matches!(
            lifting_gate(
                GateInput {
                    p_mu: 0.393,
                    mass_on_w: 0.0
                },
                -0.3
            ),
            GateVerdict::NotCovered { .. }
        ));
    }
}
