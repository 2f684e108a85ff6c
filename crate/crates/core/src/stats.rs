//! Monte Carlo on the tower: orbit sampling, correlation decay and the CLT.
//!
//! All randomness flows from an explicit seed through `ChaCha8Rng`, so a
//! seed reproduces a sample bit for bit on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{invalid, Error, Result};
use crate::measure::InducedMeasure;
use crate::potential::PieceForm;
use crate::report::Status;
use crate::scheme::{BlockId, Piece};
use crate::series::SeriesValue;
use crate::sums::{self, Moment};
use crate::tower::SymbolStream;

/// Ordinary least squares `y = slope x + intercept`.
pub fn least_squares(pts: &[(f64, f64)]) -> (f64, f64) {
    let n = pts.len() as f64;
    if pts.is_empty() {
        return (0.0, 0.0);
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return (0.0, my);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

enum LevelDraw {
    Blocks(Vec<(f64, BlockId)>),
    /// `P(j) proportional to e^(s j)`, `s < 0`.
    Geometric {
        level: u32,
        s: f64,
    },
}

enum Kind {
    Levels {
        cum: Vec<f64>,
        draws: Vec<LevelDraw>,
    },
    Markov {
        states: Vec<BlockId>,
        start: Vec<f64>,
        rows: Vec<Vec<f64>>,
        current: Option<usize>,
    },
    Categorical {
        cum: Vec<f64>,
        blocks: Vec<BlockId>,
    },
    InverseSquare,
}

/// Draws symbols of the induced shift according to a measure.
pub struct SymbolSampler {
    kind: Kind,
}

fn cumulative(w: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut acc = 0.0;
    w.into_iter()
        .map(|x| {
            acc += x;
            acc
        })
        .collect()
}

fn pick(cum: &[f64], u: f64) -> usize {
    let u = u * cum.last().copied().unwrap_or(1.0);
    cum.partition_point(|c| *c <= u).min(cum.len() - 1)
}

/// Remaining mass below which the level table stops.
const LEVEL_CUTOFF: f64 = 1e-17;
const MAX_SAMPLED_LEVELS: u32 = 200_000;

impl SymbolSampler {
    pub fn new(measure: &InducedMeasure) -> Result<Self> {
        let kind = match measure {
            InducedMeasure::Bernoulli { scheme, log_mass } => {
                let mut masses = Vec::new();
                let mut draws = Vec::new();
                let refuse =
                    |n: u32| Error::NotSamplable(format!("level {n} has no closed-form mass"));
                for n in 1..=MAX_SAMPLED_LEVELS {
                    let m = sums::at_level(scheme, log_mass, Moment::One, n)?
                        .finite()
                        .ok_or_else(|| refuse(n))?;
                    if m > 0.0 {
                        let draw = match scheme.pieces_at(n).as_slice() {
                            [Piece::Geometric { .. }] | [Piece::Tail { .. }] => {
                                let p = scheme.pieces_at(n)[0];
                                let p = match p {
                                    Piece::Tail { law, .. } => Piece::Tail { from: n, law },
                                    p => p,
                                };
                                match (p, log_mass.on_piece(scheme, &p)?) {
                                    (Piece::Tail { law, .. }, PieceForm::Affine(_))
                                        if law.shape == crate::scheme::TailShape::Single =>
                                    {
                                        LevelDraw::Blocks(vec![(1.0, BlockId::new(n, 1))])
                                    }
                                    (_, PieceForm::Affine(a)) => LevelDraw::Geometric {
                                        level: n,
                                        s: a.per_index,
                                    },
                                    _ => return Err(refuse(n)),
                                }
                            }
                            pieces if pieces.iter().all(|p| matches!(p, Piece::Block(_))) => {
                                let mut ids = Vec::new();
                                let mut w = Vec::new();
                                for p in pieces {
                                    if let Piece::Block(b) = p {
                                        ids.push(b.id);
                                        w.push(measure.block_mass(b.id)?);
                                    }
                                }
                                LevelDraw::Blocks(cumulative(w).into_iter().zip(ids).collect())
                            }
                            _ => return Err(refuse(n)),
                        };
                        masses.push(m);
                        draws.push(draw);
                    }
                    let rest = sums::over_levels_from(scheme, log_mass, Moment::One, n + 1)?;
                    match rest {
                        SeriesValue::Finite(r) if r < LEVEL_CUTOFF => break,
                        SeriesValue::Finite(_) => {}
                        _ => return Err(refuse(n + 1)),
                    }
                }
                if draws.is_empty() {
                    return Err(Error::NotSamplable("measure has no mass".into()));
                }
                Kind::Levels {
                    cum: cumulative(masses),
                    draws,
                }
            }
            InducedMeasure::Markov(m) => Kind::Markov {
                states: m.states.iter().map(|s| s[0]).collect(),
                start: cumulative(m.stationary.iter().copied()),
                rows: m
                    .transition
                    .iter()
                    .map(|r| cumulative(r.iter().copied()))
                    .collect(),
                current: None,
            },
            InducedMeasure::Explicit { weights } => Kind::Categorical {
                cum: cumulative(weights.iter().map(|w| w.1)),
                blocks: weights.iter().map(|w| w.0).collect(),
            },
            InducedMeasure::PowerLaw { exponent } if *exponent == 2.0 => Kind::InverseSquare,
            InducedMeasure::PowerLaw { exponent } => {
                return Err(Error::NotSamplable(format!(
                    "power law with exponent {exponent}"
                )))
            }
        };
        Ok(SymbolSampler { kind })
    }

    pub fn sample(&mut self, rng: &mut impl Rng) -> BlockId {
        match &mut self.kind {
            Kind::Levels { cum, draws } => match &draws[pick(cum, rng.gen::<f64>())] {
                LevelDraw::Blocks(b) => {
                    let cum: Vec<f64> = b.iter().map(|x| x.0).collect();
                    b[pick(&cum, rng.gen::<f64>())].1
                }
                LevelDraw::Geometric { level, s } => {
                    // P(j > k) = e^(s k)
                    let v: f64 = 1.0 - rng.gen::<f64>();
                    BlockId::new(*level, 1 + (v.ln() / *s).floor() as u64)
                }
            },
            Kind::Markov {
                states,
                start,
                rows,
                current,
            } => {
                let next = match current {
                    None => pick(start, rng.gen::<f64>()),
                    Some(c) => pick(&rows[*c], rng.gen::<f64>()),
                };
                *current = Some(next);
                states[next]
            }
            Kind::Categorical { cum, blocks } => blocks[pick(cum, rng.gen::<f64>())],
            Kind::InverseSquare => loop {
                // proposal P(a) = 1/(a(a+1)); accept with (a+1)/(2a)
                let u: f64 = 1.0 - rng.gen::<f64>();
                let a = (1.0 / u).floor().min(u32::MAX as f64) as u32;
                if rng.gen::<f64>() * 2.0 * a as f64 <= (a + 1) as f64 {
                    break BlockId::new(a, 1);
                }
            },
        }
    }
}

/// A seeded, lazily generated base sequence distributed according to
/// `measure`.
pub fn symbol_stream(measure: &InducedMeasure, seed: u64) -> Result<SymbolStream> {
    let mut sampler = SymbolSampler::new(measure)?;
    let mut r = rng(seed);
    Ok(SymbolStream::from_fn(move || sampler.sample(&mut r)))
}

/// A tower orbit of `(x, 0)` with `x` drawn from the base measure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitSample {
    pub seed: u64,
    pub base_symbols: Vec<BlockId>,
    /// Height at each tower step.
    pub heights: Vec<u32>,
    /// Index into `base_symbols` of the column at each tower step.
    pub columns: Vec<u32>,
}

impl OrbitSample {
    pub fn len(&self) -> usize {
        self.heights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heights.is_empty()
    }

    /// `(symbol, height)` at tower step `i`.
    pub fn point(&self, i: usize) -> (BlockId, u32) {
        (self.base_symbols[self.columns[i] as usize], self.heights[i])
    }

    pub fn observe(&self, h: &dyn Fn(BlockId, u32) -> f64) -> Vec<f64> {
        (0..self.len())
            .map(|i| {
                let (a, k) = self.point(i);
                h(a, k)
            })
            .collect()
    }
}

/// Sample `length` tower steps starting from height 0.
pub fn sample_orbit(measure: &InducedMeasure, length: usize, seed: u64) -> Result<OrbitSample> {
    if length == 0 {
        return invalid("orbit length must be positive");
    }
    let mut sampler = SymbolSampler::new(measure)?;
    let mut r = rng(seed);
    let mut base_symbols = Vec::new();
    let mut heights = Vec::with_capacity(length);
    let mut columns = Vec::with_capacity(length);
    while heights.len() < length {
        let a = sampler.sample(&mut r);
        let col = base_symbols.len() as u32;
        base_symbols.push(a);
        for k in 0..a.tau() {
            if heights.len() == length {
                break;
            }
            heights.push(k);
            columns.push(col);
        }
    }
    Ok(OrbitSample {
        seed,
        base_symbols,
        heights,
        columns,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayFit {
    pub theta: f64,
    pub prefactor: f64,
    pub r_squared: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayReport {
    pub lags: Vec<usize>,
    pub correlations: Vec<f64>,
    pub fit: Option<DecayFit>,
    pub status: Status,
    pub note: Option<String>,
}

fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Fit `|C(k)| ~ A theta^k` by least squares in linear space; `theta` by a
/// grid plus golden-section refinement, `A` in closed form.
fn fit_exponential(c: &[f64]) -> DecayFit {
    let y: Vec<f64> = c.iter().map(|v| v.abs()).collect();
    let eval = |theta: f64| {
        let pw: Vec<f64> = (0..y.len()).map(|k| theta.powi(k as i32)).collect();
        let den: f64 = pw.iter().map(|p| p * p).sum();
        let a = y.iter().zip(&pw).map(|(y, p)| y * p).sum::<f64>() / den;
        let ssr: f64 = y.iter().zip(&pw).map(|(y, p)| (y - a * p).powi(2)).sum();
        (ssr, a)
    };
    let grid = 200;
    let mut best = 0usize;
    for i in 1..grid {
        if eval(i as f64 / grid as f64).0 < eval(best as f64 / grid as f64).0 {
            best = i;
        }
    }
    let (mut lo, mut hi) = (
        (best.max(1) - 1) as f64 / grid as f64,
        ((best + 1) as f64 / grid as f64).min(0.999_999),
    );
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let m1 = hi - g * (hi - lo);
        let m2 = lo + g * (hi - lo);
        if eval(m1).0 <= eval(m2).0 {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let mut theta = 0.5 * (lo + hi);
    if eval(0.0).0 <= eval(theta).0 {
        theta = 0.0;
    }
    let (ssr, prefactor) = eval(theta);
    let my = mean(&y);
    let sst: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    let r_squared = if sst > 0.0 { 1.0 - ssr / sst } else { 1.0 };
    DecayFit {
        theta,
        prefactor,
        r_squared,
    }
}

/// Empirical `C(k) = E[h1 (h2 o f_hat^k)] - E[h1] E[h2]` for
/// `k = 0..=lag_max` and an exponential fit on `|C(k)|`.
pub fn correlation_decay(
    sample: &OrbitSample,
    h1: &dyn Fn(BlockId, u32) -> f64,
    h2: &dyn Fn(BlockId, u32) -> f64,
    lag_max: usize,
) -> Result<DecayReport> {
    if sample.len() <= lag_max + 1 {
        return invalid("orbit is shorter than the lag window");
    }
    let x = sample.observe(h1);
    let y = sample.observe(h2);
    let var = |v: &[f64]| {
        let m = mean(v);
        v.iter().map(|a| (a - m).powi(2)).sum::<f64>() / v.len() as f64
    };
    let lags: Vec<usize> = (0..=lag_max).collect();
    if var(&x) < 1e-14 || var(&y) < 1e-14 {
        return Ok(DecayReport {
            lags,
            correlations: Vec::new(),
            fit: None,
            status: Status::Undetermined,
            note: Some("cohomologous to a constant suspected".into()),
        });
    }
    let correlations: Vec<f64> = lags
        .iter()
        .map(|&k| {
            let n = x.len() - k;
            let mx = mean(&x[..n]);
            let my = mean(&y[k..]);
            x[..n]
                .iter()
                .zip(&y[k..])
                .map(|(a, b)| (a - mx) * (b - my))
                .sum::<f64>()
                / n as f64
        })
        .collect();
    let fit = fit_exponential(&correlations);
    Ok(DecayReport {
        lags,
        correlations,
        fit: Some(fit),
        status: Status::RegressionOnly,
        note: None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CltReport {
    pub blocks: usize,
    pub block_length: usize,
    pub sigma2: f64,
    pub ks: f64,
    pub passed: bool,
    /// Normalized block sums.
    pub normalized_sums: Vec<f64>,
}

/// Kolmogorov-Smirnov distance between the normalized Birkhoff sums over
/// `block_count` disjoint blocks and `N(0, sigma_hat^2)`.
pub fn clt_check(
    sample: &OrbitSample,
    h: &dyn Fn(BlockId, u32) -> f64,
    block_count: usize,
) -> Result<CltReport> {
    if block_count < 2 || sample.len() < 2 * block_count {
        return invalid("need at least two blocks of length two");
    }
    let x = sample.observe(h);
    let len = x.len() / block_count;
    let m = mean(&x[..len * block_count]);
    let mut sums: Vec<f64> = x
        .chunks_exact(len)
        .take(block_count)
        .map(|c| c.iter().map(|v| v - m).sum::<f64>() / (len as f64).sqrt())
        .collect();
    let sigma2 = sums.iter().map(|s| s * s).sum::<f64>() / block_count as f64;
    if sigma2 < 1e-12 {
        return Err(Error::NotCheckable(
            "cohomologous to a constant suspected (zero variance)".into(),
        ));
    }
    let normal =
        Normal::new(0.0, sigma2.sqrt()).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let normalized_sums = sums.clone();
    sums.sort_by(f64::total_cmp);
    let n = sums.len() as f64;
    let ks = sums
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let f = normal.cdf(*s);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max);
    Ok(CltReport {
        blocks: block_count,
        block_length: len,
        sigma2,
        ks,
        passed: ks < 0.05 && block_count >= 1000,
        normalized_sums,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use std::f64::consts::LN_2;

    fn renewal_gibbs() -> InducedMeasure {
        let sys = catalog::renewal(0.3).unwrap();
        let pot = sys.potential("phi").unwrap().plus_tau(-(LN_2 - 0.3));
        InducedMeasure::bernoulli(sys.scheme.clone(), &pot).unwrap()
    }

    #[test]
    fn least_squares_exact_line() {
        let pts: Vec<(f64, f64)> = (0..5).map(|i| (i as f64, 2.0 * i as f64 - 1.0)).collect();
        let (s, c) = least_squares(&pts);
        assert!((s - 2.0).abs() < 1e-12 && (c + 1.0).abs() < 1e-12);
    }

    #[test]
    fn renewal_symbol_one_has_half_mass() {
        let s = sample_orbit(&renewal_gibbs(), 200_000, 7).unwrap();
        let ones = s.base_symbols.iter().filter(|a| a.level == 1).count() as f64;
        let p = ones / s.base_symbols.len() as f64;
        assert!((p - 0.5).abs() < 0.01, "{p}");
    }

    #[test]
    fn same_seed_same_sample() {
        let a = sample_orbit(&renewal_gibbs(), 5000, 42).unwrap();
        let b = sample_orbit(&renewal_gibbs(), 5000, 42).unwrap();
        assert_eq!(a, b);
        let c = sample_orbit(&renewal_gibbs(), 5000, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn single_block_trace_is_periodic() {
        let nu = InducedMeasure::explicit(vec![(BlockId::new(3, 1), 1.0)]).unwrap();
        let s = sample_orbit(&nu, 9, 1).unwrap();
        assert_eq!(s.heights, vec![0, 1, 2, 0, 1, 2, 0, 1, 2]);
    }

    #[test]
    fn weighted_geometric_index_draw() {
        let sys = catalog::weighted_infinite(0.3).unwrap();
        let pot = sys.potential("phi").unwrap().plus_tau(-(LN_2 - 0.3));
        let nu = InducedMeasure::bernoulli(sys.scheme.clone(), &pot).unwrap();
        let mut sampler = SymbolSampler::new(&nu).unwrap();
        let mut r = rng(3);
        let n = 100_000;
        let draws: Vec<BlockId> = (0..n).map(|_| sampler.sample(&mut r)).collect();
        let f =
            |p: &dyn Fn(&BlockId) -> bool| draws.iter().filter(|a| p(a)).count() as f64 / n as f64;
        assert!((f(&|a| a.index == 1) - 0.5).abs() < 0.01);
        assert!((f(&|a| a.level == 2 && a.index == 1) - 0.125).abs() < 0.01);
    }

    #[test]
    fn inverse_square_marginal() {
        let nu = InducedMeasure::power_law(2.0).unwrap();
        let mut sampler = SymbolSampler::new(&nu).unwrap();
        let mut r = rng(11);
        let n = 200_000;
        let ones = (0..n).filter(|_| sampler.sample(&mut r).level == 1).count() as f64 / n as f64;
        let expect = 6.0 / std::f64::consts::PI.powi(2);
        assert!((ones - expect).abs() < 0.005, "{ones}");
    }

    #[test]
    fn iid_indicator_decorrelates() {
        let nu =
            InducedMeasure::explicit(vec![(BlockId::new(1, 1), 0.5), (BlockId::new(1, 2), 0.5)])
                .unwrap();
        let s = sample_orbit(&nu, 100_000, 5).unwrap();
        let h = |a: BlockId, _k: u32| if a.index == 1 { 1.0 } else { 0.0 };
        let d = correlation_decay(&s, &h, &h, 10).unwrap();
        assert!((d.correlations[0] - 0.25).abs() < 0.01);
        assert!(d.correlations[1..].iter().all(|c| c.abs() < 0.01));
    }

    #[test]
    fn constant_observable_is_refused() {
        let s = sample_orbit(&renewal_gibbs(), 1000, 5).unwrap();
        let h = |_a: BlockId, _k: u32| 1.0;
        let d = correlation_decay(&s, &h, &h, 5).unwrap();
        assert!(d.fit.is_none());
        assert!(clt_check(&s, &h, 10).is_err());
    }

    #[test]
    fn coin_clt_passes() {
        let nu =
            InducedMeasure::explicit(vec![(BlockId::new(1, 1), 0.5), (BlockId::new(1, 2), 0.5)])
                .unwrap();
        let s = sample_orbit(&nu, 1_000_000, 9).unwrap();
        let h = |a: BlockId, _k: u32| if a.index == 1 { 1.0 } else { -1.0 };
        let r = clt_check(&s, &h, 1000).unwrap();
        assert!((r.sigma2 - 1.0).abs() < 0.15, "{}", r.sigma2);
        assert!(r.passed, "ks = {}", r.ks);
    }
}
