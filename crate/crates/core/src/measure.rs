//! Measures on the induced shift and their lifts to the tower.

use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::potential::{all_words, InducedPotential, TailCertificate, TailProfile};
use crate::scheme::{BlockId, InducingScheme, Piece, TailShape};
use crate::series::SeriesValue;
use crate::sums::{self, Moment};

/// A shift-invariant probability on the induced shift, given by its
/// cylinder weights.
#[derive(Debug, Clone)]
pub enum InducedMeasure {
    /// Product measure with `nu(J_a) = exp(log_mass(a))`; `log_mass` is
    /// block-constant and its exponential sums to 1.
    Bernoulli {
        scheme: Arc<InducingScheme>,
        log_mass: InducedPotential,
    },
    /// Stationary Markov measure on a finite alphabet.
    Markov(MarkovMeasure),
    /// Product measure on finitely many blocks.
    Explicit { weights: Vec<(BlockId, f64)> },
    /// Product measure on the blocks `(a, 1)`, `a >= 1`, with
    /// `nu(J_a) = a^-exponent / zeta(exponent)`.
    PowerLaw { exponent: f64 },
}

/// States are admissible words of length `depth - 1`; the chain moves from
/// `u` to `u[1..] + b`.
#[derive(Debug, Clone)]
pub struct MarkovMeasure {
    pub scheme: Arc<InducingScheme>,
    pub depth: usize,
    pub states: Vec<Vec<BlockId>>,
    pub stationary: Vec<f64>,
    pub transition: Vec<Vec<f64>>,
}

impl MarkovMeasure {
    fn state_index(&self, w: &[BlockId]) -> Option<usize> {
        self.states.iter().position(|s| s.as_slice() == w)
    }

    fn cylinder(&self, word: &[BlockId]) -> f64 {
        let k = self.depth - 1;
        if word.len() < k {
            return self
                .states
                .iter()
                .zip(&self.stationary)
                .filter(|(s, _)| s.starts_with(word))
                .map(|(_, p)| p)
                .sum();
        }
        let Some(mut cur) = self.state_index(&word[..k]) else {
            return 0.0;
        };
        let mut mass = self.stationary[cur];
        for i in 1..=word.len() - k {
            let Some(next) = self.state_index(&word[i..i + k]) else {
                return 0.0;
            };
            mass *= self.transition[cur][next];
            cur = next;
        }
        mass
    }

    /// `nu(J_a)` for each symbol.
    fn marginals(&self) -> Vec<(BlockId, f64)> {
        let mut out: Vec<(BlockId, f64)> = Vec::new();
        for (s, p) in self.states.iter().zip(&self.stationary) {
            match out.iter_mut().find(|(b, _)| *b == s[0]) {
                Some(e) => e.1 += p,
                None => out.push((s[0], *p)),
            }
        }
        out
    }
}

/// `zeta(p)` for `p > 1` by Euler-Maclaurin.
pub fn zeta(p: f64) -> f64 {
    let n = 1000.0f64;
    let head: f64 = (1..1000).map(|k| (k as f64).powf(-p)).sum();
    head + n.powf(1.0 - p) / (p - 1.0) + 0.5 * n.powf(-p) + p * n.powf(-p - 1.0) / 12.0
        - p * (p + 1.0) * (p + 2.0) * n.powf(-p - 3.0) / 720.0
}

impl InducedMeasure {
    /// Normalized product measure `exp(pot)` on a scheme; `pot` must be
    /// block-constant with a finite total.
    pub fn bernoulli(
        scheme: Arc<InducingScheme>,
        pot: &InducedPotential,
    ) -> Result<InducedMeasure> {
        if !pot.is_block_constant() {
            return invalid("product measures need a block-constant potential");
        }
        let z = match sums::total(&scheme, pot, Moment::One)? {
            SeriesValue::Finite(z) if z > 0.0 => z,
            SeriesValue::Finite(_) => return invalid("potential has zero mass"),
            SeriesValue::Divergent => return invalid("potential has infinite mass"),
            SeriesValue::Undetermined => {
                return Err(Error::Undetermined("mass has no closed form".into()))
            }
        };
        Ok(InducedMeasure::Bernoulli {
            scheme,
            log_mass: pot.plus_constant(-z.ln()),
        })
    }

    pub fn explicit(weights: Vec<(BlockId, f64)>) -> Result<InducedMeasure> {
        let total: f64 = weights.iter().map(|w| w.1).sum();
        if weights.is_empty()
            || weights.iter().any(|w| !(w.1 >= 0.0))
            || (total - 1.0).abs() > 1e-12
        {
            return invalid("explicit weights must be nonnegative and sum to 1");
        }
        Ok(InducedMeasure::Explicit { weights })
    }

    pub fn power_law(exponent: f64) -> Result<InducedMeasure> {
        if !(exponent > 1.0) {
            return invalid("power-law exponent must exceed 1");
        }
        Ok(InducedMeasure::PowerLaw { exponent })
    }

    /// `nu(J_a)`.
    pub fn block_mass(&self, a: BlockId) -> Result<f64> {
        Ok(match self {
            InducedMeasure::Bernoulli { scheme, log_mass } => {
                log_mass.eval_word(scheme, &[a])?.exp()
            }
            InducedMeasure::Markov(m) => {
                m.marginals().iter().find(|w| w.0 == a).map_or(0.0, |w| w.1)
            }
            InducedMeasure::Explicit { weights } => {
                weights.iter().find(|w| w.0 == a).map_or(0.0, |w| w.1)
            }
            InducedMeasure::PowerLaw { exponent } => {
                if a.index != 1 {
                    0.0
                } else {
                    (a.level as f64).powf(-exponent) / zeta(*exponent)
                }
            }
        })
    }

    /// `nu([a_0 ... a_{n-1}])`.
    pub fn cylinder_mass(&self, word: &[BlockId]) -> Result<f64> {
        match self {
            InducedMeasure::Markov(m) => Ok(m.cylinder(word)),
            _ => word.iter().map(|&a| self.block_mass(a)).product(),
        }
    }

    /// `sum_a m(a) nu(J_a)` for a moment given by a block-constant potential
    /// or `tau`.
    fn moment(&self, moment: Moment<'_>) -> Result<SeriesValue> {
        let eval = |a: BlockId| -> Result<f64> {
            Ok(match moment {
                Moment::One => 1.0,
                Moment::Tau => a.tau() as f64,
                Moment::Potential(p) => match self {
                    InducedMeasure::Bernoulli { scheme, .. } => p.eval_word(scheme, &[a])?,
                    InducedMeasure::Markov(m) => p.eval_word(&m.scheme, &[a])?,
                    _ => return Err(Error::Undetermined("potential has no scheme".into())),
                },
            })
        };
        match self {
            InducedMeasure::Bernoulli { scheme, log_mass } => sums::total(scheme, log_mass, moment),
            InducedMeasure::Markov(m) => Ok(SeriesValue::Finite(
                m.marginals()
                    .iter()
                    .map(|(a, p)| Ok(p * eval(*a)?))
                    .sum::<Result<f64>>()?,
            )),
            InducedMeasure::Explicit { weights } => Ok(SeriesValue::Finite(
                weights
                    .iter()
                    .map(|(a, p)| Ok(p * eval(*a)?))
                    .sum::<Result<f64>>()?,
            )),
            InducedMeasure::PowerLaw { exponent } => match moment {
                Moment::One => Ok(SeriesValue::Finite(1.0)),
                // sum a^(1-p) converges iff p > 2
                Moment::Tau if *exponent <= 2.0 => Ok(SeriesValue::Divergent),
                Moment::Tau => Ok(SeriesValue::Finite(zeta(exponent - 1.0) / zeta(*exponent))),
                Moment::Potential(_) => Ok(SeriesValue::Undetermined),
            },
        }
    }

    /// `int psi_bar d nu`.
    pub fn integral(&self, psi: &InducedPotential) -> Result<SeriesValue> {
        if psi.is_block_constant() {
            return self.moment(Moment::Potential(psi));
        }
        let scheme = match self {
            InducedMeasure::Bernoulli { scheme, .. } => scheme.clone(),
            InducedMeasure::Markov(m) => m.scheme.clone(),
            _ => return Ok(SeriesValue::Undetermined),
        };
        let mut s = 0.0;
        for w in all_words(&scheme, psi.depth())? {
            s += self.cylinder_mass(&w)? * psi.eval_word(&scheme, &w)?;
        }
        Ok(SeriesValue::Finite(s))
    }

    /// `nu(S_n)`.
    pub fn level_mass(&self, n: u32) -> Result<SeriesValue> {
        match self {
            InducedMeasure::Bernoulli { scheme, log_mass } => {
                sums::at_level(scheme, log_mass, Moment::One, n)
            }
            InducedMeasure::Markov(m) => Ok(SeriesValue::Finite(
                m.marginals()
                    .iter()
                    .filter(|w| w.0.tau() == n)
                    .map(|w| w.1)
                    .sum(),
            )),
            InducedMeasure::Explicit { weights } => Ok(SeriesValue::Finite(
                weights.iter().filter(|w| w.0.tau() == n).map(|w| w.1).sum(),
            )),
            InducedMeasure::PowerLaw { .. } => {
                Ok(SeriesValue::Finite(self.block_mass(BlockId::new(n, 1))?))
            }
        }
    }

    /// `nu(tau >= n)`.
    pub fn tail(&self, n: u32) -> Result<SeriesValue> {
        let n = n.max(1);
        match self {
            InducedMeasure::Bernoulli { scheme, log_mass } => {
                sums::over_levels_from(scheme, log_mass, Moment::One, n)
            }
            InducedMeasure::PowerLaw { exponent } => {
                let head: f64 = (1..n).map(|a| (a as f64).powf(-exponent)).sum();
                Ok(SeriesValue::Finite((1.0 - head / zeta(*exponent)).max(0.0)))
            }
            _ => {
                let s = self
                    .finite_support()?
                    .iter()
                    .filter(|w| w.0.tau() >= n)
                    .map(|w| w.1)
                    .sum();
                Ok(SeriesValue::Finite(s))
            }
        }
    }

    fn finite_support(&self) -> Result<Vec<(BlockId, f64)>> {
        match self {
            InducedMeasure::Markov(m) => Ok(m.marginals()),
            InducedMeasure::Explicit { weights } => Ok(weights.clone()),
            _ => invalid("measure has infinite support"),
        }
    }

    /// Kolmogorov-Sinai entropy of the shift.
    pub fn entropy(&self) -> Result<SeriesValue> {
        match self {
            InducedMeasure::Bernoulli { scheme, log_mass } => Ok(
                match sums::total(scheme, log_mass, Moment::Potential(log_mass))? {
                    SeriesValue::Finite(v) => SeriesValue::Finite(-v),
                    other => other,
                },
            ),
            InducedMeasure::Markov(m) => {
                let mut h = 0.0;
                for (i, row) in m.transition.iter().enumerate() {
                    for p in row.iter().filter(|p| **p > 0.0) {
                        h -= m.stationary[i] * p * p.ln();
                    }
                }
                Ok(SeriesValue::Finite(h))
            }
            InducedMeasure::Explicit { weights } => Ok(SeriesValue::Finite(
                weights
                    .iter()
                    .filter(|w| w.1 > 0.0)
                    .map(|w| -w.1 * w.1.ln())
                    .sum(),
            )),
            InducedMeasure::PowerLaw { .. } => Ok(SeriesValue::Undetermined),
        }
    }

    /// Tail table `nu(tau >= n)` for `n = 1..=max_level`, with a closed-form
    /// rate when one exists.
    pub fn tail_profile(&self, max_level: u32) -> Result<TailProfile> {
        let mut points = Vec::new();
        for n in 1..=max_level {
            match self.tail(n)? {
                SeriesValue::Finite(v) => points.push((n, v)),
                _ => break,
            }
        }
        let certificate = match self {
            InducedMeasure::Bernoulli { scheme, log_mass } => tail_certificate(scheme, log_mass)?,
            InducedMeasure::PowerLaw { .. } => None,
            _ => {
                let last = self
                    .finite_support()?
                    .iter()
                    .map(|w| w.0.tau())
                    .max()
                    .unwrap_or(0);
                Some(TailCertificate::FiniteSupport { last_level: last })
            }
        };
        Ok(TailProfile {
            points,
            certificate,
        })
    }
}

fn tail_certificate(
    scheme: &InducingScheme,
    log_mass: &InducedPotential,
) -> Result<Option<TailCertificate>> {
    let Some(law) = scheme.tail() else {
        if scheme.explicit_levels().all(|l| l.has_closed_form()) {
            return Ok(Some(TailCertificate::FiniteSupport {
                last_level: scheme.last_explicit_level(),
            }));
        }
        return Ok(None);
    };
    let piece = Piece::Tail {
        from: law.from_level,
        law,
    };
    let form = match log_mass.on_piece(scheme, &piece) {
        Ok(crate::potential::PieceForm::Affine(a)) => a,
        Ok(_) | Err(Error::Undetermined(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    if law.shape == TailShape::Geometric && form.per_index >= 0.0 {
        return Ok(None);
    }
    Ok(Some(TailCertificate::Geometric {
        from_level: law.from_level,
        theta: form.per_level.exp(),
    }))
}

/// `Q_nu = int tau d nu` with the part carried by levels above 32.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KacIntegral {
    pub q: SeriesValue,
    pub tail_bound: Option<f64>,
}

pub fn kac_integral(nu: &InducedMeasure) -> Result<KacIntegral> {
    let q = nu.moment(Moment::Tau)?;
    let tail_bound = match nu {
        InducedMeasure::Bernoulli { scheme, log_mass } => {
            sums::over_levels_from(scheme, log_mass, Moment::Tau, 33)?.finite()
        }
        InducedMeasure::PowerLaw { .. } => None,
        _ => Some(0.0),
    };
    Ok(KacIntegral { q, tail_bound })
}

/// The lift `mu` of `nu` to the tower: `mu(J_a x {k}) = nu(J_a) / Q_nu`.
#[derive(Debug, Clone)]
pub struct TowerMeasure {
    pub base: InducedMeasure,
    pub kac: f64,
}

pub fn lift_measure(nu: &InducedMeasure) -> Result<TowerMeasure> {
    match kac_integral(nu)?.q {
        SeriesValue::Finite(q) if q > 0.0 => Ok(TowerMeasure {
            base: nu.clone(),
            kac: q,
        }),
        SeriesValue::Finite(_) => invalid("measure has no mass"),
        SeriesValue::Divergent => Err(Error::NotLiftable("Kac integral diverges".into())),
        SeriesValue::Undetermined => Err(Error::Undetermined(
            "Kac integral has no closed form".into(),
        )),
    }
}

impl TowerMeasure {
    /// Mass of the slab over `J_a` at height `k`.
    pub fn slab(&self, a: BlockId, k: u32) -> Result<f64> {
        if k >= a.tau() {
            return Ok(0.0);
        }
        Ok(self.base.block_mass(a)? / self.kac)
    }

    /// Mass of the whole tower level `k`: `nu(tau > k) / Q`.
    pub fn level_mass(&self, k: u32) -> Result<f64> {
        self.base
            .tail(k + 1)?
            .finite()
            .map(|v| v / self.kac)
            .ok_or_else(|| {
                Error::Undetermined(format!("tail at level {} has no closed form", k + 1))
            })
    }

    /// `mu(height <= n_max)`.
    pub fn mass_up_to_height(&self, n_max: u32) -> Result<f64> {
        (0..=n_max).map(|k| self.level_mass(k)).sum()
    }

    /// Sum of all level masses: levels `0..=k_max` explicitly plus the
    /// certified remainder `sum_{tau(a) > k_max + 1} (tau(a) - k_max - 1) nu(J_a)`.
    pub fn total_mass(&self, k_max: u32) -> Result<f64> {
        let head = self.mass_up_to_height(k_max)?;
        let from = k_max + 2;
        let rest = match &self.base {
            InducedMeasure::Bernoulli { scheme, log_mass } => {
                let t = sums::over_levels_from(scheme, log_mass, Moment::Tau, from)?;
                let o = sums::over_levels_from(scheme, log_mass, Moment::One, from)?;
                match (t, o) {
                    (SeriesValue::Finite(t), SeriesValue::Finite(o)) => t - (k_max + 1) as f64 * o,
                    _ => {
                        return Err(Error::Undetermined(
                            "tower remainder has no closed form".into(),
                        ))
                    }
                }
            }
            InducedMeasure::PowerLaw { .. } => {
                return Err(Error::Undetermined("no closed-form remainder".into()))
            }
            other => other
                .finite_support()?
                .iter()
                .filter(|w| w.0.tau() >= from)
                .map(|w| (w.0.tau() - k_max - 1) as f64 * w.1)
                .sum(),
        };
        Ok(head + rest / self.kac)
    }

    /// `int h d mu` over the blocks of levels `1..=max_level` (at most
    /// `per_level` each).
    pub fn integrate(
        &self,
        h: &dyn Fn(BlockId, u32) -> f64,
        max_level: u32,
        per_level: usize,
    ) -> Result<f64> {
        let blocks: Vec<BlockId> = match &self.base {
            InducedMeasure::Bernoulli { scheme, .. } => scheme.enumerate(max_level, per_level)?,
            InducedMeasure::PowerLaw { .. } => {
                (1..=max_level).map(|a| BlockId::new(a, 1)).collect()
            }
            other => other.finite_support()?.iter().map(|w| w.0).collect(),
        };
        let mut s = 0.0;
        for a in blocks {
            let m = self.base.block_mass(a)? / self.kac;
            s += m * (0..a.tau()).map(|k| h(a, k)).sum::<f64>();
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::LN_2;

    fn renewal_gibbs() -> InducedMeasure {
        let sys = catalog::renewal(0.3).unwrap();
        let pot = sys.potential("phi").unwrap().plus_tau(-(LN_2 - 0.3));
        InducedMeasure::bernoulli(sys.scheme.clone(), &pot).unwrap()
    }

    #[test]
    fn renewal_kac_and_slabs() {
        let nu = renewal_gibbs();
        assert_abs_diff_eq!(
            kac_integral(&nu).unwrap().q.finite().unwrap(),
            2.0,
            epsilon = 1e-12
        );
        let mu = lift_measure(&nu).unwrap();
        assert_abs_diff_eq!(
            mu.slab(BlockId::new(1, 1), 0).unwrap(),
            0.25,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(mu.total_mass(10).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(mu.mass_up_to_height(1).unwrap(), 0.75, epsilon = 1e-12);
    }

    #[test]
    fn weighted_kac_is_two() {
        let sys = catalog::weighted_infinite(0.3).unwrap();
        let pot = sys.potential("phi").unwrap().plus_tau(-(LN_2 - 0.3));
        let nu = InducedMeasure::bernoulli(sys.scheme.clone(), &pot).unwrap();
        assert_abs_diff_eq!(
            kac_integral(&nu).unwrap().q.finite().unwrap(),
            2.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            nu.block_mass(BlockId::new(2, 3)).unwrap(),
            0.25 * 0.125,
            epsilon = 1e-14
        );
    }

    #[test]
    fn single_column_is_uniform() {
        let nu = InducedMeasure::explicit(vec![(BlockId::new(5, 1), 1.0)]).unwrap();
        let mu = lift_measure(&nu).unwrap();
        for k in 0..5 {
            assert_abs_diff_eq!(
                mu.slab(BlockId::new(5, 1), k).unwrap(),
                0.2,
                epsilon = 1e-15
            );
            assert_abs_diff_eq!(mu.level_mass(k).unwrap(), 0.2, epsilon = 1e-15);
        }
        assert_eq!(mu.level_mass(5).unwrap(), 0.0);
    }

    #[test]
    fn unit_times_lift_is_identity() {
        let nu =
            InducedMeasure::explicit(vec![(BlockId::new(1, 1), 0.3), (BlockId::new(1, 2), 0.7)])
                .unwrap();
        let mu = lift_measure(&nu).unwrap();
        assert_eq!(mu.kac, 1.0);
        assert_abs_diff_eq!(
            mu.slab(BlockId::new(1, 2), 0).unwrap(),
            0.7,
            epsilon = 1e-15
        );
    }

    #[test]
    fn heavy_tail_is_not_liftable() {
        let nu = InducedMeasure::power_law(2.0).unwrap();
        assert!(matches!(lift_measure(&nu), Err(Error::NotLiftable(_))));
        assert_abs_diff_eq!(
            zeta(2.0),
            std::f64::consts::PI.powi(2) / 6.0,
            epsilon = 1e-12
        );
        let q = kac_integral(&InducedMeasure::power_law(3.0).unwrap())
            .unwrap()
            .q
            .finite()
            .unwrap();
        assert_abs_diff_eq!(q, zeta(2.0) / zeta(3.0), epsilon = 1e-12);
    }

    #[test]
    fn renewal_entropy_matches_closed_form() {
        // nu(J_a) = 2^-a: h = sum a 2^-a log 2 = 2 log 2
        assert_abs_diff_eq!(
            renewal_gibbs().entropy().unwrap().finite().unwrap(),
            2.0 * LN_2,
            epsilon = 1e-12
        );
    }
}
