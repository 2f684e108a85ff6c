//! Induced potentials, Hölder certificates and the summability conditions
//! P1-P5.
//!
//! An [`InducedPotential`] is a linear combination of named block weights
//! (depth 1, read from the scheme), cylinder tables of finite depth (finite
//! alphabets only), a multiple of the inducing time and a constant. Linear
//! combinations stay linear, so `induce(phi + t psi) = induce(phi) + t induce(psi)`
//! holds by construction.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::scheme::{Affine, BlockId, InducingScheme, Piece, TailShape};
use crate::series::SeriesValue;
use crate::sums::{self, Moment};

/// Values of a potential on words of a fixed length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CylinderTable {
    pub name: String,
    pub depth: usize,
    pub values: BTreeMap<Vec<BlockId>, f64>,
}

impl CylinderTable {
    pub fn new(name: &str, depth: usize) -> Self {
        CylinderTable {
            name: name.to_owned(),
            depth,
            values: BTreeMap::new(),
        }
    }

    pub fn with(mut self, word: &[BlockId], value: f64) -> Self {
        self.values.insert(word.to_vec(), value);
        self
    }

    pub fn get(&self, word: &[BlockId]) -> Result<f64> {
        if word.len() < self.depth {
            return invalid(format!(
                "table `{}` needs words of length {}",
                self.name, self.depth
            ));
        }
        self.values
            .get(&word[..self.depth])
            .copied()
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "table `{}` has no value for {:?}",
                    self.name,
                    &word[..self.depth]
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Term {
    Weight {
        name: String,
        coef: f64,
    },
    Cylinder {
        table: Arc<CylinderTable>,
        coef: f64,
    },
}

/// A potential on the induced shift.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct InducedPotential {
    terms: Vec<Term>,
    tau_coef: f64,
    constant: f64,
}

impl fmt::Display for InducedPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| match t {
                Term::Weight { name, coef } => format!("{coef}*{name}"),
                Term::Cylinder { table, coef } => format!("{coef}*{}[{}]", table.name, table.depth),
            })
            .collect();
        if self.tau_coef != 0.0 {
            parts.push(format!("{}*tau", self.tau_coef));
        }
        if self.constant != 0.0 {
            parts.push(format!("{}", self.constant));
        }
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

impl InducedPotential {
    pub fn zero() -> Self {
        Self::default()
    }

    /// A registered block weight of the scheme.
    pub fn weight(name: &str) -> Self {
        InducedPotential {
            terms: vec![Term::Weight {
                name: name.to_owned(),
                coef: 1.0,
            }],
            ..Self::default()
        }
    }

    pub fn cylinder(table: CylinderTable) -> Self {
        InducedPotential {
            terms: vec![Term::Cylinder {
                table: Arc::new(table),
                coef: 1.0,
            }],
            ..Self::default()
        }
    }

    /// `c * tau`.
    pub fn tau(c: f64) -> Self {
        InducedPotential {
            tau_coef: c,
            ..Self::default()
        }
    }

    pub fn constant(c: f64) -> Self {
        InducedPotential {
            constant: c,
            ..Self::default()
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        InducedPotential {
            terms: self
                .terms
                .iter()
                .map(|t| match t {
                    Term::Weight { name, coef } => Term::Weight {
                        name: name.clone(),
                        coef: coef * c,
                    },
                    Term::Cylinder { table, coef } => Term::Cylinder {
                        table: table.clone(),
                        coef: coef * c,
                    },
                })
                .collect(),
            tau_coef: self.tau_coef * c,
            constant: self.constant * c,
        }
    }

    pub fn add(&self, other: &InducedPotential) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        InducedPotential {
            terms,
            tau_coef: self.tau_coef + other.tau_coef,
            constant: self.constant + other.constant,
        }
    }

    /// `self + c * other`.
    pub fn add_scaled(&self, other: &InducedPotential, c: f64) -> Self {
        self.add(&other.scale(c))
    }

    pub fn plus_tau(&self, c: f64) -> Self {
        InducedPotential {
            tau_coef: self.tau_coef + c,
            ..self.clone()
        }
    }

    pub fn plus_constant(&self, c: f64) -> Self {
        InducedPotential {
            constant: self.constant + c,
            ..self.clone()
        }
    }

    pub fn tau_coef(&self) -> f64 {
        self.tau_coef
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Cylinder memory length (1 for block-constant potentials).
    pub fn depth(&self) -> usize {
        self.terms
            .iter()
            .map(|t| match t {
                Term::Weight { .. } => 1,
                Term::Cylinder { table, .. } => table.depth,
            })
            .max()
            .unwrap_or(1)
    }

    pub fn is_block_constant(&self) -> bool {
        self.depth() == 1
    }

    /// Value on a word of length at least `depth()`.
    pub fn eval_word(&self, scheme: &InducingScheme, word: &[BlockId]) -> Result<f64> {
        let Some(&first) = word.first() else {
            return invalid("empty word");
        };
        let mut v = self.constant + self.tau_coef * first.tau() as f64;
        for t in &self.terms {
            v += match t {
                Term::Weight { name, coef } => coef * scheme.log_weight(first, name)?,
                Term::Cylinder { table, coef } => coef * table.get(word)?,
            };
        }
        Ok(v)
    }

    /// Admissible words of length `depth()` starting with `a`.
    pub(crate) fn continuations(
        &self,
        scheme: &InducingScheme,
        a: BlockId,
    ) -> Result<Vec<Vec<BlockId>>> {
        words_from(scheme, a, self.depth())
    }

    /// `(inf, sup)` of the potential over the block `J_a`.
    pub fn block_range(&self, scheme: &InducingScheme, a: BlockId) -> Result<(f64, f64)> {
        if self.is_block_constant() {
            let v = self.eval_word(scheme, &[a])?;
            return Ok((v, v));
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for w in self.continuations(scheme, a)? {
            let v = self.eval_word(scheme, &w)?;
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if lo > hi {
            return invalid(format!("block {a} has no admissible continuation"));
        }
        Ok((lo, hi))
    }

    pub fn block_sup(&self, scheme: &InducingScheme, a: BlockId) -> Result<f64> {
        Ok(self.block_range(scheme, a)?.1)
    }

    /// Block sup on a closed-form piece: a scalar for listed blocks, an
    /// affine form in `(n, j)` for countable families.
    pub(crate) fn on_piece(&self, scheme: &InducingScheme, piece: &Piece<'_>) -> Result<PieceForm> {
        match piece {
            Piece::Block(b) => Ok(PieceForm::Scalar(self.block_sup(scheme, b.id)?)),
            Piece::Generated { level } => Err(Error::Undetermined(format!(
                "level {level} has no closed form"
            ))),
            Piece::Geometric { level, weights } => {
                let mut a = Affine::new(self.constant + self.tau_coef * *level as f64, 0.0, 0.0);
                for t in &self.terms {
                    match t {
                        Term::Weight { name, coef } => {
                            let w = weights.get(name).ok_or_else(|| Error::MissingWeight {
                                name: name.clone(),
                                block: BlockId::new(*level, 1),
                            })?;
                            a = a.plus(w.at_level(*level).scale(*coef));
                        }
                        Term::Cylinder { .. } => {
                            return invalid("cylinder tables need a finite alphabet")
                        }
                    }
                }
                Ok(PieceForm::Affine(a))
            }
            Piece::Tail { from, law } => {
                let mut a = Affine::new(self.constant, self.tau_coef, 0.0);
                for t in &self.terms {
                    match t {
                        Term::Weight { name, coef } => {
                            let w = law.weights.get(name).ok_or_else(|| Error::MissingWeight {
                                name: name.clone(),
                                block: BlockId::new(*from, 1),
                            })?;
                            a = a.plus(w.scale(*coef));
                        }
                        Term::Cylinder { .. } => {
                            return invalid("cylinder tables need a finite alphabet")
                        }
                    }
                }
                if law.shape == TailShape::Single {
                    // one block, index 1
                    a = Affine::new(a.constant + a.per_index, a.per_level, 0.0);
                }
                Ok(PieceForm::Affine(a))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum PieceForm {
    Scalar(f64),
    Affine(Affine),
}

/// All admissible words of length `len` starting with `a`.
pub(crate) fn words_from(
    scheme: &InducingScheme,
    a: BlockId,
    len: usize,
) -> Result<Vec<Vec<BlockId>>> {
    if len <= 1 {
        return Ok(vec![vec![a]]);
    }
    let alphabet = scheme.finite_alphabet().ok_or_else(|| {
        Error::InvalidArgument("cylinder potentials need a finite alphabet".into())
    })?;
    let mut words = vec![vec![a]];
    for _ in 1..len {
        let mut next = Vec::new();
        for w in &words {
            let last = *w.last().unwrap();
            for &b in &alphabet {
                if scheme.markov().is_none_or(|m| m.permits(last, b)) {
                    let mut w2 = w.clone();
                    w2.push(b);
                    next.push(w2);
                }
            }
        }
        words = next;
    }
    Ok(words)
}

/// All admissible words of length `len`.
pub(crate) fn all_words(scheme: &InducingScheme, len: usize) -> Result<Vec<Vec<BlockId>>> {
    let alphabet = scheme
        .finite_alphabet()
        .ok_or_else(|| Error::InvalidArgument("word enumeration needs a finite alphabet".into()))?;
    let mut out = Vec::new();
    for a in alphabet {
        out.extend(words_from(scheme, a, len)?);
    }
    Ok(out)
}

/// Base potential given level by level on the tower: `phi(f^k x)` for
/// `x in J_a`, `0 <= k < tau(a)`.
pub trait TowerTable {
    fn value(&self, block: BlockId, height: u32) -> Option<f64>;
}

impl<F: Fn(BlockId, u32) -> Option<f64>> TowerTable for F {
    fn value(&self, block: BlockId, height: u32) -> Option<f64> {
        self(block, height)
    }
}

/// Birkhoff sum of a tower table over the return time of each enumerated
/// block: `phi_bar(J_a) = sum_{k < tau(a)} phi(level k)`.
pub fn induce(table: &dyn TowerTable, blocks: &[BlockId]) -> Result<BTreeMap<BlockId, f64>> {
    blocks
        .iter()
        .map(|&b| {
            let mut s = 0.0;
            for k in 0..b.tau() {
                s += table.value(b, k).ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "missing base value for block {b} at height {k}"
                    ))
                })?;
            }
            Ok((b, s))
        })
        .collect()
}

/// `V_n <= H r^n` for all `n >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HolderCertificate {
    pub h: f64,
    pub r: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HolderReport {
    pub variations: Vec<f64>,
    pub certificate: Option<HolderCertificate>,
    pub status: crate::report::Status,
}

/// Variations `V_1..=V_{depth_max}`: the largest spread of the potential
/// over a cylinder fixing the first `n` symbols.
pub fn variations(
    pot: &InducedPotential,
    scheme: &InducingScheme,
    depth_max: usize,
) -> Result<Vec<f64>> {
    let d = pot.depth();
    if d == 1 {
        return Ok(vec![0.0; depth_max]);
    }
    let words = all_words(scheme, d)?;
    let values: Vec<f64> = words
        .iter()
        .map(|w| pot.eval_word(scheme, w))
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(depth_max);
    for n in 1..=depth_max {
        if n >= d {
            out.push(0.0);
            continue;
        }
        let mut groups: BTreeMap<&[BlockId], (f64, f64)> = BTreeMap::new();
        for (w, v) in words.iter().zip(&values) {
            let e = groups
                .entry(&w[..n])
                .or_insert((f64::INFINITY, f64::NEG_INFINITY));
            e.0 = e.0.min(*v);
            e.1 = e.1.max(*v);
        }
        out.push(groups.values().map(|(lo, hi)| hi - lo).fold(0.0, f64::max));
    }
    Ok(out)
}

/// Fit `V_n <= H r^n` by least squares on `log V_n` followed by a
/// dominating pass on `H`.
pub fn fit_holder(variations: &[f64]) -> HolderReport {
    use crate::report::Status;
    let pts: Vec<(f64, f64)> = variations
        .iter()
        .enumerate()
        .filter(|(_, v)| **v > 0.0)
        .map(|(i, v)| ((i + 1) as f64, v.ln()))
        .collect();
    let dominate = |r: f64| {
        variations
            .iter()
            .enumerate()
            .map(|(i, v)| v / r.powi(i as i32 + 1))
            .fold(0.0, f64::max)
    };
    let report = |cert, status| HolderReport {
        variations: variations.to_vec(),
        certificate: cert,
        status,
    };
    if pts.len() < 2 {
        let r = 0.5;
        return report(
            Some(HolderCertificate { h: dominate(r), r }),
            Status::Certified,
        );
    }
    let nondecreasing = variations.windows(2).all(|w| w[1] >= w[0]);
    let (slope, _) = crate::stats::least_squares(&pts);
    let r = slope.exp();
    if nondecreasing || !(r < 1.0) {
        return report(None, Status::Undetermined);
    }
    report(
        Some(HolderCertificate { h: dominate(r), r }),
        Status::RegressionOnly,
    )
}

pub fn estimate_holder(
    pot: &InducedPotential,
    scheme: &InducingScheme,
    depth_max: usize,
) -> Result<HolderReport> {
    if depth_max == 0 {
        return invalid("depth_max must be positive");
    }
    Ok(fit_holder(&variations(pot, scheme, depth_max)?))
}

/// `phi_plus = phi_bar - q tau`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedPotential {
    pub base: InducedPotential,
    pub q: f64,
}

impl NormalizedPotential {
    pub fn potential(&self) -> InducedPotential {
        self.base.plus_tau(-self.q)
    }

    pub fn eval_word(&self, scheme: &InducingScheme, word: &[BlockId]) -> Result<f64> {
        self.potential().eval_word(scheme, word)
    }
}

pub fn normalize(pot: &InducedPotential, q: f64) -> NormalizedPotential {
    NormalizedPotential {
        base: pot.clone(),
        q,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    P1,
    P2,
    P3,
    P4,
    P5,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Undetermined,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Witness {
    pub sum: Option<f64>,
    pub tail_bound: Option<f64>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ConditionParameters {
    pub epsilon: Option<f64>,
    pub c: Option<f64>,
    pub theta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub condition: Condition,
    pub status: CheckStatus,
    pub witness: Witness,
    pub parameters: ConditionParameters,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

/// Levels above this are reported as the certified closed-form tail.
const WITNESS_SPLIT: u32 = 32;

fn split_sum(
    pot: &InducedPotential,
    scheme: &InducingScheme,
    moment: Moment<'_>,
) -> Result<(SeriesValue, Option<f64>)> {
    let total = sums::total(scheme, pot, moment)?;
    let tail = sums::over_levels_from(scheme, pot, moment, WITNESS_SPLIT + 1)?;
    Ok((total, tail.finite()))
}

/// P3: `sum_a sup exp phi_bar < inf`.
pub fn check_p3(pot: &InducedPotential, scheme: &InducingScheme) -> Result<ConditionReport> {
    let (total, tail) = split_sum(pot, scheme, Moment::One)?;
    let (status, note) = match total {
        SeriesValue::Finite(_) => (CheckStatus::Pass, None),
        SeriesValue::Divergent => (
            CheckStatus::Fail,
            Some("series diverges (closed-form certificate)".into()),
        ),
        SeriesValue::Undetermined => (
            CheckStatus::Undetermined,
            Some("no closed form for some level".into()),
        ),
    };
    Ok(ConditionReport {
        condition: Condition::P3,
        status,
        witness: Witness {
            sum: total.finite(),
            tail_bound: tail,
            note,
        },
        parameters: ConditionParameters::default(),
    })
}

/// Default search grid `0.2 * 2^-i`.
pub fn default_eps_grid() -> Vec<f64> {
    (0..24).map(|i| 0.2 * 0.5f64.powi(i)).collect()
}

/// P4: some `eps > 0` with `sum_a tau(a) sup exp(phi_plus + eps tau) < inf`.
/// Reports the largest passing `eps` of the grid.
pub fn check_p4(
    norm: &NormalizedPotential,
    scheme: &InducingScheme,
    eps_grid: &[f64],
) -> Result<ConditionReport> {
    let mut grid: Vec<f64> = eps_grid.iter().copied().filter(|e| *e > 0.0).collect();
    if grid.is_empty() {
        return invalid("eps grid needs a positive entry");
    }
    grid.sort_by(|a, b| b.total_cmp(a));
    let mut saw_undetermined = false;
    for eps in grid {
        let pot = norm.potential().plus_tau(eps);
        let (total, tail) = split_sum(&pot, scheme, Moment::Tau)?;
        match total {
            SeriesValue::Finite(s) => {
                return Ok(ConditionReport {
                    condition: Condition::P4,
                    status: CheckStatus::Pass,
                    witness: Witness {
                        sum: Some(s),
                        tail_bound: tail,
                        note: None,
                    },
                    parameters: ConditionParameters {
                        epsilon: Some(eps),
                        ..Default::default()
                    },
                })
            }
            SeriesValue::Undetermined => saw_undetermined = true,
            SeriesValue::Divergent => {}
        }
    }
    Ok(ConditionReport {
        condition: Condition::P4,
        status: if saw_undetermined {
            CheckStatus::Undetermined
        } else {
            CheckStatus::Fail
        },
        witness: Witness {
            note: Some("no grid epsilon gives a finite sum".into()),
            ..Default::default()
        },
        parameters: ConditionParameters::default(),
    })
}

/// Tail profile `nu(tau >= n)` with an optional closed-form rate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailProfile {
    /// `(n, nu(tau >= n))` for `n = 1, 2, ...`.
    pub points: Vec<(u32, f64)>,
    pub certificate: Option<TailCertificate>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum TailCertificate {
    /// Tail vanishes beyond `last_level`.
    FiniteSupport { last_level: u32 },
    /// `nu(tau >= n)` is exactly `c * theta^n` from `from_level` on.
    Geometric { from_level: u32, theta: f64 },
}

/// P5: `nu(tau >= n) <= C theta^n` with `theta < 1`.
pub fn check_p5(profile: &TailProfile, window: std::ops::RangeInclusive<u32>) -> ConditionReport {
    let pts: Vec<(u32, f64)> = profile
        .points
        .iter()
        .copied()
        .filter(|(n, _)| window.contains(n))
        .collect();
    let dominate = |theta: f64| {
        profile
            .points
            .iter()
            .map(|(n, m)| m / theta.powi(*n as i32))
            .fold(0.0, f64::max)
    };
    let base = |status, c, theta, note: Option<String>| ConditionReport {
        condition: Condition::P5,
        status,
        witness: Witness {
            sum: None,
            tail_bound: None,
            note,
        },
        parameters: ConditionParameters {
            epsilon: None,
            c,
            theta,
        },
    };
    match profile.certificate {
        Some(TailCertificate::FiniteSupport { last_level }) => {
            let theta = 0.5;
            base(
                CheckStatus::Pass,
                Some(dominate(theta)),
                Some(theta),
                Some(format!("tail vanishes beyond level {last_level}")),
            )
        }
        Some(TailCertificate::Geometric { from_level, theta }) => {
            if theta < 1.0 && profile.points.iter().any(|(n, _)| *n >= from_level) {
                base(CheckStatus::Pass, Some(dominate(theta)), Some(theta), None)
            } else {
                base(
                    CheckStatus::Fail,
                    None,
                    Some(theta),
                    Some("certified rate is not below 1".into()),
                )
            }
        }
        None => {
            let logs: Vec<(f64, f64)> = pts
                .iter()
                .filter(|(_, m)| *m > 0.0)
                .map(|(n, m)| (*n as f64, m.ln()))
                .collect();
            if logs.len() < 6 {
                return base(
                    CheckStatus::Undetermined,
                    None,
                    None,
                    Some("too few tail points".into()),
                );
            }
            let third = logs.len() / 3;
            let (early, _) = crate::stats::least_squares(&logs[..third]);
            let (late, _) = crate::stats::least_squares(&logs[logs.len() - third..]);
            let (slope, _) = crate::stats::least_squares(&logs);
            let theta = slope.exp();
            if early < 0.0 && late > 0.5 * early {
                base(
                    CheckStatus::Fail,
                    None,
                    Some(theta),
                    Some(format!(
                        "local decay rate collapses from {:.4} to {:.4}",
                        -early, -late
                    )),
                )
            } else {
                base(
                    CheckStatus::Undetermined,
                    Some(dominate(theta)),
                    Some(theta),
                    Some("fitted only, no closed-form tail".into()),
                )
            }
        }
    }
}
