//! Inducing schemes on the symbolic model.
//!
//! A scheme is a countable alphabet of blocks `a` with inducing times
//! `tau(a)`; the blocks of inducing time `n` form the level `S_n`. The
//! induced system is the full shift on the alphabet, optionally restricted
//! by a finite Markov constraint.
//!
//! Levels come in three flavours: finite listed blocks, countable geometric
//! families whose log weights are affine in the within-level index, and
//! countable generated families with no closed form. Beyond the explicit
//! levels a scheme may carry a [`TailLaw`] whose log weights are affine in
//! the level index as well; every sum over such a scheme has an exact
//! closed form.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::series::exp_power_sum;

/// Symbol of the induced shift: the level (equal to the inducing time) and
/// a 1-based index inside the level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlockId {
    pub level: u32,
    pub index: u64,
}

impl BlockId {
    pub const fn new(level: u32, index: u64) -> Self {
        BlockId { level, index }
    }

    /// Inducing time; blocks are filed by it.
    pub const fn tau(self) -> u32 {
        self.level
    }
}

impl fmt::Display for BlockId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.level, self.index)
    }
}

/// A block together with the log-sup of every registered weight on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub id: BlockId,
    pub log_weights: BTreeMap<String, f64>,
}

impl Block {
    pub fn new(id: BlockId) -> Self {
        Block {
            id,
            log_weights: BTreeMap::new(),
        }
    }

    pub fn with_weight(mut self, name: &str, value: f64) -> Self {
        self.log_weights.insert(name.to_owned(), value);
        self
    }

    pub fn tau(&self) -> u32 {
        self.id.tau()
    }
}

/// `constant + per_level * n + per_index * j`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Affine {
    #[serde(default)]
    pub constant: f64,
    #[serde(default)]
    pub per_level: f64,
    #[serde(default)]
    pub per_index: f64,
}

impl Affine {
    pub const fn new(constant: f64, per_level: f64, per_index: f64) -> Self {
        Affine {
            constant,
            per_level,
            per_index,
        }
    }

    pub fn at(&self, level: u32, index: u64) -> f64 {
        self.constant + self.per_level * level as f64 + self.per_index * index as f64
    }

    pub fn scale(self, c: f64) -> Affine {
        Affine::new(self.constant * c, self.per_level * c, self.per_index * c)
    }

    pub fn plus(self, o: Affine) -> Affine {
        Affine::new(
            self.constant + o.constant,
            self.per_level + o.per_level,
            self.per_index + o.per_index,
        )
    }

    /// Freeze the level coordinate.
    pub fn at_level(self, level: u32) -> Affine {
        Affine::new(
            self.constant + self.per_level * level as f64,
            0.0,
            self.per_index,
        )
    }
}

pub type BlockGenerator = Arc<dyn Fn(u64) -> BTreeMap<String, f64> + Send + Sync>;

#[derive(Clone)]
pub enum LevelBlocks {
    /// Finitely many blocks, explicitly listed.
    Listed(Vec<Block>),
    /// Countably many blocks `j = 1, 2, ...` with affine log weights.
    Geometric(BTreeMap<String, Affine>),
    /// Countably many blocks produced on demand, no closed form.
    Generated(BlockGenerator),
}

impl fmt::Debug for LevelBlocks {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevelBlocks::Listed(b) => f.debug_tuple("Listed").field(b).finish(),
            LevelBlocks::Geometric(w) => f.debug_tuple("Geometric").field(w).finish(),
            LevelBlocks::Generated(_) => f.write_str("Generated(..)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Cardinality {
    Empty,
    Finite(usize),
    CountablyInfinite,
}

/// The level `S_n`.
#[derive(Debug, Clone)]
pub struct LevelFamily {
    pub level: u32,
    pub blocks: LevelBlocks,
}

impl LevelFamily {
    pub fn cardinality(&self) -> Cardinality {
        match &self.blocks {
            LevelBlocks::Listed(b) if b.is_empty() => Cardinality::Empty,
            LevelBlocks::Listed(b) => Cardinality::Finite(b.len()),
            _ => Cardinality::CountablyInfinite,
        }
    }

    pub fn has_closed_form(&self) -> bool {
        !matches!(self.blocks, LevelBlocks::Generated(_))
    }

    fn block(&self, index: u64) -> Option<Block> {
        let id = BlockId::new(self.level, index);
        match &self.blocks {
            LevelBlocks::Listed(b) => b.iter().find(|b| b.id.index == index).cloned(),
            LevelBlocks::Geometric(w) => (index >= 1).then(|| Block {
                id,
                log_weights: w
                    .iter()
                    .map(|(k, a)| (k.clone(), a.at(self.level, index)))
                    .collect(),
            }),
            LevelBlocks::Generated(g) => (index >= 1).then(|| Block {
                id,
                log_weights: g(index),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TailShape {
    /// One block per level.
    Single,
    /// Countably many blocks per level, geometric in the index.
    Geometric,
}

/// Law of every level `n >= from_level`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailLaw {
    pub from_level: u32,
    pub shape: TailShape,
    pub weights: BTreeMap<String, Affine>,
}

/// Allowed transitions of a finite-alphabet induced shift.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MarkovConstraint {
    pub allowed: BTreeSet<(BlockId, BlockId)>,
}

impl MarkovConstraint {
    pub fn permits(&self, a: BlockId, b: BlockId) -> bool {
        self.allowed.contains(&(a, b))
    }
}

/// Half-open interval `[lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn contains_interval(&self, o: &Interval) -> bool {
        self.lo <= o.lo && o.hi <= self.hi
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

/// Ambient interval bookkeeping for schemes realized by an interval map:
/// the image `f^i(J_a)` of every block before its return.
pub trait AmbientImages: Send + Sync + fmt::Debug {
    fn domain(&self) -> Interval;
    fn base(&self) -> Interval;
    fn image(&self, block: BlockId, iterate: u32) -> Interval;
}

#[derive(Debug, Clone)]
pub struct InducingScheme {
    name: String,
    levels: BTreeMap<u32, LevelFamily>,
    tail: Option<TailLaw>,
    markov: Option<MarkovConstraint>,
    max_enumeration_level: u32,
    ambient: Option<Arc<dyn AmbientImages>>,
}

/// Result of [`InducingScheme::blocks_at_level`].
#[derive(Debug, Clone)]
pub struct LevelEnumeration {
    pub blocks: Vec<Block>,
    pub cardinality: Cardinality,
    /// Mass of the unenumerated blocks under each registered weight, `None`
    /// when no closed form certifies it.
    pub tail_bound: BTreeMap<String, Option<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Aperiodicity {
    pub gcd: u32,
    pub aperiodic: bool,
}

/// A contiguous chunk of the alphabet on which a block-constant potential is
/// a single affine expression.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Piece<'a> {
    Block(&'a Block),
    Geometric {
        level: u32,
        weights: &'a BTreeMap<String, Affine>,
    },
    Generated {
        level: u32,
    },
    Tail {
        from: u32,
        law: &'a TailLaw,
    },
}

impl InducingScheme {
    pub fn builder(name: &str) -> SchemeBuilder {
        SchemeBuilder {
            name: name.to_owned(),
            levels: BTreeMap::new(),
            tail: None,
            markov: None,
            max_enumeration_level: 64,
            ambient: None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn tail(&self) -> Option<&TailLaw> {
        self.tail.as_ref()
    }

    pub fn markov(&self) -> Option<&MarkovConstraint> {
        self.markov.as_ref()
    }

    pub fn ambient(&self) -> Option<&Arc<dyn AmbientImages>> {
        self.ambient.as_ref()
    }

    pub fn max_enumeration_level(&self) -> u32 {
        self.max_enumeration_level
    }

    pub fn explicit_levels(&self) -> impl Iterator<Item = &LevelFamily> {
        self.levels.values()
    }

    /// Highest level that is not covered by the tail law.
    pub fn last_explicit_level(&self) -> u32 {
        self.levels.keys().next_back().copied().unwrap_or(0)
    }

    /// The level family `S_n` (materialized from the tail law if needed).
    pub fn level(&self, n: u32) -> Result<LevelFamily> {
        if n == 0 {
            return invalid("level index must be >= 1");
        }
        if let Some(l) = self.levels.get(&n) {
            return Ok(l.clone());
        }
        if let Some(t) = self.tail.as_ref().filter(|t| n >= t.from_level) {
            let blocks = match t.shape {
                TailShape::Single => LevelBlocks::Listed(vec![Block {
                    id: BlockId::new(n, 1),
                    log_weights: t
                        .weights
                        .iter()
                        .map(|(k, a)| (k.clone(), a.at(n, 1)))
                        .collect(),
                }]),
                TailShape::Geometric => LevelBlocks::Geometric(
                    t.weights
                        .iter()
                        .map(|(k, a)| (k.clone(), a.at_level(n)))
                        .collect(),
                ),
            };
            return Ok(LevelFamily { level: n, blocks });
        }
        Ok(LevelFamily {
            level: n,
            blocks: LevelBlocks::Listed(Vec::new()),
        })
    }

    pub fn cardinality(&self, n: u32) -> Result<Cardinality> {
        Ok(self.level(n)?.cardinality())
    }

    /// Blocks of `S_n` up to `budget`, with certified tails where a closed
    /// form exists.
    pub fn blocks_at_level(&self, n: u32, budget: usize) -> Result<LevelEnumeration> {
        let fam = self.level(n)?;
        let cardinality = fam.cardinality();
        let names = self.weight_names();
        let (blocks, tail_bound) = match &fam.blocks {
            LevelBlocks::Listed(all) => {
                let kept: Vec<Block> = all.iter().take(budget).cloned().collect();
                let rest = &all[kept.len()..];
                let tail = names
                    .iter()
                    .map(|w| {
                        let s = rest
                            .iter()
                            .filter_map(|b| b.log_weights.get(w))
                            .map(|v| v.exp())
                            .sum();
                        (w.clone(), Some(s))
                    })
                    .collect();
                (kept, tail)
            }
            LevelBlocks::Geometric(ws) => {
                let kept = (1..=budget as u64).filter_map(|j| fam.block(j)).collect();
                let tail = names
                    .iter()
                    .map(|w| {
                        let t = ws.get(w).and_then(|a| {
                            let a = a.at_level(n);
                            exp_power_sum(a.per_index, 0, budget as u64 + 1)
                                .map(|s| a.constant.exp() * s)
                        });
                        (w.clone(), t)
                    })
                    .collect();
                (kept, tail)
            }
            LevelBlocks::Generated(_) => {
                let kept = (1..=budget as u64).filter_map(|j| fam.block(j)).collect();
                (kept, names.iter().map(|w| (w.clone(), None)).collect())
            }
        };
        Ok(LevelEnumeration {
            blocks,
            cardinality,
            tail_bound,
        })
    }

    /// Names of all weights registered anywhere in the scheme.
    pub fn weight_names(&self) -> Vec<String> {
        let mut names = BTreeSet::new();
        for l in self.levels.values() {
            match &l.blocks {
                LevelBlocks::Listed(b) => b
                    .iter()
                    .for_each(|b| names.extend(b.log_weights.keys().cloned())),
                LevelBlocks::Geometric(w) => names.extend(w.keys().cloned()),
                LevelBlocks::Generated(g) => names.extend(g(1).into_keys()),
            }
        }
        if let Some(t) = &self.tail {
            names.extend(t.weights.keys().cloned());
        }
        names.into_iter().collect()
    }

    pub fn block(&self, id: BlockId) -> Result<Block> {
        self.level(id.level)?
            .block(id.index)
            .ok_or_else(|| Error::InvalidArgument(format!("block {id} is not in the scheme")))
    }

    /// Log-sup of weight `name` on block `id`.
    pub fn log_weight(&self, id: BlockId, name: &str) -> Result<f64> {
        let fam = self.level(id.level)?;
        let value = match &fam.blocks {
            LevelBlocks::Listed(b) => b
                .iter()
                .find(|b| b.id == id)
                .and_then(|b| b.log_weights.get(name).copied()),
            LevelBlocks::Geometric(w) => w.get(name).map(|a| a.at(id.level, id.index)),
            LevelBlocks::Generated(g) => g(id.index).get(name).copied(),
        };
        value.ok_or_else(|| Error::MissingWeight {
            name: name.to_owned(),
            block: id,
        })
    }

    pub fn is_finite(&self) -> bool {
        self.tail.is_none()
            && self
                .levels
                .values()
                .all(|l| matches!(l.blocks, LevelBlocks::Listed(_)))
    }

    /// The whole alphabet, when it is finite.
    pub fn finite_alphabet(&self) -> Option<Vec<BlockId>> {
        if !self.is_finite() {
            return None;
        }
        Some(
            self.levels
                .values()
                .flat_map(|l| match &l.blocks {
                    LevelBlocks::Listed(b) => b.iter().map(|b| b.id).collect::<Vec<_>>(),
                    _ => unreachable!(),
                })
                .collect(),
        )
    }

    /// Blocks from levels `1..=max_level`, at most `per_level` per level.
    pub fn enumerate(&self, max_level: u32, per_level: usize) -> Result<Vec<BlockId>> {
        let mut out = Vec::new();
        for n in 1..=max_level {
            out.extend(
                self.blocks_at_level(n, per_level)?
                    .blocks
                    .into_iter()
                    .map(|b| b.id),
            );
        }
        Ok(out)
    }

    /// gcd of the inducing times of the non-empty levels up to the
    /// enumeration cap.
    pub fn aperiodicity(&self) -> Result<Aperiodicity> {
        let mut g = 0u32;
        for n in 1..=self.max_enumeration_level {
            if self.cardinality(n)? != Cardinality::Empty {
                g = gcd(g, n);
            }
        }
        if g == 0 {
            return invalid("scheme has no blocks up to the enumeration cap");
        }
        Ok(Aperiodicity {
            gcd: g,
            aperiodic: g == 1,
        })
    }

    /// The alphabet cut into closed-form pieces, restricted to levels `>= from`.
    pub(crate) fn pieces_from(&self, from: u32) -> Vec<Piece<'_>> {
        let mut out = Vec::new();
        for (n, l) in self.levels.range(from.max(1)..) {
            match &l.blocks {
                LevelBlocks::Listed(b) => out.extend(b.iter().map(Piece::Block)),
                LevelBlocks::Geometric(w) => out.push(Piece::Geometric {
                    level: *n,
                    weights: w,
                }),
                LevelBlocks::Generated(_) => out.push(Piece::Generated { level: *n }),
            }
        }
        if let Some(t) = &self.tail {
            out.push(Piece::Tail {
                from: t.from_level.max(from),
                law: t,
            });
        }
        out
    }

    /// Pieces of a single level.
    pub(crate) fn pieces_at(&self, n: u32) -> Vec<Piece<'_>> {
        match self.levels.get(&n) {
            Some(l) => match &l.blocks {
                LevelBlocks::Listed(b) => b.iter().map(Piece::Block).collect(),
                LevelBlocks::Geometric(w) => vec![Piece::Geometric {
                    level: n,
                    weights: w,
                }],
                LevelBlocks::Generated(_) => vec![Piece::Generated { level: n }],
            },
            None => match &self.tail {
                Some(t) if n >= t.from_level => vec![Piece::Tail { from: n, law: t }],
                _ => Vec::new(),
            },
        }
    }
}

pub(crate) fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub struct SchemeBuilder {
    name: String,
    levels: BTreeMap<u32, LevelFamily>,
    tail: Option<TailLaw>,
    markov: Option<MarkovConstraint>,
    max_enumeration_level: u32,
    ambient: Option<Arc<dyn AmbientImages>>,
}

impl SchemeBuilder {
    /// Finite level from `(index, weights)` pairs.
    pub fn listed_level(mut self, n: u32, blocks: Vec<Block>) -> Self {
        self.levels.insert(
            n,
            LevelFamily {
                level: n,
                blocks: LevelBlocks::Listed(blocks),
            },
        );
        self
    }

    /// Convenience: one block at level `n` with the given weights.
    pub fn single_block(self, n: u32, weights: &[(&str, f64)]) -> Self {
        let mut b = Block::new(BlockId::new(n, 1));
        for (k, v) in weights {
            b = b.with_weight(k, *v);
        }
        self.listed_level(n, vec![b])
    }

    pub fn geometric_level(mut self, n: u32, weights: BTreeMap<String, Affine>) -> Self {
        self.levels.insert(
            n,
            LevelFamily {
                level: n,
                blocks: LevelBlocks::Geometric(weights),
            },
        );
        self
    }

    pub fn generated_level(mut self, n: u32, generator: BlockGenerator) -> Self {
        self.levels.insert(
            n,
            LevelFamily {
                level: n,
                blocks: LevelBlocks::Generated(generator),
            },
        );
        self
    }

    pub fn tail(mut self, law: TailLaw) -> Self {
        self.tail = Some(law);
        self
    }

    pub fn markov(mut self, m: MarkovConstraint) -> Self {
        self.markov = Some(m);
        self
    }

    pub fn max_enumeration_level(mut self, n: u32) -> Self {
        self.max_enumeration_level = n;
        self
    }

    pub fn ambient(mut self, a: Arc<dyn AmbientImages>) -> Self {
        self.ambient = Some(a);
        self
    }

    pub fn build(self) -> Result<InducingScheme> {
        if self.max_enumeration_level == 0 {
            return invalid("max_enumeration_level must be positive");
        }
        for (n, l) in &self.levels {
            if *n == 0 {
                return invalid("level index must be >= 1");
            }
            if let LevelBlocks::Listed(b) = &l.blocks {
                let mut seen = BTreeSet::new();
                for block in b {
                    if block.id.level != *n {
                        return invalid(format!("block {} filed under level {n}", block.id));
                    }
                    if block.id.index == 0 || !seen.insert(block.id.index) {
                        return invalid(format!(
                            "block index {} duplicated or zero at level {n}",
                            block.id.index
                        ));
                    }
                }
            }
        }
        if let Some(t) = &self.tail {
            if t.from_level == 0 || self.levels.keys().any(|n| *n >= t.from_level) {
                return invalid("tail law must start above every explicit level");
            }
        }
        let nonempty = self.tail.is_some()
            || self
                .levels
                .values()
                .any(|l| l.cardinality() != Cardinality::Empty);
        if !nonempty {
            return invalid("scheme has no blocks");
        }
        if let Some(m) = &self.markov {
            if self.tail.is_some()
                || self
                    .levels
                    .values()
                    .any(|l| !matches!(l.blocks, LevelBlocks::Listed(_)))
            {
                return invalid("Markov constraints need a finite alphabet");
            }
            let ids: BTreeSet<BlockId> = self
                .levels
                .values()
                .flat_map(|l| match &l.blocks {
                    LevelBlocks::Listed(b) => b.iter().map(|b| b.id).collect::<Vec<_>>(),
                    _ => Vec::new(),
                })
                .collect();
            if m.allowed
                .iter()
                .any(|(a, b)| !ids.contains(a) || !ids.contains(b))
            {
                return invalid("Markov constraint refers to unknown blocks");
            }
        }
        Ok(InducingScheme {
            name: self.name,
            levels: self.levels,
            tail: self.tail,
            markov: self.markov,
            max_enumeration_level: self.max_enumeration_level,
            ambient: self.ambient,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_four() -> InducingScheme {
        InducingScheme::builder("two-four")
            .single_block(2, &[("phi", -1.0)])
            .single_block(4, &[("phi", -2.0)])
            .build()
            .unwrap()
    }

    #[test]
    fn gcd_of_even_times_is_two() {
        let a = two_four().aperiodicity().unwrap();
        assert_eq!(
            a,
            Aperiodicity {
                gcd: 2,
                aperiodic: false
            }
        );
    }

    #[test]
    fn coprime_times_are_aperiodic() {
        let s = InducingScheme::builder("two-three")
            .single_block(2, &[])
            .single_block(3, &[])
            .build()
            .unwrap();
        assert_eq!(
            s.aperiodicity().unwrap(),
            Aperiodicity {
                gcd: 1,
                aperiodic: true
            }
        );
    }

    #[test]
    fn empty_level_enumerates_nothing() {
        let s = two_four();
        let e = s.blocks_at_level(3, 10).unwrap();
        assert!(e.blocks.is_empty());
        assert_eq!(e.cardinality, Cardinality::Empty);
        assert_eq!(e.tail_bound["phi"], Some(0.0));
    }

    #[test]
    fn level_zero_is_rejected() {
        assert!(matches!(
            two_four().blocks_at_level(0, 1),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn empty_scheme_is_rejected() {
        assert!(InducingScheme::builder("e")
            .listed_level(1, vec![])
            .build()
            .is_err());
    }

    #[test]
    fn duplicate_block_is_rejected() {
        let b = Block::new(BlockId::new(1, 1));
        assert!(InducingScheme::builder("d")
            .listed_level(1, vec![b.clone(), b])
            .build()
            .is_err());
    }

    #[test]
    fn generated_level_has_unknown_tail() {
        let g: BlockGenerator =
            Arc::new(|j| [("phi".to_owned(), -(j as f64))].into_iter().collect());
        let s = InducingScheme::builder("g")
            .generated_level(1, g)
            .build()
            .unwrap();
        let e = s.blocks_at_level(1, 3).unwrap();
        assert_eq!(e.blocks.len(), 3);
        assert_eq!(e.tail_bound["phi"], None);
        assert_eq!(e.cardinality, Cardinality::CountablyInfinite);
    }
}
