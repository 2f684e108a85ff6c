//! JSON scheme descriptors.
//!
//! ```json
//! {
//!   "name": "demo",
//!   "levels": [
//!     {"n": 1, "blocks": [{"j": 1, "tau": 1, "log_weights": {"phi": -0.3}}]},
//!     {"n": 2, "closed_form": {"phi": {"constant": -0.6, "per_index": -0.69}}}
//!   ],
//!   "tail": {"from_level": 3, "shape": "single", "weights": {"phi": {"per_level": -0.3}}},
//!   "markov": [[[1, 1], [1, 1]]],
//!   "potentials": {"phi": {"weights": {"phi": 1.0}}, "neg_tau": {"tau": -1.0}}
//! }
//! ```
//!
//! A level lists its blocks, or gives a `closed_form` (one affine log weight
//! per name in `(n, j)`) for countably many blocks `j = 1, 2, ...`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::catalog::CatalogSystem;
use crate::error::{invalid, Result};
use crate::potential::{CylinderTable, InducedPotential};
use crate::scheme::{Affine, Block, BlockId, InducingScheme, MarkovConstraint, TailLaw};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeDescriptor {
    #[serde(default = "default_name")]
    pub name: String,
    #[serde(default)]
    pub levels: Vec<LevelDescriptor>,
    #[serde(default)]
    pub tail: Option<TailLaw>,
    /// Allowed transitions as pairs of `[level, index]`.
    #[serde(default)]
    pub markov: Option<Vec<[[u64; 2]; 2]>>,
    #[serde(default)]
    pub max_enumeration_level: Option<u32>,
    #[serde(default)]
    pub potentials: BTreeMap<String, PotentialDescriptor>,
}

fn default_name() -> String {
    "descriptor".into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelDescriptor {
    pub n: u32,
    #[serde(default)]
    pub blocks: Vec<BlockDescriptor>,
    #[serde(default)]
    pub closed_form: Option<BTreeMap<String, Affine>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockDescriptor {
    pub j: u64,
    pub tau: u32,
    #[serde(default)]
    pub log_weights: BTreeMap<String, f64>,
}

/// `sum coef * weight + tau * tau + constant + table`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialDescriptor {
    #[serde(default)]
    pub weights: BTreeMap<String, f64>,
    #[serde(default)]
    pub tau: f64,
    #[serde(default)]
    pub constant: f64,
    #[serde(default)]
    pub table: Option<TableDescriptor>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableDescriptor {
    pub depth: usize,
    /// `(word as [level, index] pairs, value)`.
    pub entries: Vec<(Vec<[u64; 2]>, f64)>,
}

fn block_id(p: [u64; 2]) -> Result<BlockId> {
    let level =
        u32::try_from(p[0]).or_else(|_| invalid(format!("level {} is out of range", p[0])))?;
    Ok(BlockId::new(level, p[1]))
}

impl SchemeDescriptor {
    pub fn build(&self) -> Result<CatalogSystem> {
        let mut b = InducingScheme::builder(&self.name);
        let mut seen = BTreeSet::new();
        for l in &self.levels {
            if !seen.insert(l.n) {
                return invalid(format!("level {} appears twice", l.n));
            }
            match (&l.closed_form, l.blocks.is_empty()) {
                (Some(_), false) => {
                    return invalid(format!("level {} has both blocks and a closed form", l.n))
                }
                (Some(cf), true) => b = b.geometric_level(l.n, cf.clone()),
                (None, _) => {
                    let mut blocks = Vec::new();
                    for bd in &l.blocks {
                        if bd.tau != l.n {
                            return invalid(format!(
                                "block j={} has tau {} on level {}",
                                bd.j, bd.tau, l.n
                            ));
                        }
                        if bd.tau == 0 {
                            return invalid("tau must be >= 1");
                        }
                        let mut block = Block::new(BlockId::new(l.n, bd.j));
                        for (k, v) in &bd.log_weights {
                            block = block.with_weight(k, *v);
                        }
                        blocks.push(block);
                    }
                    b = b.listed_level(l.n, blocks);
                }
            }
        }
        if let Some(t) = &self.tail {
            b = b.tail(t.clone());
        }
        if let Some(m) = &self.markov {
            let allowed = m
                .iter()
                .map(|[x, y]| Ok((block_id(*x)?, block_id(*y)?)))
                .collect::<Result<_>>()?;
            b = b.markov(MarkovConstraint { allowed });
        }
        if let Some(n) = self.max_enumeration_level {
            b = b.max_enumeration_level(n);
        }
        let mut sys = CatalogSystem::new(b.build()?);
        for (name, p) in &self.potentials {
            sys = sys.with_potential(name, p.build(name)?);
        }
        Ok(sys)
    }
}

impl PotentialDescriptor {
    pub fn build(&self, name: &str) -> Result<InducedPotential> {
        let mut pot = InducedPotential::tau(self.tau).plus_constant(self.constant);
        for (w, c) in &self.weights {
            pot = pot.add_scaled(&InducedPotential::weight(w), *c);
        }
        if let Some(t) = &self.table {
            if t.depth == 0 {
                return invalid("table depth must be >= 1");
            }
            let mut table = CylinderTable::new(name, t.depth);
            for (word, v) in &t.entries {
                let word = word
                    .iter()
                    .map(|p| block_id(*p))
                    .collect::<Result<Vec<_>>>()?;
                if word.len() != t.depth {
                    return invalid(format!(
                        "table `{name}` entry has length {} instead of {}",
                        word.len(),
                        t.depth
                    ));
                }
                table = table.with(&word, *v);
            }
            pot = pot.add(&InducedPotential::cylinder(table));
        }
        Ok(pot)
    }
}

pub fn from_json(text: &str) -> Result<CatalogSystem> {
    let d: SchemeDescriptor = serde_json::from_str(text)?;
    d.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::Cardinality;
    use crate::series::SeriesValue;
    use crate::sums::{self, Moment};
    use approx::assert_abs_diff_eq;

    const RENEWAL: &str = r#"{
        "name": "renewal-json",
        "levels": [{"n": 1, "blocks": [{"j": 1, "tau": 1, "log_weights": {"phi": -0.3}}]}],
        "tail": {"from_level": 2, "shape": "single", "weights": {"phi": {"per_level": -0.3}}},
        "potentials": {"phi": {"weights": {"phi": 1.0}}, "neg_tau": {"tau": -1.0}}
    }"#;

    #[test]
    fn renewal_from_json_matches_catalog() {
        let sys = from_json(RENEWAL).unwrap();
        let phi = sys.potential("phi").unwrap();
        let z = sums::total(&sys.scheme, &phi, Moment::One)
            .unwrap()
            .finite()
            .unwrap();
        let x = (-0.3f64).exp();
        assert_abs_diff_eq!(z, x / (1.0 - x), epsilon = 1e-14);
    }

    #[test]
    fn closed_form_level() {
        let sys = from_json(
            r#"{"levels": [{"n": 2, "closed_form": {"phi": {"constant": -0.6, "per_index": -0.6931471805599453}}}]}"#,
        )
        .unwrap();
        assert_eq!(
            sys.scheme.cardinality(2).unwrap(),
            Cardinality::CountablyInfinite
        );
        let u = sums::at_level(
            &sys.scheme,
            &InducedPotential::weight("phi"),
            Moment::One,
            2,
        )
        .unwrap();
        assert!(matches!(u, SeriesValue::Finite(v) if (v - (-0.6f64).exp()).abs() < 1e-14));
    }

    #[test]
    fn markov_table() {
        let sys = from_json(
            r#"{"levels": [{"n": 1, "blocks": [{"j": 1, "tau": 1}, {"j": 2, "tau": 1}]}],
                "markov": [[[1,1],[1,2]], [[1,2],[1,1]], [[1,2],[1,2]]],
                "potentials": {"c": {"table": {"depth": 2, "entries": [
                    [[[1,1],[1,2]], 0.0], [[[1,2],[1,1]], 0.0], [[[1,2],[1,2]], 0.0]]}}}}"#,
        )
        .unwrap();
        assert_eq!(sys.potential("c").unwrap().depth(), 2);
        assert!(sys
            .scheme
            .markov()
            .unwrap()
            .permits(BlockId::new(1, 2), BlockId::new(1, 2)));
    }

    #[test]
    fn bad_descriptors_are_rejected() {
        assert!(from_json(r#"{"levels": [{"n": 2, "blocks": [{"j": 1, "tau": 3}]}]}"#).is_err());
        assert!(from_json(r#"{"levels": [], "bogus": 1}"#).is_err());
        assert!(from_json(r#"{"levels": []}"#).is_err());
    }
}
