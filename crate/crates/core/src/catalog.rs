//! Concrete inducing schemes with closed-form oracles.
//!
//! * `renewal` R(beta): one block per level, `phi_bar = -beta n`.
//! * `weighted-infinite` W(beta): countably many blocks per level,
//!   `phi_bar(n, j) = -beta n - j log 2`.
//! * `markov2`: two symbols with inducing times 1 and 2 and a depth-2
//!   potential `c[a0][a1]`.
//! * `mp-linear`: a piecewise-linear intermittent interval map with branch
//!   lengths `|J_a| = (1 - rho) rho^(a-1) |W|` and the geometric potential.

use std::collections::BTreeMap;
use std::f64::consts::LN_2;
use std::sync::Arc;

use crate::error::{invalid, Error, Result};
use crate::potential::{CylinderTable, InducedPotential};
use crate::scheme::{Affine, AmbientImages, BlockId, InducingScheme, Interval, TailLaw, TailShape};

pub const NAMES: [&str; 4] = ["renewal", "weighted-infinite", "markov2", "mp-linear"];

/// A scheme together with its registered potentials.
#[derive(Debug, Clone)]
pub struct CatalogSystem {
    pub scheme: Arc<InducingScheme>,
    pub potentials: BTreeMap<String, InducedPotential>,
}

impl CatalogSystem {
    pub fn new(scheme: InducingScheme) -> Self {
        CatalogSystem {
            scheme: Arc::new(scheme),
            potentials: BTreeMap::new(),
        }
    }

    pub fn with_potential(mut self, name: &str, pot: InducedPotential) -> Self {
        self.potentials.insert(name.to_owned(), pot);
        self
    }

    /// A registered potential, or a plain block weight of the same name.
    pub fn potential(&self, name: &str) -> Result<InducedPotential> {
        if let Some(p) = self.potentials.get(name) {
            return Ok(p.clone());
        }
        if self.scheme.weight_names().iter().any(|w| w == name) {
            return Ok(InducedPotential::weight(name));
        }
        Err(Error::InvalidArgument(format!(
            "no potential `{name}` on `{}` (have: {})",
            self.scheme.name(),
            self.potentials
                .keys()
                .cloned()
                .collect::<Vec<_>>()
                .join(", ")
        )))
    }
}

fn affine(c: f64, n: f64, j: f64) -> Affine {
    Affine::new(c, n, j)
}

/// R(beta).
pub fn renewal(beta: f64) -> Result<CatalogSystem> {
    let scheme = InducingScheme::builder("renewal")
        .single_block(1, &[("phi", -beta), ("indicator1", 1.0)])
        .tail(TailLaw {
            from_level: 2,
            shape: TailShape::Single,
            weights: [
                ("phi".to_owned(), affine(0.0, -beta, 0.0)),
                ("indicator1".to_owned(), Affine::default()),
            ]
            .into_iter()
            .collect(),
        })
        .build()?;
    Ok(CatalogSystem::new(scheme)
        .with_potential("phi", InducedPotential::weight("phi"))
        .with_potential("indicator1", InducedPotential::weight("indicator1"))
        .with_potential("neg_tau", InducedPotential::tau(-1.0)))
}

/// W(beta).
pub fn weighted_infinite(beta: f64) -> Result<CatalogSystem> {
    let scheme = InducingScheme::builder("weighted-infinite")
        .tail(TailLaw {
            from_level: 1,
            shape: TailShape::Geometric,
            weights: [
                ("phi".to_owned(), affine(0.0, -beta, -LN_2)),
                ("neg_j".to_owned(), affine(0.0, 0.0, -1.0)),
            ]
            .into_iter()
            .collect(),
        })
        .build()?;
    Ok(CatalogSystem::new(scheme)
        .with_potential("phi", InducedPotential::weight("phi"))
        .with_potential("neg_j", InducedPotential::weight("neg_j"))
        .with_potential("neg_tau", InducedPotential::tau(-1.0)))
}

pub const MARKOV2_SYMBOLS: [BlockId; 2] = [BlockId::new(1, 1), BlockId::new(2, 1)];

/// markov2(c): symbol 1 has `tau = 1`, symbol 2 has `tau = 2`, and the
/// induced potential is `c[a0][a1]` on two-symbol words.
pub fn markov2(c: [[f64; 2]; 2]) -> Result<CatalogSystem> {
    let scheme = InducingScheme::builder("markov2")
        .single_block(1, &[])
        .single_block(2, &[])
        .build()?;
    let mut table = CylinderTable::new("c", 2);
    for (x, &a) in MARKOV2_SYMBOLS.iter().enumerate() {
        for (y, &b) in MARKOV2_SYMBOLS.iter().enumerate() {
            table = table.with(&[a, b], c[x][y]);
        }
    }
    Ok(CatalogSystem::new(scheme)
        .with_potential("c", InducedPotential::cylinder(table))
        .with_potential("neg_tau", InducedPotential::tau(-1.0)))
}

/// Ambient images of the piecewise-linear intermittent map on `[0, 1]`:
/// `W = [rho, 1]`, `left = [0, rho)` cut into `D_k = [rho^(k+1), rho^k)`;
/// `J_a` maps onto `D_(a-1)` and `D_k` onto `D_(k-1)` with `D_0 = W`.
#[derive(Debug, Clone, Copy)]
pub struct MpLinearImages {
    pub rho: f64,
}

impl MpLinearImages {
    pub fn left(&self) -> Interval {
        Interval::new(0.0, self.rho)
    }

    /// `D_k` for `k >= 1`.
    pub fn left_piece(&self, k: u32) -> Interval {
        Interval::new(self.rho.powi(k as i32 + 1), self.rho.powi(k as i32))
    }

    pub fn block(&self, a: u32) -> Interval {
        let w = 1.0 - self.rho;
        let lo = self.rho + w * (1.0 - self.rho.powi(a as i32 - 1));
        let hi = self.rho + w * (1.0 - self.rho.powi(a as i32));
        Interval::new(lo, hi)
    }
}

impl AmbientImages for MpLinearImages {
    fn domain(&self) -> Interval {
        Interval::new(0.0, 1.0)
    }

    fn base(&self) -> Interval {
        Interval::new(self.rho, 1.0)
    }

    fn image(&self, block: BlockId, iterate: u32) -> Interval {
        let a = block.tau();
        if iterate == 0 {
            self.block(a)
        } else if iterate < a {
            self.left_piece(a - iterate)
        } else {
            self.base()
        }
    }
}

/// mp-linear(rho, s).
pub fn mp_linear(rho: f64, s: f64) -> Result<CatalogSystem> {
    if !(rho > 0.0 && rho < 1.0) {
        return invalid("mp-linear needs 0 < rho < 1");
    }
    // phi_bar(J_a) = s log(|J_a| / |W|) = s (log(1 - rho) + (a - 1) log rho)
    let (lw, lr) = ((1.0 - rho).ln(), rho.ln());
    let scheme = InducingScheme::builder("mp-linear")
        .tail(TailLaw {
            from_level: 1,
            shape: TailShape::Single,
            weights: [("phi".to_owned(), affine(s * (lw - lr), s * lr, 0.0))]
                .into_iter()
                .collect(),
        })
        .ambient(Arc::new(MpLinearImages { rho }))
        .build()?;
    Ok(CatalogSystem::new(scheme)
        .with_potential("phi", InducedPotential::weight("phi"))
        .with_potential("neg_tau", InducedPotential::tau(-1.0)))
}

/// Build a catalog entry from its name and parameters.
pub fn catalog(name: &str, params: &BTreeMap<String, f64>) -> Result<CatalogSystem> {
    let get = |k: &str, d: f64| params.get(k).copied().unwrap_or(d);
    let known: &[&str] = match name {
        "renewal" | "weighted-infinite" => &["beta"],
        "markov2" => &["c11", "c12", "c21", "c22"],
        "mp-linear" => &["rho", "s"],
        other => return Err(Error::UnknownCatalog(other.to_owned())),
    };
    if let Some(k) = params.keys().find(|k| !known.contains(&k.as_str())) {
        return invalid(format!("unknown parameter `{k}` for `{name}`"));
    }
    match name {
        "renewal" => renewal(get("beta", 0.3)),
        "weighted-infinite" => weighted_infinite(get("beta", 0.3)),
        "markov2" => markov2([
            [get("c11", 0.0), get("c12", 0.0)],
            [get("c21", 0.0), get("c22", 0.0)],
        ]),
        _ => mp_linear(get("rho", 0.5), get("s", 1.0)),
    }
}

/// Parse `builtin:renewal?beta=0.3&...` into a name and parameters.
pub fn parse_builtin(reference: &str) -> Result<(String, BTreeMap<String, f64>)> {
    let rest = reference.strip_prefix("builtin:").ok_or_else(|| {
        Error::InvalidArgument(format!("`{reference}` is not a builtin reference"))
    })?;
    let (name, query) = rest.split_once('?').unwrap_or((rest, ""));
    let mut params = BTreeMap::new();
    for kv in query.split('&').filter(|s| !s.is_empty()) {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| Error::InvalidArgument(format!("malformed parameter `{kv}`")))?;
        let v: f64 = v
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("parameter `{k}` is not a number")))?;
        params.insert(k.to_owned(), v);
    }
    Ok((name.to_owned(), params))
}

/// Resolve a scheme reference: `builtin:...` or a path to a JSON descriptor.
pub fn resolve(reference: &str) -> Result<CatalogSystem> {
    if reference.starts_with("builtin:") {
        let (name, params) = parse_builtin(reference)?;
        catalog(&name, &params)
    } else {
        let text = std::fs::read_to_string(reference)?;
        crate::descriptor::from_json(&text)
    }
}
