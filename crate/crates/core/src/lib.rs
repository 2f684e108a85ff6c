//! Thermodynamic formalism for maps with inducing schemes.
//!
//! The crate works on the symbolic model of an inducing scheme: a countable
//! alphabet of blocks `J_a` with inducing times `tau(a)`, the induced full
//! (or Markov) shift over it, and the tower built on top. On that substrate
//! it computes
//!
//! * weighted level sums `U_n`, `u_n(t)` and the complexity `kappa(t)`
//!   ([`complexity`]),
//! * liftable pressure through zero induced pressure, Gibbs and equilibrium
//!   measures, the tangent line `q_t = p + lambda t` ([`pressure`]),
//! * the summability conditions P1-P5 ([`potential`]),
//! * compatible partitions, Caratheodory-Pesin sums and the counting bounds
//!   used for liftability ([`liftability`]),
//! * Monte Carlo checks of mixing and the CLT on the tower ([`stats`]).
//!
//! Every series is summed exactly when the scheme has a closed form and is
//! reported as divergent or undetermined otherwise, never truncated
//! silently.
//!
//! ```
//! use inducing::{catalog, pressure};
//!
//! let sys = catalog::renewal(0.3).unwrap();
//! let phi = sys.potential("phi").unwrap();
//! let q = pressure::solve_pl(&phi, &sys.scheme, &Default::default(), 1e-13).unwrap();
//! assert!((q.q_star - (std::f64::consts::LN_2 - 0.3)).abs() < 1e-10);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod catalog;
pub mod cli;
pub mod complexity;
pub mod descriptor;
pub mod error;
pub mod liftability;
pub mod measure;
pub mod potential;
pub mod pressure;
pub mod report;
pub mod scheme;
pub mod series;
pub mod stats;
pub mod sums;
pub mod tower;

pub use catalog::{catalog, CatalogSystem};
pub use error::{Error, Result};
pub use potential::{InducedPotential, NormalizedPotential};
pub use report::Status;
pub use scheme::{BlockId, InducingScheme};
pub use series::SeriesValue;
