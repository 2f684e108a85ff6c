//! Status vocabulary shared by every report the crate emits.

use serde::{Deserialize, Serialize};

/// How much a reported number can be trusted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// Exact up to rounding, backed by a closed form.
    Certified,
    /// Fitted from finitely many terms; no certificate.
    RegressionOnly,
    /// Could not be decided from the available data.
    Undetermined,
    /// A one-sided bound from above.
    UpperBound,
}
