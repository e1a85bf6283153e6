//! Exact cardinalities of the microcanonical ensembles.
//!
//! The microcanonical counterpart of a canonical model keeps its constraint
//! exactly: fixed total for the homogeneous model, fixed degree or
//! hyperdegree sequence for the partial configuration models. Those
//! ensembles have closed-form sizes; counting matrices with both sequences
//! fixed simultaneously has no product formula and is not supported.

use num_bigint::BigUint;
use num_traits::One;

use crate::incidence::DegreeSummary;
use crate::models::ModelKind;
use crate::{Error, Result};

/// Exact binomial coefficient C(n, k); zero when k > n.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut result = BigUint::one();
    for i in 1..=k {
        result = result * (n - k + i) / i;
    }
    result
}

/// Number of matrices in the microcanonical ensemble matching `kind`.
///
/// Supported kinds: the uniform model (choose T cells out of N·L), and the
/// two partial configuration models (independent choices per row or per
/// column). Anything constraining both sequences at once is rejected.
pub fn count_microcanonical(d: &DegreeSummary, kind: ModelKind) -> Result<BigUint> {
    let n = d.n_nodes() as u64;
    let l = d.n_hyperedges() as u64;
    match kind {
        ModelKind::Rhm => Ok(binomial(n * l, d.total())),
        ModelKind::HpcmNodes => Ok(d
            .node_degrees()
            .iter()
            .map(|&k| binomial(l, k))
            .product()),
        ModelKind::HpcmHyperedges => Ok(d
            .hyperedge_degrees()
            .iter()
            .map(|&h| binomial(n, h))
            .product()),
        other => Err(Error::Unsupported {
            kind: "microcanonical-count",
            message: format!(
                "no closed-form count for the {other} ensemble (both degree sequences fixed)"
            ),
        }),
    }
}
