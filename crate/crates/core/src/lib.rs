//! Entropy-based null models for binary hypergraphs.
//!
//! A hypergraph on `N` nodes and `L` hyperedges is stored as its incidence
//! matrix. This crate fits maximum-entropy ensembles to the observed degree
//! sequences, samples from them, evaluates exact and asymptotic ensemble
//! expectations (projection weights, centrality, regime probabilities), and
//! statistically validates projected node pairs against the chosen null.
//!
//! The numerical core is generic over the scalar type through [`Real`];
//! the [`f64`] aliases below cover the common case.
//!
//! # Quick tour
//!
//! ```
//! use hypernull::incidence::IncidenceMatrix;
//! use hypernull::models::fit_hcm;
//! use hypernull::validation::validated_projection;
//!
//! let observed = IncidenceMatrix::from_memberships(
//!     4,
//!     vec![vec![0, 1, 2], vec![1, 2], vec![2, 3], vec![0, 3]],
//! )?;
//! let model = fit_hcm::<f64>(&observed.degree_summary(), 1e-10, 10_000)?;
//! let validated = validated_projection(&observed, &model, 0.05)?;
//! for (i, j, weight) in validated.validated_edges() {
//!     println!("{i} -- {j} (shared hyperedges: {weight})");
//! }
//! # Ok::<(), hypernull::Error>(())
//! ```

#![forbid(unsafe_code)]
#![warn(missing_docs)]

pub mod centrality;
pub mod community;
pub mod counting;
pub mod error;
pub mod expectation;
pub mod incidence;
pub mod io;
pub mod models;
pub mod poisson_binomial;
pub mod projection;
pub mod regime;
pub mod rng;
pub mod sampling;
pub mod sweep;
pub mod validation;
mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

/// Maximum-entropy ensemble over [`f64`].
pub type Model = models::ModelSolution<f64>;
/// Centrality result over [`f64`].
pub type Centrality = centrality::CecResult<f64>;
/// Expected projection summary over [`f64`].
pub type ExpectedProjection = expectation::ExpectedProjection<f64>;
/// Regime report over [`f64`].
pub type RegimeReport = regime::RegimeReport<f64>;
/// Structural threshold summary over [`f64`].
pub type Thresholds = regime::Thresholds<f64>;
/// Statistically validated projection over [`f64`].
pub type ValidationResult = validation::ValidationResult<f64>;
