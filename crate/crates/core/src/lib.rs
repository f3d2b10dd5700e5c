//! Exact finite models of conditional description length, information-distance
//! clusters and daisies over them, and a compressor-based distance proxy for
//! byte corpora.

pub mod cluster;
pub mod daisy;
pub mod error;
pub mod gen;
pub mod model;
pub mod ncd;
pub mod pipeline;
pub mod scalar;
pub mod triple;
pub mod verify;

pub use error::{Error, Result};
pub use model::{Complexity, ComplexityModel, DescriptionSystem, SetModel, SetString, Universe};

/// Distance matrix in bits, as produced by the exact models.
pub type BitsMatrix = cluster::DistanceMatrix<u32>;
/// Distance matrix in proxy units (scaled NCD).
pub type ProxyMatrix = cluster::DistanceMatrix<f64>;
pub type BitsCluster = cluster::Cluster<u32>;
pub type ProxyCluster = cluster::Cluster<f64>;
/// Exact probabilities for the covering claim.
pub type Rational = num_rational::Ratio<i64>;
