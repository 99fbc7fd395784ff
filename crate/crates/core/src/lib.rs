//! Word co-occurrence networks enriched with embedding-derived virtual edges,
//! per-word network features and authorship attribution experiments.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases below
//! fix the common instantiations.

pub mod corpus;
pub mod embed;
pub mod learn;
pub mod netbuild;
pub mod netmetrics;
pub mod runner;
mod scalar;
pub mod synthetic;

pub use scalar::Scalar;

pub type TextNetwork64 = netbuild::TextNetwork<f64>;
pub type TextNetwork32 = netbuild::TextNetwork<f32>;
pub type EmbeddingTable64 = embed::EmbeddingTable<f64>;
pub type EmbeddingTable32 = embed::EmbeddingTable<f32>;
pub type FeatureMatrix64 = learn::FeatureMatrix<f64>;
pub type FeatureMatrix32 = learn::FeatureMatrix<f32>;
