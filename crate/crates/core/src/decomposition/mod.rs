//! Decomposition of bounded functions into quadratic structure plus error.

pub mod cluster;
pub mod graph;
pub mod peel;
pub mod projection;
pub mod rankgap;
pub mod structured;
pub mod verify;

pub use cluster::{cluster_vectors, Clustering};
pub use graph::{peel_neighborhoods, NeighborhoodPeel, WeightedGraph};
pub use peel::{
    default_iteration_cap, peel_atoms, peel_decompose, Atom, AtomShape, AtomicDecomposition,
    DecompositionBudget, PeelOutcome,
};
pub use projection::{large_spectrum_projection, SpectralProjection};
pub use rankgap::{ladder, rank_gap_partition, RankGap};
pub use structured::{
    structured_decompose, structured_stats, verify_structured, StructuredConfig,
    StructuredDecomposition, StructuredStats, StructuredTerm,
};
pub use verify::{budget_verify, witness_verify, BudgetReport, WitnessReport};
