//! Deterministic geometry of N-particle configurations: norms, distances,
//! envelopes, projections, cluster decomposition, decoupling widths, and
//! weak-separability certificates.
//!
//! Everything is a pure function of immutable inputs and exact integer
//! arithmetic; safe to call concurrently from any number of threads.

mod boxes;
mod clusters;
mod lattice;
mod separability;

pub use boxes::{
    canonical_envelope, dch_distance, separating_layer, BoxUnion, MultiCube, Parallelepiped,
    SeparatingLayer,
};
pub use clusters::{
    cluster_decompose, decoupling_width, decoupling_width_cube, Cluster, ClusterDecomposition,
};
pub use lattice::{
    max_norm, projections, rho_distance, sym_distance, Configuration, IndexSet, LatticePoint,
    MAX_PARTICLES,
};
pub use separability::{
    occupancy_numbers, validate_certificate, weak_separability, CertificateCheck,
    CertificateClause, CertificateViolation, OccupancyEntry, SeparabilityCertificate, Side,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("lattice dimension must be at least 1")]
    ZeroDimension,
    #[error("configuration must hold at least one particle")]
    EmptyConfiguration,
    #[error("configuration has {n} particles, enumeration is capped at {max}")]
    TooManyParticles { n: usize, max: usize },
    #[error("particles of one configuration must share a dimension")]
    RaggedConfiguration,
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("particle count mismatch: {left} vs {right}")]
    ParticleCountMismatch { left: usize, right: usize },
    #[error("point set must be nonempty")]
    EmptyPointSet,
    #[error("box has inverted bounds")]
    EmptyBox,
    #[error("particle index outside [[1, {n}]]")]
    IndexOutOfRange { n: usize },
    #[error("invalid radius {radius}")]
    InvalidRadius { radius: i64 },
    #[error("operation needs at least two particles, got {n}")]
    NeedsTwoParticles { n: usize },
    #[error("not a permutation of the particle indices")]
    BadPermutation,
}
