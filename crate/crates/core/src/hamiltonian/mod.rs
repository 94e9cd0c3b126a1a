//! Finite-volume N-particle Hamiltonians: basis enumeration, dense
//! assembly with Dirichlet restriction, full diagonalization, and the
//! certificate-licensed spectral-shift check.
//!
//! Assembly and diagonalization are pure per input set; independent cubes
//! can be processed concurrently and an assembled operator is immutable.

mod basis;
mod operator;
mod spectrum;

pub use basis::{CubeBasis, DEFAULT_DIM_CAP};
pub use operator::{
    assemble, assemble_with, AssembledOperator, AssemblyOptions, CustomInteraction, Interaction,
};
pub use spectrum::{
    shift_decomposition_check, spectral_distance, spectrum, ShiftReport, Spectrum,
    SHIFT_TOLERANCE,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HamiltonianError {
    #[error("cube has {dimension} basis points, above the cap {cap}")]
    CapExceeded { dimension: u128, cap: usize },
    #[error("field sample does not cover site {site}")]
    SampleCoverage { site: String },
    #[error("operator matrix is not symmetric (assembly bug)")]
    NotSymmetric,
    #[error("eigensolver residual {residual:.3e} above bound {bound:.3e}")]
    EigensolverResidual { residual: f64, bound: f64 },
    #[error("spectrum is empty")]
    EmptySpectrum,
    #[error("separability certificate failed validation: {0}")]
    InvalidCertificate(String),
    #[error("cube radius {cube_radius} exceeds certificate scale {certificate_scale}")]
    ScaleMismatch { cube_radius: i64, certificate_scale: i64 },
    #[error(transparent)]
    Geometry(#[from] crate::geometry::GeometryError),
    #[error(transparent)]
    Field(#[from] crate::field::FieldError),
}
