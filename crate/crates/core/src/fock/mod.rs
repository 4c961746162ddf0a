//! Fermionic Fock space: determinant bases, ladder and excitation operators,
//! and Hamiltonian assembly in the N-particle sector.

mod basis;
mod hamiltonian;
mod ladder;
mod operator;

pub use basis::{
    apply_deexcitation, apply_excitation, binomial, enumerate_determinants, enumerate_excitations,
    excited_determinant, ExcitationIndex, OccupationVector, SectorBasis, SlaterDeterminant,
    SpinOrbitalBasis,
};
pub use hamiltonian::{
    hamiltonian_from_integrals, hamiltonian_from_matrix, IntegralConvention, IntegralSet,
    MatrixFile,
};
pub use ladder::{car_check, ladder_operator, CarReport, FullOperator};
pub use operator::FockOperator;

use thiserror::Error;

/// Errors raised while constructing Fock-space objects.
#[derive(Debug, Error)]
pub enum FockError {
    #[error("electron count {n} exceeds orbital count {k}")]
    TooManyElectrons { n: usize, k: usize },
    #[error("invalid excitation index (lengths, ordering, or ranges)")]
    BadExcitationIndex,
    #[error("orbital count {k} exceeds the full-Fock assembly cap of {cap}")]
    FockCapExceeded { k: usize, cap: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix asymmetry {deviation:e} exceeds tolerance {tolerance:e}")]
    NotSymmetric { deviation: f64, tolerance: f64 },
    #[error("integral tensor has wrong size for K={k}")]
    BadTensorSize { k: usize },
}
