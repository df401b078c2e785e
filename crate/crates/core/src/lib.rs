//! Pseudo-hermitian operators built from SU(N) generator expansions.
//!
//! An operator `O = a₀ S η + a₁ Σₖ bₖ ηᵏ` with hermitian `S` and `η` satisfies
//! `O† η = η O`. When `η` is positive definite the similarity `ρ = √η` maps `O`
//! to a hermitian `h = ρ O ρ⁻¹`, so `O` has a real spectrum and generates
//! dynamics that conserve `ψ† η ψ`.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the aliases below fix
//! the scalar for the common cases.

pub mod cli;
pub mod error;
pub mod lattice;
pub mod lstsq;
pub mod matrix;
pub mod pseudoherm;
pub mod scalar;
pub mod su_basis;

pub use error::{Error, Result};
pub use lattice::{Boundary, LatticeModel, LatticeSpec, ModelKind};
pub use matrix::{anticommutator, commutator, ComplexMatrix, HermitianEigen};
pub use pseudoherm::{
    certify_metric, hermitize_pair, verify_pseudo_hermiticity, Hermitized, MetricCertificate, PseudoHermitianSystem,
    StateVector,
};
pub use scalar::{Real, Tolerances};
pub use su_basis::{BasisExpansion, GeneratorLabel, StructureConstants, SuBasis};

pub type ComplexMatrix64 = ComplexMatrix<f64>;
pub type ComplexMatrix32 = ComplexMatrix<f32>;
pub type SuBasis64 = SuBasis<f64>;
pub type SuBasis32 = SuBasis<f32>;
pub type System64 = PseudoHermitianSystem<f64>;
pub type System32 = PseudoHermitianSystem<f32>;
