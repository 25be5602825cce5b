//! Qubit density matrices, entanglement-free purification, post-measurement
//! state reconstruction, Kraus-operator realizations with explicit unitary
//! dilation, and entropy accounting.
//!
//! Overlaps are tr(ρ₁ρ₂) throughout, not Uhlmann fidelity.

#![forbid(unsafe_code)]

pub mod analysis;
pub mod error;
pub mod kraus;
pub mod purification;
pub mod qubit;
pub mod reconstruction;
pub mod sampling;

pub use num_complex::Complex64;
pub use error::{Error, Result};
pub use qubit::{overlap, BlochVector, DensityMatrix, PureState, Spectrum2};
