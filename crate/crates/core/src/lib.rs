//! Quantum baker's maps realized as shifts on a finite string of qubits.
//!
//! The crate builds the antiperiodic quantization of the unit square on
//! `N` qubits, the partial Fourier transforms `G_n`, the dot-notation basis
//! they generate, and the family of baker's maps `B_n` that shift the dot
//! one place to the right. Each map is available as a dense matrix (two
//! independent constructions), as an `O(D·N)` state update, and as a verified
//! gate list. A classical symbolic-dynamics oracle and a set of
//! localization, entanglement and spectral diagnostics round things out.

pub mod analysis;
pub mod baker;
pub mod classical;
pub mod error;
pub mod lattice;
pub mod matrix;
pub mod qfourier;
pub mod state;
pub mod verify;

pub use error::{Error, Result};
pub use lattice::{BitVec, Dimensions, DotLabel, PhasePoint};
pub use matrix::UnitaryMatrix;
pub use num_complex::Complex64;
pub use state::StateVector;
