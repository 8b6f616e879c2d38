//! Entanglement dynamics of two qubits coupled to a common squeezed thermal
//! reservoir.
//!
//! The crate integrates both the Markovian master equation (constant rates
//! γ, N, M, θ) and the time-local non-Markovian one (time-dependent
//! coefficients Δ(t), μ(t), α(t) obtained by quadrature over an Ohmic
//! spectral density with Gaussian cutoff), tracks the Wootters concurrence
//! along trajectories, and detects entanglement sudden-death / revival
//! cycles.
//!
//! Module map:
//! - [`bath`] — spectral functions and the master-equation coefficients
//! - [`qubits`] — collective operators, DFS states, initial-state families
//! - [`dynamics`] — generators and time integration
//! - [`entanglement`] — concurrence and ESD detection
//! - [`linalg`] — small Hermitian eigensolver and matrix helpers

pub mod bath;
pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod linalg;
pub mod qubits;

pub use error::SimError;
