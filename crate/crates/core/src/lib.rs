//! Random unitary operations (RUOs) that implement the bipartite
//! `U(d) ⊗ U(d)` twirl by iteration.
//!
//! The crate builds RUOs, computes their attractor spaces, decides which
//! ensembles converge to the twirl (algebraically for qubits, numerically for
//! qudits), and measures and optimizes the exponential rate of convergence
//! toward Werner states.

pub mod attractors;
pub mod channels;
pub mod error;
pub mod lab;
pub mod linalg;
pub mod qubit;
pub mod qudit;
pub mod tolerance;

pub use error::{Error, Result};
pub use tolerance::{tolerances, Tolerances};
