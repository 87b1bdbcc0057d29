//! Simulation of three consecutive measurements on a maximally mixed qubit,
//! with strong or weak coupling for the middle detector, and evaluation of
//! the standard, entropic, and weak-modified Leggett-Garg inequalities.
//!
//! The protocol couples a purified qubit `Q` (reference `R`) to three qubit
//! ancillas `A1`, `A2`, `A3` via controlled rotations at relative basis
//! angles `theta1` and `theta2`. From the joint detector state the crate
//! computes outcome statistics, two-point correlators, von Neumann entropies
//! of every detector subset, tripartite entropy Venn diagrams, and all
//! inequality families, alongside closed-form oracles for cross-checking.
//!
//! Entry points:
//! - [`measure::run_protocol`] produces the joint detector state,
//! - [`ineq::evaluate_point`] produces a full [`ineq::LgReport`] for one
//!   `(theta1, theta2, epsilon)` parameter point.

pub mod entropy;
mod error;
pub mod ineq;
pub mod matrix;
pub mod measure;
pub mod state;

pub use error::{Error, Result};
pub use ineq::{evaluate_point, LgReport};
pub use matrix::ComplexMatrix;
pub use measure::{run_protocol, MeasurementSpec, ProtocolResult};
pub use num_complex::Complex64;
pub use state::{DensityOp, Ket, SubsystemLayout};

/// Default absolute tolerance for floating-point comparisons; all quantities
/// handled by this crate are O(1).
pub const DEFAULT_TOL: f64 = 1e-10;
