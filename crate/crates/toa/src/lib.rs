//! Numerical laboratory for regularized time-of-arrival states of a free
//! particle (natural units, hbar = 1).
//!
//! The arrival-time operator is made self-adjoint by replacing 1/k with a
//! regularizer f_eps(k) below a momentum scale eps. This crate constructs the
//! resulting eigenstates and their Gaussian superpositions on a composite
//! momentum grid (log-spaced below eps, quadratic-phase-uniform above),
//! evolves them freely, transforms them to position, and computes the
//! headline analysis quantities: the low/high-momentum norm split, arrival
//! window probabilities, overlaps, mean kinetic energy, and self-adjointness
//! defects. A `closedform` module carries the analytic expressions the
//! quadrature pipeline is cross-validated against.

pub mod analysis;
pub mod closedform;
pub mod dynamics;
pub mod error;
pub mod grid;
pub mod numerics;
pub mod states;

pub use error::{Result, ToaError};
pub use num_complex::Complex64;
