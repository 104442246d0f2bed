//! Brute-force reference evaluator for the `toa` workspace.
//!
//! Everything here is built from elementary arithmetic plus Richardson-
//! extrapolated Newton-Cotes rules (iterated-bisection trapezoid on closed
//! intervals, iterated-trisection midpoint on open/mapped ones). The main
//! pipeline uses Gauss-Kronrod panels and series/continued-fraction special
//! functions; the two deliberately share no code so disagreements referee
//! real bugs. The oracle is allowed to be orders of magnitude slower.

pub mod fixtures;
pub mod physics;
pub mod quad;
pub mod special;

pub use quad::{romberg_midpoint, romberg_trapezoid, OracleDomain, OracleQuad};
