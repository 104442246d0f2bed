//! Complex-capable special functions and adaptive quadrature shared by the
//! rest of the crate.
//!
//! Every function here is pure and reentrant. Zone boundaries (series /
//! continued fraction / integral representation / asymptotic) were fixed by
//! requiring overlapping zones to agree to 1e-10; the unit tests pin those
//! overlaps.

pub mod quad;
pub mod special;

pub use quad::{adaptive_integrate, Domain, Quadrature, QuadratureSpec};
pub use special::{
    gamma, gaussian_time_kernel, lower_incomplete_gamma, parabolic_cylinder,
    parabolic_cylinder_scaled, probability_integral,
};
