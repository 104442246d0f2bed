//! Continuum reference values for the arrival-state quantities, computed by
//! Romberg quadrature of the defining momentum/arrival-time integrands. The
//! main pipeline discretizes on a composite grid; nothing here touches that
//! grid, so agreement is a two-sided check.
//!
//! Conventions: hbar = 1, single + branch, states centered at tau = 0 unless
//! noted. Position amplitudes use the unitary transform
//! amp(x) = (2 pi)^(-1/2) int dk psi(k) e^{i k x}.

use crate::quad::{integrate, romberg_midpoint, romberg_trapezoid, OracleDomain};
use num_complex::Complex64;
use std::f64::consts::PI;

const TOL: f64 = 1e-11;

/// Physical inputs shared by the reference integrands.
#[derive(Debug, Clone, Copy)]
pub struct OracleParams {
    pub mass: f64,
    pub epsilon: f64,
    pub spread: f64,
}

impl OracleParams {
    /// Gaussian-superposition normalization (2 pi^3)^(-1/4) / sqrt(spread).
    pub fn norm_const(&self) -> f64 {
        (2.0 * PI.powi(3)).powf(-0.25) / self.spread.sqrt()
    }
    /// Common prefactor of the spectral density |psi(k)|^2.
    pub fn density_prefactor(&self) -> f64 {
        let n2 = self.norm_const().powi(2);
        n2 * self.spread * self.spread * PI / (2.0 * PI * self.mass)
    }
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Sector integrals of the spectral density, low-momentum (below epsilon) and
/// high-momentum (above), without the shared prefactor.
pub fn sector_integrals(p: &OracleParams) -> (f64, f64) {
    let (m, eps, d) = (p.mass, p.epsilon, p.spread);
    // below epsilon, in u = ln(eps/k): eps^2 * int_0^inf e^{-eps^4 d^2 u^2 / 2 m^2} du
    let a = eps.powi(4) * d * d / (2.0 * m * m);
    let sigma_u = m / (eps * eps * d);
    let low = integrate(
        |u| re((-a * u * u).exp()),
        OracleDomain::GaussTail { start: 0.0, scale: sigma_u },
        TOL,
        None,
    );
    // above epsilon, in k: int_eps^inf k e^{-(k^2-eps^2)^2 d^2 / 8 m^2} dk
    let scale = (m / d).sqrt() * 2.0;
    let high = integrate(
        |k| re(k * (-(k * k - eps * eps).powi(2) * d * d / (8.0 * m * m)).exp()),
        OracleDomain::GaussTail { start: eps, scale },
        TOL,
        None,
    );
    (eps * eps * low.value.re, high.value.re)
}

/// Fraction of the coherent-state norm below |k| = epsilon.
pub fn split_fraction(p: &OracleParams) -> f64 {
    let (low, high) = sector_integrals(p);
    low / (low + high)
}

/// Low-sector integral when the regularizer below epsilon is the power law
/// k^{1+delta} (amplitude changes, arrival-phase coordinate kept):
/// eps^2 * int_0^inf e^{delta u} e^{-eps^4 d^2 u^2 / 2 m^2} du.
pub fn power_low_sector(p: &OracleParams, delta_exp: f64) -> f64 {
    let (m, eps, d) = (p.mass, p.epsilon, p.spread);
    let a = eps.powi(4) * d * d / (2.0 * m * m);
    let u_peak = delta_exp / (2.0 * a);
    let sigma = (1.0 / (2.0 * a)).sqrt();
    let ln_scale = delta_exp * delta_exp / (4.0 * a); // peak height e^{ln_scale}
    let q = integrate(
        |u| re((delta_exp * u - a * u * u - ln_scale).exp()),
        OracleDomain::GaussTail { start: 0.0, scale: u_peak + 4.0 * sigma },
        TOL,
        None,
    );
    eps * eps * ln_scale.exp() * q.value.re
}

/// Low-sector norm of the power-law regularized state in units where the
/// high sector carries 1/2.
pub fn power_ratio(p: &OracleParams, delta_exp: f64) -> f64 {
    let (low0, _) = sector_integrals(p);
    0.5 * power_low_sector(p, delta_exp) / low0
}

/// Mean kinetic energy times spread for the normalized coherent state.
pub fn energy_spread_product(p: &OracleParams) -> f64 {
    let (m, eps, d) = (p.mass, p.epsilon, p.spread);
    let (low, high) = sector_integrals(p);
    // high-sector energy numerator: int_eps^inf (k^2/2m) k e^{-(k^2-eps^2)^2 d^2/8m^2} dk
    let scale = (m / d).sqrt() * 2.0;
    let num_high = integrate(
        |k| {
            re((k * k / (2.0 * m))
                * k
                * (-(k * k - eps * eps).powi(2) * d * d / (8.0 * m * m)).exp())
        },
        OracleDomain::GaussTail { start: eps, scale },
        TOL,
        None,
    );
    // low-sector energy numerator in u: (eps^4/2m) int_0^inf e^{-2u} e^{-a u^2} du
    let a = eps.powi(4) * d * d / (2.0 * m * m);
    let num_low = integrate(
        |u| re((-2.0 * u - a * u * u).exp()),
        OracleDomain::ExpTail { start: 0.0, scale: 0.5 },
        TOL,
        None,
    );
    let num = num_high.value.re + eps.powi(4) / (2.0 * m) * num_low.value.re;
    d * num / (low + high)
}

/// |<tau'|tau>| / <tau|tau> for two coherent states separated by s in arrival
/// time, from the arrival-phase-coordinate Gaussian density.
pub fn overlap_ratio(p: &OracleParams, s: f64) -> f64 {
    let (m, d) = (p.mass, p.spread);
    let sigma_z = m / d;
    let num = integrate(
        |z| re((-z * z * d * d / (2.0 * m * m)).exp() * (s * z / m).cos()),
        OracleDomain::GaussTail { start: 0.0, scale: sigma_z },
        TOL,
        None,
    );
    let den = integrate(
        |z| re((-z * z * d * d / (2.0 * m * m)).exp()),
        OracleDomain::GaussTail { start: 0.0, scale: sigma_z },
        TOL,
        None,
    );
    num.value.re / den.value.re
}

/// Coherent spectral amplitude at one momentum by direct numerical
/// superposition over arrival times (no analytic kernel).
pub fn coherent_amp_numeric_ta(p: &OracleParams, tau: f64, k: f64) -> Complex64 {
    let (m, eps, d) = (p.mass, p.epsilon, p.spread);
    assert!(k > 0.0);
    let (inv_sqrt_f, z) = if k < eps {
        ((k / (eps * eps)).sqrt().recip(), eps * eps * (k / eps).ln())
    } else {
        (k.sqrt(), 0.5 * (k * k - eps * eps))
    };
    let amp = romberg_trapezoid(
        |ta| {
            let g = (-(ta - tau) * (ta - tau) / (d * d)).exp();
            g * Complex64::new(0.0, ta * z / m).exp()
        },
        tau - 9.0 * d,
        tau + 9.0 * d,
        TOL,
    );
    p.norm_const() * inv_sqrt_f / (2.0 * PI * m).sqrt() * amp.value
}

/// Position amplitude of the high-momentum piece of the coherent state at
/// t = tau = 0 (Gaussian-in-arrival-phase form, single k integral).
pub fn o_piece_amp(p: &OracleParams, x: f64) -> Complex64 {
    let (m, eps, d) = (p.mass, p.epsilon, p.spread);
    let pref = p.norm_const() * d * PI.sqrt() / (2.0 * PI * m).sqrt() / (2.0 * PI).sqrt();
    let scale = (m / d).sqrt() * 2.0;
    let q = integrate(
        |k| {
            let env = (-(k * k - eps * eps).powi(2) * d * d / (16.0 * m * m)).exp();
            k.sqrt() * env * Complex64::new(0.0, k * x).exp()
        },
        OracleDomain::GaussTail { start: eps, scale },
        1e-9,
        None,
    );
    pref * q.value
}

/// Position amplitude of the low-momentum piece at t = tau = 0, in
/// u = ln(eps/k) with the analytic arrival-time kernel.
pub fn eps_piece_amp(p: &OracleParams, x: f64) -> Complex64 {
    let (m, eps, d) = (p.mass, p.epsilon, p.spread);
    let pref =
        p.norm_const() * d * PI.sqrt() / (2.0 * PI * m).sqrt() / (2.0 * PI).sqrt() * eps.powf(1.5);
    let a = eps.powi(4) * d * d / (4.0 * m * m); // envelope e^{-a u^2} on the amplitude
    let q = integrate(
        |u| {
            let phase = Complex64::new(0.0, eps * x * (-u).exp());
            (Complex64::new(-0.5 * u - a * u * u, 0.0) + phase).exp()
        },
        OracleDomain::ExpTail { start: 0.0, scale: 2.0 },
        1e-9,
        None,
    );
    pref * q.value
}

/// Low-momentum piece of the coherent amplitude by brute-force double
/// quadrature (numeric arrival-time integral inside the momentum integral).
pub fn eps_piece_amp_double(p: &OracleParams, x: f64) -> Complex64 {
    let (m, eps, d) = (p.mass, p.epsilon, p.spread);
    let pref = p.norm_const() * eps.powf(1.5) / (2.0 * PI * m).sqrt() / (2.0 * PI).sqrt();
    let outer = integrate(
        |u| {
            let inner = romberg_trapezoid(
                |ta| {
                    let g = (-ta * ta / (d * d)).exp();
                    g * Complex64::new(0.0, -eps * eps * ta * u / m).exp()
                },
                -9.0 * d,
                9.0 * d,
                1e-10,
            );
            let phase = Complex64::new(0.0, eps * x * (-u).exp());
            inner.value * (Complex64::new(-0.5 * u, 0.0) + phase).exp()
        },
        OracleDomain::ExpTail { start: 0.0, scale: 2.0 },
        1e-8,
        None,
    );
    pref * outer.value
}

/// Position amplitude of the regulator-free arrival eigenstate's low piece at
/// t_A = 0: (2 pi)^(-1/2) (2 pi m)^(-1/2) eps int_0^eps k^(-1/2) e^{ikx} dk.
pub fn gex_amp(p: &OracleParams, x: f64) -> Complex64 {
    let (m, eps) = (p.mass, p.epsilon);
    let pref = eps.powf(1.5) / (2.0 * PI * m).sqrt() / (2.0 * PI).sqrt();
    let q = integrate(
        |u| {
            let phase = Complex64::new(0.0, eps * x * (-u).exp());
            (Complex64::new(-0.5 * u, 0.0) + phase).exp()
        },
        OracleDomain::ExpTail { start: 0.0, scale: 2.0 },
        1e-10,
        None,
    );
    pref * q.value
}

/// Probability captured in |x| <= half_width for the o-piece alone and for
/// the full (o + eps) coherent state, both at t = tau = 0.
pub fn window_capture(p: &OracleParams, half_width: f64) -> (f64, f64) {
    let pref = p.density_prefactor();
    let (low, high) = sector_integrals(p);
    let norm_o = pref * high;
    let norm_full = pref * (low + high);
    let rho_o = |x: f64| o_piece_amp(p, x).norm_sqr();
    let rho_full = |x: f64| (o_piece_amp(p, x) + eps_piece_amp(p, x)).norm_sqr();
    // densities are even in x at t = tau = 0
    let int_o = romberg_trapezoid(|x| re(rho_o(x)), 0.0, half_width, 1e-7);
    let int_full = romberg_trapezoid(|x| re(rho_full(x)), 0.0, half_width, 1e-7);
    (
        2.0 * int_o.value.re / norm_o,
        2.0 * int_full.value.re / norm_full,
    )
}

/// Golden-section argmax of sqrt(k) e^{-k^4 spread^2 / 16 m^2}, reported as
/// the dimensionless combination k_star * sqrt(spread / mass).
pub fn envelope_peak_similarity(p: &OracleParams) -> f64 {
    let (m, d) = (p.mass, p.spread);
    let f = |k: f64| k.sqrt() * (-k.powi(4) * d * d / (16.0 * m * m)).exp();
    let (mut a, mut b) = (1e-6, 6.0 * (m / d).sqrt());
    let phi = (5.0f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let c = b - phi * (b - a);
        let dd = a + phi * (b - a);
        if f(c) > f(dd) {
            b = dd;
        } else {
            a = c;
        }
    }
    0.5 * (a + b) * (d / m).sqrt()
}

/// Origin amplitude of the regulator-free o-piece (the eps -> 0 limit).
pub fn o_amp_origin_limit(p: &OracleParams) -> Complex64 {
    let (m, d) = (p.mass, p.spread);
    let pref = p.norm_const() * d * PI.sqrt() / (2.0 * PI * m).sqrt() / (2.0 * PI).sqrt();
    let q = integrate(
        |k| re(k.sqrt() * (-k.powi(4) * d * d / (16.0 * m * m)).exp()),
        OracleDomain::GaussTail { start: 0.0, scale: 2.0 * (m / d).sqrt() },
        TOL,
        None,
    );
    pref * q.value
}

/// Smeared overlap of two regulator-free high-piece superpositions separated
/// by s, for the principal-value tail fit.
pub fn unmodified_overlap(p: &OracleParams, s: f64) -> Complex64 {
    let (m, d) = (p.mass, p.spread);
    let pref = p.density_prefactor();
    // int_0^inf k e^{i s k^2 / 2m} e^{-k^4 d^2 / 8 m^2} dk, in v = k^2
    let q = integrate(
        |v| {
            let env = (-v * v * d * d / (8.0 * m * m)).exp();
            0.5 * env * Complex64::new(0.0, s * v / (2.0 * m)).exp()
        },
        OracleDomain::GaussTail { start: 0.0, scale: 2.0 * 1.4142135623730951 * m / d },
        TOL,
        None,
    );
    pref * q.value
}
