//! Reference special functions, evaluated straight from defining integrals
//! (Romberg) or classical asymptotic series. No polynomial approximations
//! shared with the main pipeline.

use crate::quad::{integrate, romberg_midpoint, romberg_trapezoid, OracleDomain};
use num_complex::Complex64;
use std::f64::consts::PI;

const REL_TOL: f64 = 1e-12;

/// Probability integral (error function) by Romberg on the straight contour
/// u = z t, t in [0,1]. Accurate for |arg z| <= pi/4 at any modulus we use,
/// and for any direction when |z| is moderate.
pub fn erf_oracle(z: Complex64) -> Complex64 {
    if z.norm() == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let z2 = z * z;
    let q = romberg_trapezoid(|t| (-z2 * t * t).exp(), 0.0, 1.0, REL_TOL);
    z * q.value * 2.0 / PI.sqrt()
}

// Bernoulli-number coefficients B_{2n} / (2n (2n-1)) for the Stirling series.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
];

/// Gamma function via the Stirling series after an argument shift, with the
/// reflection formula for the left half plane.
pub fn gamma_oracle(s: Complex64) -> Complex64 {
    if s.re < 0.5 {
        // Gamma(s) Gamma(1-s) = pi / sin(pi s)
        let pi_s = Complex64::new(PI, 0.0) * s;
        return Complex64::new(PI, 0.0) / (pi_s.sin() * gamma_oracle(Complex64::new(1.0, 0.0) - s));
    }
    let mut shift = Complex64::new(1.0, 0.0);
    let mut z = s;
    while z.re < 24.0 {
        shift *= z;
        z += 1.0;
    }
    let mut series = Complex64::new(0.0, 0.0);
    let mut zp = z;
    for c in STIRLING {
        series += c / zp;
        zp *= z * z;
    }
    let half_log_2pi = 0.5 * (2.0 * PI).ln();
    let ln_gamma = (z - 0.5) * z.ln() - z + half_log_2pi + series;
    ln_gamma.exp() / shift
}

/// Lower incomplete gamma via the contour split
/// gamma(s, zeta) = zeta^s [ head-series on (0, tau0) + Romberg on (tau0, 1) ]
/// of int_0^1 tau^{s-1} e^{-zeta tau} d tau.
pub fn lower_gamma_oracle(s: Complex64, zeta: Complex64) -> Complex64 {
    assert!(s.re > 0.0, "lower_gamma_oracle requires Re s > 0");
    if zeta.norm() == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let tau0 = (2.0 / zeta.norm()).min(0.25);
    // head: expand e^{-zeta tau} and integrate term by term
    let mut head = Complex64::new(0.0, 0.0);
    let mut pow = Complex64::new(1.0, 0.0); // (-zeta)^j / j!
    let ln_tau0 = tau0.ln();
    for j in 0..200 {
        let sj = s + j as f64;
        let term = pow * (sj * ln_tau0).exp() / sj;
        head += term;
        if term.norm() < 1e-18 * head.norm().max(1e-300) && j > 3 {
            break;
        }
        pow *= -zeta / (j as f64 + 1.0);
    }
    let tail = romberg_midpoint(
        |tau| {
            let t = Complex64::new(tau, 0.0);
            ((s - 1.0) * t.ln() - zeta * tau).exp()
        },
        tau0,
        1.0,
        REL_TOL,
    );
    let zs = (s * zeta.ln()).exp();
    zs * (head + tail.value)
}

/// Weber parabolic cylinder function scaled by e^{z^2/4}:
/// e^{z^2/4} D_p(z) = (1/Gamma(-p)) int_0^inf e^{-z t - t^2/2} t^{-p-1} dt,
/// for p < 0. Evaluated by the open Romberg rule with the endpoint power
/// substituted away when -p-1 < 0.
pub fn pcf_scaled_oracle(p: f64, z: Complex64) -> Complex64 {
    assert!(p <= 0.0, "pcf oracle requires p <= 0");
    if p == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let alpha = -p - 1.0;
    // Substitute t = e^s: the integrand e^{(1+alpha)s - t^2/2 - z t} is smooth
    // for every order, decays essentially at both ends, and keeps the h^2
    // error expansion clean for Richardson. e^{-t^2/2} kills t > 14 for
    // alpha <= 12; the lower cut keeps the measure weight below 1e-20.
    let s_lo = -42.0 / (1.0 + alpha);
    let s_hi = 14.0f64.ln();
    let f = |s: f64| {
        let t = s.exp();
        (Complex64::new((1.0 + alpha) * s - 0.5 * t * t, 0.0) - z * t).exp()
    };
    let q = romberg_midpoint(f, s_lo, s_hi, REL_TOL);
    q.value / gamma_oracle(Complex64::new(-p, 0.0))
}

/// Unscaled D_p(z); only safe where e^{-z^2/4} is representable.
pub fn pcf_oracle(p: f64, z: Complex64) -> Complex64 {
    (-z * z / 4.0).exp() * pcf_scaled_oracle(p, z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn erf_real_matches_identities() {
        // erf(8) -> 1 to machine precision
        let v = erf_oracle(Complex64::new(8.0, 0.0));
        assert!((v.re - 1.0).abs() < 1e-14 && v.im.abs() < 1e-16);
        // odd symmetry
        let a = erf_oracle(Complex64::new(0.7, 0.3));
        let b = erf_oracle(Complex64::new(-0.7, -0.3));
        assert!((a + b).norm() < 1e-13);
    }

    #[test]
    fn gamma_known_values() {
        let g4 = gamma_oracle(Complex64::new(4.0, 0.0));
        assert!((g4.re - 6.0).abs() < 1e-12);
        let gh = gamma_oracle(Complex64::new(0.5, 0.0));
        assert!((gh.re - PI.sqrt()).abs() < 1e-12);
        // reflection zone
        let gm = gamma_oracle(Complex64::new(-0.5, 0.0));
        assert!((gm.re - (-2.0 * PI.sqrt())).abs() < 1e-11);
    }

    #[test]
    fn lower_gamma_elementary() {
        // gamma(1, z) = 1 - e^{-z}
        let z = Complex64::new(0.8, -1.3);
        let v = lower_gamma_oracle(Complex64::new(1.0, 0.0), z);
        let want = 1.0 - (-z).exp();
        assert!((v - want).norm() < 1e-11, "v={} want={}", v, want);
        // gamma(1/2, x) = sqrt(pi) erf(sqrt(x))
        let v2 = lower_gamma_oracle(Complex64::new(0.5, 0.0), Complex64::new(2.0, 0.0));
        let want2 = PI.sqrt() * erf_oracle(Complex64::new(2.0f64.sqrt(), 0.0));
        assert!((v2 - want2).norm() < 1e-11);
    }

    #[test]
    fn pcf_order_zero_and_known() {
        // D_0(z) = e^{-z^2/4} -> scaled value 1 (handled), and check D_{-1}(0):
        // D_{-1}(0) = sqrt(pi/2)
        let v = pcf_oracle(-1.0, Complex64::new(0.0, 0.0));
        assert!((v.re - (PI / 2.0).sqrt()).abs() < 1e-10, "got {}", v);
        // D_p(0) = 2^{p/2} sqrt(pi) / Gamma((1-p)/2)
        let p = -0.75;
        let want = 2.0f64.powf(p / 2.0) * PI.sqrt()
            / gamma_oracle(Complex64::new((1.0 - p) / 2.0, 0.0)).re;
        let got = pcf_oracle(p, Complex64::new(0.0, 0.0));
        assert!((got.re - want).abs() < 1e-10 * want.abs(), "got {} want {}", got, want);
    }
}
