//! Special functions on complex arguments: probability integral, gamma,
//! lower incomplete gamma, Weber parabolic cylinder, and the Gaussian
//! arrival-time kernel.
//!
//! Algorithm zones: power series for small argument, continued fraction or
//! defining-integral quadrature for moderate, asymptotic expansion for large.
//! Target relative accuracy 1e-10 over the supported argument ranges.

use crate::error::{Result, ToaError};
use crate::numerics::quad::{adaptive_integrate, QuadratureSpec};
use num_complex::Complex64;
use std::f64::consts::PI;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn is_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Probability integral Phi(z) = (2/sqrt(pi)) int_0^z e^{-u^2} du, i.e. the
/// error function continued to complex argument.
///
/// Supported arguments: any z with |z| <= 3, and otherwise z off the
/// imaginary axis (the physics only ever needs the real axis and the
/// 45-degree rays from sqrt(+-i x), plus real power-law arguments).
pub fn probability_integral(z: Complex64) -> Result<Complex64> {
    if !is_finite(z) {
        return Err(ToaError::domain("probability_integral", "non-finite argument"));
    }
    let r = z.norm();
    if r == 0.0 {
        return Ok(ZERO);
    }
    if r <= 3.0 {
        return Ok(erf_series(z));
    }
    if z.re == 0.0 {
        return Err(ToaError::domain(
            "probability_integral",
            format!("pure imaginary argument {z} outside the series radius"),
        ));
    }
    if z.re < 0.0 {
        return Ok(-probability_integral(-z)?);
    }
    Ok(ONE - erfc_cf(z))
}

/// Maclaurin series, adequate to |z| ~ 3 before cancellation costs digits.
fn erf_series(z: Complex64) -> Complex64 {
    let z2 = z * z;
    let mut term = z;
    let mut sum = ZERO;
    for n in 0..200 {
        let contrib = term / (2 * n + 1) as f64;
        sum += contrib;
        if contrib.norm() < 1e-18 * sum.norm().max(1e-300) {
            break;
        }
        term = term * (-z2) / (n + 1) as f64;
    }
    sum * 2.0 / PI.sqrt()
}

/// Laplace continued fraction for erfc, Re z > 0, |z| >~ 3:
/// erfc(z) = e^{-z^2} / (sqrt(pi) F), F = z + (1/2)/(z + 1/(z + (3/2)/(...))).
fn erfc_cf(z: Complex64) -> Complex64 {
    let tiny = Complex64::new(1e-300, 0.0);
    let mut f = z;
    let mut c = z;
    let mut d = ZERO;
    for j in 1..400 {
        let a = j as f64 / 2.0;
        d = z + a * d;
        if d.norm() == 0.0 {
            d = tiny;
        }
        c = z + a / c;
        if c.norm() == 0.0 {
            c = tiny;
        }
        d = d.inv();
        let delta = c * d;
        f *= delta;
        if (delta - ONE).norm() < 1e-16 {
            break;
        }
    }
    (-z * z).exp() / (PI.sqrt() * f)
}

// Lanczos coefficients, g = 7, n = 9.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for complex argument (Lanczos approximation with
/// reflection for the left half plane).
pub fn gamma(s: Complex64) -> Complex64 {
    if s.re < 0.5 {
        let pi_s = s * PI;
        return PI / (pi_s.sin() * gamma(ONE - s));
    }
    let z = s - 1.0;
    let mut acc = Complex64::new(LANCZOS[0], 0.0);
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += *c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * acc
}

/// Lower incomplete gamma gamma(s, z) for Re s > 0, with
/// gamma(s, z) -> Gamma(s) as real z -> infinity.
pub fn lower_incomplete_gamma(s: Complex64, z: Complex64) -> Result<Complex64> {
    if s.re <= 0.0 {
        return Err(ToaError::domain(
            "lower_incomplete_gamma",
            format!("Re s = {} must be positive", s.re),
        ));
    }
    if !is_finite(s) || !is_finite(z) {
        return Err(ToaError::domain("lower_incomplete_gamma", "non-finite argument"));
    }
    if z.norm() == 0.0 {
        return Ok(ZERO);
    }
    if z.norm() < 8.0 {
        lower_gamma_series(s, z)
    } else {
        Ok(gamma(s) - upper_gamma_cf(s, z)?)
    }
}

/// Kummer series gamma(s,z) = z^s e^{-z} sum_n z^n / (s (s+1) ... (s+n)).
fn lower_gamma_series(s: Complex64, z: Complex64) -> Result<Complex64> {
    let mut term = s.inv();
    let mut sum = term;
    let mut sn = s;
    for _ in 0..500 {
        sn += 1.0;
        term = term * z / sn;
        sum += term;
        if term.norm() < 1e-18 * sum.norm().max(1e-300) {
            let front = (s * z.ln() - z).exp();
            return Ok(front * sum);
        }
    }
    Err(ToaError::QuadratureNotConverged {
        value: (s * z.ln() - z).exp() * sum,
        abs_error: term.norm(),
    })
}

/// Continued fraction for the upper incomplete gamma (Lentz form).
fn upper_gamma_cf(s: Complex64, z: Complex64) -> Result<Complex64> {
    let tiny = 1e-300;
    let mut b = z + 1.0 - s;
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = if b.norm() == 0.0 { Complex64::new(tiny, 0.0).inv() } else { b.inv() };
    let mut h = d;
    for i in 1..600 {
        let an = -(i as f64) * (Complex64::new(i as f64, 0.0) - s);
        b += 2.0;
        d = an * d + b;
        if d.norm() < tiny {
            d = Complex64::new(tiny, 0.0);
        }
        c = b + an / c;
        if c.norm() < tiny {
            c = Complex64::new(tiny, 0.0);
        }
        d = d.inv();
        let delta = d * c;
        h *= delta;
        if (delta - ONE).norm() < 1e-16 {
            let front = (s * z.ln() - z).exp();
            return Ok(front * h);
        }
    }
    Err(ToaError::QuadratureNotConverged {
        value: (s * z.ln() - z).exp() * h,
        abs_error: f64::NAN,
    })
}

/// Gaussian arrival-time kernel: int dt e^{-t^2/spread^2} e^{-i b t}
/// = spread sqrt(pi) e^{-b^2 spread^2 / 4}, returned as the exact closed form.
pub fn gaussian_time_kernel(b: f64, spread: f64) -> f64 {
    assert!(spread > 0.0, "gaussian_time_kernel requires positive spread");
    spread * PI.sqrt() * (-b * b * spread * spread / 4.0).exp()
}

/// Weber parabolic cylinder function D_p(z) for order p <= 0.
///
/// Fails with a domain error when e^{-z^2/4} is not representable; use
/// [`parabolic_cylinder_scaled`] in that regime.
pub fn parabolic_cylinder(p: f64, z: Complex64) -> Result<Complex64> {
    let scaled = parabolic_cylinder_scaled(p, z)?;
    let expo = -z * z / 4.0;
    if expo.re > 700.0 {
        return Err(ToaError::domain(
            "parabolic_cylinder",
            format!("e^(-z^2/4) overflows f64 at z = {z}; use the scaled variant"),
        ));
    }
    Ok(expo.exp() * scaled)
}

/// e^{z^2/4} D_p(z): the combination that stays bounded on the imaginary
/// axis, where the bare function overflows.
pub fn parabolic_cylinder_scaled(p: f64, z: Complex64) -> Result<Complex64> {
    if p > 0.0 {
        return Err(ToaError::domain(
            "parabolic_cylinder",
            format!("order p = {p} must be <= 0"),
        ));
    }
    if !is_finite(z) {
        return Err(ToaError::domain("parabolic_cylinder", "non-finite argument"));
    }
    if p == 0.0 {
        return Ok(ONE);
    }
    let r = z.norm();
    // the large-|z| series needs more room for deep orders before its
    // optimal truncation reaches 1e-12
    let asym_radius = (12.0 + 0.35 * p.abs()).max(p.abs() + 10.0);
    if r <= 4.0 {
        Ok(pcf_scaled_series(p, z))
    } else if r < asym_radius {
        pcf_scaled_integral(p, z)
    } else {
        Ok(pcf_scaled_asymptotic(p, z))
    }
}

/// Kummer M(a, b, x) by direct series.
fn kummer_m(a: Complex64, b: Complex64, x: Complex64) -> Complex64 {
    let mut term = ONE;
    let mut sum = ONE;
    for n in 0..500 {
        let nf = n as f64;
        term = term * (a + nf) * x / ((b + nf) * (nf + 1.0));
        sum += term;
        if term.norm() < 1e-18 * sum.norm().max(1e-300) {
            break;
        }
    }
    sum
}

fn pcf_scaled_series(p: f64, z: Complex64) -> Complex64 {
    let h = z * z / 2.0;
    let m1 = kummer_m(Complex64::new(-p / 2.0, 0.0), Complex64::new(0.5, 0.0), h);
    let m2 = kummer_m(Complex64::new((1.0 - p) / 2.0, 0.0), Complex64::new(1.5, 0.0), h);
    let g1 = gamma(Complex64::new((1.0 - p) / 2.0, 0.0));
    let g2 = gamma(Complex64::new(-p / 2.0, 0.0));
    2.0f64.powf(p / 2.0) * PI.sqrt() * (m1 / g1 - 2.0f64.sqrt() * z * m2 / g2)
}

/// Defining integral e^{z^2/4} D_p(z) = (1/Gamma(-p)) int_0^inf
/// e^{-z t - t^2/2} t^{-p-1} dt, evaluated adaptively.
fn pcf_scaled_integral(p: f64, z: Complex64) -> Result<Complex64> {
    let alpha = -p - 1.0;
    let f = move |t: f64| {
        if t <= 0.0 {
            return ZERO;
        }
        (Complex64::new(-0.5 * t * t + alpha * t.ln(), 0.0) - z * t).exp()
    };
    let mut spec = QuadratureSpec::new(f, 0.0, 14.0).with_rel_tol(1e-12);
    if z.im.abs() > 1.0 {
        spec = spec.with_oscillation(z.im.abs());
    }
    if alpha < 0.0 {
        spec = spec.with_lower_singularity(alpha);
    }
    let q = adaptive_integrate(spec)?;
    Ok(q.value / gamma(Complex64::new(-p, 0.0)))
}

/// Large-|z| expansion z^p sum_s (-1)^s (-p)_{2s} / (s! (2 z^2)^s),
/// |arg z| < 3 pi / 4.
fn pcf_scaled_asymptotic(p: f64, z: Complex64) -> Complex64 {
    let z2_inv = (2.0 * z * z).inv();
    let mut term = ONE;
    let mut sum = ONE;
    let mut prev_norm = f64::INFINITY;
    for s in 0..120 {
        let sf = s as f64;
        let poch = (-p + 2.0 * sf) * (-p + 2.0 * sf + 1.0);
        term = term * (-1.0) * poch * z2_inv / (sf + 1.0);
        if term.norm() > prev_norm {
            break; // past optimal truncation
        }
        prev_norm = term.norm();
        sum += term;
        if term.norm() < 1e-17 * sum.norm() {
            break;
        }
    }
    z.powc(Complex64::new(p, 0.0)) * sum
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn phi_at_zero_and_large_real() {
        assert_eq!(probability_integral(ZERO).unwrap(), ZERO);
        let v = probability_integral(c(8.0, 0.0)).unwrap();
        assert!((v.re - 1.0).abs() < 1e-12 && v.im == 0.0);
    }

    #[test]
    fn phi_conjugate_symmetry() {
        for &z in &[c(0.7, 1.1), c(2.5, -0.4), c(4.0, 2.0), c(6.0, -5.0)] {
            let a = probability_integral(z).unwrap();
            let b = probability_integral(z.conj()).unwrap();
            assert!((a.conj() - b).norm() <= 1e-14 * a.norm().max(1.0), "z={z}");
        }
    }

    #[test]
    fn phi_zone_overlap() {
        // series vs continued fraction across the |z| = 3 crossover
        for t in [2.8, 2.9, 3.0, 3.1, 3.3] {
            for ang in [0.0, 0.3, PI / 4.0] {
                let z = Complex64::from_polar(t, ang);
                let series = erf_series(z);
                let cf = ONE - erfc_cf(z);
                assert!(
                    (series - cf).norm() <= 1e-10 * series.norm().max(1.0),
                    "z={z} series={series} cf={cf}"
                );
            }
        }
    }

    #[test]
    fn lower_gamma_elementary_and_identity() {
        // gamma(1, z) = 1 - e^{-z}
        for &z in &[c(0.5, 0.0), c(3.0, 4.0), c(0.0, -6.0), c(12.0, 0.0)] {
            let v = lower_incomplete_gamma(ONE, z).unwrap();
            let want = ONE - (-z).exp();
            assert!((v - want).norm() < 1e-12 * want.norm().max(1.0), "z={z} v={v} want={want}");
        }
        // gamma(s, 0) = 0
        assert_eq!(lower_incomplete_gamma(c(0.7, 0.1), ZERO).unwrap(), ZERO);
        // gamma(1/2, x) = sqrt(pi) Phi(sqrt(x)) on the real axis
        for x in [0.2, 1.0, 2.0, 7.0, 20.0, 60.0] {
            let v = lower_incomplete_gamma(c(0.5, 0.0), c(x, 0.0)).unwrap();
            let want = PI.sqrt() * probability_integral(c(x.sqrt(), 0.0)).unwrap();
            assert!(
                (v - want).norm() < 1e-10 * want.norm(),
                "x={x} v={v} want={want}"
            );
        }
        // Re s <= 0 rejected
        assert!(lower_incomplete_gamma(c(-0.5, 0.0), ONE).is_err());
    }

    #[test]
    fn lower_gamma_zone_overlap() {
        // series vs CF across |z| = 8, on the imaginary axis the physics uses
        let s = c(0.5, 0.03);
        for y in [7.0, 7.5, 8.0, 8.5, 9.0] {
            let z = c(0.0, -y);
            let series = lower_gamma_series(s, z).unwrap();
            let cf = gamma(s) - upper_gamma_cf(s, z).unwrap();
            assert!(
                (series - cf).norm() <= 1e-10 * series.norm().max(1e-6),
                "y={y} series={series} cf={cf}"
            );
        }
    }

    #[test]
    fn gamma_reference_points() {
        assert!((gamma(c(4.0, 0.0)).re - 6.0).abs() < 1e-12);
        assert!((gamma(c(0.5, 0.0)).re - PI.sqrt()).abs() < 1e-13);
        // Gamma(3/4) Gamma(1/4) = pi / sin(pi/4) = pi sqrt(2)
        let prod = gamma(c(0.75, 0.0)).re * gamma(c(0.25, 0.0)).re;
        assert!((prod - PI * 2.0f64.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn pcf_order_zero_and_origin() {
        let z = c(1.3, -0.4);
        let d0 = parabolic_cylinder(0.0, z).unwrap();
        assert!((d0 - (-z * z / 4.0).exp()).norm() < 1e-15);
        // D_p(0) = 2^{p/2} sqrt(pi) / Gamma((1-p)/2)
        for p in [-0.75, -1.25, -3.75, -6.75] {
            let got = parabolic_cylinder(p, ZERO).unwrap();
            let want = 2.0f64.powf(p / 2.0) * PI.sqrt() / gamma(c((1.0 - p) / 2.0, 0.0)).re;
            assert!((got.re - want).abs() < 1e-12 * want.abs(), "p={p}");
        }
    }

    #[test]
    fn pcf_zone_overlaps() {
        // series vs integral at |z| = 5, integral vs asymptotic near the
        // upper crossover, on the imaginary axis
        for p in [-0.75, -2.75, -5.25] {
            for y in [3.8, 4.0, 4.2] {
                let z = c(0.0, y);
                let series = pcf_scaled_series(p, z);
                let integral = pcf_scaled_integral(p, z).unwrap();
                assert!(
                    (series - integral).norm() <= 5e-9 * series.norm().max(1e-30),
                    "p={p} y={y} series={series} integral={integral}"
                );
            }
            let hi = (12.0 + 0.35 * p.abs()).max(p.abs() + 10.0);
            for y in [hi - 0.2, hi, hi + 0.5] {
                let z = c(0.0, y);
                let integral = pcf_scaled_integral(p, z).unwrap();
                let asym = pcf_scaled_asymptotic(p, z);
                assert!(
                    (integral - asym).norm() <= 1e-9 * integral.norm().max(1e-30),
                    "p={p} y={y} integral={integral} asym={asym}"
                );
            }
        }
    }

    #[test]
    fn pcf_large_argument_expansion_error() {
        // leading-order expansion with the first correction matches to the
        // size of the next term
        let p = -0.75;
        for y in [15.0, 25.0, 40.0] {
            let z = c(0.0, y);
            let d = parabolic_cylinder_scaled(p, z).unwrap();
            let zp = z.powc(c(p, 0.0));
            let two_term = zp * (ONE - p * (p - 1.0) * (2.0 * z * z).inv());
            let next = (p * (p - 1.0) * (p - 2.0) * (p - 3.0)).abs()
                / (8.0 * y.powi(4));
            assert!(
                (d - two_term).norm() <= 3.0 * next * zp.norm() + 1e-14,
                "y={y}"
            );
        }
    }

    #[test]
    fn pcf_rejects_positive_order() {
        assert!(parabolic_cylinder(0.5, ZERO).is_err());
    }

    #[test]
    fn kernel_closed_form() {
        let d = 3.0;
        assert!((gaussian_time_kernel(0.0, d) - d * PI.sqrt()).abs() < 1e-15);
        let v = gaussian_time_kernel(2.0 / d, d);
        assert!((v - d * PI.sqrt() * (-1.0f64).exp()).abs() < 1e-15);
        for b in [-5.0, -0.3, 0.0, 1.7, 9.0] {
            assert!(gaussian_time_kernel(b, d) > 0.0);
        }
    }
}
