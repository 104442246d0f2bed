//! Analytic expressions for the arrival-state amplitudes, used to
//! cross-validate the quadrature pipeline: the Taylor/derivative constants of
//! the high-momentum superposition, its parabolic-cylinder master formula,
//! the incomplete-gamma form of the low-momentum superposition, the
//! probability-integral form of the low eigenstate piece, and the power-law
//! regularizer's norm growth.
//!
//! Normalization convention: the closed forms below keep the plain e^{ikx}
//! transform kernel of their source expressions. The pipeline transform uses
//! the unitary kernel (2 pi)^(-1/2) e^{ikx}, so pipeline-comparable values
//! are the closed forms times [`POSITION_SCALE`].

use crate::error::{Result, ToaError};
use crate::numerics::{
    adaptive_integrate, gamma, lower_incomplete_gamma, parabolic_cylinder_scaled,
    probability_integral, QuadratureSpec,
};
use crate::states::{Params, RegKind};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Conversion from the e^{ikx}-kernel convention of the closed forms to the
/// pipeline's unitary transform.
pub const POSITION_SCALE: f64 = 0.398_942_280_401_432_7; // (2 pi)^(-1/2)

const I: Complex64 = Complex64::new(0.0, 1.0);

fn ipow(x: f64) -> Complex64 {
    // principal i^x = e^{i pi x / 2}
    Complex64::new(0.0, PI * x / 2.0).exp()
}

/// Derivative-scale constants of the high-momentum superposition.
///
/// `a` governs the large-detection-time falloff, `b` the on-time profile;
/// both are the scaled n-th derivatives at the arrival point (divide by n!
/// for the Taylor coefficient of x^n, as [`o_tau_series`] does internally).
#[derive(Debug, Clone, Copy)]
pub struct TaylorCoefficients {
    pub order: u32,
    pub a: Complex64,
    pub b: Complex64,
}

pub fn taylor_coeffs(order: u32) -> TaylorCoefficients {
    let n = order as f64;
    let a = ipow(-0.75 + 0.5 * n)
        * 2.0f64.powf(0.5 * n - 1.0)
        * PI.powf(-0.75)
        * gamma(Complex64::new(0.75 + 0.5 * n, 0.0));
    let b = ipow(n)
        * 2.0f64.powf(n - 1.25)
        * PI.powf(-0.75)
        * gamma(Complex64::new(0.375 + 0.25 * n, 0.0));
    TaylorCoefficients { order, a, b }
}

/// Scaled n-th x-derivative of the high-momentum superposition at x = 0 and
/// detection time t (e^{ikx} kernel, regulator-free limit):
/// 2^{3n/4 - 5/8} i^n pi^{-3/4} Gamma(3/4 + n/2) (m/spread)^{(1+2n)/4}
/// times the exponent-fused parabolic-cylinder factor.
fn o_tau_derivative(n: u32, t: f64, p: &Params) -> Result<Complex64> {
    let nf = n as f64;
    let m_over_d = p.mass / p.spread;
    let order = -0.75 - 0.5 * nf;
    let z = I * 2.0f64.sqrt() * t / p.spread;
    let dhat = parabolic_cylinder_scaled(order, z)?;
    Ok(ipow(nf)
        * 2.0f64.powf(0.75 * nf - 0.625)
        * PI.powf(-0.75)
        * gamma(Complex64::new(0.75 + 0.5 * nf, 0.0))
        * m_over_d.powf(0.25 + 0.5 * nf)
        * dhat)
}

#[derive(Debug, Clone, Copy)]
pub struct SeriesEval {
    pub value: Complex64,
    pub terms_used: usize,
    /// Geometric remainder bound from the last term and ratio.
    pub remainder: f64,
    /// False when the ratio test failed before n_max (terms still growing).
    pub converged: bool,
}

/// High-momentum superposition amplitude near the arrival point by Taylor
/// summation of the derivative master formula; pipeline-convention output
/// (the POSITION_SCALE conversion is already applied).
///
/// This is the regulator-free (eps -> 0) limit of the o-piece position
/// amplitude at detection time t.
pub fn o_tau_series(x: f64, t: f64, p: &Params, n_max: usize) -> Result<SeriesEval> {
    p.validate()?;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut fact = 1.0f64;
    let mut last: f64 = 0.0;
    let mut prev: f64 = 0.0;
    let mut used = 0;
    for n in 0..=n_max {
        if n > 0 {
            fact *= n as f64;
        }
        let term = o_tau_derivative(n as u32, t, p)? * x.powi(n as i32) / fact;
        sum += term;
        prev = last;
        last = term.norm();
        used = n + 1;
        if n >= 4 && last < 1e-18 * sum.norm().max(1e-300) {
            break;
        }
    }
    let ratio = if prev > 0.0 { last / prev } else { 0.0 };
    let converged = ratio < 1.0;
    let remainder = if converged && ratio > 0.0 {
        last * ratio / (1.0 - ratio)
    } else {
        last
    };
    Ok(SeriesEval {
        value: sum * POSITION_SCALE,
        terms_used: used,
        remainder: remainder * POSITION_SCALE,
        converged,
    })
}

/// Closed-form part of the limit amplitude carried by momenta below `k_cut`
/// at t = 0 (pipeline convention). Companion to [`o_tau_series`] for
/// comparisons against a grid that starts at a positive cutoff.
pub fn o_tau_below_cutoff(x: f64, p: &Params, k_cut: f64) -> Result<Complex64> {
    let m = p.mass;
    let d = p.spread;
    let pref = POSITION_SCALE * p.norm_const() * d * PI.sqrt() / (2.0 * PI * m).sqrt();
    let q = adaptive_integrate(
        QuadratureSpec::new(
            move |k: f64| {
                let env = (-k.powi(4) * d * d / (16.0 * m * m)).exp();
                Complex64::new(0.0, k * x).exp() * k.sqrt() * env
            },
            0.0,
            k_cut,
        )
        .with_rel_tol(1e-11)
        .with_lower_singularity(0.5),
    )?;
    Ok(pref * q.value)
}

#[derive(Debug, Clone, Copy)]
pub struct EpsTauValue {
    /// Incomplete-gamma form with the arrival-time integral done numerically.
    pub full: Complex64,
    /// Fast small-regulator approximation.
    pub approx: Complex64,
    /// False outside the approximation's regime (small eps^2 spread / m and
    /// moderate eps x).
    pub approx_valid: bool,
}

/// Low-momentum piece of the coherent state at the arrival time (t = tau = 0)
/// in closed form (e^{ikx} kernel; multiply by POSITION_SCALE to compare with
/// the pipeline transform). Negative x by reflection (the t = 0 amplitude of
/// this real spectral state obeys amp(-x) = conj(amp(x))).
pub fn eps_tau_closed(x: f64, p: &Params) -> Result<EpsTauValue> {
    p.validate()?;
    if p.tau != 0.0 {
        return Err(ToaError::domain("eps_tau_closed", "defined at tau = 0"));
    }
    if !matches!(p.kind, RegKind::Grt) {
        return Err(ToaError::domain("eps_tau_closed", "piecewise regularizer only"));
    }
    if x < 0.0 {
        let v = eps_tau_closed(-x, p)?;
        return Ok(EpsTauValue { full: v.full.conj(), approx: v.approx.conj(), ..v });
    }
    let (m, eps, d) = (p.mass, p.epsilon, p.spread);
    let ex = eps * x;
    let zeta = Complex64::new(0.0, -ex); // -i eps x
    let pref = p.norm_const() * eps.powf(1.5) / (2.0 * PI * m).sqrt();

    let full = if ex == 0.0 {
        // gamma(s, 0)/0^s -> the integrand reduces to the k-integral of
        // k^{s-3/2} over (0,1]: 1/(s - 1/2) ... use the x -> 0 limit of the
        // analytic form instead: int_0^1 kappa^{a - 1/2} dk = 1/(a + 1/2)
        let q = adaptive_integrate(
            QuadratureSpec::new(
                move |ta: f64| {
                    let a = Complex64::new(0.0, eps * eps * ta / m);
                    (-ta * ta / (d * d)).exp() / (a + 0.5)
                },
                -8.5 * d,
                8.5 * d,
            )
            .with_rel_tol(1e-11),
        )?;
        pref * q.value
    } else {
        let q = adaptive_integrate(
            QuadratureSpec::new(
                move |ta: f64| {
                    let a = Complex64::new(0.0, eps * eps * ta / m);
                    let s = a + 0.5;
                    let g = lower_incomplete_gamma(s, zeta).expect("Re s = 1/2 > 0");
                    let power = (-s * zeta.ln()).exp();
                    (-ta * ta / (d * d)).exp() * g * power
                },
                -8.5 * d,
                8.5 * d,
            )
            .with_rel_tol(1e-11),
        )?;
        pref * q.value
    };

    let approx = if ex == 0.0 {
        Complex64::new(
            (2.0 * PI).powf(-0.25) * (eps.powi(3) * d / (2.0 * m)).sqrt() * 2.0 / PI.sqrt(),
            0.0,
        )
    } else {
        let root = zeta.sqrt(); // sqrt(-i eps x), principal
        let phi = probability_integral(root)?;
        (2.0 * PI).powf(-0.25) * (eps.powi(3) * d / (2.0 * m)).sqrt() * phi / root
    };
    let approx_valid = p.small_parameter() <= 0.02 && ex <= 20.0;
    Ok(EpsTauValue { full, approx, approx_valid })
}

/// Position amplitude of the low-momentum piece of the t_A = 0 arrival
/// eigenstate: (eps / sqrt(2 x i m)) Phi(sqrt(i eps x)), principal roots
/// (e^{ikx} kernel). At x = 0 the finite limit eps (2/sqrt(pi))
/// sqrt(eps/(2m)) is returned; negative x by reflection.
pub fn gex_closed(x: f64, p: &Params) -> Result<Complex64> {
    p.validate()?;
    let (m, eps) = (p.mass, p.epsilon);
    if x < 0.0 {
        return Ok(gex_closed(-x, p)?.conj());
    }
    if x == 0.0 {
        return Ok(Complex64::new(eps * (2.0 / PI.sqrt()) * (eps / (2.0 * m)).sqrt(), 0.0));
    }
    let arg = (I * eps * x).sqrt();
    let phi = probability_integral(arg)?;
    let denom = (2.0 * x * m * I).sqrt();
    Ok(eps * phi / denom)
}

/// Low-sector norm of the power-law-regularized superposition, in units where
/// the high sector carries 1/2:
/// (1/2) e^{delta^2 m^2 / (2 eps^4 spread^2)} [1 - Phi(-w)] with
/// w = delta m / (sqrt(2) eps^2 spread).
///
/// The companion scale in the exponent fixes the probability-integral
/// argument: it is the reciprocal of the small parameter, which also makes
/// the delta -> 0 limit recover the piecewise regularizer's 1/2 and matches
/// the measured ratio and the reference quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerlawNorm {
    /// None when e^{exponent} overflows f64.
    pub value: Option<f64>,
    pub ln_value: f64,
}

pub fn n_eps_powerlaw(delta_exp: f64, epsilon: f64, spread: f64, mass: f64) -> Result<PowerlawNorm> {
    if !(delta_exp > 0.0) {
        return Err(ToaError::domain("n_eps_powerlaw", "delta_exp must be positive"));
    }
    for (name, v) in [("epsilon", epsilon), ("spread", spread), ("mass", mass)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(ToaError::domain("n_eps_powerlaw", format!("{name} must be positive")));
        }
    }
    let small = epsilon * epsilon * spread / mass;
    let exponent = delta_exp * delta_exp / (2.0 * small * small);
    let w = delta_exp / (2.0f64.sqrt() * small);
    let erf_w = if w > 6.0 {
        1.0
    } else {
        probability_integral(Complex64::new(w, 0.0))?.re
    };
    let ln_value = 0.5f64.ln() + exponent + (1.0 + erf_w).ln();
    let value = if ln_value < 700.0 { Some(ln_value.exp()) } else { None };
    Ok(PowerlawNorm { value, ln_value })
}
