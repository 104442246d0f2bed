//! Composite momentum grid: a segment log-spaced in u = ln(eps/k) below the
//! regulator scale and a segment uniform in v = k^2 above it, sharing one
//! node at exactly k = eps.
//!
//! Weights are stored in the dk/k measure (`mu`), which stays representable
//! even when k itself underflows at extreme regulator settings; the dk-measure
//! weight w = mu * k and the transform weight mu * sqrt(k) are derived.
//! States store sqrt(k) * psi, so sums of mu * |phi|^2 reproduce
//! int dk |psi|^2 with the 1/sqrt(k) amplitude divergence cancelled
//! analytically.

use crate::error::{Result, ToaError};
use num_complex::Complex64;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Segment {
    Log,
    Linear,
}

#[derive(Debug, Clone)]
pub struct MomentumGrid {
    epsilon: f64,
    mass: f64,
    spread: f64,
    u_max: f64,
    k_max: f64,
    du: f64,
    dv: f64,
    n_log: usize,
    n_lin: usize,
    k: Vec<f64>,
    sqrt_k: Vec<f64>,
    /// Native coordinate: u = ln(eps/k) on the log segment (descending),
    /// v = k^2 on the linear segment (ascending).
    native: Vec<f64>,
    /// dk/k-measure trapezoid weights.
    mu: Vec<f64>,
    /// Same at half resolution (stride 2), zero on odd nodes; used for the
    /// panel-refinement error estimate of oscillatory sums.
    mu_half: Vec<f64>,
    boundary: usize,
    /// Log-segment share of the boundary node's weight (the k < eps side).
    boundary_mu_log: f64,
    mirrored: bool,
}

/// Build the composite grid for regulator scale `epsilon`, mass and
/// superposition spread. `n_log` and `n_lin` are rounded up to even.
///
/// The log segment spans u in [0, u_max] with u_max = 8 m / (eps^2 spread) + 25,
/// which bounds the discarded low-momentum envelope mass below e^{-32} of the
/// total; the linear segment ends at k_max = 6 sqrt(m/spread) + 3 eps, where
/// the high-momentum envelope is below 1e-19.
pub fn build_momentum_grid(
    epsilon: f64,
    mass: f64,
    spread: f64,
    n_log: usize,
    n_lin: usize,
) -> Result<MomentumGrid> {
    for (name, v) in [("epsilon", epsilon), ("mass", mass), ("spread", spread)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(ToaError::InvalidParameter { name: "grid", detail: format!("{name} = {v} must be positive and finite") });
        }
    }
    if n_log < 16 || n_lin < 16 {
        return Err(ToaError::InvalidParameter {
            name: "grid",
            detail: format!("n_log = {n_log}, n_lin = {n_lin}: both must be at least 16"),
        });
    }
    let n_log = n_log + n_log % 2;
    let n_lin = n_lin + n_lin % 2;

    let small = epsilon * epsilon * spread / mass;
    let u_max = 8.0 / small + 25.0;
    // The low-momentum envelope exp(-u^2/(2 sigma_u^2)) has sigma_u = 1/small;
    // require at least four nodes per sigma or the deep tail aliases.
    let sigma_u = 1.0 / small;
    let required = (4.0 * u_max / sigma_u).ceil() as usize;
    if n_log < required {
        return Err(ToaError::GridResolution { n_log, required_n_log: required });
    }
    let k_max = 6.0 * (mass / spread).sqrt() + 3.0 * epsilon;

    let total = n_log + n_lin + 1;
    let mut k = Vec::with_capacity(total);
    let mut sqrt_k = Vec::with_capacity(total);
    let mut native = Vec::with_capacity(total);
    let mut mu = vec![0.0; total];
    let mut mu_half = vec![0.0; total];

    let du = u_max / n_log as f64;
    let v0 = epsilon * epsilon;
    let dv = (k_max * k_max - v0) / n_lin as f64;

    for i in 0..=n_log {
        let u = du * (n_log - i) as f64;
        native.push(u);
        k.push(epsilon * (-u).exp());
        sqrt_k.push(epsilon.sqrt() * (-0.5 * u).exp());
        let coeff = if i == 0 || i == n_log { 0.5 } else { 1.0 };
        mu[i] = coeff * du;
        if i % 2 == 0 {
            let coeff_h = if i == 0 || i == n_log { 0.5 } else { 1.0 };
            mu_half[i] = coeff_h * 2.0 * du;
        }
    }
    let boundary = n_log;
    let boundary_mu_log = mu[boundary];

    for j in 1..=n_lin {
        let v = v0 + dv * j as f64;
        native.push(v);
        let kj = v.sqrt();
        k.push(kj);
        sqrt_k.push(kj.sqrt());
        let idx = n_log + j;
        let coeff = if j == n_lin { 0.5 } else { 1.0 };
        mu[idx] = coeff * dv / (2.0 * v);
        if j % 2 == 0 {
            let coeff_h = if j == n_lin { 0.5 } else { 1.0 };
            mu_half[idx] = coeff_h * 2.0 * dv / (2.0 * v);
        }
    }
    // linear-side share of the boundary node
    mu[boundary] += 0.5 * dv / (2.0 * v0);
    mu_half[boundary] += 0.5 * 2.0 * dv / (2.0 * v0);

    debug_assert!(k.windows(2).all(|w| w[0] <= w[1]), "nodes must ascend");
    debug_assert!(native[..=boundary].windows(2).all(|w| w[0] > w[1]));
    debug_assert!(native[boundary..].windows(2).all(|w| w[0] < w[1]));

    Ok(MomentumGrid {
        epsilon,
        mass,
        spread,
        u_max,
        k_max,
        du,
        dv,
        n_log,
        n_lin,
        k,
        sqrt_k,
        native,
        mu,
        mu_half,
        boundary,
        boundary_mu_log,
        mirrored: false,
    })
}

impl MomentumGrid {
    pub fn len(&self) -> usize {
        self.k.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn spread(&self) -> f64 {
        self.spread
    }

    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    pub fn k_max(&self) -> f64 {
        self.k_max
    }

    pub fn n_log(&self) -> usize {
        self.n_log
    }

    pub fn n_lin(&self) -> usize {
        self.n_lin
    }

    /// Log-segment spacing in u.
    pub fn du(&self) -> f64 {
        self.du
    }

    /// Linear-segment spacing in v = k^2.
    pub fn dv(&self) -> f64 {
        self.dv
    }

    /// |k| at node i; underflows gracefully to 0 deep in the log tail at
    /// extreme regulator settings (the native coordinate stays exact).
    pub fn k(&self, i: usize) -> f64 {
        self.k[i]
    }

    pub fn sqrt_k(&self, i: usize) -> f64 {
        self.sqrt_k[i]
    }

    /// k^2 at node i, computed from the native coordinate (exact on the
    /// linear segment).
    pub fn k_sq(&self, i: usize) -> f64 {
        if i <= self.boundary {
            let u = self.native[i];
            self.epsilon * self.epsilon * (-2.0 * u).exp()
        } else {
            self.native[i]
        }
    }

    pub fn native(&self, i: usize) -> f64 {
        self.native[i]
    }

    pub fn segment(&self, i: usize) -> Segment {
        if i < self.boundary {
            Segment::Log
        } else if i == self.boundary {
            Segment::Log // shared node, reported with its log identity
        } else {
            Segment::Linear
        }
    }

    /// dk/k-measure weight.
    pub fn mu(&self, i: usize) -> f64 {
        self.mu[i]
    }

    pub fn mu_half(&self, i: usize) -> f64 {
        self.mu_half[i]
    }

    /// dk-measure weight.
    pub fn w(&self, i: usize) -> f64 {
        self.mu[i] * self.k[i]
    }

    pub fn boundary(&self) -> usize {
        self.boundary
    }

    pub fn boundary_mu_log(&self) -> f64 {
        self.boundary_mu_log
    }

    pub fn mirrored(&self) -> bool {
        self.mirrored
    }

    pub fn with_mirror(mut self, mirrored: bool) -> Self {
        self.mirrored = mirrored;
        self
    }

    /// Grids are interchangeable for states when the geometry matches.
    pub fn same_geometry(&self, other: &MomentumGrid) -> bool {
        self.epsilon == other.epsilon
            && self.mass == other.mass
            && self.spread == other.spread
            && self.n_log == other.n_log
            && self.n_lin == other.n_lin
            && self.mirrored == other.mirrored
    }

    /// Largest spacing between consecutive nodes in a support mask, for the
    /// phase-resolution bound of oscillatory transforms.
    pub fn max_spacing(&self, support: impl Fn(usize) -> bool) -> f64 {
        let mut max = 0.0f64;
        let mut prev: Option<usize> = None;
        for i in 0..self.len() {
            if support(i) {
                if let Some(p) = prev {
                    if i == p + 1 {
                        max = max.max(self.k[i] - self.k[p]);
                    }
                }
                prev = Some(i);
            }
        }
        max
    }
}

/// Neumaier compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Compensated {
    sum: f64,
    comp: f64,
}

impl Compensated {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedComplex {
    re: Compensated,
    im: Compensated,
}

impl CompensatedComplex {
    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn total(&self) -> Complex64 {
        Complex64::new(self.re.total(), self.im.total())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_positive_and_increasing() {
        let g = build_momentum_grid(0.1, 1.0, 10.0, 64, 64).unwrap();
        assert!(g.k(0) > 0.0, "k_min underflowed at mild parameters");
        for i in 1..g.len() {
            assert!(g.k(i) > g.k(i - 1), "nodes must strictly increase");
            assert!(g.mu(i) > 0.0);
        }
        // boundary node sits at exactly eps
        assert_eq!(g.k(g.boundary()), 0.1);
    }

    #[test]
    fn kmax_scaling_with_spread() {
        let eps = 1e-3;
        let g1 = build_momentum_grid(eps, 1.0, 1.0, 64, 64).unwrap();
        let g2 = build_momentum_grid(eps, 1.0, 0.5, 64, 64).unwrap();
        let ratio = (g2.k_max() - 3.0 * eps) / (g1.k_max() - 3.0 * eps);
        assert!((ratio - 2.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn rejects_coarse_log_resolution() {
        // small parameter 1.0 -> sigma_u = 1, u_max = 33 -> need n_log >= 132
        let err = build_momentum_grid(1.0, 1.0, 1.0, 64, 64).unwrap_err();
        match err {
            ToaError::GridResolution { required_n_log, .. } => {
                assert!(required_n_log > 64);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn mu_measures_integrate_log_density() {
        // sum mu * g(k) with g = exp(-u^2/2sigma^2) on the log segment should
        // match the analytic half-Gaussian in u
        let g = build_momentum_grid(0.1, 1.0, 10.0, 2000, 64).unwrap();
        let sigma = 10.0; // 1/small
        let mut acc = Compensated::default();
        for i in 0..=g.boundary() {
            let u = g.native(i);
            let w = if i == g.boundary() { g.boundary_mu_log() } else { g.mu(i) };
            acc.add(w * (-u * u / (2.0 * sigma * sigma)).exp());
        }
        let want = sigma * (std::f64::consts::PI / 2.0).sqrt();
        assert!(
            (acc.total() - want).abs() < 1e-8 * want,
            "got {} want {}",
            acc.total(),
            want
        );
    }

    #[test]
    fn compensated_sum_beats_naive() {
        let mut c = Compensated::default();
        c.add(1.0);
        for _ in 0..40 {
            c.add(1e-17);
        }
        assert!(c.total() > 1.0);
    }
}
