//! Physical configuration, the regularizer and its arrival-phase coordinate,
//! and construction of eigenstates and coherent superpositions on a grid.
//!
//! States are stored as phi(k) = sqrt(k) * psi(k). Every state built here has
//! psi proportional to f_eps(k)^(-1/2) or sqrt(k), so phi is bounded and the
//! 1/sqrt(k) divergence below the regulator scale never has to be represented
//! in floating point.

use crate::error::{Result, ToaError};
use crate::grid::{Compensated, MomentumGrid};
use crate::numerics::gaussian_time_kernel;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    Plus,
    Minus,
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Branch::Plus => write!(f, "+"),
            Branch::Minus => write!(f, "-"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum RegKind {
    /// Piecewise k/eps^2 below the regulator scale, 1/k above.
    Grt,
    /// Power law k^(1+exponent) below the scale, continuity-normalized;
    /// supported for norm studies only.
    Power { exponent: f64 },
}

/// Physical configuration (natural units, hbar = 1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Params {
    pub mass: f64,
    pub epsilon: f64,
    /// Arrival-time spread of the coherent superposition.
    pub spread: f64,
    /// Center of the coherent superposition in arrival time.
    pub tau: f64,
    pub branch: Branch,
    pub kind: RegKind,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            mass: 1.0,
            epsilon: 0.1,
            spread: 10.0,
            tau: 0.0,
            branch: Branch::Plus,
            kind: RegKind::Grt,
        }
    }
}

impl Params {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("mass", self.mass), ("epsilon", self.epsilon), ("spread", self.spread)]
        {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ToaError::InvalidParameter {
                    name: "params",
                    detail: format!("{name} = {v} must be positive and finite"),
                });
            }
        }
        if !self.tau.is_finite() {
            return Err(ToaError::InvalidParameter {
                name: "params",
                detail: format!("tau = {} must be finite", self.tau),
            });
        }
        if let RegKind::Power { exponent } = self.kind {
            if !(exponent > 0.0 && exponent.is_finite()) {
                return Err(ToaError::InvalidParameter {
                    name: "params",
                    detail: format!("power regularizer exponent = {exponent} must be positive"),
                });
            }
        }
        Ok(())
    }

    /// The dimensionless combination eps^2 spread / mass controlling every
    /// small-regulator claim.
    pub fn small_parameter(&self) -> f64 {
        self.epsilon * self.epsilon * self.spread / self.mass
    }

    /// Gaussian-superposition normalization (2 pi^3)^(-1/4) / sqrt(spread).
    pub fn norm_const(&self) -> f64 {
        (2.0 * PI.powi(3)).powf(-0.25) / self.spread.sqrt()
    }

    pub fn build_grid(&self, n_log: usize, n_lin: usize) -> Result<Arc<MomentumGrid>> {
        self.validate()?;
        let g = crate::grid::build_momentum_grid(self.epsilon, self.mass, self.spread, n_log, n_lin)?
            .with_mirror(self.branch == Branch::Minus);
        Ok(Arc::new(g))
    }
}

/// Which part of a modified eigenstate to materialize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SplitTag {
    Full,
    /// Support |k| > eps.
    OPiece,
    /// Support |k| < eps.
    EpsPiece,
}

impl std::fmt::Display for SplitTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SplitTag::Full => write!(f, "full"),
            SplitTag::OPiece => write!(f, "o-piece"),
            SplitTag::EpsPiece => write!(f, "eps-piece"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EigenstateDescriptor {
    pub arrival_time: f64,
    pub split: SplitTag,
}

/// Regularizer f_eps(k) for k > 0 (the k < 0 branch mirrors through |k|).
pub fn regularizer(k: f64, p: &Params) -> Result<f64> {
    if !(k > 0.0) {
        return Err(ToaError::domain("regularizer", format!("k = {k} must be positive")));
    }
    let eps = p.epsilon;
    Ok(match p.kind {
        RegKind::Grt => {
            if k < eps {
                k / (eps * eps)
            } else {
                1.0 / k
            }
        }
        RegKind::Power { exponent } => {
            if k < eps {
                k.powf(1.0 + exponent) * eps.powf(-(2.0 + exponent))
            } else {
                1.0 / k
            }
        }
    })
}

/// Arrival-phase coordinate z(k) = int dk'/f_eps(k') from the regulator
/// scale: eps^2 ln(k/eps) below, (k^2 - eps^2)/2 above. This is the
/// piecewise-regularizer coordinate; power-kind norm studies reuse it
/// unchanged (the regularizer kind only reshapes the amplitude).
pub fn z_coordinate(k: f64, p: &Params) -> Result<f64> {
    if !(k > 0.0) {
        return Err(ToaError::domain("z_coordinate", format!("k = {k} must be positive")));
    }
    let eps = p.epsilon;
    Ok(if k < eps {
        eps * eps * (k / eps).ln()
    } else {
        0.5 * (k * k - eps * eps)
    })
}

/// Complex amplitude sampled on a momentum grid, stored as
/// phi(k) = sqrt(|k|) * psi(k) with the grid's dk/k weights.
#[derive(Debug, Clone)]
pub struct SpectralState {
    grid: Arc<MomentumGrid>,
    phi: Vec<Complex64>,
    time: f64,
    params: Params,
    label: String,
}

impl SpectralState {
    pub(crate) fn new(
        grid: Arc<MomentumGrid>,
        phi: Vec<Complex64>,
        params: Params,
        label: String,
    ) -> Self {
        debug_assert_eq!(grid.len(), phi.len());
        SpectralState { grid, phi, time: 0.0, params, label }
    }

    pub fn grid(&self) -> &Arc<MomentumGrid> {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.phi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phi.is_empty()
    }

    pub fn phi(&self, i: usize) -> Complex64 {
        self.phi[i]
    }

    pub(crate) fn phi_mut(&mut self) -> &mut [Complex64] {
        &mut self.phi
    }

    /// Raw amplitude psi(k_i) = phi_i / sqrt(k_i). Overflows where sqrt(k)
    /// has underflowed (deep log tail at extreme regulator settings); every
    /// integral in the crate goes through phi instead.
    pub fn psi(&self, i: usize) -> Complex64 {
        self.phi[i] / self.grid.sqrt_k(i)
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub(crate) fn set_time(&mut self, t: f64) {
        self.time = t;
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Discrete norm squared: sum_i mu_i |phi_i|^2 = int dk |psi|^2.
    pub fn norm_sqr(&self) -> f64 {
        let mut acc = Compensated::default();
        for i in 0..self.len() {
            acc.add(self.grid.mu(i) * self.phi[i].norm_sqr());
        }
        acc.total()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Same state scaled to unit discrete norm.
    pub fn unit_normalized(&self) -> SpectralState {
        let n = self.norm();
        let mut out = self.clone();
        if n > 0.0 {
            for a in out.phi.iter_mut() {
                *a /= n;
            }
        }
        out.label = format!("{} (unit)", self.label);
        out
    }

    pub fn scaled(&self, factor: Complex64) -> SpectralState {
        let mut out = self.clone();
        for a in out.phi.iter_mut() {
            *a *= factor;
        }
        out
    }
}

/// sum_i mu_i obs(k_i) |phi_i|^2, compensated, fixed node order. The
/// observable must accept k = 0.0 for nodes whose momentum underflowed.
pub fn integrate_observable(state: &SpectralState, obs: impl Fn(f64) -> f64) -> f64 {
    let g = state.grid();
    let mut acc = Compensated::default();
    for i in 0..state.len() {
        let o = obs(g.k(i));
        acc.add(g.mu(i) * o * state.phi(i).norm_sqr());
    }
    acc.total()
}

fn check_grid(p: &Params, grid: &Arc<MomentumGrid>) -> Result<()> {
    p.validate()?;
    if grid.epsilon() != p.epsilon || grid.mass() != p.mass || grid.spread() != p.spread {
        return Err(ToaError::InvalidParameter {
            name: "grid",
            detail: "grid was built for different physical parameters".into(),
        });
    }
    if grid.mirrored() != (p.branch == Branch::Minus) {
        return Err(ToaError::InvalidParameter {
            name: "grid",
            detail: "grid mirror flag does not match the branch".into(),
        });
    }
    Ok(())
}

fn branch_factor(p: &Params) -> Complex64 {
    // alpha = theta(k) + i theta(-k): the mirrored branch carries a factor i
    match p.branch {
        Branch::Plus => Complex64::new(1.0, 0.0),
        Branch::Minus => Complex64::new(0.0, 1.0),
    }
}

/// sqrt(|k|/f_eps) at a log-segment node, from the native coordinate
/// u = ln(eps/|k|); exact cancellation of the 1/sqrt(k) divergence.
fn sqrt_k_over_f_log(u: f64, p: &Params) -> f64 {
    match p.kind {
        RegKind::Grt => p.epsilon,
        RegKind::Power { exponent } => p.epsilon * (0.5 * exponent * u).exp(),
    }
}

/// Modified-operator eigenstate: psi = (2 pi m f_eps)^(-1/2) e^{i tA z / m}
/// on the support selected by the split tag. The shared k = eps node belongs
/// to the o-piece.
pub fn eigenstate_modified(
    desc: EigenstateDescriptor,
    p: &Params,
    grid: &Arc<MomentumGrid>,
) -> Result<SpectralState> {
    check_grid(p, grid)?;
    let pref = branch_factor(p) / (2.0 * PI * p.mass).sqrt();
    let ta = desc.arrival_time;
    let b = grid.boundary();
    let mut phi = vec![Complex64::new(0.0, 0.0); grid.len()];
    for i in 0..grid.len() {
        let below = i < b;
        let keep = match desc.split {
            SplitTag::Full => true,
            SplitTag::OPiece => !below,
            SplitTag::EpsPiece => below,
        };
        if !keep {
            continue;
        }
        let (amp, z) = if i <= b {
            let u = grid.native(i);
            (sqrt_k_over_f_log(u, p), -p.epsilon * p.epsilon * u)
        } else {
            let v = grid.native(i);
            (v.sqrt(), 0.5 * (v - p.epsilon * p.epsilon))
        };
        phi[i] = pref * amp * Complex64::new(0.0, ta * z / p.mass).exp();
    }
    Ok(SpectralState::new(
        grid.clone(),
        phi,
        *p,
        format!("eigenstate tA={ta} {} branch {}", desc.split, p.branch),
    ))
}

/// Unregularized eigenstate alpha sqrt(k) e^{i tA k^2 / 2m} / sqrt(2 pi m);
/// diagnostic only (defect and overlap studies).
pub fn eigenstate_unmodified(
    arrival_time: f64,
    p: &Params,
    grid: &Arc<MomentumGrid>,
) -> Result<SpectralState> {
    check_grid(p, grid)?;
    let pref = branch_factor(p) / (2.0 * PI * p.mass).sqrt();
    let mut phi = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let ksq = grid.k_sq(i);
        let phase = Complex64::new(0.0, arrival_time * ksq / (2.0 * p.mass)).exp();
        phi.push(pref * grid.k(i) * phase);
    }
    Ok(SpectralState::new(
        grid.clone(),
        phi,
        *p,
        format!("unmodified eigenstate tA={arrival_time} branch {}", p.branch),
    ))
}

/// Coherent superposition of modified eigenstates with Gaussian arrival-time
/// weight centered at tau: the arrival-time integral is done analytically via
/// the Gaussian kernel, so
/// psi(k) = N spread sqrt(pi) (2 pi m f_eps)^(-1/2) e^{i tau z/m}
///          e^{-z^2 spread^2 / 4 m^2}.
pub fn coherent_amplitude(p: &Params, grid: &Arc<MomentumGrid>) -> Result<SpectralState> {
    check_grid(p, grid)?;
    let pref = branch_factor(p) * p.norm_const() / (2.0 * PI * p.mass).sqrt();
    let m = p.mass;
    let b = grid.boundary();
    let mut phi = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let (amp, z) = if i <= b {
            let u = grid.native(i);
            (sqrt_k_over_f_log(u, p), -p.epsilon * p.epsilon * u)
        } else {
            let v = grid.native(i);
            (v.sqrt(), 0.5 * (v - p.epsilon * p.epsilon))
        };
        let kernel = gaussian_time_kernel(z / m, p.spread);
        let phase = Complex64::new(0.0, p.tau * z / m).exp();
        phi.push(pref * amp * kernel * phase);
    }
    Ok(SpectralState::new(
        grid.clone(),
        phi,
        *p,
        format!("coherent tau={} branch {}", p.tau, p.branch),
    ))
}

/// Coherent superposition of unregularized eigenstates (the regulator-free
/// limit object); diagnostic for overlap tails and closed-form checks.
pub fn coherent_amplitude_unmodified(
    p: &Params,
    grid: &Arc<MomentumGrid>,
) -> Result<SpectralState> {
    check_grid(p, grid)?;
    let pref = branch_factor(p) * p.norm_const() / (2.0 * PI * p.mass).sqrt();
    let m = p.mass;
    let mut phi = Vec::with_capacity(grid.len());
    for i in 0..grid.len() {
        let ksq = grid.k_sq(i);
        let z = 0.5 * ksq;
        let kernel = gaussian_time_kernel(z / m, p.spread);
        let phase = Complex64::new(0.0, p.tau * z / m).exp();
        phi.push(pref * grid.k(i) * kernel * phase);
    }
    Ok(SpectralState::new(
        grid.clone(),
        phi,
        *p,
        format!("unmodified coherent tau={} branch {}", p.tau, p.branch),
    ))
}
