//! Versioned fixture file minted by the oracle and consumed by the test
//! suites. Regeneration is deterministic; values that drift by more than ten
//! times their recorded error refuse to overwrite without `force`.

use crate::physics::{self, OracleParams};
use crate::special;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;
use std::fmt;
use std::path::Path;

pub const SPEC_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Fixture {
    pub name: String,
    pub params: serde_json::Value,
    pub value_re: f64,
    pub value_im: f64,
    pub err: f64,
    pub algo: String,
    pub spec_version: u32,
}

impl Fixture {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.value_re, self.value_im)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FixtureFile {
    pub spec_version: u32,
    pub fixtures: Vec<Fixture>,
}

impl FixtureFile {
    pub fn get(&self, name: &str) -> Option<&Fixture> {
        self.fixtures.iter().find(|f| f.name == name)
    }

    pub fn require(&self, name: &str) -> &Fixture {
        self.get(name)
            .unwrap_or_else(|| panic!("fixture {name} missing; regenerate with `toa fixtures --generate`"))
    }
}

#[derive(Debug)]
pub enum FixtureError {
    Io(std::io::Error),
    Format(serde_json::Error),
    /// Freshly computed values moved too far from the recorded ones.
    Drift(Vec<String>),
}

impl fmt::Display for FixtureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FixtureError::Io(e) => write!(f, "fixture io error: {e}"),
            FixtureError::Format(e) => write!(f, "fixture format error: {e}"),
            FixtureError::Drift(names) => write!(
                f,
                "fixtures moved by more than 10x their recorded error: {} (pass --force to regenerate)",
                names.join(", ")
            ),
        }
    }
}

impl std::error::Error for FixtureError {}

fn fx(name: &str, params: serde_json::Value, v: Complex64, err: f64, algo: &str) -> Fixture {
    Fixture {
        name: name.to_string(),
        params,
        value_re: v.re,
        value_im: v.im,
        err: err.max(1e-15 * v.norm()).max(1e-300),
        algo: algo.to_string(),
        spec_version: SPEC_VERSION,
    }
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Mint the full fixture set. Deterministic: fixed schedules, no RNG.
pub fn generate() -> FixtureFile {
    let mut out = Vec::new();

    // special-function anchors
    out.push(fx(
        "phi_1",
        json!({"z_re": 1.0, "z_im": 0.0}),
        special::erf_oracle(Complex64::new(1.0, 0.0)),
        1e-13,
        "romberg-contour",
    ));
    out.push(fx(
        "pcf_m34_z0",
        json!({"p": -0.75, "z_re": 0.0, "z_im": 0.0}),
        special::pcf_oracle(-0.75, Complex64::new(0.0, 0.0)),
        1e-11,
        "romberg-defining-integral",
    ));
    out.push(fx(
        "lower_gamma_half_2",
        json!({"s": 0.5, "z_re": 2.0, "z_im": 0.0}),
        special::lower_gamma_oracle(Complex64::new(0.5, 0.0), Complex64::new(2.0, 0.0)),
        1e-12,
        "romberg-split-contour",
    ));

    // norm split for the piecewise regularizer
    for sp in [1e-1f64, 1e-2, 1e-4] {
        let p = OracleParams { mass: 1.0, epsilon: sp.sqrt(), spread: 1.0 };
        out.push(fx(
            &format!("split_fraction_grt_sp{sp}"),
            json!({"mass": 1.0, "spread": 1.0, "epsilon": p.epsilon, "small_parameter": sp}),
            real(physics::split_fraction(&p)),
            1e-10,
            "romberg-sector-integrals",
        ));
    }

    // energy-spread dimensionless constant, small-parameter regime
    let pe = OracleParams { mass: 1.0, epsilon: 1e-3, spread: 1.0 };
    out.push(fx(
        "energy_spread_product",
        json!({"mass": 1.0, "spread": 1.0, "epsilon": 1e-3}),
        real(physics::energy_spread_product(&pe)),
        1e-9,
        "romberg-moment-integrals",
    ));

    // coherent overlap ratios at s / spread in {0.5, 1, 2}
    let po = OracleParams { mass: 1.0, epsilon: 0.1, spread: 1.0 };
    for s in [0.5, 1.0, 2.0] {
        out.push(fx(
            &format!("overlap_gauss_s{s}"),
            json!({"mass": 1.0, "spread": 1.0, "separation_over_spread": s}),
            real(physics::overlap_ratio(&po, s)),
            1e-10,
            "romberg-phase-coordinate",
        ));
    }

    // low-piece coherent amplitude by brute-force double quadrature, eps*x = 1
    let pd = OracleParams { mass: 1.0, epsilon: 0.1, spread: 1.0 };
    out.push(fx(
        "eps_tau_x1",
        json!({"mass": 1.0, "spread": 1.0, "epsilon": 0.1, "x": 10.0}),
        physics::eps_piece_amp_double(&pd, 10.0),
        1e-8 * physics::eps_piece_amp_double(&pd, 10.0).norm(),
        "romberg-double",
    ));

    // regulator-free eigenstate low piece, eps*x = 1
    let pg = OracleParams { mass: 1.0, epsilon: 1.0, spread: 8.0 };
    out.push(fx(
        "gex_x1",
        json!({"mass": 1.0, "epsilon": 1.0, "x": 1.0}),
        physics::gex_amp(&pg, 1.0),
        1e-9 * physics::gex_amp(&pg, 1.0).norm(),
        "romberg-log-substitution",
    ));

    // arrival-window capture at half-width 10 sqrt(spread/mass)
    let pw = OracleParams { mass: 1.0, epsilon: 0.1, spread: 1.0 };
    let (cap_o, cap_full) = physics::window_capture(&pw, 10.0);
    out.push(fx(
        "window_capture_opiece",
        json!({"mass": 1.0, "spread": 1.0, "epsilon": 0.1, "half_width": 10.0}),
        real(cap_o),
        1e-6,
        "romberg-double",
    ));
    out.push(fx(
        "window_capture_full",
        json!({"mass": 1.0, "spread": 1.0, "epsilon": 0.1, "half_width": 10.0}),
        real(cap_full),
        1e-6,
        "romberg-double",
    ));

    // spectral envelope peak location (similarity units)
    let pk = OracleParams { mass: 1.0, epsilon: 0.1, spread: 10.0 };
    out.push(fx(
        "kstar_similarity",
        json!({"definition": "argmax sqrt(k) exp(-k^4 spread^2/16 m^2), times sqrt(spread/mass)"}),
        real(physics::envelope_peak_similarity(&pk)),
        1e-6,
        "golden-scan",
    ));

    // power-law low-sector growth, delta_exp = 0.2
    for sp in [0.4f64, 0.2, 0.1, 0.05] {
        let p = OracleParams { mass: 1.0, epsilon: sp.sqrt(), spread: 1.0 };
        out.push(fx(
            &format!("powerlaw_ratio_sp{sp}"),
            json!({"mass": 1.0, "spread": 1.0, "epsilon": p.epsilon, "delta_exp": 0.2}),
            real(physics::power_ratio(&p, 0.2)),
            1e-8 * physics::power_ratio(&p, 0.2),
            "romberg-sector-integrals",
        ));
    }

    // origin amplitude of the regulator-free high piece
    let pl = OracleParams { mass: 1.0, epsilon: 0.1, spread: 1.0 };
    out.push(fx(
        "otau_origin",
        json!({"mass": 1.0, "spread": 1.0}),
        physics::o_amp_origin_limit(&pl),
        1e-11,
        "romberg-gauss-tail",
    ));

    out.sort_by(|a, b| a.name.cmp(&b.name));
    FixtureFile { spec_version: SPEC_VERSION, fixtures: out }
}

pub fn load(path: &Path) -> Result<FixtureFile, FixtureError> {
    let text = std::fs::read_to_string(path).map_err(FixtureError::Io)?;
    serde_json::from_str(&text).map_err(FixtureError::Format)
}

/// Serialize deterministically (sorted fixtures, pretty two-space indent).
pub fn to_json(ff: &FixtureFile) -> String {
    let mut s = serde_json::to_string_pretty(ff).expect("fixture serialization");
    s.push('\n');
    s
}

/// Write the fixture file, refusing to overwrite entries whose value moved by
/// more than ten times the recorded error unless `force` is set.
pub fn write(path: &Path, fresh: &FixtureFile, force: bool) -> Result<(), FixtureError> {
    if !force {
        if let Ok(old) = load(path) {
            let mut moved = Vec::new();
            for f in &fresh.fixtures {
                if let Some(prev) = old.get(&f.name) {
                    let delta = (f.value() - prev.value()).norm();
                    if delta > 10.0 * prev.err {
                        moved.push(f.name.clone());
                    }
                }
            }
            if !moved.is_empty() {
                return Err(FixtureError::Drift(moved));
            }
        }
    }
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(FixtureError::Io)?;
    }
    std::fs::write(path, to_json(fresh)).map_err(FixtureError::Io)
}

/// Compare a freshly minted set against a stored file; names whose values
/// moved by more than ten times the stored error are returned.
pub fn check(path: &Path) -> Result<Vec<String>, FixtureError> {
    let stored = load(path)?;
    let fresh = generate();
    let mut moved = Vec::new();
    for f in &fresh.fixtures {
        match stored.get(&f.name) {
            Some(prev) => {
                if (f.value() - prev.value()).norm() > 10.0 * prev.err {
                    moved.push(f.name.clone());
                }
            }
            None => moved.push(format!("{} (missing)", f.name)),
        }
    }
    Ok(moved)
}
