//! Romberg-style quadrature: iterated-bisection trapezoid and
//! iterated-trisection midpoint, both Richardson-extrapolated in h^2.

use num_complex::Complex64;

/// Integration domain with declared tail behaviour for semi-infinite ranges.
#[derive(Debug, Clone, Copy)]
pub enum OracleDomain {
    Finite { a: f64, b: f64 },
    /// `[start, inf)`, integrand decaying at least like exp(-(k-start)/scale).
    ExpTail { start: f64, scale: f64 },
    /// `[start, inf)`, integrand decaying at least like exp(-((k-start)/scale)^2).
    GaussTail { start: f64, scale: f64 },
}

#[derive(Debug, Clone, Copy)]
pub struct OracleQuad {
    pub value: Complex64,
    /// Estimated absolute error from the last extrapolation step.
    pub err: f64,
    pub levels: usize,
    pub converged: bool,
}

const MAX_TRAP_LEVELS: usize = 22;
const MAX_MID_LEVELS: usize = 13; // 3^13 ~ 1.6e6 evaluations

fn richardson_step(rows: &mut Vec<Vec<Complex64>>, ratio: f64) -> (Complex64, f64) {
    // rows[k][0] holds the raw composite value at refinement level k; fill in
    // the extrapolation tableau row rows[k][1..=k].
    let k = rows.len() - 1;
    let mut pow = 1.0;
    for j in 1..=k {
        pow *= ratio; // error-reduction factor per level for an h^2 rule
        let up = rows[k][j - 1];
        let left = rows[k - 1][j - 1];
        let next = up + (up - left) / (pow - 1.0);
        rows[k].push(next);
    }
    let best = rows[k][k];
    let err = if k == 0 {
        f64::INFINITY
    } else {
        (rows[k][k] - rows[k - 1][k - 1]).norm()
    };
    (best, err)
}

/// Iterated-bisection trapezoid with Richardson extrapolation on a closed
/// interval. The integrand must be finite at both endpoints.
pub fn romberg_trapezoid<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> OracleQuad {
    assert!(b > a, "romberg_trapezoid: endpoints must be ordered");
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    let mut n: usize = 1;
    let mut trap = 0.5 * (b - a) * (f(a) + f(b));
    let mut best = trap;
    let mut err = f64::INFINITY;
    for level in 0..MAX_TRAP_LEVELS {
        if level > 0 {
            // add midpoints of the current panels
            let h = (b - a) / n as f64;
            let mut sum = Complex64::new(0.0, 0.0);
            for i in 0..n {
                sum += f(a + (i as f64 + 0.5) * h);
            }
            trap = 0.5 * trap + 0.5 * h * sum;
            n *= 2;
        }
        rows.push(vec![trap]);
        let (b_val, e) = richardson_step(&mut rows, 4.0);
        best = b_val;
        err = e;
        let scale = best.norm().max(1e-300);
        if level >= 4 && err <= rel_tol * scale {
            return OracleQuad { value: best, err, levels: level + 1, converged: true };
        }
    }
    OracleQuad { value: best, err, levels: MAX_TRAP_LEVELS, converged: false }
}

/// Iterated-trisection midpoint rule with Richardson extrapolation. Open at
/// both endpoints, so integrable endpoint singularities that have been
/// substituted away (or decay mapped from infinity) are safe.
pub fn romberg_midpoint<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> OracleQuad {
    assert!(b > a, "romberg_midpoint: endpoints must be ordered");
    let mut rows: Vec<Vec<Complex64>> = Vec::new();
    let mut n: usize = 1;
    let mut mid = (b - a) * f(0.5 * (a + b));
    let mut best = mid;
    let mut err = f64::INFINITY;
    for level in 0..MAX_MID_LEVELS {
        if level > 0 {
            // triple the panel count, reusing previous points
            let h = (b - a) / (3.0 * n as f64);
            let mut sum = Complex64::new(0.0, 0.0);
            for i in 0..n {
                let x0 = a + (3 * i) as f64 * h;
                sum += f(x0 + 0.5 * h) + f(x0 + 2.5 * h);
            }
            mid = mid / 3.0 + h * sum;
            n *= 3;
        }
        rows.push(vec![mid]);
        let (b_val, e) = richardson_step(&mut rows, 9.0);
        best = b_val;
        err = e;
        let scale = best.norm().max(1e-300);
        if level >= 3 && err <= rel_tol * scale {
            return OracleQuad { value: best, err, levels: level + 1, converged: true };
        }
    }
    OracleQuad { value: best, err, levels: MAX_MID_LEVELS, converged: false }
}

/// Integrate over a declared domain. `singular_exponent` declares that the
/// integrand behaves like (k-a)^alpha near the lower endpoint (alpha > -1);
/// the power substitution k = a + s^(1/(1+alpha)) removes it before the open
/// midpoint rule runs.
pub fn integrate<F: Fn(f64) -> Complex64>(
    f: F,
    domain: OracleDomain,
    rel_tol: f64,
    singular_exponent: Option<f64>,
) -> OracleQuad {
    match domain {
        OracleDomain::Finite { a, b } => match singular_exponent {
            None => romberg_midpoint(f, a, b, rel_tol),
            Some(alpha) => {
                assert!(alpha > -1.0, "non-integrable endpoint singularity");
                let c = 1.0 / (1.0 + alpha);
                let s_max = (b - a).powf(1.0 / c);
                romberg_midpoint(
                    |s| {
                        let k = a + s.powf(c);
                        f(k) * c * s.powf(c - 1.0)
                    },
                    0.0,
                    s_max,
                    rel_tol,
                )
            }
        },
        // Both tail kinds use the algebraic map k = start + scale*s/(1-s):
        // exponential or Gaussian decay beats the 1/(1-s)^2 Jacobian with an
        // essential zero at s = 1, which keeps the h^2 error expansion clean.
        OracleDomain::ExpTail { start, scale } | OracleDomain::GaussTail { start, scale } => {
            let g = |s: f64| {
                let om = 1.0 - s;
                let k = start + scale * s / om;
                f(k) * scale / (om * om)
            };
            match singular_exponent {
                None => romberg_midpoint(g, 0.0, 1.0, rel_tol),
                Some(alpha) => {
                    // near s = 0 the map is linear, so the power substitution
                    // composes with it
                    assert!(alpha > -1.0);
                    let c = 1.0 / (1.0 + alpha);
                    romberg_midpoint(
                        |t| {
                            let s = t.powf(c);
                            let om = 1.0 - s;
                            let k = start + scale * s / om;
                            f(k) * scale / (om * om) * c * t.powf(c - 1.0)
                        },
                        0.0,
                        1.0,
                        rel_tol,
                    )
                }
            }
        }
    }
}
