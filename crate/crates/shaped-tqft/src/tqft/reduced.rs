//! Reduced forms of the knot state integrals and their closed forms.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::integrate::{integrate_line_try, IntegralResult, QuadratureConfig};
use crate::special_fn::{ln_phi_b, ModularParameter};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `ln(∏Φ(num) / ∏Φ(den))`, `None` when a numerator factor vanishes.
fn ln_ratio(num: &[Complex64], den: &[Complex64], mp: &ModularParameter) -> Result<Option<Complex64>> {
    let mut ln = Complex64::new(0.0, 0.0);
    for z in den {
        match ln_phi_b(*z, mp)? {
            Some(l) => ln -= l,
            None => return Err(Error::pole(*z)),
        }
    }
    for z in num {
        match ln_phi_b(*z, mp)? {
            Some(l) => ln += l,
            None => return Ok(None),
        }
    }
    Ok(Some(ln))
}

fn exp_or_zero(ln: Option<Complex64>) -> Complex64 {
    ln.map_or(Complex64::new(0.0, 0.0), |l| l.exp())
}

fn inner(cfg: &QuadratureConfig) -> QuadratureConfig {
    QuadratureConfig { abs_tol: cfg.abs_tol * 0.1, rel_tol: cfg.rel_tol * 0.1, ..cfg.clone() }
}

/// `∫_ℝ² f` as nested line integrals.
fn plane<F>(f: &F, cfg: &QuadratureConfig) -> Result<IntegralResult>
where
    F: Fn(f64, f64) -> Result<Complex64>,
{
    let icfg = inner(cfg);
    let evals = std::cell::Cell::new(0);
    let worst = std::cell::Cell::new(0.0f64);
    let outer = |x: f64| -> Result<Complex64> {
        let r = integrate_line_try(&|y: f64| f(x, y), &icfg)?;
        evals.set(evals.get() + r.evaluations);
        worst.set(worst.get().max(r.error_estimate));
        Ok(r.value)
    };
    let mut r = integrate_line_try(&outer, cfg)?;
    r.evaluations += evals.get();
    r.error_estimate += worst.get() * 20.0;
    Ok(r)
}

fn check_angles(angles: &[f64]) -> Result<()> {
    for a in angles {
        if !(*a > 0.0 && *a < PI) {
            return Err(Error::ShapeViolation(format!("angle {a} outside (0, π)")));
        }
    }
    Ok(())
}

/// `2|Φ_b(u(α₁))|² · |∫_{ℝ−iδ} Φ_b(−z)/Φ_b(z) dz|²`.
pub fn figure_eight_closed_form(alpha1: f64, mp: &ModularParameter, cfg: &QuadratureConfig) -> Result<IntegralResult> {
    check_angles(&[alpha1])?;
    let delta = cfg.contour_shift.max(0.05) * mp.c_b.im.abs();
    let f = |x: f64| -> Result<Complex64> {
        let z = Complex64::new(x, -delta);
        Ok(exp_or_zero(ln_ratio(&[-z], &[z], mp)?))
    };
    let j = integrate_line_try(&f, cfg)?;
    let k = super::knot_factor(alpha1, mp)?;
    let n = j.value.norm();
    Ok(IntegralResult {
        value: Complex64::new(k * n * n, 0.0),
        error_estimate: k * 2.0 * n * j.error_estimate,
        evaluations: j.evaluations,
        method: j.method,
    })
}

/// `|∫_ℝ Φ_b(u(β₁)−z)/Φ_b(−u(β₁)+z) dz|²`, the figure-eight integral with
/// `β = γ` once the knot factor is split off.
pub fn figure_eight_reduced(beta1: f64, mp: &ModularParameter, cfg: &QuadratureConfig) -> Result<IntegralResult> {
    check_angles(&[beta1])?;
    let u = mp.u(beta1);
    let f = |z: f64| -> Result<Complex64> { Ok(exp_or_zero(ln_ratio(&[u - z], &[-u + z], mp)?)) };
    let j = integrate_line_try(&f, cfg)?;
    let n = j.value.norm();
    Ok(IntegralResult {
        value: Complex64::new(n * n, 0.0),
        error_estimate: 2.0 * n * j.error_estimate,
        evaluations: j.evaluations,
        method: j.method,
    })
}

/// `∫∫ f(x₁) g(x₂) dx₁ dx₂` for the 5₂ knot with angle pairs of `T₁, T₂, T₃`
/// and `γ₃ = π − γ₁ − γ₂`, `K = β₂ − γ₂ + δ₂`:
///
/// `f(x) = e^{−iπx² − 2ic_bKx} Φ_b(u(β₁)+x)Φ_b(u(δ₁)+x) / Φ_b(−u(γ₃)−x)`,
/// `g(x) = e^{iπx² − 2ic_bKx} Φ_b(u(γ₃)−x) / (Φ_b(−u(β₁)+x)Φ_b(−u(δ₁)+x))`.
pub fn five_two_reduced(
    beta: [f64; 2],
    gamma: [f64; 2],
    delta: [f64; 2],
    mp: &ModularParameter,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    let gamma3 = PI - gamma[0] - gamma[1];
    check_angles(&[beta[0], beta[1], PI - beta[0] - beta[1], gamma[0], gamma[1], gamma3])?;
    check_angles(&[delta[0], delta[1], PI - delta[0] - delta[1]])?;
    let k = beta[1] - gamma[1] + delta[1];
    let (ub, ud, ug) = (mp.u(beta[0]), mp.u(delta[0]), mp.u(gamma3));
    let lin = -2.0 * I * mp.c_b * k;
    let f = |x: f64| -> Result<Complex64> {
        let ln = ln_ratio(&[ub + x, ud + x], &[-ug - x], mp)?;
        Ok(exp_or_zero(ln.map(|l| l - I * PI * x * x + lin * x)))
    };
    let g = |x: f64| -> Result<Complex64> {
        let ln = ln_ratio(&[ug - x], &[-ub + x, -ud + x], mp)?;
        Ok(exp_or_zero(ln.map(|l| l + I * PI * x * x + lin * x)))
    };
    plane(&|x1: f64, x2: f64| Ok(f(x1)? * g(x2)?), cfg)
}

/// `|∫_{ℝ−iδ} e^{iπy²} / Φ_b(y)³ dy|²`, the completely balanced 5₂ value.
pub fn five_two_balanced_closed_form(mp: &ModularParameter, cfg: &QuadratureConfig) -> Result<IntegralResult> {
    let delta = cfg.contour_shift.max(0.05) * mp.c_b.im.abs();
    let f = |x: f64| -> Result<Complex64> {
        let y = Complex64::new(x, -delta);
        match ln_phi_b(y, mp)? {
            Some(l) => Ok((I * PI * y * y - 3.0 * l).exp()),
            None => Err(Error::pole(y)),
        }
    };
    let j = integrate_line_try(&f, cfg)?;
    let n = j.value.norm();
    Ok(IntegralResult {
        value: Complex64::new(n * n, 0.0),
        error_estimate: 2.0 * n * j.error_estimate,
        evaluations: j.evaluations,
        method: j.method,
    })
}

/// First two angles of `T₂, T₃, T₄, T₅` in the 6₁ integral.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SixOneAngles {
    pub beta: [f64; 2],
    pub gamma: [f64; 2],
    pub delta: [f64; 2],
    pub rho: [f64; 2],
}

impl SixOneAngles {
    pub fn uniform(a: f64) -> Self {
        Self { beta: [a; 2], gamma: [a; 2], delta: [a; 2], rho: [a; 2] }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SixOneReduced {
    pub xz: IntegralResult,
    pub yw: IntegralResult,
    pub value: Complex64,
    pub error_estimate: f64,
}

/// The 6₁ integral split into its `(x, z)` and `(y, w)` factors, with
/// `A = β₁ − γ₁ − δ₁`, `B = ρ₁ + δ₁`, `δ₃ = π − δ₁ − δ₂`:
///
/// `Φ_b(u(β₂)+x)Φ_b(u(ρ₂)+z) / (Φ_b(−u(γ₂)−x)Φ_b(−u(δ₃)+z−x)) · e^{QAx + iπz² + QBz}`
/// and `Φ_b(u(γ₂)−y)Φ_b(u(δ₃)+w−y) / (Φ_b(−u(β₂)+y)Φ_b(−u(ρ₂)+w)) · e^{QAy − iπw² + QBw}`.
pub fn six_one_reduced(angles: &SixOneAngles, mp: &ModularParameter, cfg: &QuadratureConfig) -> Result<SixOneReduced> {
    let SixOneAngles { beta, gamma, delta, rho } = *angles;
    for p in [beta, gamma, delta, rho] {
        check_angles(&[p[0], p[1], PI - p[0] - p[1]])?;
    }
    let q = mp.q;
    let a = beta[0] - gamma[0] - delta[0];
    let bb = rho[0] + delta[0];
    let delta3 = PI - delta[0] - delta[1];
    let (ub, ug, ud, ur) = (mp.u(beta[1]), mp.u(gamma[1]), mp.u(delta3), mp.u(rho[1]));
    let xz = |x: f64, z: f64| -> Result<Complex64> {
        let ln = ln_ratio(&[ub + x, ur + z], &[-ug - x, -ud + z - x], mp)?;
        Ok(exp_or_zero(ln.map(|l| l + q * a * x + I * PI * z * z + q * bb * z)))
    };
    let yw = |y: f64, w: f64| -> Result<Complex64> {
        let ln = ln_ratio(&[ug - y, ud + w - y], &[-ub + y, -ur + w], mp)?;
        Ok(exp_or_zero(ln.map(|l| l + q * a * y - I * PI * w * w + q * bb * w)))
    };
    let r1 = plane(&xz, cfg)?;
    let r2 = plane(&yw, cfg)?;
    let value = r1.value * r2.value;
    let error_estimate = r1.error_estimate * r2.value.norm() + r2.error_estimate * r1.value.norm();
    Ok(SixOneReduced { xz: r1, yw: r2, value, error_estimate })
}
