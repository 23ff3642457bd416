use std::f64::consts::PI;

use num_complex::Complex64;

use super::{ModularParameter, I};
use crate::error::{Error, Result};
use crate::integrate::{integrate_interval, QuadratureConfig};

/// Trapezoid rule for `ln Φ_b` on the line `Im w = ε`, halfway between the
/// triple pole at the origin and the first pole `iπ min(b,1/b)`.
///
/// For `Re z ≤ 0`, `|Im z| ≤ min(b,1/b)/2` the integrand is analytic and
/// bounded in a strip of half-width `0.8ε` around that line, so the rule
/// converges like `exp(−2π·0.8ε/h)`; with `h = 2π·0.8ε/42` the discretization
/// and truncation errors both sit near `e^{−42}`.
#[derive(Debug, Clone)]
pub struct FaddeevTable {
    b: f64,
    b_small: f64,
    b_large: f64,
    eps: f64,
    h: f64,
    n: usize,
    /// weights for nodes `(k−n)h + iε`, `k = 0..=2n`
    weights: Vec<Complex64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Singular {
    Pole(Complex64),
    Zero(Complex64),
}

const SING_TOL: f64 = 1e-13;

/// `ln(1 + e^w)` on a branch continuous in `w` away from the zeros.
fn ln1p_exp(w: Complex64) -> Complex64 {
    if w.re > 0.0 {
        w + (1.0 + (-w).exp()).ln()
    } else {
        (1.0 + w.exp()).ln()
    }
}

impl FaddeevTable {
    pub fn new(b: f64) -> Self {
        let b_small = b.min(1.0 / b);
        let b_large = 1.0 / b_small;
        let eps = PI * b_small / 2.0;
        let d = 0.8 * eps;
        let h = 2.0 * PI * d / 42.0;
        let t_max = 42.0 * b_small;
        let n = (t_max / h).ceil() as usize;
        let weights = (0..=2 * n)
            .map(|k| {
                let w = Complex64::new((k as f64 - n as f64) * h, eps);
                h / (4.0 * (b * w).sinh() * (w / b).sinh() * w)
            })
            .collect();
        Self { b, b_small, b_large, eps, h, n, weights }
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn nodes(&self) -> usize {
        self.weights.len()
    }

    fn ln_core(&self, z: Complex64) -> Complex64 {
        let r = (-2.0 * I * z * self.h).exp();
        let r_inv = 1.0 / r;
        let n = self.n;
        let mut acc = self.weights[n];
        let mut up = Complex64::new(1.0, 0.0);
        let mut down = Complex64::new(1.0, 0.0);
        for j in 1..=n {
            up *= r;
            down *= r_inv;
            acc += self.weights[n + j] * up + self.weights[n - j] * down;
        }
        (2.0 * z * self.eps).exp() * acc
    }

    /// `ln Φ_b(z)` on a branch built from the functional equations.
    pub(crate) fn ln_phi(&self, z: Complex64) -> std::result::Result<Complex64, Singular> {
        let z0 = z;
        let mut z = z;
        let mut acc = Complex64::new(0.0, 0.0);
        for period in [self.b_large, self.b_small] {
            while z.im > period / 2.0 {
                let w = 2.0 * PI * period * (z - I * period / 2.0);
                if (1.0 + w.exp()).norm() < SING_TOL {
                    return Err(Singular::Pole(z0));
                }
                acc -= ln1p_exp(w);
                z -= I * period;
            }
            while z.im < -period / 2.0 {
                let w = 2.0 * PI * period * (z + I * period / 2.0);
                if (1.0 + w.exp()).norm() < SING_TOL {
                    return Err(Singular::Zero(z0));
                }
                acc += ln1p_exp(w);
                z += I * period;
            }
        }
        if z.re > 0.0 {
            let ln_zinv =
                Complex64::new(0.0, -PI * (self.b * self.b + 1.0 / (self.b * self.b)) / 12.0);
            Ok(acc + I * PI * z * z - ln_zinv - self.ln_core(-z))
        } else {
            Ok(acc + self.ln_core(z))
        }
    }
}

/// Faddeev's quantum dilogarithm `Φ_b(z)`.
///
/// Poles sit at `c_b + i m b + i n/b` and zeros at `−c_b − i m b − i n/b`
/// (`m, n ≥ 0`) for the integral representation over `ℝ + i0`.
pub fn phi_b(z: Complex64, mp: &ModularParameter) -> Result<Complex64> {
    match mp.table().ln_phi(z) {
        Ok(l) => Ok(l.exp()),
        Err(Singular::Zero(_)) => Ok(Complex64::new(0.0, 0.0)),
        Err(Singular::Pole(p)) => Err(Error::pole(p)),
    }
}

/// `Φ_b(z)` from the defining integral along the real axis with a semicircular
/// indentation of radius `δ = 10⁻² min(b,1/b)` above the origin, each piece by
/// adaptive Gauss–Kronrod. Arguments outside `|Im z| ≤ min(b,1/b)/2` are first
/// moved there by the functional equations. Slow; used as a cross-check.
pub fn phi_b_contour(z: Complex64, mp: &ModularParameter, cfg: &QuadratureConfig) -> Result<Complex64> {
    let b = mp.b;
    let bs = b.min(1.0 / b);
    let mut z = z;
    let mut factor = Complex64::new(1.0, 0.0);
    while z.im > bs / 2.0 {
        let d = 1.0 + (2.0 * PI * bs * (z - I * bs / 2.0)).exp();
        if d.norm() < SING_TOL {
            return Err(Error::pole(z));
        }
        factor /= d;
        z -= I * bs;
    }
    while z.im < -bs / 2.0 {
        factor *= 1.0 + (2.0 * PI * bs * (z + I * bs / 2.0)).exp();
        z += I * bs;
    }
    let f = |w: Complex64| (-2.0 * I * z * w).exp() / (4.0 * (b * w).sinh() * (w / b).sinh() * w);
    let radius = 1e-2 * bs;
    let rate = mp.q - 2.0 * z.im.abs();
    let tail_tol = cfg.abs_tol / 10.0;
    let cutoff = ((1.0 / (tail_tol * rate)).ln() / rate).max(4.0) + 1.0;
    let line = |t: f64| f(Complex64::new(t, 0.0));
    let right = integrate_interval(&line, radius, cutoff, cfg)?;
    let left = integrate_interval(&line, -cutoff, -radius, cfg)?;
    let arc = integrate_interval(
        &|theta: f64| {
            let e = Complex64::from_polar(radius, theta);
            -f(e) * I * e
        },
        0.0,
        PI,
        cfg,
    )?;
    Ok(factor * (right.value + left.value + arc.value).exp())
}
