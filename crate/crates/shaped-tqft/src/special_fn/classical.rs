use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::integrate::{integrate_interval, QuadratureConfig};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re.fract() == 0.0
}

/// `ln Γ(z)` for complex `z` (Lanczos, g = 7), with reflection for `Re z < 1/2`.
/// The branch is the one continuous along rays from the right half-plane up to
/// multiples of `2πi`; only `exp` of it is ever used.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let s = (PI * z).sin();
        return Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma(1.0 - z);
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS[0], 0.0);
    for (k, c) in LANCZOS.iter().enumerate().skip(1) {
        x += *c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

/// Euler beta function `B(x, y) = Γ(x)Γ(y)/Γ(x+y)`.
pub fn classical_beta(x: Complex64, y: Complex64) -> Result<Complex64> {
    if is_nonpositive_integer(x) {
        return Err(Error::pole(x));
    }
    if is_nonpositive_integer(y) {
        return Err(Error::pole(y));
    }
    if is_nonpositive_integer(x + y) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok((ln_gamma(x) + ln_gamma(y) - ln_gamma(x + y)).exp())
}

fn zeta_even() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // ζ(2k) for k = 1..=80; exact values for the first three
        let mut t = vec![PI.powi(2) / 6.0, PI.powi(4) / 90.0, PI.powi(6) / 945.0];
        for k in 4..=80 {
            let s = 2 * k as i32;
            let mut acc = 0.0;
            let mut n = 2.0f64;
            loop {
                let term = n.powi(-s);
                acc += term;
                if term < 1e-18 {
                    break;
                }
                n += 1.0;
            }
            t.push(1.0 + acc);
        }
        t
    })
}

/// Lobachevsky function `Λ(θ) = −∫₀^θ ln|2 sin t| dt`.
///
/// Reduced to `(0, π/2]` by oddness and π-periodicity, then
/// `Λ(θ) = θ (1 − ln 2θ + Σ_k ζ(2k)/(k(2k+1)) (θ/π)^{2k})`, whose terms
/// shrink at least like `4^{−k}`.
pub fn lobachevsky(theta: f64, tol: f64) -> Result<f64> {
    if !theta.is_finite() {
        return Err(Error::NonConvergence(format!("Lobachevsky argument {theta}")));
    }
    let mut t = theta.rem_euclid(PI);
    let mut sign = 1.0;
    if t > PI / 2.0 {
        t = PI - t;
        sign = -1.0;
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    let x2 = (t / PI) * (t / PI);
    let mut pow = 1.0;
    let mut acc = 1.0 - (2.0 * t).ln();
    for (i, z) in zeta_even().iter().enumerate() {
        let k = (i + 1) as f64;
        pow *= x2;
        let term = z * pow / (k * (2.0 * k + 1.0));
        acc += term;
        // remaining terms form a geometric tail with ratio ≤ x2 ≤ 1/4
        if t * term * x2 / (1.0 - x2) < tol.max(f64::EPSILON * 1e-2) {
            return Ok(sign * t * acc);
        }
    }
    Err(Error::NonConvergence("Lobachevsky series did not reach tolerance".into()))
}

/// `Λ′(θ) = −ln|2 sin θ|`.
pub fn lobachevsky_derivative(theta: f64) -> f64 {
    -(2.0 * theta.sin()).abs().ln()
}

/// `Λ(θ)` by adaptive quadrature of its defining integral, with the logarithmic
/// endpoint singularities at 0 and π integrated in closed form.
pub fn lobachevsky_quadrature(theta: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let t = theta.rem_euclid(PI);
    if t == 0.0 {
        return Ok(0.0);
    }
    // ln|2 sin s| = ln s + ln(π−s) + ln(2 sin s / (s(π−s)))
    let smooth = |s: f64| {
        let v = if s == 0.0 {
            (2.0 / PI).ln()
        } else if s == PI {
            (2.0 / PI).ln()
        } else {
            (2.0 * s.sin() / (s * (PI - s))).ln()
        };
        Complex64::new(v, 0.0)
    };
    let xlogx = |x: f64| if x == 0.0 { 0.0 } else { x * x.ln() };
    let ln_s = xlogx(t) - t;
    let ln_pi_minus = (xlogx(PI) - PI) - (xlogx(PI - t) - (PI - t));
    let rest = integrate_interval(&smooth, 0.0, t, cfg)?.value.re;
    Ok(-(ln_s + ln_pi_minus + rest))
}
