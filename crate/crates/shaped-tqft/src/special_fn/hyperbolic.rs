use std::f64::consts::PI;

use num_complex::Complex64;

use super::elliptic::pochhammer;
use super::faddeev::Singular;
use super::{ModularParameter, I};
use crate::error::{Error, Result};
use crate::integrate::{integrate_1d, IntegralResult, QuadratureConfig};

/// Second order Bernoulli polynomial `B₂,₂(u; ω₁, ω₂)`.
pub fn bernoulli_b22(u: Complex64, w1: Complex64, w2: Complex64) -> Complex64 {
    u * u / (w1 * w2) - u / w1 - u / w2 + w1 / (6.0 * w2) + w2 / (6.0 * w1) + 0.5
}

enum LnGamma {
    Value(Complex64),
    /// γ⁽²⁾ vanishes here
    Zero,
}

fn ln_gamma_raw(u: Complex64, mp: &ModularParameter) -> Result<LnGamma> {
    let x = I * u - mp.c_b;
    match mp.table().ln_phi(x) {
        Ok(l) => Ok(LnGamma::Value(I * PI * x * x / 2.0 - 0.5 * mp.ln_zeta_inv() - l)),
        Err(Singular::Zero(_)) => Err(Error::pole(u)),
        Err(Singular::Pole(_)) => Ok(LnGamma::Zero),
    }
}

/// `ln γ⁽²⁾(u; b, 1/b)` on the branch inherited from `ln Φ_b`.
pub fn ln_hyperbolic_gamma(u: Complex64, mp: &ModularParameter) -> Result<Complex64> {
    match ln_gamma_raw(u, mp)? {
        LnGamma::Value(v) => Ok(v),
        LnGamma::Zero => Err(Error::pole(u)),
    }
}

/// Hyperbolic gamma function `γ⁽²⁾(u; ω₁, ω₂)` for real `b`, through
/// `γ⁽²⁾(−i(x + c_b)) = e^{iπx²/2} / (√ζ_inv Φ_b(x))`.
///
/// Poles at `u = −m b − n/b`, zeros at `u = Q + m b + n/b`.
pub fn hyperbolic_gamma(u: Complex64, mp: &ModularParameter) -> Result<Complex64> {
    Ok(match ln_gamma_raw(u, mp)? {
        LnGamma::Value(v) => v.exp(),
        LnGamma::Zero => Complex64::new(0.0, 0.0),
    })
}

/// `1/γ⁽²⁾(u)`, finite at the poles of γ⁽²⁾.
pub fn recip_hyperbolic_gamma(u: Complex64, mp: &ModularParameter) -> Result<Complex64> {
    let x = I * u - mp.c_b;
    match mp.table().ln_phi(x) {
        Ok(l) => Ok((-I * PI * x * x / 2.0 + 0.5 * mp.ln_zeta_inv() + l).exp()),
        Err(Singular::Zero(_)) => Ok(Complex64::new(0.0, 0.0)),
        Err(Singular::Pole(_)) => Err(Error::pole(u)),
    }
}

/// `ln ℬ(x, y)`; `None` when ℬ vanishes.
pub fn ln_hyper_b(x: Complex64, y: Complex64, mp: &ModularParameter) -> Result<Option<Complex64>> {
    let q = Complex64::new(mp.q, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut zero = false;
    for arg in [x, y, q - x - y] {
        match ln_gamma_raw(arg, mp)? {
            LnGamma::Value(v) => acc += v,
            LnGamma::Zero => zero = true,
        }
    }
    Ok(if zero { None } else { Some(acc) })
}

/// `ℬ(x, y) = γ⁽²⁾(x) γ⁽²⁾(y) γ⁽²⁾(ω₁+ω₂−x−y)`.
pub fn hyper_b(x: Complex64, y: Complex64, mp: &ModularParameter) -> Result<Complex64> {
    Ok(ln_hyper_b(x, y, mp)?.map_or(Complex64::new(0.0, 0.0), |l| l.exp()))
}

/// `ℬ(x, y)` in its other form, `γ⁽²⁾(x) γ⁽²⁾(y) / γ⁽²⁾(x+y)`.
pub fn hyper_b_ratio(x: Complex64, y: Complex64, mp: &ModularParameter) -> Result<Complex64> {
    Ok(hyperbolic_gamma(x, mp)? * hyperbolic_gamma(y, mp)? * recip_hyperbolic_gamma(x + y, mp)?)
}

/// `ln Φ_b(z)`; `None` at a zero of Φ_b.
pub fn ln_phi_b(z: Complex64, mp: &ModularParameter) -> Result<Option<Complex64>> {
    match mp.table().ln_phi(z) {
        Ok(l) => Ok(Some(l)),
        Err(Singular::Zero(_)) => Ok(None),
        Err(Singular::Pole(p)) => Err(Error::pole(p)),
    }
}

/// Closed form of `Ψ(u,v,w) = ∫_ℝ Φ_b(u+x)/Φ_b(v+x) e^{2πiwx} dx`:
/// `ζ_o Φ_b(u−v−c_b) Φ_b(w+c_b) / Φ_b(u−v+w−c_b) · e^{−2πiw(v+c_b)}`.
pub fn cap_psi(u: Complex64, v: Complex64, w: Complex64, mp: &ModularParameter) -> Result<Complex64> {
    let cb = mp.c_b;
    let ln_zeta_o = I * PI * (1.0 - 4.0 * cb * cb) / 12.0;
    let den = match ln_phi_b(u - v + w - cb, mp)? {
        Some(l) => l,
        None => return Err(Error::pole(u - v + w - cb)),
    };
    match (ln_phi_b(u - v - cb, mp)?, ln_phi_b(w + cb, mp)?) {
        (Some(a), Some(c)) => Ok((ln_zeta_o + a + c - den - 2.0 * PI * I * w * (v + cb)).exp()),
        _ => Ok(Complex64::new(0.0, 0.0)),
    }
}

/// `ψ(x, y) = Ψ(x, −x, y)`.
pub fn psi_fn(x: Complex64, y: Complex64, mp: &ModularParameter) -> Result<Complex64> {
    cap_psi(x, -x, y, mp)
}

/// `Ψ(u,v,w)` by direct quadrature of its defining Fourier integral. The
/// integral converges for `−Im(u−v) < Im w < 0`.
pub fn cap_psi_direct(
    u: Complex64,
    v: Complex64,
    w: Complex64,
    mp: &ModularParameter,
    cfg: &QuadratureConfig,
) -> Result<IntegralResult> {
    if !(w.im < 0.0 && w.im > -(u - v).im) {
        return Err(Error::InvalidParameter(format!(
            "Fourier integral diverges unless -Im(u-v) < Im w < 0 (Im w = {}, Im(u-v) = {})",
            w.im,
            (u - v).im
        )));
    }
    let f = |x: f64| {
        let num = ln_phi_b(u + x, mp);
        let den = ln_phi_b(v + x, mp);
        match (num, den) {
            (Ok(Some(a)), Ok(Some(d))) => (a - d + 2.0 * PI * I * w * x).exp(),
            _ => Complex64::new(0.0, 0.0),
        }
    };
    integrate_1d(&f, cfg)
}

/// `γ⁽²⁾(u; ω₁, ω₂)` from its q-product form. Needs `Im(ω₁/ω₂) > 0` so both
/// bases lie inside the unit disk; for real `b` use [`hyperbolic_gamma`].
pub fn gamma2_product(u: Complex64, w1: Complex64, w2: Complex64, tol: f64) -> Result<Complex64> {
    let tau = w1 / w2;
    if tau.im <= 0.0 {
        return Err(Error::NonConvergence(format!("Im(ω₁/ω₂) = {} must be positive", tau.im)));
    }
    let q = (2.0 * PI * I * tau).exp();
    let qt = (-2.0 * PI * I * w2 / w1).exp();
    let num = pochhammer((2.0 * PI * I * u / w1).exp() * qt, qt, tol)?;
    let den = pochhammer((2.0 * PI * I * u / w2).exp(), q, tol)?;
    if den.norm() == 0.0 {
        return Err(Error::pole(u));
    }
    Ok((-I * PI * bernoulli_b22(u, w1, w2) / 2.0).exp() * num / den)
}
