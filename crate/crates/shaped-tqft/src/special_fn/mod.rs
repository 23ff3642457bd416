//! Special functions: Faddeev's quantum dilogarithm, the hyperbolic gamma
//! function and its relatives, the elliptic gamma function, and the classical
//! gamma/beta/Lobachevsky functions.

mod classical;
mod elliptic;
mod faddeev;
mod hyperbolic;

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use classical::{
    classical_beta, ln_gamma, lobachevsky, lobachevsky_derivative, lobachevsky_quadrature,
};
pub use elliptic::{elliptic_gamma, pochhammer, theta_fn, EllipticBases};
pub use faddeev::{phi_b, phi_b_contour, FaddeevTable};
pub use hyperbolic::{
    bernoulli_b22, cap_psi, cap_psi_direct, gamma2_product, hyper_b, hyper_b_ratio,
    hyperbolic_gamma, ln_hyper_b, ln_hyperbolic_gamma, ln_phi_b, psi_fn, recip_hyperbolic_gamma,
};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// The coupling `b` with the constants derived from it.
///
/// Periods are normalized to `ω₁ = b`, `ω₂ = 1/b`, so `√(ω₁ω₂) = 1`.
#[derive(Clone)]
pub struct ModularParameter {
    pub b: f64,
    /// `Q = b + 1/b`
    pub q: f64,
    pub c_b: Complex64,
    pub zeta_inv: Complex64,
    pub zeta_o: Complex64,
    table: Arc<FaddeevTable>,
}

impl fmt::Debug for ModularParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ModularParameter").field("b", &self.b).finish()
    }
}

impl PartialEq for ModularParameter {
    fn eq(&self, other: &Self) -> bool {
        self.b == other.b
    }
}

impl ModularParameter {
    pub fn new(b: f64) -> Result<Self> {
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::InvalidParameter(format!("b must be positive, got {b}")));
        }
        let q = b + 1.0 / b;
        let c_b = Complex64::new(0.0, q / 2.0);
        let zeta_inv = (I * PI * (1.0 + 2.0 * c_b * c_b) / 6.0).exp();
        let zeta_o = (I * PI * (1.0 - 4.0 * c_b * c_b) / 12.0).exp();
        Ok(Self { b, q, c_b, zeta_inv, zeta_o, table: Arc::new(FaddeevTable::new(b)) })
    }

    pub fn omega1(&self) -> f64 {
        self.b
    }

    pub fn omega2(&self) -> f64 {
        1.0 / self.b
    }

    /// `Δ = (ω₁+ω₂)/π`
    pub fn delta(&self) -> f64 {
        self.q / PI
    }

    /// `∇ = √(ω₁ω₂)`, identically one in this normalization.
    pub fn nabla(&self) -> f64 {
        1.0
    }

    /// `u(x) = c_b (1 − x/π)`
    pub fn u(&self, angle: f64) -> Complex64 {
        self.c_b * (1.0 - angle / PI)
    }

    /// A logarithm of `ζ_inv` continuous in `b`: `−iπ(b²+b⁻²)/12`.
    pub fn ln_zeta_inv(&self) -> Complex64 {
        Complex64::new(0.0, -PI * (self.b * self.b + 1.0 / (self.b * self.b)) / 12.0)
    }

    /// The square root of `ζ_inv` entering the γ⁽²⁾–Φ_b relation.
    pub fn sqrt_zeta_inv(&self) -> Complex64 {
        (0.5 * self.ln_zeta_inv()).exp()
    }

    pub fn table(&self) -> &FaddeevTable {
        &self.table
    }
}
