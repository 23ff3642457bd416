use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MAX_TERMS: usize = 100_000;

/// Elliptic nome pair `(p, q)`, both strictly inside the unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EllipticBases {
    pub p: Complex64,
    pub q: Complex64,
}

impl EllipticBases {
    pub fn new(p: Complex64, q: Complex64) -> Result<Self> {
        if p.norm() >= 1.0 || q.norm() >= 1.0 {
            return Err(Error::NonConvergence(format!(
                "elliptic bases need |p|, |q| < 1 (got {}, {})",
                p.norm(),
                q.norm()
            )));
        }
        Ok(Self { p, q })
    }

    pub fn real(p: f64, q: f64) -> Result<Self> {
        Self::new(Complex64::new(p, 0.0), Complex64::new(q, 0.0))
    }
}

/// `(x; q)_∞ = ∏_{k≥0} (1 − x q^k)`, truncated once `|x q^k| < tol`.
pub fn pochhammer(x: Complex64, q: Complex64, tol: f64) -> Result<Complex64> {
    let r = q.norm();
    if r >= 1.0 {
        return Err(Error::NonConvergence(format!("|q| = {r} >= 1")));
    }
    let mut acc = Complex64::new(1.0, 0.0);
    let mut term = x;
    for _ in 0..MAX_TERMS {
        // remaining factors perturb the product by at most ~|term|/(1−r)
        if term.norm() < tol * (1.0 - r) {
            return Ok(acc);
        }
        acc *= 1.0 - term;
        term *= q;
    }
    Err(Error::NonConvergence(format!("q-Pochhammer symbol with |q| = {r} did not converge")))
}

/// `θ(z; p) = (z; p)_∞ (p/z; p)_∞`.
pub fn theta_fn(z: Complex64, p: Complex64, tol: f64) -> Result<Complex64> {
    if z.norm() == 0.0 {
        return Err(Error::pole(z));
    }
    Ok(pochhammer(z, p, tol)? * pochhammer(p / z, p, tol)?)
}

/// Elliptic gamma function
/// `Γ(z; p, q) = ∏_{i,j≥0} (1 − z⁻¹ p^{i+1} q^{j+1}) / (1 − z p^i q^j)`.
///
/// Factors are accumulated along anti-diagonals `i + j = n` until the bound on
/// `Σ_{i+j>n} |ln(1 − w)|` for the omitted terms drops below `tol`.
pub fn elliptic_gamma(z: Complex64, bases: EllipticBases, tol: f64) -> Result<Complex64> {
    let EllipticBases { p, q } = EllipticBases::new(bases.p, bases.q)?;
    if z.norm() == 0.0 {
        return Err(Error::pole(z));
    }
    let r = p.norm().max(q.norm());
    let zi = p * q / z;
    let scale = z.norm() + zi.norm();
    let mut ln_acc = Complex64::new(0.0, 0.0);
    let mut p_pow = vec![Complex64::new(1.0, 0.0)];
    let mut q_pow = vec![Complex64::new(1.0, 0.0)];
    for n in 0..MAX_TERMS {
        if n > 0 {
            p_pow.push(p_pow[n - 1] * p);
            q_pow.push(q_pow[n - 1] * q);
        }
        for j in 0..=n {
            let pq = p_pow[n - j] * q_pow[j];
            let d = 1.0 - z * pq;
            if d.norm() < 1e-14 {
                return Err(Error::pole(z));
            }
            ln_acc += (1.0 - zi * pq).ln() - d.ln();
        }
        let m = (n + 1) as f64;
        let head = scale * r.powf(m);
        // |ln(1−w)| ≤ 2|w| once |w| ≤ 1/2; Σ_{k≥m} (k+1) r^k ≤ r^m (m+1)/(1−r)²
        if head < 0.5 && 2.0 * head * (m + 1.0) / ((1.0 - r) * (1.0 - r)) < tol {
            return Ok(ln_acc.exp());
        }
    }
    Err(Error::NonConvergence("elliptic gamma product did not converge".into()))
}
