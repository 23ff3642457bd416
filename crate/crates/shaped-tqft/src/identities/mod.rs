//! Numerical checks of the integral identities behind the state sum: the
//! hyperbolic and classical pentagons, the hyperbolic and elliptic beta
//! integrals, orthogonality of ℬ, hyperbolic Bailey pairs and the
//! octahedron duality, and the entropy pentagon.
//!
//! Contours `iℝ` are parametrized as `u = i·t`, so `du/(i√(ω₁ω₂)) = dt`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::integrate::{integrate_line_try, IntegralResult, QuadratureConfig};
use crate::special_fn::{
    classical_beta, elliptic_gamma, ln_gamma, ln_hyper_b, ln_hyperbolic_gamma, pochhammer,
    recip_hyperbolic_gamma, theta_fn, EllipticBases, ModularParameter,
};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
const BALANCE_TOL: f64 = 1e-14;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityReport {
    pub lhs: Complex64,
    pub rhs: Complex64,
    /// `|lhs − rhs| / |rhs|`
    pub residual: f64,
    /// quadrature error estimate relative to `|rhs|`
    pub error_estimate: f64,
}

impl IdentityReport {
    fn new(lhs: Complex64, rhs: Complex64, err: f64) -> Self {
        let n = rhs.norm();
        Self { lhs, rhs, residual: (lhs - rhs).norm() / n, error_estimate: err / n }
    }
}

fn check_balance(sum: Complex64, target: f64) -> Result<()> {
    if (sum - target).norm() > BALANCE_TOL * target.max(1.0) * 4.0 {
        return Err(Error::ConstraintViolation(format!("parameters sum to {sum}, not {target}")));
    }
    Ok(())
}

fn check_contour(args: &[Complex64], q: f64) -> Result<()> {
    for a in args {
        if !(a.re > 0.0 && a.re < q) {
            return Err(Error::InvalidParameter(format!(
                "real part of {a} must lie in (0, {q}) for the contour iℝ"
            )));
        }
    }
    Ok(())
}

/// `Σ (re + i·im)` with the real parts rescaled to `total` and the imaginary
/// parts shifted to sum to zero.
fn random_split<R: Rng>(rng: &mut R, n: usize, total: f64, im_spread: f64) -> Vec<Complex64> {
    let re: Vec<f64> = (0..n).map(|_| rng.gen_range(0.3..1.0)).collect();
    let s: f64 = re.iter().sum();
    let im: Vec<f64> = (0..n).map(|_| rng.gen_range(-im_spread..=im_spread)).collect();
    let m = im.iter().sum::<f64>() / n as f64;
    let mut out: Vec<Complex64> = re.iter().zip(&im).map(|(r, i)| Complex64::new(r * total / s, i - m)).collect();
    // exact balancing up to one rounding
    let err: Complex64 = out.iter().sum::<Complex64>() - total;
    out[n - 1] -= err;
    out
}

/// `a₁, a₂, a₃, b₁, b₂, b₃` with `Σ(aᵢ+bᵢ) = ω₁+ω₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BalancedParams33 {
    pub a: [Complex64; 3],
    pub b: [Complex64; 3],
}

impl BalancedParams33 {
    pub fn new(a: [Complex64; 3], b: [Complex64; 3], mp: &ModularParameter) -> Result<Self> {
        check_balance(a.iter().chain(&b).sum(), mp.q)?;
        Ok(Self { a, b })
    }

    pub fn symmetric(mp: &ModularParameter) -> Self {
        let x = c(mp.q / 6.0);
        Self { a: [x; 3], b: [x; 3] }
    }

    pub fn random<R: Rng>(rng: &mut R, mp: &ModularParameter) -> Self {
        let v = random_split(rng, 6, mp.q, 0.3);
        Self { a: [v[0], v[1], v[2]], b: [v[3], v[4], v[5]] }
    }
}

/// `α₁, …, α₆` with `Σαᵢ = ω₁+ω₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BalancedParams6 {
    pub alpha: [Complex64; 6],
}

impl BalancedParams6 {
    pub fn new(alpha: [Complex64; 6], mp: &ModularParameter) -> Result<Self> {
        check_balance(alpha.iter().sum(), mp.q)?;
        Ok(Self { alpha })
    }

    pub fn symmetric(mp: &ModularParameter) -> Self {
        Self { alpha: [c(mp.q / 6.0); 6] }
    }

    pub fn random<R: Rng>(rng: &mut R, mp: &ModularParameter) -> Self {
        let v = random_split(rng, 6, mp.q, 0.3);
        Self { alpha: [v[0], v[1], v[2], v[3], v[4], v[5]] }
    }
}

fn hb(x: Complex64, y: Complex64, mp: &ModularParameter) -> Result<Option<Complex64>> {
    ln_hyper_b(x, y, mp)
}

fn ln_sum(terms: &[Option<Complex64>]) -> Complex64 {
    if terms.iter().any(|t| t.is_none()) {
        return c(0.0);
    }
    terms.iter().map(|t| t.expect("checked")).sum::<Complex64>().exp()
}

fn line(f: &dyn Fn(f64) -> Result<Complex64>, cfg: &QuadratureConfig) -> Result<IntegralResult> {
    cfg.validate()?;
    integrate_line_try(f, cfg)
}

/// `∫ ∏ ℬ(aᵢ − u, bᵢ + u) du/(i√(ω₁ω₂)) = ℬ(a₂+b₁, a₃+b₂) ℬ(a₁+b₂, a₃+b₁)`.
pub fn check_hyperbolic_pentagon(
    p: &BalancedParams33,
    mp: &ModularParameter,
    cfg: &QuadratureConfig,
) -> Result<IdentityReport> {
    check_balance(p.a.iter().chain(&p.b).sum(), mp.q)?;
    check_contour(&[p.a, p.b].concat(), mp.q)?;
    let [a1, a2, a3] = p.a;
    let [b1, b2, b3] = p.b;
    let f = |t: f64| -> Result<Complex64> {
        let u = I * t;
        Ok(ln_sum(&[hb(a1 - u, b1 + u, mp)?, hb(a2 - u, b2 + u, mp)?, hb(a3 - u, b3 + u, mp)?]))
    };
    let r = line(&f, cfg)?;
    let rhs = ln_sum(&[hb(a2 + b1, a3 + b2, mp)?, hb(a1 + b2, a3 + b1, mp)?]);
    Ok(IdentityReport::new(r.value, rhs, r.error_estimate))
}

/// `½ ∫ ∏γ⁽²⁾(αᵢ ± u)/γ⁽²⁾(±2u) du/(i√(ω₁ω₂)) = ∏_{i<j} γ⁽²⁾(αᵢ+αⱼ)`.
///
/// Balancing is not enforced, so the residual of perturbed parameters can be
/// observed.
pub fn check_hyperbolic_beta_integral(
    p: &BalancedParams6,
    mp: &ModularParameter,
    cfg: &QuadratureConfig,
) -> Result<IdentityReport> {
    check_contour(&p.alpha, mp.q)?;
    let f = |t: f64| -> Result<Complex64> {
        let u = I * t;
        let mut ln = c(0.0);
        for a in p.alpha {
            ln += ln_hyperbolic_gamma(a + u, mp)? + ln_hyperbolic_gamma(a - u, mp)?;
        }
        Ok(0.5 * ln.exp() * recip_hyperbolic_gamma(2.0 * u, mp)? * recip_hyperbolic_gamma(-2.0 * u, mp)?)
    };
    let r = line(&f, cfg)?;
    let mut ln = c(0.0);
    for i in 0..6 {
        for j in i + 1..6 {
            ln += ln_hyperbolic_gamma(p.alpha[i] + p.alpha[j], mp)?;
        }
    }
    Ok(IdentityReport::new(r.value, ln.exp(), r.error_estimate))
}

/// `κ ∮ ∏Γ(sᵢz^{±1})/Γ(z^{±2}) dz/(2πiz) = ∏_{i<j} Γ(sᵢsⱼ)` by the
/// trapezoid rule on the unit circle, doubling the nodes until two successive
/// values agree to `tol`.
pub fn check_elliptic_beta_integral(s: [Complex64; 6], p: f64, q: f64, tol: f64) -> Result<IdentityReport> {
    let bases = EllipticBases::real(p, q)?;
    for si in s {
        if si.norm() >= 1.0 || si.norm() == 0.0 {
            return Err(Error::InvalidParameter(format!("|s| = {} must lie in (0, 1)", si.norm())));
        }
    }
    let gtol = (tol * 1e-3).max(1e-16);
    let (pc, qc) = (c(p), c(q));
    let kappa = pochhammer(pc, pc, gtol)? * pochhammer(qc, qc, gtol)? / 2.0;
    let f = |theta: f64| -> Result<Complex64> {
        let z = Complex64::from_polar(1.0, theta);
        let mut v = theta_fn(z * z, pc, gtol)? * theta_fn(z.inv() * z.inv(), qc, gtol)?;
        for si in s {
            v *= elliptic_gamma(si * z, bases, gtol)? * elliptic_gamma(si / z, bases, gtol)?;
        }
        Ok(v)
    };
    let mut n = 16;
    let mut prev = {
        let h = 2.0 * PI / n as f64;
        (0..n).map(|k| f(k as f64 * h)).sum::<Result<Complex64>>()? / n as f64
    };
    let lhs = loop {
        let h = 2.0 * PI / (2 * n) as f64;
        let odd = (0..n).map(|k| f((2 * k + 1) as f64 * h)).sum::<Result<Complex64>>()? / (2 * n) as f64;
        let cur = prev / 2.0 + odd;
        n *= 2;
        if (cur - prev).norm() <= tol * cur.norm() {
            prev = cur;
            break prev;
        }
        if n > 1 << 16 {
            return Err(Error::NonConvergence(format!("trapezoid rule on the circle after {n} nodes")));
        }
        prev = cur;
    };
    let mut rhs = c(1.0);
    for i in 0..6 {
        for j in i + 1..6 {
            rhs *= elliptic_gamma(s[i] * s[j], bases, gtol)?;
        }
    }
    Ok(IdentityReport::new(kappa * lhs, rhs, tol * (kappa * lhs).norm()))
}

/// `sᵢ = (pq)^{1/6}·e^{εᵢ + iφᵢ}` with zero-sum jitter, so `Πsᵢ = pq` and
/// `|sᵢ| ≤ max_modulus`.
pub fn random_elliptic_params<R: Rng>(rng: &mut R, p: f64, q: f64, max_modulus: f64) -> [Complex64; 6] {
    let base = (p * q).powf(1.0 / 6.0);
    let room = (max_modulus / base).ln().clamp(0.0, 0.3) * 0.5;
    let mut eps: Vec<f64> = (0..6).map(|_| rng.gen_range(-room..=room)).collect();
    let m = eps.iter().sum::<f64>() / 6.0;
    eps.iter_mut().for_each(|e| *e -= m);
    let mut phi: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let m = phi.iter().sum::<f64>() / 6.0;
    phi.iter_mut().for_each(|e| *e -= m);
    let mut out = [c(0.0); 6];
    for i in 0..6 {
        out[i] = Complex64::from_polar(base * eps[i].exp(), phi[i]);
    }
    out
}

/// `∫ B(a₁+u, b₁−u) B(a₂+u, b₂−u) B(a₃+u, a₁+a₂+b₁+b₂) du/(2πi)
///   = B(a₂+b₁, a₃+b₂) B(a₁+b₂, a₃+b₁)` on `u ∈ iℝ`, which needs
/// `Re aᵢ, Re bⱼ > 0`.
pub fn check_classical_pentagon(a: [Complex64; 3], b: [Complex64; 2], cfg: &QuadratureConfig) -> Result<IdentityReport> {
    for x in a.iter().chain(&b) {
        if x.re <= 0.0 {
            return Err(Error::InvalidParameter(format!("Re {x} must be positive")));
        }
    }
    let s = a[0] + a[1] + b[0] + b[1];
    let ln_b = |x: Complex64, y: Complex64| ln_gamma(x) + ln_gamma(y) - ln_gamma(x + y);
    let f = |t: f64| -> Result<Complex64> {
        let u = I * t;
        Ok((ln_b(a[0] + u, b[0] - u) + ln_b(a[1] + u, b[1] - u) + ln_b(a[2] + u, s)).exp() / (2.0 * PI))
    };
    let r = line(&f, cfg)?;
    let rhs = classical_beta(a[1] + b[0], a[2] + b[1])? * classical_beta(a[0] + b[1], a[2] + b[0])?;
    Ok(IdentityReport::new(r.value, rhs, r.error_estimate))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrthogonalityReport {
    pub alpha: f64,
    pub sigma: f64,
    pub offset: f64,
    /// `∫ K(α, β) g(β) dβ` at `ε/2`
    pub unextrapolated: Complex64,
    /// extrapolated to `ε → 0`
    pub smeared: Complex64,
    /// `g(α)`, the delta prediction
    pub prediction: f64,
    /// `|smeared − prediction| / g_max`
    pub deviation: f64,
}

/// Kernel `K(α, β) = ∫ ℬ(a₁ − it, b₁ + it) ℬ(−a₂ − it, −b₂ + it) dt` with
/// `a₁,₂ = iα ± ε`, `b₁,₂ = iβ ± ε`.
pub fn orthogonality_kernel(alpha: f64, beta: f64, eps: f64, mp: &ModularParameter, cfg: &QuadratureConfig) -> Result<IntegralResult> {
    let (a1, b1) = (Complex64::new(eps, alpha), Complex64::new(eps, beta));
    let (a2, b2) = (Complex64::new(-eps, alpha), Complex64::new(-eps, beta));
    let f = |t: f64| -> Result<Complex64> {
        let u = I * t;
        Ok(ln_sum(&[hb(a1 - u, b1 + u, mp)?, hb(-a2 - u, -b2 + u, mp)?]))
    };
    line(&f, cfg)
}

/// Smear `K(α, ·)` against the normalized Gaussian of width `σ` centered at
/// `α + offset` and compare with the delta prediction `g(α)`. The kernel
/// approaches the delta linearly in ε, so the smeared values at `ε` and `ε/2`
/// are Richardson-extrapolated.
pub fn check_orthogonality_smeared(
    alpha: f64,
    sigma: f64,
    offset: f64,
    eps: f64,
    mp: &ModularParameter,
    cfg: &QuadratureConfig,
) -> Result<OrthogonalityReport> {
    if !(sigma > 0.0 && eps > 0.0) {
        return Err(Error::InvalidParameter("σ and ε must be positive".into()));
    }
    let norm = 1.0 / ((2.0 * PI).sqrt() * sigma);
    let g = |beta: f64| norm * (-(beta - alpha - offset).powi(2) / (2.0 * sigma * sigma)).exp();
    let kcfg = QuadratureConfig { abs_tol: cfg.abs_tol * 0.1, rel_tol: cfg.rel_tol * 0.1, ..cfg.clone() };
    let smear = |e: f64| -> Result<Complex64> {
        let h = |d: f64| -> Result<Complex64> {
            let beta = alpha + offset + d;
            Ok(orthogonality_kernel(alpha, beta, e, mp, &kcfg)?.value * g(beta))
        };
        let lo = -8.0 * sigma;
        let n = 32;
        let pts: Vec<f64> = (0..=n).map(|k| lo - 2.0 * lo * k as f64 / n as f64).collect();
        Ok(crate::integrate::integrate_panels_try(&h, &pts, cfg)?.value)
    };
    let coarse = smear(eps)?;
    let fine = smear(0.5 * eps)?;
    let smeared = 2.0 * fine - coarse;
    let prediction = g(alpha);
    Ok(OrthogonalityReport {
        alpha,
        sigma,
        offset,
        unextrapolated: fine,
        smeared,
        prediction,
        deviation: (smeared - prediction).norm() / norm,
    })
}

/// The Bailey pair `α(z,t) = ∏ℬ(αᵢ−z, βᵢ+z)`,
/// `β(w,t) = ℬ(t−w+α₁, t+w+β₂) ℬ(t−w+α₂, t+w+β₁)` with
/// `2t + Σ(αᵢ+βᵢ) = ω₁+ω₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BaileySeed {
    pub alpha: [Complex64; 2],
    pub beta: [Complex64; 2],
    pub t: Complex64,
}

/// Seed pair for the given parameters; `t` is fixed by balancing.
pub fn bailey_pair_seed(alpha: [Complex64; 2], beta: [Complex64; 2], mp: &ModularParameter) -> Result<BaileySeed> {
    let t = (mp.q - alpha[0] - alpha[1] - beta[0] - beta[1]) / 2.0;
    check_contour(&[alpha[0], alpha[1], beta[0], beta[1], t], mp.q)?;
    Ok(BaileySeed { alpha, beta, t })
}

impl BaileySeed {
    /// Random seed with `t` drawn first and `β₂` solved from the balancing.
    pub fn random<R: Rng>(rng: &mut R, mp: &ModularParameter) -> Self {
        let q = mp.q;
        loop {
            let t = Complex64::new(rng.gen_range(0.075..0.2) * q, 0.0);
            let mut g = || Complex64::new(rng.gen_range(0.1..0.225) * q, rng.gen_range(-0.1..0.1));
            let (a1, a2, b1) = (g(), g(), g());
            let b2 = q - 2.0 * t - a1 - a2 - b1;
            if b2.re > 0.05 * q {
                if let Ok(seed) = bailey_pair_seed([a1, a2], [b1, b2], mp) {
                    return seed;
                }
            }
        }
    }

    pub fn alpha_fn(&self, z: Complex64, mp: &ModularParameter) -> Result<Complex64> {
        Ok(ln_sum(&[hb(self.alpha[0] - z, self.beta[0] + z, mp)?, hb(self.alpha[1] - z, self.beta[1] + z, mp)?]))
    }

    pub fn beta_fn(&self, w: Complex64, mp: &ModularParameter) -> Result<Complex64> {
        let t = self.t;
        Ok(ln_sum(&[
            hb(t - w + self.alpha[0], t + w + self.beta[1], mp)?,
            hb(t - w + self.alpha[1], t + w + self.beta[0], mp)?,
        ]))
    }

    /// `β(w,t)` against `∫ ℬ(t+w−z, t−w+z) α(z,t) dz`.
    pub fn verify(&self, w: Complex64, mp: &ModularParameter, cfg: &QuadratureConfig) -> Result<IdentityReport> {
        let t = self.t;
        let f = |y: f64| -> Result<Complex64> {
            let z = I * y;
            Ok(ln_sum(&[
                hb(t + w - z, t - w + z, mp)?,
                hb(self.alpha[0] - z, self.beta[0] + z, mp)?,
                hb(self.alpha[1] - z, self.beta[1] + z, mp)?,
            ]))
        };
        let r = line(&f, cfg)?;
        Ok(IdentityReport::new(r.value, self.beta_fn(w, mp)?, r.error_estimate))
    }
}

/// The pair produced from a seed by one Bailey step with parameters `s`, `u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BaileyStep {
    pub seed: BaileySeed,
    pub s: Complex64,
    pub u: Complex64,
}

pub fn bailey_step(seed: &BaileySeed, s: Complex64, u: Complex64) -> BaileyStep {
    BaileyStep { seed: *seed, s, u }
}

impl BaileyStep {
    /// `α′(w, s+t) = ℬ(t+u+w, 2s) α(w, t)`.
    pub fn alpha_fn(&self, w: Complex64, mp: &ModularParameter) -> Result<Complex64> {
        let t = self.seed.t;
        let b = hb(t + self.u + w, 2.0 * self.s, mp)?;
        Ok(ln_sum(&[b]) * self.seed.alpha_fn(w, mp)?)
    }

    /// `β′(w, s+t) = ∫ ℬ(s+w−x, u+x) ℬ(s+2t+u+w, s−w+x) β(x, t) dx` with the
    /// seed β in closed form.
    pub fn beta_fn(&self, w: Complex64, mp: &ModularParameter, cfg: &QuadratureConfig) -> Result<IntegralResult> {
        let (s, t, u) = (self.s, self.seed.t, self.u);
        let f = |y: f64| -> Result<Complex64> {
            let x = I * y;
            let k = ln_sum(&[hb(s + w - x, u + x, mp)?, hb(s + 2.0 * t + u + w, s - w + x, mp)?]);
            Ok(k * self.seed.beta_fn(x, mp)?)
        };
        line(&f, cfg)
    }

    /// `∫ ℬ(s+t+w−x, s+t−w+x) α′(x, s+t) dx`, the four-tetrahedron octahedron.
    pub fn z4(&self, w: Complex64, mp: &ModularParameter, cfg: &QuadratureConfig) -> Result<IntegralResult> {
        let st = self.s + self.seed.t;
        let f = |y: f64| -> Result<Complex64> {
            let x = I * y;
            Ok(ln_sum(&[hb(st + w - x, st - w + x, mp)?]) * self.alpha_fn(x, mp)?)
        };
        line(&f, cfg)
    }

    /// The five-tetrahedron double integral, with `defect` added to the
    /// argument `2t+s+u+w`.
    pub fn z5(&self, w: Complex64, defect: Complex64, mp: &ModularParameter, cfg: &QuadratureConfig) -> Result<IntegralResult> {
        let (s, t, u) = (self.s, self.seed.t, self.u);
        let icfg = QuadratureConfig { abs_tol: cfg.abs_tol * 0.1, rel_tol: cfg.rel_tol * 0.1, ..cfg.clone() };
        let worst = std::cell::Cell::new(0.0f64);
        let outer = |xi: f64| -> Result<Complex64> {
            let x = I * xi;
            let k = ln_sum(&[hb(s + w - x, u + x, mp)?, hb(s - w + x, 2.0 * t + s + u + w + defect, mp)?]);
            if k == c(0.0) {
                return Ok(k);
            }
            let inner = |eta: f64| -> Result<Complex64> {
                let y = I * eta;
                Ok(ln_sum(&[hb(t + x - y, t - x + y, mp)?]) * self.seed.alpha_fn(y, mp)?)
            };
            let r = integrate_line_try(&inner, &icfg)?;
            worst.set(worst.get().max(r.error_estimate * k.norm()));
            Ok(k * r.value)
        };
        let mut r = line(&outer, cfg)?;
        r.error_estimate += 20.0 * worst.get();
        Ok(r)
    }
}

/// Parameters of the octahedron: the Bailey seed plus one step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OctahedronParams {
    pub alpha: [Complex64; 2],
    pub beta: [Complex64; 2],
    pub s: Complex64,
    pub u: Complex64,
    pub w: Complex64,
}

impl OctahedronParams {
    pub fn symmetric(mp: &ModularParameter) -> Self {
        let q = mp.q;
        Self { alpha: [c(q / 8.0); 2], beta: [c(q / 8.0); 2], s: c(q / 8.0), u: c(q / 8.0), w: c(0.0) }
    }

    /// Random real parts inside the contour-safe region, small imaginary parts.
    pub fn random<R: Rng>(rng: &mut R, mp: &ModularParameter) -> Self {
        let q = mp.q;
        let v = random_split(rng, 5, 0.75 * q, 0.1);
        let mut g = |lo: f64, hi: f64| Complex64::new(rng.gen_range(lo..hi) * q, rng.gen_range(-0.05..0.05));
        let s = g(0.08, 0.15);
        let u = g(0.05, 0.12);
        let w = Complex64::new(rng.gen_range(-0.02..0.02) * q, rng.gen_range(-0.1..0.1));
        // v[4] plays 2t, which is fixed by balancing
        Self { alpha: [v[0], v[1]], beta: [v[2], v[3]], s, u, w }
    }
}

/// `Z_{4Δ}` (single integral) against `Z_{5Δ}` (double integral).
pub fn check_octahedron_duality(p: &OctahedronParams, mp: &ModularParameter, cfg: &QuadratureConfig) -> Result<IdentityReport> {
    octahedron_with_defect(p, c(0.0), mp, cfg)
}

/// As [`check_octahedron_duality`] with `Z_{5Δ}` deformed by `defect`.
pub fn octahedron_with_defect(
    p: &OctahedronParams,
    defect: Complex64,
    mp: &ModularParameter,
    cfg: &QuadratureConfig,
) -> Result<IdentityReport> {
    let seed = bailey_pair_seed(p.alpha, p.beta, mp)?;
    let step = bailey_step(&seed, p.s, p.u);
    let t = seed.t;
    check_contour(
        &[p.s + t + p.w, p.s + t - p.w, t + p.u, 2.0 * p.s, p.s + p.w, p.s - p.w, p.u, c(mp.q) - 2.0 * (p.s + t)],
        mp.q,
    )?;
    let z4 = step.z4(p.w, mp, cfg)?;
    let z5 = step.z5(p.w, defect, mp, cfg)?;
    Ok(IdentityReport::new(z5.value, z4.value, z4.error_estimate + z5.error_estimate))
}

/// `|Σ(aᵢ+bⱼ)ln(aᵢ+bⱼ) − Σaᵢln aᵢ − Σ(bⱼ ln bⱼ + (1−bⱼ)ln(1−bⱼ))|`.
///
/// Requires five positive numbers with `Σaᵢ + Σbⱼ = 1`; the product relation
/// `a₁a₂ = b₁b₂b₃` is not enforced so its failure can be observed.
pub fn check_entropy_pentagon(a: [f64; 2], b: [f64; 3]) -> Result<f64> {
    if a.iter().chain(&b).any(|x| !(*x > 0.0)) {
        return Err(Error::ConstraintViolation("all five numbers must be positive".into()));
    }
    let sum: f64 = a.iter().chain(&b).sum();
    if (sum - 1.0).abs() > 1e-12 {
        return Err(Error::ConstraintViolation(format!("numbers sum to {sum}, not 1")));
    }
    let xlx = |x: f64| x * x.ln();
    let lhs: f64 = a.iter().flat_map(|ai| b.iter().map(move |bj| xlx(ai + bj))).sum();
    let rhs: f64 = a.iter().map(|ai| xlx(*ai)).sum::<f64>() + b.iter().map(|bj| xlx(*bj) + xlx(1.0 - bj)).sum::<f64>();
    Ok((lhs - rhs).abs())
}

/// A random admissible tuple: `a₁, a₂, b₁` drawn, `b₂, b₃` solving
/// `b₂ + b₃ = 1 − a₁ − a₂ − b₁`, `b₂b₃ = a₁a₂/b₁`.
pub fn random_entropy_tuple<R: Rng>(rng: &mut R) -> ([f64; 2], [f64; 3]) {
    loop {
        let a: [f64; 2] = [rng.gen_range(0.01..0.3), rng.gen_range(0.01..0.3)];
        let b1: f64 = rng.gen_range(0.05..0.6);
        let s = 1.0 - a[0] - a[1] - b1;
        let p = a[0] * a[1] / b1;
        let disc = s * s - 4.0 * p;
        if s <= 0.0 || disc < 0.0 {
            continue;
        }
        let b2 = 0.5 * (s + disc.sqrt());
        let b3 = p / b2;
        // close the sum exactly
        let b1 = 1.0 - a[0] - a[1] - b2 - b3;
        if b1 > 0.0 && b3 > 0.0 {
            return (a, [b1, b2, b3]);
        }
    }
}
