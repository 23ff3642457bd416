//! Adaptive Gauss–Kronrod quadrature on intervals and on the real line,
//! iterated and tensor-product cubature, and a Monte-Carlo fallback for
//! exponentially decaying integrands on ℝⁿ.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;
use nalgebra::{Cholesky, DMatrix, DVector, Dyn};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special_fn::ln_gamma;

mod kronrod;

use kronrod::{gk15, GK15_NODES};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// maximum bisection depth of a single panel
    pub max_depth: u32,
    /// `None` estimates the truncation radius from the sampled decay rate
    pub truncation_radius: Option<f64>,
    /// δ for contours `ℝ − iδ`, in units of `|Im c_b|`
    pub contour_shift: f64,
    /// per-axis node count of the tensor rule
    pub nodes_per_panel: usize,
    pub mc_samples: usize,
    pub rng_seed: u64,
    /// use Monte Carlo regardless of dimension
    pub monte_carlo: bool,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_depth: 40,
            truncation_radius: None,
            contour_shift: 0.1,
            nodes_per_panel: 48,
            mc_samples: 200_000,
            rng_seed: 0,
            monte_carlo: false,
        }
    }
}

impl QuadratureConfig {
    pub fn with_tol(tol: f64) -> Self {
        Self { abs_tol: tol, rel_tol: tol, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter("tolerances must be positive".into()));
        }
        if self.contour_shift < 0.0 || self.contour_shift >= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "contour shift {} must lie in [0, 1) in units of |Im c_b|",
                self.contour_shift
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Adaptive,
    Tensor,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub evaluations: usize,
    pub method: Method,
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
    depth: u32,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

const MAX_PANELS: usize = 20_000;

fn panel<F>(f: &F, a: f64, b: f64, depth: u32) -> Result<Panel>
where
    F: Fn(f64) -> Result<Complex64> + ?Sized,
{
    let (value, error) = gk15(f, a, b)?;
    Ok(Panel { a, b, value, error, depth })
}

/// Globally adaptive G7/K15 over the breakpoints `pts` (sorted, at least two).
/// The panel with the largest error is bisected until the summed error meets
/// `max(abs_tol, rel_tol·|I|)`.
pub fn integrate_panels_try<F>(f: &F, pts: &[f64], cfg: &QuadratureConfig) -> Result<IntegralResult>
where
    F: Fn(f64) -> Result<Complex64> + ?Sized,
{
    let mut heap = BinaryHeap::new();
    for w in pts.windows(2) {
        if w[1] > w[0] {
            heap.push(panel(f, w[0], w[1], 0)?);
        }
    }
    let mut evaluations = heap.len() * GK15_NODES;
    loop {
        let value: Complex64 = heap.iter().map(|p| p.value).sum();
        let error: f64 = heap.iter().map(|p| p.error).sum();
        let target = cfg.abs_tol.max(cfg.rel_tol * value.norm());
        if error <= target || heap.is_empty() {
            return Ok(IntegralResult { value, error_estimate: error, evaluations, method: Method::Adaptive });
        }
        let worst = heap.pop().expect("nonempty heap");
        if worst.depth >= cfg.max_depth || heap.len() + 2 > MAX_PANELS {
            return Err(Error::QuadratureFailure(format!(
                "error {error:.3e} above target {target:.3e} after {evaluations} evaluations \
                 (worst panel [{}, {}])",
                worst.a, worst.b
            )));
        }
        let mid = 0.5 * (worst.a + worst.b);
        heap.push(panel(f, worst.a, mid, worst.depth + 1)?);
        heap.push(panel(f, mid, worst.b, worst.depth + 1)?);
        evaluations += 2 * GK15_NODES;
    }
}

/// Adaptive quadrature of a fallible integrand over `[a, b]`.
pub fn integrate_interval_try<F>(f: &F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<IntegralResult>
where
    F: Fn(f64) -> Result<Complex64> + ?Sized,
{
    if b < a {
        let mut r = integrate_panels_try(f, &[b, a], cfg)?;
        r.value = -r.value;
        return Ok(r);
    }
    integrate_panels_try(f, &[a, b], cfg)
}

/// Adaptive quadrature over `[a, b]`.
pub fn integrate_interval<F>(f: &F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<IntegralResult>
where
    F: Fn(f64) -> Complex64 + ?Sized,
{
    integrate_interval_try(&|x| Ok(f(x)), a, b, cfg)
}

const DECAY_RADII: [f64; 3] = [2.0, 4.0, 8.0];
const MAX_RADIUS: f64 = 2_000.0;

/// Exponential envelope `|f(r·dir)| ≈ |f(8·dir)| e^{−μ(r−8)}` along one ray.
#[derive(Debug, Clone, Copy)]
struct Envelope {
    rate: f64,
    ln_amp: f64,
}

impl Envelope {
    /// Radius beyond which the envelope integrates to less than `tol`.
    fn radius(&self, tol: f64) -> f64 {
        let r_last = DECAY_RADII[2];
        if self.ln_amp == f64::NEG_INFINITY {
            return r_last;
        }
        let excess = (self.ln_amp - (tol * self.rate).ln()) / self.rate;
        (r_last + excess.max(0.0)).min(MAX_RADIUS)
    }
}

fn fit_envelope(samples: &[f64; 3]) -> Result<Envelope> {
    let ln: Vec<f64> = samples.iter().map(|s| s.ln()).collect();
    if ln[2] == f64::NEG_INFINITY || ln[2] < -700.0 {
        return Ok(Envelope { rate: 1.0, ln_amp: f64::NEG_INFINITY });
    }
    if ln.iter().any(|l| l.is_nan()) {
        return Err(Error::DecayEstimateFailure("integrand is not finite on the decay rays".into()));
    }
    // least squares slope through (r, ln|f|), finite samples only
    let pts: Vec<(f64, f64)> =
        DECAY_RADII.iter().zip(&ln).filter(|(_, l)| l.is_finite()).map(|(r, l)| (*r, *l)).collect();
    let n = pts.len() as f64;
    let mr = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let ml = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mr) * (p.0 - mr)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mr) * (p.1 - ml)).sum();
    let slope = sxy / sxx;
    // the last pair reflects the asymptotic rate better than the global fit
    let last = (ln[1] - ln[2]) / (DECAY_RADII[2] - DECAY_RADII[1]);
    let rate = (-slope).min(last);
    if !(rate > 0.0) {
        return Err(Error::DecayEstimateFailure(format!("fitted decay rate {rate:.3e} is not positive")));
    }
    Ok(Envelope { rate, ln_amp: ln[2] })
}

fn ray_samples<F>(f: &F, dir: f64) -> Result<[f64; 3]>
where
    F: Fn(f64) -> Result<Complex64> + ?Sized,
{
    let mut s = [0.0; 3];
    for (k, r) in DECAY_RADII.iter().enumerate() {
        s[k] = f(dir * r)?.norm();
    }
    Ok(s)
}

/// Truncation interval `[−R₋, R₊]` for an integrand on ℝ.
fn truncation_1d<F>(f: &F, cfg: &QuadratureConfig, tol: f64) -> Result<(f64, f64)>
where
    F: Fn(f64) -> Result<Complex64> + ?Sized,
{
    if let Some(r) = cfg.truncation_radius {
        return Ok((r, r));
    }
    let left = fit_envelope(&ray_samples(f, -1.0)?)?;
    let right = fit_envelope(&ray_samples(f, 1.0)?)?;
    Ok((left.radius(tol), right.radius(tol)))
}

fn line_breakpoints(lo: f64, hi: f64) -> Vec<f64> {
    let width = hi - lo;
    let n = ((width / 2.0).ceil() as usize).clamp(2, 64);
    (0..=n).map(|k| lo + width * k as f64 / n as f64).collect()
}

/// `∫_ℝ f` for a fallible integrand with exponential decay, truncated where
/// the fitted envelope's tail drops below `abs_tol/10`.
pub fn integrate_1d_try<F>(f: &F, cfg: &QuadratureConfig) -> Result<IntegralResult>
where
    F: Fn(f64) -> Result<Complex64> + ?Sized,
{
    let (rl, rr) = truncation_1d(f, cfg, cfg.abs_tol / 10.0)?;
    let mut r = integrate_panels_try(f, &line_breakpoints(-rl, rr), cfg)?;
    r.evaluations += 6;
    Ok(r)
}

/// `∫_ℝ f(x) dx`. Shifted contours `ℝ − iδ` are handled by the caller's
/// parametrization `x ↦ g(x − iδ)`.
pub fn integrate_1d<F>(f: &F, cfg: &QuadratureConfig) -> Result<IntegralResult>
where
    F: Fn(f64) -> Complex64 + ?Sized,
{
    integrate_1d_try(&|x| Ok(f(x)), cfg)
}

const SCAN_RADIUS: i32 = 8;

/// `∫_ℝ f` for integrands whose bulk may sit away from the origin: a unit
/// grid scan on `[−8, 8]` finds the peak, then each end walks outward until
/// `|f|` falls below `10⁻³·max(abs_tol, rel_tol·peak)`.
pub fn integrate_line_try<F>(f: &F, cfg: &QuadratureConfig) -> Result<IntegralResult>
where
    F: Fn(f64) -> Result<Complex64> + ?Sized,
{
    let mut peak: f64 = 0.0;
    let mut evaluations = 0;
    for k in -SCAN_RADIUS..=SCAN_RADIUS {
        let v = f(k as f64)?.norm();
        if !v.is_finite() {
            return Err(Error::DecayEstimateFailure(format!("integrand is not finite at {k}")));
        }
        peak = peak.max(v);
        evaluations += 1;
    }
    let mut ends = [SCAN_RADIUS as f64; 2];
    for (side, sign) in [-1.0, 1.0].into_iter().enumerate() {
        let mut r = SCAN_RADIUS as f64;
        let mut step = 1.0;
        loop {
            let thr = 1e-3 * cfg.abs_tol.max(cfg.rel_tol * peak);
            let v = f(sign * r)?.norm().max(f(sign * (r - 0.5 * step))?.norm());
            evaluations += 2;
            if !v.is_finite() {
                return Err(Error::DecayEstimateFailure(format!("integrand is not finite at {}", sign * r)));
            }
            peak = peak.max(v);
            if v <= thr {
                break;
            }
            if r >= MAX_RADIUS {
                return Err(Error::DecayEstimateFailure(format!(
                    "integrand still {v:.3e} at {} (peak {peak:.3e})",
                    sign * r
                )));
            }
            r += step;
            step = (step * 1.5).min(8.0);
        }
        ends[side] = r;
    }
    if peak == 0.0 {
        return Ok(IntegralResult {
            value: Complex64::new(0.0, 0.0),
            error_estimate: 0.0,
            evaluations,
            method: Method::Adaptive,
        });
    }
    let (lo, hi) = (-ends[0], ends[1]);
    let n = (((hi - lo) / 4.0).ceil() as usize).clamp(2, 64);
    let pts: Vec<f64> = (0..=n).map(|k| lo + (hi - lo) * k as f64 / n as f64).collect();
    let mut r = integrate_panels_try(f, &pts, cfg)?;
    r.evaluations += evaluations;
    Ok(r)
}

/// Per-axis decay rates and truncation radii of an integrand on ℝⁿ, from
/// samples along both directions of each axis and along the main diagonals.
#[derive(Debug, Clone)]
pub struct DecayProfile {
    pub rates: Vec<f64>,
    pub radii: Vec<f64>,
}

pub fn estimate_decay<F>(f: &F, dim: usize, cfg: &QuadratureConfig) -> Result<DecayProfile>
where
    F: Fn(&[f64]) -> Result<Complex64> + ?Sized,
{
    let tol = cfg.abs_tol / (10.0 * dim as f64);
    let mut rates = Vec::with_capacity(dim);
    let mut radii = Vec::with_capacity(dim);
    let mut point = vec![0.0; dim];
    for axis in 0..dim {
        let mut rate = f64::INFINITY;
        let mut radius: f64 = 0.0;
        for sign in [-1.0, 1.0] {
            let mut s = [0.0; 3];
            for (k, r) in DECAY_RADII.iter().enumerate() {
                point.iter_mut().for_each(|p| *p = 0.0);
                point[axis] = sign * r;
                s[k] = f(&point)?.norm();
            }
            let env = fit_envelope(&s)?;
            rate = rate.min(env.rate);
            radius = radius.max(env.radius(tol));
        }
        rates.push(rate);
        radii.push(cfg.truncation_radius.unwrap_or(radius));
    }
    if dim > 1 {
        let d = (dim as f64).sqrt();
        for diag in [1.0, -1.0] {
            let mut s = [0.0; 3];
            for (k, r) in DECAY_RADII.iter().enumerate() {
                point.iter_mut().for_each(|p| *p = diag * r / d);
                s[k] = f(&point)?.norm();
            }
            let env = fit_envelope(&s)?;
            let along = env.radius(tol) / d;
            for r in radii.iter_mut() {
                if cfg.truncation_radius.is_none() {
                    *r = r.max(along);
                }
            }
        }
    }
    Ok(DecayProfile { rates, radii })
}

fn iterated<F>(f: &F, prefix: &[f64], dim: usize, cfg: &QuadratureConfig) -> Result<IntegralResult>
where
    F: Fn(&[f64]) -> Result<Complex64> + ?Sized,
{
    let inner_cfg = QuadratureConfig { abs_tol: cfg.abs_tol * 0.1, rel_tol: cfg.rel_tol * 0.1, ..cfg.clone() };
    let evaluations = std::cell::Cell::new(0usize);
    let g = |x: f64| -> Result<Complex64> {
        let mut p = prefix.to_vec();
        p.push(x);
        if p.len() == dim {
            evaluations.set(evaluations.get() + 1);
            f(&p)
        } else {
            let r = iterated(f, &p, dim, &inner_cfg)?;
            evaluations.set(evaluations.get() + r.evaluations);
            Ok(r.value)
        }
    };
    let mut r = integrate_line_try(&g, cfg)?;
    r.evaluations = evaluations.get();
    Ok(r)
}

/// Composite trapezoid rule on a tensor grid over the box `∏[−Rᵢ, Rᵢ]`;
/// the error estimate compares against the same rule on every other node.
fn tensor<F>(f: &F, radii: &[f64], nodes: usize) -> Result<IntegralResult>
where
    F: Fn(&[f64]) -> Result<Complex64> + ?Sized,
{
    let dim = radii.len();
    let n = nodes.max(4) & !1;
    let h: Vec<f64> = radii.iter().map(|r| 2.0 * r / n as f64).collect();
    let mut idx = vec![0usize; dim];
    let mut point = vec![0.0; dim];
    let mut fine = Complex64::new(0.0, 0.0);
    let mut coarse = Complex64::new(0.0, 0.0);
    let mut evaluations = 0;
    loop {
        let mut all_even = true;
        for k in 0..dim {
            point[k] = -radii[k] + idx[k] as f64 * h[k];
            all_even &= idx[k] % 2 == 0;
        }
        let v = f(&point)?;
        evaluations += 1;
        fine += v;
        if all_even {
            coarse += v;
        }
        let mut k = 0;
        loop {
            if k == dim {
                let vol: f64 = h.iter().product();
                let fine = fine * vol;
                let coarse = coarse * vol * 2f64.powi(dim as i32);
                return Ok(IntegralResult {
                    value: fine,
                    error_estimate: (fine - coarse).norm(),
                    evaluations,
                    method: Method::Tensor,
                });
            }
            idx[k] += 1;
            if idx[k] < n {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Multivariate Student-t proposal `μ + L z √(ν/g)`, `z ~ N(0, I)`, `g ~ χ²_ν`.
struct TProposal {
    mean: DVector<f64>,
    chol: Cholesky<f64, Dyn>,
    ln_norm: f64,
}

const T_DOF: f64 = 4.0;

impl TProposal {
    fn new(mean: DVector<f64>, cov: DMatrix<f64>) -> Option<Self> {
        let chol = cov.cholesky()?;
        let d = mean.len() as f64;
        let ln_det: f64 = chol.l().diagonal().iter().map(|v| v.ln()).sum();
        let lg = |v: f64| ln_gamma(Complex64::new(v, 0.0)).re;
        let ln_norm = lg((T_DOF + d) / 2.0) - lg(T_DOF / 2.0) - 0.5 * d * (T_DOF * std::f64::consts::PI).ln() - ln_det;
        Some(Self { mean, chol, ln_norm })
    }

    fn sample(&self, rng: &mut ChaCha8Rng, chi: &ChiSquared<f64>) -> (DVector<f64>, f64) {
        let z = DVector::from_fn(self.mean.len(), |_, _| rng.sample::<f64, _>(StandardNormal));
        let g: f64 = rng.sample(chi);
        let x = &self.mean + self.chol.l() * z * (T_DOF / g).sqrt();
        let density = self.density(&x);
        (x, density)
    }

    fn density(&self, x: &DVector<f64>) -> f64 {
        let y = self.chol.l().solve_lower_triangular(&(x - &self.mean)).expect("positive definite");
        let d = self.mean.len() as f64;
        (self.ln_norm - 0.5 * (T_DOF + d) * (1.0 + y.dot(&y) / T_DOF).ln()).exp()
    }
}

const MC_PILOT_ROUNDS: usize = 3;

/// Adaptive importance sampling with a multivariate Student-t proposal. The
/// pilot rounds (a tenth of the budget each) fit the proposal's mean and
/// covariance to `|f|`, starting from the per-axis decay rates; the final
/// estimate uses fresh samples only. The error estimate is one standard error.
fn monte_carlo<F>(f: &F, rates: &[f64], cfg: &QuadratureConfig) -> Result<IntegralResult>
where
    F: Fn(&[f64]) -> Result<Complex64> + ?Sized,
{
    let dim = rates.len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let chi = ChiSquared::new(T_DOF).expect("positive degrees of freedom");
    let n = cfg.mc_samples.max(2);
    let pilot = (n / 10).max(100);
    let mut evaluations = 0;
    let mut proposal = TProposal::new(DVector::zeros(dim), DMatrix::from_fn(dim, dim, |i, j| {
        if i == j { 8.0 / (rates[i] * rates[i]) } else { 0.0 }
    }))
    .ok_or_else(|| Error::QuadratureFailure("degenerate initial proposal".into()))?;
    for _ in 0..MC_PILOT_ROUNDS {
        let mut wsum = 0.0;
        let mut m1 = DVector::zeros(dim);
        let mut m2 = DMatrix::zeros(dim, dim);
        for _ in 0..pilot {
            let (x, q) = proposal.sample(&mut rng, &chi);
            let w = f(x.as_slice())?.norm() / q;
            evaluations += 1;
            wsum += w;
            m1 += &x * w;
            m2 += &x * x.transpose() * w;
        }
        if !(wsum > 0.0 && wsum.is_finite()) {
            break;
        }
        let mean = m1 / wsum;
        let cov = (m2 / wsum - &mean * mean.transpose()) * 1.5;
        match TProposal::new(mean, cov) {
            Some(p) => proposal = p,
            None => break,
        }
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut sum_sq = 0.0;
    for _ in 0..n {
        let (x, q) = proposal.sample(&mut rng, &chi);
        let w = f(x.as_slice())? / q;
        sum += w;
        sum_sq += w.norm_sqr();
    }
    evaluations += n;
    let nf = n as f64;
    let mean = sum / nf;
    let var = (sum_sq / nf - mean.norm_sqr()).max(0.0) * nf / (nf - 1.0);
    Ok(IntegralResult {
        value: mean,
        error_estimate: (var / nf).sqrt(),
        evaluations,
        method: Method::MonteCarlo,
    })
}

/// `∫_{ℝⁿ} f` for a fallible integrand: iterated adaptive quadrature for
/// `dim ≤ 3`, a tensor trapezoid grid for `dim = 4`, Monte Carlo beyond or
/// when `cfg.monte_carlo` is set.
pub fn integrate_nd_try<F>(f: &F, dim: usize, cfg: &QuadratureConfig) -> Result<IntegralResult>
where
    F: Fn(&[f64]) -> Result<Complex64> + ?Sized,
{
    if dim == 0 {
        return Ok(IntegralResult {
            value: f(&[])?,
            error_estimate: 0.0,
            evaluations: 1,
            method: Method::Adaptive,
        });
    }
    let profile = estimate_decay(f, dim, cfg)?;
    if cfg.monte_carlo || dim >= 5 {
        return monte_carlo(f, &profile.rates, cfg);
    }
    if dim == 4 {
        return tensor(f, &profile.radii, cfg.nodes_per_panel);
    }
    iterated(f, &[], dim, cfg)
}

pub fn integrate_nd<F>(f: &F, dim: usize, cfg: &QuadratureConfig) -> Result<IntegralResult>
where
    F: Fn(&[f64]) -> Complex64 + ?Sized,
{
    integrate_nd_try(&|x: &[f64]| Ok(f(x)), dim, cfg)
}
