//! Boltzmann weights of shaped tetrahedra and triangulations, the gauge-fixed
//! state integral `W_b`, and the invariance checks of the state sum.
//!
//! Negative tetrahedra carry the complex conjugate of the positive weight,
//! which for real states is the positive formula with the cyclic quad order
//! reversed (see [`Triangulation::tau`]).

mod reduced;

use std::cell::Cell;

use num_complex::Complex64;
use serde::Serialize;

use crate::complexes::{
    determinant, pachner_32, quad_state, shape_gauge_transform, GaugeFixing, ShapeStructure,
    Triangulation,
};
use crate::error::{Error, Result};
use crate::integrate::{integrate_line_try, integrate_nd_try, QuadratureConfig};
use crate::special_fn::{ln_hyperbolic_gamma, phi_b, ModularParameter};

pub use reduced::{
    figure_eight_closed_form, figure_eight_reduced, five_two_balanced_closed_form, five_two_reduced,
    six_one_reduced, SixOneAngles, SixOneReduced,
};

/// Arguments `Δα(q) + i∇(s̃(q′) − s̃(q″))` of the three quad factors.
fn weight_args(x: &Triangulation, alpha: &ShapeStructure, s: &[f64], t: usize, mp: &ModularParameter) -> [Complex64; 3] {
    let st = quad_state(x, s, t);
    let mut out = [Complex64::new(0.0, 0.0); 3];
    for (k, o) in out.iter_mut().enumerate() {
        let k1 = x.tau(t, k);
        let k2 = x.tau(t, k1);
        *o = Complex64::new(mp.delta() * alpha.angle(t, k), mp.nabla() * (st[k1] - st[k2]));
    }
    out
}

/// `B(T, s)` for tetrahedron `t` of `x` at the global state `s`.
pub fn tet_weight(
    x: &Triangulation,
    alpha: &ShapeStructure,
    s: &[f64],
    t: usize,
    mp: &ModularParameter,
) -> Result<Complex64> {
    let mut ln = Complex64::new(0.0, 0.0);
    for a in weight_args(x, alpha, s, t, mp) {
        ln += ln_hyperbolic_gamma(a, mp)?;
    }
    Ok(ln.exp())
}

/// `B(X, s) = ∏_T B(T, s|_T)`.
pub fn triangulation_weight(
    x: &Triangulation,
    alpha: &ShapeStructure,
    s: &[f64],
    mp: &ModularParameter,
) -> Result<Complex64> {
    let mut ln = Complex64::new(0.0, 0.0);
    for t in 0..x.num_tetrahedra() {
        for a in weight_args(x, alpha, s, t, mp) {
            ln += ln_hyperbolic_gamma(a, mp)?;
        }
    }
    Ok(ln.exp())
}

#[derive(Debug, Clone, Serialize)]
pub struct PartitionResult {
    pub value: Complex64,
    pub error_estimate: f64,
    pub dim: usize,
    pub gauge: String,
    pub evaluations: usize,
}

/// `γ⁽²⁾(base + i∇(offset + Σ c·x))`.
#[derive(Debug, Clone)]
struct Factor {
    base: f64,
    offset: f64,
    coeffs: Vec<(usize, f64)>,
}

impl Factor {
    fn ln(&self, vars: &[f64], mp: &ModularParameter) -> Result<Complex64> {
        let im = self.offset + self.coeffs.iter().map(|(j, c)| c * vars[*j]).sum::<f64>();
        ln_hyperbolic_gamma(Complex64::new(self.base, mp.nabla() * im), mp)
    }
}

#[derive(Debug, Clone)]
struct Level {
    var: usize,
    factors: Vec<Factor>,
}

/// The gauge-fixed state integrand, split into nested one-dimensional
/// levels so that each factor is evaluated at the innermost level whose
/// variable it depends on.
#[derive(Debug, Clone)]
pub struct StateIntegral {
    constant: Vec<Factor>,
    levels: Vec<Level>,
    n_vars: usize,
    jacobian: f64,
    mp: ModularParameter,
    gauge: String,
}

impl StateIntegral {
    pub fn new(
        x: &Triangulation,
        alpha: &ShapeStructure,
        boundary_state: &[f64],
        gauge: &GaugeFixing,
        mp: &ModularParameter,
    ) -> Result<Self> {
        if alpha.angles.len() != x.num_tetrahedra() {
            return Err(Error::InvalidParameter(format!(
                "{} angle triples for {} tetrahedra",
                alpha.angles.len(),
                x.num_tetrahedra()
            )));
        }
        let boundary = x.boundary_edges();
        if boundary_state.len() != boundary.len() {
            return Err(Error::InvalidParameter(format!(
                "boundary state has {} values for {} boundary edges",
                boundary_state.len(),
                boundary.len()
            )));
        }
        let m = gauge.pairing_matrix(x)?;
        let det = determinant(&m).abs();
        if det < 1e-12 {
            return Err(Error::InvalidGauge("gauge forms are degenerate on the gauge image".into()));
        }
        let mut fixed = vec![false; x.num_edges()];
        let mut jacobian = det;
        let mut desc = Vec::new();
        for form in &gauge.forms {
            let [(e, c)] = form.terms[..] else {
                return Err(Error::InvalidGauge(format!(
                    "form at vertex {} is not a single coordinate",
                    form.vertex
                )));
            };
            if x.is_boundary_edge(e) || fixed[e] || c == 0.0 {
                return Err(Error::InvalidGauge(format!("edge {e} cannot carry the gauge at vertex {}", form.vertex)));
            }
            fixed[e] = true;
            jacobian /= c.abs();
            desc.push(format!("v{}: {}·s{}", form.vertex, c, e));
        }

        // s(e) = offset + coefficient·x_j
        enum Slot {
            Const(f64),
            Var(usize),
        }
        let mut slots = Vec::with_capacity(x.num_edges());
        let mut n_vars = 0;
        let mut bi = 0;
        for e in 0..x.num_edges() {
            if x.is_boundary_edge(e) {
                slots.push(Slot::Const(boundary_state[bi]));
                bi += 1;
            } else if fixed[e] {
                slots.push(Slot::Const(0.0));
            } else {
                slots.push(Slot::Var(n_vars));
                n_vars += 1;
            }
        }
        let mut factors = Vec::new();
        for t in 0..x.num_tetrahedra() {
            let edges = x.edges_of(t);
            let quad_terms = |k: usize| -> (f64, Vec<(usize, f64)>) {
                let [e1, e2] = crate::complexes::quad_edges(k);
                let mut off = 0.0;
                let mut co = Vec::new();
                for le in [e1, e2] {
                    match slots[edges[le]] {
                        Slot::Const(v) => off += v,
                        Slot::Var(j) => co.push((j, 1.0)),
                    }
                }
                (off, co)
            };
            for k in 0..3 {
                let k1 = x.tau(t, k);
                let k2 = x.tau(t, k1);
                let (o1, c1) = quad_terms(k1);
                let (o2, c2) = quad_terms(k2);
                let mut coeffs: Vec<(usize, f64)> = Vec::new();
                for (j, c) in c1.into_iter().chain(c2.into_iter().map(|(j, c)| (j, -c))) {
                    match coeffs.iter_mut().find(|(i, _)| *i == j) {
                        Some(slot) => slot.1 += c,
                        None => coeffs.push((j, c)),
                    }
                }
                coeffs.retain(|(_, c)| *c != 0.0);
                factors.push(Factor { base: mp.delta() * alpha.angle(t, k), offset: o1 - o2, coeffs });
            }
        }

        let (constant, mut rest): (Vec<Factor>, Vec<Factor>) = factors.into_iter().partition(|f| f.coeffs.is_empty());
        // innermost first: the variable touching the fewest remaining factors
        let mut remaining: Vec<usize> = (0..n_vars).collect();
        let mut inner_first = Vec::new();
        while !remaining.is_empty() {
            let count = |v: usize| rest.iter().filter(|f| f.coeffs.iter().any(|(j, _)| *j == v)).count();
            let (pos, _) = remaining.iter().enumerate().min_by_key(|(_, v)| count(**v)).expect("nonempty");
            let var = remaining.remove(pos);
            let (mine, others): (Vec<Factor>, Vec<Factor>) =
                rest.into_iter().partition(|f| f.coeffs.iter().any(|(j, _)| *j == var));
            rest = others;
            inner_first.push(Level { var, factors: mine });
        }
        inner_first.reverse();
        Ok(Self {
            constant,
            levels: inner_first,
            n_vars,
            jacobian,
            mp: mp.clone(),
            gauge: if desc.is_empty() { "none".into() } else { desc.join(", ") },
        })
    }

    /// Number of integration variables, `|Δ₁(X̊)| − |Δ₀(X̊)|`.
    pub fn dim(&self) -> usize {
        self.n_vars
    }

    /// The integrand at a point (including the gauge Jacobian).
    pub fn integrand(&self, vars: &[f64]) -> Result<Complex64> {
        let mut ln = Complex64::new(0.0, 0.0);
        for f in self.constant.iter().chain(self.levels.iter().flat_map(|l| l.factors.iter())) {
            ln += f.ln(vars, &self.mp)?;
        }
        Ok(ln.exp() * self.jacobian)
    }

    fn level(&self, li: usize, vars: &[f64], cfg: &QuadratureConfig, evals: &Cell<usize>, inner_err: &Cell<f64>) -> Result<Complex64> {
        let Some(level) = self.levels.get(li) else {
            return Ok(Complex64::new(1.0, 0.0));
        };
        let inner_cfg = QuadratureConfig { abs_tol: cfg.abs_tol * 0.1, rel_tol: cfg.rel_tol * 0.1, ..cfg.clone() };
        let f = |v: f64| -> Result<Complex64> {
            let mut p = vars.to_vec();
            p[level.var] = v;
            let mut ln = Complex64::new(0.0, 0.0);
            for fac in &level.factors {
                ln += fac.ln(&p, &self.mp)?;
            }
            evals.set(evals.get() + 1);
            Ok(ln.exp() * self.level(li + 1, &p, &inner_cfg, evals, inner_err)?)
        };
        let r = integrate_line_try(&f, cfg)?;
        if li > 0 {
            inner_err.set(inner_err.get().max(r.error_estimate));
        }
        Ok(r.value)
    }

    /// Nested adaptive quadrature, or importance-sampled Monte Carlo over the
    /// whole space when `cfg.monte_carlo` is set (error is one standard error).
    pub fn evaluate(&self, cfg: &QuadratureConfig) -> Result<PartitionResult> {
        cfg.validate()?;
        let mut ln = Complex64::new(0.0, 0.0);
        for f in &self.constant {
            ln += f.ln(&[], &self.mp)?;
        }
        let scale = ln.exp() * self.jacobian;
        let evals = Cell::new(0);
        let inner_err = Cell::new(0.0);
        let (value, error) = if self.levels.is_empty() {
            (Complex64::new(1.0, 0.0), 0.0)
        } else if cfg.monte_carlo {
            let f = |v: &[f64]| -> Result<Complex64> {
                evals.set(evals.get() + 1);
                let mut l = Complex64::new(0.0, 0.0);
                for fac in self.levels.iter().flat_map(|l| l.factors.iter()) {
                    l += fac.ln(v, &self.mp)?;
                }
                Ok(l.exp())
            };
            let r = integrate_nd_try(&f, self.n_vars, cfg)?;
            (r.value, r.error_estimate)
        } else {
            let top = &self.levels[0];
            let inner_cfg = QuadratureConfig { abs_tol: cfg.abs_tol * 0.1, rel_tol: cfg.rel_tol * 0.1, ..cfg.clone() };
            let vars = vec![0.0; self.n_vars];
            let f = |v: f64| -> Result<Complex64> {
                let mut p = vars.clone();
                p[top.var] = v;
                let mut l = Complex64::new(0.0, 0.0);
                for fac in &top.factors {
                    l += fac.ln(&p, &self.mp)?;
                }
                evals.set(evals.get() + 1);
                Ok(l.exp() * self.level(1, &p, &inner_cfg, &evals, &inner_err)?)
            };
            let r = integrate_line_try(&f, cfg)?;
            (r.value, r.error_estimate)
        };
        Ok(PartitionResult {
            value: value * scale,
            error_estimate: (error + inner_err.get()) * scale.norm(),
            dim: self.n_vars,
            gauge: self.gauge.clone(),
            evaluations: evals.get(),
        })
    }
}

/// `W_b(X, s, λ) = |det M| ∫_{∂⁻¹(s)} B(X, t) ∏_v δ(⟨λ_v, t⟩) dt` with
/// `M_vw = ⟨λ_v, bδ_w⟩`; each coordinate form `c·s(e)` pins `s(e) = 0` and
/// contributes `1/|c|`.
pub fn partition_function(
    x: &Triangulation,
    alpha: &ShapeStructure,
    boundary_state: &[f64],
    gauge: &GaugeFixing,
    mp: &ModularParameter,
    cfg: &QuadratureConfig,
) -> Result<PartitionResult> {
    StateIntegral::new(x, alpha, boundary_state, gauge, mp)?.evaluate(cfg)
}

/// `2|Φ_b(u(α))|²`, the factor split off by the knot edge's quad angle α.
pub fn knot_factor(angle: f64, mp: &ModularParameter) -> Result<f64> {
    Ok(2.0 * phi_b(mp.u(angle), mp)?.norm_sqr())
}

#[derive(Debug, Clone, Serialize)]
pub struct InvarianceReport {
    pub before: Complex64,
    pub after: Complex64,
    pub relative_discrepancy: f64,
    pub error_estimate: f64,
}

impl InvarianceReport {
    fn new(a: &PartitionResult, b: &PartitionResult) -> Self {
        let rel = if a.value == b.value { 0.0 } else { (a.value - b.value).norm() / a.value.norm() };
        Self {
            before: a.value,
            after: b.value,
            relative_discrepancy: rel,
            error_estimate: (a.error_estimate + b.error_estimate) / a.value.norm(),
        }
    }
}

/// `W` before and after the shaped 3–2 move at `edge`, with the boundary
/// state carried over and the gauge forms moved along the edge map.
pub fn check_pachner_invariance(
    x: &Triangulation,
    alpha: &ShapeStructure,
    edge: usize,
    boundary_state: &[f64],
    gauge: &GaugeFixing,
    mp: &ModularParameter,
    cfg: &QuadratureConfig,
) -> Result<InvarianceReport> {
    let mv = pachner_32(x, edge, alpha)?;
    let before = partition_function(x, alpha, boundary_state, gauge, mp, cfg)?;
    let y = &mv.complex;
    let mut state = vec![0.0; y.num_edges()];
    for (old, v) in x.boundary_edges().into_iter().zip(boundary_state) {
        let new = mv.edge_map[old].expect("boundary edges survive");
        state[new] = *v;
    }
    let new_boundary: Vec<f64> = y.boundary_edges().into_iter().map(|e| state[e]).collect();
    let mut forms = Vec::new();
    for f in &gauge.forms {
        let [(e, c)] = f.terms[..] else {
            return Err(Error::InvalidGauge("coordinate forms only".into()));
        };
        let ne = mv.edge_map[e].ok_or_else(|| Error::InvalidGauge(format!("gauge edge {e} is the removed axis")))?;
        forms.push((f.vertex, ne, c));
    }
    // vertex ids may be renumbered; match them through the gauge edges' endpoints
    let mut new_forms = Vec::new();
    for ((v, ne, c), f) in forms.into_iter().zip(&gauge.forms) {
        let [a, b] = x.edge_endpoints(f.terms[0].0);
        let [na, nb] = y.edge_endpoints(ne);
        let nv = if v == a { na } else if v == b { nb } else { v };
        new_forms.push((nv, ne, c));
    }
    let after = partition_function(y, &mv.shape, &new_boundary, &GaugeFixing::coordinate(&new_forms), mp, cfg)?;
    Ok(InvarianceReport::new(&before, &after))
}

/// `W(α)` against `W(α + t·g_e)` for the shape gauge generator of `edge`.
pub fn check_shape_gauge_invariance(
    x: &Triangulation,
    alpha: &ShapeStructure,
    edge: usize,
    t: f64,
    gauge: &GaugeFixing,
    mp: &ModularParameter,
    cfg: &QuadratureConfig,
) -> Result<InvarianceReport> {
    let beta = shape_gauge_transform(x, alpha, edge, t)?;
    let boundary = vec![0.0; x.boundary_edges().len()];
    let before = partition_function(x, alpha, &boundary, gauge, mp, cfg)?;
    if t == 0.0 {
        return Ok(InvarianceReport::new(&before, &before));
    }
    let after = partition_function(x, &beta, &boundary, gauge, mp, cfg)?;
    Ok(InvarianceReport::new(&before, &after))
}

/// `W(λ)` against `W(λ′)`.
pub fn faddeev_popov_check(
    x: &Triangulation,
    alpha: &ShapeStructure,
    gauge: &GaugeFixing,
    other: &GaugeFixing,
    mp: &ModularParameter,
    cfg: &QuadratureConfig,
) -> Result<InvarianceReport> {
    let boundary = vec![0.0; x.boundary_edges().len()];
    let a = partition_function(x, alpha, &boundary, gauge, mp, cfg)?;
    if gauge == other {
        return Ok(InvarianceReport::new(&a, &a));
    }
    let b = partition_function(x, alpha, &boundary, other, mp, cfg)?;
    Ok(InvarianceReport::new(&a, &b))
}
