//! Hyperbolic volume of shape structures, volume maximization over the
//! tangential directions, Thurston shape parameters and gluing equations.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::complexes::{
    angle_holonomy, edge_generator, quad_of_edge, tas_null_space, LoopStep, ShapeStructure,
    Triangulation,
};
use crate::error::{Error, Result};
use crate::special_fn::{lobachevsky, lobachevsky_derivative};

const LOBACHEVSKY_TOL: f64 = 1e-15;

/// `Σ_T Λ(α(q)) + Λ(α(q′)) + Λ(α(q″))`.
pub fn shape_volume(alpha: &ShapeStructure) -> f64 {
    alpha
        .angles
        .iter()
        .flatten()
        .map(|a| lobachevsky(*a, LOBACHEVSKY_TOL).expect("finite angle"))
        .sum()
}

/// `∂V/∂α(q) = −ln|2 sin α(q)|` in flattened quad order.
pub fn volume_gradient(alpha: &ShapeStructure) -> Vec<f64> {
    alpha.to_vector().into_iter().map(lobachevsky_derivative).collect()
}

/// `z(q) = e^{iα(q)} sin α(q″) / sin α(q′)` per tetrahedron and quad.
pub fn shape_parameters(x: &Triangulation, alpha: &ShapeStructure) -> Vec<[Complex64; 3]> {
    (0..x.num_tetrahedra())
        .map(|t| {
            let mut z = [Complex64::new(0.0, 0.0); 3];
            for (k, zk) in z.iter_mut().enumerate() {
                let k1 = x.tau(t, k);
                let k2 = x.tau(t, k1);
                *zk = Complex64::from_polar(1.0, alpha.angle(t, k)) * alpha.angle(t, k2).sin() / alpha.angle(t, k1).sin();
            }
            z
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeResidual {
    pub edge: usize,
    /// `∏_{q∼e} z(q)`
    pub product: Complex64,
    /// `|∏ z − 1|`
    pub residual: f64,
}

/// Thurston's gluing equation at every interior edge: the product of the
/// shape parameters of the quads at the edge should be 1.
pub fn gluing_residual(x: &Triangulation, alpha: &ShapeStructure) -> Vec<EdgeResidual> {
    let z = shape_parameters(x, alpha);
    x.interior_edges()
        .into_iter()
        .map(|e| {
            let product: Complex64 = x.edge_occurrences(e).iter().map(|(t, le)| z[*t][quad_of_edge(*le)]).product();
            EdgeResidual { edge: e, product, residual: (product - 1.0).norm() }
        })
        .collect()
}

/// Affine chart `α + Σ cᵢ vᵢ` of shape structures around a base shape.
#[derive(Debug, Clone)]
pub struct GaugeChart {
    pub base: ShapeStructure,
    /// direction vectors in flattened quad order
    pub basis: Vec<Vec<f64>>,
}

impl GaugeChart {
    /// Edge-type gauge directions `g_e`, one per interior edge.
    pub fn edge_type(x: &Triangulation, alpha: &ShapeStructure) -> Self {
        let basis = x.interior_edges().into_iter().map(|e| edge_generator(x, e).into_iter().flatten().collect()).collect();
        Self { base: alpha.clone(), basis }
    }

    /// Orthonormal basis of all tangential angle structures.
    pub fn tangential(x: &Triangulation, alpha: &ShapeStructure) -> Self {
        Self { base: alpha.clone(), basis: tas_null_space(x) }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn raw(&self, c: &[f64]) -> Vec<f64> {
        let mut v = self.base.to_vector();
        for (ci, d) in c.iter().zip(&self.basis) {
            for (vi, di) in v.iter_mut().zip(d) {
                *vi += ci * di;
            }
        }
        v
    }

    /// Shape at chart coordinates `c`; fails outside the angle box.
    pub fn point(&self, c: &[f64]) -> Result<ShapeStructure> {
        let v = self.raw(c);
        // tetrahedron sums are preserved exactly up to rounding
        let angles = v
            .chunks(3)
            .map(|a| {
                let d = (PI - a[0] - a[1] - a[2]) / 3.0;
                [a[0] + d, a[1] + d, a[2] + d]
            })
            .collect();
        ShapeStructure::new(angles)
    }

    /// `∂V/∂cᵢ = ⟨∇V, vᵢ⟩`.
    pub fn gradient(&self, c: &[f64]) -> Result<Vec<f64>> {
        let g = volume_gradient(&self.point(c)?);
        Ok(self.basis.iter().map(|d| d.iter().zip(&g).map(|(a, b)| a * b).sum()).collect())
    }

    /// `Σ_q vᵢ(q) vⱼ(q) Λ″(α(q))` with `Λ″(θ) = −cot θ`.
    fn hessian(&self, c: &[f64]) -> Result<DMatrix<f64>> {
        let a = self.point(c)?.to_vector();
        let h: Vec<f64> = a.iter().map(|t| -1.0 / t.tan()).collect();
        let n = self.dim();
        Ok(DMatrix::from_fn(n, n, |i, j| (0..a.len()).map(|q| self.basis[i][q] * self.basis[j][q] * h[q]).sum()))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VolumeMaximum {
    pub shape: ShapeStructure,
    pub volume: f64,
    pub converged: bool,
    pub iterations: usize,
    /// chart gradient norm at the returned shape
    pub gradient_norm: f64,
}

const BOUNDARY_MARGIN: f64 = 1e-6;
const MAX_ITER: usize = 500;

/// Maximize the volume over all shape structures with the same edge weights
/// as `alpha`, i.e. over the tangential directions.
pub fn maximize_volume_in_gauge_class(x: &Triangulation, alpha: &ShapeStructure, tol: f64) -> Result<VolumeMaximum> {
    maximize_volume(&GaugeChart::tangential(x, alpha), tol)
}

/// Newton ascent on the chart (falling back to the gradient when the chart
/// Hessian is not negative definite) with backtracking that keeps every angle
/// at least `10⁻⁶` away from `0` and `π`.
pub fn maximize_volume(chart: &GaugeChart, tol: f64) -> Result<VolumeMaximum> {
    let n = chart.dim();
    let mut c = vec![0.0; n];
    let near_boundary = |s: &ShapeStructure| s.angles.iter().flatten().any(|a| *a < BOUNDARY_MARGIN || *a > PI - BOUNDARY_MARGIN);
    let start = chart.point(&c)?;
    if near_boundary(&start) {
        return Err(Error::BoundaryDegeneration("starting shape lies on the boundary margin".into()));
    }
    let mut vol = shape_volume(&start);
    for iter in 0..MAX_ITER {
        let g = chart.gradient(&c)?;
        let gnorm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if gnorm <= tol {
            let shape = chart.point(&c)?;
            return Ok(VolumeMaximum { volume: shape_volume(&shape), shape, converged: true, iterations: iter, gradient_norm: gnorm });
        }
        let gv = DVector::from_vec(g.clone());
        let h = chart.hessian(&c)?;
        let dir = match (-h).cholesky() {
            Some(ch) => ch.solve(&gv),
            None => gv.clone(),
        };
        let dir = if dir.dot(&gv) > 0.0 { dir } else { gv };
        let mut step = 1.0;
        loop {
            let trial: Vec<f64> = c.iter().zip(dir.iter()).map(|(a, d)| a + step * d).collect();
            if let Ok(s) = chart.point(&trial) {
                if !near_boundary(&s) {
                    let v = shape_volume(&s);
                    if v >= vol + 1e-4 * step * dir.dot(&DVector::from_vec(g.clone())) || step < 1e-12 {
                        c = trial;
                        vol = v;
                        break;
                    }
                }
            }
            step *= 0.5;
            if step < 1e-14 {
                return Err(Error::BoundaryDegeneration(format!(
                    "ascent pinned against the angle box after {iter} iterations (gradient {gnorm:.3e})"
                )));
            }
        }
    }
    let shape = chart.point(&c)?;
    let g = chart.gradient(&c)?;
    Ok(VolumeMaximum {
        volume: shape_volume(&shape),
        shape,
        converged: false,
        iterations: MAX_ITER,
        gradient_norm: g.iter().map(|v| v * v).sum::<f64>().sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HolonomyEntry {
    pub holonomy: f64,
    /// predicted eigenvalue phases `±β(s)/2`
    pub phase: f64,
}

/// Angle holonomy and eigenvalue phase along each loop; requires the shape
/// to solve the gluing equations to `tol`.
pub fn angle_holonomy_eigenvalue_report(
    x: &Triangulation,
    beta: &ShapeStructure,
    loops: &[Vec<LoopStep>],
    tol: f64,
) -> Result<Vec<HolonomyEntry>> {
    if let Some(worst) = gluing_residual(x, beta).iter().map(|r| r.residual).reduce(f64::max) {
        if worst > tol {
            return Err(Error::NotCritical(format!("gluing residual {worst:.3e} exceeds {tol:.1e}")));
        }
    }
    loops
        .iter()
        .map(|l| {
            let h = angle_holonomy(x, beta, l)?;
            Ok(HolonomyEntry { holonomy: h, phase: h / 2.0 })
        })
        .collect()
}
