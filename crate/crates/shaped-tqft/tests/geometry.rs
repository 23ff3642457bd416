use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use num_complex::Complex64;
use proptest::prelude::*;
use shaped_tqft::complexes::*;
use shaped_tqft::geometry::*;
use shaped_tqft::integrate::QuadratureConfig;
use shaped_tqft::special_fn::lobachevsky_quadrature;
use shaped_tqft::Error;

fn lob(t: f64) -> f64 {
    lobachevsky_quadrature(t, &QuadratureConfig::with_tol(1e-14)).unwrap()
}

/// Shape on the figure-eight complement: the complete structure moved along
/// tangential directions by `c`.
fn complement_shape(c: &[f64]) -> ShapeStructure {
    let x = figure_eight_complement();
    GaugeChart::tangential(&x, &ShapeStructure::uniform(2, [PI / 3.0; 3]).unwrap()).point(c).unwrap()
}

#[test]
fn regular_volume() {
    for n in 1..4 {
        let alpha = ShapeStructure::uniform(n, [PI / 3.0; 3]).unwrap();
        assert_abs_diff_eq!(shape_volume(&alpha), n as f64 * 3.0 * lob(PI / 3.0), epsilon = 1e-12);
    }
    let thin = ShapeStructure::new(vec![[1e-9, PI / 2.0, PI / 2.0 - 1e-9]]).unwrap();
    assert!(shape_volume(&thin).abs() < 1e-7);

    let a = ShapeStructure::new(vec![[0.4, 1.1, PI - 1.5]]).unwrap();
    let rotated = ShapeStructure::new(vec![[1.1, PI - 1.5, 0.4]]).unwrap();
    assert_abs_diff_eq!(shape_volume(&a), shape_volume(&rotated), epsilon = 1e-15);
}

#[test]
fn shape_parameter_relations() {
    let x = figure_eight();
    let alpha = ShapeStructure::new(vec![[0.9, 1.1, PI - 2.0], [0.7, 1.3, PI - 2.0], [0.5, 1.2, PI - 1.7]]).unwrap();
    let z = shape_parameters(&x.complex, &alpha);
    for (t, zt) in z.iter().enumerate() {
        for k in 0..3 {
            let k1 = x.complex.tau(t, k);
            let k2 = x.complex.tau(t, k1);
            assert!(zt[k].im > 0.0);
            assert!((zt[k1] - (1.0 - 1.0 / zt[k])).norm() < 1e-10);
            assert!((zt[k2] - 1.0 / (1.0 - zt[k])).norm() < 1e-10);
            assert!((zt[k] * zt[k1] * zt[k2] + 1.0).norm() < 1e-10);
        }
    }
}

#[test]
fn single_tetrahedron_has_no_gluing_equations() {
    let x = single_tetrahedron();
    let alpha = ShapeStructure::uniform(1, [PI / 3.0; 3]).unwrap();
    assert!(gluing_residual(&x, &alpha).is_empty());
}

#[test]
fn complement_maximizer_is_complete_structure() {
    let x = figure_eight_complement();
    let start = complement_shape(&[0.2, -0.15, 0.1]);
    assert!(gluing_residual(&x, &start).iter().any(|r| r.residual > 1e-2));
    let m = maximize_volume_in_gauge_class(&x, &start, 1e-12).unwrap();
    assert!(m.converged);
    for a in m.shape.angles.iter().flatten() {
        assert_abs_diff_eq!(*a, PI / 3.0, epsilon = 1e-6);
    }
    for r in gluing_residual(&x, &m.shape) {
        assert!(r.residual < 1e-8, "edge {} residual {}", r.edge, r.residual);
    }
    assert_abs_diff_eq!(m.volume, 6.0 * lob(PI / 3.0), epsilon = 1e-10);
}

/// Newton's method on one edge equation restricted to `z₁ = z₂`, with
/// `z′ = 1/(1−z)` and `z″ = 1 − 1/z`; no volume involved.
#[test]
fn complement_shapes_solve_thurston_equations() {
    let x = figure_eight_complement();
    let e = x.interior_edges()[0];
    let occ = x.edge_occurrences(e);
    let eq = |w: Complex64| -> Complex64 {
        let zs = [w, 1.0 / (1.0 - w), 1.0 - 1.0 / w];
        let mut p = Complex64::new(1.0, 0.0);
        for (_, le) in &occ {
            p *= zs[quad_of_edge(*le)];
        }
        p - 1.0
    };
    let mut w = Complex64::new(0.6, 0.8);
    for _ in 0..60 {
        let h = 1e-7;
        let d = (eq(w + h) - eq(w - h)) / (2.0 * h);
        w -= eq(w) / d;
    }
    assert!(eq(w).norm() < 1e-12);
    let m = maximize_volume_in_gauge_class(&x, &complement_shape(&[0.1, 0.05, -0.1]), 1e-12).unwrap();
    let z = shape_parameters(&x, &m.shape);
    for zt in &z {
        assert!((zt[0] - w).norm() < 1e-6, "{} vs {}", zt[0], w);
    }
}

#[test]
fn critical_start_is_fixed_point() {
    let x = figure_eight_complement();
    let alpha = ShapeStructure::uniform(2, [PI / 3.0; 3]).unwrap();
    let m = maximize_volume_in_gauge_class(&x, &alpha, 1e-10).unwrap();
    assert_eq!(m.iterations, 0);
    for (a, b) in m.shape.angles.iter().flatten().zip(alpha.angles.iter().flatten()) {
        assert_abs_diff_eq!(a, b, epsilon = 1e-15);
    }
}

#[test]
fn boundary_start_is_reported_or_moves_inward() {
    let x = figure_eight_complement();
    let chart = GaugeChart::tangential(&x, &ShapeStructure::uniform(2, [PI / 3.0; 3]).unwrap());
    // walk along a basis direction until an angle is within 1e-3 of the box
    let d = &chart.basis[0];
    let worst = d.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let t = (PI / 3.0 - 1e-3) / worst;
    let start = chart.point(&[t, 0.0, 0.0]).or_else(|_| chart.point(&[-t, 0.0, 0.0])).unwrap();
    match maximize_volume_in_gauge_class(&x, &start, 1e-10) {
        Ok(m) => {
            assert!(ShapeStructure::new(m.shape.angles.clone()).is_ok());
            assert!(m.shape.angles.iter().flatten().all(|a| *a > 1e-3));
        }
        Err(e) => assert!(matches!(e, Error::BoundaryDegeneration(_))),
    }
}

#[test]
fn random_shapes_fail_gluing_equations() {
    let x = figure_eight_complement();
    let alpha = complement_shape(&[0.3, -0.2, 0.25]);
    assert!(gluing_residual(&x, &alpha).iter().any(|r| r.residual > 1e-2));
}

#[test]
fn holonomy_report() {
    let x = figure_eight_complement();
    let m = maximize_volume_in_gauge_class(&x, &complement_shape(&[0.1, 0.1, 0.1]), 1e-12).unwrap();
    assert!(angle_holonomy_eigenvalue_report(&x, &m.shape, &[], 1e-8).unwrap().is_empty());
    let loops: Vec<_> = x.interior_edges().into_iter().map(|e| x.edge_loop(e).unwrap()).collect();
    let report = angle_holonomy_eigenvalue_report(&x, &m.shape, &loops, 1e-8).unwrap();
    for r in &report {
        assert_abs_diff_eq!(r.holonomy, 2.0 * PI, epsilon = 1e-10);
        assert_abs_diff_eq!(r.phase, PI, epsilon = 1e-10);
    }
    let off = complement_shape(&[0.3, -0.2, 0.25]);
    assert!(matches!(angle_holonomy_eigenvalue_report(&x, &off, &loops, 1e-8), Err(Error::NotCritical(_))));
}

fn chart_point() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-0.3f64..0.3, 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn gradient_matches_finite_differences(c in chart_point()) {
        let x = figure_eight_complement();
        let chart = GaugeChart::tangential(&x, &ShapeStructure::uniform(2, [PI / 3.0; 3]).unwrap());
        prop_assume!(chart.point(&c).is_ok());
        let g = chart.gradient(&c).unwrap();
        let h = 1e-6;
        for i in 0..3 {
            let mut up = c.clone();
            let mut dn = c.clone();
            up[i] += h;
            dn[i] -= h;
            let fd = (shape_volume(&chart.point(&up).unwrap()) - shape_volume(&chart.point(&dn).unwrap())) / (2.0 * h);
            prop_assert!((fd - g[i]).abs() <= 1e-6 * g[i].abs() + 1e-9, "{} vs {}", fd, g[i]);
        }
    }

    #[test]
    fn volume_is_concave_along_chart_segments(c0 in chart_point(), c1 in chart_point()) {
        let x = figure_eight_complement();
        let chart = GaugeChart::tangential(&x, &ShapeStructure::uniform(2, [PI / 3.0; 3]).unwrap());
        let mid: Vec<f64> = c0.iter().zip(&c1).map(|(a, b)| 0.5 * (a + b)).collect();
        let (Ok(p0), Ok(p1), Ok(pm)) = (chart.point(&c0), chart.point(&c1), chart.point(&mid)) else {
            return Ok(());
        };
        prop_assert!(shape_volume(&pm) >= 0.5 * (shape_volume(&p0) + shape_volume(&p1)) - 1e-12);
    }

    #[test]
    fn edge_type_moves_preserve_holonomy(t in -0.2f64..0.2, pick in 0usize..4) {
        let k = figure_eight();
        let x = &k.complex;
        let alpha = ShapeStructure::new(vec![[0.9, 1.1, PI - 2.0], [0.7, 1.3, PI - 2.0], [0.9, 1.2, PI - 2.1]]).unwrap();
        let chart = GaugeChart::edge_type(x, &alpha);
        let mut c = vec![0.0; chart.dim()];
        c[pick % chart.dim()] = t;
        let Ok(beta) = chart.point(&c) else { return Ok(()); };
        for e in x.interior_edges() {
            let l = x.edge_loop(e).unwrap();
            let a = angle_holonomy(x, &alpha, &l).unwrap();
            let b = angle_holonomy(x, &beta, &l).unwrap();
            prop_assert!((a - b).abs() < 1e-12);
        }
    }
}
