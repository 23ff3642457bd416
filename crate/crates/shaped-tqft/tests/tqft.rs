use std::f64::consts::PI;

use approx::assert_relative_eq;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shaped_tqft::complexes::*;
use shaped_tqft::integrate::QuadratureConfig;
use shaped_tqft::special_fn::{phi_b, ModularParameter};
use shaped_tqft::tqft::*;
use shaped_tqft::Error;

fn mp(b: f64) -> ModularParameter {
    ModularParameter::new(b).unwrap()
}

#[test]
fn trefoil_matches_knot_factor() {
    let k = trefoil();
    let x = &k.complex;
    let (_, q) = k.knot_quad();
    let cfg = QuadratureConfig::with_tol(1e-9);
    let gf = GaugeFixing::default_for(x).unwrap();
    for b in [1.0, 0.8] {
        let m = mp(b);
        for a in [[0.7, 1.1, PI - 1.8], [PI / 3.0; 3], [0.4, 0.5, PI - 0.9]] {
            let alpha = ShapeStructure::new(vec![a]).unwrap();
            let r = partition_function(x, &alpha, &[], &gf, &m, &cfg).unwrap();
            assert_eq!(r.dim, 1);
            // independent route: Φ_b evaluated directly at u(α) = c_b(1 − α/π)
            let u = m.c_b * (1.0 - a[q] / PI);
            let want = 2.0 * phi_b(u, &m).unwrap().norm_sqr();
            assert_relative_eq!(r.value.re, want, max_relative = 1e-7);
            assert!(r.value.im.abs() < 1e-7 * want);
        }
    }
}

#[test]
fn weights_are_conjugate_for_reversed_orientation() {
    let m = mp(1.0);
    let s = [0.13, -0.4, 0.25, 0.0, 0.31, -0.07];
    let alpha = ShapeStructure::new(vec![[0.7, 1.1, PI - 1.8]]).unwrap();
    let pos = build_complex(&[1], &[]).unwrap();
    let neg = build_complex(&[-1], &[]).unwrap();
    let wp = tet_weight(&pos, &alpha, &s, 0, &m).unwrap();
    let wn = tet_weight(&neg, &alpha, &s, 0, &m).unwrap();
    assert!((wp.conj() - wn).norm() < 1e-12 * wp.norm());
    assert!((triangulation_weight(&pos, &alpha, &s, &m).unwrap() - wp).norm() < 1e-14 * wp.norm());
}

#[test]
fn trefoil_gauge_invariance() {
    let k = trefoil();
    let x = &k.complex;
    let m = mp(1.0);
    let cfg = QuadratureConfig::with_tol(1e-9);
    let alpha = ShapeStructure::new(vec![[0.7, 1.1, PI - 1.8]]).unwrap();
    let gf = GaugeFixing::default_for(x).unwrap();
    for other in [GaugeFixing::coordinate(&[(0, 0, 1.0)]), GaugeFixing::coordinate(&[(0, 1, 0.5)])] {
        let r = faddeev_popov_check(x, &alpha, &gf, &other, &m, &cfg).unwrap();
        assert!(r.relative_discrepancy < 1e-7, "{other:?}: {r:?}");
    }
    let same = faddeev_popov_check(x, &alpha, &gf, &gf, &m, &cfg).unwrap();
    assert_eq!(same.relative_discrepancy, 0.0);
    for e in x.interior_edges() {
        let (lo, hi) = shape_gauge_interval(x, &alpha, e);
        for t in [0.3 * lo.max(-1.0), 0.3 * hi.min(1.0)] {
            let r = check_shape_gauge_invariance(x, &alpha, e, t, &gf, &m, &cfg).unwrap();
            assert!(r.relative_discrepancy < 1e-7, "edge {e}, t = {t}: {r:?}");
        }
    }
}

#[test]
fn figure_eight_factorizes() {
    let k = figure_eight();
    let x = &k.complex;
    let m = mp(1.0);
    let beta = [1.0, 0.9, PI - 1.9];
    let alpha = ShapeStructure::new(vec![[1.2, 0.8, PI - 2.0], beta, beta]).unwrap();
    let gf = GaugeFixing::default_for(x).unwrap();
    let r = partition_function(x, &alpha, &[], &gf, &m, &QuadratureConfig::with_tol(1e-4)).unwrap();
    assert_eq!(r.dim, 3);
    let fine = QuadratureConfig::with_tol(1e-10);
    let cf = figure_eight_closed_form(1.2, &m, &fine).unwrap();
    assert_relative_eq!(r.value.re, cf.value.re, max_relative = 1e-4);
    assert!(r.value.im.abs() < 1e-6 * r.value.norm());
    let red = figure_eight_reduced(1.0, &m, &fine).unwrap();
    assert_relative_eq!(red.value.re * knot_factor(1.2, &m).unwrap(), cf.value.re, max_relative = 1e-8);
}

fn bipyramid_shape(x: &Triangulation, axis: usize, u: [f64; 3], v: [f64; 3]) -> ShapeStructure {
    let mut angles = vec![[0.0; 3]; 3];
    for t in 0..3 {
        let le = x.edge_occurrences(axis).into_iter().find(|(s, _)| *s == t).unwrap().1;
        let k = quad_of_edge(le);
        angles[t][k] = u[t];
        angles[t][(k + 1) % 3] = v[t];
        angles[t][(k + 2) % 3] = PI - u[t] - v[t];
    }
    ShapeStructure::new(angles).unwrap()
}

#[test]
fn pachner_move_on_bipyramid() {
    let x = bipyramid();
    let axis = x.interior_edges()[0];
    let m = mp(1.0);
    let cfg = QuadratureConfig::with_tol(1e-9);
    let gf = GaugeFixing::default_for(&x).unwrap();
    assert!(gf.forms.is_empty());
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let u0: f64 = rng.gen_range(1.6..2.5);
        let u1 = rng.gen_range(1.6f64..2.5).min(2.0 * PI - u0 - 0.6);
        let u = [u0, u1, 2.0 * PI - u0 - u1];
        let v = u.map(|a| rng.gen_range(0.2..0.8) * (PI - a));
        let alpha = bipyramid_shape(&x, axis, u, v);
        let state: Vec<f64> = x.boundary_edges().iter().map(|_| rng.gen_range(-0.3..0.3)).collect();
        let r = check_pachner_invariance(&x, &alpha, axis, &state, &gf, &m, &cfg).unwrap();
        assert!(r.relative_discrepancy < 1e-5, "{u:?} {v:?}: {r:?}");
    }
}

#[test]
fn five_two_reduced_matches_balanced_value() {
    let m = mp(1.0);
    let beta = [1.0, 0.9];
    let gamma = [PI - 1.8, 0.8];
    let delta = [1.0, PI - 1.9 + 0.8];
    let r = five_two_reduced(beta, gamma, delta, &m, &QuadratureConfig::with_tol(1e-5)).unwrap();
    let cf = five_two_balanced_closed_form(&m, &QuadratureConfig::with_tol(1e-10)).unwrap();
    assert_relative_eq!(cf.value.re, 0.0640277647, max_relative = 1e-8);
    assert_relative_eq!(r.value.norm(), cf.value.re, max_relative = 1e-3);
}

#[test]
fn six_one_reduced_is_stable() {
    let m = mp(1.0);
    let angles = SixOneAngles::uniform(1.0);
    let coarse = six_one_reduced(&angles, &m, &QuadratureConfig::with_tol(1e-3)).unwrap();
    let fine = six_one_reduced(&angles, &m, &QuadratureConfig::with_tol(1e-5)).unwrap();
    let diff = (coarse.value - fine.value).norm();
    assert!(diff <= coarse.error_estimate + fine.error_estimate, "{coarse:?} {fine:?}");
    assert!(fine.value.re > 0.0);
    assert!(fine.value.im.abs() < 1e-4 * fine.value.norm());
}

#[test]
fn invalid_inputs() {
    let k = trefoil();
    let x = &k.complex;
    let m = mp(1.0);
    let cfg = QuadratureConfig::with_tol(1e-6);
    let gf = GaugeFixing::default_for(x).unwrap();
    let two = ShapeStructure::uniform(2, [PI / 3.0; 3]).unwrap();
    assert!(matches!(partition_function(x, &two, &[], &gf, &m, &cfg), Err(Error::InvalidParameter(_))));
    let one = ShapeStructure::uniform(1, [PI / 3.0; 3]).unwrap();
    assert!(matches!(partition_function(x, &one, &[0.1], &gf, &m, &cfg), Err(Error::InvalidParameter(_))));
    let zero = GaugeFixing::coordinate(&[(0, 0, 0.0)]);
    assert!(matches!(partition_function(x, &one, &[], &zero, &m, &cfg), Err(Error::InvalidGauge(_))));
    let missing = GaugeFixing { forms: vec![] };
    assert!(matches!(partition_function(x, &one, &[], &missing, &m, &cfg), Err(Error::InvalidGauge(_))));
    assert!(figure_eight_closed_form(PI, &m, &cfg).is_err());
    let bad = SixOneAngles { beta: [2.0, 1.5], ..SixOneAngles::uniform(1.0) };
    assert!(matches!(six_one_reduced(&bad, &m, &cfg), Err(Error::ShapeViolation(_))));
    let w = partition_function(x, &one, &[], &gf, &m, &cfg).unwrap();
    assert!(w.value.norm() > 0.0 && w.value != Complex64::new(0.0, 0.0));
}

#[test]
fn monte_carlo_pipelines_match_reduced_forms() {
    let m = mp(1.0);
    let a = PI / 3.0;
    let k = knot_factor(a, &m).unwrap();
    let fine = QuadratureConfig::with_tol(1e-7);
    let want_52 = k * five_two_reduced([a; 2], [a; 2], [a; 2], &m, &fine).unwrap().value.re;
    let want_61 = k * six_one_reduced(&SixOneAngles::uniform(a), &m, &fine).unwrap().value.re;
    let cfg = QuadratureConfig { monte_carlo: true, mc_samples: 400_000, rng_seed: 3, ..QuadratureConfig::with_tol(1e-4) };
    for (knot, want) in [(five_two(), want_52), (six_one(), want_61)] {
        let x = &knot.complex;
        let alpha = ShapeStructure::uniform(x.num_tetrahedra(), [a; 3]).unwrap();
        let gf = GaugeFixing::default_for(x).unwrap();
        let r = partition_function(x, &alpha, &[], &gf, &m, &cfg).unwrap();
        assert_eq!(r.dim, x.num_tetrahedra());
        assert!((r.value.re - want).abs() < 3.0 * r.error_estimate, "{r:?} vs {want}");
        assert!(r.error_estimate < 0.02 * want);
    }
}
