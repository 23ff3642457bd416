use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shaped_tqft::identities::*;
use shaped_tqft::integrate::QuadratureConfig;
use shaped_tqft::special_fn::ModularParameter;
use shaped_tqft::Error;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn mp(b: f64) -> ModularParameter {
    ModularParameter::new(b).unwrap()
}

#[test]
fn hyperbolic_pentagon() {
    let cfg = QuadratureConfig::with_tol(1e-9);
    let m = mp(1.0);
    assert!(check_hyperbolic_pentagon(&BalancedParams33::symmetric(&m), &m, &cfg).unwrap().residual < 1e-6);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for b in [1.0, 1.3] {
        let m = mp(b);
        for _ in 0..20 {
            let p = BalancedParams33::random(&mut rng, &m);
            let r = check_hyperbolic_pentagon(&p, &m, &cfg).unwrap();
            assert!(r.residual < 1e-5, "b = {b}: {r:?}");
        }
    }
}

#[test]
fn pentagon_relabeling_and_tolerance() {
    let m = mp(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let p = BalancedParams33::random(&mut rng, &m);
    let swapped = BalancedParams33 { a: [p.a[1], p.a[0], p.a[2]], b: [p.b[1], p.b[0], p.b[2]] };
    let cfg = QuadratureConfig::with_tol(1e-10);
    let r1 = check_hyperbolic_pentagon(&p, &m, &cfg).unwrap();
    let r2 = check_hyperbolic_pentagon(&swapped, &m, &cfg).unwrap();
    assert!((r1.rhs - r2.rhs).norm() < 1e-14 * r1.rhs.norm());
    assert!((r1.lhs - r2.lhs).norm() < 1e-12 * r1.rhs.norm());

    for tol in [1e-4, 1e-6, 1e-8, 1e-10] {
        let r = check_hyperbolic_pentagon(&p, &m, &QuadratureConfig::with_tol(tol)).unwrap();
        assert!(r.residual <= tol, "tol {tol}: {}", r.residual);
    }
    let bad = BalancedParams33::new([c(0.3, 0.0); 3], [c(0.3, 0.0); 3], &m);
    assert!(matches!(bad, Err(Error::ConstraintViolation(_))));
}

#[test]
fn hyperbolic_beta_integral() {
    let cfg = QuadratureConfig::with_tol(1e-9);
    let m = mp(1.0);
    let sym = check_hyperbolic_beta_integral(&BalancedParams6::symmetric(&m), &m, &cfg).unwrap();
    assert!(sym.residual < 1e-5);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let p = BalancedParams6::random(&mut rng, &m);
        assert!(check_hyperbolic_beta_integral(&p, &m, &cfg).unwrap().residual < 1e-4);
    }
    let mut off = BalancedParams6::symmetric(&m);
    off.alpha[0] += 1e-2;
    let r = check_hyperbolic_beta_integral(&off, &m, &cfg).unwrap();
    assert!(r.residual >= 10.0 * sym.residual.max(1e-9));
}

#[test]
fn elliptic_beta_integral() {
    let (p, q) = (0.3, 0.3);
    let s0 = c((p * q as f64).powf(1.0 / 6.0), 0.0);
    assert!(check_elliptic_beta_integral([s0; 6], p, q, 1e-13).unwrap().residual < 1e-10);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..5 {
        let s = random_elliptic_params(&mut rng, p, q, 0.7);
        assert!(s.iter().all(|x| x.norm() <= 0.7));
        let prod: Complex64 = s.iter().product();
        assert!((prod - p * q).norm() < 1e-14);
        assert!(check_elliptic_beta_integral(s, p, q, 1e-12).unwrap().residual < 1e-8);
    }
    let mut s = [s0; 6];
    s[0] *= 1.01;
    assert!(check_elliptic_beta_integral(s, p, q, 1e-12).unwrap().residual > 1e-3);
    s[0] = c(1.2, 0.0);
    assert!(check_elliptic_beta_integral(s, p, q, 1e-12).is_err());
}

#[test]
fn classical_pentagon() {
    let cfg = QuadratureConfig::with_tol(1e-10);
    let fifth = c(0.2, 0.0);
    assert!(check_classical_pentagon([fifth; 3], [fifth; 2], &cfg).unwrap().residual < 1e-8);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let mut g = || c(rng.gen_range(0.1..1.5), rng.gen_range(-0.3..0.3));
        let (a, b) = ([g(), g(), g()], [g(), g()]);
        let r = check_classical_pentagon(a, b, &cfg).unwrap();
        assert!(r.residual < 1e-7, "{a:?} {b:?}: {r:?}");
        let s = check_classical_pentagon([a[1], a[0], a[2]], [b[1], b[0]], &cfg).unwrap();
        assert!((s.rhs - r.rhs).norm() < 1e-13 * r.rhs.norm());
        assert!((s.lhs - r.lhs).norm() < 1e-9 * r.rhs.norm());
    }
    assert!(check_classical_pentagon([c(-0.1, 0.0), fifth, fifth], [fifth; 2], &cfg).is_err());
}

#[test]
fn orthogonality_of_hyper_b() {
    let m = mp(1.0);
    let cfg = QuadratureConfig::with_tol(1e-7);
    let wide = check_orthogonality_smeared(0.2, 0.5, 0.0, 0.01, &m, &cfg).unwrap();
    assert!((wide.smeared - wide.prediction).norm() < 0.10 * wide.prediction, "{wide:?}");
    let narrow = check_orthogonality_smeared(0.2, 0.25, 0.0, 0.01, &m, &cfg).unwrap();
    assert!((narrow.smeared - narrow.prediction).norm() < 0.05 * narrow.prediction, "{narrow:?}");
    let far = check_orthogonality_smeared(0.2, 0.25, 0.75, 0.01, &m, &cfg).unwrap();
    assert!(far.deviation < 0.02, "{far:?}");
    assert!(far.smeared.norm() < 0.05 * narrow.prediction);
}

#[test]
fn bailey_seed_pair() {
    let m = mp(1.0);
    let cfg = QuadratureConfig::with_tol(1e-9);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..5 {
        let seed = BaileySeed::random(&mut rng, &m);
        assert!((2.0 * seed.t + seed.alpha[0] + seed.alpha[1] + seed.beta[0] + seed.beta[1] - m.q).norm() < 1e-14);
        let w = c(rng.gen_range(-0.05..0.05), rng.gen_range(-0.5..0.5));
        let r = seed.verify(w, &m, &cfg).unwrap();
        assert!(r.residual < 1e-5, "{r:?}");
    }
}

#[test]
fn bailey_step_and_octahedron() {
    let m = mp(1.0);
    let cfg = QuadratureConfig::with_tol(1e-7);
    let p = OctahedronParams::symmetric(&m);
    let sym = check_octahedron_duality(&p, &m, &cfg).unwrap();
    assert!(sym.residual < 1e-4, "{sym:?}");

    // the two forms of β′: closed seed β inside one integral, and the double integral
    let seed = bailey_pair_seed(p.alpha, p.beta, &m).unwrap();
    let step = bailey_step(&seed, p.s, p.u);
    let single = step.beta_fn(p.w, &m, &cfg).unwrap();
    let double = step.z5(p.w, c(0.0, 0.0), &m, &cfg).unwrap();
    assert!((single.value - double.value).norm() < 1e-4 * single.value.norm());

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let cfg = QuadratureConfig::with_tol(1e-6);
    for _ in 0..5 {
        let p = OctahedronParams::random(&mut rng, &m);
        let r = check_octahedron_duality(&p, &m, &cfg).unwrap();
        assert!(r.residual < 1e-3, "{p:?}: {r:?}");
        let d = octahedron_with_defect(&p, c(1e-2, 0.0), &m, &cfg).unwrap();
        assert!(d.residual >= 10.0 * r.residual.max(1e-6), "{} vs {}", d.residual, r.residual);
    }
}

#[test]
fn entropy_pentagon() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..100 {
        let (a, b) = random_entropy_tuple(&mut rng);
        assert!((a[0] * a[1] - b[0] * b[1] * b[2]).abs() < 1e-15);
        assert!(check_entropy_pentagon(a, b).unwrap() < 1e-12);
    }
    // a₁ = a₂ = a, b₁ = b₂ = β, b₃ = 1 − 2a − 2β with a² = β²(1 − 2a − 2β)
    let a = 0.1f64;
    let f = |beta: f64| a * a - beta * beta * (1.0 - 2.0 * a - 2.0 * beta);
    let (mut lo, mut hi) = (0.05, 0.39);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(lo) * f(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let beta = 0.5 * (lo + hi);
    let b3 = 1.0 - 2.0 * a - 2.0 * beta;
    assert!(check_entropy_pentagon([a, a], [beta, beta, b3]).unwrap() < 1e-12);

    let (a, mut b) = random_entropy_tuple(&mut rng);
    b[0] += 0.01;
    b[1] -= 0.01;
    assert!(check_entropy_pentagon(a, b).unwrap() > 1e-6);
    assert!(matches!(check_entropy_pentagon([0.0, 0.5], [0.2, 0.2, 0.1]), Err(Error::ConstraintViolation(_))));
    assert!(matches!(check_entropy_pentagon([0.1, 0.5], [0.2, 0.2, 0.2]), Err(Error::ConstraintViolation(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn entropy_pentagon_holds_on_the_constraint_surface(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = random_entropy_tuple(&mut rng);
        prop_assert!(check_entropy_pentagon(a, b).unwrap() < 1e-12);
    }

    #[test]
    fn random_pentagon_parameters_are_balanced(seed in any::<u64>(), b in 0.6f64..1.6) {
        let m = mp(b);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = BalancedParams33::random(&mut rng, &m);
        prop_assert!(BalancedParams33::new(p.a, p.b, &m).is_ok());
        prop_assert!(p.a.iter().chain(&p.b).all(|x| x.re > 0.0));
    }
}
