//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion with its
//! runtime and budget, and exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shaped_tqft::complexes::*;
use shaped_tqft::geometry::{gluing_residual, maximize_volume_in_gauge_class, shape_volume, GaugeChart};
use shaped_tqft::identities::*;
use shaped_tqft::integrate::QuadratureConfig;
use shaped_tqft::special_fn::*;
use shaped_tqft::tqft::*;

type Res = Result<Outcome, shaped_tqft::Error>;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Res {
    Ok(Outcome { ok, detail: detail.into() })
}

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn mp(b: f64) -> ModularParameter {
    ModularParameter::new(b).unwrap()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm())
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Trapezoid rule on `ℝ − iδ`, accurate for the analytic, exponentially
/// decaying integrands below.
fn trapezoid(f: impl Fn(Complex64) -> Complex64, delta: f64, half_width: f64, h: f64) -> Complex64 {
    let n = (half_width / h).round() as i64;
    (-n..=n).map(|k| f(c(k as f64 * h, -delta))).sum::<Complex64>() * h
}

fn special_functions() -> Res {
    let mut r = rng(1);
    let mut worst = [0.0f64; 5];
    for _ in 0..100 {
        let m = mp(r.gen_range(0.7..1.4));
        let z = c(r.gen_range(-1.5..1.5), r.gen_range(-0.3..0.3));
        let inv = phi_b(z, &m)? * phi_b(-z, &m)?;
        worst[0] = worst[0].max(rel(inv, (I * PI * z * z).exp() / m.zeta_inv));
        for s in [m.b, 1.0 / m.b] {
            let lhs = phi_b(z - I * s / 2.0, &m)?;
            let rhs = (1.0 + (2.0 * PI * s * z).exp()) * phi_b(z + I * s / 2.0, &m)?;
            worst[1] = worst[1].max(rel(lhs, rhs));
        }
        worst[2] = worst[2].max((phi_b(z, &m)?.conj() * phi_b(z.conj(), &m)? - 1.0).norm());
        let x = c(r.gen_range(0.1..m.q - 0.1), r.gen_range(-0.5..0.5));
        worst[3] = worst[3].max((hyperbolic_gamma(x, &m)? * hyperbolic_gamma(m.q - x, &m)? - 1.0).norm());
        let bases = EllipticBases::real(r.gen_range(0.1..0.5), r.gen_range(0.1..0.5))?;
        let w = Complex64::from_polar(r.gen_range(0.4..0.9), r.gen_range(-PI..PI));
        let refl = elliptic_gamma(w, bases, 1e-17)? * elliptic_gamma(bases.p * bases.q / w, bases, 1e-17)?;
        worst[4] = worst[4].max((refl - 1.0).norm());
    }
    let ok = worst[..4].iter().all(|w| *w < 1e-9) && worst[4] < 1e-12;
    outcome(
        ok,
        format!(
            "inversion {:.1e}, functional {:.1e}, unitarity {:.1e}, γ⁽²⁾ inversion {:.1e}, elliptic reflection {:.1e}",
            worst[0], worst[1], worst[2], worst[3], worst[4]
        ),
    )
}

fn psi_closed_form() -> Res {
    let m = mp(1.0);
    let cfg = QuadratureConfig::with_tol(1e-11);
    let mut r = rng(2);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let u = c(r.gen_range(-0.5..0.5), r.gen_range(0.0..0.4));
        let v = c(r.gen_range(-0.5..0.5), r.gen_range(-0.4..0.0));
        let gap = (u - v).im;
        let w = c(r.gen_range(-0.5..0.5), -r.gen_range(0.25..0.75) * gap);
        let closed = cap_psi(u, v, w, &m)?;
        let direct = cap_psi_direct(u, v, w, &m, &cfg)?;
        worst = worst.max(rel(closed, direct.value));
    }
    outcome(worst < 1e-6, format!("max relative error {worst:.2e}"))
}

fn hyperbolic_pentagon() -> Res {
    let cfg = QuadratureConfig::with_tol(1e-9);
    let mut r = rng(3);
    let mut worst = 0.0f64;
    for b in [1.0, 1.3] {
        let m = mp(b);
        for _ in 0..20 {
            let p = BalancedParams33::random(&mut r, &m);
            worst = worst.max(check_hyperbolic_pentagon(&p, &m, &cfg)?.residual);
        }
    }
    outcome(worst < 1e-5, format!("40 sets, max residual {worst:.2e}"))
}

fn elliptic_beta() -> Res {
    let mut r = rng(4);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let s = random_elliptic_params(&mut r, 0.3, 0.3, 0.7);
        worst = worst.max(check_elliptic_beta_integral(s, 0.3, 0.3, 1e-12)?.residual);
    }
    outcome(worst < 1e-8, format!("max residual {worst:.2e}"))
}

fn classical_pentagon() -> Res {
    let cfg = QuadratureConfig::with_tol(1e-9);
    let mut r = rng(5);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let mut g = || c(r.gen_range(0.1..1.5), r.gen_range(-0.3..0.3));
        let (a, b) = ([g(), g(), g()], [g(), g()]);
        worst = worst.max(check_classical_pentagon(a, b, &cfg)?.residual);
    }
    outcome(worst < 1e-7, format!("max residual {worst:.2e}"))
}

fn entropy_pentagon() -> Res {
    let mut r = rng(6);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (a, b) = random_entropy_tuple(&mut r);
        let sum = a.iter().chain(&b).sum::<f64>();
        let prod = a[0] * a[1] - b[0] * b[1] * b[2];
        assert!((sum - 1.0).abs() < 1e-14 && prod.abs() < 1e-14, "tuple off the constraint surface");
        worst = worst.max(check_entropy_pentagon(a, b)?);
    }
    outcome(worst < 1e-12, format!("max residual {worst:.2e}"))
}

fn trefoil_golden() -> Res {
    let k = trefoil();
    let x = &k.complex;
    let (_, q) = k.knot_quad();
    let cfg = QuadratureConfig::with_tol(1e-9);
    let gf = GaugeFixing::default_for(x)?;
    let mut worst = 0.0f64;
    for b in [1.0, 0.8] {
        let m = mp(b);
        for a in [[0.7, 1.1, PI - 1.8], [PI / 3.0; 3], [0.4, 0.5, PI - 0.9]] {
            let w = partition_function(x, &ShapeStructure::new(vec![a])?, &[], &gf, &m, &cfg)?;
            let want = 2.0 * phi_b(m.c_b * (1.0 - a[q] / PI), &m)?.norm_sqr();
            worst = worst.max(rel(w.value, c(want, 0.0)));
        }
    }
    outcome(worst < 1e-6, format!("6 cases, max relative error {worst:.2e}"))
}

fn figure_eight_shape() -> Result<ShapeStructure, shaped_tqft::Error> {
    let beta = [1.0, 0.9, PI - 1.9];
    ShapeStructure::new(vec![[1.2, 0.8, PI - 2.0], beta, beta])
}

fn figure_eight_golden() -> Res {
    let k = figure_eight();
    let x = &k.complex;
    let m = mp(1.0);
    let (t, q) = k.knot_quad();
    let alpha = figure_eight_shape()?;
    let w = partition_function(x, &alpha, &[], &GaugeFixing::default_for(x)?, &m, &QuadratureConfig::with_tol(1e-4))?;
    let a1 = alpha.angle(t, q);
    let j = trapezoid(|z| phi_b(-z, &m).unwrap() / phi_b(z, &m).unwrap(), 0.3, 25.0, 0.01);
    let want = 2.0 * phi_b(m.u(a1), &m)?.norm_sqr() * j.norm_sqr();
    let err = rel(w.value, c(want, 0.0));
    let phase = w.value.im.abs() / w.value.norm();
    outcome(
        err < 1e-4 && phase < 1e-6 && w.value.re > 0.0,
        format!("relative error {err:.2e}, |Im W|/|W| {phase:.1e}"),
    )
}

fn five_two() -> Res {
    let m = mp(1.0);
    let r = five_two_reduced([1.0, 0.9], [PI - 1.8, 0.8], [1.0, PI - 1.9 + 0.8], &m, &QuadratureConfig::with_tol(1e-5))?;
    let j = trapezoid(|y| (I * PI * y * y).exp() / phi_b(y, &m).unwrap().powu(3), 0.3, 25.0, 0.01);
    let want = j.norm_sqr();
    let err = (r.value.norm() - want).abs() / want;

    // full state integrals over all tetrahedra at the complete structure
    let a = PI / 3.0;
    let kf = knot_factor(a, &m)?;
    let fine = QuadratureConfig::with_tol(1e-7);
    let want_52 = kf * five_two_reduced([a; 2], [a; 2], [a; 2], &m, &fine)?.value.re;
    let want_61 = kf * six_one_reduced(&SixOneAngles::uniform(a), &m, &fine)?.value.re;
    let mc = QuadratureConfig { monte_carlo: true, mc_samples: 400_000, rng_seed: 9, ..QuadratureConfig::with_tol(1e-4) };
    let mut sigmas = Vec::new();
    for (knot, want) in [(shaped_tqft::complexes::five_two(), want_52), (six_one(), want_61)] {
        let x = &knot.complex;
        let alpha = ShapeStructure::uniform(x.num_tetrahedra(), [a; 3])?;
        let w = partition_function(x, &alpha, &[], &GaugeFixing::default_for(x)?, &m, &mc)?;
        sigmas.push((w.value.re - want).abs() / w.error_estimate);
    }
    outcome(
        err < 1e-3 && sigmas.iter().all(|s| *s < 3.0),
        format!(
            "reduced vs closed form {err:.2e}; Monte Carlo 4D 5₂ {:.2}σ, 5D 6₁ {:.2}σ",
            sigmas[0], sigmas[1]
        ),
    )
}

fn six_one_budgets() -> Res {
    let m = mp(1.0);
    let angles = SixOneAngles::uniform(1.0);
    let coarse = six_one_reduced(&angles, &m, &QuadratureConfig::with_tol(1e-3))?;
    let fine = six_one_reduced(&angles, &m, &QuadratureConfig::with_tol(1e-5))?;
    let diff = (coarse.value - fine.value).norm();
    let bound = coarse.error_estimate + fine.error_estimate;
    let phase = fine.value.im.abs() / fine.value.norm();
    outcome(
        diff <= bound && fine.value.re > 0.0 && phase < 1e-4,
        format!("difference {diff:.2e} within {bound:.2e}, |Im|/|W| {phase:.1e}"),
    )
}

fn pachner() -> Res {
    let x = bipyramid();
    let axis = x.interior_edges()[0];
    let m = mp(1.0);
    let cfg = QuadratureConfig::with_tol(1e-9);
    let gf = GaugeFixing::default_for(&x)?;
    let mut r = rng(11);
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let u0: f64 = r.gen_range(1.6..2.5);
        let u1 = r.gen_range(1.6f64..2.5).min(2.0 * PI - u0 - 0.6);
        let u = [u0, u1, 2.0 * PI - u0 - u1];
        let mut angles = vec![[0.0; 3]; 3];
        for (t, a) in angles.iter_mut().enumerate() {
            let le = x.edge_occurrences(axis).into_iter().find(|(s, _)| *s == t).unwrap().1;
            let k = quad_of_edge(le);
            let v = r.gen_range(0.2..0.8) * (PI - u[t]);
            a[k] = u[t];
            a[(k + 1) % 3] = v;
            a[(k + 2) % 3] = PI - u[t] - v;
        }
        let alpha = ShapeStructure::new(angles)?;
        let state: Vec<f64> = x.boundary_edges().iter().map(|_| r.gen_range(-0.3..0.3)).collect();
        worst = worst.max(check_pachner_invariance(&x, &alpha, axis, &state, &gf, &m, &cfg)?.relative_discrepancy);
    }
    outcome(worst < 1e-5, format!("max relative discrepancy {worst:.2e}"))
}

fn gauge_independence() -> Res {
    let m = mp(1.0);
    let mut worst = [0.0f64; 2];

    let k = trefoil();
    let x = &k.complex;
    let cfg = QuadratureConfig::with_tol(1e-9);
    let alpha = ShapeStructure::new(vec![[0.7, 1.1, PI - 1.8]])?;
    let gf = GaugeFixing::default_for(x)?;
    for other in [GaugeFixing::coordinate(&[(0, 0, 1.0)]), GaugeFixing::coordinate(&[(0, 1, 0.5)])] {
        worst[0] = worst[0].max(faddeev_popov_check(x, &alpha, &gf, &other, &m, &cfg)?.relative_discrepancy);
    }
    for e in x.interior_edges() {
        let (lo, hi) = shape_gauge_interval(x, &alpha, e);
        for t in [0.3 * lo.max(-1.0), 0.3 * hi.min(1.0)] {
            worst[0] = worst[0].max(check_shape_gauge_invariance(x, &alpha, e, t, &gf, &m, &cfg)?.relative_discrepancy);
        }
    }

    let k = figure_eight();
    let x = &k.complex;
    let cfg = QuadratureConfig::with_tol(1e-5);
    let alpha = figure_eight_shape()?;
    let gf = GaugeFixing::default_for(x)?;
    let base = partition_function(x, &alpha, &[], &gf, &m, &cfg)?;
    let other = GaugeFixing::coordinate(&[(0, 1, 1.0)]);
    let w = partition_function(x, &alpha, &[], &other, &m, &cfg)?;
    worst[1] = worst[1].max(rel(base.value, w.value));
    let e = x.interior_edges()[0];
    let (_, hi) = shape_gauge_interval(x, &alpha, e);
    let moved = shape_gauge_transform(x, &alpha, e, 0.3 * hi.min(1.0))?;
    let w = partition_function(x, &moved, &[], &gf, &m, &cfg)?;
    worst[1] = worst[1].max(rel(base.value, w.value));

    outcome(
        worst.iter().all(|w| *w < 1e-5),
        format!("trefoil {:.2e}, figure-eight {:.2e}", worst[0], worst[1]),
    )
}

fn octahedron() -> Res {
    let m = mp(1.0);
    let cfg = QuadratureConfig::with_tol(1e-6);
    let mut r = rng(13);
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let p = OctahedronParams::random(&mut r, &m);
        worst = worst.max(check_octahedron_duality(&p, &m, &cfg)?.residual);
    }
    outcome(worst < 1e-3, format!("max residual {worst:.2e}"))
}

fn volume_maximization() -> Res {
    let x = figure_eight_complement();
    let regular = ShapeStructure::uniform(2, [PI / 3.0; 3])?;
    let chart = GaugeChart::tangential(&x, &regular);
    let start = chart.point(&[0.2, -0.15, 0.1][..chart.dim()])?;
    let max = maximize_volume_in_gauge_class(&x, &start, 1e-12)?;
    let angle_err = max.shape.angles.iter().flatten().map(|a| (a - PI / 3.0).abs()).fold(0.0, f64::max);
    let gluing = gluing_residual(&x, &max.shape).iter().map(|r| r.residual).fold(0.0, f64::max);

    let mut r = rng(14);
    let h = 1e-5;
    let mut grad_err = 0.0f64;
    let mut shapes = 0;
    while shapes < 50 {
        let p: Vec<f64> = (0..chart.dim()).map(|_| r.gen_range(-0.4..0.4)).collect();
        let Ok(_) = chart.point(&p) else { continue };
        let g = chart.gradient(&p)?;
        for i in 0..chart.dim() {
            let (mut up, mut dn) = (p.clone(), p.clone());
            up[i] += h;
            dn[i] -= h;
            let fd = (shape_volume(&chart.point(&up)?) - shape_volume(&chart.point(&dn)?)) / (2.0 * h);
            grad_err = grad_err.max((fd - g[i]).abs());
        }
        shapes += 1;
    }
    outcome(
        max.converged && angle_err < 1e-6 && gluing < 1e-8 && grad_err < 1e-6,
        format!(
            "volume {:.10}, angle error {angle_err:.1e}, gluing {gluing:.1e}, gradient vs difference {grad_err:.1e}",
            max.volume
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, f64, fn() -> Res); 14] = [
        ("special-function identities", 120.0, special_functions),
        ("Ψ closed form vs Fourier integral", 60.0, psi_closed_form),
        ("hyperbolic pentagon", 600.0, hyperbolic_pentagon),
        ("elliptic beta integral", 120.0, elliptic_beta),
        ("classical pentagon", 60.0, classical_pentagon),
        ("entropy pentagon", 1.0, entropy_pentagon),
        ("trefoil state integral", 120.0, trefoil_golden),
        ("figure-eight state integral", 900.0, figure_eight_golden),
        ("5₂ reduced form", 1200.0, five_two),
        ("6₁ reduced form", 1200.0, six_one_budgets),
        ("3–2 move on the bipyramid", 600.0, pachner),
        ("gauge-fixing and shape-gauge independence", 600.0, gauge_independence),
        ("octahedron duality", 900.0, octahedron),
        ("volume maximization", 120.0, volume_maximization),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = run();
        let secs = start.elapsed().as_secs_f64();
        let (ok, detail) = match res {
            Ok(o) => (o.ok && secs < *budget, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{:>2} {} {name}: {detail} [{secs:.2} s of {budget} s]",
            i + 1,
            if ok { "PASS" } else { "FAIL" }
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
