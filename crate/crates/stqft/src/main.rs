//! `stqft`: evaluate shaped-triangulation state integrals and run the identity
//! suites from the command line. Every command prints one JSON report.

use std::f64::consts::PI;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use shaped_tqft::complexes::{
    bipyramid, quad_of_edge, shape_gauge_interval, trefoil, ComplexFile, GaugeFixing, ShapeStructure,
    Triangulation,
};
use shaped_tqft::geometry::{gluing_residual, maximize_volume_in_gauge_class};
use shaped_tqft::identities::*;
use shaped_tqft::integrate::QuadratureConfig;
use shaped_tqft::special_fn::{
    elliptic_gamma, hyper_b, hyperbolic_gamma, lobachevsky, phi_b, EllipticBases, ModularParameter,
};
use shaped_tqft::tqft::{
    check_pachner_invariance, check_shape_gauge_invariance, faddeev_popov_check, knot_factor,
    partition_function,
};
use shaped_tqft::Error;

const REPORT_SCHEMA: &str = "stqft-report/1";

#[derive(Parser)]
#[command(name = "stqft", version, about = "Shaped-triangulation state integrals and identity checks")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Serialize)]
struct Common {
    /// coupling b > 0
    #[arg(long, default_value_t = 1.0, global = true)]
    b: f64,
    /// absolute and relative quadrature tolerance (command-specific default)
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, default_value_t = 0, global = true)]
    seed: u64,
    /// write the report here instead of stdout
    #[arg(long, global = true)]
    #[serde(skip)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
enum Command {
    /// Evaluate a special function at a point
    Special(SpecialArgs),
    /// Gauge-fixed partition function of a triangulation file
    Partition(PartitionArgs),
    /// Run an identity or invariance suite on random inputs
    Verify(VerifyArgs),
    /// Maximize the volume over the tangential class of the file's angles
    Angles(AnglesArgs),
    /// Shaped 3–2 move at an edge, optionally checking invariance of W
    Pachner(PachnerArgs),
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
enum SpecialFn {
    #[value(name = "phi_b")]
    #[serde(rename = "phi_b")]
    PhiB,
    #[value(name = "gamma2")]
    #[serde(rename = "gamma2")]
    Gamma2,
    #[value(name = "hyper_b")]
    #[serde(rename = "hyper_b")]
    HyperB,
    #[value(name = "lobachevsky")]
    #[serde(rename = "lobachevsky")]
    Lobachevsky,
    #[value(name = "elliptic_gamma")]
    #[serde(rename = "elliptic_gamma")]
    EllipticGamma,
}

#[derive(Args, Serialize)]
struct SpecialArgs {
    function: SpecialFn,
    /// complex argument, e.g. `0.3-0.2i`
    #[arg(long, value_parser = parse_complex)]
    #[serde(serialize_with = "ser_opt_complex")]
    z: Option<Complex64>,
    /// real argument (used for z when --z is absent)
    #[arg(long)]
    x: Option<f64>,
    /// second argument of hyper_b
    #[arg(long, value_parser = parse_complex)]
    #[serde(serialize_with = "ser_opt_complex")]
    y: Option<Complex64>,
    /// elliptic nome p
    #[arg(long, default_value_t = 0.3)]
    p: f64,
    /// elliptic nome q
    #[arg(long, default_value_t = 0.3)]
    q: f64,
    /// also check the inversion (or reflection) relation at the point
    #[arg(long)]
    check_inversion: bool,
    #[arg(long, default_value_t = 1e-9)]
    max_residual: f64,
}

#[derive(Clone, Copy, PartialEq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum GaugeChoice {
    /// one coordinate form per interior vertex on its least interior edge
    Auto,
    /// the gauge stored in the input file
    Spec,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Renormalize {
    /// divide by 2|Φ_b(u(α))|² for the angle at the knot edge
    KnotEdge,
}

#[derive(Args, Serialize)]
struct PartitionArgs {
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = GaugeChoice::Auto)]
    gauge: GaugeChoice,
    #[arg(long, value_enum)]
    renormalize: Option<Renormalize>,
    /// Monte Carlo over the whole state space instead of nested quadrature
    #[arg(long)]
    monte_carlo: bool,
    #[arg(long, default_value_t = 400_000)]
    samples: usize,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Suite {
    Pentagon,
    Elliptic,
    Orthogonality,
    Bailey,
    Octahedron,
    Entropy,
    Pachner,
    Gauge,
}

#[derive(Args, Serialize)]
struct VerifyArgs {
    suite: Suite,
    #[arg(long)]
    trials: Option<usize>,
    /// replaces every per-check threshold
    #[arg(long)]
    max_residual: Option<f64>,
}

#[derive(Args, Serialize)]
struct AnglesArgs {
    input: PathBuf,
}

#[derive(Args, Serialize)]
struct PachnerArgs {
    input: PathBuf,
    /// id of the interior degree-3 edge
    #[arg(long)]
    edge: usize,
    /// evaluate W before and after the move
    #[arg(long)]
    check: bool,
    #[arg(long, default_value_t = 1e-5)]
    max_residual: f64,
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    Complex64::from_str(s.trim()).map_err(|_| format!("not a complex number: {s:?}"))
}

fn ser_opt_complex<S: serde::Serializer>(z: &Option<Complex64>, s: S) -> Result<S::Ok, S::Error> {
    z.map(|z| [z.re, z.im]).serialize(s)
}

fn cx(z: Complex64) -> Value {
    json!([z.re, z.im])
}

enum Failure {
    Usage(String),
    Input(String),
    Compute(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

/// Input-side library errors (bad gluings, shapes, gauges) map to exit code 3.
fn input_err(e: Error) -> Failure {
    Failure::Input(e.to_string())
}

struct Outcome {
    result: Value,
    passed: bool,
}

struct Input {
    file: ComplexFile,
    complex: Triangulation,
    sha256: String,
}

fn load(path: &PathBuf) -> Result<Input, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let file = ComplexFile::from_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let complex = file.triangulation().map_err(input_err)?;
    Ok(Input { file, complex, sha256: format!("{:x}", Sha256::digest(text.as_bytes())) })
}

fn shape_of(input: &Input) -> Result<ShapeStructure, Failure> {
    let alpha = input.file.shape().map_err(input_err)?;
    if alpha.angles.len() != input.complex.num_tetrahedra() {
        return Err(Failure::Input("field angles: wrong number of tetrahedra".into()));
    }
    Ok(alpha)
}

fn boundary_of(input: &Input) -> Result<Vec<f64>, Failure> {
    let n = input.complex.boundary_edges().len();
    match &input.file.boundary_state {
        Some(s) if s.len() == n => Ok(s.clone()),
        Some(s) => Err(Failure::Input(format!("field boundary_state: {} values for {n} boundary edges", s.len()))),
        None => Ok(vec![0.0; n]),
    }
}

fn gauge_of(input: &Input, choice: GaugeChoice) -> Result<GaugeFixing, Failure> {
    match choice {
        GaugeChoice::Auto => GaugeFixing::default_for(&input.complex).map_err(input_err),
        GaugeChoice::Spec => input
            .file
            .gauge_fixing(&input.complex)
            .map_err(input_err)?
            .ok_or_else(|| Failure::Input("field gauge is missing (required by --gauge spec)".into())),
    }
}

fn modular(b: f64) -> Result<ModularParameter, Failure> {
    ModularParameter::new(b).map_err(|e| Failure::Usage(e.to_string()))
}

fn quadrature(tol: f64) -> Result<QuadratureConfig, Failure> {
    let cfg = QuadratureConfig::with_tol(tol);
    cfg.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(cfg)
}

fn special(args: &SpecialArgs, common: &Common) -> Result<Outcome, Failure> {
    let mp = modular(common.b)?;
    let z = args
        .z
        .or(args.x.map(|x| Complex64::new(x, 0.0)))
        .ok_or_else(|| Failure::Usage("--z or --x is required".into()))?;
    let tol = common.tol.unwrap_or(1e-15);
    let (value, inversion) = match args.function {
        SpecialFn::PhiB => {
            let v = phi_b(z, &mp)?;
            let inv = args.check_inversion.then(|| -> Result<f64, Failure> {
                let rhs = (Complex64::new(0.0, PI) * z * z).exp() / mp.zeta_inv;
                Ok((v * phi_b(-z, &mp)? - rhs).norm() / rhs.norm())
            });
            (v, inv.transpose()?)
        }
        SpecialFn::Gamma2 => {
            let v = hyperbolic_gamma(z, &mp)?;
            let inv = args
                .check_inversion
                .then(|| -> Result<f64, Failure> { Ok((v * hyperbolic_gamma(mp.q - z, &mp)? - 1.0).norm()) });
            (v, inv.transpose()?)
        }
        SpecialFn::HyperB => {
            let y = args.y.ok_or_else(|| Failure::Usage("hyper_b needs --y".into()))?;
            if args.check_inversion {
                return Err(Failure::Usage("hyper_b has no inversion check".into()));
            }
            (hyper_b(z, y, &mp)?, None)
        }
        SpecialFn::Lobachevsky => {
            if args.check_inversion || z.im != 0.0 {
                return Err(Failure::Usage("lobachevsky takes a real --x and no inversion check".into()));
            }
            (Complex64::new(lobachevsky(z.re, tol)?, 0.0), None)
        }
        SpecialFn::EllipticGamma => {
            let bases = EllipticBases::real(args.p, args.q).map_err(|e| Failure::Usage(e.to_string()))?;
            let v = elliptic_gamma(z, bases, tol)?;
            let inv = args.check_inversion.then(|| -> Result<f64, Failure> {
                Ok((v * elliptic_gamma(args.p * args.q / z, bases, tol)? - 1.0).norm())
            });
            (v, inv.transpose()?)
        }
    };
    let mut result = json!({
        "z": cx(z),
        "value": cx(value),
        "display": format!("{value}"),
    });
    let mut passed = true;
    if let Some(r) = inversion {
        passed = r <= args.max_residual;
        result["inversion"] = json!({ "residual": r, "threshold": args.max_residual, "passed": passed });
    }
    Ok(Outcome { result, passed })
}

fn partition(args: &PartitionArgs, common: &Common, input: &Input) -> Result<Outcome, Failure> {
    let mp = modular(common.b)?;
    let mut cfg = quadrature(common.tol.unwrap_or(1e-6))?;
    if args.monte_carlo {
        cfg.monte_carlo = true;
        cfg.mc_samples = args.samples;
        cfg.rng_seed = common.seed;
    }
    let alpha = shape_of(input)?;
    let boundary = boundary_of(input)?;
    let gauge = gauge_of(input, args.gauge)?;
    let r = partition_function(&input.complex, &alpha, &boundary, &gauge, &mp, &cfg).map_err(|e| match e {
        Error::InvalidGauge(_) | Error::InvalidParameter(_) | Error::ShapeViolation(_) => input_err(e),
        e => e.into(),
    })?;
    let mut result = json!({
        "name": input.file.name,
        "tetrahedra": input.complex.num_tetrahedra(),
        "dim": r.dim,
        "gauge": r.gauge,
        "value": cx(r.value),
        "error_estimate": r.error_estimate,
        "evaluations": r.evaluations,
        "method": if args.monte_carlo { "monte_carlo" } else { "nested_adaptive" },
    });
    if args.renormalize.is_some() {
        let edge = input
            .file
            .knot_edge
            .ok_or_else(|| Failure::Input("field knot_edge is missing (required by --renormalize)".into()))?;
        edge.resolve(&input.complex).map_err(input_err)?;
        let [a, b] = edge.edge;
        let angle = alpha.angle(edge.tet, quad_of_edge(shaped_tqft::complexes::local_edge(a, b)));
        let k = knot_factor(angle, &mp)?;
        result["renormalized"] = json!({
            "knot_angle": angle,
            "knot_factor": k,
            "value": cx(r.value / k),
            "error_estimate": r.error_estimate / k,
        });
    }
    Ok(Outcome { result, passed: true })
}

struct Check {
    label: String,
    residual: f64,
    threshold: f64,
    detail: Value,
}

impl Check {
    fn new(label: impl Into<String>, residual: f64, threshold: f64, detail: Value) -> Self {
        Self { label: label.into(), residual, threshold, detail }
    }
}

fn report<T: Serialize>(r: &T) -> Value {
    serde_json::to_value(r).expect("serializable")
}

/// Three positive tetrahedra around the axis: axis angles `u` (sum 2π) and
/// one apex–equator angle `v` per tetrahedron.
fn bipyramid_shape(x: &Triangulation, axis: usize, u: [f64; 3], v: [f64; 3]) -> Result<ShapeStructure, Error> {
    let mut angles = vec![[0.0; 3]; 3];
    for (t, a) in angles.iter_mut().enumerate() {
        let (_, le) = x.edge_occurrences(axis).into_iter().find(|(s, _)| *s == t).expect("axis meets every tetrahedron");
        let k = quad_of_edge(le);
        a[k] = u[t];
        a[(k + 1) % 3] = v[t];
        a[(k + 2) % 3] = PI - u[t] - v[t];
    }
    ShapeStructure::new(angles)
}

fn random_trefoil_shape(rng: &mut ChaCha8Rng) -> Result<ShapeStructure, Error> {
    let a: f64 = rng.gen_range(0.3..1.5);
    let b: f64 = rng.gen_range(0.3..(PI - a - 0.3));
    ShapeStructure::new(vec![[a, b, PI - a - b]])
}

fn verify(args: &VerifyArgs, common: &Common) -> Result<Outcome, Failure> {
    let mp = modular(common.b)?;
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let mut checks = Vec::new();
    let tol = |default: f64| common.tol.unwrap_or(default);
    match args.suite {
        Suite::Pentagon => {
            let cfg = quadrature(tol(1e-9))?;
            for i in 0..args.trials.unwrap_or(5) {
                let p = BalancedParams33::random(&mut rng, &mp);
                let r = check_hyperbolic_pentagon(&p, &mp, &cfg)?;
                checks.push(Check::new(format!("hyperbolic pentagon {i}"), r.residual, 1e-5, json!({ "params": report(&p), "report": report(&r) })));
                let mut g = || Complex64::new(rng.gen_range(0.1..1.5), rng.gen_range(-0.3..0.3));
                let (a, b) = ([g(), g(), g()], [g(), g()]);
                let r = check_classical_pentagon(a, b, &cfg)?;
                checks.push(Check::new(format!("classical pentagon {i}"), r.residual, 1e-7, json!({ "a": a.map(cx), "b": b.map(cx), "report": report(&r) })));
            }
        }
        Suite::Elliptic => {
            let t = tol(1e-12);
            for i in 0..args.trials.unwrap_or(10) {
                let s = random_elliptic_params(&mut rng, 0.3, 0.3, 0.7);
                let r = check_elliptic_beta_integral(s, 0.3, 0.3, t)?;
                checks.push(Check::new(format!("elliptic beta integral {i}"), r.residual, 1e-8, json!({ "s": s.map(cx), "report": report(&r) })));
            }
        }
        Suite::Orthogonality => {
            let cfg = quadrature(tol(1e-7))?;
            for i in 0..args.trials.unwrap_or(1) {
                let alpha = rng.gen_range(-0.5..0.5);
                for (sigma, threshold) in [(0.5, 0.10), (0.25, 0.05)] {
                    let r = check_orthogonality_smeared(alpha, sigma, 0.0, 0.01, &mp, &cfg)?;
                    let dev = (r.smeared - r.prediction).norm() / r.prediction;
                    checks.push(Check::new(format!("smeared delta {i}, σ = {sigma}"), dev, threshold, report(&r)));
                }
            }
        }
        Suite::Bailey => {
            let cfg = quadrature(tol(1e-9))?;
            for i in 0..args.trials.unwrap_or(5) {
                let seed = BaileySeed::random(&mut rng, &mp);
                let w = Complex64::new(rng.gen_range(-0.05..0.05), rng.gen_range(-0.5..0.5));
                let r = seed.verify(w, &mp, &cfg)?;
                checks.push(Check::new(format!("Bailey seed {i}"), r.residual, 1e-5, json!({ "seed": report(&seed), "w": cx(w), "report": report(&r) })));
            }
        }
        Suite::Octahedron => {
            let cfg = quadrature(tol(1e-6))?;
            for i in 0..args.trials.unwrap_or(3) {
                let p = OctahedronParams::random(&mut rng, &mp);
                let r = check_octahedron_duality(&p, &mp, &cfg)?;
                checks.push(Check::new(format!("octahedron {i}"), r.residual, 1e-3, json!({ "params": report(&p), "report": report(&r) })));
            }
        }
        Suite::Entropy => {
            for i in 0..args.trials.unwrap_or(100) {
                let (a, b) = random_entropy_tuple(&mut rng);
                let r = check_entropy_pentagon(a, b)?;
                checks.push(Check::new(format!("entropy pentagon {i}"), r, 1e-12, json!({ "a": a, "b": b })));
            }
        }
        Suite::Pachner => {
            let cfg = quadrature(tol(1e-9))?;
            let x = bipyramid();
            let axis = x.interior_edges()[0];
            let gauge = GaugeFixing::default_for(&x)?;
            for i in 0..args.trials.unwrap_or(5) {
                let u0: f64 = rng.gen_range(1.6..2.5);
                let u1: f64 = rng.gen_range(1.6f64..2.5).min(2.0 * PI - u0 - 0.6);
                let u = [u0, u1, 2.0 * PI - u0 - u1];
                let v = u.map(|a| rng.gen_range(0.2..0.8) * (PI - a));
                let alpha = bipyramid_shape(&x, axis, u, v)?;
                let state: Vec<f64> = x.boundary_edges().iter().map(|_| rng.gen_range(-0.3..0.3)).collect();
                let r = check_pachner_invariance(&x, &alpha, axis, &state, &gauge, &mp, &cfg)?;
                checks.push(Check::new(
                    format!("bipyramid 3–2 move {i}"),
                    r.relative_discrepancy,
                    1e-5,
                    json!({ "angles": alpha.angles, "boundary_state": state, "report": report(&r) }),
                ));
            }
        }
        Suite::Gauge => {
            let cfg = quadrature(tol(1e-9))?;
            let k = trefoil();
            let x = &k.complex;
            let gauge = GaugeFixing::default_for(x)?;
            let others = [GaugeFixing::coordinate(&[(0, 0, 1.0)]), GaugeFixing::coordinate(&[(0, 1, 0.5)])];
            for i in 0..args.trials.unwrap_or(3) {
                let alpha = random_trefoil_shape(&mut rng)?;
                for (j, other) in others.iter().enumerate() {
                    let r = faddeev_popov_check(x, &alpha, &gauge, other, &mp, &cfg)?;
                    checks.push(Check::new(format!("Faddeev–Popov {i}.{j}"), r.relative_discrepancy, 1e-5, json!({ "angles": alpha.angles, "report": report(&r) })));
                }
                for e in x.interior_edges() {
                    let (lo, hi) = shape_gauge_interval(x, &alpha, e);
                    let t = rng.gen_range(0.1..0.9) * (hi.min(1.0) - lo.max(-1.0)) + lo.max(-1.0);
                    let r = check_shape_gauge_invariance(x, &alpha, e, t, &gauge, &mp, &cfg)?;
                    checks.push(Check::new(format!("shape gauge {i}, edge {e}"), r.relative_discrepancy, 1e-5, json!({ "angles": alpha.angles, "t": t, "report": report(&r) })));
                }
            }
        }
    }
    let mut passed = true;
    let rows: Vec<Value> = checks
        .into_iter()
        .map(|c| {
            let threshold = args.max_residual.unwrap_or(c.threshold);
            let ok = c.residual <= threshold;
            passed &= ok;
            json!({ "label": c.label, "residual": c.residual, "threshold": threshold, "passed": ok, "detail": c.detail })
        })
        .collect();
    let worst = rows.iter().filter_map(|r| r["residual"].as_f64()).fold(0.0, f64::max);
    Ok(Outcome { result: json!({ "checks": rows, "max_residual": worst, "passed": passed }), passed })
}

fn angles(common: &Common, input: &Input) -> Result<Outcome, Failure> {
    let alpha = shape_of(input)?;
    let tol = common.tol.unwrap_or(1e-10);
    let m = maximize_volume_in_gauge_class(&input.complex, &alpha, tol).map_err(|e| match e {
        Error::BoundaryDegeneration(_) => e.into(),
        e => input_err(e),
    })?;
    let gluing: Vec<Value> = gluing_residual(&input.complex, &m.shape)
        .iter()
        .map(|r| json!({ "edge": r.edge, "product": cx(r.product), "residual": r.residual }))
        .collect();
    let worst = gluing.iter().filter_map(|r| r["residual"].as_f64()).fold(0.0, f64::max);
    let result = json!({
        "angles": m.shape.angles,
        "volume": m.volume,
        "converged": m.converged,
        "iterations": m.iterations,
        "gradient_norm": m.gradient_norm,
        "gluing": gluing,
        "max_gluing_residual": worst,
    });
    Ok(Outcome { result, passed: m.converged })
}

fn pachner(args: &PachnerArgs, common: &Common, input: &Input) -> Result<Outcome, Failure> {
    let x = &input.complex;
    let alpha = shape_of(input)?;
    let mv = shaped_tqft::complexes::pachner_32(x, args.edge, &alpha).map_err(input_err)?;
    let y = &mv.complex;
    let mut file = ComplexFile::from_parts(
        input.file.name.as_deref().unwrap_or("complex"),
        &y.orientations(),
        &y.gluings(),
        Some(mv.shape.angles.clone()),
    );
    let boundary = boundary_of(input)?;
    if input.file.boundary_state.is_some() {
        let mut state = vec![0.0; y.num_edges()];
        for (old, v) in x.boundary_edges().into_iter().zip(&boundary) {
            state[mv.edge_map[old].expect("boundary edges survive")] = *v;
        }
        file.boundary_state = Some(y.boundary_edges().into_iter().map(|e| state[e]).collect());
    }
    let mut result = json!({
        "complex": serde_json::to_value(&file).expect("serializable"),
        "edge_map": mv.edge_map,
    });
    let mut passed = true;
    if args.check {
        let mp = modular(common.b)?;
        let cfg = quadrature(common.tol.unwrap_or(1e-9))?;
        let gauge = GaugeFixing::default_for(x).map_err(input_err)?;
        let r = check_pachner_invariance(x, &alpha, args.edge, &boundary, &gauge, &mp, &cfg)?;
        passed = r.relative_discrepancy <= args.max_residual;
        result["invariance"] = json!({ "report": report(&r), "threshold": args.max_residual, "passed": passed });
    }
    Ok(Outcome { result, passed })
}

fn run(cli: &Cli) -> Result<(Value, bool), Failure> {
    let common = &cli.common;
    let (name, input, outcome) = match &cli.command {
        Command::Special(a) => ("special", None, special(a, common)?),
        Command::Partition(a) => {
            let input = load(&a.input)?;
            let o = partition(a, common, &input)?;
            ("partition", Some(input), o)
        }
        Command::Verify(a) => ("verify", None, verify(a, common)?),
        Command::Angles(a) => {
            let input = load(&a.input)?;
            let o = angles(common, &input)?;
            ("angles", Some(input), o)
        }
        Command::Pachner(a) => {
            let input = load(&a.input)?;
            let o = pachner(a, common, &input)?;
            ("pachner", Some(input), o)
        }
    };
    let mut args = serde_json::to_value(&cli.command).expect("serializable");
    // the input is identified by content, not by path
    if let Some(obj) = args.as_object_mut().and_then(|m| m.values_mut().next()).and_then(Value::as_object_mut) {
        obj.remove("input");
    }
    let config = json!({
        "command": name,
        "common": common,
        "args": args,
        "input_sha256": input.as_ref().map(|i| i.sha256.clone()),
    });
    let hash = format!("{:x}", Sha256::digest(serde_json::to_string(&config).expect("serializable").as_bytes()));
    let report = json!({
        "schema": REPORT_SCHEMA,
        "command": name,
        "config": config,
        "config_hash": hash,
        "status": if outcome.passed { "ok" } else { "failed" },
        "result": outcome.result,
    });
    Ok((report, outcome.passed))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((report, passed)) => {
            let text = serde_json::to_string_pretty(&report).expect("serializable") + "\n";
            match &cli.common.output {
                Some(path) => {
                    if let Err(e) = fs::write(path, text) {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(1);
                    }
                }
                None => print!("{text}"),
            }
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: invalid input: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Compute(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
