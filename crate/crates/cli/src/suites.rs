use std::f64::consts::PI;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ngca_core::algebra::{
    admits_central_extension, build_algebra, central_magnitude_defect, jacobi_report,
    schrodinger_reference, so21_closure_defect, specialization_mismatches, AlgebraSpec,
    GeneratorId,
};
use ngca_core::coadjoint::{
    casimir_values, chi_representative, classify_orbit, coad_closed_form, coad_generic_real,
    parametrize, CoadjointFlow, DualVector, OrbitClass, OrbitLabel, OrbitTag, DEFAULT_CLASSIFY_TOL,
};
use ngca_core::dynamics::{
    integrate, time_derivative, verify_motion_order, HamiltonianChoice, Method, Trajectory,
};
use ngca_core::poisson::{
    from_darboux, generator_functions, generator_poly, generators_at, generators_via_orbit,
    momentum_map_closure, to_darboux, Layout, PhasePoint, Polynomial, StructureMatrix,
};
use ngca_core::symmetry::{
    conformal_time, integral_drifts, integrals_of_motion, map_trajectory, GalileiParams, Transform,
};
use ngca_core::Shape;

use crate::config::Tolerances;
use crate::report::Report;
use crate::CliError;

/// Orbit-capable shapes exercised by the randomized suites.
pub const VERIFY_SHAPES: [(usize, usize); 6] = [(1, 3), (3, 3), (5, 3), (2, 2), (4, 2), (6, 2)];

/// Shapes on which Casimir invariance and orbit labels are checked.
pub const CASIMIR_SHAPES: [(usize, usize); 4] = [(1, 3), (3, 3), (2, 2), (4, 2)];

/// Largest order swept by the exact Jacobi check.
pub const JACOBI_MAX_N: u32 = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Algebra,
    Orbit,
    Poisson,
    Dynamics,
    Symmetry,
    All,
}

/// A single stored structure constant `[lhs, rhs]` to negate, for mutation
/// testing. Written `N:lhs:rhs`, e.g. `3:C0.1:C3.1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Flip {
    pub n: u32,
    pub dim: u8,
    pub lhs: GeneratorId,
    pub rhs: GeneratorId,
}

impl FromStr for Flip {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Invalid(format!("flip `{s}` is not of the form N:X:Y"));
        let mut parts = s.split(':');
        let (Some(n), Some(x), Some(y), None) =
            (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(bad());
        };
        let n: u32 = n.parse().map_err(|_| bad())?;
        let dim = if n % 2 == 1 { 3 } else { 2 };
        let lhs = x.parse().map_err(|e| CliError::Invalid(format!("{e}")))?;
        let rhs = y.parse().map_err(|e| CliError::Invalid(format!("{e}")))?;
        let flip = Flip { n, dim, lhs, rhs };
        let alg =
            build_algebra(n, dim, true, false).map_err(|e| CliError::Invalid(e.to_string()))?;
        alg.with_flipped_constant(lhs, rhs)
            .map_err(|e| CliError::Invalid(e.to_string()))?;
        Ok(flip)
    }
}

pub struct VerifyContext {
    pub seed: u64,
    pub tol: Tolerances,
    pub flip: Option<Flip>,
}

impl VerifyContext {
    pub fn new(seed: u64, tol: Tolerances) -> Self {
        VerifyContext {
            seed,
            tol,
            flip: None,
        }
    }

    /// Independent stream per case, so suites can run in any order.
    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }

    /// Built table, with the mutation applied when it targets this member.
    fn algebra(&self, n: u32, dim: u8, central: bool, ds: bool) -> Result<AlgebraSpec, CliError> {
        let alg =
            build_algebra(n, dim, central, ds).map_err(|e| CliError::Invalid(e.to_string()))?;
        match &self.flip {
            Some(f) if central && f.n == n && f.dim == dim => alg
                .with_flipped_constant(f.lhs, f.rhs)
                .map_err(|e| CliError::Invalid(e.to_string())),
            _ => Ok(alg),
        }
    }

    fn shapes(&self) -> Vec<Shape> {
        let mut out: Vec<(usize, usize)> = VERIFY_SHAPES.to_vec();
        if let Some(f) = &self.flip {
            let key = (f.n as usize, usize::from(f.dim));
            if !out.contains(&key) {
                out.push(key);
            }
        }
        out.into_iter()
            .map(|(n, d)| Shape::new(n, d).expect("verified shapes are valid"))
            .collect()
    }

    fn central(&self, shape: Shape) -> Result<AlgebraSpec, CliError> {
        self.algebra(shape.n as u32, shape.dim as u8, true, false)
    }
}

fn tag(shape: Shape) -> String {
    format!("N={},dim={}", shape.n, shape.dim)
}

pub fn run_verify(suite: Suite, ctx: &VerifyContext) -> Result<Report, CliError> {
    let mut report = Report::new(format!("verify {}", suite_name(suite)), Some(ctx.seed));
    let all = suite == Suite::All;
    if all || suite == Suite::Algebra {
        algebra_suite(ctx, &mut report)?;
    }
    if all || suite == Suite::Orbit {
        orbit_suite(ctx, &mut report)?;
    }
    if all || suite == Suite::Poisson {
        poisson_suite(ctx, &mut report)?;
    }
    if all || suite == Suite::Dynamics {
        dynamics_suite(ctx, &mut report)?;
    }
    if all || suite == Suite::Symmetry {
        symmetry_suite(ctx, &mut report)?;
    }
    if let Some(f) = &ctx.flip {
        report.insert("mutation", format!("{}:{}:{}", f.n, f.lhs, f.rhs));
    }
    report.insert("tolerances", ctx.tol);
    Ok(report.finish())
}

fn suite_name(suite: Suite) -> &'static str {
    match suite {
        Suite::Algebra => "algebra",
        Suite::Orbit => "orbit",
        Suite::Poisson => "poisson",
        Suite::Dynamics => "dynamics",
        Suite::Symmetry => "symmetry",
        Suite::All => "all",
    }
}

fn rational(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// Members swept by the exact checks: every admissible `(N, dim, central, Ds)`
/// with `N <= 9`, plus the mutated member if it lies beyond.
fn algebra_members(ctx: &VerifyContext) -> Vec<(u32, u8, bool, bool)> {
    let mut out = Vec::new();
    let max_n = ctx
        .flip
        .as_ref()
        .map_or(JACOBI_MAX_N, |f| f.n.max(JACOBI_MAX_N));
    for n in 1..=max_n {
        for dim in [2u8, 3] {
            if n <= JACOBI_MAX_N {
                out.push((n, dim, false, false));
                out.push((n, dim, false, true));
            }
            let flipped = ctx.flip.as_ref().is_some_and(|f| f.n == n && f.dim == dim);
            if admits_central_extension(n, dim) && (n <= JACOBI_MAX_N || flipped) {
                out.push((n, dim, true, false));
            }
        }
    }
    out
}

pub fn algebra_suite(ctx: &VerifyContext, report: &mut Report) -> Result<(), CliError> {
    for (n, dim, central, ds) in algebra_members(ctx) {
        let alg = ctx.algebra(n, dim, central, ds)?;
        let kind = match (central, ds) {
            (true, _) => "central",
            (false, true) => "with_ds",
            (false, false) => "plain",
        };
        let name = format!("N={n},dim={dim},{kind}");
        let jac = jacobi_report(&alg);
        let detail = match (&jac.worst_triple, &jac.worst_pair) {
            _ if jac.is_exact() => None,
            (Some([x, y, z]), _) if jac.max_defect >= jac.antisymmetry_defect => {
                Some(format!("Jacobi fails on ({x}, {y}, {z})"))
            }
            (_, Some([x, y])) => Some(format!("antisymmetry fails on ({x}, {y})")),
            (Some([x, y, z]), None) => Some(format!("Jacobi fails on ({x}, {y}, {z})")),
            (None, None) => None,
        };
        report.check_with(
            format!("algebra/jacobi/{name}"),
            rational(&jac.total_defect()),
            0.0,
            detail,
        );
        report.check(
            format!("algebra/so21_closure/{name}"),
            rational(&so21_closure_defect(&alg)),
            0.0,
        );
        if central {
            report.check(
                format!("algebra/central_magnitudes/{name}"),
                rational(&central_magnitude_defect(&alg)),
                0.0,
            );
            let noncentral = alg
                .entries()
                .filter(|((x, y), v)| {
                    (*x == GeneratorId::M || *y == GeneratorId::M) && !v.is_zero()
                })
                .count();
            report.check(
                format!("algebra/mass_is_central/{name}"),
                noncentral as f64,
                0.0,
            );
        }
    }
    for (central, ds) in [(true, false), (false, true), (false, false)] {
        let alg = ctx.algebra(1, 3, central, ds)?;
        let diff = specialization_mismatches(&alg, &schrodinger_reference(central, ds));
        let detail = diff
            .first()
            .map(|(x, y)| format!("[{x}, {y}] differs from the Schrödinger table"));
        let kind = if central {
            "central"
        } else if ds {
            "with_ds"
        } else {
            "plain"
        };
        report.check_with(
            format!("algebra/schrodinger_specialization/{kind}"),
            diff.len() as f64,
            0.0,
            detail,
        );
    }
    Ok(())
}

fn uniform(rng: &mut ChaCha8Rng, r: f64) -> f64 {
    rng.random_range(-r..r)
}

fn vec3(rng: &mut ChaCha8Rng, r: f64) -> [f64; 3] {
    std::array::from_fn(|_| uniform(rng, r))
}

fn random_dual(rng: &mut ChaCha8Rng, shape: Shape) -> DualVector {
    let mut x = DualVector::zeros(shape);
    x.m = rng.random_range(0.5..2.0);
    x.h = uniform(rng, 1.0);
    x.d = uniform(rng, 1.0);
    x.k = uniform(rng, 1.0);
    x.j.iter_mut().for_each(|v| *v = uniform(rng, 1.0));
    x.c.iter_mut()
        .flatten()
        .for_each(|v| *v = uniform(rng, 1.0));
    x
}

fn random_params(rng: &mut ChaCha8Rng, shape: Shape, r: f64) -> Vec<Vec<f64>> {
    (0..shape.levels())
        .map(|_| (0..shape.dim).map(|_| uniform(rng, r)).collect())
        .collect()
}

fn random_label(rng: &mut ChaCha8Rng, dim: usize) -> (OrbitLabel, Vec<f64>, [f64; 3]) {
    const TAGS: [OrbitTag; 6] = [
        OrbitTag::HplusSigma,
        OrbitTag::HminusSigma,
        OrbitTag::Hplus0,
        OrbitTag::Hminus0,
        OrbitTag::HyperbolicSigma,
        OrbitTag::Origin,
    ];
    let class = OrbitClass::new(
        TAGS[rng.random_range(0..TAGS.len())],
        rng.random_range(0.2..2.0),
    );
    let chi = chi_representative(&class);
    let m = rng.random_range(0.5..2.0);
    let (s, s2) = if dim == 3 {
        let s = vec3(rng, 1.0).to_vec();
        let s2 = s.iter().map(|v| v * v).sum();
        (s, s2)
    } else {
        let s = uniform(rng, 1.0);
        (vec![s], s)
    };
    (
        OrbitLabel {
            m,
            s2,
            chi_class: class,
        },
        s,
        chi,
    )
}

pub fn random_point(rng: &mut ChaCha8Rng, shape: Shape) -> PhasePoint {
    let m = rng.random_range(0.5..2.0);
    let z: Vec<f64> = (0..Layout::new(shape).len())
        .map(|_| uniform(rng, 1.0))
        .collect();
    PhasePoint::from_flat(shape, m, &z).expect("flat vector has the layout length")
}

fn core_err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

pub fn orbit_suite(ctx: &VerifyContext, report: &mut Report) -> Result<(), CliError> {
    let tol = ctx.tol;
    let schrodinger = Shape::new(1, 3).expect("valid shape");
    let alg1 = ctx.central(schrodinger)?;
    let columns = [
        "translation",
        "boost",
        "time_shift",
        "dilation",
        "conformal",
        "rotation",
    ];
    let mut worst = [0.0f64; 6];
    let mut failure: [Option<String>; 6] = Default::default();
    let mut rng = ctx.rng(100);
    for _ in 0..100 {
        let x = random_dual(&mut rng, schrodinger);
        let flows = [
            CoadjointFlow::Translation(vec3(&mut rng, 1.0)),
            CoadjointFlow::Boost(vec3(&mut rng, 1.0)),
            CoadjointFlow::TimeShift(uniform(&mut rng, 1.0)),
            CoadjointFlow::Dilation(uniform(&mut rng, 1.0)),
            CoadjointFlow::Conformal(uniform(&mut rng, 1.0)),
            CoadjointFlow::Rotation(vec3(&mut rng, 2.0)),
        ];
        for (i, flow) in flows.iter().enumerate() {
            let closed = coad_closed_form(&alg1, flow, &x);
            let generic = coad_generic_real(&alg1, &flow.generator_terms(), 1.0, &x);
            match (closed, generic) {
                (Ok(a), Ok(b)) => worst[i] = worst[i].max(a.max_abs_diff(&b)),
                (Err(e), _) | (_, Err(e)) => failure[i] = Some(core_err(e)),
            }
        }
    }
    for (i, col) in columns.iter().enumerate() {
        let name = format!("orbit/table_column/{col}");
        match &failure[i] {
            Some(e) => report.error(name, tol.coadjoint_oracle, e.clone()),
            None => {
                report.check(name, worst[i], tol.coadjoint_oracle);
            }
        }
    }

    for (k, shape) in ctx.shapes().into_iter().enumerate() {
        let alg = ctx.central(shape)?;
        let stream = 200 + 10 * k as u64;
        let casimirs = CASIMIR_SHAPES.contains(&(shape.n, shape.dim));

        let mut rng = ctx.rng(stream);
        let name = format!("orbit/c_translation/{}", tag(shape));
        let mut defect = 0.0f64;
        let mut err = None;
        for _ in 0..100 {
            let x = random_dual(&mut rng, shape);
            let flow = CoadjointFlow::CTranslation(random_params(&mut rng, shape, 1.0));
            match (
                coad_closed_form(&alg, &flow, &x),
                coad_generic_real(&alg, &flow.generator_terms(), 1.0, &x),
            ) {
                (Ok(a), Ok(b)) => defect = defect.max(a.max_abs_diff(&b)),
                (Err(e), _) | (_, Err(e)) => err = Some(core_err(e)),
            }
        }
        match err {
            Some(e) => report.error(name, tol.coadjoint_oracle, e),
            None => {
                report.check(name, defect, tol.coadjoint_oracle);
            }
        }

        if !casimirs {
            continue;
        }
        let mut rng = ctx.rng(stream + 1);
        let name = format!("orbit/casimir_invariance/{}", tag(shape));
        let mut drift = 0.0f64;
        let mut err = None;
        for _ in 0..100 {
            let x = random_dual(&mut rng, shape);
            let a: Vec<(GeneratorId, f64)> = alg
                .generators()
                .iter()
                .map(|g| (*g, uniform(&mut rng, 0.5)))
                .collect();
            let moved = coad_generic_real(&alg, &a, 1.0, &x).map_err(core_err);
            let pair = moved.and_then(|y| {
                Ok((
                    casimir_values(&alg, &x).map_err(core_err)?,
                    casimir_values(&alg, &y).map_err(core_err)?,
                ))
            });
            match pair {
                Ok((before, after)) => {
                    let scale = before.as_array().iter().fold(1.0f64, |s, v| s.max(v.abs()));
                    drift = drift.max(before.max_abs_diff(&after) / scale);
                }
                Err(e) => err = Some(e),
            }
        }
        match err {
            Some(e) => report.error(name, tol.casimir, e),
            None => {
                report.check_with(
                    name,
                    drift,
                    tol.casimir,
                    Some("relative to max(1, |C|)".into()),
                );
            }
        }

        let mut rng = ctx.rng(stream + 2);
        let mut defects = [0.0f64; 3];
        let mut err = None;
        for _ in 0..100 {
            let (label, s, chi) = random_label(&mut rng, shape.dim);
            let x = random_params(&mut rng, shape, 1.0);
            let values =
                parametrize(&label, shape, &s, &chi, &x).and_then(|p| casimir_values(&alg, &p));
            match values {
                Ok(c) => {
                    let m = label.m;
                    let c2 = if shape.dim == 3 {
                        m * m * label.s2
                    } else {
                        m * label.s2
                    };
                    let c3 = 2.0 * m * m * label.chi_class.signed_sigma2();
                    defects[0] = defects[0].max((c.c1 - m).abs());
                    defects[1] = defects[1].max((c.c2 - c2).abs());
                    defects[2] = defects[2].max((c.c3 - c3).abs());
                }
                Err(e) => err = Some(core_err(e)),
            }
        }
        for (i, which) in ["C1", "C2", "C3"].iter().enumerate() {
            let name = format!("orbit/label_casimir/{which}/{}", tag(shape));
            match &err {
                Some(e) => report.error(name, tol.label_casimir, e.clone()),
                None => {
                    report.check(name, defects[i], tol.label_casimir);
                }
            }
        }
    }

    let mut rng = ctx.rng(300);
    let mut changed = 0usize;
    let mut err = None;
    for _ in 0..50 {
        let (label, s, chi) = random_label(&mut rng, 3);
        let x = vec![vec![0.0; 3]; 2];
        let a = vec![
            (GeneratorId::H, uniform(&mut rng, 0.7)),
            (GeneratorId::D, uniform(&mut rng, 0.7)),
            (GeneratorId::K, uniform(&mut rng, 0.7)),
        ];
        let moved = parametrize(&label, schrodinger, &s, &chi, &x)
            .and_then(|p| coad_generic_real(&alg1, &a, 1.0, &p));
        match moved.and_then(|y| {
            classify_orbit(
                &[(y.h + y.k) / 2.0, (y.k - y.h) / 2.0, y.d],
                DEFAULT_CLASSIFY_TOL,
            )
        }) {
            Ok(class) => {
                let same = class.tag == label.chi_class.tag
                    && (class.sigma - label.chi_class.sigma).abs()
                        <= DEFAULT_CLASSIFY_TOL * label.chi_class.sigma.max(1.0);
                changed += usize::from(!same);
            }
            Err(e) => err = Some(core_err(e)),
        }
    }
    match err {
        Some(e) => report.error("orbit/chi_class_under_sl2", 0.0, e),
        None => {
            report.check("orbit/chi_class_under_sl2", changed as f64, 0.0);
        }
    }
    Ok(())
}

pub fn poisson_suite(ctx: &VerifyContext, report: &mut Report) -> Result<(), CliError> {
    let tol = ctx.tol;
    for (k, shape) in ctx.shapes().into_iter().enumerate() {
        let alg = ctx.central(shape)?;
        let mut rng = ctx.rng(400 + k as u64);
        let mut closure = 0.0f64;
        let mut worst = None;
        let mut routes = 0.0f64;
        let mut round_trip = 0.0f64;
        for _ in 0..50 {
            let pt = random_point(&mut rng, shape);
            let r = momentum_map_closure(&alg, &pt);
            if !(r.max_defect <= closure) {
                closure = r.max_defect;
                worst = r.worst_pair;
            }
            routes = routes.max(generators_at(&pt).max_abs_diff(&generators_via_orbit(&pt)));
            match to_darboux(shape, pt.m, &from_darboux(&pt)) {
                Ok(ext) => {
                    let back = PhasePoint::with_external(shape, pt.m, ext, pt.s.clone(), pt.chi);
                    round_trip = round_trip.max(back.max_abs_diff(&pt));
                }
                Err(_) => round_trip = f64::INFINITY,
            }
        }
        let detail = worst
            .filter(|_| closure > tol.closure)
            .map(|(x, y)| format!("worst pair ({x}, {y})"));
        report.check_with(
            format!("poisson/momentum_map_closure/{}", tag(shape)),
            closure,
            tol.closure,
            detail,
        );
        report.check(
            format!("poisson/generator_routes/{}", tag(shape)),
            routes,
            tol.generator_routes,
        );
        report.check(
            format!("poisson/darboux_round_trip/{}", tag(shape)),
            round_trip,
            tol.generator_routes,
        );
    }
    Ok(())
}

fn hamiltonian_poly(shape: Shape, m: f64, ham: HamiltonianChoice) -> Polynomial {
    let gens = generator_functions(shape, m);
    let h = generator_poly(&gens, &GeneratorId::H).expect("every orbit has H");
    match ham {
        HamiltonianChoice::Free => h,
        HamiltonianChoice::NewtonHooke { omega, sign } => {
            let k = generator_poly(&gens, &GeneratorId::K).expect("every orbit has K");
            let w = f64::from(sign) * omega * omega;
            h + Polynomial::from_terms(k.terms().map(|(mono, c)| (mono.clone(), w * c)))
        }
    }
}

/// Largest `|dz/dt - {z, H}|` over coordinates at 50 random points.
fn hamiltonian_defect(
    rng: &mut ChaCha8Rng,
    shape: Shape,
    ham: HamiltonianChoice,
) -> Result<f64, String> {
    let len = Layout::new(shape).len();
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let pt = random_point(rng, shape);
        let pi = StructureMatrix::new(shape, pt.m);
        let h = hamiltonian_poly(shape, pt.m, ham);
        let z = pt.to_flat();
        let v = time_derivative(&pt, ham).map_err(core_err)?.to_flat();
        for (i, vi) in v.iter().enumerate().take(len) {
            worst = worst.max((vi - pi.bracket_at(&Polynomial::var(i), &h, &z)).abs());
        }
    }
    Ok(worst)
}

fn free_pair(pt: &PhasePoint) -> Result<(Trajectory, Trajectory), String> {
    let rk = integrate(pt, HamiltonianChoice::Free, 1.0, 1e-3, Method::Rk4).map_err(core_err)?;
    let cf = integrate(pt, HamiltonianChoice::Free, 1.0, 1e-3, Method::Closed).map_err(core_err)?;
    Ok((rk, cf))
}

pub fn dynamics_suite(ctx: &VerifyContext, report: &mut Report) -> Result<(), CliError> {
    let tol = ctx.tol;
    for (k, shape) in ctx.shapes().into_iter().enumerate() {
        let t = tag(shape);
        let mut rng = ctx.rng(500 + 10 * k as u64);
        let name = format!("dynamics/hamiltonian_consistency/{t}");
        match hamiltonian_defect(&mut rng, shape, HamiltonianChoice::Free) {
            Ok(d) => {
                report.check(name, d, tol.hamiltonian);
            }
            Err(e) => report.error(name, tol.hamiltonian, e),
        }

        let pt = random_point(&mut ctx.rng(501 + 10 * k as u64), shape);
        let (rk, cf) = match free_pair(&pt) {
            Ok(pair) => pair,
            Err(e) => {
                report.error(format!("dynamics/integrate/{t}"), 0.0, e);
                continue;
            }
        };
        let gap = rk
            .states
            .iter()
            .zip(&cf.states)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max);
        report.check(
            format!("dynamics/rk4_vs_closed/{t}"),
            gap,
            tol.rk4_vs_closed,
        );

        for (method, traj, allowed) in [("closed", &cf, tol.fit_closed), ("rk4", &rk, tol.fit_rk4)]
        {
            match verify_motion_order(traj, shape.n) {
                Ok(r) => {
                    report.check(
                        format!("dynamics/motion_order_fit/{method}/{t}"),
                        r.fit_residual,
                        allowed,
                    );
                    report.check_with(
                        format!("dynamics/finite_difference/{method}/{t}"),
                        r.max_finite_difference,
                        r.fd_threshold,
                        Some("allowed = 64 * 2^(N+1) * eps * max(1, |q0|) / dt^(N+1)".into()),
                    );
                }
                Err(e) => report.error(
                    format!("dynamics/motion_order_fit/{method}/{t}"),
                    allowed,
                    core_err(e),
                ),
            }
        }

        for (key, drift) in rk.conservation_drifts() {
            report.check(
                format!("dynamics/conservation/{key}/{t}"),
                drift,
                tol.conservation,
            );
        }
        let c0 = rk.casimirs[0];
        let cas = rk
            .casimirs
            .iter()
            .map(|c| c.max_abs_diff(&c0))
            .fold(0.0, f64::max);
        report.check(
            format!("dynamics/conservation/casimirs/{t}"),
            cas,
            tol.conservation,
        );
    }

    let schrodinger = Shape::new(1, 3).expect("valid shape");
    for (sign, stream) in [(1i8, 600u64), (-1, 601)] {
        let ham = HamiltonianChoice::NewtonHooke { omega: 1.0, sign };
        let label = if sign > 0 { "plus" } else { "minus" };
        let name = format!("dynamics/newton_hooke/{label}/hamiltonian_consistency");
        match hamiltonian_defect(&mut ctx.rng(stream), schrodinger, ham) {
            Ok(d) => {
                report.check(name, d, tol.hamiltonian);
            }
            Err(e) => report.error(name, tol.hamiltonian, e),
        }
    }

    let mut rng = ctx.rng(602);
    let mut pt = random_point(&mut rng, schrodinger);
    pt.m = 1.0;
    pt.p[0] = vec![0.0; 3];
    let x0 = pt.q[0].clone();
    for sign in [1i8, -1] {
        let ham = HamiltonianChoice::NewtonHooke { omega: 1.0, sign };
        let label = if sign > 0 { "plus" } else { "minus" };
        match integrate(&pt, ham, PI, PI / 2000.0, Method::Rk4) {
            Ok(traj) => {
                let x = &traj.states.last().expect("non-empty trajectory").q[0];
                let expected = if sign > 0 { -1.0 } else { PI.cosh() };
                let err = x
                    .iter()
                    .zip(&x0)
                    .map(|(a, b)| (a - expected * b).abs())
                    .fold(0.0, f64::max);
                report.check(
                    format!("dynamics/newton_hooke/{label}/position_at_pi"),
                    err,
                    tol.newton_hooke_position * if sign > 0 { 1.0 } else { PI.cosh() },
                );
                let drift = traj
                    .conservation_drifts()
                    .get("energy")
                    .copied()
                    .unwrap_or(f64::INFINITY);
                report.check(
                    format!("dynamics/newton_hooke/{label}/energy"),
                    drift,
                    tol.newton_hooke_energy,
                );
            }
            Err(e) => report.error(
                format!("dynamics/newton_hooke/{label}/position_at_pi"),
                0.0,
                core_err(e),
            ),
        }
    }
    Ok(())
}

fn coadjoint_defect(
    traj: &Trajectory,
    mapped: &Trajectory,
    transform: &Transform,
) -> Result<f64, String> {
    let alg = build_algebra(1, 3, true, false).map_err(core_err)?;
    let mut expected = integrals_of_motion(&traj.states[0], traj.times[0])
        .map_err(core_err)?
        .values;
    for flow in transform.coadjoint_flows().map_err(core_err)? {
        expected = coad_closed_form(&alg, &flow, &expected).map_err(core_err)?;
    }
    let mut worst = 0.0f64;
    for (t, s) in mapped.times.iter().zip(&mapped.states) {
        let got = integrals_of_motion(s, *t).map_err(core_err)?.values;
        worst = worst.max(got.max_abs_diff(&expected));
    }
    Ok(worst)
}

/// Solution-to-solution and coadjoint-column checks for one transform.
pub fn check_transform(
    report: &mut Report,
    tol: &Tolerances,
    prefix: &str,
    traj: &Trajectory,
    transform: &Transform,
    fit_allowed: f64,
) {
    let mapped = match map_trajectory(traj, transform) {
        Ok(m) => m,
        Err(e) => {
            report.error(
                format!("{prefix}/motion_order_fit"),
                fit_allowed,
                core_err(e),
            );
            return;
        }
    };
    match verify_motion_order(&mapped, traj.states[0].shape.n) {
        Ok(r) => {
            report.check(
                format!("{prefix}/motion_order_fit"),
                r.fit_residual,
                fit_allowed,
            );
        }
        Err(e) => report.error(
            format!("{prefix}/motion_order_fit"),
            fit_allowed,
            core_err(e),
        ),
    }
    let drift = mapped
        .conservation_drifts()
        .values()
        .copied()
        .fold(0.0, f64::max);
    report.check(format!("{prefix}/conservation"), drift, tol.conservation);
    match coadjoint_defect(traj, &mapped, transform) {
        Ok(d) => {
            report.check(format!("{prefix}/coadjoint_column"), d, tol.column);
        }
        Err(e) => report.error(format!("{prefix}/coadjoint_column"), tol.column, e),
    }
}

fn c_label(c: f64) -> String {
    format!("c={c}")
}

pub fn symmetry_suite(ctx: &VerifyContext, report: &mut Report) -> Result<(), CliError> {
    let tol = ctx.tol;
    for (k, shape) in ctx.shapes().into_iter().enumerate() {
        let t = tag(shape);
        let pt = random_point(&mut ctx.rng(700 + k as u64), shape);
        let (rk, cf) = match free_pair(&pt) {
            Ok(pair) => pair,
            Err(e) => {
                report.error(format!("symmetry/integrate/{t}"), 0.0, e);
                continue;
            }
        };
        for (method, traj, allowed) in [
            ("closed", &cf, tol.integrals_closed),
            ("rk4", &rk, tol.integrals_rk4),
        ] {
            let name = format!("symmetry/integrals/{method}/{t}");
            match integral_drifts(traj) {
                Ok(d) => {
                    let (worst_key, worst) =
                        d.iter().fold((String::new(), 0.0f64), |acc, (k, v)| {
                            if *v > acc.1 {
                                (k.clone(), *v)
                            } else {
                                acc
                            }
                        });
                    let detail =
                        (!worst_key.is_empty()).then(|| format!("largest drift in {worst_key}"));
                    report.check_with(name, worst, allowed, detail);
                }
                Err(e) => report.error(name, allowed, core_err(e)),
            }
        }
    }

    let mut rng = ctx.rng(800);
    let mut law = 0.0f64;
    for _ in 0..200 {
        let t = uniform(&mut rng, 3.0);
        let (c1, c2) = (uniform(&mut rng, 1.0), uniform(&mut rng, 1.0));
        if let (Ok(t1), Ok(direct)) = (conformal_time(t, c1), conformal_time(t, c1 + c2)) {
            if let Ok(t2) = conformal_time(t1, c2) {
                law = law.max((t2 - direct).abs() / direct.abs().max(1.0));
            }
        }
    }
    report.check("symmetry/conformal_time_group_law", law, tol.group_law);

    let schrodinger = Shape::new(1, 3).expect("valid shape");
    let mut rng = ctx.rng(801);
    let pt = random_point(&mut rng, schrodinger);
    let (rk, cf) = free_pair(&pt).map_err(CliError::Invalid)?;
    for c in [0.5, -0.5, 1.0] {
        let transform = Transform::Conformal { c };
        check_transform(
            report,
            &tol,
            &format!("symmetry/conformal/{}/rk4", c_label(c)),
            &rk,
            &transform,
            tol.fit_rk4,
        );
        check_transform(
            report,
            &tol,
            &format!("symmetry/conformal/{}/closed", c_label(c)),
            &cf,
            &transform,
            tol.fit_closed,
        );
    }
    let galilei = [
        (
            "translation",
            GalileiParams {
                translation: vec3(&mut rng, 1.0),
                ..Default::default()
            },
        ),
        (
            "boost",
            GalileiParams {
                boost: vec3(&mut rng, 1.0),
                ..Default::default()
            },
        ),
        (
            "time_shift",
            GalileiParams {
                time_shift: uniform(&mut rng, 1.0),
                ..Default::default()
            },
        ),
        (
            "rotation",
            GalileiParams::default().with_rotation(vec3(&mut rng, 2.0)),
        ),
        (
            "composite",
            GalileiParams {
                translation: vec3(&mut rng, 1.0),
                boost: vec3(&mut rng, 1.0),
                time_shift: uniform(&mut rng, 1.0),
                ..Default::default()
            }
            .with_rotation(vec3(&mut rng, 2.0)),
        ),
    ];
    for (name, params) in galilei {
        let transform = Transform::Galilei(params);
        check_transform(
            report,
            &tol,
            &format!("symmetry/galilei/{name}/rk4"),
            &rk,
            &transform,
            tol.fit_rk4,
        );
        check_transform(
            report,
            &tol,
            &format!("symmetry/galilei/{name}/closed"),
            &cf,
            &transform,
            tol.fit_closed,
        );
    }
    Ok(())
}
