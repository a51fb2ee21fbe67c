use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ngca_core::algebra::{
    build_algebra, central_magnitude_defect, jacobi_report, schrodinger_reference,
    so21_closure_defect, specialization_mismatches,
};
use ngca_core::coadjoint::{casimir_values, classify_orbit, parametrize, Casimirs, OrbitLabel};
use ngca_core::dynamics::{integrate, verify_motion_order, write_csv, HamiltonianChoice, Method};
use ngca_core::poisson::{from_darboux, generators_at};
use ngca_core::symmetry::{integral_drifts, GalileiParams, Transform};
use ngca_core::Shape;

use crate::config::{Prepared, RunConfig, Tolerances};
use crate::report::Report;
use crate::suites::{check_transform, run_verify, Flip, Suite, VerifyContext};
use crate::CliError;

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(e.to_string())
}

fn num(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

pub fn algebra_check(n: u32, dim: u8, central: bool, ds: bool) -> Result<Report, CliError> {
    let alg = build_algebra(n, dim, central, ds).map_err(invalid)?;
    let mut report = Report::new(format!("algebra check --N {n} --dim {dim}"), None);
    let jac = jacobi_report(&alg);
    let triple = jac.worst_triple.filter(|_| !jac.max_defect.is_zero());
    report.check_with(
        "jacobi",
        num(&jac.max_defect),
        0.0,
        triple.map(|[x, y, z]| format!("Jacobi fails on ({x}, {y}, {z})")),
    );
    let pair = jac
        .worst_pair
        .filter(|_| !jac.antisymmetry_defect.is_zero());
    report.check_with(
        "antisymmetry",
        num(&jac.antisymmetry_defect),
        0.0,
        pair.map(|[x, y]| format!("antisymmetry fails on ({x}, {y})")),
    );
    report.check("so21_closure", num(&so21_closure_defect(&alg)), 0.0);
    if central {
        report.check(
            "central_magnitudes",
            num(&central_magnitude_defect(&alg)),
            0.0,
        );
    }
    if n == 1 && dim == 3 {
        let diff = specialization_mismatches(&alg, &schrodinger_reference(central, ds));
        let detail = diff
            .first()
            .map(|(x, y)| format!("[{x}, {y}] differs from the Schrödinger table"));
        report.check_with("schrodinger_specialization", diff.len() as f64, 0.0, detail);
    }
    report.insert("generators", alg.generators().len());
    report.insert("constants", alg.entries().count());
    report.insert("central", central);
    report.insert("with_ds", ds);
    Ok(report.finish())
}

pub fn algebra_dump(n: u32, dim: u8, central: bool, ds: bool) -> Result<String, CliError> {
    let alg = build_algebra(n, dim, central, ds).map_err(invalid)?;
    let dump = alg.dump().map_err(invalid)?;
    Ok(serde_json::to_string_pretty(&dump).expect("dump serializes"))
}

/// Parses `a,b,c` into an internal vector.
pub fn parse_chi(text: &str) -> Result<[f64; 3], CliError> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|v| v.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| invalid(format!("chi `{text}`: {e}")))?;
    <[f64; 3]>::try_from(parts)
        .map_err(|p| invalid(format!("chi needs 3 components, got {}", p.len())))
}

pub fn orbit_classify(chi: [f64; 3], tol: f64) -> Result<Report, CliError> {
    if !(tol >= 0.0) {
        return Err(invalid("tol must be non-negative"));
    }
    let class = classify_orbit(&chi, tol).map_err(invalid)?;
    let mut report = Report::new("orbit classify", None);
    report.insert("chi", chi);
    report.insert("tag", class.tag);
    report.insert("sigma", class.sigma);
    report.insert("signed_sigma2", class.signed_sigma2());
    Ok(report.finish())
}

fn expected_casimirs(label: &OrbitLabel, shape: Shape) -> Casimirs {
    let m = label.m;
    Casimirs {
        c1: m,
        c2: if shape.dim == 3 {
            m * m * label.s2
        } else {
            m * label.s2
        },
        c3: 2.0 * m * m * label.chi_class.signed_sigma2(),
    }
}

fn check_label(report: &mut Report, prep: &Prepared, values: &Casimirs) {
    let expected = expected_casimirs(&prep.label, prep.shape);
    let allowed = prep.config.tolerances.label_casimir;
    for (name, got, want) in [
        ("C1", values.c1, expected.c1),
        ("C2", values.c2, expected.c2),
        ("C3", values.c3, expected.c3),
    ] {
        report.check(format!("label_casimir/{name}"), (got - want).abs(), allowed);
    }
    report.insert("casimirs", values);
    report.insert("expected_casimirs", expected);
}

pub fn orbit_parametrize(cfg: &RunConfig) -> Result<Report, CliError> {
    let prep = cfg.prepare()?;
    let alg = build_algebra(cfg.n as u32, cfg.dim as u8, true, false).map_err(invalid)?;
    let x = from_darboux(&prep.point);
    let dual = parametrize(&prep.label, prep.shape, &prep.point.s, &prep.point.chi, &x)
        .map_err(invalid)?;
    let values = casimir_values(&alg, &dual).map_err(invalid)?;
    let mut report = Report::new("orbit parametrize", None);
    report.check(
        "phase_space_route",
        dual.max_abs_diff(&generators_at(&prep.point)),
        cfg.tolerances.generator_routes,
    );
    check_label(&mut report, &prep, &values);
    report.insert("label", prep.label);
    report.insert("external", &x);
    report.insert("dual", &dual);
    Ok(report.finish())
}

pub fn casimir_eval(cfg: &RunConfig) -> Result<Report, CliError> {
    let prep = cfg.prepare()?;
    let alg = build_algebra(cfg.n as u32, cfg.dim as u8, true, false).map_err(invalid)?;
    let dual = generators_at(&prep.point);
    let values = casimir_values(&alg, &dual).map_err(invalid)?;
    let mut report = Report::new("casimir eval", None);
    check_label(&mut report, &prep, &values);
    report.insert("label", prep.label);
    Ok(report.finish())
}

fn io(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    let mut f = File::create(path).map_err(|e| io(path, e))?;
    f.write_all(text.as_bytes())
        .and_then(|_| f.write_all(b"\n"))
        .map_err(|e| io(path, e))
}

/// Integrates the configured orbit, writes the CSV and reports drifts,
/// the motion-order fit and, for free motion, the integrals of motion.
pub fn simulate(cfg: &RunConfig, csv: Option<&Path>) -> Result<Report, CliError> {
    let prep = cfg.prepare()?;
    let tol = cfg.tolerances;
    let traj = integrate(&prep.point, prep.ham, cfg.t_end, cfg.dt, cfg.method).map_err(invalid)?;
    if let Some(path) = csv.or(cfg.csv.as_deref()) {
        let f = File::create(path).map_err(|e| io(path, e))?;
        write_csv(&traj, BufWriter::new(f)).map_err(|e| io(path, e))?;
    }
    let mut report = Report::new("simulate", Some(cfg.seed));
    for (key, drift) in traj.conservation_drifts() {
        let allowed = if key == "energy" {
            tol.newton_hooke_energy
        } else {
            tol.conservation
        };
        report.check(format!("conservation/{key}"), drift, allowed);
    }
    let c0 = traj.casimirs[0];
    let cas = traj
        .casimirs
        .iter()
        .map(|c| c.max_abs_diff(&c0))
        .fold(0.0, f64::max);
    report.check("conservation/casimirs", cas, tol.conservation);
    if prep.ham == HamiltonianChoice::Free {
        let order = verify_motion_order(&traj, prep.shape.n).map_err(invalid)?;
        let allowed = if cfg.method == Method::Closed {
            tol.fit_closed
        } else {
            tol.fit_rk4
        };
        report.check("motion_order/fit_residual", order.fit_residual, allowed);
        report.check(
            "motion_order/finite_difference",
            order.max_finite_difference,
            order.fd_threshold,
        );
        report.insert("motion_order", &order);
        let allowed = if cfg.method == Method::Closed {
            tol.integrals_closed
        } else {
            tol.integrals_rk4
        };
        for (name, drift) in integral_drifts(&traj).map_err(invalid)? {
            report.check(format!("integrals/{name}"), drift, allowed);
        }
    }
    report.insert("N", prep.shape.n);
    report.insert("dim", prep.shape.dim);
    report.insert("method", cfg.method);
    report.insert("hamiltonian", prep.ham);
    report.insert("samples", traj.len());
    report.insert("t_end", traj.times.last().copied().unwrap_or(0.0));
    report.insert("casimirs", c0);
    Ok(report.finish())
}

/// Integrals of motion along the configured free trajectory and, for the
/// Schrödinger shape, the finite conformal and Galilei maps.
pub fn symmetry_verify(cfg: &RunConfig) -> Result<Report, CliError> {
    let prep = cfg.prepare()?;
    if prep.ham != HamiltonianChoice::Free {
        return Err(invalid("symmetry verify needs the free hamiltonian"));
    }
    let tol = cfg.tolerances;
    let traj = integrate(&prep.point, prep.ham, cfg.t_end, cfg.dt, cfg.method).map_err(invalid)?;
    let mut report = Report::new("symmetry verify", Some(cfg.seed));
    let allowed = if cfg.method == Method::Closed {
        tol.integrals_closed
    } else {
        tol.integrals_rk4
    };
    for (name, drift) in integral_drifts(&traj).map_err(invalid)? {
        report.check(format!("integrals/{name}"), drift, allowed);
    }
    if prep.shape.n == 1 && prep.shape.dim == 3 {
        let fit = if cfg.method == Method::Closed {
            tol.fit_closed
        } else {
            tol.fit_rk4
        };
        let (t0, t1) = (
            traj.times[0],
            *traj.times.last().expect("non-empty trajectory"),
        );
        let mut skipped = Vec::new();
        for c in [0.5, -0.5, 1.0] {
            if 1.0 + c * t0 > 0.0 && 1.0 + c * t1 > 0.0 {
                check_transform(
                    &mut report,
                    &tol,
                    &format!("conformal/c={c}"),
                    &traj,
                    &Transform::Conformal { c },
                    fit,
                );
            } else {
                skipped.push(c);
            }
        }
        if !skipped.is_empty() {
            report.insert("conformal_skipped_singular", skipped);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut v = || -> [f64; 3] { std::array::from_fn(|_| rng.random_range(-1.0..1.0)) };
        let galilei = [
            (
                "translation",
                GalileiParams {
                    translation: v(),
                    ..Default::default()
                },
            ),
            (
                "boost",
                GalileiParams {
                    boost: v(),
                    ..Default::default()
                },
            ),
            (
                "time_shift",
                GalileiParams {
                    time_shift: v()[0],
                    ..Default::default()
                },
            ),
            ("rotation", GalileiParams::default().with_rotation(v())),
            (
                "composite",
                GalileiParams {
                    translation: v(),
                    boost: v(),
                    time_shift: v()[0],
                    ..Default::default()
                }
                .with_rotation(v()),
            ),
        ];
        for (name, params) in galilei {
            check_transform(
                &mut report,
                &tol,
                &format!("galilei/{name}"),
                &traj,
                &Transform::Galilei(params),
                fit,
            );
        }
    }
    report.insert("N", prep.shape.n);
    report.insert("dim", prep.shape.dim);
    report.insert("method", cfg.method);
    report.insert("samples", traj.len());
    Ok(report.finish())
}

pub fn verify(
    suite: Suite,
    seed: u64,
    tolerances: Option<&Path>,
    flip: Option<&str>,
) -> Result<Report, CliError> {
    let tol = match tolerances {
        Some(path) => Tolerances::from_file(path)?,
        None => Tolerances::default(),
    };
    let mut ctx = VerifyContext::new(seed, tol);
    ctx.flip = flip.map(str::parse::<Flip>).transpose()?;
    run_verify(suite, &ctx)
}
