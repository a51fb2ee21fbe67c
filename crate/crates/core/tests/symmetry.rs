use ngca_core::algebra::build_algebra;
use ngca_core::coadjoint::coad_closed_form;
use ngca_core::dynamics::{
    closed_form, integrate, verify_motion_order, HamiltonianChoice, Method, Trajectory,
};
use ngca_core::poisson::{Layout, PhasePoint};
use ngca_core::symmetry::{
    conformal_time, integral_drifts, integrals_of_motion, map_trajectory, schrodinger_integrals,
    GalileiParams, SymmetryError, Transform,
};
use ngca_core::Shape;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const FREE: HamiltonianChoice = HamiltonianChoice::Free;

fn random_point(rng: &mut ChaCha8Rng, shape: Shape) -> PhasePoint {
    let m = rng.random_range(0.5..2.0);
    let z: Vec<f64> = (0..Layout::new(shape).len())
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    PhasePoint::from_flat(shape, m, &z).unwrap()
}

fn vec3(rng: &mut ChaCha8Rng, scale: f64) -> [f64; 3] {
    std::array::from_fn(|_| rng.random_range(-scale..scale))
}

fn random_galilei(rng: &mut ChaCha8Rng) -> GalileiParams {
    GalileiParams {
        translation: vec3(rng, 1.0),
        boost: vec3(rng, 1.0),
        time_shift: rng.random_range(-1.0..1.0),
        ..Default::default()
    }
    .with_rotation(vec3(rng, 2.0))
}

fn schrodinger() -> Shape {
    Shape::new(1, 3).unwrap()
}

#[test]
fn pull_back_matches_written_integrals() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..50 {
        let pt = random_point(&mut rng, schrodinger());
        let t = rng.random_range(-2.0..2.0);
        let a = integrals_of_motion(&pt, t).unwrap();
        let b = schrodinger_integrals(&pt, t).unwrap();
        assert!(a.values.max_abs_diff(&b.values) < 1e-12);
    }
}

#[test]
fn integrals_are_constant_on_free_trajectories() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for (n, dim) in [(1, 3), (3, 3), (5, 3), (2, 2), (4, 2)] {
        let pt = random_point(&mut rng, Shape::new(n, dim).unwrap());
        for (method, tol) in [(Method::Closed, 1e-12), (Method::Rk4, 1e-8)] {
            let traj = integrate(&pt, FREE, 1.0, 1e-3, method).unwrap();
            for (name, drift) in integral_drifts(&traj).unwrap() {
                assert!(drift < tol, "N={n} {method:?} {name}: {drift}");
            }
        }
    }
}

#[test]
fn written_integrals_constant_on_schrodinger_trajectory() {
    let mut pt = PhasePoint::zeros(schrodinger(), 1.0);
    pt.p[0] = vec![1.0, 0.0, 0.0];
    let traj = integrate(&pt, FREE, 2.0, 0.25, Method::Closed).unwrap();
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let set = schrodinger_integrals(s, *t).unwrap();
        assert!(
            set.values.d.abs() < 1e-15 && set.values.k.abs() < 1e-14,
            "t={t}"
        );
    }
}

#[test]
fn conformal_time_group_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..200 {
        let t = rng.random_range(-3.0..3.0);
        let (c1, c2) = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let (Ok(t1), Ok(direct)) = (conformal_time(t, c1), conformal_time(t, c1 + c2)) else {
            continue;
        };
        if let Ok(t2) = conformal_time(t1, c2) {
            assert!(
                (t2 - direct).abs() < 1e-9 * direct.abs().max(1.0),
                "t={t} c1={c1} c2={c2}"
            );
        }
    }
}

fn check_consistency(traj: &Trajectory, mapped: &Trajectory, transform: &Transform) {
    let alg = build_algebra(1, 3, true, false).unwrap();
    let mut expected = integrals_of_motion(&traj.states[0], traj.times[0])
        .unwrap()
        .values;
    for flow in transform.coadjoint_flows().unwrap() {
        expected = coad_closed_form(&alg, &flow, &expected).unwrap();
    }
    for (t, s) in mapped.times.iter().zip(&mapped.states) {
        let got = integrals_of_motion(s, *t).unwrap().values;
        let defect = got.max_abs_diff(&expected);
        assert!(defect < 1e-9, "{transform:?} at t'={t}: {defect}");
    }
}

fn check_solution(traj: &Trajectory, transform: &Transform, method: Method) -> Trajectory {
    let mapped = map_trajectory(traj, transform).unwrap();
    assert_eq!(mapped.len(), traj.len());
    assert!(mapped.uniform_step().is_some());
    let report = verify_motion_order(&mapped, 1).unwrap();
    let tol = if method == Method::Closed {
        1e-10
    } else {
        1e-7
    };
    assert!(report.fit_residual < tol, "{transform:?}: {report:?}");
    let drifts = mapped.conservation_drifts();
    for key in ["m", "spin", "chi_square", "j", "e", "p0", "h"] {
        assert!(drifts[key] < 1e-8, "{transform:?} {key}: {}", drifts[key]);
    }
    mapped
}

#[test]
fn conformal_maps_solutions_to_solutions() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for c in [0.5, -0.5, 1.0] {
        let transform = Transform::Conformal { c };
        for method in [Method::Closed, Method::Rk4] {
            let pt = random_point(&mut rng, schrodinger());
            let traj = integrate(&pt, FREE, 1.0, 1e-3, method).unwrap();
            let mapped = check_solution(&traj, &transform, method);
            check_consistency(&traj, &mapped, &transform);
        }
    }
}

#[test]
fn images_lie_on_one_free_solution() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let transforms = [
        Transform::Conformal { c: 0.8 },
        Transform::Galilei(random_galilei(&mut rng)),
    ];
    for transform in transforms {
        let pt = random_point(&mut rng, schrodinger());
        let (base, t0) = transform.apply(&pt, 0.0).unwrap();
        for t in [0.3, 0.9, 1.4] {
            let s = closed_form(&pt, FREE, t).unwrap();
            let (image, t2) = transform.apply(&s, t).unwrap();
            let predicted = closed_form(&base, FREE, t2 - t0).unwrap();
            assert!(
                image.max_abs_diff(&predicted) < 1e-12,
                "{transform:?} t={t}"
            );
        }
    }
}

#[test]
fn galilei_maps_solutions_to_solutions() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    for _ in 0..10 {
        let transform = Transform::Galilei(random_galilei(&mut rng));
        let pt = random_point(&mut rng, schrodinger());
        let traj = integrate(&pt, FREE, 1.0, 1e-3, Method::Rk4).unwrap();
        let mapped = check_solution(&traj, &transform, Method::Rk4);
        check_consistency(&traj, &mapped, &transform);
    }
}

#[test]
fn single_galilei_columns() {
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    let pt = random_point(&mut rng, schrodinger());
    let traj = integrate(&pt, FREE, 0.5, 0.01, Method::Closed).unwrap();
    let singles = [
        GalileiParams {
            translation: [0.4, -0.1, 0.2],
            ..Default::default()
        },
        GalileiParams {
            boost: [0.4, -0.1, 0.2],
            ..Default::default()
        },
        GalileiParams {
            time_shift: 0.7,
            ..Default::default()
        },
        GalileiParams::default().with_rotation([0.4, -0.1, 0.2]),
    ];
    for params in singles {
        let transform = Transform::Galilei(params);
        let mapped = map_trajectory(&traj, &transform).unwrap();
        check_consistency(&traj, &mapped, &transform);
    }
}

#[test]
fn identity_and_boost_of_rest() {
    let mut rng = ChaCha8Rng::seed_from_u64(28);
    let pt = random_point(&mut rng, schrodinger());
    let traj = integrate(&pt, FREE, 1.0, 0.01, Method::Rk4).unwrap();
    assert_eq!(map_trajectory(&traj, &Transform::identity()).unwrap(), traj);
    let unit = map_trajectory(&traj, &Transform::Conformal { c: 0.0 }).unwrap();
    assert_eq!(unit.times, traj.times);
    for (a, b) in unit.states.iter().zip(&traj.states) {
        assert!(a.max_abs_diff(b) < 1e-14);
    }

    let rest = PhasePoint::zeros(schrodinger(), 2.0);
    let traj = integrate(&rest, FREE, 1.0, 0.1, Method::Closed).unwrap();
    let boost = Transform::Galilei(GalileiParams {
        boost: [1.0, 0.0, 0.0],
        ..Default::default()
    });
    let mapped = map_trajectory(&traj, &boost).unwrap();
    for (t, s) in mapped.times.iter().zip(&mapped.states) {
        assert!((s.q[0][0] - t).abs() < 1e-15);
        assert_eq!(s.p[0], vec![2.0, 0.0, 0.0]);
    }
}

#[test]
fn conformal_rest_trajectory() {
    let mut pt = PhasePoint::zeros(schrodinger(), 1.0);
    pt.q[0] = vec![1.0, 0.0, 0.0];
    let traj = integrate(&pt, FREE, 1.0, 0.01, Method::Closed).unwrap();
    let mapped = map_trajectory(&traj, &Transform::Conformal { c: 1.0 }).unwrap();
    assert!((mapped.times.last().unwrap() - 0.5).abs() < 1e-15);
    for (t, s) in mapped.times.iter().zip(&mapped.states) {
        assert!((s.q[0][0] - (1.0 - t)).abs() < 1e-14);
        assert!((s.p[0][0] + 1.0).abs() < 1e-14);
    }
}

#[test]
fn singular_range_is_rejected() {
    let pt = PhasePoint::zeros(schrodinger(), 1.0);
    let traj = integrate(&pt, FREE, 1.0, 0.1, Method::Closed).unwrap();
    for c in [-1.0, -2.0] {
        assert!(matches!(
            map_trajectory(&traj, &Transform::Conformal { c }),
            Err(SymmetryError::SingularTime { .. })
        ));
    }
}

#[test]
fn transforms_need_schrodinger_shape() {
    let pt = PhasePoint::zeros(Shape::new(3, 3).unwrap(), 1.0);
    assert!(matches!(
        Transform::identity().apply(&pt, 0.0),
        Err(SymmetryError::Unsupported(_))
    ));
}
