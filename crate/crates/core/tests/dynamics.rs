use std::f64::consts::PI;

use ngca_core::algebra::GeneratorId;
use ngca_core::coadjoint::{classify_orbit, DEFAULT_CLASSIFY_TOL};
use ngca_core::dynamics::{
    closed_form, integrate, time_derivative, verify_motion_order, HamiltonianChoice, Method,
};
use ngca_core::poisson::{
    generator_functions, generator_poly, Layout, PhasePoint, Polynomial, StructureMatrix,
};
use ngca_core::Shape;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SHAPES: [(usize, usize); 6] = [(1, 3), (3, 3), (5, 3), (2, 2), (4, 2), (6, 2)];

fn random_point(rng: &mut ChaCha8Rng, shape: Shape) -> PhasePoint {
    let m = rng.random_range(0.5..2.0);
    let z: Vec<f64> = (0..Layout::new(shape).len())
        .map(|_| rng.random_range(-1.0..1.0))
        .collect();
    PhasePoint::from_flat(shape, m, &z).unwrap()
}

fn hamiltonian_poly(shape: Shape, m: f64, ham: HamiltonianChoice) -> Polynomial {
    let gens = generator_functions(shape, m);
    let h = generator_poly(&gens, &GeneratorId::H).unwrap();
    match ham {
        HamiltonianChoice::Free => h,
        HamiltonianChoice::NewtonHooke { omega, sign } => {
            let k = generator_poly(&gens, &GeneratorId::K).unwrap();
            let w = f64::from(sign) * omega * omega;
            let scaled = Polynomial::from_terms(k.terms().map(|(mono, c)| (mono.clone(), w * c)));
            h + scaled
        }
    }
}

fn check_hamiltonian(shape: Shape, ham: HamiltonianChoice, rng: &mut ChaCha8Rng) {
    let len = Layout::new(shape).len();
    for _ in 0..50 {
        let pt = random_point(rng, shape);
        let pi = StructureMatrix::new(shape, pt.m);
        let h = hamiltonian_poly(shape, pt.m, ham);
        let z = pt.to_flat();
        let v = time_derivative(&pt, ham).unwrap().to_flat();
        for (i, vi) in v.iter().enumerate().take(len) {
            let expected = pi.bracket_at(&Polynomial::var(i), &h, &z);
            assert!(
                (vi - expected).abs() < 1e-10,
                "{shape:?} coordinate {}: {vi} vs {expected}",
                Layout::new(shape).names()[i],
            );
        }
    }
}

#[test]
fn velocity_is_bracket_with_free_hamiltonian() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (n, dim) in SHAPES {
        check_hamiltonian(
            Shape::new(n, dim).unwrap(),
            HamiltonianChoice::Free,
            &mut rng,
        );
    }
}

#[test]
fn velocity_is_bracket_with_newton_hooke_hamiltonian() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let shape = Shape::new(1, 3).unwrap();
    for sign in [1, -1] {
        check_hamiltonian(
            shape,
            HamiltonianChoice::NewtonHooke { omega: 1.3, sign },
            &mut rng,
        );
    }
}

#[test]
fn rk4_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for (n, dim) in [(3, 3), (4, 2)] {
        let shape = Shape::new(n, dim).unwrap();
        for _ in 0..5 {
            let pt = random_point(&mut rng, shape);
            let rk = integrate(&pt, HamiltonianChoice::Free, 1.0, 1e-3, Method::Rk4).unwrap();
            let cf = integrate(&pt, HamiltonianChoice::Free, 1.0, 1e-3, Method::Closed).unwrap();
            assert_eq!(rk.len(), 1001);
            let worst = rk
                .states
                .iter()
                .zip(&cf.states)
                .map(|(a, b)| a.max_abs_diff(b))
                .fold(0.0, f64::max);
            assert!(worst < 1e-8, "N={n}: {worst}");
        }
    }
}

#[test]
fn closed_form_flow_composes() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for (n, dim) in SHAPES {
        let pt = random_point(&mut rng, Shape::new(n, dim).unwrap());
        let free = HamiltonianChoice::Free;
        let direct = closed_form(&pt, free, 0.7).unwrap();
        let split = closed_form(&closed_form(&pt, free, 0.3).unwrap(), free, 0.4).unwrap();
        assert!(direct.max_abs_diff(&split) < 1e-13);
        let back = closed_form(&direct, free, -0.7).unwrap();
        assert!(back.max_abs_diff(&pt) < 1e-13);
    }
}

#[test]
fn free_flow_conserves() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for (n, dim) in SHAPES {
        let pt = random_point(&mut rng, Shape::new(n, dim).unwrap());
        for (method, tol) in [(Method::Rk4, 1e-8), (Method::Closed, 1e-12)] {
            let traj = integrate(&pt, HamiltonianChoice::Free, 1.0, 1e-3, method).unwrap();
            let drifts = traj.conservation_drifts();
            for key in ["m", "spin", "chi_square", "j", "e", "p0", "h"] {
                assert!(drifts[key] < tol, "N={n} {method:?} {key}: {}", drifts[key]);
            }
            let c0 = &traj.casimirs[0];
            for c in &traj.casimirs {
                assert!(c.max_abs_diff(c0) < 1e-8, "N={n} {method:?}");
            }
        }
    }
}

#[test]
fn motion_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for (n, dim) in SHAPES {
        let pt = random_point(&mut rng, Shape::new(n, dim).unwrap());
        let cf = integrate(&pt, HamiltonianChoice::Free, 1.0, 1e-3, Method::Closed).unwrap();
        let r = verify_motion_order(&cf, n).unwrap();
        assert!(r.fit_residual < 1e-10, "N={n}: {r:?}");
        assert!(r.fd_consistent, "N={n}: {r:?}");
        let rk = integrate(&pt, HamiltonianChoice::Free, 1.0, 1e-3, Method::Rk4).unwrap();
        let r = verify_motion_order(&rk, n).unwrap();
        assert!(r.fit_residual < 1e-7, "N={n}: {r:?}");
    }
}

#[test]
fn motion_order_rejects_lower_degree() {
    let shape = Shape::new(3, 3).unwrap();
    let mut pt = PhasePoint::zeros(shape, 1.0);
    pt.p[0] = vec![0.0, 0.0, 1.0];
    let traj = integrate(&pt, HamiltonianChoice::Free, 1.0, 1e-2, Method::Closed).unwrap();
    let r = verify_motion_order(&traj, 2).unwrap();
    assert!(r.fit_residual > 1e-4);
    assert!(!r.fd_consistent);
    assert!(verify_motion_order(&traj, 3).unwrap().fd_consistent);
}

#[test]
fn oscillator_half_period() {
    let shape = Shape::new(1, 3).unwrap();
    let mut pt = PhasePoint::zeros(shape, 1.0);
    pt.q[0] = vec![1.0, 0.0, 0.0];
    pt.chi = [1.2, 0.3, -0.4];
    let ham = HamiltonianChoice::NewtonHooke {
        omega: 1.0,
        sign: 1,
    };
    let traj = integrate(&pt, ham, PI, PI / 2000.0, Method::Rk4).unwrap();
    let last = traj.states.last().unwrap();
    let x = &last.q[0];
    assert!(
        (x[0] + 1.0).abs() < 1e-6 && x[1].abs() < 1e-6 && x[2].abs() < 1e-6,
        "{x:?}"
    );
    for (t, s) in traj.times.iter().zip(&traj.states).step_by(100) {
        assert!((s.q[0][0] - t.cos()).abs() < 1e-6);
    }
    let drifts = traj.conservation_drifts();
    for key in ["energy", "spin", "chi_square", "j"] {
        assert!(drifts[key] < 1e-8, "{key}: {}", drifts[key]);
    }
}

#[test]
fn inverted_oscillator_grows() {
    let shape = Shape::new(1, 3).unwrap();
    let mut pt = PhasePoint::zeros(shape, 1.0);
    pt.q[0] = vec![1.0, 0.0, 0.0];
    let ham = HamiltonianChoice::NewtonHooke {
        omega: 1.0,
        sign: -1,
    };
    let traj = integrate(&pt, ham, 1.0, 1e-3, Method::Rk4).unwrap();
    let x = traj.states.last().unwrap().q[0][0];
    assert!((x - 1f64.cosh()).abs() < 1e-10);
    assert!(traj.conservation_drifts()["energy"] < 1e-8);
}

#[test]
fn chi_class_survives_the_flow() {
    for chi in [
        [2.0, 1.0, 0.5],
        [-2.0, 0.3, 0.1],
        [0.2, 1.0, 0.5],
        [5.0, 3.0, 4.0],
        [0.0; 3],
    ] {
        let shape = Shape::new(3, 3).unwrap();
        let mut pt = PhasePoint::zeros(shape, 1.0);
        pt.chi = chi;
        let class = classify_orbit(&chi, DEFAULT_CLASSIFY_TOL).unwrap();
        let traj = integrate(&pt, HamiltonianChoice::Free, 2.0, 0.1, Method::Closed).unwrap();
        for s in &traj.states {
            let c = classify_orbit(&s.chi, DEFAULT_CLASSIFY_TOL).unwrap();
            assert_eq!(c.tag, class.tag, "{chi:?} -> {:?}", s.chi);
            assert!((c.sigma - class.sigma).abs() < 1e-9);
        }
    }
}

#[test]
fn spin_is_frozen() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for (n, dim) in SHAPES {
        let pt = random_point(&mut rng, Shape::new(n, dim).unwrap());
        let v = time_derivative(&pt, HamiltonianChoice::Free).unwrap();
        assert!(v.s.iter().all(|x| *x == 0.0));
    }
}
