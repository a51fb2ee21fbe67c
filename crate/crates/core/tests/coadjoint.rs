use ngca_core::algebra::{build_algebra, AlgebraSpec, GeneratorId};
use ngca_core::coadjoint::{
    casimir_values, chi_representative, classify_orbit, coad_closed_form, coad_generic_real,
    orbit_point, parametrize, CoadjointFlow, DualVector, OrbitClass, OrbitLabel, OrbitTag,
};
use ngca_core::Shape;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn uniform(rng: &mut ChaCha8Rng, r: f64) -> f64 {
    rng.random_range(-r..r)
}

fn vec3(rng: &mut ChaCha8Rng, r: f64) -> [f64; 3] {
    [uniform(rng, r), uniform(rng, r), uniform(rng, r)]
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

fn random_element(rng: &mut ChaCha8Rng, alg: &AlgebraSpec, r: f64) -> Vec<(GeneratorId, f64)> {
    alg.generators()
        .iter()
        .map(|g| (*g, uniform(rng, r)))
        .collect()
}

const SHAPES: [(usize, usize); 4] = [(1, 3), (3, 3), (2, 2), (4, 2)];

#[test]
fn schrodinger_columns_match_generic_flow() {
    let alg = build_algebra(1, 3, true, false).unwrap();
    let shape = Shape::new(1, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let x = random_dual(&mut rng, shape);
        let flows = [
            CoadjointFlow::Translation(vec3(&mut rng, 1.0)),
            CoadjointFlow::Boost(vec3(&mut rng, 1.0)),
            CoadjointFlow::TimeShift(uniform(&mut rng, 1.0)),
            CoadjointFlow::Dilation(uniform(&mut rng, 1.0)),
            CoadjointFlow::Conformal(uniform(&mut rng, 1.0)),
            CoadjointFlow::Rotation(vec3(&mut rng, 2.0)),
        ];
        for flow in flows {
            let closed = coad_closed_form(&alg, &flow, &x).unwrap();
            let generic = coad_generic_real(&alg, &flow.generator_terms(), 1.0, &x).unwrap();
            assert!(closed.max_abs_diff(&generic) < 1e-10, "{flow:?}");
            assert_eq!(closed.m, x.m);
        }
    }
}

#[test]
fn c_translations_match_generic_flow() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for (n, dim) in SHAPES.into_iter().chain([(5, 3), (6, 2)]) {
        let shape = Shape::new(n, dim).unwrap();
        let alg = build_algebra(n as u32, dim as u8, true, false).unwrap();
        for _ in 0..20 {
            let x = random_dual(&mut rng, shape);
            let flow = CoadjointFlow::CTranslation(random_params(&mut rng, shape, 1.0));
            let closed = coad_closed_form(&alg, &flow, &x).unwrap();
            let generic = coad_generic_real(&alg, &flow.generator_terms(), 1.0, &x).unwrap();
            let scale = generic
                .c
                .iter()
                .flatten()
                .fold(1.0f64, |a, v| a.max(v.abs()));
            assert!(closed.max_abs_diff(&generic) < 1e-12 * scale, "N={n}");
            assert_eq!(closed.m, x.m);
        }
    }
}

#[test]
fn casimirs_are_invariant_under_generic_flows() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for (n, dim) in SHAPES {
        let shape = Shape::new(n, dim).unwrap();
        let alg = build_algebra(n as u32, dim as u8, true, false).unwrap();
        for _ in 0..100 {
            let x = random_dual(&mut rng, shape);
            let a = random_element(&mut rng, &alg, 0.5);
            let y = coad_generic_real(&alg, &a, 1.0, &x).unwrap();
            let before = casimir_values(&alg, &x).unwrap();
            let after = casimir_values(&alg, &y).unwrap();
            let scale = before.as_array().iter().fold(1.0f64, |s, v| s.max(v.abs()));
            assert!(
                before.max_abs_diff(&after) < 1e-10 * scale,
                "N={n}: {before:?} vs {after:?}"
            );
        }
    }
}

fn random_label(rng: &mut ChaCha8Rng, dim: usize) -> (OrbitLabel, Vec<f64>, [f64; 3]) {
    let tags = [
        OrbitTag::HplusSigma,
        OrbitTag::HminusSigma,
        OrbitTag::Hplus0,
        OrbitTag::Hminus0,
        OrbitTag::HyperbolicSigma,
        OrbitTag::Origin,
    ];
    let tag = tags[rng.random_range(0..tags.len())];
    let class = OrbitClass::new(tag, rng.random_range(0.2..2.0));
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

#[test]
fn parametrized_orbits_carry_label_casimirs() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for (n, dim) in SHAPES {
        let shape = Shape::new(n, dim).unwrap();
        let alg = build_algebra(n as u32, dim as u8, true, false).unwrap();
        for _ in 0..100 {
            let (label, s, chi) = random_label(&mut rng, dim);
            let x = random_params(&mut rng, shape, 1.0);
            let point = parametrize(&label, shape, &s, &chi, &x).unwrap();
            let c = casimir_values(&alg, &point).unwrap();
            let m = label.m;
            let c2 = if dim == 3 {
                m * m * label.s2
            } else {
                m * label.s2
            };
            let c3 = 2.0 * m * m * label.chi_class.signed_sigma2();
            assert!((c.c1 - m).abs() == 0.0);
            assert!((c.c2 - c2).abs() < 1e-10, "N={n}: C2 {} vs {c2}", c.c2);
            assert!((c.c3 - c3).abs() < 1e-10, "N={n}: C3 {} vs {c3}", c.c3);
        }
    }
}

#[test]
fn orbit_is_swept_by_c_translations() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for (n, dim) in SHAPES {
        let shape = Shape::new(n, dim).unwrap();
        let alg = build_algebra(n as u32, dim as u8, true, false).unwrap();
        for _ in 0..10 {
            let (label, s, chi) = random_label(&mut rng, dim);
            let base = orbit_point(shape, label.m, &s, &chi, &vec![vec![0.0; dim]; n + 1]);
            let x = random_params(&mut rng, shape, 1.0);
            let flow = CoadjointFlow::CTranslation(x.clone());
            let moved = coad_generic_real(&alg, &flow.generator_terms(), 1.0, &base).unwrap();
            let direct = parametrize(&label, shape, &s, &chi, &x).unwrap();
            assert!(moved.max_abs_diff(&direct) < 1e-10, "N={n}");
        }
    }
}

#[test]
fn chi_class_survives_sl2_flows() {
    // H, D, K act on (h, d, k) as SO(2,1) on chi; the class must not change.
    let alg = build_algebra(1, 3, true, false).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for _ in 0..50 {
        let (label, s, chi) = random_label(&mut rng, 3);
        let s3 = [s[0], s[1], s[2]];
        let point =
            ngca_core::coadjoint::parametrize_schrodinger(&label, &s3, &chi, &[0.0; 3], &[0.0; 3])
                .unwrap();
        let a = vec![
            (GeneratorId::H, uniform(&mut rng, 0.7)),
            (GeneratorId::D, uniform(&mut rng, 0.7)),
            (GeneratorId::K, uniform(&mut rng, 0.7)),
        ];
        let y = coad_generic_real(&alg, &a, 1.0, &point).unwrap();
        let chi2 = [(y.h + y.k) / 2.0, (y.k - y.h) / 2.0, y.d];
        let class = classify_orbit(&chi2, 1e-9).unwrap();
        assert_eq!(class.tag, label.chi_class.tag);
        assert!((class.sigma - label.chi_class.sigma).abs() < 1e-9);
    }
}
