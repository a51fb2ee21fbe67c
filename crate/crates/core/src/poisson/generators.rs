use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{from_darboux, p_half, PhasePoint, Polynomial, StructureMatrix};
use crate::algebra::{AlgebraSpec, GeneratorId};
use crate::coadjoint::{orbit_point, DualVector};
use crate::ring::{cross2, cross3, dot, Ring};

/// Generator functions on the orbit, read through the Darboux chart.
pub fn generators_via_orbit<T: Ring>(pt: &PhasePoint<T>) -> DualVector<T> {
    orbit_point(pt.shape, pt.m, &pt.s, &pt.chi, &from_darboux(pt))
}

/// Generator functions in canonical form: `h, d, k, j` as polynomials in
/// `(q, p)` (Ostrogradski form), `c_j^a` through the orbit map.
pub fn generators_at<T: Ring>(pt: &PhasePoint<T>) -> DualVector<T> {
    let shape = pt.shape;
    let n = shape.n;
    let m = pt.m;
    let (q, p) = (&pt.q, &pt.p);
    let mut out = generators_via_orbit(pt);
    let mut h = pt.chi[0].clone() - pt.chi[1].clone();
    let mut d = pt.chi[2].clone();
    let mut k = pt.chi[0].clone() + pt.chi[1].clone();
    let mut j = pt.s.clone();

    if shape.is_odd() {
        let top = (n - 1) / 2;
        h = h + dot(&p[top], &p[top]).scale(1.0 / (2.0 * m));
        for l in 1..=top {
            h = h + dot(&q[l], &p[l - 1]);
        }
        for l in 0..=top {
            d = d + dot(&q[l], &p[l]).scale(n as f64 / 2.0 - l as f64);
        }
        let w = (n as f64 + 1.0) / 2.0;
        k = k + dot(&q[top], &q[top]).scale(m / 2.0 * w * w);
        for l in 0..top {
            k = k - dot(&q[l], &p[l + 1]).scale(((n - l) * (l + 1)) as f64);
        }
        for l in 0..=top {
            let c = cross3(&q[l], &p[l]);
            for (dst, src) in j.iter_mut().zip(c) {
                *dst = dst.clone() + src;
            }
        }
    } else {
        let half = n / 2;
        let ph = p_half(pt);
        let qk = |l: usize| if l == half { &pt.q_half } else { &q[l] };
        for l in 0..half {
            h = h + dot(&p[l], qk(l + 1));
            d = d + dot(&p[l], &q[l]).scale(half as f64 - l as f64);
        }
        for l in 1..half {
            k = k - dot(&p[l], &q[l - 1]).scale(((n - l + 1) * l) as f64);
        }
        k = k - dot(qk(half - 1), &ph).scale((n * (half + 1)) as f64);
        let mut jj = j[0].clone();
        for l in 0..half {
            jj = jj + cross2(&q[l], &p[l]);
        }
        jj = jj + cross2(&pt.q_half, &ph);
        j = vec![jj];
    }
    out.h = h;
    out.d = d;
    out.k = k;
    out.j = j;
    out
}

/// All generator functions as polynomials in the flat coordinates.
pub fn generator_functions(shape: crate::shape::Shape, m: f64) -> DualVector<Polynomial> {
    generators_at(&PhasePoint::coordinates(shape, m))
}

/// The function of a single generator; `M` maps to the constant `m`.
pub fn generator_poly(gens: &DualVector<Polynomial>, g: &GeneratorId) -> Option<Polynomial> {
    gens.get(g).cloned()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosureReport {
    pub max_defect: f64,
    pub worst_pair: Option<(GeneratorId, GeneratorId)>,
    pub pairs_checked: usize,
}

/// Largest `|{G_X, G_Y} - G_[X,Y]|` over all generator pairs at `pt`.
pub fn momentum_map_closure(alg: &AlgebraSpec, pt: &PhasePoint<f64>) -> ClosureReport {
    let gens = generator_functions(pt.shape, pt.m);
    let pi = StructureMatrix::new(pt.shape, pt.m);
    let z = pt.to_flat();
    let ids: Vec<GeneratorId> = alg.generators().to_vec();
    let polys: Vec<Option<Polynomial>> = ids.iter().map(|g| generator_poly(&gens, g)).collect();
    let values: Vec<f64> = polys
        .iter()
        .map(|p| p.as_ref().map_or(f64::NAN, |p| p.eval(&z)))
        .collect();
    let grads: Vec<Vec<f64>> = polys
        .iter()
        .map(|p| {
            p.as_ref()
                .map_or_else(|| vec![f64::NAN; z.len()], |p| p.gradient(&z))
        })
        .collect();

    let mut report = ClosureReport {
        max_defect: 0.0,
        worst_pair: None,
        pairs_checked: 0,
    };
    for (a, ga) in ids.iter().enumerate() {
        for (b, gb) in ids.iter().enumerate() {
            let lhs = pi.bracket_gradients(&grads[a], &grads[b], &z);
            let rhs: f64 = alg.constant(ga, gb).map_or(0.0, |e| {
                e.iter()
                    .map(|(g, c)| {
                        let idx = alg.index_of(g).expect("table closes on its generators");
                        c.to_f64().unwrap_or(f64::NAN) * values[idx]
                    })
                    .sum()
            });
            let defect = (lhs - rhs).abs();
            report.pairs_checked += 1;
            if !(defect <= report.max_defect) {
                report.max_defect = if defect.is_nan() {
                    f64::INFINITY
                } else {
                    defect
                };
                report.worst_pair = Some((*ga, *gb));
            }
        }
    }
    report
}
