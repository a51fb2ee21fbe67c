use serde::{Deserialize, Serialize};

use super::{CoadjointError, DualVector};
use crate::algebra::AlgebraSpec;
use crate::combinatorics::{factorial_f64 as fact, sign_pow_f64};
use crate::ring::{cross3, dot, Ring};
use crate::shape::Shape;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Casimirs {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl Casimirs {
    pub fn as_array(&self) -> [f64; 3] {
        [self.c1, self.c2, self.c3]
    }

    pub fn max_abs_diff(&self, other: &Casimirs) -> f64 {
        (self.c1 - other.c1)
            .abs()
            .max((self.c2 - other.c2).abs())
            .max((self.c3 - other.c3).abs())
    }
}

/// `eps^{ab} u^b w^a`.
fn eps<T: Ring>(u: &[T], w: &[T]) -> T {
    u[1].clone() * w[0].clone() - u[0].clone() * w[1].clone()
}

/// Classical Casimir functions `(C1, C2, C3)` with commuting products.
pub fn casimir_functions<T: Ring>(shape: Shape, x: &DualVector<T>) -> [T; 3] {
    let n = shape.n;
    let c = &x.c;
    let m = x.m.clone();
    let half_n = n as f64 / 2.0;
    let (c2, a, b, cc);
    if shape.is_odd() {
        let ni = n as i64;
        let s1 = |j: usize| sign_pow_f64(j as i64 - (ni + 1) / 2);
        let mut v: Vec<T> = x.j.iter().map(|j| m.clone() * j.clone()).collect();
        for j in 0..=n {
            let w = -0.5 * s1(j) / (fact(j) * fact(n - j));
            let cr = cross3(&c[j], &c[n - j]);
            for (dst, src) in v.iter_mut().zip(cr) {
                *dst = dst.clone() + src.scale(w);
            }
        }
        c2 = dot(&v, &v);
        let mut aa = T::zero();
        for j in 1..=n {
            aa = aa + dot(&c[j - 1], &c[n - j]).scale(0.5 * s1(j) / (fact(j - 1) * fact(n - j)));
        }
        let mut bb = T::zero();
        for j in 0..n {
            bb = bb + dot(&c[j + 1], &c[n - j]).scale(-0.5 * s1(j) / (fact(j) * fact(n - j - 1)));
        }
        let mut c3 = T::zero();
        for j in 0..=n {
            let w = 0.5 * s1(j) * (j as f64 - half_n) / (fact(j) * fact(n - j));
            c3 = c3 + dot(&c[j], &c[n - j]).scale(w);
        }
        a = aa;
        b = bb;
        cc = c3;
    } else {
        let ni = n as i64;
        let sg = |j: usize| sign_pow_f64((2 * j as i64 - ni) / 2);
        let mut v = m.clone() * x.j[0].clone();
        for j in 0..=n {
            v = v + dot(&c[n - j], &c[j]).scale(-0.5 * sg(j) / (fact(j) * fact(n - j)));
        }
        c2 = v;
        let mut aa = T::zero();
        for j in 1..=n {
            aa = aa + eps(&c[j - 1], &c[n - j]).scale(0.5 * sg(j) / (fact(j - 1) * fact(n - j)));
        }
        let mut bb = T::zero();
        for j in 0..n {
            bb = bb + eps(&c[j + 1], &c[n - j]).scale(-0.5 * sg(j) / (fact(j) * fact(n - j - 1)));
        }
        let mut c3 = T::zero();
        for j in 0..=n {
            let w = 0.5 * sg(j) * (j as f64 - half_n) / (fact(j) * fact(n - j));
            c3 = c3 + eps(&c[j], &c[n - j]).scale(w);
        }
        a = aa;
        b = bb;
        cc = c3;
    }
    let mh = m.clone() * x.h.clone() - a;
    let mk = m.clone() * x.k.clone() - b;
    let md = m.clone() * x.d.clone() - cc;
    let c3 = (mh * mk).scale(2.0) - (md.clone() * md).scale(2.0);
    [m, c2, c3]
}

pub fn casimir_values(alg: &AlgebraSpec, x: &DualVector<f64>) -> Result<Casimirs, CoadjointError> {
    let shape = x.check_algebra(alg)?;
    let [c1, c2, c3] = casimir_functions(shape, x);
    Ok(Casimirs { c1, c2, c3 })
}
