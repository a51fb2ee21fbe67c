use serde::{Deserialize, Serialize};

use super::{PhasePoint, PoissonError};
use crate::combinatorics::{factorial_f64 as fact, sign_pow_f64};
use crate::ring::{quarter_turn, Ring};
use crate::shape::Shape;

/// External (Darboux) part of a phase point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct External<T = f64> {
    pub q: Vec<Vec<T>>,
    pub p: Vec<Vec<T>>,
    pub q_half: Vec<T>,
}

fn odd_q_factor(n: usize, k: usize) -> f64 {
    sign_pow_f64(k as i64 - (n as i64 + 1) / 2) / fact(k)
}

fn even_q_factor(n: usize, j: usize) -> f64 {
    sign_pow_f64((n as i64 - 2 * j as i64) / 2) / fact(j)
}

/// Raw orbit coordinates `x_j^a` (`(N+1) x dim`) of a phase point.
///
/// Odd `N`: `x_k = (-1)^(k-(N+1)/2) q_k / k!`, `x_{N-k} = p_k / (m (N-k)!)`.
/// Even `N` (dimension 2): `x_j = (-1)^((N-2j)/2) eps q_j / j!` for
/// `j <= N/2`, where `(eps q)^b = eps^{ab} q^a = (-q^2, q^1)`, and
/// `x_{N-j} = p_j / (m (N-j)!)` for `j < N/2`.
pub fn from_darboux<T: Ring>(pt: &PhasePoint<T>) -> Vec<Vec<T>> {
    let shape = pt.shape;
    let n = shape.n;
    let m = pt.m;
    let mut x = vec![vec![T::zero(); shape.dim]; shape.levels()];
    for k in 0..shape.pairs() {
        if shape.is_odd() {
            let f = odd_q_factor(n, k);
            x[k] = pt.q[k].iter().map(|v| v.scale(f)).collect();
        } else {
            let f = even_q_factor(n, k);
            x[k] = quarter_turn(&pt.q[k]).iter().map(|v| v.scale(f)).collect();
        }
        let g = 1.0 / (m * fact(n - k));
        x[n - k] = pt.p[k].iter().map(|v| v.scale(g)).collect();
    }
    if shape.has_half() {
        let f = even_q_factor(n, n / 2);
        x[n / 2] = quarter_turn(&pt.q_half)
            .iter()
            .map(|v| v.scale(f))
            .collect();
    }
    x
}

/// Inverse of [`from_darboux`].
pub fn to_darboux(shape: Shape, m: f64, x: &[Vec<f64>]) -> Result<External, PoissonError> {
    if !(m > 0.0) {
        return Err(PoissonError::NonPositiveMass(m));
    }
    if x.len() != shape.levels() || x.iter().any(|r| r.len() != shape.dim) {
        return Err(PoissonError::ShapeMismatch(format!(
            "expected {} x {} raw coordinates",
            shape.levels(),
            shape.dim
        )));
    }
    let n = shape.n;
    // inverse quarter turn: (v1, v2) -> (v2, -v1)
    let unturn = |v: &[f64], f: f64| vec![v[1] / f, -v[0] / f];
    let mut ext = External {
        q: Vec::with_capacity(shape.pairs()),
        p: Vec::with_capacity(shape.pairs()),
        q_half: Vec::new(),
    };
    for k in 0..shape.pairs() {
        if shape.is_odd() {
            let f = odd_q_factor(n, k);
            ext.q.push(x[k].iter().map(|v| v / f).collect());
        } else {
            ext.q.push(unturn(&x[k], even_q_factor(n, k)));
        }
        let g = m * fact(n - k);
        ext.p.push(x[n - k].iter().map(|v| v * g).collect());
    }
    if shape.has_half() {
        ext.q_half = unturn(&x[n / 2], even_q_factor(n, n / 2));
    }
    Ok(ext)
}

impl<T: Ring> PhasePoint<T> {
    pub fn with_external(shape: Shape, m: f64, ext: External<T>, s: Vec<T>, chi: [T; 3]) -> Self {
        PhasePoint {
            shape,
            m,
            q: ext.q,
            p: ext.p,
            q_half: ext.q_half,
            s,
            chi,
        }
    }

    pub fn external(&self) -> External<T> {
        External {
            q: self.q.clone(),
            p: self.p.clone(),
            q_half: self.q_half.clone(),
        }
    }
}

/// Auxiliary momentum `p_{N/2}^a = (m/2) eps^{ba} q_{N/2}^b` of the
/// self-conjugate pair; empty for odd `N`.
pub fn p_half<T: Ring>(pt: &PhasePoint<T>) -> Vec<T> {
    if pt.q_half.is_empty() {
        return Vec::new();
    }
    quarter_turn(&pt.q_half)
        .iter()
        .map(|v| v.scale(pt.m / 2.0))
        .collect()
}
