//! Kirillov-Kostant brackets on orbit coordinates, Darboux charts and the
//! generator functions of the momentum map.

mod darboux;
mod generators;
mod polynomial;
mod structure;

use serde::{Deserialize, Serialize};

use crate::ring::Ring;
use crate::shape::{Shape, ShapeError};

pub use darboux::{from_darboux, p_half, to_darboux, External};
pub use generators::{
    generator_functions, generator_poly, generators_at, generators_via_orbit, momentum_map_closure,
    ClosureReport,
};
pub use polynomial::{Monomial, Polynomial};
pub use structure::{raw_bracket, StructureMatrix};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PoissonError {
    #[error("phase point shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error("mass must be positive, got {0}")]
    NonPositiveMass(f64),
}

/// Index map from named coordinates to the flat coordinate vector
/// `(q, p, q_half, s, chi)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Layout {
    pub shape: Shape,
}

impl Layout {
    pub fn new(shape: Shape) -> Self {
        Layout { shape }
    }

    fn block(&self) -> usize {
        self.shape.pairs() * self.shape.dim
    }

    fn half_len(&self) -> usize {
        if self.shape.has_half() {
            2
        } else {
            0
        }
    }

    pub fn q(&self, k: usize, a: usize) -> usize {
        k * self.shape.dim + a
    }

    pub fn p(&self, k: usize, a: usize) -> usize {
        self.block() + k * self.shape.dim + a
    }

    pub fn q_half(&self, a: usize) -> usize {
        2 * self.block() + a
    }

    pub fn s(&self, i: usize) -> usize {
        2 * self.block() + self.half_len() + i
    }

    pub fn chi(&self, mu: usize) -> usize {
        2 * self.block() + self.half_len() + self.shape.spin_len() + mu
    }

    pub fn len(&self) -> usize {
        2 * self.block() + self.half_len() + self.shape.spin_len() + 3
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Human-readable coordinate names in layout order.
    pub fn names(&self) -> Vec<String> {
        let dim = self.shape.dim;
        let mut out = Vec::with_capacity(self.len());
        for prefix in ["q", "p"] {
            for k in 0..self.shape.pairs() {
                for a in 1..=dim {
                    out.push(format!("{prefix}{k}_{a}"));
                }
            }
        }
        if self.shape.has_half() {
            for a in 1..=2 {
                out.push(format!("q{}_{a}", self.shape.n / 2));
            }
        }
        if self.shape.spin_len() == 1 {
            out.push("s".into());
        } else {
            for a in 1..=3 {
                out.push(format!("s_{a}"));
            }
        }
        for mu in 0..3 {
            out.push(format!("chi{mu}"));
        }
        out
    }
}

/// Point of a coadjoint orbit in Darboux coordinates.
///
/// `q[k]`, `p[k]` are the canonical pairs (`k < (N+1)/2` for odd `N`,
/// `k < N/2` for even `N`); for even `N` the self-conjugate `q_{N/2}` is
/// stored in `q_half`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint<T = f64> {
    pub shape: Shape,
    pub m: f64,
    pub q: Vec<Vec<T>>,
    pub p: Vec<Vec<T>>,
    #[serde(default)]
    pub q_half: Vec<T>,
    pub s: Vec<T>,
    pub chi: [T; 3],
}

impl<T: Ring> PhasePoint<T> {
    pub fn zeros(shape: Shape, m: f64) -> Self {
        let zero_block = vec![vec![T::zero(); shape.dim]; shape.pairs()];
        PhasePoint {
            shape,
            m,
            q: zero_block.clone(),
            p: zero_block,
            q_half: vec![T::zero(); if shape.has_half() { 2 } else { 0 }],
            s: vec![T::zero(); shape.spin_len()],
            chi: [T::zero(), T::zero(), T::zero()],
        }
    }

    pub fn layout(&self) -> Layout {
        Layout::new(self.shape)
    }

    pub fn validate(&self) -> Result<(), PoissonError> {
        let shape = Shape::new(self.shape.n, self.shape.dim)?;
        if !(self.m > 0.0) {
            return Err(PoissonError::NonPositiveMass(self.m));
        }
        let block_ok =
            |b: &Vec<Vec<T>>| b.len() == shape.pairs() && b.iter().all(|r| r.len() == shape.dim);
        if !block_ok(&self.q) || !block_ok(&self.p) {
            return Err(PoissonError::ShapeMismatch("canonical pairs".into()));
        }
        if self.q_half.len() != if shape.has_half() { 2 } else { 0 } {
            return Err(PoissonError::ShapeMismatch("self-conjugate pair".into()));
        }
        if self.s.len() != shape.spin_len() {
            return Err(PoissonError::ShapeMismatch("spin".into()));
        }
        Ok(())
    }

    pub fn to_flat(&self) -> Vec<T> {
        let mut out = Vec::with_capacity(self.layout().len());
        out.extend(self.q.iter().flatten().cloned());
        out.extend(self.p.iter().flatten().cloned());
        out.extend(self.q_half.iter().cloned());
        out.extend(self.s.iter().cloned());
        out.extend(self.chi.iter().cloned());
        out
    }

    pub fn from_flat(shape: Shape, m: f64, z: &[T]) -> Result<Self, PoissonError> {
        let layout = Layout::new(shape);
        if z.len() != layout.len() {
            return Err(PoissonError::ShapeMismatch(format!(
                "expected {} coordinates, got {}",
                layout.len(),
                z.len()
            )));
        }
        let mut pt = PhasePoint::zeros(shape, m);
        for k in 0..shape.pairs() {
            for a in 0..shape.dim {
                pt.q[k][a] = z[layout.q(k, a)].clone();
                pt.p[k][a] = z[layout.p(k, a)].clone();
            }
        }
        for a in 0..pt.q_half.len() {
            pt.q_half[a] = z[layout.q_half(a)].clone();
        }
        for i in 0..shape.spin_len() {
            pt.s[i] = z[layout.s(i)].clone();
        }
        for mu in 0..3 {
            pt.chi[mu] = z[layout.chi(mu)].clone();
        }
        Ok(pt)
    }
}

impl PhasePoint<Polynomial> {
    /// The coordinate functions themselves.
    pub fn coordinates(shape: Shape, m: f64) -> Self {
        let z: Vec<Polynomial> = (0..Layout::new(shape).len()).map(Polynomial::var).collect();
        PhasePoint::from_flat(shape, m, &z).expect("layout length")
    }
}

impl PhasePoint<f64> {
    /// `|s|^2` in dimension 3, `s` itself in dimension 2.
    pub fn spin_invariant(&self) -> f64 {
        if self.s.len() == 1 {
            self.s[0]
        } else {
            self.s.iter().map(|v| v * v).sum()
        }
    }

    pub fn chi_square(&self) -> f64 {
        crate::coadjoint::minkowski_square(&self.chi)
    }

    pub fn max_abs_diff(&self, other: &PhasePoint<f64>) -> f64 {
        self.to_flat()
            .iter()
            .zip(other.to_flat())
            .fold(0.0, |a, (x, y)| a.max((x - y).abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.to_flat().iter().all(|v| v.is_finite())
    }
}
