//! Minimal commutative-ring abstraction so that the orbit formulas can be
//! evaluated both numerically (`f64`) and symbolically (polynomials).

use std::ops::{Add, Mul, Neg, Sub};

pub trait Ring:
    Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn constant(value: f64) -> Self;

    fn zero() -> Self {
        Self::constant(0.0)
    }

    fn scale(&self, factor: f64) -> Self {
        self.clone() * Self::constant(factor)
    }
}

impl Ring for f64 {
    fn constant(value: f64) -> Self {
        value
    }

    fn scale(&self, factor: f64) -> Self {
        self * factor
    }
}

pub fn dot<T: Ring>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// `a x b` for 3-vectors.
pub fn cross3<T: Ring>(a: &[T], b: &[T]) -> [T; 3] {
    [
        a[1].clone() * b[2].clone() - a[2].clone() * b[1].clone(),
        a[2].clone() * b[0].clone() - a[0].clone() * b[2].clone(),
        a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone(),
    ]
}

/// Scalar cross product `a^1 b^2 - a^2 b^1` of 2-vectors.
pub fn cross2<T: Ring>(a: &[T], b: &[T]) -> T {
    a[0].clone() * b[1].clone() - a[1].clone() * b[0].clone()
}

/// Quarter turn `v^b -> eps^{ab} v^a`, i.e. `(v1, v2) -> (-v2, v1)`.
pub fn quarter_turn<T: Ring>(v: &[T]) -> [T; 2] {
    [-v[1].clone(), v[0].clone()]
}

pub fn add_into<T: Ring>(acc: &mut [T], v: &[T], factor: f64) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a = a.clone() + x.scale(factor);
    }
}
