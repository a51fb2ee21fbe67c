//! Points of the dual space, coadjoint flows, orbit classification and
//! parametrization, and classical Casimir functions.

mod casimir;
mod flow;
mod orbit;

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraError, AlgebraSpec, GeneratorId};
use crate::expm::ExpmError;
use crate::ring::Ring;
use crate::shape::{Shape, ShapeError};

pub use casimir::{casimir_functions, casimir_values, Casimirs};
pub use flow::{
    coad_closed_form, coad_generic, coad_generic_real, rotation_for, CoadjointFlow, GENERIC_TOL,
};
pub use orbit::{
    chi_representative, classify_orbit, minkowski_square, orbit_point, parametrize,
    parametrize_schrodinger, OrbitClass, OrbitLabel, OrbitTag, DEFAULT_CLASSIFY_TOL,
};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CoadjointError {
    #[error("dual vector shape does not match the algebra: {0}")]
    ShapeMismatch(String),
    #[error(transparent)]
    Shape(#[from] ShapeError),
    #[error("coadjoint flows need a centrally extended algebra without Ds")]
    UnsupportedAlgebra,
    #[error("no closed form for this flow: {0}")]
    UnsupportedClosedForm(String),
    #[error(transparent)]
    ConvergenceFailure(#[from] ExpmError),
    #[error("cannot classify chi = {0:?}: on the light cone but not separated from the origin")]
    AmbiguousClass([f64; 3]),
    #[error("internal coordinates do not lie on the labelled orbit: {0}")]
    LabelMismatch(String),
    #[error("tolerance must be non-negative")]
    NegativeTolerance,
    #[error("mass must be positive, got {0}")]
    NonPositiveMass(f64),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Coefficients of a dual-space point `j J~ + c_i C~_i + h H~ + d D~ + k K~ + m M~`.
///
/// `j` has three components in dimension 3 and one in dimension 2; `c` is
/// `(N+1) x dim`, level-major. For `N = 1`, `c[0]` is the momentum-like
/// `xi` (dual to `P = C_0`) and `c[1]` is `zeta` (dual to `B = C_1`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualVector<T = f64> {
    pub m: T,
    pub h: T,
    pub d: T,
    pub k: T,
    pub j: Vec<T>,
    pub c: Vec<Vec<T>>,
}

impl<T: Ring> DualVector<T> {
    pub fn zeros(shape: Shape) -> Self {
        DualVector {
            m: T::zero(),
            h: T::zero(),
            d: T::zero(),
            k: T::zero(),
            j: vec![T::zero(); shape.spin_len()],
            c: vec![vec![T::zero(); shape.dim]; shape.levels()],
        }
    }

    /// `(N, dim)` read off the array sizes; not validated.
    pub fn raw_shape(&self) -> (usize, usize) {
        let n = self.c.len().saturating_sub(1);
        let dim = self.c.first().map_or(0, Vec::len);
        (n, dim)
    }

    pub fn shape(&self) -> Result<Shape, CoadjointError> {
        let (n, dim) = self.raw_shape();
        let shape = Shape::new(n, dim)?;
        if self.c.iter().any(|row| row.len() != dim) {
            return Err(CoadjointError::ShapeMismatch("ragged c array".into()));
        }
        if self.j.len() != shape.spin_len() {
            return Err(CoadjointError::ShapeMismatch(format!(
                "j has {} components, expected {}",
                self.j.len(),
                shape.spin_len()
            )));
        }
        Ok(shape)
    }

    /// Value of the linear function dual to generator `g`.
    pub fn get(&self, g: &GeneratorId) -> Option<&T> {
        match *g {
            GeneratorId::J(Some(a)) if self.j.len() == 3 => {
                self.j.get(usize::from(a).checked_sub(1)?)
            }
            GeneratorId::J(None) if self.j.len() == 1 => self.j.first(),
            GeneratorId::C { level, axis } => self
                .c
                .get(level as usize)?
                .get(usize::from(axis).checked_sub(1)?),
            GeneratorId::H => Some(&self.h),
            GeneratorId::D => Some(&self.d),
            GeneratorId::K => Some(&self.k),
            GeneratorId::M => Some(&self.m),
            _ => None,
        }
    }

    pub fn get_mut(&mut self, g: &GeneratorId) -> Option<&mut T> {
        match *g {
            GeneratorId::J(Some(a)) if self.j.len() == 3 => {
                self.j.get_mut(usize::from(a).checked_sub(1)?)
            }
            GeneratorId::J(None) if self.j.len() == 1 => self.j.first_mut(),
            GeneratorId::C { level, axis } => self
                .c
                .get_mut(level as usize)?
                .get_mut(usize::from(axis).checked_sub(1)?),
            GeneratorId::H => Some(&mut self.h),
            GeneratorId::D => Some(&mut self.d),
            GeneratorId::K => Some(&mut self.k),
            GeneratorId::M => Some(&mut self.m),
            _ => None,
        }
    }
}

impl DualVector<f64> {
    fn check_algebra(&self, alg: &AlgebraSpec) -> Result<Shape, CoadjointError> {
        if !alg.is_central() || alg.has_ds() {
            return Err(CoadjointError::UnsupportedAlgebra);
        }
        let shape = self.shape()?;
        if shape.n != alg.n() as usize || shape.dim != usize::from(alg.dim()) {
            return Err(CoadjointError::ShapeMismatch(format!(
                "dual vector is (N={}, dim={}), algebra is (N={}, dim={})",
                shape.n,
                shape.dim,
                alg.n(),
                alg.dim()
            )));
        }
        Ok(shape)
    }

    /// Coordinates in the order of `alg.generators()`.
    pub fn to_coords(&self, alg: &AlgebraSpec) -> Result<DVector<f64>, CoadjointError> {
        self.check_algebra(alg)?;
        let values: Option<Vec<f64>> = alg
            .generators()
            .iter()
            .map(|g| self.get(g).copied())
            .collect();
        values.map(DVector::from_vec).ok_or_else(|| {
            CoadjointError::ShapeMismatch("generator without dual coordinate".into())
        })
    }

    pub fn from_coords(alg: &AlgebraSpec, coords: &DVector<f64>) -> Result<Self, CoadjointError> {
        let shape = Shape::new(alg.n() as usize, usize::from(alg.dim()))?;
        let mut out = DualVector::zeros(shape);
        out.check_algebra(alg)?;
        if coords.len() != alg.generators().len() {
            return Err(CoadjointError::ShapeMismatch(
                "coordinate vector length".into(),
            ));
        }
        for (g, v) in alg.generators().iter().zip(coords.iter()) {
            *out.get_mut(g)
                .ok_or_else(|| CoadjointError::ShapeMismatch(format!("no slot for {g}")))? = *v;
        }
        Ok(out)
    }

    /// Largest absolute componentwise difference.
    pub fn max_abs_diff(&self, other: &DualVector<f64>) -> f64 {
        let scalars = [
            (self.m - other.m).abs(),
            (self.h - other.h).abs(),
            (self.d - other.d).abs(),
            (self.k - other.k).abs(),
        ];
        let js = self.j.iter().zip(&other.j).map(|(a, b)| (a - b).abs());
        let cs = self
            .c
            .iter()
            .zip(&other.c)
            .flat_map(|(r, s)| r.iter().zip(s).map(|(a, b)| (a - b).abs()));
        scalars.into_iter().chain(js).chain(cs).fold(0.0, f64::max)
    }
}
