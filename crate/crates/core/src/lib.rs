//! Computational engine for the centrally extended N-Galilean conformal
//! algebras: exact structure constants, coadjoint orbits and their Casimirs,
//! Kirillov-Kostant brackets in Darboux charts, the resulting higher-derivative
//! dynamics, and its finite symmetry transformations.

#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod coadjoint;
pub mod combinatorics;
pub mod dynamics;
pub mod expm;
pub mod poisson;
pub mod ring;
pub mod shape;
pub mod symmetry;

pub use shape::{Shape, ShapeError};
