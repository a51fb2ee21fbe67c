//! Time-dependent integrals of motion and finite symmetry transformations.

use std::collections::BTreeMap;

use nalgebra::{Matrix3, Rotation3, Vector3};
use serde::{Deserialize, Serialize};

use crate::algebra::GeneratorId;
use crate::coadjoint::{CoadjointFlow, DualVector};
use crate::dynamics::{chi_closed_form, closed_form, DynamicsError, HamiltonianChoice, Trajectory};
use crate::poisson::{generators_at, PhasePoint, PoissonError};
use crate::shape::Shape;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SymmetryError {
    #[error("1 + c t vanishes or changes sign (t = {t}, c = {c})")]
    SingularTime { t: f64, c: f64 },
    #[error("rotation is not a proper orthogonal matrix: {0}")]
    NonOrthogonalRotation(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error(transparent)]
    Poisson(#[from] PoissonError),
}

/// Integrals of motion of the free flow evaluated at `(state, t)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConservedSet {
    pub t: f64,
    pub values: DualVector,
}

impl ConservedSet {
    /// Values keyed by generator name.
    pub fn named(&self) -> BTreeMap<String, f64> {
        let v = &self.values;
        let mut out = BTreeMap::new();
        for (g, x) in [
            (GeneratorId::M, v.m),
            (GeneratorId::H, v.h),
            (GeneratorId::D, v.d),
            (GeneratorId::K, v.k),
        ] {
            out.insert(g.to_string(), x);
        }
        if v.j.len() == 1 {
            out.insert(GeneratorId::J(None).to_string(), v.j[0]);
        } else {
            for (a, x) in v.j.iter().enumerate() {
                out.insert(GeneratorId::j(a as u8 + 1).to_string(), *x);
            }
        }
        for (l, row) in v.c.iter().enumerate() {
            for (a, x) in row.iter().enumerate() {
                out.insert(GeneratorId::c(l as u32, a as u8 + 1).to_string(), *x);
            }
        }
        out
    }
}

/// Generator values pulled back along the free flow to `t = 0`.
pub fn integrals_of_motion(pt: &PhasePoint, t: f64) -> Result<ConservedSet, SymmetryError> {
    let origin = closed_form(pt, HamiltonianChoice::Free, -t)?;
    Ok(ConservedSet {
        t,
        values: generators_at(&origin),
    })
}

/// Schrödinger integrals written out: `j`, `p`, `m x - t p`, `h`,
/// `d - t h`, `k - 2 t d + t^2 h`.
pub fn schrodinger_integrals(pt: &PhasePoint, t: f64) -> Result<ConservedSet, SymmetryError> {
    require_schrodinger(pt.shape)?;
    pt.validate()?;
    let g = generators_at(pt);
    let mut values = g.clone();
    for a in 0..3 {
        values.c[1][a] = g.c[1][a] - t * g.c[0][a];
    }
    values.d = g.d - t * g.h;
    values.k = g.k - 2.0 * t * g.d + t * t * g.h;
    Ok(ConservedSet { t, values })
}

/// Largest change of each integral of motion along a free trajectory.
pub fn integral_drifts(traj: &Trajectory) -> Result<BTreeMap<String, f64>, SymmetryError> {
    let mut out: BTreeMap<String, f64> = BTreeMap::new();
    let mut first: Option<BTreeMap<String, f64>> = None;
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let named = integrals_of_motion(s, *t)?.named();
        match &first {
            None => {
                out = named.keys().map(|k| (k.clone(), 0.0)).collect();
                first = Some(named);
            }
            Some(base) => {
                for (k, v) in &named {
                    let drift = out.get_mut(k).expect("same shape along a trajectory");
                    *drift = drift.max((v - base[k]).abs());
                }
            }
        }
    }
    Ok(out)
}

fn require_schrodinger(shape: Shape) -> Result<(), SymmetryError> {
    if shape.n != 1 || shape.dim != 3 {
        return Err(SymmetryError::Unsupported(format!(
            "finite transformations are defined for N=1 in dimension 3 (got N={}, dim={})",
            shape.n, shape.dim
        )));
    }
    Ok(())
}

/// `t' = t / (1 + c t)`.
pub fn conformal_time(t: f64, c: f64) -> Result<f64, SymmetryError> {
    let denom = 1.0 + c * t;
    if denom == 0.0 {
        return Err(SymmetryError::SingularTime { t, c });
    }
    Ok(t / denom)
}

/// `x' = x / (1 + c t)`, `p' = p (1 + c t) - m c x`, `t' = t / (1 + c t)`.
pub fn conformal_transform(
    x: &[f64; 3],
    p: &[f64; 3],
    t: f64,
    c: f64,
    m: f64,
) -> Result<([f64; 3], [f64; 3], f64), SymmetryError> {
    let t2 = conformal_time(t, c)?;
    let f = 1.0 + c * t;
    let x2 = x.map(|v| v / f);
    let p2 = std::array::from_fn(|i| p[i] * f - m * c * x[i]);
    Ok((x2, p2, t2))
}

/// Parameters of a Galilei transformation, applied as rotation, boost,
/// translation, time shift.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GalileiParams {
    pub translation: [f64; 3],
    pub boost: [f64; 3],
    pub time_shift: f64,
    /// Row-major rotation matrix.
    pub rotation: [[f64; 3]; 3],
}

impl Default for GalileiParams {
    fn default() -> Self {
        GalileiParams {
            translation: [0.0; 3],
            boost: [0.0; 3],
            time_shift: 0.0,
            rotation: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }
}

impl GalileiParams {
    /// Right-handed turn by `|axis_angle|` about `axis_angle`.
    pub fn with_rotation(mut self, axis_angle: [f64; 3]) -> Self {
        let r = Rotation3::new(Vector3::from(axis_angle));
        self.rotation = std::array::from_fn(|i| std::array::from_fn(|j| r[(i, j)]));
        self
    }

    fn matrix(&self) -> Matrix3<f64> {
        Matrix3::from_fn(|i, j| self.rotation[i][j])
    }

    fn checked_rotation(&self) -> Result<Matrix3<f64>, SymmetryError> {
        let r = self.matrix();
        let defect = (r.transpose() * r - Matrix3::identity()).abs().max();
        if !(defect <= 1e-12) {
            return Err(SymmetryError::NonOrthogonalRotation(format!(
                "|R^T R - 1| = {defect:e}"
            )));
        }
        let det = r.determinant();
        if det < 0.0 {
            return Err(SymmetryError::NonOrthogonalRotation(format!(
                "det R = {det}"
            )));
        }
        Ok(r)
    }
}

/// `x' = R x + v t + a`, `p' = R p + m v`, `t' = t + tau`.
pub fn galilei_transform(
    x: &[f64; 3],
    p: &[f64; 3],
    t: f64,
    params: &GalileiParams,
    m: f64,
) -> Result<([f64; 3], [f64; 3], f64), SymmetryError> {
    let r = params.checked_rotation()?;
    let v = Vector3::from(params.boost);
    let x2 = r * Vector3::from(*x) + v * t + Vector3::from(params.translation);
    let p2 = r * Vector3::from(*p) + m * v;
    Ok((x2.into(), p2.into(), t + params.time_shift))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum Transform {
    Conformal { c: f64 },
    Galilei(GalileiParams),
}

fn arr3(v: &[f64]) -> [f64; 3] {
    [v[0], v[1], v[2]]
}

impl Transform {
    pub fn identity() -> Self {
        Transform::Galilei(GalileiParams::default())
    }

    /// Image of the state `pt` at time `t`, with the new time.
    ///
    /// Conformal maps move `chi` so that its generator contributions follow
    /// the coadjoint action; Galilei maps rotate `s` and leave `chi` alone.
    pub fn apply(&self, pt: &PhasePoint, t: f64) -> Result<(PhasePoint, f64), SymmetryError> {
        require_schrodinger(pt.shape)?;
        pt.validate()?;
        let (x, p) = (arr3(&pt.q[0]), arr3(&pt.p[0]));
        let mut out = pt.clone();
        let t2 = match *self {
            Transform::Conformal { c } => {
                let (x2, p2, t2) = conformal_transform(&x, &p, t, c, pt.m)?;
                out.q[0] = x2.to_vec();
                out.p[0] = p2.to_vec();
                let chi0 = conformal_internal(chi_closed_form(pt.chi, -t), -c);
                out.chi = chi_closed_form(chi0, t2);
                t2
            }
            Transform::Galilei(params) => {
                let (x2, p2, t2) = galilei_transform(&x, &p, t, &params, pt.m)?;
                out.q[0] = x2.to_vec();
                out.p[0] = p2.to_vec();
                out.s = (params.matrix() * Vector3::from(arr3(&pt.s)))
                    .as_slice()
                    .to_vec();
                t2
            }
        };
        Ok((out, t2))
    }

    /// Coadjoint flows, in order of application, carrying the integrals of
    /// a trajectory to those of its image.
    pub fn coadjoint_flows(&self) -> Result<Vec<CoadjointFlow>, SymmetryError> {
        Ok(match *self {
            Transform::Conformal { c } => vec![CoadjointFlow::Conformal(-c)],
            Transform::Galilei(params) => {
                let r = params.checked_rotation()?;
                let w = Rotation3::from_matrix_unchecked(r).scaled_axis();
                vec![
                    CoadjointFlow::Rotation([-w.x, -w.y, -w.z]),
                    CoadjointFlow::Boost(params.boost),
                    CoadjointFlow::Translation(params.translation.map(|v| -v)),
                    CoadjointFlow::TimeShift(-params.time_shift),
                ]
            }
        })
    }
}

/// Action of `exp(i u K)` on the internal part of `(h, d, k)`.
fn conformal_internal(chi: [f64; 3], u: f64) -> [f64; 3] {
    let (h, d, k) = (chi[0] - chi[1], chi[2], chi[0] + chi[1]);
    let (h2, d2) = (h + 2.0 * u * d + u * u * k, d + u * k);
    [(k + h2) / 2.0, (k - h2) / 2.0, d2]
}

/// Transforms every sample of a free trajectory; when the new times are not
/// uniform, resamples on a uniform grid by free flow from the nearest image.
pub fn map_trajectory(
    traj: &Trajectory,
    transform: &Transform,
) -> Result<Trajectory, SymmetryError> {
    if traj.ham != HamiltonianChoice::Free {
        return Err(SymmetryError::Unsupported(
            "symmetries act on free trajectories".into(),
        ));
    }
    if traj.is_empty() {
        return Ok(traj.clone());
    }
    if let Transform::Conformal { c } = *transform {
        let (t0, t1) = (traj.times[0], traj.times[traj.len() - 1]);
        let (f0, f1) = (1.0 + c * t0, 1.0 + c * t1);
        if f0 * f1 <= 0.0 {
            let t = if f0 == 0.0 { t0 } else { -1.0 / c };
            return Err(SymmetryError::SingularTime { t, c });
        }
    }
    let mut times = Vec::with_capacity(traj.len());
    let mut states = Vec::with_capacity(traj.len());
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let (s2, t2) = transform.apply(s, *t)?;
        times.push(t2);
        states.push(s2);
    }
    let mapped = Trajectory::from_states(traj.ham, times, states);
    if mapped.len() < 2 || mapped.uniform_step().is_some() {
        return Ok(mapped);
    }

    let n = mapped.len();
    let (a, b) = (mapped.times[0], mapped.times[n - 1]);
    let mut grid = Vec::with_capacity(n);
    let mut resampled = Vec::with_capacity(n);
    for i in 0..n {
        let t = a + (b - a) * i as f64 / (n - 1) as f64;
        let idx = mapped.times.partition_point(|s| *s < t);
        let near = match idx {
            0 => 0,
            i if i == n => n - 1,
            i if (mapped.times[i] - t).abs() < (t - mapped.times[i - 1]).abs() => i,
            i => i - 1,
        };
        resampled.push(closed_form(
            &mapped.states[near],
            HamiltonianChoice::Free,
            t - mapped.times[near],
        )?);
        grid.push(t);
    }
    Ok(Trajectory::from_states(traj.ham, grid, resampled))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rest_point(m: f64) -> PhasePoint {
        let mut pt = PhasePoint::zeros(Shape::new(1, 3).unwrap(), m);
        pt.q[0] = vec![1.0, 0.0, 0.0];
        pt
    }

    #[test]
    fn conformal_time_values() {
        assert_eq!(conformal_time(1.0, 1.0).unwrap(), 0.5);
        assert_eq!(conformal_time(0.37, 0.0).unwrap(), 0.37);
        assert_eq!(
            conformal_time(1.0, -1.0),
            Err(SymmetryError::SingularTime { t: 1.0, c: -1.0 })
        );
    }

    #[test]
    fn conformal_rest_particle() {
        for t in [0.0, 0.5, 2.0] {
            let (x, p, t2) = conformal_transform(&[1.0, 0.0, 0.0], &[0.0; 3], t, 1.0, 1.0).unwrap();
            assert!((x[0] - (1.0 - t2)).abs() < 1e-15);
            assert_eq!(p, [-1.0, 0.0, 0.0]);
        }
        let x = [0.3, -0.2, 0.9];
        let p = [1.0, 2.0, -0.5];
        assert_eq!(
            conformal_transform(&x, &p, 0.8, 0.0, 1.3).unwrap(),
            (x, p, 0.8)
        );
    }

    #[test]
    fn galilei_examples() {
        let boost = GalileiParams {
            boost: [1.0, 0.0, 0.0],
            ..Default::default()
        };
        let (x, p, t) = galilei_transform(&[0.0; 3], &[0.0; 3], 0.7, &boost, 2.0).unwrap();
        assert_eq!((x, p, t), ([0.7, 0.0, 0.0], [2.0, 0.0, 0.0], 0.7));

        let id = GalileiParams::default();
        let x = [0.3, -0.2, 0.9];
        let p = [1.0, 2.0, -0.5];
        assert_eq!(
            galilei_transform(&x, &p, 0.4, &id, 1.0).unwrap(),
            (x, p, 0.4)
        );

        let quarter =
            GalileiParams::default().with_rotation([0.0, 0.0, std::f64::consts::FRAC_PI_2]);
        let (_, p, _) = galilei_transform(&[0.0; 3], &[1.0, 0.0, 0.0], 0.0, &quarter, 1.0).unwrap();
        assert!(p[0].abs() < 1e-15 && (p[1] - 1.0).abs() < 1e-15 && p[2] == 0.0);
    }

    #[test]
    fn rotation_must_be_proper() {
        let mut skew = GalileiParams::default();
        skew.rotation[0][1] = 0.1;
        assert!(matches!(
            galilei_transform(&[0.0; 3], &[0.0; 3], 0.0, &skew, 1.0),
            Err(SymmetryError::NonOrthogonalRotation(_))
        ));
        let mut mirror = GalileiParams::default();
        mirror.rotation[2][2] = -1.0;
        assert!(matches!(
            galilei_transform(&[0.0; 3], &[0.0; 3], 0.0, &mirror, 1.0),
            Err(SymmetryError::NonOrthogonalRotation(_))
        ));
    }

    #[test]
    fn pull_back_at_zero_is_generators() {
        let pt = rest_point(1.5);
        let set = integrals_of_motion(&pt, 0.0).unwrap();
        assert_eq!(set.values, generators_at(&pt));
        assert_eq!(set.named().len(), 4 + 3 + 6);
    }

    #[test]
    fn uniform_motion_integrals_vanish() {
        let mut pt = PhasePoint::zeros(Shape::new(1, 3).unwrap(), 1.0);
        pt.p[0] = vec![1.0, 0.0, 0.0];
        for t in [0.0, 0.4, 1.7] {
            pt.q[0] = vec![t, 0.0, 0.0];
            let set = schrodinger_integrals(&pt, t).unwrap();
            assert!(set.values.d.abs() < 1e-15);
            assert!(set.values.k.abs() < 1e-14);
        }
    }

    #[test]
    fn internal_conformal_matches_column() {
        let chi = [0.7, -0.2, 0.4];
        let u = 0.3;
        let out = conformal_internal(chi, u);
        let (h, d, k) = (chi[0] - chi[1], chi[2], chi[0] + chi[1]);
        assert!((out[0] - out[1] - (h + 2.0 * u * d + u * u * k)).abs() < 1e-15);
        assert!((out[2] - (d + u * k)).abs() < 1e-15);
        assert!((out[0] + out[1] - k).abs() < 1e-15);
    }
}
