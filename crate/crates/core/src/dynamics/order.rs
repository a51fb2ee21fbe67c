use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{DynamicsError, Trajectory};
use crate::combinatorics::binomial;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MotionOrderReport {
    pub degree: usize,
    pub samples: usize,
    /// Largest absolute deviation of `q_0` from its least-squares polynomial.
    pub fit_residual: f64,
    /// Largest `|Delta^{N+1} q_0| / dt^{N+1}`.
    pub max_finite_difference: f64,
    pub fd_threshold: f64,
    pub fd_consistent: bool,
}

/// Roundoff level of an `(N+1)`-th forward difference of data of size
/// `scale`, divided by `dt^(N+1)`: `64 * 2^(N+1) * eps * max(1, scale) / dt^(N+1)`.
///
/// `2^(N+1)` is the 1-norm of the difference stencil; the factor 64 covers
/// roundoff accumulated by the integrator.
pub fn fd_threshold(n: usize, dt: f64, scale: f64) -> f64 {
    let order = n as i32 + 1;
    64.0 * 2f64.powi(order) * f64::EPSILON * scale.max(1.0) / dt.powi(order)
}

fn chebyshev_row(s: f64, degree: usize) -> Vec<f64> {
    let mut row = vec![1.0; degree + 1];
    if degree >= 1 {
        row[1] = s;
    }
    for k in 2..=degree {
        row[k] = 2.0 * s * row[k - 1] - row[k - 2];
    }
    row
}

/// Fits each component of `q_0(t)` with a polynomial of degree `n` and
/// checks that the `(n+1)`-th forward difference vanishes to roundoff.
pub fn verify_motion_order(
    traj: &Trajectory,
    n: usize,
) -> Result<MotionOrderReport, DynamicsError> {
    let samples = traj.len();
    if samples < n + 3 {
        return Err(DynamicsError::TooFewSamples {
            needed: n + 3,
            got: samples,
        });
    }
    let dt = traj
        .uniform_step()
        .ok_or(DynamicsError::NonUniformSampling)?;
    let (t0, t1) = (traj.times[0], traj.times[samples - 1]);
    let design = DMatrix::from_fn(samples, n + 1, |i, k| {
        let s = 2.0 * (traj.times[i] - t0) / (t1 - t0) - 1.0;
        chebyshev_row(s, n)[k]
    });
    let svd = design.clone().svd(true, true);

    let dim = traj.states[0].shape.dim;
    let mut fit_residual = 0.0f64;
    let mut max_fd = 0.0f64;
    let mut scale = 0.0f64;
    let stencil: Vec<f64> = (0..=n + 1)
        .map(|k| {
            let sign = if (n + 1 - k).is_multiple_of(2) {
                1.0
            } else {
                -1.0
            };
            sign * binomial(n + 1, k)
        })
        .collect();
    for a in 0..dim {
        let q: Vec<f64> = traj.states.iter().map(|s| s.q[0][a]).collect();
        scale = q.iter().fold(scale, |acc, v| acc.max(v.abs()));
        let b = DVector::from_vec(q.clone());
        let coeffs = svd
            .solve(&b, 1e-14)
            .map_err(|e| DynamicsError::Unsupported(format!("least squares failed: {e}")))?;
        let fitted = &design * coeffs;
        fit_residual = (fitted - b)
            .iter()
            .fold(fit_residual, |acc, r| acc.max(r.abs()));
        for w in q.windows(n + 2) {
            let diff: f64 = w.iter().zip(&stencil).map(|(v, c)| v * c).sum();
            max_fd = max_fd.max(diff.abs() / dt.powi(n as i32 + 1));
        }
    }
    let threshold = fd_threshold(n, dt, scale);
    Ok(MotionOrderReport {
        degree: n,
        samples,
        fit_residual,
        max_finite_difference: max_fd,
        fd_threshold: threshold,
        fd_consistent: max_fd <= threshold,
    })
}
