//! Matrix exponential for coadjoint flows.
//!
//! Nilpotent generators (every C-translation, and any combination of `H`
//! with C's) are detected by an exact zero power and summed as a finite
//! series. Everything else goes through scaling and squaring of a truncated
//! Taylor series whose tail is bounded explicitly.

use nalgebra::DMatrix;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExpmError {
    #[error("matrix exponential error bound {bound:e} exceeds tolerance {tol:e}")]
    ConvergenceFailure { bound: f64, tol: f64 },
    #[error("matrix has non-finite entries")]
    NonFinite,
}

#[derive(Debug, Clone)]
pub struct Exponential {
    pub matrix: DMatrix<f64>,
    /// Smallest `k` with `B^k = 0`, when the series terminated.
    pub nilpotent_index: Option<usize>,
    /// Certified bound on the truncation error (absolute, 1-norm).
    pub error_bound: f64,
}

const TAYLOR_MAX: usize = 80;

fn norm1(m: &DMatrix<f64>) -> f64 {
    m.column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn is_exact_zero(m: &DMatrix<f64>) -> bool {
    m.iter().all(|x| *x == 0.0)
}

/// `exp(b)` with truncation error certified below `tol * max(1, |exp(b)|_1)`.
pub fn expm(b: &DMatrix<f64>, tol: f64) -> Result<Exponential, ExpmError> {
    assert!(b.is_square(), "expm needs a square matrix");
    if b.iter().any(|x| !x.is_finite()) {
        return Err(ExpmError::NonFinite);
    }
    let n = b.nrows();

    // Exact finite series when some power vanishes identically.
    let mut sum = DMatrix::<f64>::identity(n, n);
    let mut term = DMatrix::<f64>::identity(n, n);
    for k in 1..=n.max(1) {
        term = &term * b / k as f64;
        if is_exact_zero(&term) {
            return Ok(Exponential {
                matrix: sum,
                nilpotent_index: Some(k),
                error_bound: 0.0,
            });
        }
        sum += &term;
    }

    let norm = norm1(b);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    if squarings > 60 {
        return Err(ExpmError::ConvergenceFailure {
            bound: f64::INFINITY,
            tol,
        });
    }
    let scale = 2f64.powi(squarings as i32);
    let scaled = b / scale;
    let r = norm / scale;

    // smallest degree whose tail bound r^(K+1)/(K+1)! / (1 - r/(K+2)) keeps the
    // propagated bound below tol
    let target = (f64::EPSILON * 1e-2).min(1e-2 * tol / (scale * norm.exp()));
    if !(target > 0.0) {
        return Err(ExpmError::ConvergenceFailure {
            bound: f64::INFINITY,
            tol,
        });
    }
    let mut degree = 0;
    let mut power_over_fact = r; // r^(K+1)/(K+1)! for K = 0
    let mut tail = f64::INFINITY;
    while degree < TAYLOR_MAX {
        tail = power_over_fact / (1.0 - r / (degree as f64 + 2.0));
        if tail <= target {
            break;
        }
        degree += 1;
        power_over_fact *= r / (degree as f64 + 1.0);
    }

    let mut result = DMatrix::<f64>::identity(n, n);
    let mut term = DMatrix::<f64>::identity(n, n);
    for k in 1..=degree {
        term = &term * &scaled / k as f64;
        result += &term;
    }
    for _ in 0..squarings {
        result = &result * &result;
    }

    let m = scale;
    let bound = m * tail * (norm + m * tail).exp();
    let allowed = tol * norm1(&result).max(1.0);
    if !(bound <= allowed) {
        return Err(ExpmError::ConvergenceFailure { bound, tol });
    }
    Ok(Exponential {
        matrix: result,
        nilpotent_index: None,
        error_bound: bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nilpotent_shift_is_exact() {
        // single Jordan block: exp has t^k/k! on the superdiagonals
        let mut b = DMatrix::<f64>::zeros(4, 4);
        for i in 0..3 {
            b[(i, i + 1)] = 2.0;
        }
        let e = expm(&b, 1e-12).unwrap();
        assert_eq!(e.nilpotent_index, Some(4));
        assert_eq!(e.matrix[(0, 3)], 8.0 / 6.0);
        assert_eq!(e.matrix[(0, 2)], 2.0);
        assert_eq!(e.matrix[(1, 1)], 1.0);
    }

    #[test]
    fn rotation_generator() {
        let t = 2.5f64;
        let b = DMatrix::from_row_slice(2, 2, &[0.0, -t, t, 0.0]);
        let e = expm(&b, 1e-12).unwrap();
        assert!(e.nilpotent_index.is_none());
        assert!((e.matrix[(0, 0)] - t.cos()).abs() < 1e-13);
        assert!((e.matrix[(1, 0)] - t.sin()).abs() < 1e-13);
    }

    #[test]
    fn diagonal_matches_scalar_exp() {
        let b = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![3.0, -1.5, 0.25]));
        let e = expm(&b, 1e-12).unwrap();
        for (i, v) in [3.0f64, -1.5, 0.25].iter().enumerate() {
            assert!((e.matrix[(i, i)] - v.exp()).abs() < 1e-12 * v.exp().max(1.0));
        }
    }

    #[test]
    fn huge_norm_fails() {
        let b = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1e30, 1.0]));
        assert!(matches!(
            expm(&b, 1e-12),
            Err(ExpmError::ConvergenceFailure { .. })
        ));
        let b = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![f64::NAN, 1.0]));
        assert_eq!(expm(&b, 1e-12).unwrap_err(), ExpmError::NonFinite);
    }
}
