use serde::{Deserialize, Serialize};

use crate::algebra::admits_central_extension;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("no coadjoint orbit model for N={n} in dimension {dim} (need N odd with dim 3, or N even with dim 2)")]
pub struct ShapeError {
    pub n: usize,
    pub dim: usize,
}

/// `(N, dim)` of a centrally extended algebra that carries orbit coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Shape {
    pub n: usize,
    pub dim: usize,
}

impl Shape {
    pub fn new(n: usize, dim: usize) -> Result<Self, ShapeError> {
        let ok =
            dim <= 3 && u32::try_from(n).is_ok_and(|n32| admits_central_extension(n32, dim as u8));
        if ok {
            Ok(Shape { n, dim })
        } else {
            Err(ShapeError { n, dim })
        }
    }

    pub fn is_odd(&self) -> bool {
        self.n % 2 == 1
    }

    /// Number of canonical `(q_k, p_k)` pairs.
    pub fn pairs(&self) -> usize {
        if self.is_odd() {
            self.n.div_ceil(2)
        } else {
            self.n / 2
        }
    }

    /// Whether the self-conjugate coordinate `q_{N/2}` is present (N even).
    pub fn has_half(&self) -> bool {
        !self.is_odd()
    }

    /// Length of the internal spin: a 3-vector, or a scalar in the plane.
    pub fn spin_len(&self) -> usize {
        if self.dim == 3 {
            3
        } else {
            1
        }
    }

    pub fn levels(&self) -> usize {
        self.n + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn admissible_shapes() {
        assert!(Shape::new(1, 3).is_ok());
        assert!(Shape::new(4, 2).is_ok());
        assert!(Shape::new(2, 3).is_err());
        assert!(Shape::new(3, 2).is_err());
        assert!(Shape::new(0, 2).is_err());
        assert_eq!(Shape::new(5, 3).unwrap().pairs(), 3);
        assert_eq!(Shape::new(4, 2).unwrap().pairs(), 2);
    }
}
