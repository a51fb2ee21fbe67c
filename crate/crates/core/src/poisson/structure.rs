use nalgebra::DMatrix;

use super::{Layout, Polynomial};
use crate::combinatorics::{factorial_f64 as fact, levi_civita2, sign_pow_f64};
use crate::ring::Ring;
use crate::shape::Shape;

/// Bracket `{x_j^a, x_k^b}` of raw orbit coordinates (axes 1-based).
pub fn raw_bracket(shape: Shape, j: usize, a: u8, k: usize, b: u8, m: f64) -> f64 {
    let n = shape.n;
    if j + k != n || j > n {
        return 0.0;
    }
    let norm = m * fact(j) * fact(n - j);
    if shape.is_odd() {
        if a != b {
            return 0.0;
        }
        sign_pow_f64(j as i64 - (n as i64 + 1) / 2) / norm
    } else {
        let e = f64::from(levi_civita2(a, b));
        -e * sign_pow_f64(j as i64 - n as i64 / 2) / norm
    }
}

/// Poisson tensor on the flat coordinates of a [`super::PhasePoint`]:
/// canonical pairs, `{q_{N/2}^1, q_{N/2}^2} = -1/m`, `{s_i, s_k} = eps_ikl s_l`
/// and `{chi^a, chi^b} = eps^{ab}_c chi^c` with metric `(+, -, -)`.
#[derive(Clone, Debug)]
pub struct StructureMatrix {
    layout: Layout,
    m: f64,
    /// Upper-triangular entries `(i, j, {z_i, z_j})` with `i < j`.
    entries: Vec<(usize, usize, Polynomial)>,
}

impl StructureMatrix {
    pub fn new(shape: Shape, m: f64) -> Self {
        let layout = Layout::new(shape);
        let mut entries = Vec::new();
        for k in 0..shape.pairs() {
            for a in 0..shape.dim {
                entries.push((layout.q(k, a), layout.p(k, a), Polynomial::constant(1.0)));
            }
        }
        if shape.has_half() {
            entries.push((
                layout.q_half(0),
                layout.q_half(1),
                Polynomial::constant(-1.0 / m),
            ));
        }
        if shape.spin_len() == 3 {
            let s = |i| Polynomial::var(layout.s(i));
            entries.push((layout.s(0), layout.s(1), s(2)));
            entries.push((layout.s(1), layout.s(2), s(0)));
            entries.push((layout.s(0), layout.s(2), -s(1)));
        }
        let chi = |i| Polynomial::var(layout.chi(i));
        entries.push((layout.chi(0), layout.chi(1), -chi(2)));
        entries.push((layout.chi(1), layout.chi(2), chi(0)));
        entries.push((layout.chi(0), layout.chi(2), chi(1)));
        StructureMatrix { layout, m, entries }
    }

    pub fn layout(&self) -> Layout {
        self.layout
    }

    pub fn mass(&self) -> f64 {
        self.m
    }

    /// `{z_i, z_j}` as a polynomial.
    pub fn entry(&self, i: usize, j: usize) -> Polynomial {
        for (a, b, p) in &self.entries {
            if (*a, *b) == (i, j) {
                return p.clone();
            }
            if (*a, *b) == (j, i) {
                return -p.clone();
            }
        }
        Polynomial::zero()
    }

    pub fn eval(&self, z: &[f64]) -> DMatrix<f64> {
        let n = self.layout.len();
        let mut out = DMatrix::zeros(n, n);
        for (i, j, p) in &self.entries {
            let v = p.eval(z);
            out[(*i, *j)] = v;
            out[(*j, *i)] = -v;
        }
        out
    }

    /// `sum_ij df/dz_i {z_i, z_j} dg/dz_j`.
    pub fn bracket_poly(&self, f: &Polynomial, g: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero();
        for (i, j, p) in &self.entries {
            let term = f.derivative(*i) * g.derivative(*j) - f.derivative(*j) * g.derivative(*i);
            if !term.is_zero() {
                out = out + term * p.clone();
            }
        }
        out
    }

    /// `{f, g}` evaluated at `z`.
    pub fn bracket_at(&self, f: &Polynomial, g: &Polynomial, z: &[f64]) -> f64 {
        let df = f.gradient(z);
        let dg = g.gradient(z);
        self.bracket_gradients(&df, &dg, z)
    }

    /// `{f, g}(z)` from precomputed gradients.
    pub fn bracket_gradients(&self, df: &[f64], dg: &[f64], z: &[f64]) -> f64 {
        self.entries
            .iter()
            .map(|(i, j, p)| {
                let w = df[*i] * dg[*j] - df[*j] * dg[*i];
                if w == 0.0 {
                    0.0
                } else {
                    w * p.eval(z)
                }
            })
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn raw_bracket_examples() {
        let s1 = Shape::new(1, 3).unwrap();
        assert_eq!(raw_bracket(s1, 0, 1, 1, 1, 1.0), -1.0);
        assert_eq!(raw_bracket(s1, 0, 1, 0, 2, 1.0), 0.0);
        assert_eq!(raw_bracket(s1, 0, 1, 1, 2, 1.0), 0.0);
        let s2 = Shape::new(2, 2).unwrap();
        assert_eq!(raw_bracket(s2, 0, 1, 2, 2, 1.0), 0.5);
        assert_eq!(raw_bracket(s2, 0, 1, 2, 1, 1.0), 0.0);
    }

    #[test]
    fn chi_block() {
        let shape = Shape::new(1, 3).unwrap();
        let pi = StructureMatrix::new(shape, 1.0);
        let l = pi.layout();
        assert_eq!(pi.entry(l.chi(0), l.chi(1)), -Polynomial::var(l.chi(2)));
        assert_eq!(pi.entry(l.chi(2), l.chi(0)), -Polynomial::var(l.chi(1)));
        assert_eq!(pi.entry(l.q(0, 0), l.p(0, 0)), Polynomial::constant(1.0));
        assert_eq!(pi.entry(l.p(0, 0), l.q(0, 0)), Polynomial::constant(-1.0));
        assert!(pi.entry(l.q(0, 0), l.p(0, 1)).is_zero());
    }
}
