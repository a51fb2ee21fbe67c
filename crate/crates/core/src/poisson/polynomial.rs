use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::ring::Ring;

/// Product of variables with exponents, sorted by variable index.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(usize, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(i: usize) -> Self {
        Monomial(vec![(i, 1)])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn factors(&self) -> &[(usize, u32)] {
        &self.0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, b) = (self.0[i], other.0[j]);
            match a.0.cmp(&b.0) {
                std::cmp::Ordering::Less => {
                    out.push(a);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push((a.0, a.1 + b.1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monomial(out)
    }

    /// `d/dz_i` as `(exponent, reduced monomial)`, or `None` if `z_i` is absent.
    fn derivative(&self, var: usize) -> Option<(u32, Monomial)> {
        let pos = self.0.iter().position(|(v, _)| *v == var)?;
        let e = self.0[pos].1;
        let mut rest = self.0.clone();
        if e == 1 {
            rest.remove(pos);
        } else {
            rest[pos].1 = e - 1;
        }
        Some((e, Monomial(rest)))
    }

    fn eval(&self, z: &[f64]) -> f64 {
        self.0.iter().map(|(v, e)| z[*v].powi(*e as i32)).product()
    }
}

/// Sparse real polynomial in the coordinate functions `z_0, z_1, ...`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, f64>,
}

impl Polynomial {
    pub fn var(i: usize) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(i), 1.0);
        Polynomial { terms }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Monomial, f64)>) -> Self {
        let mut p = Polynomial::default();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: f64) {
        if c == 0.0 {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0.0 {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &f64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Variables that occur in some term.
    pub fn variables(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(i, _)| *i))
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn derivative(&self, var: usize) -> Polynomial {
        let mut out = Polynomial::default();
        for (m, c) in &self.terms {
            if let Some((e, rest)) = m.derivative(var) {
                out.add_term(rest, c * f64::from(e));
            }
        }
        out
    }

    pub fn eval(&self, z: &[f64]) -> f64 {
        self.terms.iter().map(|(m, c)| c * m.eval(z)).sum()
    }

    /// Gradient at `z`, one entry per coordinate.
    pub fn gradient(&self, z: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; z.len()];
        for (m, c) in &self.terms {
            for (k, (var, e)) in m.0.iter().enumerate() {
                let mut value = c * f64::from(*e) * z[*var].powi(*e as i32 - 1);
                for (l, (other, f)) in m.0.iter().enumerate() {
                    if l != k {
                        value *= z[*other].powi(*f as i32);
                    }
                }
                g[*var] += value;
            }
        }
        g
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms.values().fold(0.0, |a, c| a.max(c.abs()))
    }
}

impl Ring for Polynomial {
    fn constant(value: f64) -> Self {
        let mut p = Polynomial::default();
        p.add_term(Monomial::one(), value);
        p
    }

    fn zero() -> Self {
        Polynomial::default()
    }

    fn scale(&self, factor: f64) -> Self {
        if factor == 0.0 {
            return Polynomial::default();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * factor))
                .collect(),
        }
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(mut self, rhs: Polynomial) -> Polynomial {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        self + (-rhs)
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        let mut out = Polynomial::default();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a.mul(b), x * y);
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            for (v, e) in &m.0 {
                if *e == 1 {
                    write!(f, "*z{v}")?;
                } else {
                    write!(f, "*z{v}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(i: usize) -> Polynomial {
        Polynomial::var(i)
    }

    #[test]
    fn arithmetic_and_cancellation() {
        let p = z(0) * z(1) + z(1) * z(0);
        assert_eq!(p, (z(0) * z(1)).scale(2.0));
        assert!((z(0) - z(0)).is_zero());
        assert!((z(2) + Polynomial::constant(1.0) - Polynomial::constant(1.0) - z(2)).is_zero());
    }

    #[test]
    fn derivative_and_eval() {
        // 3 z0^2 z1 - z2
        let p = (z(0) * z(0) * z(1)).scale(3.0) - z(2);
        let pt = [2.0, -1.0, 5.0];
        assert_eq!(p.eval(&pt), -17.0);
        assert_eq!(p.derivative(0).eval(&pt), -12.0);
        assert_eq!(p.derivative(1).eval(&pt), 12.0);
        assert_eq!(p.derivative(2), Polynomial::constant(-1.0));
        assert_eq!(p.gradient(&pt), vec![-12.0, 12.0, -1.0]);
        assert_eq!(p.degree(), 3);
        assert_eq!(p.variables(), vec![0, 1, 2]);
    }
}
