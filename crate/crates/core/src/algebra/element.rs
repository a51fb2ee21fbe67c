use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::GeneratorId;

/// Finite linear combination of generators with exact rational coefficients.
///
/// Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AlgebraElement {
    terms: BTreeMap<GeneratorId, BigRational>,
}

impl AlgebraElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn generator(g: GeneratorId) -> Self {
        Self::term(g, BigRational::from_integer(1.into()))
    }

    pub fn term(g: GeneratorId, coeff: BigRational) -> Self {
        let mut e = Self::zero();
        e.add_term(g, coeff);
        e
    }

    pub fn from_terms<I: IntoIterator<Item = (GeneratorId, BigRational)>>(terms: I) -> Self {
        let mut e = Self::zero();
        for (g, c) in terms {
            e.add_term(g, c);
        }
        e
    }

    pub fn add_term(&mut self, g: GeneratorId, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(g).or_insert_with(BigRational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&g);
        }
    }

    pub fn add_scaled(&mut self, other: &AlgebraElement, factor: &BigRational) {
        for (g, c) in &other.terms {
            self.add_term(*g, c * factor);
        }
    }

    pub fn scaled(&self, factor: &BigRational) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        out.add_scaled(self, factor);
        out
    }

    pub fn coefficient(&self, g: &GeneratorId) -> BigRational {
        self.terms.get(g).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GeneratorId, &BigRational)> {
        self.terms.iter()
    }

    /// Largest absolute coefficient (zero for the zero element).
    pub fn max_abs(&self) -> BigRational {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }
}

impl std::ops::Add for AlgebraElement {
    type Output = AlgebraElement;

    fn add(mut self, rhs: AlgebraElement) -> AlgebraElement {
        for (g, c) in rhs.terms {
            self.add_term(g, c);
        }
        self
    }
}

impl std::ops::Neg for AlgebraElement {
    type Output = AlgebraElement;

    fn neg(self) -> AlgebraElement {
        AlgebraElement {
            terms: self.terms.into_iter().map(|(g, c)| (g, -c)).collect(),
        }
    }
}

impl FromIterator<(GeneratorId, BigRational)> for AlgebraElement {
    fn from_iter<I: IntoIterator<Item = (GeneratorId, BigRational)>>(iter: I) -> Self {
        Self::from_terms(iter)
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (g, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})*{g}")?;
        }
        Ok(())
    }
}
