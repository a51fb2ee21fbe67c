//! Exact structure constants of the N-Galilean conformal algebras.
//!
//! Brackets are stored through their real coefficients: an entry
//! `(X, Y) -> Z` with coefficient `c` means `[X, Y] = i c Z`. The same table
//! is reused verbatim as the Kirillov-Kostant bracket `{x, y} = c z` on the
//! dual space.
//!
//! Supported families:
//! - any `N >= 1` in dimension 2 or 3 without central extension, optionally
//!   with the space dilatation `Ds`;
//! - `N` odd in dimension 3 with the `delta^{ab}` central extension;
//! - `N` even in dimension 2 with the `epsilon^{ab}` central extension.

mod element;
mod generator;
mod reference;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{factorial, levi_civita2, levi_civita3, sign_pow};

pub use element::AlgebraElement;
pub use generator::{GeneratorId, ParseGeneratorError};
pub use reference::{schrodinger_reference, specialization_mismatches};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("spatial dimension must be 2 or 3, got {0}")]
    BadDimension(u8),
    #[error("order N must be positive")]
    InvalidOrder,
    #[error("no central extension for N={n} in dimension {dim}: it exists only for N odd (dim 3) or N even (dim 2)")]
    UnsupportedExtension { n: u32, dim: u8 },
    #[error("the space dilatation Ds cannot be combined with the central extension")]
    DsWithCentral,
    #[error("generator {0} does not belong to this algebra")]
    UnknownGenerator(GeneratorId),
    #[error("no stored bracket [{0}, {1}]")]
    UnknownConstant(GeneratorId, GeneratorId),
    #[error("structure constant does not fit in a 64-bit integer")]
    Overflow,
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn half(v: i64) -> BigRational {
    BigRational::new(BigInt::from(v), BigInt::from(2))
}

/// Immutable structure-constant table of one member of the family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSpec {
    n: u32,
    dim: u8,
    central: bool,
    with_ds: bool,
    generators: Vec<GeneratorId>,
    constants: BTreeMap<(GeneratorId, GeneratorId), AlgebraElement>,
}

/// Whether the central extension exists for `(n, dim)`.
pub fn admits_central_extension(n: u32, dim: u8) -> bool {
    (n % 2 == 1 && dim == 3) || (n.is_multiple_of(2) && n > 0 && dim == 2)
}

pub fn build_algebra(
    n: u32,
    dim: u8,
    central: bool,
    with_ds: bool,
) -> Result<AlgebraSpec, AlgebraError> {
    if dim != 2 && dim != 3 {
        return Err(AlgebraError::BadDimension(dim));
    }
    if n == 0 {
        return Err(AlgebraError::InvalidOrder);
    }
    if central && with_ds {
        return Err(AlgebraError::DsWithCentral);
    }
    if central && !admits_central_extension(n, dim) {
        return Err(AlgebraError::UnsupportedExtension { n, dim });
    }

    let mut generators = Vec::new();
    if dim == 3 {
        generators.extend((1..=3).map(GeneratorId::j));
    } else {
        generators.push(GeneratorId::J(None));
    }
    for level in 0..=n {
        for axis in 1..=dim {
            generators.push(GeneratorId::c(level, axis));
        }
    }
    generators.extend([GeneratorId::H, GeneratorId::D, GeneratorId::K]);
    if with_ds {
        generators.push(GeneratorId::Ds);
    }
    if central {
        generators.push(GeneratorId::M);
    }

    let mut alg = AlgebraSpec {
        n,
        dim,
        central,
        with_ds,
        generators,
        constants: BTreeMap::new(),
    };

    // rotations
    if dim == 3 {
        for i in 1..=3u8 {
            for k in 1..=3u8 {
                for l in 1..=3u8 {
                    let e = levi_civita3(i, k, l);
                    if e != 0 {
                        alg.insert_one(
                            GeneratorId::j(i),
                            GeneratorId::j(k),
                            GeneratorId::j(l),
                            int(e.into()),
                        );
                    }
                }
            }
        }
    }

    // sl(2,R): [D,H] = iH, [D,K] = -iK, [K,H] = 2iD
    alg.insert_pair(GeneratorId::D, GeneratorId::H, GeneratorId::H, int(1));
    alg.insert_pair(GeneratorId::D, GeneratorId::K, GeneratorId::K, int(-1));
    alg.insert_pair(GeneratorId::K, GeneratorId::H, GeneratorId::D, int(2));

    let nn = i64::from(n);
    for level in 0..=n {
        let j = i64::from(level);
        for a in 1..=dim {
            let c = GeneratorId::c(level, a);
            // rotation of the vector index
            if dim == 3 {
                for r in 1..=3u8 {
                    for d in 1..=3u8 {
                        let e = levi_civita3(r, a, d);
                        if e != 0 {
                            alg.insert_pair(
                                GeneratorId::j(r),
                                c,
                                GeneratorId::c(level, d),
                                int(e.into()),
                            );
                        }
                    }
                }
            } else {
                for b in 1..=2u8 {
                    let e = levi_civita2(a, b);
                    if e != 0 {
                        alg.insert_pair(
                            GeneratorId::J(None),
                            c,
                            GeneratorId::c(level, b),
                            int(e.into()),
                        );
                    }
                }
            }
            // spin-N/2 representation of sl(2,R)
            if level > 0 {
                alg.insert_pair(GeneratorId::H, c, GeneratorId::c(level - 1, a), int(-j));
            }
            if nn != 2 * j {
                alg.insert_pair(GeneratorId::D, c, c, half(nn - 2 * j));
            }
            if level < n {
                alg.insert_pair(GeneratorId::K, c, GeneratorId::c(level + 1, a), int(nn - j));
            }
            if with_ds {
                alg.insert_pair(GeneratorId::Ds, c, c, int(1));
            }
        }
    }

    if central {
        // Written one orientation at a time straight from the closed formula,
        // so antisymmetry of the table is a check on the formula itself.
        for j in 0..=n {
            let k = n - j;
            let weight = BigRational::from_integer(factorial(j) * factorial(k));
            let (ji, ki) = (i64::from(j), i64::from(k));
            for a in 1..=dim {
                for b in 1..=dim {
                    let coeff = if dim == 3 {
                        if a != b {
                            continue;
                        }
                        // (-1)^((k-j+1)/2) k! j!
                        int(sign_pow((ki - ji + 1) / 2).into()) * &weight
                    } else {
                        let e = levi_civita2(a, b);
                        if e == 0 {
                            continue;
                        }
                        // -eps^{ab} (-1)^((j-k)/2) k! j!
                        int((-e * sign_pow((ji - ki) / 2)).into()) * &weight
                    };
                    alg.insert_one(
                        GeneratorId::c(j, a),
                        GeneratorId::c(k, b),
                        GeneratorId::M,
                        coeff,
                    );
                }
            }
        }
    }

    Ok(alg)
}

impl AlgebraSpec {
    fn insert_one(&mut self, x: GeneratorId, y: GeneratorId, z: GeneratorId, coeff: BigRational) {
        self.constants.entry((x, y)).or_default().add_term(z, coeff);
        if self
            .constants
            .get(&(x, y))
            .is_some_and(AlgebraElement::is_zero)
        {
            self.constants.remove(&(x, y));
        }
    }

    fn insert_pair(&mut self, x: GeneratorId, y: GeneratorId, z: GeneratorId, coeff: BigRational) {
        self.insert_one(y, x, z, -coeff.clone());
        self.insert_one(x, y, z, coeff);
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn dim(&self) -> u8 {
        self.dim
    }

    pub fn is_central(&self) -> bool {
        self.central
    }

    pub fn has_ds(&self) -> bool {
        self.with_ds
    }

    /// Basis in canonical order: J, C (level-major), H, D, K, [Ds], [M].
    pub fn generators(&self) -> &[GeneratorId] {
        &self.generators
    }

    pub fn contains(&self, g: &GeneratorId) -> bool {
        self.generators.contains(g)
    }

    pub fn index_of(&self, g: &GeneratorId) -> Option<usize> {
        self.generators.iter().position(|x| x == g)
    }

    /// Stored real coefficient list of `[x, y]`; zero brackets are absent.
    pub fn constant(&self, x: &GeneratorId, y: &GeneratorId) -> Option<&AlgebraElement> {
        self.constants.get(&(*x, *y))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(GeneratorId, GeneratorId), &AlgebraElement)> {
        self.constants.iter()
    }

    /// Copy of the table with the single stored entry `[x, y]` negated and
    /// its partner `[y, x]` left alone. Used by mutation tests.
    pub fn with_flipped_constant(
        &self,
        x: GeneratorId,
        y: GeneratorId,
    ) -> Result<AlgebraSpec, AlgebraError> {
        let mut out = self.clone();
        let entry = out
            .constants
            .get_mut(&(x, y))
            .ok_or(AlgebraError::UnknownConstant(x, y))?;
        *entry = -std::mem::take(entry);
        Ok(out)
    }

    /// Bracket of basis elements without membership checks.
    fn bracket_basis(&self, x: &GeneratorId, y: &GeneratorId) -> Option<&AlgebraElement> {
        self.constants.get(&(*x, *y))
    }

    fn check_members(&self, e: &AlgebraElement) -> Result<(), AlgebraError> {
        match e.iter().find(|(g, _)| !self.contains(g)) {
            Some((g, _)) => Err(AlgebraError::UnknownGenerator(*g)),
            None => Ok(()),
        }
    }

    fn bracket_unchecked(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (gx, cx) in x.iter() {
            for (gy, cy) in y.iter() {
                if let Some(z) = self.bracket_basis(gx, gy) {
                    out.add_scaled(z, &(cx * cy));
                }
            }
        }
        out
    }

    pub fn dump(&self) -> Result<AlgebraDump, AlgebraError> {
        let mut entries = Vec::with_capacity(self.constants.len());
        for ((lhs, rhs), value) in &self.constants {
            let mut results = Vec::with_capacity(value.len());
            for (g, c) in value.iter() {
                results.push(DumpTerm {
                    gen: *g,
                    num: c.numer().to_i64().ok_or(AlgebraError::Overflow)?,
                    den: c.denom().to_i64().ok_or(AlgebraError::Overflow)?,
                });
            }
            entries.push(DumpEntry {
                lhs: *lhs,
                rhs: *rhs,
                results,
            });
        }
        Ok(AlgebraDump {
            schema_version: DUMP_SCHEMA_VERSION,
            n: self.n,
            dim: self.dim,
            central: self.central,
            with_ds: self.with_ds,
            entries,
        })
    }
}

/// Bilinear extension of the stored table: real coefficient of `[x, y]`.
pub fn bracket(
    alg: &AlgebraSpec,
    x: &AlgebraElement,
    y: &AlgebraElement,
) -> Result<AlgebraElement, AlgebraError> {
    alg.check_members(x)?;
    alg.check_members(y)?;
    Ok(alg.bracket_unchecked(x, y))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiReport {
    /// Max coefficient of `[X,[Y,Z]] + [Y,[Z,X]] + [Z,[X,Y]]` over basis triples.
    pub max_defect: BigRational,
    pub worst_triple: Option<[GeneratorId; 3]>,
    /// Max coefficient of `[X,Y] + [Y,X]` over basis pairs.
    pub antisymmetry_defect: BigRational,
    pub worst_pair: Option<[GeneratorId; 2]>,
}

impl JacobiReport {
    pub fn is_exact(&self) -> bool {
        self.max_defect.is_zero() && self.antisymmetry_defect.is_zero()
    }

    pub fn total_defect(&self) -> BigRational {
        self.max_defect
            .clone()
            .max(self.antisymmetry_defect.clone())
    }
}

/// Exact Jacobi and antisymmetry defects of the table.
///
/// Jacobi is evaluated on strictly increasing basis triples; triples with a
/// repeated element are implied by antisymmetry, which is checked separately.
pub fn jacobi_report(alg: &AlgebraSpec) -> JacobiReport {
    let gens = alg.generators();
    let basis: Vec<AlgebraElement> = gens.iter().map(|g| AlgebraElement::generator(*g)).collect();

    let mut antisymmetry_defect = BigRational::zero();
    let mut worst_pair = None;
    for (i, x) in gens.iter().enumerate() {
        for y in &gens[i..] {
            let mut sum = AlgebraElement::zero();
            if let Some(e) = alg.bracket_basis(x, y) {
                sum = sum + e.clone();
            }
            if let Some(e) = alg.bracket_basis(y, x) {
                sum = sum + e.clone();
            }
            let d = sum.max_abs();
            if d > antisymmetry_defect {
                antisymmetry_defect = d;
                worst_pair = Some([*x, *y]);
            }
        }
    }

    // [Y, Z] for every ordered pair, reused across triples.
    let n = gens.len();
    let mut pair = vec![vec![AlgebraElement::zero(); n]; n];
    for (i, x) in gens.iter().enumerate() {
        for (j, y) in gens.iter().enumerate() {
            if let Some(e) = alg.bracket_basis(x, y) {
                pair[i][j] = e.clone();
            }
        }
    }

    let mut max_defect = BigRational::zero();
    let mut worst_triple = None;
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let total = alg.bracket_unchecked(&basis[i], &pair[j][k])
                    + alg.bracket_unchecked(&basis[j], &pair[k][i])
                    + alg.bracket_unchecked(&basis[k], &pair[i][j]);
                let d = total.max_abs();
                if d > max_defect {
                    max_defect = d;
                    worst_triple = Some([gens[i], gens[j], gens[k]]);
                }
            }
        }
    }

    JacobiReport {
        max_defect,
        worst_triple,
        antisymmetry_defect,
        worst_pair,
    }
}

/// `(h, d, k) -> (chi0, chi1, chi2) = ((h+k)/2, (k-h)/2, d)`.
pub fn conformal_basis(h: &BigRational, d: &BigRational, k: &BigRational) -> [BigRational; 3] {
    let two = int(2);
    [(h + k) / &two, (k - h) / &two, d.clone()]
}

/// Inverse of [`conformal_basis`]: `h = chi0 - chi1`, `d = chi2`, `k = chi0 + chi1`.
pub fn conformal_basis_inverse(chi: &[BigRational; 3]) -> (BigRational, BigRational, BigRational) {
    (&chi[0] - &chi[1], chi[2].clone(), &chi[0] + &chi[1])
}

/// `N^0 = (H+K)/2`, `N^1 = (K-H)/2`, `N^2 = D` as algebra elements.
pub fn so21_generators() -> [AlgebraElement; 3] {
    let h = GeneratorId::H;
    let k = GeneratorId::K;
    [
        AlgebraElement::from_terms([(h, half(1)), (k, half(1))]),
        AlgebraElement::from_terms([(h, half(-1)), (k, half(1))]),
        AlgebraElement::generator(GeneratorId::D),
    ]
}

/// `epsilon^{ab}_c = epsilon^{abd} g_{dc}` with `g = diag(+,-,-)`, `epsilon^{012} = 1`.
pub fn so21_epsilon_lowered(a: usize, b: usize, c: usize) -> i32 {
    let parity = match (a, b, c) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (2, 1, 0) | (0, 2, 1) | (1, 0, 2) => -1,
        _ => 0,
    };
    let metric = if c == 0 { 1 } else { -1 };
    parity * metric
}

/// Max coefficient defect of `[N^a, N^b] = i epsilon^{ab}_c N^c` computed
/// through the table.
pub fn so21_closure_defect(alg: &AlgebraSpec) -> BigRational {
    let basis = so21_generators();
    let mut worst = BigRational::zero();
    for a in 0..3 {
        for b in 0..3 {
            let mut diff = alg.bracket_unchecked(&basis[a], &basis[b]);
            for (c, nc) in basis.iter().enumerate() {
                let e = so21_epsilon_lowered(a, b, c);
                if e != 0 {
                    diff.add_scaled(nc, &int((-e).into()));
                }
            }
            worst = worst.max(diff.max_abs());
        }
    }
    worst
}

/// Magnitude `j! k!` of every central C-C constant, checked against the table.
pub fn central_magnitude_defect(alg: &AlgebraSpec) -> BigRational {
    let mut worst = BigRational::zero();
    for ((x, y), value) in alg.entries() {
        if let (GeneratorId::C { level: j, .. }, GeneratorId::C { level: k, .. }) = (x, y) {
            let expected = BigRational::from_integer(factorial(*j) * factorial(*k));
            let got = value.coefficient(&GeneratorId::M).abs();
            worst = worst.max((got - expected).abs());
        }
    }
    worst
}

pub const DUMP_SCHEMA_VERSION: u32 = 1;

/// JSON shape of a structure-constant table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDump {
    pub schema_version: u32,
    pub n: u32,
    pub dim: u8,
    pub central: bool,
    pub with_ds: bool,
    pub entries: Vec<DumpEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DumpEntry {
    pub lhs: GeneratorId,
    pub rhs: GeneratorId,
    pub results: Vec<DumpTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DumpTerm {
    pub gen: GeneratorId,
    pub num: i64,
    pub den: i64,
}
