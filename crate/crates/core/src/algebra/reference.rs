//! Hand-entered Schrödinger algebra, independent of the level-indexed builder.
//!
//! Translations `P_i` and boosts `B_i` are identified with `C_0^i` and
//! `C_1^i` only at the very end, when comparing against a built table.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{AlgebraElement, AlgebraSpec, GeneratorId};
use crate::combinatorics::levi_civita3;

type Table = BTreeMap<(GeneratorId, GeneratorId), AlgebraElement>;

fn p(i: u8) -> GeneratorId {
    GeneratorId::c(0, i)
}

fn b(i: u8) -> GeneratorId {
    GeneratorId::c(1, i)
}

fn j(i: u8) -> GeneratorId {
    GeneratorId::j(i)
}

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn set(table: &mut Table, x: GeneratorId, y: GeneratorId, z: GeneratorId, c: BigRational) {
    table.entry((x, y)).or_default().add_term(z, c.clone());
    table.entry((y, x)).or_default().add_term(z, -c);
}

/// Real coefficients of the Schrödinger commutators `[X, Y] = i c Z`, with
/// the optional space dilatation and the optional mass extension
/// `[B_i, P_k] = i M delta_ik`.
pub fn schrodinger_reference(central: bool, with_ds: bool) -> Table {
    let mut t = Table::new();
    for i in 1..=3u8 {
        for k in 1..=3u8 {
            for l in 1..=3u8 {
                let e = levi_civita3(i, k, l);
                if e == 0 || i > k {
                    continue;
                }
                let e = rat(e.into(), 1);
                set(&mut t, j(i), j(k), j(l), e.clone());
            }
        }
    }
    for i in 1..=3u8 {
        for k in 1..=3u8 {
            for l in 1..=3u8 {
                let e = levi_civita3(i, k, l);
                if e == 0 {
                    continue;
                }
                let e = rat(e.into(), 1);
                set(&mut t, j(i), p(k), p(l), e.clone());
                set(&mut t, j(i), b(k), b(l), e);
            }
        }
    }
    let (h, d, k) = (GeneratorId::H, GeneratorId::D, GeneratorId::K);
    for i in 1..=3u8 {
        set(&mut t, b(i), h, p(i), rat(1, 1));
        set(&mut t, d, p(i), p(i), rat(1, 2));
        set(&mut t, d, b(i), b(i), rat(-1, 2));
        set(&mut t, k, p(i), b(i), rat(1, 1));
        if with_ds {
            set(&mut t, GeneratorId::Ds, p(i), p(i), rat(1, 1));
            set(&mut t, GeneratorId::Ds, b(i), b(i), rat(1, 1));
        }
        if central {
            set(&mut t, b(i), p(i), GeneratorId::M, rat(1, 1));
        }
    }
    set(&mut t, d, h, h, rat(1, 1));
    set(&mut t, d, k, k, rat(-1, 1));
    set(&mut t, k, h, d, rat(2, 1));
    t.retain(|_, v| !v.is_zero());
    t
}

/// Pairs whose brackets differ between `alg` and `reference` (in either
/// direction), compared coefficient-exactly.
pub fn specialization_mismatches(
    alg: &AlgebraSpec,
    reference: &Table,
) -> Vec<(GeneratorId, GeneratorId)> {
    let mut keys: Vec<(GeneratorId, GeneratorId)> = alg.entries().map(|(k, _)| *k).collect();
    keys.extend(reference.keys().copied());
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .filter(|key| {
            let empty = AlgebraElement::zero();
            let ours = alg.constant(&key.0, &key.1).unwrap_or(&empty);
            let theirs = reference.get(key).unwrap_or(&empty);
            ours != theirs
        })
        .collect()
}
