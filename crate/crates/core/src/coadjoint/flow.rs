use nalgebra::{DMatrix, Rotation3, Vector3};
use num_traits::ToPrimitive;

use super::{CoadjointError, DualVector};
use crate::algebra::{AlgebraElement, AlgebraSpec, GeneratorId};
use crate::combinatorics::{factorial_f64 as fact, levi_civita2, levi_civita3, sign_pow_f64};
use crate::expm::expm;
use crate::ring::dot;

/// Tolerance handed to the matrix exponential.
pub const GENERIC_TOL: f64 = 1e-12;

/// One-parameter coadjoint flows with printed closed forms.
///
/// Sign conventions follow the group elements they stand for:
/// `Translation(a)` is `exp(i a.P)`, `Boost(v)` is `exp(i v.B)`,
/// `TimeShift(tau)` is `exp(-i tau H)`, `Dilation(l)` is `exp(i l D)`,
/// `Conformal(u)` is `exp(i u K)`, `Rotation(w)` is `exp(i w.J)` and
/// `CTranslation(x)` is `exp(i x_k^a C_k^a)`.
#[derive(Clone, Debug, PartialEq)]
pub enum CoadjointFlow {
    Translation([f64; 3]),
    Boost([f64; 3]),
    TimeShift(f64),
    Dilation(f64),
    Conformal(f64),
    Rotation([f64; 3]),
    /// `(N+1) x dim` parameters `x_k^a`.
    CTranslation(Vec<Vec<f64>>),
}

impl CoadjointFlow {
    /// Lie algebra element `A` with `exp(i A)` equal to this flow.
    pub fn generator_terms(&self) -> Vec<(GeneratorId, f64)> {
        let vec3 = |level: Option<u32>, v: &[f64; 3]| -> Vec<(GeneratorId, f64)> {
            (1..=3u8)
                .map(|a| {
                    let g = match level {
                        Some(l) => GeneratorId::c(l, a),
                        None => GeneratorId::j(a),
                    };
                    (g, v[usize::from(a) - 1])
                })
                .collect()
        };
        match self {
            CoadjointFlow::Translation(a) => vec3(Some(0), a),
            CoadjointFlow::Boost(v) => vec3(Some(1), v),
            CoadjointFlow::TimeShift(tau) => vec![(GeneratorId::H, -tau)],
            CoadjointFlow::Dilation(l) => vec![(GeneratorId::D, *l)],
            CoadjointFlow::Conformal(u) => vec![(GeneratorId::K, *u)],
            CoadjointFlow::Rotation(w) => vec3(None, w),
            CoadjointFlow::CTranslation(x) => x
                .iter()
                .enumerate()
                .flat_map(|(level, row)| {
                    row.iter()
                        .enumerate()
                        .map(move |(a, v)| (GeneratorId::c(level as u32, a as u8 + 1), *v))
                })
                .collect(),
        }
    }

    fn name(&self) -> &'static str {
        match self {
            CoadjointFlow::Translation(_) => "translation",
            CoadjointFlow::Boost(_) => "boost",
            CoadjointFlow::TimeShift(_) => "time shift",
            CoadjointFlow::Dilation(_) => "dilation",
            CoadjointFlow::Conformal(_) => "conformal",
            CoadjointFlow::Rotation(_) => "rotation",
            CoadjointFlow::CTranslation(_) => "C-translation",
        }
    }
}

/// Rotation matrix acting on `j`, `xi`, `zeta` under `exp(i w.J)`:
/// `R = exp(-[w]_x)`, i.e. a turn by `-|w|` about `w`.
pub fn rotation_for(w: &[f64; 3]) -> Rotation3<f64> {
    Rotation3::new(-Vector3::from_column_slice(w))
}

fn v3(x: &[f64]) -> Vector3<f64> {
    Vector3::from_column_slice(x)
}

/// Printed closed form of a coadjoint flow. Columns of the Schrödinger
/// table need `N = 1`; C-translations work for every orbit-capable algebra.
pub fn coad_closed_form(
    alg: &AlgebraSpec,
    flow: &CoadjointFlow,
    x: &DualVector<f64>,
) -> Result<DualVector<f64>, CoadjointError> {
    let shape = x.check_algebra(alg)?;
    if let CoadjointFlow::CTranslation(params) = flow {
        if params.len() != shape.levels() || params.iter().any(|r| r.len() != shape.dim) {
            return Err(CoadjointError::ShapeMismatch(
                "C-translation parameters".into(),
            ));
        }
        return Ok(if shape.is_odd() {
            c_translation_odd(x, params)
        } else {
            c_translation_even(x, params, false)
        });
    }
    if shape.n != 1 {
        return Err(CoadjointError::UnsupportedClosedForm(format!(
            "{} flow is only tabulated for N=1 (got N={})",
            flow.name(),
            shape.n
        )));
    }

    let m = x.m;
    let j = v3(&x.j);
    let xi = v3(&x.c[0]);
    let zeta = v3(&x.c[1]);
    let (h, d, k) = (x.h, x.d, x.k);
    let (mut j2, mut xi2, mut zeta2, mut h2, mut d2, mut k2) = (j, xi, zeta, h, d, k);
    match flow {
        CoadjointFlow::Translation(a) => {
            let a = v3(a);
            j2 = j - a.cross(&xi);
            zeta2 = zeta - m * a;
            d2 = d - 0.5 * a.dot(&xi);
            k2 = k - a.dot(&zeta) + 0.5 * m * a.norm_squared();
        }
        CoadjointFlow::Boost(v) => {
            let v = v3(v);
            j2 = j - v.cross(&zeta);
            xi2 = xi + m * v;
            h2 = h + 0.5 * m * v.norm_squared() + v.dot(&xi);
            d2 = d + 0.5 * v.dot(&zeta);
        }
        CoadjointFlow::TimeShift(tau) => {
            zeta2 = zeta + *tau * xi;
            d2 = d + tau * h;
            k2 = k + 2.0 * tau * d + tau * tau * h;
        }
        CoadjointFlow::Dilation(l) => {
            xi2 = (0.5 * l).exp() * xi;
            zeta2 = (-0.5 * l).exp() * zeta;
            h2 = l.exp() * h;
            k2 = (-l).exp() * k;
        }
        CoadjointFlow::Conformal(u) => {
            xi2 = xi + *u * zeta;
            h2 = h + 2.0 * u * d + u * u * k;
            d2 = d + u * k;
        }
        CoadjointFlow::Rotation(w) => {
            let r = rotation_for(w);
            j2 = r * j;
            xi2 = r * xi;
            zeta2 = r * zeta;
        }
        CoadjointFlow::CTranslation(_) => unreachable!(),
    }
    Ok(DualVector {
        m,
        h: h2,
        d: d2,
        k: k2,
        j: j2.as_slice().to_vec(),
        c: vec![xi2.as_slice().to_vec(), zeta2.as_slice().to_vec()],
    })
}

/// `exp(i x.C)` for `N` odd, dimension 3.
fn c_translation_odd(x: &DualVector<f64>, p: &[Vec<f64>]) -> DualVector<f64> {
    let n = x.c.len() - 1;
    let ni = n as i64;
    let m = x.m;
    // (-1)^(j-(N+1)/2) and (-1)^(j-(N-1)/2)
    let s1 = |j: usize| sign_pow_f64(j as i64 - (ni + 1) / 2);
    let s2 = |j: usize| sign_pow_f64(j as i64 - (ni - 1) / 2);

    let mut out = x.clone();

    for b in 0..3 {
        let mut lin = 0.0;
        let mut quad = 0.0;
        for (jj, (pj, cj)) in p.iter().zip(&x.c).enumerate() {
            for a in 0..3 {
                for dd in 0..3 {
                    let e = f64::from(levi_civita3(b as u8 + 1, a as u8 + 1, dd as u8 + 1));
                    lin += e * pj[a] * cj[dd];
                }
                for c in 0..3 {
                    let e = f64::from(levi_civita3(b as u8 + 1, c as u8 + 1, a as u8 + 1));
                    quad += s1(jj) * e * pj[a] * p[n - jj][c] * fact(jj) * fact(n - jj);
                }
            }
        }
        out.j[b] = x.j[b] - lin - 0.5 * m * quad;
    }

    for jj in 0..=n {
        for b in 0..3 {
            out.c[jj][b] = x.c[jj][b] + s2(jj) * m * fact(jj) * fact(n - jj) * p[n - jj][b];
        }
    }

    let mut h = x.h;
    for jj in 0..n {
        h += (jj + 1) as f64 * dot(&p[jj + 1], &x.c[jj]);
    }
    for jj in 1..=n {
        h += 0.5 * m * s1(jj) * fact(jj) * fact(n - jj + 1) * dot(&p[jj], &p[n - jj + 1]);
    }
    out.h = h;

    let mut d = x.d;
    for jj in 0..=n {
        let w = n as f64 / 2.0 - jj as f64;
        d -= w * dot(&p[jj], &x.c[jj]);
        d += 0.5 * m * w * s1(jj) * fact(jj) * fact(n - jj) * dot(&p[jj], &p[n - jj]);
    }
    out.d = d;

    let mut k = x.k;
    for jj in 1..=n {
        k -= (n - jj + 1) as f64 * dot(&p[jj - 1], &x.c[jj]);
    }
    for jj in 0..n {
        k += 0.5 * m * s2(jj) * fact(jj + 1) * fact(n - jj) * dot(&p[jj], &p[n - jj - 1]);
    }
    out.k = k;
    out
}

fn eps2(a: usize, b: usize) -> f64 {
    f64::from(levi_civita2(a as u8 + 1, b as u8 + 1))
}

/// `sum_{ab} eps^{ab} u^b w^a`.
fn eps_contract(u: &[f64], w: &[f64]) -> f64 {
    let mut acc = 0.0;
    for a in 0..2 {
        for b in 0..2 {
            acc += eps2(a, b) * u[b] * w[a];
        }
    }
    acc
}

/// `exp(i x.C)` for `N` even, dimension 2. With `transposed_k` the
/// quadratic k-term is contracted with `eps^{ba}` instead of `eps^{ab}`.
fn c_translation_even(x: &DualVector<f64>, p: &[Vec<f64>], transposed_k: bool) -> DualVector<f64> {
    let n = x.c.len() - 1;
    let ni = n as i64;
    let m = x.m;
    // (-1)^((2j-N)/2)
    let s = |j: usize| sign_pow_f64((2 * j as i64 - ni) / 2);

    let mut out = x.clone();

    let mut jv = x.j[0];
    for jj in 0..=n {
        for a in 0..2 {
            for b in 0..2 {
                jv -= eps2(b, a) * p[jj][b] * x.c[jj][a];
                let mut ee = 0.0;
                for dd in 0..2 {
                    ee += eps2(a, dd) * eps2(b, dd);
                }
                jv += 0.5 * m * s(jj) * ee * p[jj][b] * p[n - jj][a] * fact(jj) * fact(n - jj);
            }
        }
    }
    out.j[0] = jv;

    for jj in 0..=n {
        for b in 0..2 {
            let mut rot = 0.0;
            for a in 0..2 {
                rot += eps2(a, b) * p[n - jj][a];
            }
            out.c[jj][b] = x.c[jj][b] - s(jj) * m * fact(jj) * fact(n - jj) * rot;
        }
    }

    let mut h = x.h;
    for jj in 0..n {
        h += (jj + 1) as f64 * dot(&p[jj + 1], &x.c[jj]);
    }
    for jj in 1..=n {
        h += 0.5 * m * s(jj) * fact(jj) * fact(n - jj + 1) * eps_contract(&p[jj], &p[n - jj + 1]);
    }
    out.h = h;

    let mut d = x.d;
    for jj in 0..=n {
        let w = n as f64 / 2.0 - jj as f64;
        d -= w * dot(&p[jj], &x.c[jj]);
        d -= 0.5 * m * (-w) * s(jj) * fact(jj) * fact(n - jj) * eps_contract(&p[jj], &p[n - jj]);
    }
    out.d = d;

    let k_sign = if transposed_k { -1.0 } else { 1.0 };
    let mut k = x.k;
    for jj in 0..n {
        k -= (n - jj) as f64 * dot(&p[jj], &x.c[jj + 1]);
        k -= k_sign
            * 0.5
            * m
            * s(jj)
            * fact(jj + 1)
            * fact(n - jj)
            * eps_contract(&p[jj], &p[n - jj - 1]);
    }
    out.k = k;
    out
}

/// `L[z][y]` = coefficient of generator `z` in the real bracket `[A, y]`.
fn ad_matrix(alg: &AlgebraSpec, a: &[(GeneratorId, f64)]) -> Result<DMatrix<f64>, CoadjointError> {
    let gens = alg.generators();
    let n = gens.len();
    let mut l = DMatrix::<f64>::zeros(n, n);
    for (ga, coeff) in a {
        if !alg.contains(ga) {
            return Err(crate::algebra::AlgebraError::UnknownGenerator(*ga).into());
        }
        if *coeff == 0.0 {
            continue;
        }
        for (col, gy) in gens.iter().enumerate() {
            if let Some(z) = alg.constant(ga, gy) {
                for (gz, c) in z.iter() {
                    let row = alg.index_of(gz).expect("table closes on its generators");
                    l[(row, col)] += coeff * c.to_f64().unwrap_or(f64::NAN);
                }
            }
        }
    }
    Ok(l)
}

/// `Ad*` of `exp(i t A)` from the exponential of the structure-constant
/// matrix; real-coefficient variant of [`coad_generic`].
///
/// Dual coordinates transform as `mu' = exp(t L_A)^T mu`, with
/// `L_A(Y) = [A, Y] / i`.
pub fn coad_generic_real(
    alg: &AlgebraSpec,
    a: &[(GeneratorId, f64)],
    t: f64,
    x: &DualVector<f64>,
) -> Result<DualVector<f64>, CoadjointError> {
    let mu = x.to_coords(alg)?;
    let l = ad_matrix(alg, a)? * t;
    let e = expm(&l, GENERIC_TOL)?;
    let out = e.matrix.transpose() * mu;
    DualVector::from_coords(alg, &out)
}

pub fn coad_generic(
    alg: &AlgebraSpec,
    a: &AlgebraElement,
    t: f64,
    x: &DualVector<f64>,
) -> Result<DualVector<f64>, CoadjointError> {
    let terms: Vec<(GeneratorId, f64)> = a
        .iter()
        .map(|(g, c)| (*g, c.to_f64().unwrap_or(f64::NAN)))
        .collect();
    coad_generic_real(alg, &terms, t, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::build_algebra;
    use crate::shape::Shape;

    fn n1_point(m: f64) -> DualVector<f64> {
        let mut x = DualVector::zeros(Shape::new(1, 3).unwrap());
        x.m = m;
        x
    }

    #[test]
    fn boost_example() {
        let alg = build_algebra(1, 3, true, false).unwrap();
        let x = n1_point(2.0);
        let y = coad_closed_form(&alg, &CoadjointFlow::Boost([1.0, 0.0, 0.0]), &x).unwrap();
        assert_eq!(y.c[0], vec![2.0, 0.0, 0.0]);
        assert_eq!(y.h, 1.0);
        assert_eq!(y.m, 2.0);
    }

    #[test]
    fn translation_example() {
        let alg = build_algebra(1, 3, true, false).unwrap();
        let x = n1_point(1.0);
        let y = coad_closed_form(&alg, &CoadjointFlow::Translation([1.0, 0.0, 0.0]), &x).unwrap();
        assert_eq!(y.c[1], vec![-1.0, 0.0, 0.0]);
        assert_eq!(y.k, 0.5);
    }

    #[test]
    fn zero_parameters_are_identity() {
        let alg = build_algebra(1, 3, true, false).unwrap();
        let mut x = n1_point(1.3);
        x.h = 0.2;
        x.d = -0.4;
        x.k = 1.1;
        x.j = vec![0.1, 0.2, 0.3];
        x.c = vec![vec![1.0, -2.0, 0.5], vec![0.3, 0.0, -0.7]];
        for flow in [
            CoadjointFlow::Translation([0.0; 3]),
            CoadjointFlow::Boost([0.0; 3]),
            CoadjointFlow::TimeShift(0.0),
            CoadjointFlow::Dilation(0.0),
            CoadjointFlow::Conformal(0.0),
            CoadjointFlow::Rotation([0.0; 3]),
            CoadjointFlow::CTranslation(vec![vec![0.0; 3]; 2]),
        ] {
            assert_eq!(coad_closed_form(&alg, &flow, &x).unwrap(), x, "{flow:?}");
        }
    }

    #[test]
    fn mass_flow_is_identity() {
        let alg = build_algebra(3, 3, true, false).unwrap();
        let mut x = DualVector::zeros(Shape::new(3, 3).unwrap());
        x.m = 1.0;
        x.h = 2.0;
        x.c[1][2] = 3.0;
        let y = coad_generic(&alg, &AlgebraElement::generator(GeneratorId::M), 5.0, &x).unwrap();
        assert_eq!(y, x);
    }

    #[test]
    fn table_columns_need_n1() {
        let alg = build_algebra(3, 3, true, false).unwrap();
        let x = DualVector::zeros(Shape::new(3, 3).unwrap());
        assert!(matches!(
            coad_closed_form(&alg, &CoadjointFlow::Dilation(0.1), &x),
            Err(CoadjointError::UnsupportedClosedForm(_))
        ));
    }

    #[test]
    fn rotation_sign_matches_generic() {
        let alg = build_algebra(1, 3, true, false).unwrap();
        let mut x = n1_point(1.0);
        x.j = vec![1.0, 0.0, 0.0];
        let flow = CoadjointFlow::Rotation([0.0, 0.0, 0.3]);
        let closed = coad_closed_form(&alg, &flow, &x).unwrap();
        let generic = coad_generic_real(&alg, &flow.generator_terms(), 1.0, &x).unwrap();
        assert!(closed.max_abs_diff(&generic) < 1e-14);
        // j' = j - w x j to first order: turning x-axis by -0.3 about z
        assert!((closed.j[1] + 0.3f64.sin()).abs() < 1e-14);
    }

    #[test]
    fn k_quadratic_sign_convention() {
        // eps^{ab} in the quadratic k-term agrees with the exponential of the
        // structure constants; the transposed contraction does not.
        let alg = build_algebra(2, 2, true, false).unwrap();
        let mut x = DualVector::zeros(Shape::new(2, 2).unwrap());
        x.m = 1.7;
        x.k = 0.3;
        x.c[1] = vec![0.4, -0.2];
        let params = vec![vec![0.9, -0.3], vec![0.2, 0.5], vec![-0.6, 0.8]];
        let flow = CoadjointFlow::CTranslation(params.clone());
        let generic = coad_generic_real(&alg, &flow.generator_terms(), 1.0, &x).unwrap();
        let ours = c_translation_even(&x, &params, false);
        let transposed = c_translation_even(&x, &params, true);
        assert!(ours.max_abs_diff(&generic) < 1e-12);
        assert!((transposed.k - generic.k).abs() > 1e-3);
        assert_eq!(transposed.h, ours.h);
    }
}
