use serde::{Deserialize, Serialize};

use super::{CoadjointError, DualVector};
use crate::combinatorics::{factorial_f64 as fact, levi_civita2, levi_civita3, sign_pow_f64};
use crate::ring::{dot, Ring};
use crate::shape::Shape;

pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-9;

/// Relative slack used when matching `s` and `sigma` against a label.
const LABEL_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrbitTag {
    HplusSigma,
    HminusSigma,
    Hplus0,
    Hminus0,
    HyperbolicSigma,
    Origin,
}

impl OrbitTag {
    pub fn has_sigma(self) -> bool {
        matches!(
            self,
            OrbitTag::HplusSigma | OrbitTag::HminusSigma | OrbitTag::HyperbolicSigma
        )
    }
}

/// An SL(2,R) coadjoint orbit.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitClass {
    pub tag: OrbitTag,
    pub sigma: f64,
}

impl OrbitClass {
    pub fn new(tag: OrbitTag, sigma: f64) -> Self {
        OrbitClass {
            tag,
            sigma: if tag.has_sigma() { sigma.abs() } else { 0.0 },
        }
    }

    /// `g(chi, chi)` on the orbit: `sigma^2`, `-sigma^2` or `0`.
    pub fn signed_sigma2(&self) -> f64 {
        match self.tag {
            OrbitTag::HplusSigma | OrbitTag::HminusSigma => self.sigma * self.sigma,
            OrbitTag::HyperbolicSigma => -self.sigma * self.sigma,
            _ => 0.0,
        }
    }

    fn matches(&self, other: &OrbitClass) -> bool {
        self.tag == other.tag && (self.sigma - other.sigma).abs() <= 1e-9 * self.sigma.max(1.0)
    }
}

/// Invariants naming a coadjoint orbit. In dimension 2 `s2` holds the
/// signed scalar spin `s` itself.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitLabel {
    pub m: f64,
    pub s2: f64,
    pub chi_class: OrbitClass,
}

/// `g(chi, chi)` with signature `(+, -, -)`.
pub fn minkowski_square(chi: &[f64; 3]) -> f64 {
    chi[0] * chi[0] - chi[1] * chi[1] - chi[2] * chi[2]
}

pub fn classify_orbit(chi: &[f64; 3], tol: f64) -> Result<OrbitClass, CoadjointError> {
    if !(tol >= 0.0) {
        return Err(CoadjointError::NegativeTolerance);
    }
    let i = minkowski_square(chi);
    let norm = chi.iter().map(|x| x * x).sum::<f64>().sqrt();
    let class = if i.abs() <= tol {
        if norm <= tol {
            OrbitClass::new(OrbitTag::Origin, 0.0)
        } else if chi[0] > tol {
            OrbitClass::new(OrbitTag::Hplus0, 0.0)
        } else if chi[0] < -tol {
            OrbitClass::new(OrbitTag::Hminus0, 0.0)
        } else {
            return Err(CoadjointError::AmbiguousClass(*chi));
        }
    } else if i > 0.0 {
        let tag = if chi[0] > 0.0 {
            OrbitTag::HplusSigma
        } else {
            OrbitTag::HminusSigma
        };
        OrbitClass::new(tag, i.sqrt())
    } else {
        OrbitClass::new(OrbitTag::HyperbolicSigma, (-i).sqrt())
    };
    Ok(class)
}

/// A convenient point on the given orbit.
pub fn chi_representative(class: &OrbitClass) -> [f64; 3] {
    let s = class.sigma;
    match class.tag {
        OrbitTag::HplusSigma => [s, 0.0, 0.0],
        OrbitTag::HminusSigma => [-s, 0.0, 0.0],
        OrbitTag::Hplus0 => [1.0, 1.0, 0.0],
        OrbitTag::Hminus0 => [-1.0, -1.0, 0.0],
        OrbitTag::HyperbolicSigma => [0.0, 0.0, s],
        OrbitTag::Origin => [0.0, 0.0, 0.0],
    }
}

/// Orbit through `s J~ + (chi0 - chi1) H~ + chi2 D~ + (chi0 + chi1) K~ + m M~`
/// moved by `exp(i x_k^a C_k^a)`.
///
/// Generic over the coefficient ring so that the same formula serves
/// numerical evaluation and polynomial generator functions.
pub fn orbit_point<T: Ring>(
    shape: Shape,
    m: f64,
    s: &[T],
    chi: &[T; 3],
    x: &[Vec<T>],
) -> DualVector<T> {
    let n = shape.n;
    let mut out = DualVector::zeros(shape);
    out.m = T::constant(m);
    out.h = chi[0].clone() - chi[1].clone();
    out.d = chi[2].clone();
    out.k = chi[0].clone() + chi[1].clone();
    for (dst, src) in out.j.iter_mut().zip(s) {
        *dst = src.clone();
    }

    if shape.is_odd() {
        let ni = n as i64;
        let s1 = |j: usize| sign_pow_f64(j as i64 - (ni + 1) / 2);
        let s2 = |j: usize| sign_pow_f64(j as i64 - (ni - 1) / 2);
        for b in 0..3 {
            for j in 0..=n {
                for a in 0..3 {
                    for c in 0..3 {
                        let e = levi_civita3(b as u8 + 1, c as u8 + 1, a as u8 + 1);
                        if e == 0 {
                            continue;
                        }
                        let w = -0.5 * m * s1(j) * f64::from(e) * fact(j) * fact(n - j);
                        out.j[b] =
                            out.j[b].clone() + (x[j][a].clone() * x[n - j][c].clone()).scale(w);
                    }
                }
            }
        }
        for j in 0..=n {
            for b in 0..3 {
                out.c[j][b] = x[n - j][b].scale(s2(j) * m * fact(j) * fact(n - j));
            }
        }
        for j in 1..=n {
            let w = 0.5 * m * s1(j) * fact(j) * fact(n - j + 1);
            out.h = out.h.clone() + dot(&x[j], &x[n - j + 1]).scale(w);
        }
        for j in 0..=n {
            let w = 0.5 * m * (n as f64 / 2.0 - j as f64) * s1(j) * fact(j) * fact(n - j);
            out.d = out.d.clone() + dot(&x[j], &x[n - j]).scale(w);
        }
        for j in 0..n {
            let w = 0.5 * m * s2(j) * fact(j + 1) * fact(n - j);
            out.k = out.k.clone() + dot(&x[j], &x[n - j - 1]).scale(w);
        }
    } else {
        let ni = n as i64;
        let sg = |j: usize| sign_pow_f64((2 * j as i64 - ni) / 2);
        for j in 0..=n {
            // eps^{ad} eps^{bd} = delta^{ab}
            let w = 0.5 * m * sg(j) * fact(j) * fact(n - j);
            out.j[0] = out.j[0].clone() + dot(&x[j], &x[n - j]).scale(w);
        }
        for j in 0..=n {
            for b in 0..2 {
                for a in 0..2 {
                    let e = levi_civita2(b as u8 + 1, a as u8 + 1);
                    if e == 0 {
                        continue;
                    }
                    let w = sg(j) * m * fact(j) * fact(n - j) * f64::from(e);
                    out.c[j][b] = out.c[j][b].clone() + x[n - j][a].scale(w);
                }
            }
        }
        for j in 1..=n {
            let w = 0.5 * m * sg(j) * fact(j) * fact(n - j + 1);
            out.h = out.h.clone() + eps_t(&x[j], &x[n - j + 1]).scale(w);
        }
        for j in 0..=n {
            let w = -0.5 * m * (j as f64 - n as f64 / 2.0) * sg(j) * fact(j) * fact(n - j);
            out.d = out.d.clone() + eps_t(&x[j], &x[n - j]).scale(w);
        }
        for j in 0..n {
            let w = -0.5 * m * sg(j) * fact(j + 1) * fact(n - j);
            out.k = out.k.clone() + eps_t(&x[j], &x[n - j - 1]).scale(w);
        }
    }
    out
}

/// `eps^{ab} u^b w^a = u^2 w^1 - u^1 w^2`.
fn eps_t<T: Ring>(u: &[T], w: &[T]) -> T {
    u[1].clone() * w[0].clone() - u[0].clone() * w[1].clone()
}

fn check_label(
    label: &OrbitLabel,
    shape: Shape,
    s: &[f64],
    chi: &[f64; 3],
) -> Result<(), CoadjointError> {
    if !(label.m > 0.0) {
        return Err(CoadjointError::NonPositiveMass(label.m));
    }
    if s.len() != shape.spin_len() {
        return Err(CoadjointError::ShapeMismatch(format!(
            "spin has {} components, expected {}",
            s.len(),
            shape.spin_len()
        )));
    }
    let s_value = if shape.dim == 3 {
        s.iter().map(|v| v * v).sum::<f64>()
    } else {
        s[0]
    };
    if (s_value - label.s2).abs() > LABEL_TOL * label.s2.abs().max(1.0) {
        return Err(CoadjointError::LabelMismatch(format!(
            "spin invariant {s_value} differs from label {}",
            label.s2
        )));
    }
    let class = classify_orbit(chi, DEFAULT_CLASSIFY_TOL)?;
    if !class.matches(&label.chi_class) {
        return Err(CoadjointError::LabelMismatch(format!(
            "chi lies on {:?} (sigma {}), label says {:?} (sigma {})",
            class.tag, class.sigma, label.chi_class.tag, label.chi_class.sigma
        )));
    }
    Ok(())
}

/// Orbit point with internal data `(s, chi)` and external coordinates
/// `x_k^a`, checked against `label`.
pub fn parametrize(
    label: &OrbitLabel,
    shape: Shape,
    s: &[f64],
    chi: &[f64; 3],
    x: &[Vec<f64>],
) -> Result<DualVector<f64>, CoadjointError> {
    check_label(label, shape, s, chi)?;
    if x.len() != shape.levels() || x.iter().any(|r| r.len() != shape.dim) {
        return Err(CoadjointError::ShapeMismatch("external coordinates".into()));
    }
    Ok(orbit_point(shape, label.m, s, chi, x))
}

/// Schrödinger orbit point in position/momentum form.
pub fn parametrize_schrodinger(
    label: &OrbitLabel,
    s: &[f64; 3],
    chi: &[f64; 3],
    x: &[f64; 3],
    p: &[f64; 3],
) -> Result<DualVector<f64>, CoadjointError> {
    let shape = Shape::new(1, 3)?;
    check_label(label, shape, s, chi)?;
    let m = label.m;
    let xp: Vec<f64> = (0..3).map(|i| x[i] * p[i]).collect();
    let cross = [
        x[1] * p[2] - x[2] * p[1],
        x[2] * p[0] - x[0] * p[2],
        x[0] * p[1] - x[1] * p[0],
    ];
    Ok(DualVector {
        m,
        h: p.iter().map(|v| v * v).sum::<f64>() / (2.0 * m) + chi[0] - chi[1],
        d: 0.5 * xp.iter().sum::<f64>() + chi[2],
        k: 0.5 * m * x.iter().map(|v| v * v).sum::<f64>() + chi[0] + chi[1],
        j: (0..3).map(|i| cross[i] + s[i]).collect(),
        c: vec![p.to_vec(), x.iter().map(|v| m * v).collect()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_examples() {
        let c = classify_orbit(&[2.0, 0.0, 0.0], 0.0).unwrap();
        assert_eq!(c, OrbitClass::new(OrbitTag::HplusSigma, 2.0));
        assert_eq!(
            classify_orbit(&[0.0; 3], 0.0).unwrap().tag,
            OrbitTag::Origin
        );
        let c = classify_orbit(&[0.0, 1.0, 0.0], 0.0).unwrap();
        assert_eq!(c, OrbitClass::new(OrbitTag::HyperbolicSigma, 1.0));
        assert_eq!(
            classify_orbit(&[-3.0, 0.0, 0.0], 0.0).unwrap().tag,
            OrbitTag::HminusSigma
        );
        assert_eq!(
            classify_orbit(&[5.0, 3.0, 4.0], 0.0).unwrap().tag,
            OrbitTag::Hplus0
        );
        assert_eq!(
            classify_orbit(&[-5.0, 3.0, -4.0], 0.0).unwrap().tag,
            OrbitTag::Hminus0
        );
    }

    #[test]
    fn classify_errors() {
        assert_eq!(
            classify_orbit(&[0.0; 3], -1.0),
            Err(CoadjointError::NegativeTolerance)
        );
        assert!(matches!(
            classify_orbit(&[1e-10, 1e-10, 0.0], 1e-9),
            Ok(OrbitClass {
                tag: OrbitTag::Origin,
                ..
            })
        ));
        assert!(matches!(
            classify_orbit(&[1e-6, 1e-6, 0.0], 1e-5),
            Ok(OrbitClass {
                tag: OrbitTag::Origin,
                ..
            })
        ));
        assert!(matches!(
            classify_orbit(&[1e-6, 0.0, 1e-3], 1e-4),
            Err(CoadjointError::AmbiguousClass(_))
        ));
    }

    #[test]
    fn representatives_classify_back() {
        for class in [
            OrbitClass::new(OrbitTag::HplusSigma, 1.5),
            OrbitClass::new(OrbitTag::HminusSigma, 0.5),
            OrbitClass::new(OrbitTag::Hplus0, 0.0),
            OrbitClass::new(OrbitTag::Hminus0, 0.0),
            OrbitClass::new(OrbitTag::HyperbolicSigma, 2.0),
            OrbitClass::new(OrbitTag::Origin, 0.0),
        ] {
            assert_eq!(
                classify_orbit(&chi_representative(&class), 0.0).unwrap(),
                class
            );
        }
    }

    #[test]
    fn schrodinger_example() {
        let label = OrbitLabel {
            m: 1.0,
            s2: 4.0,
            chi_class: OrbitClass::new(OrbitTag::Origin, 0.0),
        };
        let x = parametrize_schrodinger(
            &label,
            &[0.0, 0.0, 2.0],
            &[0.0; 3],
            &[1.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0],
        )
        .unwrap();
        assert_eq!(x.j, vec![0.0, 0.0, 3.0]);
        assert_eq!(x.c, vec![vec![0.0, 1.0, 0.0], vec![1.0, 0.0, 0.0]]);
        assert_eq!((x.h, x.d, x.k), (0.5, 0.0, 0.5));
    }

    #[test]
    fn zero_external_gives_base_point() {
        let shape = Shape::new(3, 3).unwrap();
        let chi = [2.0, 1.0, 0.5];
        let label = OrbitLabel {
            m: 1.0,
            s2: 1.0,
            chi_class: classify_orbit(&chi, 0.0).unwrap(),
        };
        let x = parametrize(
            &label,
            shape,
            &[1.0, 0.0, 0.0],
            &chi,
            &vec![vec![0.0; 3]; 4],
        )
        .unwrap();
        assert_eq!((x.h, x.d, x.k), (1.0, 0.5, 3.0));
        assert!(x.c.iter().flatten().all(|v| *v == 0.0));
    }

    #[test]
    fn label_checks() {
        let shape = Shape::new(1, 3).unwrap();
        let label = OrbitLabel {
            m: 1.0,
            s2: 1.0,
            chi_class: OrbitClass::new(OrbitTag::Origin, 0.0),
        };
        let zeros = vec![vec![0.0; 3]; 2];
        assert!(matches!(
            parametrize(&label, shape, &[0.0, 2.0, 0.0], &[0.0; 3], &zeros),
            Err(CoadjointError::LabelMismatch(_))
        ));
        assert!(matches!(
            parametrize(&label, shape, &[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0], &zeros),
            Err(CoadjointError::LabelMismatch(_))
        ));
        let bad_mass = OrbitLabel { m: 0.0, ..label };
        assert_eq!(
            parametrize(&bad_mass, shape, &[1.0, 0.0, 0.0], &[0.0; 3], &zeros),
            Err(CoadjointError::NonPositiveMass(0.0))
        );
    }
}
