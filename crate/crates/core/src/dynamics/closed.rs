use super::{DynamicsError, HamiltonianChoice};
use crate::combinatorics::factorial_f64 as fact;
use crate::poisson::PhasePoint;
use crate::ring::quarter_turn;

/// `chi(t)` under the free flow; `chi^0 - chi^1` is conserved.
pub fn chi_closed_form(chi: [f64; 3], t: f64) -> [f64; 3] {
    let e = chi[0] - chi[1];
    let quad = e * t * t / 2.0;
    [
        chi[0] + chi[2] * t + quad,
        chi[1] + chi[2] * t + quad,
        chi[2] + e * t,
    ]
}

fn unturn(v: &[f64]) -> Vec<f64> {
    vec![v[1], -v[0]]
}

/// External coordinates arranged as a chain `z_0, ..., z_N` with
/// `dz_i/dt = z_{i+1}` and `z_N` constant.
fn to_chain(pt: &PhasePoint) -> Vec<Vec<f64>> {
    let shape = pt.shape;
    let m = pt.m;
    let pairs = shape.pairs();
    let mut z: Vec<Vec<f64>> = pt.q.clone();
    if shape.is_odd() {
        for i in 0..pairs {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            z.push(pt.p[pairs - 1 - i].iter().map(|v| sign * v / m).collect());
        }
    } else {
        z.push(pt.q_half.clone());
        for i in 0..pairs {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            z.push(
                quarter_turn(&pt.p[pairs - 1 - i])
                    .iter()
                    .map(|v| sign * v / m)
                    .collect(),
            );
        }
    }
    z
}

fn from_chain(template: &PhasePoint, z: &[Vec<f64>]) -> PhasePoint {
    let shape = template.shape;
    let m = template.m;
    let pairs = shape.pairs();
    let mut out = template.clone();
    out.q = z[..pairs].to_vec();
    let offset = if shape.is_odd() {
        pairs
    } else {
        out.q_half = z[pairs].clone();
        pairs + 1
    };
    for i in 0..pairs {
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        let link = &z[offset + i];
        out.p[pairs - 1 - i] = if shape.is_odd() {
            link.iter().map(|v| sign * m * v).collect()
        } else {
            unturn(link).iter().map(|v| sign * m * v).collect()
        };
    }
    out
}

/// Exact solution of the free equations at time `t`.
pub fn closed_form(
    pt0: &PhasePoint,
    ham: HamiltonianChoice,
    t: f64,
) -> Result<PhasePoint, DynamicsError> {
    if ham != HamiltonianChoice::Free {
        return Err(DynamicsError::Unsupported(
            "closed form exists for the free Hamiltonian only".into(),
        ));
    }
    pt0.validate()?;
    let z0 = to_chain(pt0);
    let len = z0.len();
    let dim = pt0.shape.dim;
    let z: Vec<Vec<f64>> = (0..len)
        .map(|i| {
            let mut v = vec![0.0; dim];
            for l in 0..len - i {
                let w = t.powi(l as i32) / fact(l);
                for (dst, src) in v.iter_mut().zip(&z0[i + l]) {
                    *dst += w * src;
                }
            }
            v
        })
        .collect();
    let mut out = from_chain(pt0, &z);
    out.chi = chi_closed_form(pt0.chi, t);
    Ok(out)
}
