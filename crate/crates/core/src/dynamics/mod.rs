//! Time evolution on an orbit.

mod closed;
mod export;
mod order;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::coadjoint::{casimir_functions, Casimirs, DualVector};
use crate::poisson::{generators_at, PhasePoint, PoissonError};
use crate::ring::quarter_turn;

pub use closed::{chi_closed_form, closed_form};
pub use export::{csv_header, write_csv};
pub use order::{fd_threshold, verify_motion_order, MotionOrderReport};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DynamicsError {
    #[error("invalid step: {0}")]
    BadStep(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid Hamiltonian: {0}")]
    InvalidHamiltonian(String),
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("trajectory is not uniformly sampled")]
    NonUniformSampling,
    #[error(transparent)]
    Poisson(#[from] PoissonError),
    #[error("csv export failed: {0}")]
    Export(String),
}

/// Free Hamiltonian `h`, or the Newton-Hooke variant `h + sign * omega^2 * k`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum HamiltonianChoice {
    Free,
    NewtonHooke { omega: f64, sign: i8 },
}

impl HamiltonianChoice {
    pub fn validate(&self, pt: &PhasePoint) -> Result<(), DynamicsError> {
        if let HamiltonianChoice::NewtonHooke { omega, sign } = *self {
            if !(omega > 0.0) || !omega.is_finite() {
                return Err(DynamicsError::InvalidHamiltonian(format!(
                    "omega must be positive, got {omega}"
                )));
            }
            if sign != 1 && sign != -1 {
                return Err(DynamicsError::InvalidHamiltonian(format!(
                    "sign must be +1 or -1, got {sign}"
                )));
            }
            if pt.shape.n != 1 || pt.shape.dim != 3 {
                return Err(DynamicsError::Unsupported(
                    "Newton-Hooke dynamics is defined for N=1 in dimension 3 only".into(),
                ));
            }
        }
        Ok(())
    }

    /// Value of the Hamiltonian on given generator values.
    pub fn energy(&self, g: &DualVector) -> f64 {
        match *self {
            HamiltonianChoice::Free => g.h,
            HamiltonianChoice::NewtonHooke { omega, sign } => {
                g.h + f64::from(sign) * omega * omega * g.k
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Rk4,
    Closed,
}

/// Tangent vector `{z, H}` at `pt`, laid out as a phase point.
pub fn time_derivative(
    pt: &PhasePoint,
    ham: HamiltonianChoice,
) -> Result<PhasePoint, DynamicsError> {
    pt.validate()?;
    ham.validate(pt)?;
    let shape = pt.shape;
    let m = pt.m;
    let mut out = PhasePoint::zeros(shape, m);
    let pairs = shape.pairs();
    for k in 0..pairs {
        for a in 0..shape.dim {
            out.q[k][a] = if k + 1 < pairs {
                pt.q[k + 1][a]
            } else if shape.is_odd() {
                pt.p[k][a] / m
            } else {
                pt.q_half[a]
            };
            out.p[k][a] = if k == 0 { 0.0 } else { -pt.p[k - 1][a] };
        }
    }
    if shape.has_half() {
        out.q_half = quarter_turn(&pt.p[pairs - 1])
            .iter()
            .map(|v| v / m)
            .collect();
    }
    let chi = pt.chi;
    out.chi = [chi[2], chi[2], chi[0] - chi[1]];

    if let HamiltonianChoice::NewtonHooke { omega, sign } = ham {
        let w = f64::from(sign) * omega * omega;
        for a in 0..3 {
            out.p[0][a] -= w * m * pt.q[0][a];
        }
        out.chi[0] -= w * chi[2];
        out.chi[1] += w * chi[2];
        out.chi[2] -= w * (chi[0] + chi[1]);
    }
    Ok(out)
}

/// Samples of a trajectory with the generator and Casimir values recorded
/// at each sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub ham: HamiltonianChoice,
    pub times: Vec<f64>,
    pub states: Vec<PhasePoint>,
    pub generators: Vec<DualVector>,
    pub casimirs: Vec<Casimirs>,
}

impl Trajectory {
    pub fn from_states(ham: HamiltonianChoice, times: Vec<f64>, states: Vec<PhasePoint>) -> Self {
        let generators: Vec<DualVector> = states.iter().map(generators_at).collect();
        let casimirs = states
            .iter()
            .zip(&generators)
            .map(|(s, g)| {
                let [c1, c2, c3] = casimir_functions(s.shape, g);
                Casimirs { c1, c2, c3 }
            })
            .collect();
        Trajectory {
            ham,
            times,
            states,
            generators,
            casimirs,
        }
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Common step when the samples are uniform to relative accuracy 1e-9.
    pub fn uniform_step(&self) -> Option<f64> {
        if self.times.len() < 2 {
            return None;
        }
        let span = self.times[self.times.len() - 1] - self.times[0];
        let dt = span / (self.times.len() - 1) as f64;
        let uniform = self
            .times
            .windows(2)
            .all(|w| ((w[1] - w[0]) - dt).abs() <= 1e-9 * dt.abs().max(f64::MIN_POSITIVE));
        (uniform && dt > 0.0).then_some(dt)
    }

    /// Largest deviation from the first sample of each quantity that the
    /// chosen Hamiltonian conserves.
    pub fn conservation_drifts(&self) -> BTreeMap<String, f64> {
        let mut out = BTreeMap::new();
        let Some(first) = self.states.first() else {
            return out;
        };
        let g0 = &self.generators[0];
        let mut track = |name: &str, f: &dyn Fn(&PhasePoint, &DualVector) -> Vec<f64>| {
            let base = f(first, g0);
            let drift = self
                .states
                .iter()
                .zip(&self.generators)
                .map(|(s, g)| {
                    f(s, g)
                        .iter()
                        .zip(&base)
                        .fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()))
                })
                .fold(0.0, f64::max);
            out.insert(name.to_string(), drift);
        };
        track("m", &|s, _| vec![s.m]);
        track("spin", &|s, _| vec![s.spin_invariant()]);
        track("chi_square", &|s, _| vec![s.chi_square()]);
        track("j", &|_, g| g.j.clone());
        match self.ham {
            HamiltonianChoice::Free => {
                track("e", &|s, _| vec![s.chi[0] - s.chi[1]]);
                track("p0", &|s, _| s.p[0].clone());
                track("h", &|_, g| vec![g.h]);
            }
            ham @ HamiltonianChoice::NewtonHooke { .. } => {
                track("energy", &|_, g| vec![ham.energy(g)]);
            }
        }
        out
    }
}

fn sample_count(t_end: f64, dt: f64) -> Result<usize, DynamicsError> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(DynamicsError::BadStep(format!(
            "dt must be positive, got {dt}"
        )));
    }
    if !(t_end >= 0.0) || !t_end.is_finite() {
        return Err(DynamicsError::BadStep(format!(
            "T must be non-negative, got {t_end}"
        )));
    }
    if t_end == 0.0 {
        return Ok(0);
    }
    if dt > t_end {
        return Err(DynamicsError::BadStep(format!(
            "dt = {dt} exceeds T = {t_end}"
        )));
    }
    let steps = (t_end / dt).round();
    if (steps * dt - t_end).abs() > 1e-9 * t_end {
        return Err(DynamicsError::BadStep(format!(
            "T = {t_end} is not a multiple of dt = {dt}"
        )));
    }
    Ok(steps as usize)
}

fn axpy(z: &[f64], k: &[f64], h: f64) -> Vec<f64> {
    z.iter().zip(k).map(|(a, b)| a + h * b).collect()
}

fn rk4_step(pt: &PhasePoint, ham: HamiltonianChoice, dt: f64) -> Result<PhasePoint, DynamicsError> {
    let (shape, m) = (pt.shape, pt.m);
    let f = |z: &[f64]| -> Result<Vec<f64>, DynamicsError> {
        Ok(time_derivative(&PhasePoint::from_flat(shape, m, z)?, ham)?.to_flat())
    };
    let z = pt.to_flat();
    let k1 = f(&z)?;
    let k2 = f(&axpy(&z, &k1, dt / 2.0))?;
    let k3 = f(&axpy(&z, &k2, dt / 2.0))?;
    let k4 = f(&axpy(&z, &k3, dt))?;
    let next: Vec<f64> = (0..z.len())
        .map(|i| z[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect();
    Ok(PhasePoint::from_flat(shape, m, &next)?)
}

/// Samples at `t = 0, dt, ..., T`.
pub fn integrate(
    pt0: &PhasePoint,
    ham: HamiltonianChoice,
    t_end: f64,
    dt: f64,
    method: Method,
) -> Result<Trajectory, DynamicsError> {
    pt0.validate()?;
    ham.validate(pt0)?;
    let steps = sample_count(t_end, dt)?;
    if method == Method::Closed && ham != HamiltonianChoice::Free {
        return Err(DynamicsError::Unsupported(
            "closed form exists for the free Hamiltonian only".into(),
        ));
    }
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(pt0.clone());
    for i in 1..=steps {
        let t = i as f64 * dt;
        let next = match method {
            Method::Rk4 => rk4_step(&states[i - 1], ham, dt)?,
            Method::Closed => closed_form(pt0, ham, t)?,
        };
        times.push(t);
        states.push(next);
    }
    Ok(Trajectory::from_states(ham, times, states))
}
