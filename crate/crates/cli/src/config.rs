use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use ngca_core::algebra::build_algebra;
use ngca_core::coadjoint::{
    chi_representative, classify_orbit, OrbitClass, OrbitLabel, OrbitTag, DEFAULT_CLASSIFY_TOL,
};
use ngca_core::dynamics::{HamiltonianChoice, Method};
use ngca_core::poisson::{External, PhasePoint};
use ngca_core::Shape;

use crate::CliError;

/// Allowances for every verified property.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    #[serde(rename = "tol_coadjoint_oracle")]
    pub coadjoint_oracle: f64,
    #[serde(rename = "tol_casimir")]
    pub casimir: f64,
    #[serde(rename = "tol_label_casimir")]
    pub label_casimir: f64,
    #[serde(rename = "tol_closure")]
    pub closure: f64,
    #[serde(rename = "tol_generator_routes")]
    pub generator_routes: f64,
    #[serde(rename = "tol_hamiltonian")]
    pub hamiltonian: f64,
    #[serde(rename = "tol_rk4_vs_closed")]
    pub rk4_vs_closed: f64,
    #[serde(rename = "tol_fit_closed")]
    pub fit_closed: f64,
    #[serde(rename = "tol_fit_rk4")]
    pub fit_rk4: f64,
    #[serde(rename = "tol_conservation")]
    pub conservation: f64,
    #[serde(rename = "tol_integrals_closed")]
    pub integrals_closed: f64,
    #[serde(rename = "tol_integrals_rk4")]
    pub integrals_rk4: f64,
    #[serde(rename = "tol_newton_hooke_position")]
    pub newton_hooke_position: f64,
    #[serde(rename = "tol_newton_hooke_energy")]
    pub newton_hooke_energy: f64,
    #[serde(rename = "tol_column")]
    pub column: f64,
    #[serde(rename = "tol_group_law")]
    pub group_law: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            coadjoint_oracle: 1e-10,
            casimir: 1e-10,
            label_casimir: 1e-10,
            closure: 1e-9,
            generator_routes: 1e-10,
            hamiltonian: 1e-10,
            rk4_vs_closed: 1e-8,
            fit_closed: 1e-10,
            fit_rk4: 1e-7,
            conservation: 1e-8,
            integrals_closed: 1e-12,
            integrals_rk4: 1e-8,
            newton_hooke_position: 1e-6,
            newton_hooke_energy: 1e-8,
            column: 1e-9,
            group_law: 1e-12,
        }
    }
}

impl Tolerances {
    pub fn keys() -> Vec<String> {
        match serde_json::to_value(Tolerances::default()) {
            Ok(serde_json::Value::Object(map)) => map.keys().cloned().collect(),
            _ => Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let v = serde_json::to_value(self).map_err(|e| CliError::Invalid(e.to_string()))?;
        for (k, x) in v.as_object().into_iter().flatten() {
            match x.as_f64() {
                Some(t) if t >= 0.0 => {}
                _ => {
                    return Err(CliError::Invalid(format!(
                        "{k} must be a non-negative number"
                    )))
                }
            }
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = read(path)?;
        let tol: Tolerances = serde_json::from_str(&text)
            .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
        tol.validate()?;
        Ok(tol)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpinSpec {
    Scalar(f64),
    Vector(Vec<f64>),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HamiltonianTag {
    #[default]
    Free,
    NewtonHooke,
}

fn default_tag() -> OrbitTag {
    OrbitTag::Origin
}

fn default_dt() -> f64 {
    1e-3
}

fn default_t() -> f64 {
    1.0
}

fn default_method() -> Method {
    Method::Rk4
}

/// Flat JSON run configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(rename = "N")]
    pub n: usize,
    pub dim: usize,
    pub m: f64,
    /// Scalar spin in dimension 2; in dimension 3 either `|s|` (along axis 3)
    /// or the vector.
    #[serde(default)]
    pub s: Option<SpinSpec>,
    #[serde(default = "default_tag")]
    pub chi_class: OrbitTag,
    #[serde(default)]
    pub sigma: f64,
    #[serde(default)]
    pub chi: Option<[f64; 3]>,
    #[serde(default)]
    pub q: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub p: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub q_half: Option<Vec<f64>>,
    #[serde(default)]
    pub hamiltonian: HamiltonianTag,
    #[serde(default)]
    pub omega: Option<f64>,
    #[serde(default)]
    pub sign: Option<i8>,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(rename = "T", default = "default_t")]
    pub t_end: f64,
    #[serde(default = "default_method")]
    pub method: Method,
    #[serde(default)]
    pub csv: Option<PathBuf>,
    #[serde(default)]
    pub json: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
    #[serde(flatten)]
    pub tolerances: Tolerances,
}

/// A validated configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct Prepared {
    pub config: RunConfig,
    pub shape: Shape,
    pub label: OrbitLabel,
    pub point: PhasePoint,
    pub ham: HamiltonianChoice,
}

const CONFIG_KEYS: [&str; 19] = [
    "N",
    "dim",
    "m",
    "s",
    "chi_class",
    "sigma",
    "chi",
    "q",
    "p",
    "q_half",
    "hamiltonian",
    "omega",
    "sign",
    "dt",
    "T",
    "method",
    "csv",
    "json",
    "seed",
];

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Invalid(msg.into())
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        Self::from_json(&read(path)?)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| invalid(format!("config: {e}")))?;
        let obj = value
            .as_object()
            .ok_or_else(|| invalid("config must be a JSON object"))?;
        let tol_keys = Tolerances::keys();
        let known: BTreeSet<&str> = CONFIG_KEYS
            .iter()
            .copied()
            .chain(tol_keys.iter().map(String::as_str))
            .collect();
        if let Some(k) = obj.keys().find(|k| !known.contains(k.as_str())) {
            return Err(invalid(format!("config: unknown key `{k}`")));
        }
        serde_json::from_value(value).map_err(|e| invalid(format!("config: {e}")))
    }

    fn spin(&self, shape: Shape) -> Result<Vec<f64>, CliError> {
        let s = match (&self.s, shape.dim) {
            (None, d) => vec![0.0; if d == 3 { 3 } else { 1 }],
            (Some(SpinSpec::Scalar(v)), 2) => vec![*v],
            (Some(SpinSpec::Scalar(v)), _) => vec![0.0, 0.0, *v],
            (Some(SpinSpec::Vector(v)), d) if v.len() == shape.spin_len() && d == 3 => v.clone(),
            (Some(SpinSpec::Vector(v)), _) => {
                return Err(invalid(format!(
                    "s has {} components, expected {}",
                    v.len(),
                    shape.spin_len()
                )))
            }
        };
        if s.iter().any(|v| !v.is_finite()) {
            return Err(invalid("s must be finite"));
        }
        Ok(s)
    }

    fn class(&self) -> Result<(OrbitClass, [f64; 3]), CliError> {
        if self.chi_class.has_sigma() && !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(invalid(format!("{:?} needs sigma > 0", self.chi_class)));
        }
        let class = OrbitClass::new(self.chi_class, self.sigma);
        let Some(chi) = self.chi else {
            return Ok((class, chi_representative(&class)));
        };
        let found =
            classify_orbit(&chi, DEFAULT_CLASSIFY_TOL).map_err(|e| invalid(e.to_string()))?;
        let same_sigma =
            (found.sigma - class.sigma).abs() <= DEFAULT_CLASSIFY_TOL * class.sigma.max(1.0);
        if found.tag != class.tag || !same_sigma {
            return Err(invalid(format!(
                "chi = {chi:?} lies on {:?} (sigma {}), not on {:?} (sigma {})",
                found.tag, found.sigma, class.tag, class.sigma
            )));
        }
        Ok((class, chi))
    }

    fn levels(
        &self,
        name: &str,
        rows: &Option<Vec<Vec<f64>>>,
        shape: Shape,
    ) -> Result<Vec<Vec<f64>>, CliError> {
        let pairs = shape.pairs();
        let Some(rows) = rows else {
            return Ok(vec![vec![0.0; shape.dim]; pairs]);
        };
        if rows.len() != pairs || rows.iter().any(|r| r.len() != shape.dim) {
            return Err(invalid(format!(
                "{name} must be {pairs} rows of {} numbers",
                shape.dim
            )));
        }
        Ok(rows.clone())
    }

    pub fn hamiltonian(&self) -> Result<HamiltonianChoice, CliError> {
        Ok(match self.hamiltonian {
            HamiltonianTag::Free => HamiltonianChoice::Free,
            HamiltonianTag::NewtonHooke => HamiltonianChoice::NewtonHooke {
                omega: self
                    .omega
                    .ok_or_else(|| invalid("newton_hooke needs omega"))?,
                sign: self.sign.unwrap_or(1),
            },
        })
    }

    pub fn prepare(&self) -> Result<Prepared, CliError> {
        let dim = u8::try_from(self.dim).map_err(|_| invalid("dim must be 2 or 3"))?;
        let n = u32::try_from(self.n).map_err(|_| invalid("N out of range"))?;
        build_algebra(n, dim, true, false).map_err(|e| invalid(e.to_string()))?;
        let shape = Shape::new(self.n, self.dim).map_err(|e| invalid(e.to_string()))?;
        if !(self.m > 0.0 && self.m.is_finite()) {
            return Err(invalid(format!("m must be positive, got {}", self.m)));
        }
        self.tolerances.validate()?;
        let s = self.spin(shape)?;
        let (class, chi) = self.class()?;
        let q = self.levels("q", &self.q, shape)?;
        let p = self.levels("p", &self.p, shape)?;
        let q_half = match (&self.q_half, shape.has_half()) {
            (None, true) => vec![0.0; shape.dim],
            (None, false) => Vec::new(),
            (Some(v), true) if v.len() == shape.dim => v.clone(),
            (Some(_), true) => {
                return Err(invalid(format!("q_half must have {} numbers", shape.dim)))
            }
            (Some(_), false) => return Err(invalid("q_half exists only for even N")),
        };
        let point =
            PhasePoint::with_external(shape, self.m, External { q, p, q_half }, s.clone(), chi);
        if !point.is_finite() {
            return Err(invalid("coordinates must be finite"));
        }
        let ham = self.hamiltonian()?;
        ham.validate(&point).map_err(|e| invalid(e.to_string()))?;
        let s2 = if shape.dim == 3 {
            s.iter().map(|v| v * v).sum()
        } else {
            s[0]
        };
        Ok(Prepared {
            config: self.clone(),
            shape,
            label: OrbitLabel {
                m: self.m,
                s2,
                chi_class: class,
            },
            point,
            ham,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config() {
        let cfg = RunConfig::from_json(r#"{"N": 1, "dim": 3, "m": 1.0}"#).unwrap();
        assert_eq!(cfg.dt, 1e-3);
        assert_eq!(cfg.method, Method::Rk4);
        let prep = cfg.prepare().unwrap();
        assert_eq!(prep.point.chi, [0.0; 3]);
        assert_eq!(prep.ham, HamiltonianChoice::Free);
    }

    #[test]
    fn rejects_bad_configs() {
        let bad = [
            r#"{"N": 2, "dim": 3, "m": 1.0}"#,
            r#"{"N": 1, "dim": 3, "m": 0.0}"#,
            r#"{"N": 1, "dim": 3, "m": 1.0, "colour": 1}"#,
            r#"{"N": 1, "dim": 3, "m": 1.0, "chi_class": "HplusSigma"}"#,
            r#"{"N": 1, "dim": 3, "m": 1.0, "chi_class": "HplusSigma", "sigma": 1.0, "chi": [2.0, 0.0, 0.0]}"#,
            r#"{"N": 1, "dim": 3, "m": 1.0, "q": [[1.0, 2.0]]}"#,
            r#"{"N": 3, "dim": 3, "m": 1.0, "hamiltonian": "newton_hooke", "omega": 1.0}"#,
            r#"{"N": 1, "dim": 3, "m": 1.0, "tol_closure": -1.0}"#,
        ];
        for text in bad {
            let result = RunConfig::from_json(text).and_then(|c| c.prepare());
            assert!(matches!(result, Err(CliError::Invalid(_))), "{text}");
        }
    }

    #[test]
    fn explicit_chi_on_its_class() {
        let cfg = RunConfig::from_json(
            r#"{"N": 2, "dim": 2, "m": 2.0, "s": 0.5, "chi_class": "HyperbolicSigma", "sigma": 1.0, "chi": [0.0, 0.6, 0.8]}"#,
        )
        .unwrap();
        let prep = cfg.prepare().unwrap();
        assert_eq!(prep.label.s2, 0.5);
        assert_eq!(prep.point.chi, [0.0, 0.6, 0.8]);
    }

    #[test]
    fn tolerance_override() {
        let cfg =
            RunConfig::from_json(r#"{"N": 1, "dim": 3, "m": 1.0, "tol_closure": 1e-6}"#).unwrap();
        assert_eq!(cfg.tolerances.closure, 1e-6);
        assert_eq!(cfg.tolerances.casimir, 1e-10);
    }
}
