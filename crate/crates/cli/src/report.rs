use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

/// One measured property against its allowance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Case {
    pub name: String,
    pub measured: f64,
    pub allowed: f64,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

/// Machine-readable verification report. Cases are sorted by name.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub passed: bool,
    pub cases: Vec<Case>,
    #[serde(skip_serializing_if = "serde_json::Map::is_empty")]
    pub data: serde_json::Map<String, serde_json::Value>,
}

impl Report {
    pub fn new(command: impl Into<String>, seed: Option<u64>) -> Self {
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            seed,
            passed: true,
            cases: Vec::new(),
            data: serde_json::Map::new(),
        }
    }

    /// Records `measured <= allowed`; NaN never passes.
    pub fn check(&mut self, name: impl Into<String>, measured: f64, allowed: f64) -> bool {
        self.check_with(name, measured, allowed, None)
    }

    pub fn check_with(
        &mut self,
        name: impl Into<String>,
        measured: f64,
        allowed: f64,
        detail: Option<String>,
    ) -> bool {
        let passed = measured <= allowed;
        self.cases.push(Case {
            name: name.into(),
            measured,
            allowed,
            passed,
            detail,
        });
        passed
    }

    /// Records a case that could not be measured.
    pub fn error(&mut self, name: impl Into<String>, allowed: f64, detail: String) {
        self.cases.push(Case {
            name: name.into(),
            measured: f64::INFINITY,
            allowed,
            passed: false,
            detail: Some(detail),
        });
    }

    pub fn insert(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("report data serializes");
        self.data.insert(key.to_string(), v);
    }

    pub fn finish(mut self) -> Self {
        self.cases.sort_by(|a, b| a.name.cmp(&b.name));
        self.passed = self.cases.iter().all(|c| c.passed);
        self
    }

    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&json_safe(self)).expect("report serializes")
    }
}

/// Infinite and NaN measurements are written as strings.
fn json_safe(report: &Report) -> serde_json::Value {
    let mut v = serde_json::to_value(report).expect("report serializes");
    if let Some(cases) = v.get_mut("cases").and_then(|c| c.as_array_mut()) {
        for (case, src) in cases.iter_mut().zip(&report.cases) {
            for (key, x) in [("measured", src.measured), ("allowed", src.allowed)] {
                if !x.is_finite() {
                    case[key] = serde_json::Value::String(x.to_string());
                }
            }
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sorted_and_failing() {
        let mut r = Report::new("verify", Some(1));
        r.check("b", 1.0, 2.0);
        r.check("a", f64::NAN, 1.0);
        let r = r.finish();
        assert_eq!(r.cases[0].name, "a");
        assert!(!r.passed);
        let json = r.to_json();
        assert!(json.contains("\"measured\": \"NaN\""));
        assert!(json.contains("\"schema_version\": 1"));
    }
}
