use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Basis element of an N-Galilean conformal algebra.
///
/// Axes are 1-based (`1..=dim`). In two spatial dimensions the rotation
/// generator is a scalar and carries no axis, written `J(None)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GeneratorId {
    J(Option<u8>),
    C { level: u32, axis: u8 },
    H,
    D,
    K,
    M,
    Ds,
}

impl GeneratorId {
    pub const fn c(level: u32, axis: u8) -> Self {
        GeneratorId::C { level, axis }
    }

    pub const fn j(axis: u8) -> Self {
        GeneratorId::J(Some(axis))
    }

    pub fn kind(&self) -> &'static str {
        match self {
            GeneratorId::J(_) => "J",
            GeneratorId::C { .. } => "C",
            GeneratorId::H => "H",
            GeneratorId::D => "D",
            GeneratorId::K => "K",
            GeneratorId::M => "M",
            GeneratorId::Ds => "Ds",
        }
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorId::J(Some(a)) => write!(f, "J{a}"),
            GeneratorId::J(None) => write!(f, "J"),
            GeneratorId::C { level, axis } => write!(f, "C{level}.{axis}"),
            other => f.write_str(other.kind()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("cannot parse generator name `{0}`")]
pub struct ParseGeneratorError(pub String);

impl FromStr for GeneratorId {
    type Err = ParseGeneratorError;

    /// Accepts `J`, `J1`..`J3`, `C<level>.<axis>`, `H`, `D`, `K`, `M`, `Ds`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseGeneratorError(s.to_string());
        match s {
            "J" => return Ok(GeneratorId::J(None)),
            "H" => return Ok(GeneratorId::H),
            "D" => return Ok(GeneratorId::D),
            "K" => return Ok(GeneratorId::K),
            "M" => return Ok(GeneratorId::M),
            "Ds" => return Ok(GeneratorId::Ds),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix('J') {
            let axis: u8 = rest.parse().map_err(|_| err())?;
            if axis == 0 {
                return Err(err());
            }
            return Ok(GeneratorId::J(Some(axis)));
        }
        if let Some(rest) = s.strip_prefix('C') {
            let (level, axis) = rest.split_once('.').ok_or_else(err)?;
            let level: u32 = level.parse().map_err(|_| err())?;
            let axis: u8 = axis.parse().map_err(|_| err())?;
            if axis == 0 {
                return Err(err());
            }
            return Ok(GeneratorId::C { level, axis });
        }
        Err(err())
    }
}

impl Serialize for GeneratorId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GeneratorId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_parse_round_trip() {
        for g in [
            GeneratorId::J(None),
            GeneratorId::j(2),
            GeneratorId::c(7, 3),
            GeneratorId::H,
            GeneratorId::D,
            GeneratorId::K,
            GeneratorId::M,
            GeneratorId::Ds,
        ] {
            assert_eq!(g.to_string().parse::<GeneratorId>().unwrap(), g);
        }
    }

    #[test]
    fn rejects_garbage() {
        for s in ["", "X", "J0", "C1", "C1.0", "Cx.1", "Dss"] {
            assert!(s.parse::<GeneratorId>().is_err(), "{s}");
        }
    }
}
