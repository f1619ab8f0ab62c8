//! Shared report plumbing: floats serialize with 17 significant digits so
//! JSON output round-trips doubles exactly and is byte-stable across runs.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Report float. Serializes as a JSON number printed as `d.dddd…e±k` with 17
/// significant digits (enough to pin down any f64 uniquely).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fp(pub f64);

impl Fp {
    pub fn digits(&self) -> String {
        format!("{:.16e}", self.0)
    }
}

impl From<f64> for Fp {
    fn from(v: f64) -> Self {
        Fp(v)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.digits())
    }
}

impl Serialize for Fp {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(serde::ser::Error::custom("non-finite value in report"));
        }
        let num: serde_json::Number = self
            .digits()
            .parse()
            .map_err(serde::ser::Error::custom)?;
        num.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Fp {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        f64::deserialize(d).map(Fp)
    }
}

pub fn fp3(v: [f64; 3]) -> [Fp; 3] {
    [Fp(v[0]), Fp(v[1]), Fp(v[2])]
}

pub fn fp3x3(m: [[f64; 3]; 3]) -> [[Fp; 3]; 3] {
    m.map(fp3)
}

/// Crate version stamped into reports.
pub fn tool_version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}
