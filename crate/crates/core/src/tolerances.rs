//! Named tolerances used by the claim checks and the sandwich probe.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{QcError, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tolerances {
    /// Absolute, on the root of `x^60 = (1-x)^27`.
    pub x0: f64,
    /// Absolute, on the root of `x^99 = (1-x)^49`.
    pub y0: f64,
    /// Absolute, on positivity-range endpoints.
    pub range: f64,
    /// Relative, on the schedule thresholds.
    pub threshold: f64,
    /// Relative, on the `g2` point value.
    pub g2: f64,
    /// Absolute slack around each bound in the sandwich check.
    pub sandwich: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { x0: 5e-7, y0: 5e-5, range: 5e-3, threshold: 0.05, g2: 0.01, sandwich: 0.05 }
    }
}

impl Tolerances {
    pub const KEYS: [&'static str; 6] = ["x0", "y0", "range", "threshold", "g2", "sandwich"];

    /// Applies `key=value` overrides. Unknown keys and non-positive values
    /// are rejected.
    pub fn with_overrides(mut self, overrides: &BTreeMap<String, f64>) -> Result<Self> {
        for (key, &value) in overrides {
            if !(value.is_finite() && value > 0.0) {
                return Err(QcError::Parse(format!("tolerance {key} must be positive, got {value}")));
            }
            let slot = match key.as_str() {
                "x0" => &mut self.x0,
                "y0" => &mut self.y0,
                "range" => &mut self.range,
                "threshold" => &mut self.threshold,
                "g2" => &mut self.g2,
                "sandwich" => &mut self.sandwich,
                other => {
                    return Err(QcError::Parse(format!(
                        "unknown tolerance key {other:?} (known: {})",
                        Self::KEYS.join(", ")
                    )))
                }
            };
            *slot = value;
        }
        Ok(self)
    }
}

/// Parses one `key=value` override.
pub fn parse_override(s: &str) -> Result<(String, f64)> {
    let (key, value) = s
        .split_once('=')
        .ok_or_else(|| QcError::Parse(format!("expected key=value, got {s:?}")))?;
    let key = key.trim();
    if !Tolerances::KEYS.contains(&key) {
        return Err(QcError::Parse(format!(
            "unknown tolerance key {key:?} (known: {})",
            Tolerances::KEYS.join(", ")
        )));
    }
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|_| QcError::Parse(format!("tolerance {key}: not a number: {value:?}")))?;
    Ok((key.to_string(), value))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides() {
        let mut m = BTreeMap::new();
        m.insert("range".to_string(), 1e-2);
        let t = Tolerances::default().with_overrides(&m).unwrap();
        assert_eq!(t.range, 1e-2);
        assert_eq!(t.x0, 5e-7);
        m.insert("bogus".to_string(), 1.0);
        assert!(Tolerances::default().with_overrides(&m).is_err());
    }

    #[test]
    fn parse_pairs() {
        assert_eq!(parse_override("g2=0.02").unwrap(), ("g2".to_string(), 0.02));
        assert!(parse_override("g2").is_err());
        assert!(parse_override("nope=1").is_err());
        assert!(parse_override("g2=abc").is_err());
    }
}
