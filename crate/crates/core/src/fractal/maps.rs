use std::fmt;
use std::str::FromStr;

use crate::error::{QcError, Result};
use crate::fractal::IntervalCover;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryClass {
    /// Commutes with complex conjugation, hence maps ℝ to ℝ.
    Symmetric,
}

/// Planar quasiconformal maps with an explicit monotone trace on ℝ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelMap {
    Identity,
    /// `x ↦ a·x + b`, `a ≠ 0`.
    Affine { a: f64, b: f64 },
    /// Trace `x ↦ sign(x)|x|^a` of the radial stretch `z|z|^{a-1}`, `a ≥ 1`.
    PowerStretch { a: f64 },
}

impl ModelMap {
    pub fn affine(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a != 0.0) {
            return Err(QcError::Domain(format!("affine map needs finite a != 0 and finite b, got {a}, {b}")));
        }
        Ok(ModelMap::Affine { a, b })
    }

    pub fn power(a: f64) -> Result<Self> {
        if !(a.is_finite() && a >= 1.0) {
            return Err(QcError::Domain(format!("power stretch needs a >= 1, got {a}")));
        }
        Ok(ModelMap::PowerStretch { a })
    }

    /// `K` of the planar map. The radial stretch `z|z|^{a-1}` stretches
    /// radially by `a` relative to the angular direction.
    pub fn distortion_k(&self) -> f64 {
        match self {
            ModelMap::Identity | ModelMap::Affine { .. } => 1.0,
            ModelMap::PowerStretch { a } => *a,
        }
    }

    pub fn symmetry_class(&self) -> SymmetryClass {
        SymmetryClass::Symmetric
    }

    pub fn trace(&self, x: f64) -> f64 {
        match *self {
            ModelMap::Identity => x,
            ModelMap::Affine { a, b } => a * x + b,
            ModelMap::PowerStretch { a } => x.signum() * x.abs().powf(a),
        }
    }
}

impl fmt::Display for ModelMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelMap::Identity => f.write_str("identity"),
            ModelMap::Affine { a, b } => write!(f, "affine:{a}:{b}"),
            ModelMap::PowerStretch { a } => write!(f, "power:{a}"),
        }
    }
}

/// `identity`, `affine:a:b` or `power:a`.
impl FromStr for ModelMap {
    type Err = QcError;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').map(str::trim).collect();
        let num = |p: &str| p.parse::<f64>().map_err(|_| QcError::Parse(format!("bad number {p:?} in map {s:?}")));
        match parts.as_slice() {
            ["identity"] | ["id"] => Ok(ModelMap::Identity),
            ["affine", a, b] => ModelMap::affine(num(a)?, num(b)?),
            ["power", a] => ModelMap::power(num(a)?),
            _ => Err(QcError::Parse(format!("unknown map {s:?}; use identity, affine:a:b or power:a"))),
        }
    }
}

/// The maps used by the sandwich soundness probe.
pub fn catalogue() -> Vec<ModelMap> {
    vec![
        ModelMap::Identity,
        ModelMap::Affine { a: 2.0, b: 1.0 },
        ModelMap::Affine { a: -0.5, b: 3.0 },
        ModelMap::PowerStretch { a: 1.5 },
        ModelMap::PowerStretch { a: 2.0 },
        ModelMap::PowerStretch { a: 4.0 },
    ]
}

/// Maps every interval through the monotone trace.
pub fn apply_map(map: &ModelMap, cover: &IntervalCover) -> Result<IntervalCover> {
    if let ModelMap::PowerStretch { .. } = map {
        if let Some(&(a, b)) = cover.intervals.iter().find(|(a, b)| *a < 0.0 && *b > 0.0) {
            return Err(QcError::Domain(format!(
                "interval [{a}, {b}] straddles 0; split it before applying {map}"
            )));
        }
    }
    let mut intervals: Vec<(f64, f64)> = cover
        .intervals
        .iter()
        .map(|&(a, b)| {
            let (fa, fb) = (map.trace(a), map.trace(b));
            (fa.min(fb), fa.max(fb))
        })
        .collect();
    if matches!(map, ModelMap::Affine { a, .. } if *a < 0.0) {
        intervals.reverse();
    }
    Ok(IntervalCover { intervals, generation: cover.generation })
}
