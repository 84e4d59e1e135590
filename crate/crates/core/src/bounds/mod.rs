//! Dimension-distortion bounds as pure functions of `(dimension, distortion)`.
//!
//! Every function here works at the precision carried by its inputs. The
//! line-specific bounds combine three ingredients:
//!
//! * the two-sided estimate valid for all `K`-quasiconformal maps of the plane,
//! * the exponent maps `t(k)`, `t*(k)` for maps with antisymmetric dilatation,
//! * the function `Δ(d, k)` bounding symmetric maps (those preserving ℝ).
//!
//! The improved bounds split `K = K1·K2`, apply the line estimates to the
//! small `K2` factor and the general estimate to `K1`.

mod classic;
mod covering;
mod gaps;
pub(crate) mod theorems;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{QcError, Result};
use crate::numerics::{HPReal, Precision};

pub use classic::{
    antisymmetric_bounds, astala_bounds, astala_lower_at, astala_upper_at, composed_line_bounds,
    composed_lower_at, composed_upper_at, delta, delta_star, exponent_maps, harnack_interval,
    symmetric_bounds,
};
pub use covering::{covering_constants, CoveringConstants};
pub use gaps::{gap, gap_value, gap_value_direct, GapKind, GapSample};
pub use theorems::{
    balance_root, improved_lower_bound, improved_upper_bound, lower_schedule, lower_split_point,
    upper_case_boundary, upper_schedule, upper_split_point, LOWER_K_THRESHOLD, UPPER_K_THRESHOLD,
};

/// Paired distortion parameters `k = (K-1)/(K+1)`, `K = (1+k)/(1-k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Distortion {
    k: HPReal,
    big_k: HPReal,
}

impl Distortion {
    /// From the dilatation coefficient `k ∈ [0, 1)`.
    pub fn from_k(k: HPReal) -> Result<Self> {
        if k.is_negative() || k >= HPReal::one(k.precision()) || !k.is_finite() {
            return Err(QcError::Domain(format!("k must lie in [0, 1), got {}", k.to_sci_string(12))));
        }
        let big_k = (HPReal::one(k.precision()) + &k) / (HPReal::one(k.precision()) - &k);
        Ok(Distortion { k, big_k })
    }

    /// From the distortion `K ≥ 1`.
    pub fn from_big_k(big_k: HPReal) -> Result<Self> {
        if big_k < HPReal::one(big_k.precision()) || !big_k.is_finite() {
            return Err(QcError::Domain(format!("K must be at least 1, got {}", big_k.to_sci_string(12))));
        }
        let k = (&big_k - 1) / (&big_k + 1);
        Ok(Distortion { k, big_k })
    }

    pub fn identity(prec: Precision) -> Self {
        Distortion { k: HPReal::zero(prec), big_k: HPReal::one(prec) }
    }

    pub fn k(&self) -> &HPReal {
        &self.k
    }

    #[allow(non_snake_case)]
    pub fn K(&self) -> &HPReal {
        &self.big_k
    }

    pub fn precision(&self) -> Precision {
        self.k.precision()
    }
}

/// A dimension value `t ∈ (0, 2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionValue(HPReal);

impl DimensionValue {
    pub fn new(t: HPReal) -> Result<Self> {
        if !t.is_positive() || t > HPReal::from_i64(2, t.precision()) {
            return Err(QcError::Domain(format!(
                "dimension must lie in (0, 2], got {}",
                t.to_sci_string(12)
            )));
        }
        Ok(DimensionValue(t))
    }

    pub fn parse(s: &str, prec: Precision) -> Result<Self> {
        Self::new(HPReal::parse(s, prec)?)
    }

    pub fn value(&self) -> &HPReal {
        &self.0
    }

    pub(crate) fn require_at_most_one(&self, what: &str) -> Result<()> {
        if self.0 > HPReal::one(self.0.precision()) {
            return Err(QcError::Domain(format!(
                "{what} is stated for subsets of the line: dimension must lie in (0, 1], got {}",
                self.0.to_sci_string(12)
            )));
        }
        Ok(())
    }
}

/// Which estimate produced a [`BoundSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMethod {
    /// General planar two-sided estimate.
    Astala,
    /// Exponent maps `t*(k) ≤ dim ≤ t(k)` for antisymmetric dilatation.
    Antisymmetric,
    /// `Δ(d, k) ≤ dim ≤ Δ*(d, k)` for maps preserving the line.
    Symmetric,
    /// Symmetric/antisymmetric factorization with the quasicircle cap.
    ComposedLine,
    /// Split `K = K1·K2` improving the lower estimate.
    ImprovedLower,
    /// Split `K = K1·K2` improving the upper estimate.
    ImprovedUpper,
}

impl BoundMethod {
    pub const ALL: [BoundMethod; 6] = [
        BoundMethod::Astala,
        BoundMethod::Antisymmetric,
        BoundMethod::Symmetric,
        BoundMethod::ComposedLine,
        BoundMethod::ImprovedLower,
        BoundMethod::ImprovedUpper,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundMethod::Astala => "astala",
            BoundMethod::Antisymmetric => "antisymmetric",
            BoundMethod::Symmetric => "symmetric",
            BoundMethod::ComposedLine => "composed_line",
            BoundMethod::ImprovedLower => "improved_lower",
            BoundMethod::ImprovedUpper => "improved_upper",
        }
    }

    /// Whether the estimate holds for maps commuting with complex
    /// conjugation. Only the antisymmetric exponents are restricted to a
    /// different class.
    pub fn applies_to_symmetric_maps(self) -> bool {
        !matches!(self, BoundMethod::Antisymmetric)
    }

    /// Evaluates this method at `(t, d)`.
    pub fn evaluate(self, t: &DimensionValue, d: &Distortion) -> Result<BoundSet> {
        match self {
            BoundMethod::Astala => Ok(astala_bounds(t, d)),
            BoundMethod::Antisymmetric => antisymmetric_bounds(t, d),
            BoundMethod::Symmetric => symmetric_bounds(t, d),
            BoundMethod::ComposedLine => composed_line_bounds(t, d),
            BoundMethod::ImprovedLower => improved_lower_bound(t, d),
            BoundMethod::ImprovedUpper => improved_upper_bound(t, d),
        }
    }
}

impl fmt::Display for BoundMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BoundMethod {
    type Err = QcError;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('-', "_");
        Ok(match norm.as_str() {
            "astala" => BoundMethod::Astala,
            "antisymmetric" => BoundMethod::Antisymmetric,
            "symmetric" => BoundMethod::Symmetric,
            "composed_line" | "composed" | "line" => BoundMethod::ComposedLine,
            "improved_lower" | "theorem42" => BoundMethod::ImprovedLower,
            "improved_upper" | "theorem43" => BoundMethod::ImprovedUpper,
            _ => return Err(QcError::Parse(format!("unknown bound method {s:?}"))),
        })
    }
}

/// The split `K = K1·K2` used by the improved bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionSplit {
    pub k2: HPReal,
    pub big_k2: HPReal,
    pub big_k1: HPReal,
    pub parent: Distortion,
}

impl DecompositionSplit {
    /// Splits `parent` at `k2 ∈ [0, k]`.
    pub fn new(parent: &Distortion, k2: HPReal) -> Result<Self> {
        if k2.is_negative() || &k2 > parent.k() {
            return Err(QcError::Domain(format!(
                "k2 must lie in [0, k] = [0, {}], got {}",
                parent.k().to_sci_string(12),
                k2.to_sci_string(12)
            )));
        }
        let one = HPReal::one(k2.precision());
        let big_k2 = (&one + &k2) / (&one - &k2);
        let big_k1 = parent.K() / &big_k2;
        Ok(DecompositionSplit { k2, big_k2, big_k1, parent: parent.clone() })
    }
}

/// A named lower/upper bound pair for one `(dimension, distortion)` query.
#[derive(Debug, Clone)]
pub struct BoundSet {
    pub input_dim: DimensionValue,
    pub distortion: Distortion,
    pub lower: HPReal,
    pub upper: HPReal,
    pub method: BoundMethod,
    pub hypotheses_met: bool,
    pub notes: String,
    /// For the improved bounds: how far the improved side beats the
    /// corresponding general estimate, computed without cancellation.
    /// Positive means a strict improvement.
    pub astala_margin: Option<HPReal>,
    pub split: Option<DecompositionSplit>,
}

impl BoundSet {
    pub(crate) fn plain(
        t: &DimensionValue,
        d: &Distortion,
        lower: HPReal,
        upper: HPReal,
        method: BoundMethod,
    ) -> Self {
        BoundSet {
            input_dim: t.clone(),
            distortion: d.clone(),
            lower,
            upper,
            method,
            hypotheses_met: true,
            notes: String::new(),
            astala_margin: None,
            split: None,
        }
    }

    /// Turns a flagged result into an error.
    pub fn require_hypotheses(self) -> Result<Self> {
        if self.hypotheses_met {
            Ok(self)
        } else {
            Err(QcError::Hypothesis(format!("{}: {}", self.method, self.notes)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::default()
    }

    #[test]
    fn distortion_pairs() {
        let d = Distortion::from_big_k(HPReal::from_i64(3, p())).unwrap();
        assert!((d.k() - HPReal::lit("0.5", p())).abs() < p().resolution(2));
        let e = Distortion::from_k(HPReal::lit("0.5", p())).unwrap();
        assert!((e.K() - HPReal::from_i64(3, p())).abs() < p().resolution(2));
        assert!(Distortion::from_k(HPReal::one(p())).is_err());
        assert!(Distortion::from_k(HPReal::lit("-0.1", p())).is_err());
        assert!(Distortion::from_big_k(HPReal::lit("0.99", p())).is_err());
    }

    #[test]
    fn dimension_domain() {
        assert!(DimensionValue::parse("0", p()).is_err());
        assert!(DimensionValue::parse("2", p()).is_ok());
        assert!(DimensionValue::parse("2.0000001", p()).is_err());
        assert!(DimensionValue::parse("-1", p()).is_err());
    }

    #[test]
    fn method_names_round_trip() {
        for m in BoundMethod::ALL {
            assert_eq!(m.as_str().parse::<BoundMethod>().unwrap(), m);
        }
        assert_eq!("theorem42".parse::<BoundMethod>().unwrap(), BoundMethod::ImprovedLower);
        assert_eq!("theorem43".parse::<BoundMethod>().unwrap(), BoundMethod::ImprovedUpper);
        assert!("bogus".parse::<BoundMethod>().is_err());
    }

    #[test]
    fn split_multiplies_back() {
        let d = Distortion::from_big_k(HPReal::from_i64(2, p())).unwrap();
        let s = DecompositionSplit::new(&d, HPReal::lit("1e-10", p())).unwrap();
        assert!((&s.big_k1 * &s.big_k2 - d.K()).abs() < p().resolution(2));
        assert!(s.big_k1 >= HPReal::one(p()) && s.big_k2 >= HPReal::one(p()));
        assert!(DecompositionSplit::new(&d, HPReal::lit("0.9", p())).is_err());
    }
}
