//! Gap functions comparing the line estimates at split parameter `k2` with
//! the general estimate at `K2 = (1+k2)/(1-k2)`.
//!
//! * `g0`: line lower estimate minus general lower estimate,
//! * `g1`: general upper estimate minus the line upper estimate,
//! * `g2`: general upper estimate minus the quasicircle cap `1 + k2²`.
//!
//! `g0` and `g1` vanish to first order at `k2 = 0`, and the schedules that
//! matter push `k2` down to `1e-150` and below. Subtracting the two
//! estimates directly then loses every significant digit, so both are
//! evaluated from factorizations that pull out the common factor `k2`:
//!
//! ```text
//! g0 = L(1-k)k [(1-s)² - k(1+s²) - k²(1+s)² - k³(1+s²)] / [N (1 + k s²)]
//!      N = (1+k²)(1+ks)² - k² L (1-k²)
//! g1 = L k [(1-s)² - 2ks + k²(1+s²)] / [(1 - k s²)(1 + k² - 2ks)]
//! ```
//!
//! with `k = k2`, `s = √(1-L)` and `1 - s` computed as `L/(1+s)`.
//! [`gap_value_direct`] keeps the literal differences for cross-checking.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bounds::classic::{astala_lower_at, astala_upper_at, composed_lower_at};
use crate::error::{QcError, Result};
use crate::numerics::HPReal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GapKind {
    G0,
    G1,
    G2,
}

impl fmt::Display for GapKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GapKind::G0 => "g0",
            GapKind::G1 => "g1",
            GapKind::G2 => "g2",
        })
    }
}

impl FromStr for GapKind {
    type Err = QcError;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "g0" => Ok(GapKind::G0),
            "g1" => Ok(GapKind::G1),
            "g2" => Ok(GapKind::G2),
            other => Err(QcError::Parse(format!("unknown gap function {other:?}"))),
        }
    }
}

/// One evaluation of a gap function together with the domain it was
/// checked against.
#[derive(Debug, Clone)]
pub struct GapSample {
    pub kind: GapKind,
    pub k2: HPReal,
    pub l: HPReal,
    pub k: HPReal,
    pub value: HPReal,
    pub domain_lo: HPReal,
    pub domain_hi: HPReal,
    /// `true` when `domain_lo` itself is excluded (only for `g2`).
    pub domain_lo_open: bool,
}

fn k2_factor(l: &HPReal) -> K2Factor {
    let one = HPReal::one(l.precision());
    let s = (&one - l).sqrt();
    let one_minus_s = l / &(&one + &s);
    K2Factor { one, s, one_minus_s }
}

struct K2Factor {
    one: HPReal,
    s: HPReal,
    one_minus_s: HPReal,
}

fn g0_factored(k: &HPReal, l: &HPReal) -> HPReal {
    let K2Factor { one, s, one_minus_s } = k2_factor(l);
    let k_sq = k.square();
    let s_sq = s.square();
    let bracket = one_minus_s.square()
        - k * &(&one + &s_sq)
        - &k_sq * &(&one + &s).square()
        - &k_sq * k * &(&one + &s_sq);
    let n = (&one + &k_sq) * (&one + &(k * &s)).square() - &k_sq * l * &(&one - &k_sq);
    l * &(&one - k) * k * &bracket / (n * (&one + &(k * &s_sq)))
}

fn g1_factored(k: &HPReal, l: &HPReal) -> HPReal {
    let K2Factor { one, s, one_minus_s } = k2_factor(l);
    let k_sq = k.square();
    let s_sq = s.square();
    let bracket = one_minus_s.square() - k * &s * 2 + &k_sq * &(&one + &s_sq);
    l * k * &bracket / ((&one - &(k * &s_sq)) * (&one + &k_sq - &(k * &s * 2)))
}

fn big_k_of(k2: &HPReal) -> HPReal {
    let one = HPReal::one(k2.precision());
    (&one + k2) / (&one - k2)
}

/// The gap function as a literal difference of the two estimates.
pub fn gap_value_direct(kind: GapKind, k2: &HPReal, l: &HPReal) -> HPReal {
    let one = HPReal::one(l.precision());
    let big_k2 = big_k_of(k2);
    match kind {
        GapKind::G0 => composed_lower_at(l, k2) - astala_lower_at(l, &big_k2),
        GapKind::G1 => {
            let s = (&one - l).sqrt();
            let k_sq = k2.square();
            let line_upper = (&one + &k_sq) * l / (&one + &k_sq - &(k2 * &s * 2));
            astala_upper_at(l, &big_k2) - line_upper
        }
        GapKind::G2 => astala_upper_at(l, &big_k2) - (&one + &k2.square()),
    }
}

/// The gap function evaluated without the leading-order cancellation
/// (`g0`, `g1`) or as the plain difference (`g2`). No domain check.
pub fn gap_value(kind: GapKind, k2: &HPReal, l: &HPReal) -> HPReal {
    match kind {
        GapKind::G0 => g0_factored(k2, l),
        GapKind::G1 => g1_factored(k2, l),
        GapKind::G2 => gap_value_direct(GapKind::G2, k2, l),
    }
}

/// Domain-checked gap evaluation for `0 < L < 1` and distortion `k`.
pub fn gap(kind: GapKind, k2: &HPReal, l: &HPReal, k: &HPReal) -> Result<GapSample> {
    let prec = l.precision();
    let one = HPReal::one(prec);
    if !l.is_positive() || *l >= one {
        return Err(QcError::Domain(format!("L must lie in (0, 1), got {}", l.to_sci_string(12))));
    }
    if k.is_negative() || *k >= one {
        return Err(QcError::Domain(format!("k must lie in [0, 1), got {}", k.to_sci_string(12))));
    }
    let cap = k.clone().min((&one - l).sqrt());
    let zero = HPReal::zero(prec);
    let (lo, hi, lo_open) = match kind {
        GapKind::G0 => (zero, k.clone(), false),
        GapKind::G1 => (zero, cap, false),
        GapKind::G2 => (cap, k.clone(), true),
    };
    let below = if lo_open { *k2 <= lo } else { *k2 < lo };
    if below || *k2 > hi {
        return Err(QcError::Domain(format!(
            "{kind}: k2 = {} outside {}{}, {}]",
            k2.to_sci_string(12),
            if lo_open { "(" } else { "[" },
            lo.to_sci_string(12),
            hi.to_sci_string(12)
        )));
    }
    Ok(GapSample {
        kind,
        k2: k2.clone(),
        l: l.clone(),
        k: k.clone(),
        value: gap_value(kind, k2, l),
        domain_lo: lo,
        domain_hi: hi,
        domain_lo_open: lo_open,
    })
}
