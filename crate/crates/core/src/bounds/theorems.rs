//! Improved line bounds obtained by splitting `K = K1·K2`.
//!
//! The line estimates are applied to the `K2` factor and the general
//! estimate to `K1`. The split parameter `k2` follows a fixed schedule in
//! `L`:
//!
//! | side  | range of `L`                   | `k2`          |
//! |-------|--------------------------------|---------------|
//! | lower | `L ≤ x0`                       | `L^60`        |
//! | lower | `x0 < L < 1`                   | `(1-L)^27`    |
//! | upper | `L ≤ y0`                       | `L^99`        |
//! | upper | `y0 < L ≤ 1 - 2.67²·10⁻⁴²`     | `(1-L)^49`    |
//! | upper | `L > 1 - 2.67²·10⁻⁴²`          | `2.67·10⁻²¹`  |
//!
//! where `x0` solves `x^60 = (1-x)^27` and `y0` solves `x^99 = (1-x)^49`.
//! Both schedules stay below `1.5·10⁻¹²` (lower) and `2.67·10⁻²¹` (upper),
//! which is why those are the thresholds on `k`.
//!
//! When `k` is below the threshold the schedule may exceed `k`; `k2` is then
//! clamped to `k` and the result is flagged with `hypotheses_met = false`.

use std::sync::OnceLock;

use crate::bounds::classic::{astala_lower_at, astala_upper_at, composed_lower_at};
use crate::bounds::gaps::{gap_value, GapKind};
use crate::bounds::{BoundMethod, BoundSet, DecompositionSplit, DimensionValue, Distortion};
use crate::error::Result;
use crate::numerics::{bisect, Bracket, HPReal, Precision};

/// Smallest `k` for which the improved lower bound is asserted.
pub const LOWER_K_THRESHOLD: &str = "1.5e-12";
/// Smallest `k` for which the improved upper bound is asserted.
pub const UPPER_K_THRESHOLD: &str = "2.67e-21";
/// `k2` used by the upper bound for `L` within `2.67²·10⁻⁴²` of 1.
const NEAR_ONE_K2: &str = "2.67e-21";

const SPLIT_POINT_DIGITS: u32 = 120;

/// The unique `x ∈ (0, 1)` with `x^a = (1-x)^b`, bisected to `1e-40` (or to
/// the working precision if that is coarser).
pub fn balance_root(a: u32, b: u32, prec: Precision) -> Result<HPReal> {
    let a = a.max(1);
    let b = b.max(1);
    let one = HPReal::one(prec);
    let f = |x: &HPReal| x.powi(a) - (&one - x).powi(b);
    let bracket = Bracket::new(HPReal::zero(prec), one.clone(), -1, 1)?;
    let tol = HPReal::pow10(-40, prec).max(prec.resolution(5));
    bisect(f, &bracket, &tol)
}

fn split_points() -> &'static (HPReal, HPReal) {
    static POINTS: OnceLock<(HPReal, HPReal)> = OnceLock::new();
    POINTS.get_or_init(|| {
        let prec = Precision::new(SPLIT_POINT_DIGITS).expect("valid precision");
        let x0 = balance_root(60, 27, prec).expect("x^60 = (1-x)^27 has a root in (0,1)");
        let y0 = balance_root(99, 49, prec).expect("x^99 = (1-x)^49 has a root in (0,1)");
        (x0, y0)
    })
}

/// `x0 ≈ 0.6352116`, root of `x^60 = (1-x)^27`.
pub fn lower_split_point() -> &'static HPReal {
    &split_points().0
}

/// `y0 ≈ 0.6197018`, root of `x^99 = (1-x)^49`.
pub fn upper_split_point() -> &'static HPReal {
    &split_points().1
}

/// `1 - 2.67²·10⁻⁴²`.
pub fn upper_case_boundary(prec: Precision) -> HPReal {
    HPReal::one(prec) - HPReal::lit("7.1289e-42", prec)
}

/// The lower-bound schedule `k2(L)`.
pub fn lower_schedule(l: &HPReal) -> HPReal {
    if l <= lower_split_point() {
        l.powi(60)
    } else {
        (HPReal::one(l.precision()) - l).powi(27)
    }
}

/// Which branch of the upper-bound schedule applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum UpperCase {
    Power,
    Complement,
    NearOne,
}

pub(crate) fn upper_case(l: &HPReal) -> UpperCase {
    if l <= upper_split_point() {
        UpperCase::Power
    } else if *l <= upper_case_boundary(l.precision()) {
        UpperCase::Complement
    } else {
        UpperCase::NearOne
    }
}

/// The upper-bound schedule `k2(L)`.
pub fn upper_schedule(l: &HPReal) -> HPReal {
    match upper_case(l) {
        UpperCase::Power => l.powi(99),
        UpperCase::Complement => (HPReal::one(l.precision()) - l).powi(49),
        UpperCase::NearOne => HPReal::lit(NEAR_ONE_K2, l.precision()),
    }
}

/// Improved lower bound at a given split `k2 ∈ [0, k]`, returned as
/// `(bound, margin over the general lower estimate)`.
pub(crate) fn lower_at_split(l: &HPReal, split: &DecompositionSplit) -> (HPReal, HPReal) {
    let half = HPReal::one(l.precision()) / 2;
    let k1 = &split.big_k1;
    let line = composed_lower_at(l, &split.k2);
    let general = astala_lower_at(l, &split.big_k2);
    let d_line = k1 * &(line.recip() - &half) + &half;
    let d_general = k1 * &(general.recip() - &half) + &half;
    let g0 = gap_value(GapKind::G0, &split.k2, l);
    let margin = k1 * &g0 / (&general * &line * &d_general * &d_line);
    (d_line.recip(), margin)
}

/// Inner upper estimate for the `K2` factor: the line bound while
/// `k2 ≤ √(1-L)`, the quasicircle cap `1 + k2²` above.
pub(crate) fn upper_inner(l: &HPReal, k2: &HPReal) -> (HPReal, GapKind) {
    let one = HPReal::one(l.precision());
    let s = (&one - l).sqrt();
    let k_sq = k2.square();
    if *k2 <= s {
        ((&one + &k_sq) * l / (&one + &k_sq - &(k2 * &s * 2)), GapKind::G1)
    } else {
        (&one + &k_sq, GapKind::G2)
    }
}

/// Improved upper bound at a given split, as `(bound, margin below the
/// general upper estimate)`.
pub(crate) fn upper_at_split(l: &HPReal, split: &DecompositionSplit, force_cap: bool) -> (HPReal, HPReal) {
    let one = HPReal::one(l.precision());
    let half = &one / 2;
    let (inner, kind) = if force_cap {
        (&one + &split.k2.square(), GapKind::G2)
    } else {
        upper_inner(l, &split.k2)
    };
    let k1 = &split.big_k1;
    let general = astala_upper_at(l, &split.big_k2);
    let d_inner = (inner.recip() - &half) / k1 + &half;
    let d_general = (general.recip() - &half) / k1 + &half;
    let g = gap_value(kind, &split.k2, l);
    let margin = &g / &(k1 * &inner * &general * &d_inner * &d_general);
    (d_inner.recip(), margin)
}

pub fn improved_lower_bound(l: &DimensionValue, d: &Distortion) -> Result<BoundSet> {
    l.require_at_most_one("improved lower bound")?;
    let lv = l.value();
    let prec = lv.precision();
    let one = HPReal::one(prec);

    let scheduled = lower_schedule(lv);
    let branch = if lv <= lower_split_point() { "k2 = L^60 (L <= x0)" } else { "k2 = (1-L)^27 (L > x0)" };
    let k_ok = *d.k() >= HPReal::lit(LOWER_K_THRESHOLD, prec);
    let mut notes = vec![branch.to_string()];
    if !k_ok {
        notes.push(format!("k below {LOWER_K_THRESHOLD}: improvement not asserted"));
    }
    if *lv >= one {
        notes.push("L = 1 lies outside 0 < L < 1".into());
    }
    let k2 = if scheduled > *d.k() {
        notes.push("k2 clamped to k".into());
        d.k().clone()
    } else {
        scheduled
    };

    let split = DecompositionSplit::new(d, k2)?;
    let (lower, margin) = lower_at_split(lv, &split);
    Ok(BoundSet {
        input_dim: l.clone(),
        distortion: d.clone(),
        lower,
        upper: astala_upper_at(lv, d.K()),
        method: BoundMethod::ImprovedLower,
        hypotheses_met: k_ok && *lv < one,
        notes: notes.join("; "),
        astala_margin: Some(margin),
        split: Some(split),
    })
}

pub fn improved_upper_bound(l: &DimensionValue, d: &Distortion) -> Result<BoundSet> {
    l.require_at_most_one("improved upper bound")?;
    let lv = l.value();
    let prec = lv.precision();
    let one = HPReal::one(prec);

    let case = upper_case(lv);
    let scheduled = upper_schedule(lv);
    let k_ok = *d.k() >= HPReal::lit(UPPER_K_THRESHOLD, prec);
    let mut notes = vec![match case {
        UpperCase::Power => "k2 = L^99 (L <= y0)",
        UpperCase::Complement => "k2 = (1-L)^49 (y0 < L <= 1 - 2.67^2e-42)",
        UpperCase::NearOne => "k2 = 2.67e-21, quasicircle cap (L > 1 - 2.67^2e-42)",
    }
    .to_string()];
    if !k_ok {
        notes.push(format!("k below {UPPER_K_THRESHOLD}: improvement not asserted"));
    }
    if *lv >= one {
        notes.push("L = 1 lies outside 0 < L < 1".into());
    }
    let k2 = if scheduled > *d.k() {
        notes.push("k2 clamped to k".into());
        d.k().clone()
    } else {
        scheduled
    };

    let split = DecompositionSplit::new(d, k2)?;
    let (upper, margin) = upper_at_split(lv, &split, case == UpperCase::NearOne);
    Ok(BoundSet {
        input_dim: l.clone(),
        distortion: d.clone(),
        lower: astala_lower_at(lv, d.K()),
        upper,
        method: BoundMethod::ImprovedUpper,
        hypotheses_met: k_ok && *lv < one,
        notes: notes.join("; "),
        astala_margin: Some(margin),
        split: Some(split),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::astala_bounds;

    fn p() -> Precision {
        Precision::default()
    }
    fn h(s: &str) -> HPReal {
        HPReal::parse(s, p()).unwrap()
    }
    fn dim(s: &str) -> DimensionValue {
        DimensionValue::parse(s, p()).unwrap()
    }
    fn big_k(s: &str) -> Distortion {
        Distortion::from_big_k(h(s)).unwrap()
    }

    #[test]
    fn balance_roots() {
        assert!((balance_root(1, 1, p()).unwrap() - h("0.5")).abs() < h("1e-40"));
        let x0 = balance_root(60, 27, p()).unwrap();
        assert!((&x0 - h("0.635212")).abs() < h("5e-7"));
        let y0 = balance_root(99, 49, p()).unwrap();
        assert!((&y0 - h("0.6197")).abs() < h("5e-5"));
        let resid = x0.powi(60) - (h("1") - &x0).powi(27);
        assert!(resid.abs() < h("1e-35"));
    }

    #[test]
    fn memoized_points_agree_with_fresh_roots() {
        let fresh = balance_root(60, 27, p()).unwrap();
        assert!((lower_split_point() - &fresh).abs() < h("1e-40"));
    }

    #[test]
    fn lower_improves_at_half() {
        let b = improved_lower_bound(&dim("0.5"), &big_k("2")).unwrap();
        let a = astala_bounds(&dim("0.5"), &big_k("2"));
        let k2 = &b.split.as_ref().unwrap().k2;
        assert!((k2 - h("0.5").powi(60)).abs() < h("1e-90"));
        assert!(b.lower > a.lower);
        assert!(b.astala_margin.as_ref().unwrap().is_positive());
        // margin is the exact difference
        let diff = &b.lower - &a.lower;
        let m = b.astala_margin.unwrap();
        assert!(((diff - &m) / &m).abs() < h("1e-40"));
        assert!(b.hypotheses_met);
    }

    #[test]
    fn lower_complement_branch() {
        let b = improved_lower_bound(&dim("0.9"), &big_k("2")).unwrap();
        let k2 = &b.split.as_ref().unwrap().k2;
        assert!((k2 - h("1e-27")).abs() < h("1e-100"));
        assert!(b.astala_margin.unwrap().is_positive());
    }

    #[test]
    fn both_lower_branches_meet_at_threshold() {
        let x0 = lower_split_point().with_precision(p());
        let a = x0.powi(60);
        let b = (h("1") - &x0).powi(27);
        let t = h("1.5e-12");
        assert!(((&a - &t) / &t).abs() < h("0.01"));
        assert!(((&b - &t) / &t).abs() < h("0.01"));
    }

    #[test]
    fn upper_cases() {
        let a = astala_bounds(&dim("0.5"), &big_k("2"));
        let b = improved_upper_bound(&dim("0.5"), &big_k("2")).unwrap();
        assert!((&b.split.as_ref().unwrap().k2 - h("0.5").powi(99)).abs() < h("1e-100"));
        assert!(b.upper < a.upper);
        assert!(b.astala_margin.unwrap().is_positive());

        let b = improved_upper_bound(&dim("0.9"), &big_k("2")).unwrap();
        assert!((&b.split.as_ref().unwrap().k2 - h("1e-49")).abs() < h("1e-120"));
        assert!(b.astala_margin.unwrap().is_positive());

        let l = h("1") - h("1e-50");
        let b = improved_upper_bound(&DimensionValue::new(l.clone()).unwrap(), &big_k("2")).unwrap();
        assert!(b.notes.contains("quasicircle"));
        assert!((&b.split.as_ref().unwrap().k2 - h("2.67e-21")).abs() < h("1e-90"));
        let a = astala_bounds(&DimensionValue::new(l).unwrap(), &big_k("2"));
        assert!(b.upper < a.upper);
        assert!(b.astala_margin.unwrap().is_positive());
    }

    #[test]
    fn below_threshold_is_flagged_not_rejected() {
        let d = Distortion::from_k(h("1e-13")).unwrap();
        let b = improved_lower_bound(&dim("0.9"), &d).unwrap();
        assert!(!b.hypotheses_met);
        assert!(b.clone().require_hypotheses().is_err());
        let d = Distortion::from_k(h("1e-22")).unwrap();
        let b = improved_upper_bound(&dim("0.999"), &d).unwrap();
        assert!(!b.hypotheses_met);
    }

    #[test]
    fn identity_distortion_collapses() {
        let d = Distortion::identity(p());
        for l in ["0.2", "0.7", "1"] {
            for b in [improved_lower_bound(&dim(l), &d).unwrap(), improved_upper_bound(&dim(l), &d).unwrap()] {
                assert!((&b.lower - h(l)).abs() < h("1e-70"));
                assert!((&b.upper - h(l)).abs() < h("1e-70"));
            }
        }
    }

    #[test]
    fn line_dimension_one_allowed_but_flagged() {
        let b = improved_lower_bound(&dim("1"), &big_k("2")).unwrap();
        assert!(!b.hypotheses_met);
        assert!(improved_lower_bound(&dim("1.5"), &big_k("2")).is_err());
    }
}
