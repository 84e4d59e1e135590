//! Bracketing root finder and uniform sign-change scan.

use crate::error::{QcError, Result};
use crate::numerics::HPReal;

/// An interval on which a function changes sign.
///
/// A degenerate bracket (`lo == hi`) marks a grid point where the function
/// evaluated to exactly zero; both signs are then reported as `0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bracket {
    pub lo: HPReal,
    pub hi: HPReal,
    pub f_lo_sign: i8,
    pub f_hi_sign: i8,
}

impl Bracket {
    pub fn new(lo: HPReal, hi: HPReal, f_lo_sign: i8, f_hi_sign: i8) -> Result<Self> {
        if lo >= hi {
            return Err(QcError::Domain("bracket needs lo < hi".into()));
        }
        if f_lo_sign * f_hi_sign != -1 {
            return Err(QcError::BracketInvalid);
        }
        Ok(Bracket { lo, hi, f_lo_sign, f_hi_sign })
    }

    /// Builds a bracket by evaluating `f` at both ends.
    pub fn from_fn<F>(f: F, lo: HPReal, hi: HPReal) -> Result<Self>
    where
        F: Fn(&HPReal) -> HPReal,
    {
        let (a, b) = (f(&lo).signum(), f(&hi).signum());
        Bracket::new(lo, hi, a, b)
    }

    fn degenerate(x: HPReal) -> Self {
        Bracket { lo: x.clone(), hi: x, f_lo_sign: 0, f_hi_sign: 0 }
    }

    pub fn is_degenerate(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> HPReal {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> HPReal {
        (&self.lo + &self.hi) / 2
    }
}

/// Bisection on `bracket` until its width is at most `tol`.
///
/// Returns the midpoint of the final bracket, or a grid point where `f`
/// is exactly zero. The iteration cap is ten times the working precision
/// in decimal digits.
pub fn bisect<F>(f: F, bracket: &Bracket, tol: &HPReal) -> Result<HPReal>
where
    F: Fn(&HPReal) -> HPReal,
{
    if !tol.is_positive() {
        return Err(QcError::Domain("bisection tolerance must be positive".into()));
    }
    let mut lo = bracket.lo.clone();
    let mut hi = bracket.hi.clone();
    if lo > hi {
        std::mem::swap(&mut lo, &mut hi);
    }
    let f_lo = f(&lo);
    if f_lo.is_zero() {
        return Ok(lo);
    }
    let f_hi = f(&hi);
    if f_hi.is_zero() {
        return Ok(hi);
    }
    let s_lo = f_lo.signum();
    if s_lo == 0 || f_hi.signum() == 0 || s_lo == f_hi.signum() {
        return Err(QcError::BracketInvalid);
    }

    let cap = 10 * lo.precision().max(hi.precision()).digits() as usize;
    for _ in 0..cap {
        if &hi - &lo <= *tol {
            return Ok((lo + hi) / 2);
        }
        let mid = (&lo + &hi) / 2;
        if mid == lo || mid == hi {
            // working precision exhausted before reaching tol
            break;
        }
        let f_mid = f(&mid);
        match f_mid.signum() {
            0 if f_mid.is_zero() => return Ok(mid),
            0 => return Err(QcError::Domain("function returned a non-finite value".into())),
            s if s == s_lo => lo = mid,
            _ => hi = mid,
        }
    }
    if &hi - &lo <= *tol {
        return Ok((lo + hi) / 2);
    }
    Err(QcError::NoConvergence { iterations: cap })
}

/// Evaluates `f` on `n + 1` equally spaced points of `[lo, hi]` and reports
/// every adjacent pair with opposite nonzero signs, in increasing order.
/// Exact zeros come back as degenerate brackets; non-finite values break
/// the chain without producing a bracket.
pub fn scan_sign_change<F>(f: F, lo: &HPReal, hi: &HPReal, n: usize) -> Vec<Bracket>
where
    F: Fn(&HPReal) -> HPReal,
{
    let n = n.max(1);
    let step = (hi - lo) / n as i64;
    let mut out = Vec::new();
    let mut prev: Option<(HPReal, i8)> = None;
    for i in 0..=n {
        let x = if i == n { hi.clone() } else { lo + &(&step * i as i64) };
        let fx = f(&x);
        let sign = fx.signum();
        if fx.is_zero() {
            out.push(Bracket::degenerate(x));
            prev = None;
            continue;
        }
        if sign == 0 {
            prev = None;
            continue;
        }
        if let Some((px, ps)) = prev.take() {
            if ps != sign {
                out.push(Bracket { lo: px, hi: x.clone(), f_lo_sign: ps, f_hi_sign: sign });
            }
        }
        prev = Some((x, sign));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Precision;

    fn p() -> Precision {
        Precision::default()
    }

    fn h(s: &str) -> HPReal {
        HPReal::parse(s, p()).unwrap()
    }

    #[test]
    fn linear_root() {
        let f = |x: &HPReal| x - &h("0.5");
        let b = Bracket::from_fn(f, h("0"), h("1")).unwrap();
        let r = bisect(f, &b, &h("1e-30")).unwrap();
        assert!((r - h("0.5")).abs() <= h("1e-30"));
    }

    #[test]
    fn sqrt_two_against_arithmetic_layer() {
        let f = |x: &HPReal| x.square() - 2;
        let b = Bracket::from_fn(f, h("1"), h("2")).unwrap();
        let r = bisect(f, &b, &h("1e-30")).unwrap();
        let oracle = HPReal::from_i64(2, p()).sqrt();
        assert!((r - oracle).abs() <= h("1e-30"));
    }

    #[test]
    fn balance_equation_root() {
        let f = |x: &HPReal| x.powi(60) - (HPReal::one(p()) - x).powi(27);
        let b = Bracket::from_fn(f, h("0.5"), h("0.7")).unwrap();
        let r = bisect(f, &b, &h("1e-15")).unwrap();
        assert!((r - h("0.635212")).abs() < h("5e-7"));
    }

    #[test]
    fn same_sign_is_rejected() {
        let f = |x: &HPReal| x.square() + 1;
        let b = Bracket { lo: h("0"), hi: h("1"), f_lo_sign: -1, f_hi_sign: 1 };
        assert!(matches!(bisect(f, &b, &h("1e-10")), Err(QcError::BracketInvalid)));
        assert!(matches!(Bracket::from_fn(f, h("0"), h("1")), Err(QcError::BracketInvalid)));
    }

    #[test]
    fn cap_triggers_no_convergence() {
        // a jump never evaluates to exactly zero
        let third = h("1") / 3;
        let f = |x: &HPReal| if *x < third { h("-1") } else { h("1") };
        let b = Bracket::from_fn(f, h("0"), h("1")).unwrap();
        // 80 digits cannot resolve 1e-1000
        let r = bisect(f, &b, &h("1e-1000"));
        assert!(matches!(r, Err(QcError::NoConvergence { .. })), "{r:?} {:?}", h("1e-1000"));
    }

    #[test]
    fn scan_linear_and_constant() {
        let f = |x: &HPReal| x - &h("0.5");
        let found = scan_sign_change(f, &h("0"), &h("1"), 10);
        assert_eq!(found.len(), 1);
        let b = &found[0];
        // 0.5 is not exactly representable in the grid step arithmetic, so
        // either a degenerate bracket at 0.5 or [0.4, 0.5]/[0.5, 0.6] qualifies.
        assert!(b.lo <= h("0.5") && b.hi >= h("0.5") - h("1e-70"));
        assert!(b.width() <= h("0.1000001"));

        let none = scan_sign_change(|_: &HPReal| HPReal::one(p()), &h("0"), &h("1"), 100);
        assert!(none.is_empty());
    }

    #[test]
    fn scan_reports_exact_zero_as_degenerate() {
        let found = scan_sign_change(|x: &HPReal| x.clone(), &h("0"), &h("1"), 4);
        assert_eq!(found.len(), 1);
        assert!(found[0].is_degenerate());
        assert!(found[0].lo.is_zero());
    }

    #[test]
    fn scan_finds_multiple_in_order() {
        // roots at 0.25 and 0.75, grid avoids them
        let f = |x: &HPReal| (x - &h("0.25")) * (x - &h("0.75"));
        let found = scan_sign_change(f, &h("0"), &h("1"), 7);
        assert_eq!(found.len(), 2);
        assert!(found[0].hi <= found[1].lo);
        assert_eq!((found[0].f_lo_sign, found[0].f_hi_sign), (1, -1));
    }
}
