//! Arbitrary-precision real scalar.
//!
//! [`HPReal`] wraps an `astro_float::BigFloat` together with the number of
//! significant decimal digits it was created for. Binary operations run at
//! the larger of the two operand precisions, so a computation seeded from a
//! single [`Precision`] stays at that precision throughout.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};

use crate::error::{QcError, Result};

const RM: RoundingMode = RoundingMode::ToEven;

/// Guard bits on top of the requested decimal precision. The mantissa is
/// then rounded up to whole 64-bit words.
const GUARD_BITS: usize = 8;

/// Smallest precision accepted by [`Precision::new`].
pub const MIN_DIGITS: u32 = 30;

/// Default working precision in significant decimal digits.
pub const DEFAULT_DIGITS: u32 = 80;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constant cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// Working precision in significant decimal digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision(u32);

impl Precision {
    /// Checked constructor; rejects anything below [`MIN_DIGITS`].
    pub fn new(digits: u32) -> Result<Self> {
        if digits < MIN_DIGITS {
            return Err(QcError::Domain(format!(
                "precision must be at least {MIN_DIGITS} decimal digits, got {digits}"
            )));
        }
        Ok(Precision(digits))
    }

    /// Precision below the supported floor. Only meant for runs that
    /// demonstrate what goes wrong without enough digits.
    pub fn below_floor(digits: u32) -> Self {
        Precision(digits.max(1))
    }

    pub fn digits(self) -> u32 {
        self.0
    }

    pub fn is_below_floor(self) -> bool {
        self.0 < MIN_DIGITS
    }

    fn bits(self) -> usize {
        // log2(10) ≈ 3.3219
        let bits = (self.0 as f64 * std::f64::consts::LOG2_10).ceil() as usize + GUARD_BITS;
        bits.div_ceil(64) * 64
    }

    /// `10^-(digits - slack)`: the smallest difference worth resolving.
    pub fn resolution(self, slack: u32) -> HPReal {
        let exp = self.0.saturating_sub(slack).max(1) as i32;
        HPReal::pow10(-exp, self)
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision(DEFAULT_DIGITS)
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} digits", self.0)
    }
}

/// Arbitrary-precision real number tagged with its working precision.
#[derive(Clone)]
pub struct HPReal {
    value: BigFloat,
    prec: Precision,
}

impl HPReal {
    fn wrap(value: BigFloat, prec: Precision) -> Self {
        HPReal { value, prec }
    }

    pub fn zero(prec: Precision) -> Self {
        Self::from_i64(0, prec)
    }

    pub fn one(prec: Precision) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: Precision) -> Self {
        Self::wrap(BigFloat::from_i64(v, prec.bits()), prec)
    }

    /// Exact conversion of the binary value of `v`.
    pub fn from_f64(v: f64, prec: Precision) -> Self {
        Self::wrap(BigFloat::from_f64(v, prec.bits()), prec)
    }

    /// Parses a decimal literal such as `"2.67e-21"` at the given precision.
    pub fn parse(s: &str, prec: Precision) -> Result<Self> {
        let trimmed = s.trim();
        let value = with_consts(|cc| BigFloat::parse(trimmed, Radix::Dec, prec.bits(), RM, cc));
        if value.is_nan() || value.is_inf() || trimmed.is_empty() {
            return Err(QcError::Parse(format!("not a finite decimal number: {s:?}")));
        }
        Ok(Self::wrap(value, prec))
    }

    /// Parses a literal that is known to be valid.
    pub(crate) fn lit(s: &str, prec: Precision) -> Self {
        Self::parse(s, prec).expect("valid decimal literal")
    }

    /// `10^exp`, exact for the decimal value.
    pub fn pow10(exp: i32, prec: Precision) -> Self {
        Self::lit(&format!("1e{exp}"), prec)
    }

    pub fn pi(prec: Precision) -> Self {
        Self::wrap(with_consts(|cc| cc.pi(prec.bits(), RM)), prec)
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    /// Re-rounds to another precision.
    pub fn with_precision(&self, prec: Precision) -> Self {
        let mut value = self.value.clone();
        // Only fails on NaN/Inf, which keep their flavour anyway.
        let _ = value.set_precision(prec.bits(), RM);
        Self::wrap(value, prec)
    }

    fn join(&self, other: &HPReal) -> Precision {
        self.prec.max(other.prec)
    }

    pub fn is_finite(&self) -> bool {
        !(self.value.is_nan() || self.value.is_inf())
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.is_finite() && !self.is_zero() && self.value.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.is_finite() && !self.is_zero() && self.value.is_negative()
    }

    /// -1, 0 or +1. NaN maps to 0.
    pub fn signum(&self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.value.abs(), self.prec)
    }

    pub fn recip(&self) -> Self {
        Self::one(self.prec) / self
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn sqrt(&self) -> Self {
        Self::wrap(self.value.sqrt(self.prec.bits(), RM), self.prec)
    }

    pub fn exp(&self) -> Self {
        let value = with_consts(|cc| self.value.exp(self.prec.bits(), RM, cc));
        Self::wrap(value, self.prec)
    }

    pub fn ln(&self) -> Self {
        let value = with_consts(|cc| self.value.ln(self.prec.bits(), RM, cc));
        Self::wrap(value, self.prec)
    }

    pub fn log10(&self) -> Self {
        let value = with_consts(|cc| self.value.log10(self.prec.bits(), RM, cc));
        Self::wrap(value, self.prec)
    }

    /// Real power `self^e` for `self > 0` (and `0^e = 0` for `e > 0`).
    pub fn powf(&self, e: &HPReal) -> Self {
        let p = self.join(e);
        let value = with_consts(|cc| self.value.pow(&e.value, p.bits(), RM, cc));
        Self::wrap(value, p)
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, n: u32) -> Self {
        Self::wrap(self.value.powi(n as usize, self.prec.bits(), RM), self.prec)
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Decimal digits and exponent such that `value = 0.d1 d2 ... × 10^exp`,
    /// rounded to `sig` significant digits.
    fn decimal_digits(&self, sig: usize) -> Option<(bool, Vec<u8>, i64)> {
        if !self.is_finite() {
            return None;
        }
        if self.is_zero() {
            return Some((false, vec![0; sig.max(1)], 1));
        }
        let (sign, mut digits, exp) = with_consts(|cc| self.value.convert_to_radix(Radix::Dec, RM, cc)).ok()?;
        let mut exp = exp as i64;
        let negative = sign == Sign::Neg;
        let sig = sig.max(1);
        if digits.len() > sig {
            let round_up = digits[sig] >= 5;
            digits.truncate(sig);
            if round_up {
                let mut i = sig;
                loop {
                    if i == 0 {
                        digits.insert(0, 1);
                        digits.truncate(sig);
                        exp += 1;
                        break;
                    }
                    i -= 1;
                    if digits[i] == 9 {
                        digits[i] = 0;
                    } else {
                        digits[i] += 1;
                        break;
                    }
                }
            }
        }
        while digits.len() < sig {
            digits.push(0);
        }
        Some((negative, digits, exp))
    }

    /// Scientific notation with `sig` significant digits, e.g. `6.667e-1`.
    pub fn to_sci_string(&self, sig: usize) -> String {
        match self.decimal_digits(sig) {
            None => {
                if self.value.is_nan() {
                    "NaN".to_string()
                } else if self.value.is_negative() {
                    "-inf".to_string()
                } else {
                    "inf".to_string()
                }
            }
            Some((negative, digits, exp)) => {
                let mut s = String::with_capacity(digits.len() + 8);
                if negative {
                    s.push('-');
                }
                s.push((b'0' + digits[0]) as char);
                if digits.len() > 1 {
                    s.push('.');
                    for d in &digits[1..] {
                        s.push((b'0' + d) as char);
                    }
                }
                let e = if self.is_zero() { 0 } else { exp - 1 };
                s.push('e');
                s.push_str(&e.to_string());
                s
            }
        }
    }

    /// Full-precision decimal string.
    pub fn to_full_string(&self) -> String {
        self.to_sci_string(self.prec.digits() as usize)
    }

    pub fn to_f64(&self) -> f64 {
        match self.decimal_digits(17) {
            None => {
                if self.value.is_nan() {
                    f64::NAN
                } else if self.value.is_negative() {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }
            }
            Some(_) => self.to_sci_string(17).parse().unwrap_or(f64::NAN),
        }
    }
}

impl fmt::Debug for HPReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HPReal({})", self.to_sci_string(24))
    }
}

impl fmt::Display for HPReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => f.write_str(&self.to_sci_string(p.max(1))),
            None => f.write_str(&self.to_full_string()),
        }
    }
}

impl PartialEq for HPReal {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for HPReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.cmp(&other.value).map(|c| c.cmp(&0))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&HPReal> for &HPReal {
            type Output = HPReal;
            fn $method(self, rhs: &HPReal) -> HPReal {
                let p = self.join(rhs);
                HPReal::wrap(self.value.$method(&rhs.value, p.bits(), RM), p)
            }
        }
        impl $trait<HPReal> for HPReal {
            type Output = HPReal;
            fn $method(self, rhs: HPReal) -> HPReal {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&HPReal> for HPReal {
            type Output = HPReal;
            fn $method(self, rhs: &HPReal) -> HPReal {
                (&self).$method(rhs)
            }
        }
        impl $trait<HPReal> for &HPReal {
            type Output = HPReal;
            fn $method(self, rhs: HPReal) -> HPReal {
                self.$method(&rhs)
            }
        }
        impl $trait<i64> for &HPReal {
            type Output = HPReal;
            fn $method(self, rhs: i64) -> HPReal {
                self.$method(&HPReal::from_i64(rhs, self.prec))
            }
        }
        impl $trait<i64> for HPReal {
            type Output = HPReal;
            fn $method(self, rhs: i64) -> HPReal {
                (&self).$method(&HPReal::from_i64(rhs, self.prec))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for &HPReal {
    type Output = HPReal;
    fn neg(self) -> HPReal {
        HPReal::wrap(BigFloat::neg(&self.value), self.prec)
    }
}

impl Neg for HPReal {
    type Output = HPReal;
    fn neg(self) -> HPReal {
        -&self
    }
}
