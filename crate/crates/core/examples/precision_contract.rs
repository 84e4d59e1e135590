//! The same quantities at 15, 30 and 80 digits.

use qcdim::bounds::{gap_value, DimensionValue, Distortion, BoundMethod, GapKind};
use qcdim::{HPReal, Precision};

fn main() -> qcdim::Result<()> {
    for digits in [15, 30, 80] {
        let prec = Precision::new(digits).unwrap_or_else(|_| Precision::below_floor(digits));
        let near_one = HPReal::one(prec) - HPReal::pow10(-40, prec);
        let g2 = gap_value(GapKind::G2, &HPReal::parse("2.67e-21", prec)?, &near_one);

        let t = DimensionValue::parse("0.5", prec)?;
        let d = Distortion::from_big_k(HPReal::from_i64(2, prec))?;
        let a = BoundMethod::Astala.evaluate(&t, &d)?;
        let b = BoundMethod::ImprovedLower.evaluate(&t, &d)?;
        println!(
            "{digits:>2} digits: g2 = {:<18} improved - general lower = {}",
            g2.to_sci_string(6),
            (&b.lower - &a.lower).to_sci_string(6)
        );
    }
    Ok(())
}
