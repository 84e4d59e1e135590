//! Harnack interval for a symmetric nonnegative harmonic function.

use qcdim::bounds::harnack_interval;
use qcdim::{HPReal, Precision};

fn main() -> qcdim::Result<()> {
    let prec = Precision::default();
    let v0 = HPReal::one(prec);
    for y in ["0", "0.1", "0.5", "0.9", "0.99"] {
        let (lo, hi) = harnack_interval(&v0, &HPReal::parse(y, prec)?)?;
        println!("y = {y:<5} {} <= v(iy) <= {}", lo.to_sci_string(12), hi.to_sci_string(12));
    }
    Ok(())
}
