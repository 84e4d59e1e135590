//! Best split parameter k2 versus the fixed schedule.

use qcdim::bounds::{DimensionValue, Distortion};
use qcdim::optimizer::{optimize_k2, Direction};
use qcdim::{HPReal, Precision};

fn main() -> qcdim::Result<()> {
    let prec = Precision::default();
    for (l, big_k) in [("0.3", 2), ("0.5", 2), ("0.9", 10)] {
        let t = DimensionValue::parse(l, prec)?;
        let d = Distortion::from_big_k(HPReal::from_i64(big_k, prec))?;
        for dir in [Direction::Lower, Direction::Upper] {
            let r = optimize_k2(&t, &d, dir)?;
            println!(
                "L={l} K={big_k} {dir:<5}  schedule k2={} -> {}   best k2={} -> {}   ({} evaluations)",
                r.theorem_k2.to_sci_string(4),
                r.theorem_bound.to_sci_string(12),
                r.k2_star.to_sci_string(4),
                r.bound_star.to_sci_string(12),
                r.evaluations
            );
        }
    }
    Ok(())
}
