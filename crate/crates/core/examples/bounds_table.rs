//! Every bound method on a small L grid at K = 2.

use qcdim::bounds::{BoundMethod, DimensionValue, Distortion};
use qcdim::{HPReal, Precision};

fn main() -> qcdim::Result<()> {
    let prec = Precision::default();
    let d = Distortion::from_big_k(HPReal::from_i64(2, prec))?;
    println!("K = 2, k = {}", d.k().to_sci_string(12));
    println!("{:>5}  {:<15} {:>20} {:>20}  hyp", "L", "method", "lower", "upper");
    for l in ["0.1", "0.5", "0.9"] {
        let t = DimensionValue::parse(l, prec)?;
        for m in BoundMethod::ALL {
            let b = m.evaluate(&t, &d)?;
            println!(
                "{l:>5}  {:<15} {:>20} {:>20}  {}",
                m.as_str(),
                b.lower.to_sci_string(14),
                b.upper.to_sci_string(14),
                b.hypotheses_met
            );
        }
    }

    // The improvement at small L is invisible in the bounds themselves.
    let t = DimensionValue::parse("0.02", prec)?;
    let b = BoundMethod::ImprovedLower.evaluate(&t, &d)?;
    println!("\nL = 0.02: improved lower exceeds the general one by {}", b.astala_margin.unwrap().to_sci_string(6));
    Ok(())
}
