//! Covering-sum constants after deforming at alpha between k and 1.

use qcdim::bounds::{covering_constants, DimensionValue, Distortion};
use qcdim::{HPReal, Precision};

fn main() -> qcdim::Result<()> {
    let prec = Precision::default();
    let t = DimensionValue::parse("0.6", prec)?;
    let d = Distortion::from_big_k(HPReal::from_i64(2, prec))?;
    let c_k = HPReal::from_i64(4, prec);
    let eps = HPReal::parse("0.01", prec)?;
    for alpha in ["0.4", "0.6", "0.9"] {
        let alpha = HPReal::parse(alpha, prec)?;
        let c = covering_constants(&t, &d, &alpha, &c_k, Some(&eps))?;
        println!("alpha = {}", alpha.to_f64());
        println!("  ell                {}", c.ell.to_sci_string(10));
        println!("  upper coefficient  {}", c.upper_coeff.to_sci_string(10));
        println!("  upper exponent     {}", c.upper_sum_exponent.to_sci_string(10));
        println!("  lower coefficient  {}", c.lower_coeff.to_sci_string(10));
        println!("  lower exponent     {}", c.lower_sum_exponent.to_sci_string(10));
        if let Some(dc) = &c.d_const {
            println!("  D                  {}", dc.to_sci_string(10));
        }
    }
    Ok(())
}
