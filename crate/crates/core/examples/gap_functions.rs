//! The gap functions along the two schedules, factored and direct.

use qcdim::bounds::{balance_root, gap_value, gap_value_direct, GapKind};
use qcdim::{HPReal, Precision};

fn main() -> qcdim::Result<()> {
    let prec = Precision::default();
    let x0 = balance_root(60, 27, prec)?;
    let y0 = balance_root(99, 49, prec)?;
    println!("x0 = {}\ny0 = {}", x0.to_sci_string(20), y0.to_sci_string(20));
    println!("\n{:>5}  {:>16} {:>16} {:>16}", "x", "g0(x^60,x)", "direct", "g1(x^99,x)");
    for x in ["0.01", "0.05", "0.2", "0.5", "0.9", "0.98"] {
        let x = HPReal::parse(x, prec)?;
        let g0 = gap_value(GapKind::G0, &x.powi(60), &x);
        let direct = gap_value_direct(GapKind::G0, &x.powi(60), &x);
        let g1 = gap_value(GapKind::G1, &x.powi(99), &x);
        println!(
            "{:>5}  {:>16} {:>16} {:>16}",
            x.to_f64(),
            g0.to_sci_string(6),
            direct.to_sci_string(6),
            g1.to_sci_string(6)
        );
    }
    let near_one = HPReal::one(prec) - HPReal::pow10(-40, prec);
    let g2 = gap_value(GapKind::G2, &HPReal::parse("2.67e-21", prec)?, &near_one);
    println!("\ng2(2.67e-21, 1 - 1e-40) = {}", g2.to_sci_string(10));
    Ok(())
}
