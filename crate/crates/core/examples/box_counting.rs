//! Box-counting estimates against the analytic dimension.

use qcdim::fractal::{box_dimension, generate_cantor, CantorSpec, DEFAULT_SCALES};

fn main() -> qcdim::Result<()> {
    for s in ["2:3:12", "2:4:10", "3:5:8", "2:32:8", "4:4.67:8"] {
        let spec: CantorSpec = s.parse()?;
        let cover = generate_cantor(&spec)?;
        let e = box_dimension(&cover, DEFAULT_SCALES)?;
        println!(
            "{s:<9} {:>8} intervals  analytic {:.4}  estimate {:.4}  r2 {:.4}  boxes {:.2e}..{:.2e}",
            cover.len(),
            spec.analytic_dimension(),
            e.value,
            e.r2,
            e.scale_range.0,
            e.scale_range.1
        );
    }
    Ok(())
}
