//! Mapped Cantor sets against the bounds for every catalogue map.

use qcdim::bounds::BoundMethod;
use qcdim::fractal::{catalogue, sandwich_check, test_specs, SandwichOptions};

fn main() -> qcdim::Result<()> {
    let opts = SandwichOptions::default();
    let methods = [BoundMethod::Astala, BoundMethod::Symmetric, BoundMethod::ComposedLine];
    let mut violations = 0;
    for spec in test_specs() {
        for map in catalogue() {
            for row in sandwich_check(&spec, &map, &methods, &opts)? {
                violations += usize::from(row.is_violation());
                println!(
                    "{:<14} {:<14} K={:<4} L={:.4} est={:.4}  {:<13} [{:.4}, {:.4}] {}",
                    row.spec,
                    row.map,
                    row.big_k,
                    row.l_analytic,
                    row.estimate.value,
                    row.method.as_str(),
                    row.lower.as_ref().map_or(f64::NAN, |v| v.to_f64()),
                    row.upper.as_ref().map_or(f64::NAN, |v| v.to_f64()),
                    if row.inside == Some(true) { "inside" } else { "OUTSIDE" }
                );
            }
        }
    }
    println!("{violations} violations");
    Ok(())
}
