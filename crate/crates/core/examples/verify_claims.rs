//! Recomputes every numerical claim at 80 digits and prints the report.

use qcdim::claims::{verify_all, ClaimContext};
use qcdim::Precision;

fn main() {
    let ctx = ClaimContext::new(Precision::default());
    let report = verify_all(&ctx, None, chrono::Utc::now());
    print!("{}", report.table().to_text());
    let s = report.summary();
    println!("\n{} of {} claims pass", s.passed, s.total);
}
