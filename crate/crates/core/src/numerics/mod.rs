//! High-precision scalar arithmetic and the generic routines built on it:
//! bracketing root finding, sign-change scanning, scalar minimization and
//! least-squares slope fitting.

mod fit;
mod hpreal;
mod minimize;
mod roots;

pub use fit::{fit_slope, LineFit};
pub use hpreal::{HPReal, Precision, DEFAULT_DIGITS, MIN_DIGITS};
pub use minimize::{golden_min, scan_grid, scan_then_golden, ScanMin, ScanOptions};
pub use roots::{bisect, scan_sign_change, Bracket};
