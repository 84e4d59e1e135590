//! Quasiconformal dimension-distortion bounds for subsets of the real line.

pub mod bounds;
pub mod claims;
pub mod cli;
pub mod error;
pub mod fractal;
pub mod numerics;
pub mod optimizer;
pub mod output;
pub mod tolerances;

pub use error::{QcError, Result};
pub use numerics::{HPReal, Precision};
