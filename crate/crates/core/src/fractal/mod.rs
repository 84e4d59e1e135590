//! Cantor sets on the line, model symmetric maps, box counting, and an
//! empirical check that image dimensions respect the bounds.
//!
//! Everything here runs in `f64`: box-counting estimates carry errors of
//! order `1e-2`, far above double rounding. The model maps all commute
//! with conjugation, so the probe tests soundness of the bounds for that
//! class; it cannot approach the extremal distortion.

mod boxcount;
mod cantor;
mod maps;
mod sandwich;

pub use boxcount::{box_dimension, DimEstimate, DEFAULT_SCALES};
pub use cantor::{generate_cantor, CantorSpec, IntervalCover, MAX_INTERVALS};
pub use maps::{apply_map, catalogue, ModelMap, SymmetryClass};
pub use sandwich::{sandwich_check, sandwich_table, test_specs, SandwichOptions, SandwichRow, SANDWICH_COLUMNS};
