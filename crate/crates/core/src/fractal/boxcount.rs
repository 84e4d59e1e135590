use crate::error::{QcError, Result};
use crate::fractal::IntervalCover;
use crate::numerics::fit_slope;

pub const DEFAULT_SCALES: usize = 16;

/// Finest dyadic level ever used; `2^-50` of the diameter is already at
/// the edge of double resolution.
const MAX_LEVEL: u32 = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct DimEstimate {
    pub value: f64,
    pub r2: f64,
    pub scales_used: usize,
    /// `(smallest, largest)` box size in the fit.
    pub scale_range: (f64, f64),
}

/// Endpoints this close to a box edge, in box widths, count as lying on it.
const EDGE_SNAP: f64 = 1e-6;

/// Occupied closed dyadic boxes of size `diam/2^level`, anchored at `x0`:
/// an endpoint on an edge touches the boxes on both sides.
fn count_boxes(cover: &IntervalCover, x0: f64, diam: f64, level: u32) -> u64 {
    let n_boxes = 1u64 << level;
    let delta = diam / n_boxes as f64;
    let clamp = |u: f64| (u.max(0.0) as u64).min(n_boxes - 1);
    let mut count = 0u64;
    let mut next_free = 0u64;
    for &(a, b) in &cover.intervals {
        let lo = clamp(((a - x0) / delta + EDGE_SNAP).floor());
        let hi = clamp(((b - x0) / delta + EDGE_SNAP).floor());
        let first = lo.max(next_free);
        if hi >= first {
            count += hi - first + 1;
            next_free = hi + 1;
        }
    }
    count
}

/// Box-counting dimension from the slope of `ln N(δ)` against `ln(1/δ)`.
///
/// Levels are `num_scales` integers spread evenly over
/// `[0, max(j_max, num_scales-1)]`, where `2^-j_max` of the diameter is the
/// last dyadic size above the longest interval. The two coarsest levels
/// are dropped when at least three remain.
pub fn box_dimension(cover: &IntervalCover, num_scales: usize) -> Result<DimEstimate> {
    if cover.is_empty() {
        return Err(QcError::DegenerateInput("empty cover".into()));
    }
    if num_scales < 4 {
        return Err(QcError::DegenerateInput(format!("need at least 4 scales, got {num_scales}")));
    }
    let x0 = cover.intervals.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let x1 = cover.intervals.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let diam = x1 - x0;
    if !(diam > 0.0 && diam.is_finite()) {
        return Err(QcError::DegenerateInput("all intervals are the same point".into()));
    }
    let longest = cover.intervals.iter().map(|(a, b)| b - a).fold(0.0, f64::max);
    let j_max = if longest > 0.0 { (diam / longest).log2().floor().clamp(0.0, MAX_LEVEL as f64) as u32 } else { MAX_LEVEL };
    let top = j_max.max(num_scales as u32 - 1).min(MAX_LEVEL);

    let mut levels: Vec<u32> = (0..num_scales)
        .map(|i| ((i as f64) * top as f64 / (num_scales - 1) as f64).round() as u32)
        .collect();
    levels.dedup();
    if levels.len() - 2 >= 3 {
        levels.drain(..2);
    }

    let points: Vec<(f64, f64)> = levels
        .iter()
        .map(|&j| {
            let delta = diam / (1u64 << j) as f64;
            ((1.0 / delta).ln(), (count_boxes(cover, x0, diam, j) as f64).ln())
        })
        .collect();
    let fit = fit_slope(&points)?;
    let size = |j: u32| diam / (1u64 << j) as f64;
    Ok(DimEstimate {
        value: fit.slope,
        r2: fit.r2,
        scales_used: points.len(),
        scale_range: (size(*levels.last().expect("nonempty")), size(levels[0])),
    })
}
