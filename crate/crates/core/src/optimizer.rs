//! Numerical choice of the split parameter `k2`.
//!
//! The improved bounds fix `k2` by a schedule in `L`. Here `k2` is chosen
//! by a log-spaced scan of `[min(1e-60, k·1e-6), k]` followed by golden
//! refinement. The objective is the margin over the general estimate,
//! which is the bound itself shifted by a constant but free of the
//! cancellation that hides improvements of size `1e-139`. The schedule
//! value and the upper switch point `√(1-L)` are always grid points, so
//! the result is never worse than the schedule.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::theorems::{lower_at_split, upper_at_split};
use crate::bounds::{
    astala_bounds, improved_lower_bound, improved_upper_bound, DecompositionSplit, DimensionValue, Distortion,
};
use crate::error::{QcError, Result};
use crate::numerics::{scan_then_golden, HPReal, ScanOptions};
use crate::output::{Cell, Table};

/// Slack allowed when comparing with the schedule bound.
pub const DOMINANCE_SLACK: &str = "1e-60";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Lower,
    Upper,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Lower => "lower",
            Direction::Upper => "upper",
        })
    }
}

impl FromStr for Direction {
    type Err = QcError;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lower" => Ok(Direction::Lower),
            "upper" => Ok(Direction::Upper),
            other => Err(QcError::Parse(format!("direction must be lower or upper, got {other:?}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct OptimizationResult {
    pub l: DimensionValue,
    pub distortion: Distortion,
    pub direction: Direction,
    pub k2_star: HPReal,
    pub bound_star: HPReal,
    pub theorem_k2: HPReal,
    pub theorem_bound: HPReal,
    pub astala_bound: HPReal,
    /// `|bound_star - theorem_bound|`, from the margins.
    pub improvement_over_theorem: HPReal,
    pub evaluations: usize,
    pub hypotheses_met: bool,
    /// Margin over the general estimate at `k2_star`.
    pub margin_star: HPReal,
}

impl OptimizationResult {
    /// The result is at least as good as the schedule, up to
    /// [`DOMINANCE_SLACK`].
    pub fn dominates_theorem(&self) -> bool {
        let slack = HPReal::lit(DOMINANCE_SLACK, self.bound_star.precision());
        match self.direction {
            Direction::Lower => self.bound_star >= &self.theorem_bound - &slack,
            Direction::Upper => self.bound_star <= &self.theorem_bound + &slack,
        }
    }
}

fn margin_at(direction: Direction, l: &HPReal, d: &Distortion, k2: &HPReal) -> (HPReal, HPReal) {
    let split = DecompositionSplit::new(d, k2.clone()).expect("k2 inside [0, k]");
    match direction {
        Direction::Lower => lower_at_split(l, &split),
        Direction::Upper => upper_at_split(l, &split, false),
    }
}

pub fn optimize_k2(l: &DimensionValue, d: &Distortion, direction: Direction) -> Result<OptimizationResult> {
    let lv = l.value();
    let prec = lv.precision();
    let one = HPReal::one(prec);
    if *lv >= one {
        return Err(QcError::Domain(format!(
            "L must lie in the open domain (0, 1), got {}",
            lv.to_sci_string(12)
        )));
    }

    let theorem = match direction {
        Direction::Lower => improved_lower_bound(l, d)?,
        Direction::Upper => improved_upper_bound(l, d)?,
    };
    let astala = astala_bounds(l, d);
    let (theorem_bound, astala_bound) = match direction {
        Direction::Lower => (theorem.lower.clone(), astala.lower),
        Direction::Upper => (theorem.upper.clone(), astala.upper),
    };
    let theorem_k2 = theorem.split.as_ref().map(|s| s.k2.clone()).unwrap_or_else(|| HPReal::zero(prec));
    let theorem_margin = theorem.astala_margin.clone().unwrap_or_else(|| HPReal::zero(prec));

    let k = d.k();
    if k.is_zero() {
        return Ok(OptimizationResult {
            l: l.clone(),
            distortion: d.clone(),
            direction,
            k2_star: HPReal::zero(prec),
            bound_star: lv.clone(),
            theorem_k2,
            theorem_bound,
            astala_bound,
            improvement_over_theorem: HPReal::zero(prec),
            evaluations: 0,
            hypotheses_met: theorem.hypotheses_met,
            margin_star: HPReal::zero(prec),
        });
    }

    let lo = HPReal::lit("1e-60", prec).min(k * &HPReal::lit("1e-6", prec));
    let mut extra = vec![theorem_k2.clone()];
    if direction == Direction::Upper {
        extra.push((&one - lv).sqrt());
    }
    let opts = ScanOptions { extra_points: extra, ..ScanOptions::default() };
    let objective = |k2: &HPReal| -margin_at(direction, lv, d, k2).1;
    let found = scan_then_golden(objective, &lo, k, &opts)?;

    let mut k2_star = found.x;
    let (mut bound_star, mut margin_star) = margin_at(direction, lv, d, &k2_star);
    if theorem_k2.is_positive() && margin_star < theorem_margin {
        k2_star = theorem_k2.clone();
        (bound_star, margin_star) = margin_at(direction, lv, d, &k2_star);
    }
    let improvement = (&margin_star - &theorem_margin).max(HPReal::zero(prec));

    Ok(OptimizationResult {
        l: l.clone(),
        distortion: d.clone(),
        direction,
        k2_star,
        bound_star,
        theorem_k2,
        theorem_bound,
        astala_bound,
        improvement_over_theorem: improvement,
        evaluations: found.evaluations,
        hypotheses_met: theorem.hypotheses_met,
        margin_star,
    })
}

/// One `(L, K, direction)` cell of [`improvement_table`].
#[derive(Debug, Clone)]
pub struct TableRow {
    pub l: HPReal,
    pub big_k: HPReal,
    pub direction: Direction,
    /// The error message for an invalid cell.
    pub result: std::result::Result<OptimizationResult, String>,
}

/// Optimizes every cell of `L_grid × K_grid × directions`, in
/// lexicographic `(L, K, direction)` order.
pub fn improvement_table(l_grid: &[HPReal], k_grid: &[HPReal], directions: &[Direction]) -> Vec<TableRow> {
    let cells: Vec<(usize, usize, Direction)> = (0..l_grid.len())
        .flat_map(|i| (0..k_grid.len()).flat_map(move |j| directions.iter().map(move |&dir| (i, j, dir))))
        .collect();
    let mut rows: Vec<TableRow> = cells
        .par_iter()
        .map(|&(i, j, direction)| {
            let (l, big_k) = (&l_grid[i], &k_grid[j]);
            let result = DimensionValue::new(l.clone())
                .and_then(|t| Distortion::from_big_k(big_k.clone()).map(|d| (t, d)))
                .and_then(|(t, d)| optimize_k2(&t, &d, direction))
                .map_err(|e| e.to_string());
            TableRow { l: l.clone(), big_k: big_k.clone(), direction, result }
        })
        .collect();
    rows.sort_by(|a, b| {
        a.l.partial_cmp(&b.l)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.big_k.partial_cmp(&b.big_k).unwrap_or(std::cmp::Ordering::Equal))
            .then(a.direction.cmp(&b.direction))
    });
    rows
}

pub const TABLE_COLUMNS: [&str; 8] =
    ["L", "K", "direction", "astala_bound", "theorem_bound", "optimized_bound", "k2_star", "hypotheses_met"];

/// Rows in the CSV layout. Invalid cells keep their `L, K, direction` and
/// leave the numeric columns empty.
pub fn rows_to_table(rows: &[TableRow]) -> Table {
    let mut t = Table::new(TABLE_COLUMNS);
    for r in rows {
        let mut cells: Vec<Cell> = vec![(&r.l).into(), (&r.big_k).into(), r.direction.to_string().into()];
        match &r.result {
            Ok(o) => cells.extend([
                (&o.astala_bound).into(),
                (&o.theorem_bound).into(),
                (&o.bound_star).into(),
                (&o.k2_star).into(),
                o.hypotheses_met.into(),
            ]),
            Err(_) => cells.extend([Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty, false.into()]),
        }
        t.push(cells);
    }
    t
}
