//! Golden-section search and the grid-then-refine driver built on it.
//!
//! Nothing here assumes unimodality. [`scan_then_golden`] picks the best
//! grid point first and only refines inside its neighbouring cells, so the
//! returned value is never worse than the best grid point.

use crate::error::{QcError, Result};
use crate::numerics::HPReal;

/// Golden-section minimization of `f` on `[lo, hi]`.
///
/// Returns `(x, f(x))` with `x` within `tol` of a local minimizer. The best
/// of the final interior point and both original endpoints is returned, so
/// monotone functions report the boundary.
pub fn golden_min<F>(f: F, lo: &HPReal, hi: &HPReal, tol: &HPReal) -> Result<(HPReal, HPReal)>
where
    F: Fn(&HPReal) -> HPReal,
{
    let (x, fx, _) = golden_counted(&f, lo, hi, tol)?;
    Ok((x, fx))
}

fn golden_counted<F>(f: &F, lo: &HPReal, hi: &HPReal, tol: &HPReal) -> Result<(HPReal, HPReal, usize)>
where
    F: Fn(&HPReal) -> HPReal,
{
    if lo >= hi {
        return Err(QcError::Domain("golden_min needs lo < hi".into()));
    }
    if !tol.is_positive() {
        return Err(QcError::Domain("golden_min tolerance must be positive".into()));
    }
    let prec = lo.precision().max(hi.precision());
    // 1/phi = (sqrt(5) - 1) / 2
    let inv_phi = (HPReal::from_i64(5, prec).sqrt() - 1) / 2;

    let mut a = lo.clone();
    let mut b = hi.clone();
    let mut c = &b - &(&inv_phi * &(&b - &a));
    let mut d = &a + &(&inv_phi * &(&b - &a));
    let mut fc = f(&c);
    let mut fd = f(&d);
    let mut evals = 2;

    let cap = 10 * prec.digits() as usize;
    let mut converged = false;
    for _ in 0..cap {
        if &b - &a <= *tol {
            converged = true;
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = &b - &(&inv_phi * &(&b - &a));
            fc = f(&c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = &a + &(&inv_phi * &(&b - &a));
            fd = f(&d);
        }
        evals += 1;
    }
    if !converged && &b - &a > *tol {
        return Err(QcError::NoConvergence { iterations: cap });
    }

    let mid = (&a + &b) / 2;
    let f_mid = f(&mid);
    let f_lo = f(lo);
    let f_hi = f(hi);
    evals += 3;
    let mut best = (mid, f_mid);
    for cand in [(lo.clone(), f_lo), (hi.clone(), f_hi)] {
        if cand.1 < best.1 {
            best = cand;
        }
    }
    Ok((best.0, best.1, evals))
}

/// Options for [`scan_then_golden`].
#[derive(Debug, Clone)]
pub struct ScanOptions {
    /// Number of grid points (including both ends).
    pub grid_points: usize,
    /// Refinement stops when the cell is narrower than
    /// `max(abs_tol, rel_tol * |x_best|)`.
    pub rel_tol: f64,
    pub abs_tol: Option<HPReal>,
    /// Extra points that must be part of the grid.
    pub extra_points: Vec<HPReal>,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { grid_points: 200, rel_tol: 1e-20, abs_tol: None, extra_points: Vec::new() }
    }
}

#[derive(Debug, Clone)]
pub struct ScanMin {
    pub x: HPReal,
    pub fx: HPReal,
    pub evaluations: usize,
}

/// Grid points on `[lo, hi]`: log-spaced when `lo > 0` and the interval
/// spans more than three orders of magnitude, uniform otherwise.
pub fn scan_grid(lo: &HPReal, hi: &HPReal, n: usize) -> Vec<HPReal> {
    let n = n.max(2);
    let log_spaced = lo.is_positive() && (hi / lo) > HPReal::from_i64(1000, lo.precision());
    (0..n)
        .map(|i| {
            if i == 0 {
                return lo.clone();
            }
            if i == n - 1 {
                return hi.clone();
            }
            let frac = HPReal::from_i64(i as i64, lo.precision()) / (n as i64 - 1);
            if log_spaced {
                let (la, lb) = (lo.ln(), hi.ln());
                (&la + &(&frac * &(lb - &la))).exp()
            } else {
                lo + &(&frac * &(hi - lo))
            }
        })
        .collect()
}

/// Coarse grid scan followed by golden-section refinement around the best
/// grid point.
pub fn scan_then_golden<F>(f: F, lo: &HPReal, hi: &HPReal, opts: &ScanOptions) -> Result<ScanMin>
where
    F: Fn(&HPReal) -> HPReal,
{
    if lo >= hi {
        return Err(QcError::Domain("scan_then_golden needs lo < hi".into()));
    }
    let mut grid = scan_grid(lo, hi, opts.grid_points);
    for p in &opts.extra_points {
        if p >= lo && p <= hi {
            grid.push(p.clone());
        }
    }
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    grid.dedup_by(|a, b| a == b);

    let values: Vec<HPReal> = grid.iter().map(&f).collect();
    let mut evaluations = values.len();
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if v < &values[best] {
            best = i;
        }
    }

    let cell_lo = grid[best.saturating_sub(1)].clone();
    let cell_hi = grid[(best + 1).min(grid.len() - 1)].clone();
    let mut result = ScanMin { x: grid[best].clone(), fx: values[best].clone(), evaluations };
    if cell_lo < cell_hi {
        let prec = lo.precision();
        let rel = HPReal::parse(&format!("{:e}", opts.rel_tol), prec)?;
        let mut tol = &rel * &result.x.abs();
        if let Some(abs) = &opts.abs_tol {
            tol = tol.max(abs.clone());
        }
        if !tol.is_positive() {
            tol = prec.resolution(5);
        }
        let (x, fx, n) = golden_counted(&f, &cell_lo, &cell_hi, &tol)?;
        evaluations += n;
        if fx < result.fx {
            result = ScanMin { x, fx, evaluations };
        } else {
            result.evaluations = evaluations;
        }
    }
    Ok(result)
}
