use std::fmt;
use std::str::FromStr;

use crate::error::{QcError, Result};

/// Largest number of intervals [`generate_cantor`] will produce.
pub const MAX_INTERVALS: u64 = 10_000_000;

/// Smallest interval length relative to the coordinate magnitude. Below
/// this, neighbouring endpoints are no longer distinct doubles in any
/// useful sense.
const MIN_RELATIVE_LENGTH: f64 = 1.0 / (1u64 << 44) as f64;

/// Self-similar Cantor set: `m` equally spaced copies scaled by `r`,
/// iterated `n` times inside `[offset, offset + scale]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CantorSpec {
    pub pieces: u32,
    pub ratio: f64,
    pub depth: u32,
    pub offset: f64,
    pub scale: f64,
}

impl CantorSpec {
    pub fn new(pieces: u32, ratio: f64, depth: u32) -> Result<Self> {
        Self::placed(pieces, ratio, depth, 0.0, 1.0)
    }

    pub fn placed(pieces: u32, ratio: f64, depth: u32, offset: f64, scale: f64) -> Result<Self> {
        if pieces < 2 {
            return Err(QcError::Domain(format!("need at least 2 pieces, got {pieces}")));
        }
        if !(ratio > 0.0 && ratio * pieces as f64 <= 1.0 + 1e-12) {
            return Err(QcError::Domain(format!("ratio must lie in (0, 1/{pieces}], got {ratio}")));
        }
        if depth < 1 {
            return Err(QcError::Domain("depth must be at least 1".into()));
        }
        if !(offset.is_finite() && scale.is_finite() && scale > 0.0) {
            return Err(QcError::Domain(format!("need finite offset and positive scale, got {offset}, {scale}")));
        }
        Ok(CantorSpec { pieces, ratio, depth, offset, scale })
    }

    /// `ln m / ln(1/r)`.
    pub fn analytic_dimension(&self) -> f64 {
        (self.pieces as f64).ln() / (1.0 / self.ratio).ln()
    }

    pub fn interval_count(&self) -> Option<u64> {
        (self.pieces as u64).checked_pow(self.depth)
    }

    pub fn with_placement(&self, offset: f64, scale: f64) -> Result<Self> {
        Self::placed(self.pieces, self.ratio, self.depth, offset, scale)
    }
}

impl fmt::Display for CantorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.pieces, 1.0 / self.ratio, self.depth)?;
        if self.offset != 0.0 || self.scale != 1.0 {
            write!(f, "@[{};{}]", self.offset, self.offset + self.scale)?;
        }
        Ok(())
    }
}

/// `m:q:n` with ratio `1/q`, e.g. `2:3:12` for the middle-thirds set.
impl FromStr for CantorSpec {
    type Err = QcError;
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let bad = || QcError::Parse(format!("expected pieces:inverse_ratio:depth such as 2:3:12, got {s:?}"));
        if parts.len() != 3 {
            return Err(bad());
        }
        let m: u32 = parts[0].trim().parse().map_err(|_| bad())?;
        let q: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let n: u32 = parts[2].trim().parse().map_err(|_| bad())?;
        if !(q.is_finite() && q > 0.0) {
            return Err(bad());
        }
        CantorSpec::new(m, 1.0 / q, n)
    }
}

/// Disjoint closed intervals sorted by left endpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalCover {
    pub intervals: Vec<(f64, f64)>,
    pub generation: u32,
}

impl IntervalCover {
    pub fn new(intervals: Vec<(f64, f64)>, generation: u32) -> Result<Self> {
        let cover = IntervalCover { intervals, generation };
        cover.check()?;
        Ok(cover)
    }

    /// Checks ordering, positive lengths and disjointness (touching
    /// endpoints allowed).
    pub fn check(&self) -> Result<()> {
        for (i, &(a, b)) in self.intervals.iter().enumerate() {
            if !(a.is_finite() && b.is_finite() && b > a) {
                return Err(QcError::DegenerateInput(format!("interval {i} = [{a}, {b}] is empty or not finite")));
            }
            if i > 0 && self.intervals[i - 1].1 > a {
                return Err(QcError::DegenerateInput(format!("intervals {} and {i} overlap or are unsorted", i - 1)));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// `left,right` per row with a header, shortest round-trip decimals.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.intervals.len() * 40 + 11);
        out.push_str("left,right\n");
        for (a, b) in &self.intervals {
            out.push_str(&format!("{a:e},{b:e}\n"));
        }
        out
    }
}

pub fn generate_cantor(spec: &CantorSpec) -> Result<IntervalCover> {
    let count = spec
        .interval_count()
        .filter(|&c| c <= MAX_INTERVALS)
        .ok_or_else(|| QcError::Resource(format!("{spec}: more than {MAX_INTERVALS} intervals")))?;
    let final_len = spec.scale * spec.ratio.powi(spec.depth as i32);
    let magnitude = spec.offset.abs() + spec.scale;
    if final_len < magnitude * MIN_RELATIVE_LENGTH {
        return Err(QcError::Resource(format!(
            "{spec}: level-{} intervals of length {final_len:e} are below double resolution",
            spec.depth
        )));
    }

    let m = spec.pieces as usize;
    let step = (1.0 - spec.ratio) / (m as f64 - 1.0);
    let mut current = vec![(spec.offset, spec.scale)];
    for _ in 0..spec.depth {
        let mut next = Vec::with_capacity(current.len() * m);
        for &(left, len) in &current {
            let child = len * spec.ratio;
            for i in 0..m {
                next.push((left + i as f64 * step * len, child));
            }
        }
        current = next;
    }
    debug_assert_eq!(current.len() as u64, count);
    let intervals = current.into_iter().map(|(a, len)| (a, a + len)).collect();
    Ok(IntervalCover { intervals, generation: spec.depth })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_middle_thirds_step() {
        let c = generate_cantor(&CantorSpec::new(2, 1.0 / 3.0, 1).unwrap()).unwrap();
        assert_eq!(c.len(), 2);
        assert!((c.intervals[0].1 - 1.0 / 3.0).abs() < 1e-15);
        assert!((c.intervals[1].0 - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(c.intervals[1].1, 1.0);
    }

    #[test]
    fn counts_and_lengths() {
        let c = generate_cantor(&CantorSpec::new(2, 1.0 / 3.0, 12).unwrap()).unwrap();
        assert_eq!(c.len(), 4096);
        let want = 3f64.powi(-12);
        assert!(c.intervals.iter().all(|(a, b)| ((b - a) - want).abs() < 1e-15));
        c.check().unwrap();

        let spec = CantorSpec::new(3, 0.2, 8).unwrap();
        assert_eq!(generate_cantor(&spec).unwrap().len(), 6561);
        assert!((spec.analytic_dimension() - 3f64.ln() / 5f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn resource_caps() {
        assert!(matches!(generate_cantor(&CantorSpec::new(2, 0.5, 30).unwrap()), Err(QcError::Resource(_))));
        assert!(matches!(generate_cantor(&CantorSpec::new(2, 1.0 / 32.0, 14).unwrap()), Err(QcError::Resource(_))));
    }

    #[test]
    fn spec_validation_and_parsing() {
        assert!(CantorSpec::new(1, 0.5, 3).is_err());
        assert!(CantorSpec::new(2, 0.6, 3).is_err());
        assert!(CantorSpec::new(2, 0.5, 0).is_err());
        let s: CantorSpec = "2:3:12".parse().unwrap();
        assert_eq!((s.pieces, s.depth), (2, 12));
        assert!((s.ratio - 1.0 / 3.0).abs() < 1e-16);
        assert!("2:3".parse::<CantorSpec>().is_err());
        assert!("a:3:2".parse::<CantorSpec>().is_err());
        assert_eq!(s.to_string(), "2:3:12");
    }

    #[test]
    fn touching_children_at_full_ratio() {
        let c = generate_cantor(&CantorSpec::new(2, 0.5, 4).unwrap()).unwrap();
        c.check().unwrap();
        assert_eq!(c.len(), 16);
    }

    #[test]
    fn cover_csv() {
        let c = generate_cantor(&CantorSpec::new(2, 0.25, 1).unwrap()).unwrap();
        assert_eq!(c.to_csv(), "left,right\n0e0,2.5e-1\n7.5e-1,1e0\n");
    }
}
