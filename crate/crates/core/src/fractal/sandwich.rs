use crate::bounds::{BoundMethod, DimensionValue, Distortion};
use crate::error::Result;
use crate::fractal::{apply_map, box_dimension, generate_cantor, CantorSpec, DimEstimate, ModelMap};
use crate::numerics::{HPReal, Precision};
use crate::output::Table;

#[derive(Debug, Clone)]
pub struct SandwichOptions {
    pub num_scales: usize,
    /// Absolute slack on both sides of each bound.
    pub slack: f64,
    pub precision: Precision,
}

impl Default for SandwichOptions {
    fn default() -> Self {
        SandwichOptions { num_scales: super::DEFAULT_SCALES, slack: 0.05, precision: Precision::default() }
    }
}

#[derive(Debug, Clone)]
pub struct SandwichRow {
    pub spec: String,
    pub map: String,
    pub big_k: f64,
    pub l_analytic: f64,
    pub estimate: DimEstimate,
    pub method: BoundMethod,
    pub lower: Option<HPReal>,
    pub upper: Option<HPReal>,
    /// `None` when the bound could not be evaluated.
    pub inside: Option<bool>,
    pub hypotheses_met: bool,
    pub error: Option<String>,
}

impl SandwichRow {
    /// An estimate outside a bound that holds for the map's class.
    pub fn is_violation(&self) -> bool {
        self.method.applies_to_symmetric_maps() && self.inside == Some(false)
    }
}

/// Box-counting estimate of the mapped Cantor set against each bound at
/// `(L, K)` with `L` the analytic dimension and `K` the map distortion.
pub fn sandwich_check(
    spec: &CantorSpec,
    map: &ModelMap,
    methods: &[BoundMethod],
    opts: &SandwichOptions,
) -> Result<Vec<SandwichRow>> {
    let cover = apply_map(map, &generate_cantor(spec)?)?;
    let estimate = box_dimension(&cover, opts.num_scales)?;
    let l = spec.analytic_dimension();
    let big_k = map.distortion_k();
    let prec = opts.precision;
    let t = DimensionValue::new(HPReal::from_f64(l, prec))?;
    let d = Distortion::from_big_k(HPReal::from_f64(big_k, prec))?;

    Ok(methods
        .iter()
        .map(|&method| {
            let (lower, upper, inside, hyp, error) = match method.evaluate(&t, &d) {
                Ok(b) => {
                    let lo = b.lower.to_f64() - opts.slack;
                    let hi = b.upper.to_f64() + opts.slack;
                    let inside = estimate.value >= lo && estimate.value <= hi;
                    (Some(b.lower), Some(b.upper), Some(inside), b.hypotheses_met, None)
                }
                Err(e) => (None, None, None, false, Some(e.to_string())),
            };
            SandwichRow {
                spec: spec.to_string(),
                map: map.to_string(),
                big_k,
                l_analytic: l,
                estimate: estimate.clone(),
                method,
                lower,
                upper,
                inside,
                hypotheses_met: hyp,
                error,
            }
        })
        .collect())
}

pub const SANDWICH_COLUMNS: [&str; 10] =
    ["spec", "map", "K", "L_analytic", "estimate", "r2", "method", "lower", "upper", "inside"];

pub fn sandwich_table(rows: &[SandwichRow]) -> Table {
    let mut t = Table::new(SANDWICH_COLUMNS);
    for r in rows {
        t.push(vec![
            r.spec.as_str().into(),
            r.map.as_str().into(),
            r.big_k.into(),
            r.l_analytic.into(),
            r.estimate.value.into(),
            r.estimate.r2.into(),
            r.method.as_str().into(),
            r.lower.as_ref().into(),
            r.upper.as_ref().into(),
            r.inside.into(),
        ]);
    }
    t
}

/// Specs used by the soundness probe: all inside `[1, 2]` so the power
/// stretches act bi-Lipschitz.
pub fn test_specs() -> Vec<CantorSpec> {
    [(2, 1.0 / 3.0, 12), (2, 0.25, 10), (3, 0.2, 8), (2, 0.45, 14), (4, 0.2, 7)]
        .into_iter()
        .map(|(m, r, n)| CantorSpec::placed(m, r, n, 1.0, 1.0).expect("valid spec"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractal::catalogue;

    #[test]
    fn identity_is_inside_everything() {
        let spec = CantorSpec::new(2, 1.0 / 3.0, 12).unwrap();
        let rows = sandwich_check(&spec, &ModelMap::Identity, &BoundMethod::ALL, &SandwichOptions::default()).unwrap();
        assert_eq!(rows.len(), BoundMethod::ALL.len());
        assert!(rows.iter().all(|r| r.inside == Some(true)));
    }

    #[test]
    fn power_stretch_preserves_dimension_away_from_zero() {
        let spec = CantorSpec::placed(2, 1.0 / 3.0, 12, 1.0, 1.0).unwrap();
        let plain = box_dimension(&generate_cantor(&spec).unwrap(), 16).unwrap().value;
        let rows = sandwich_check(&spec, &ModelMap::power(1.5).unwrap(), &BoundMethod::ALL, &SandwichOptions::default()).unwrap();
        assert!((rows[0].estimate.value - plain).abs() < 0.02);
        assert!(rows.iter().all(|r| r.inside == Some(true)));
    }

    #[test]
    fn quarter_interval_square() {
        let spec = CantorSpec::placed(2, 0.25, 10, 0.25, 0.75).unwrap();
        let methods = [BoundMethod::Astala, BoundMethod::ComposedLine];
        let rows = sandwich_check(&spec, &ModelMap::power(2.0).unwrap(), &methods, &SandwichOptions::default()).unwrap();
        assert!(rows.iter().all(|r| r.inside == Some(true)));
    }

    #[test]
    fn no_violations_on_catalogue() {
        for spec in test_specs() {
            for map in catalogue() {
                let rows = sandwich_check(&spec, &map, &[BoundMethod::Astala], &SandwichOptions::default()).unwrap();
                assert!(!rows[0].is_violation(), "{spec} {map} {:?}", rows[0].estimate);
            }
        }
    }

    #[test]
    fn table_columns() {
        let spec = CantorSpec::new(2, 0.25, 6).unwrap();
        let rows = sandwich_check(&spec, &ModelMap::Identity, &[BoundMethod::Astala], &SandwichOptions::default()).unwrap();
        let csv = sandwich_table(&rows).to_csv();
        assert!(csv.starts_with("spec,map,K,L_analytic,estimate,r2,method,lower,upper,inside\n2:4:6,identity,1,0.5,"));
    }
}
