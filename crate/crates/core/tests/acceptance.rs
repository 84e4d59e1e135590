//! Acceptance suite: one line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use qcdim::bounds::{balance_root, gap_value, BoundMethod, GapKind};
use qcdim::claims::{verify_all, ClaimContext, ClaimReport};
use qcdim::fractal::{
    apply_map, box_dimension, catalogue, generate_cantor, sandwich_check, test_specs, CantorSpec, ModelMap,
    SandwichOptions, DEFAULT_SCALES,
};
use qcdim::optimizer::{improvement_table, Direction};
use qcdim::{HPReal, Precision};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn h(s: &str, prec: Precision) -> HPReal {
    HPReal::parse(s, prec).unwrap()
}

fn run_claims(pattern: &str, prec: Precision) -> ClaimReport {
    let pattern = glob::Pattern::new(pattern).unwrap();
    verify_all(&ClaimContext::new(prec), Some(&pattern), chrono::DateTime::UNIX_EPOCH)
}

fn claims_passed(report: &ClaimReport, expected: usize) -> Outcome {
    let failed: Vec<_> = report.claims.iter().filter(|c| !c.passed).map(|c| c.claim_id.as_str()).collect();
    let computed: Vec<_> = report.claims.iter().map(|c| format!("{}={}", c.claim_id, c.computed)).collect();
    outcome(
        report.claims.len() == expected && failed.is_empty(),
        format!("{}; failed: {failed:?}", computed.join(", ")),
    )
}

fn within(elapsed: Duration, limit_s: u64) -> bool {
    elapsed <= Duration::from_secs(limit_s)
}

fn roots() -> Outcome {
    let prec = Precision::default();
    let t = Instant::now();
    let x0 = balance_root(60, 27, prec).unwrap();
    let tx = t.elapsed();
    let t = Instant::now();
    let y0 = balance_root(99, 49, prec).unwrap();
    let ty = t.elapsed();
    let ok_x = (&x0 - &h("0.635212", prec)).abs() <= h("5e-7", prec);
    let ok_y = (&y0 - &h("0.6197", prec)).abs() <= h("5e-5", prec);
    outcome(
        ok_x && ok_y && within(tx, 1) && within(ty, 1),
        format!("x0={} ({tx:.2?}), y0={} ({ty:.2?})", x0.to_sci_string(10), y0.to_sci_string(10)),
    )
}

fn positivity() -> Outcome {
    let t = Instant::now();
    let report = run_claims("range.*", Precision::default());
    let elapsed = t.elapsed();
    let mut o = claims_passed(&report, 4);
    o.passed &= within(elapsed, 30);
    o.detail = format!("{} ({elapsed:.2?})", o.detail);
    o
}

fn threshold() -> Outcome {
    claims_passed(&run_claims("threshold.*", Precision::default()), 2)
}

fn point_g2() -> Outcome {
    let prec = Precision::default();
    let at80 = gap_value(GapKind::G2, &h("2.67e-21", prec), &(HPReal::one(prec) - h("1e-40", prec)));
    let rel80 = ((&at80 - &h("2.67e-21", prec)) / h("2.67e-21", prec)).abs().to_f64();
    let report80 = run_claims("point.g2", prec);
    let report15 = run_claims("point.g2", Precision::below_floor(15));
    let fails_at_15 = report15.claims.len() == 1 && !report15.claims[0].passed;
    outcome(
        rel80 <= 0.01 && report80.all_passed() && fails_at_15,
        format!(
            "g2={} (rel err {rel80:.1e}); 15-digit claim fails: {fails_at_15} (computed {})",
            at80.to_sci_string(6),
            report15.claims.first().map(|c| c.computed.to_string()).unwrap_or_default()
        ),
    )
}

fn clean_line() -> Outcome {
    claims_passed(&run_claims("grid.clean_line", Precision::default()), 1)
}

fn strict_improvement() -> Outcome {
    let t = Instant::now();
    let report = run_claims("grid.improved_*_strict", Precision::default());
    let elapsed = t.elapsed();
    let mut o = claims_passed(&report, 2);
    o.passed &= within(elapsed, 60);
    o.detail = format!("{} ({elapsed:.2?})", o.detail);
    o
}

fn dominance() -> Outcome {
    let prec = Precision::default();
    let ls: Vec<HPReal> = (1..=20).map(|i| HPReal::from_i64(i, prec) / 21).collect();
    let ks: Vec<HPReal> = ["1.01", "2", "10"].iter().map(|k| h(k, prec)).collect();
    let t = Instant::now();
    let rows = improvement_table(&ls, &ks, &[Direction::Lower, Direction::Upper]);
    let elapsed = t.elapsed();
    let violations = rows.iter().filter(|r| !r.result.as_ref().is_ok_and(|o| o.dominates_theorem())).count();
    outcome(violations == 0 && rows.len() == 120, format!("{violations} violations in {} cells ({elapsed:.2?})", rows.len()))
}

fn identity() -> Outcome {
    claims_passed(&run_claims("grid.identity_collapse", Precision::default()), 1)
}

fn duality() -> Outcome {
    claims_passed(&run_claims("grid.exponent_duality", Precision::default()), 1)
}

fn calibration() -> Outcome {
    let t = Instant::now();
    let est = |m, r, n| box_dimension(&generate_cantor(&CantorSpec::new(m, r, n).unwrap()).unwrap(), DEFAULT_SCALES).unwrap().value;
    let thirds = est(2, 1.0 / 3.0, 12);
    let quarter = est(2, 0.25, 10);
    let ok_thirds = (thirds - 2f64.ln() / 3f64.ln()).abs() <= 0.02;
    let ok_quarter = (quarter - 0.5).abs() <= 0.03;
    let mut worst_affine = 0f64;
    for spec in test_specs() {
        let cover = generate_cantor(&spec).unwrap();
        let base = box_dimension(&cover, DEFAULT_SCALES).unwrap().value;
        for map in [ModelMap::affine(2.0, 1.0).unwrap(), ModelMap::affine(-0.5, 3.0).unwrap()] {
            let d = box_dimension(&apply_map(&map, &cover).unwrap(), DEFAULT_SCALES).unwrap().value;
            worst_affine = worst_affine.max((d - base).abs());
        }
    }
    let elapsed = t.elapsed();
    outcome(
        ok_thirds && ok_quarter && worst_affine <= 0.01 && within(elapsed, 10),
        format!("middle-thirds {thirds:.4}, quarter {quarter:.4}, affine drift {worst_affine:.2e} ({elapsed:.2?})"),
    )
}

fn sandwich() -> Outcome {
    let opts = SandwichOptions::default();
    let mut cells = 0;
    let mut violations = Vec::new();
    for spec in test_specs() {
        for map in catalogue() {
            let row = sandwich_check(&spec, &map, &[BoundMethod::Astala], &opts).unwrap().remove(0);
            cells += 1;
            if row.inside != Some(true) {
                violations.push(format!("{spec} {map}: {:.4}", row.estimate.value));
            }
        }
    }
    outcome(violations.is_empty(), format!("{} violations in {cells} cells {violations:?}", violations.len()))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("root reproduction", roots),
        ("positivity ranges", positivity),
        ("threshold consistency", threshold),
        ("point claim g2 and precision contract", point_g2),
        ("clean line-bound collapse", clean_line),
        ("strict improvement", strict_improvement),
        ("optimizer dominance", dominance),
        ("identity collapse", identity),
        ("exponent duality", duality),
        ("estimator calibration", calibration),
        ("sandwich soundness", sandwich),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        failures += usize::from(!o.passed);
        println!("[{}] criterion {:>2} {name}: {}", if o.passed { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
