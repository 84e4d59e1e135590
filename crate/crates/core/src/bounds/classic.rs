use crate::bounds::{BoundMethod, BoundSet, DimensionValue, Distortion};
use crate::error::{QcError, Result};
use crate::numerics::HPReal;

/// `1 / (K (1/x - 1/2) + 1/2)`: general lower estimate applied to a set of
/// dimension `x`.
pub fn astala_lower_at(x: &HPReal, big_k: &HPReal) -> HPReal {
    let half = HPReal::one(x.precision()) / 2;
    (big_k * &(x.recip() - &half) + &half).recip()
}

/// `1 / ((1/K)(1/x - 1/2) + 1/2)`: general upper estimate.
pub fn astala_upper_at(x: &HPReal, big_k: &HPReal) -> HPReal {
    let half = HPReal::one(x.precision()) / 2;
    ((x.recip() - &half) / big_k + &half).recip()
}

pub fn astala_bounds(t: &DimensionValue, d: &Distortion) -> BoundSet {
    let lower = astala_lower_at(t.value(), d.K());
    let upper = astala_upper_at(t.value(), d.K());
    BoundSet::plain(t, d, lower, upper, BoundMethod::Astala)
}

fn check_k(k: &HPReal) -> Result<()> {
    if k.is_negative() || *k >= HPReal::one(k.precision()) {
        return Err(QcError::Domain(format!("k must lie in [0, 1), got {}", k.to_sci_string(12))));
    }
    Ok(())
}

/// Exponent maps `(t(k), t*(k))`:
/// `t(k) = (1+k²)t / (1-k²+k²t)`, `t*(k) = (1-k²)t / (1+k²-k²t)`.
pub fn exponent_maps(t: &DimensionValue, k: &HPReal) -> Result<(HPReal, HPReal)> {
    check_k(k)?;
    let t = t.value();
    let k2 = k.square();
    let one = HPReal::one(t.precision());
    let k2t = &k2 * t;
    let t_k = (&one + &k2) * t / (&one - &k2 + &k2t);
    let t_star_k = (&one - &k2) * t / (&one + &k2 - &k2t);
    Ok((t_k, t_star_k))
}

/// `t*(k) ≤ dim f(E) ≤ t(k)` for line subsets under maps with antisymmetric
/// dilatation.
pub fn antisymmetric_bounds(t: &DimensionValue, d: &Distortion) -> Result<BoundSet> {
    t.require_at_most_one("antisymmetric bound")?;
    let (upper, lower) = exponent_maps(t, d.k())?;
    Ok(BoundSet::plain(t, d, lower, upper, BoundMethod::Antisymmetric))
}

/// `Δ(d, k) = d(1-k²) / (1 + k√(1-d))²`. Negative `k` is allowed (used by Δ*).
pub fn delta(dim: &HPReal, k: &HPReal) -> HPReal {
    let one = HPReal::one(dim.precision());
    let s = (&one - dim).sqrt();
    dim * &(&one - &k.square()) / (&one + &(k * &s)).square()
}

/// `Δ*(d, k) = Δ(d, -min{k, √(1-d)})`.
pub fn delta_star(dim: &HPReal, k: &HPReal) -> HPReal {
    let s = (HPReal::one(dim.precision()) - dim).sqrt();
    let m = k.clone().min(s);
    delta(dim, &-m)
}

pub fn symmetric_bounds(d_in: &DimensionValue, d: &Distortion) -> Result<BoundSet> {
    d_in.require_at_most_one("symmetric bound")?;
    let lower = delta(d_in.value(), d.k());
    let upper = delta_star(d_in.value(), d.k());
    Ok(BoundSet::plain(d_in, d, lower, upper, BoundMethod::Symmetric))
}

/// Lower estimate of the symmetric/antisymmetric factorization:
/// `(1-k²)Δ / (1 + k² - k²Δ)` with `Δ = Δ(L, k)`.
pub fn composed_lower_at(l: &HPReal, k: &HPReal) -> HPReal {
    let one = HPReal::one(l.precision());
    let k2 = k.square();
    let dl = delta(l, k);
    (&one - &k2) * &dl / (&one + &k2 - &(&k2 * &dl))
}

/// Upper estimate: `(1+k²)L / (1 + k² - 2k√(1-L))` while `L ≤ 1 - k²`,
/// the quasicircle cap `1 + k²` above that.
pub fn composed_upper_at(l: &HPReal, k: &HPReal) -> HPReal {
    let one = HPReal::one(l.precision());
    let k2 = k.square();
    if *l <= &one - &k2 {
        let s = (&one - l).sqrt();
        (&one + &k2) * l / (&one + &k2 - &(k * &s * 2))
    } else {
        &one + &k2
    }
}

pub fn composed_line_bounds(l: &DimensionValue, d: &Distortion) -> Result<BoundSet> {
    l.require_at_most_one("composed line bound")?;
    let lower = composed_lower_at(l.value(), d.k());
    let upper = composed_upper_at(l.value(), d.k());
    let mut set = BoundSet::plain(l, d, lower, upper, BoundMethod::ComposedLine);
    if *l.value() > HPReal::one(l.value().precision()) - d.k().square() {
        set.notes = "upper bound is the quasicircle cap 1 + k^2".into();
    }
    Ok(set)
}

/// Harnack-type interval for a nonnegative harmonic function symmetric in
/// the real axis: `v0(1-y²)/(1+y²) ≤ v(iy) ≤ v0(1+y²)/(1-y²)`.
pub fn harnack_interval(v0: &HPReal, y: &HPReal) -> Result<(HPReal, HPReal)> {
    let one = HPReal::one(v0.precision());
    if v0.is_negative() {
        return Err(QcError::Domain("v0 must be nonnegative".into()));
    }
    if y.abs() >= one {
        return Err(QcError::Domain(format!("|y| must be below 1, got {}", y.to_sci_string(12))));
    }
    let y2 = y.square();
    let ratio = (&one - &y2) / (&one + &y2);
    Ok((v0 * &ratio, v0 / &ratio))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::Precision;

    fn p() -> Precision {
        Precision::default()
    }
    fn h(s: &str) -> HPReal {
        HPReal::parse(s, p()).unwrap()
    }
    fn dim(s: &str) -> DimensionValue {
        DimensionValue::parse(s, p()).unwrap()
    }
    fn big_k(s: &str) -> Distortion {
        Distortion::from_big_k(h(s)).unwrap()
    }
    fn small_k(s: &str) -> Distortion {
        Distortion::from_k(h(s)).unwrap()
    }
    fn close(a: &HPReal, b: &HPReal) -> bool {
        (a - b).abs() < h("1e-70")
    }

    #[test]
    fn astala_examples() {
        let b = astala_bounds(&dim("1"), &big_k("1"));
        assert!(close(&b.lower, &h("1")) && close(&b.upper, &h("1")));
        let b = astala_bounds(&dim("2"), &big_k("7.5"));
        assert!(close(&b.lower, &h("2")) && close(&b.upper, &h("2")));
        // t=1, K=2: 1/(2·0.5+0.5) = 2/3 and 1/(0.25+0.5) = 4/3
        let b = astala_bounds(&dim("1"), &big_k("2"));
        assert!(close(&b.lower, &(h("2") / 3)));
        assert!(close(&b.upper, &(h("4") / 3)));
    }

    #[test]
    fn exponent_map_examples() {
        let (a, b) = exponent_maps(&dim("0.37"), &h("0")).unwrap();
        assert!(close(&a, &h("0.37")) && close(&b, &h("0.37")));
        let (a, b) = exponent_maps(&dim("2"), &h("0.8")).unwrap();
        assert!(close(&a, &h("2")) && close(&b, &h("2")));
        let (a, b) = exponent_maps(&dim("1"), &h("0.5")).unwrap();
        assert!(close(&a, &h("1.25")) && close(&b, &h("0.75")));
        // cross-check t_k·(1-k²+k²t) = (1+k²)t at t=0.3, k=0.4
        let (a, _) = exponent_maps(&dim("0.3"), &h("0.4")).unwrap();
        assert!(close(&(a * (h("1") - h("0.16") + h("0.16") * h("0.3"))), &(h("1.16") * h("0.3"))));
        assert!(exponent_maps(&dim("1"), &h("1")).is_err());
    }

    #[test]
    fn antisymmetric_examples() {
        let b = antisymmetric_bounds(&dim("1"), &small_k("0")).unwrap();
        assert!(close(&b.lower, &h("1")) && close(&b.upper, &h("1")));
        let b = antisymmetric_bounds(&dim("1"), &small_k("0.3")).unwrap();
        assert!(close(&b.lower, &h("0.91")) && close(&b.upper, &h("1.09")));
        // t=0.5, k=0.5 → 1/3 and 5/7
        let b = antisymmetric_bounds(&dim("0.5"), &small_k("0.5")).unwrap();
        assert!(close(&b.lower, &(h("1") / 3)));
        assert!(close(&b.upper, &(h("5") / 7)));
        assert!(antisymmetric_bounds(&dim("1.5"), &small_k("0.5")).is_err());
    }

    #[test]
    fn symmetric_examples() {
        let b = symmetric_bounds(&dim("1"), &small_k("0.4")).unwrap();
        assert!(close(&b.lower, &h("0.84")) && close(&b.upper, &h("1")));
        let b = symmetric_bounds(&dim("0.61"), &small_k("0")).unwrap();
        assert!(close(&b.lower, &h("0.61")) && close(&b.upper, &h("0.61")));
        // d=0.75, k=0.25: 0.703125/1.265625 = 5/9, upper 0.703125/0.765625
        let b = symmetric_bounds(&dim("0.75"), &small_k("0.25")).unwrap();
        assert!(close(&b.lower, &(h("5") / 9)));
        assert!(close(&b.upper, &(h("0.703125") / h("0.765625"))));
        // clamp regime m = √(1-d): d=0.99, k=0.5 → m=0.1, Δ(d,-0.1) = 0.99·0.99/0.99² = 1
        let b = symmetric_bounds(&dim("0.99"), &small_k("0.5")).unwrap();
        assert!(close(&b.upper, &h("1")));
        assert!(symmetric_bounds(&dim("1.2"), &small_k("0.5")).is_err());
    }

    #[test]
    fn composed_line_examples() {
        let k = h("0.3");
        let b = composed_line_bounds(&dim("1"), &Distortion::from_k(k.clone()).unwrap()).unwrap();
        let k2 = k.square();
        let one = h("1");
        let want_lower = (&one - &k2).square() / (&one + &k2.square());
        assert!(close(&b.lower, &want_lower));
        assert!(close(&b.upper, &(&one + &k2)));

        let b = composed_line_bounds(&dim("0.42"), &small_k("0")).unwrap();
        assert!(close(&b.lower, &h("0.42")) && close(&b.upper, &h("0.42")));
    }

    #[test]
    fn composed_line_stepwise_oracle() {
        // L=0.5, k=0.1, written out step by step with independently typed
        // literals (√0.5 = 0.70710678118654752440084436210484903928483593768847...).
        let s = h("0.70710678118654752440084436210484903928483593768847403658833986899536623923105");
        let delta_v = h("0.5") * h("0.99") / (h("1") + h("0.1") * &s).square();
        let lower = h("0.99") * &delta_v / (h("1.01") - h("0.01") * &delta_v);
        let upper = h("1.01") * h("0.5") / (h("1.01") - h("0.2") * &s);
        let b = composed_line_bounds(&dim("0.5"), &small_k("0.1")).unwrap();
        assert!(close(&b.lower, &lower));
        assert!(close(&b.upper, &upper));
        // frozen 30-digit values from the same chain
        assert_eq!(b.lower.to_sci_string(12), lower.to_sci_string(12));
    }

    #[test]
    fn harnack_examples() {
        let (lo, hi) = harnack_interval(&h("1"), &h("0")).unwrap();
        assert!(close(&lo, &h("1")) && close(&hi, &h("1")));
        let (lo, hi) = harnack_interval(&h("0"), &h("0.7")).unwrap();
        assert!(lo.is_zero() && hi.is_zero());
        let (lo, hi) = harnack_interval(&h("1"), &h("0.5")).unwrap();
        assert!(close(&lo, &h("0.6")) && close(&hi, &(h("5") / 3)));
        assert!(harnack_interval(&h("1"), &h("1")).is_err());
        assert!(harnack_interval(&h("-1"), &h("0.1")).is_err());
    }
}
