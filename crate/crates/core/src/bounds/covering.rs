//! Constants in the covering-sum estimates for maps with antisymmetric
//! dilatation, after deforming the map at parameter `α ∈ (k, 1)`.

use crate::bounds::classic::exponent_maps;
use crate::bounds::{DimensionValue, Distortion};
use crate::error::{QcError, Result};
use crate::numerics::HPReal;

#[derive(Debug, Clone)]
pub struct CoveringConstants {
    pub alpha: HPReal,
    /// `ℓ = exp(-π (1 + k/α) / (1 - k/α))`
    pub ell: HPReal,
    /// `(8/ℓ)^{t(α)}`
    pub upper_coeff: HPReal,
    /// `((1-α²)/(1+α²)) · t(α)/t`
    pub upper_sum_exponent: HPReal,
    /// `8^{t*(α)} ℓ^{-t*(α)} 8^{-R t*(α)} ℓ^{R t*(α)}` with `R = (1+α²)/(1-α²)`
    pub lower_coeff: HPReal,
    /// `R · t*(α)/t`
    pub lower_sum_exponent: HPReal,
    /// Positive lower bound on covering sums of the image at exponent
    /// `(t-ε)*(α)`.
    pub d_const: Option<HPReal>,
    pub c_k: HPReal,
    pub epsilon: Option<HPReal>,
}

/// Evaluates the covering constants. `c_k` is the quasisymmetry constant of
/// the map (ratio of circumscribed to inscribed radii of preimages of
/// balls); it has no closed form and must be supplied.
pub fn covering_constants(
    t: &DimensionValue,
    d: &Distortion,
    alpha: &HPReal,
    c_k: &HPReal,
    epsilon: Option<&HPReal>,
) -> Result<CoveringConstants> {
    let prec = t.value().precision();
    let one = HPReal::one(prec);
    let k = d.k();
    if alpha <= k || *alpha >= one {
        return Err(QcError::Domain(format!(
            "alpha must lie in (k, 1) = ({}, 1), got {}",
            k.to_sci_string(12),
            alpha.to_sci_string(12)
        )));
    }
    if *c_k < one {
        return Err(QcError::Domain("quasisymmetry constant C(K) must be at least 1".into()));
    }
    if let Some(eps) = epsilon {
        if !eps.is_positive() || eps >= t.value() {
            return Err(QcError::Domain("epsilon must lie in (0, t)".into()));
        }
    }

    let tv = t.value();
    let ratio = k / alpha;
    let ell = (-(HPReal::pi(prec) * (&one + &ratio) / (&one - &ratio))).exp();
    let a2 = alpha.square();
    let r = (&one + &a2) / (&one - &a2);
    let (t_alpha, t_star_alpha) = exponent_maps(t, alpha)?;
    let eight = HPReal::from_i64(8, prec);

    let upper_coeff = (&eight / &ell).powf(&t_alpha);
    let upper_sum_exponent = &t_alpha / &r / tv;
    let r_ts = &r * &t_star_alpha;
    let lower_coeff = eight.powf(&t_star_alpha) * ell.powf(&-&t_star_alpha) * eight.powf(&-&r_ts) * ell.powf(&r_ts);
    let lower_sum_exponent = &r_ts / tv;

    let d_const = match epsilon {
        None => None,
        Some(eps) => {
            let te = tv - eps;
            let (_, te_star) = exponent_maps(&DimensionValue::new(te.clone())?, alpha)?;
            let base = c_k.recip().powf(&te) * (HPReal::one(prec) / 5).powf(&te);
            let exponent = &r * &te_star / &te;
            let lc = eight.powf(&te_star) * ell.powf(&-&te_star) * eight.powf(&-(&r * &te_star)) * ell.powf(&(&r * &te_star));
            Some(lc * base.powf(&exponent))
        }
    };

    Ok(CoveringConstants {
        alpha: alpha.clone(),
        ell,
        upper_coeff,
        upper_sum_exponent,
        lower_coeff,
        lower_sum_exponent,
        d_const,
        c_k: c_k.clone(),
        epsilon: epsilon.cloned(),
    })
}
