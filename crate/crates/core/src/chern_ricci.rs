//! Chern and Ricci conformal factors and the Chern-Ricci functions.
//!
//! For a unit vector `V = π⁻¹(α)` and the angle function `n_V`, the metrics
//! `(1 ± n_V)² g` and `√(−K) g` are flat. A Chern-Ricci function is a weighted
//! sum of `ln[(1 ± n_{V_j})² / √(−K)]`, which is harmonic in the conformal
//! coordinate `G`.

use num_rational::Ratio;

use crate::geom::{metric_factor, sqrt_neg_curvature};
use crate::prelude::*;
use crate::sphere::{one_minus_angle, one_plus_angle, ExtendedComplex, ANGLE_GUARD};
use crate::wdsl::WeierstrassData;
use crate::{Error, Result};

/// Which of `1 + n_V` (`Plus`) or `1 − n_V` (`Minus`) a term uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn symbol(&self) -> char {
        match self {
            Side::Plus => '+',
            Side::Minus => '-',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrTerm {
    pub alpha: ExtendedComplex,
    pub weight: Ratio<i64>,
    pub side: Side,
}

/// How the terms are combined: `Weighted` is `Σ λ_j term_j`; `Sum` drops the
/// weights and adds the terms (the form in which the Scherk and TPMS
/// constants are usually quoted).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Normalization {
    Weighted,
    Sum,
}

/// Terms `(α_j, λ_j, side_j)` with `Σ λ_j = 1` exactly and distinct `α_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChernRicciSpec {
    terms: Vec<CrTerm>,
    normalization: Normalization,
}

impl ChernRicciSpec {
    pub fn new(terms: Vec<CrTerm>, normalization: Normalization) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidSpec("no terms".into()));
        }
        let total: Ratio<i64> = terms.iter().map(|t| t.weight).sum();
        if total != Ratio::from_integer(1) {
            return Err(Error::InvalidSpec(format!("weights sum to {} instead of 1", total)));
        }
        for (k, t) in terms.iter().enumerate() {
            if let ExtendedComplex::Finite(a) = t.alpha {
                if !a.is_finite() {
                    return Err(Error::InvalidSpec("non-finite vertex parameter".into()));
                }
            }
            if terms[..k].iter().any(|s| s.alpha.chordal_distance(&t.alpha) <= 1e-12) {
                return Err(Error::InvalidSpec(format!("repeated vertex {}", t.alpha)));
            }
        }
        Ok(ChernRicciSpec { terms, normalization })
    }

    /// Equal weights `1/N` on the given parameters, all on the same side.
    pub fn uniform(alphas: &[ExtendedComplex], side: Side, normalization: Normalization) -> Result<Self> {
        let n = alphas.len() as i64;
        if n == 0 {
            return Err(Error::InvalidSpec("no terms".into()));
        }
        let terms = alphas.iter().map(|&alpha| CrTerm { alpha, weight: Ratio::new(1, n), side }).collect();
        Self::new(terms, normalization)
    }

    pub fn single(alpha: ExtendedComplex, side: Side) -> Self {
        ChernRicciSpec {
            terms: vec![CrTerm { alpha, weight: Ratio::from_integer(1), side }],
            normalization: Normalization::Weighted,
        }
    }

    pub fn terms(&self) -> &[CrTerm] {
        &self.terms
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn with_normalization(mut self, normalization: Normalization) -> Self {
        self.normalization = normalization;
        self
    }
}

pub(crate) fn ratio_f64(r: &Ratio<i64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `1 ∓ n_V(G)`, guarded away from zero.
pub fn side_value(g: Complex64, alpha: ExtendedComplex, side: Side) -> Result<f64> {
    let v = match side {
        Side::Minus => one_minus_angle(g, alpha),
        Side::Plus => one_plus_angle(g, alpha),
    };
    if v > ANGLE_GUARD {
        Ok(v)
    } else {
        Err(Error::AntipodalPoint { at: g })
    }
}

/// `(1 + n_V)²`, the Chern conformal factor.
pub fn chern_factor(data: &WeierstrassData, g: Complex64, alpha: ExtendedComplex) -> Result<f64> {
    metric_factor(data, g)?;
    side_value(g, alpha, Side::Plus).map(|v| v * v)
}

/// `√(−K)`, the Ricci conformal factor.
pub fn ricci_factor(data: &WeierstrassData, g: Complex64) -> Result<f64> {
    sqrt_neg_curvature(data, g)
}

/// `ln[(1 ∓ n_V)² / √(−K)]` from the angle function and the curvature.
pub fn cr_term_direct(data: &WeierstrassData, g: Complex64, alpha: ExtendedComplex, side: Side) -> Result<f64> {
    let s = sqrt_neg_curvature(data, g)?;
    let v = side_value(g, alpha, side)?;
    Ok(2.0 * v.ln() - s.ln())
}

pub fn cr_function_direct(data: &WeierstrassData, g: Complex64, spec: &ChernRicciSpec) -> Result<f64> {
    let s = sqrt_neg_curvature(data, g)?;
    let ln_s = s.ln();
    let mut total = 0.0;
    for t in &spec.terms {
        let term = 2.0 * side_value(g, t.alpha, t.side)?.ln() - ln_s;
        total += match spec.normalization {
            Normalization::Weighted => ratio_f64(&t.weight) * term,
            Normalization::Sum => term,
        };
    }
    Ok(total)
}

/// `Π (1 ∓ n_{V_j})^{2λ_j}`: the conformal factor making `g` flat.
pub fn flat_factor(data: &WeierstrassData, g: Complex64, spec: &ChernRicciSpec) -> Result<f64> {
    sqrt_neg_curvature(data, g)?;
    let mut ln = 0.0;
    for t in &spec.terms {
        ln += 2.0 * ratio_f64(&t.weight) * side_value(g, t.alpha, t.side)?.ln();
    }
    Ok(ln.exp())
}

/// `ln[(1 − n_1²)(1 − n_2²) / (−K)]` for two vertex parameters.
pub fn product_form(data: &WeierstrassData, g: Complex64, alpha1: ExtendedComplex, alpha2: ExtendedComplex) -> Result<f64> {
    let s = sqrt_neg_curvature(data, g)?;
    let mut ln = -2.0 * s.ln();
    for a in [alpha1, alpha2] {
        ln += side_value(g, a, Side::Minus)?.ln() + side_value(g, a, Side::Plus)?.ln();
    }
    Ok(ln)
}

/// Closed forms in the Weierstrass data of the single-vertex functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeierstrassVariant {
    /// `ln[(1 − n_V)² / √(−K)]`
    OneMinus,
    /// `ln[(1 + n_V)² / √(−K)]`
    OnePlus,
    /// `ln[(1 − n_V²) / √(−K)]`, the mean of the other two
    Product,
}

impl WeierstrassVariant {
    pub const ALL: [WeierstrassVariant; 3] =
        [WeierstrassVariant::OneMinus, WeierstrassVariant::OnePlus, WeierstrassVariant::Product];
}

/// The same value as the direct form, written through `G`, `α` and `f(G)`:
///
/// - `OneMinus`: `ln[(2/(1+|α|²))² |(G−α)⁴ f / (4G)|]`, and `ln|f/G|` at `α = ∞`;
/// - `OnePlus`: `ln[(2/(1+|α|²))² |(ᾱG+1)⁴ f / (4G)|]`, and `ln|G³ f|` at `α = ∞`;
/// - `Product`: `ln[(2/(1+|α|²))² |(G−α)²(ᾱG+1)² f / (4G)|]`, and `ln|G f|` at `α ∈ {0, ∞}`.
///
/// For `|α| > 1` the formulas are evaluated through `β = 1/α`.
pub fn cr_function_weierstrass(
    data: &WeierstrassData,
    g: Complex64,
    alpha: ExtendedComplex,
    variant: WeierstrassVariant,
) -> Result<f64> {
    sqrt_neg_curvature(data, g)?;
    match variant {
        WeierstrassVariant::OneMinus => side_value(g, alpha, Side::Minus)?,
        WeierstrassVariant::OnePlus => side_value(g, alpha, Side::Plus)?,
        WeierstrassVariant::Product => side_value(g, alpha, Side::Minus)?.min(side_value(g, alpha, Side::Plus)?),
    };
    let af = data.abs_f(g)?;
    let ag = g.norm();
    let one = Complex64::new(1.0, 0.0);
    let value = match alpha {
        ExtendedComplex::Infinity => match variant {
            WeierstrassVariant::OneMinus => (af / ag).ln(),
            WeierstrassVariant::OnePlus => (ag.powi(3) * af).ln(),
            WeierstrassVariant::Product => (ag * af).ln(),
        },
        ExtendedComplex::Finite(a) => {
            let (scale, minus, plus) = if a.norm_sqr() > 1.0 {
                let b = a.inv();
                // G − α ∝ Gβ − 1 and ᾱG + 1 ∝ G + β̄ with the |α| powers absorbed in the scale
                (2.0 / (1.0 + b.norm_sqr()), (g * b - one).norm(), (g + b.conj()).norm())
            } else {
                (2.0 / (1.0 + a.norm_sqr()), (g - a).norm(), (a.conj() * g + one).norm())
            };
            let core = af / (4.0 * ag);
            let lin = match variant {
                WeierstrassVariant::OneMinus => minus.powi(4),
                WeierstrassVariant::OnePlus => plus.powi(4),
                WeierstrassVariant::Product => (minus * plus).powi(2),
            };
            2.0 * scale.ln() + lin.ln() + core.ln()
        }
    };
    Ok(value)
}

/// The direct-form counterpart of each [`WeierstrassVariant`].
pub fn cr_variant_direct(data: &WeierstrassData, g: Complex64, alpha: ExtendedComplex, variant: WeierstrassVariant) -> Result<f64> {
    match variant {
        WeierstrassVariant::OneMinus => cr_term_direct(data, g, alpha, Side::Minus),
        WeierstrassVariant::OnePlus => cr_term_direct(data, g, alpha, Side::Plus),
        WeierstrassVariant::Product => {
            let s = sqrt_neg_curvature(data, g)?;
            Ok(side_value(g, alpha, Side::Minus)?.ln() + side_value(g, alpha, Side::Plus)?.ln() - s.ln())
        }
    }
}

/// A positive scalar field `⋆(G)` defining the conformal metric `⋆ g`.
#[derive(Debug, Clone, PartialEq)]
pub enum ConformalFactorField {
    /// `(1 + n_V)²`
    Chern(ExtendedComplex),
    /// `√(−K)`
    Ricci,
    /// [`flat_factor`] of a spec
    Flat(ChernRicciSpec),
    /// `1`: the induced metric itself
    Induced,
    /// `4 / ((1+|G|²)² Λ)`, turning `g` into the round unit-sphere metric
    RoundSphere,
}

impl ConformalFactorField {
    pub fn value(&self, data: &WeierstrassData, g: Complex64) -> Result<f64> {
        match self {
            ConformalFactorField::Chern(alpha) => chern_factor(data, g, *alpha),
            ConformalFactorField::Ricci => ricci_factor(data, g),
            ConformalFactorField::Flat(spec) => flat_factor(data, g, spec),
            ConformalFactorField::Induced => metric_factor(data, g).map(|_| 1.0),
            ConformalFactorField::RoundSphere => {
                let l = metric_factor(data, g)?;
                Ok(4.0 / ((1.0 + g.norm_sqr()).powi(2) * l))
            }
        }
    }

    pub fn ln_value(&self, data: &WeierstrassData, g: Complex64) -> Result<f64> {
        self.value(data, g).map(f64::ln)
    }

    pub fn label(&self) -> String {
        match self {
            ConformalFactorField::Chern(a) => format!("chern({})", a),
            ConformalFactorField::Ricci => "ricci".into(),
            ConformalFactorField::Flat(spec) => format!("flat({} terms)", spec.terms().len()),
            ConformalFactorField::Induced => "induced".into(),
            ConformalFactorField::RoundSphere => "round-sphere".into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::antipode_parameter;
    use crate::wdsl::{parse_weierstrass, Params};

    fn data(src: &str) -> WeierstrassData {
        parse_weierstrass(src, &Params::new()).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn fin(re: f64, im: f64) -> ExtendedComplex {
        ExtendedComplex::finite(re, im)
    }

    #[test]
    fn chern_factor_examples() {
        let cat = data("1/G");
        let g = c(0.7, -0.4);
        assert!((chern_factor(&cat, g, ExtendedComplex::Finite(g)).unwrap() - 4.0).abs() < 1e-14);
        assert!((chern_factor(&cat, c(1.0, 0.0), fin(0.0, 0.0)).unwrap() - 1.0).abs() < 1e-15);
        let anti = antipode_parameter(ExtendedComplex::Finite(g));
        assert!(matches!(chern_factor(&cat, g, anti), Err(Error::AntipodalPoint { .. })));
    }

    #[test]
    fn ricci_factor_examples() {
        assert!((ricci_factor(&data("G"), c(0.01, 0.0)).unwrap() - 4.0).abs() < 1e-3);
        assert!((ricci_factor(&data("1/G"), c(0.0, 1.0)).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn enneper_single_term_vanishes() {
        let enn = data("G");
        let spec = ChernRicciSpec::single(ExtendedComplex::Infinity, Side::Minus);
        for g in [c(0.3, 0.1), c(-2.0, 1.5), c(0.01, -0.02)] {
            assert!(cr_function_direct(&enn, g, &spec).unwrap().abs() < 1e-14);
        }
    }

    #[test]
    fn scherk_sum_constant() {
        let scherk = data("G/(G^4-1)");
        let alphas = [fin(1.0, 0.0), fin(-1.0, 0.0), fin(0.0, 1.0), fin(0.0, -1.0)];
        let spec = ChernRicciSpec::uniform(&alphas, Side::Minus, Normalization::Sum).unwrap();
        let expected = -4.0 * 4f64.ln();
        for g in [c(0.3, 0.1), c(2.0, 1.5), c(-0.5, 0.7)] {
            let v = cr_function_direct(&scherk, g, &spec).unwrap();
            assert!((v - expected).abs() < 1e-12, "{}", v);
        }
        let cat = data("1/G");
        let a = cr_function_direct(&cat, c(2.0, 0.0), &spec).unwrap();
        let b = cr_function_direct(&cat, c(3.0, 0.0), &spec).unwrap();
        assert!((a - b).abs() > 0.1);
    }

    #[test]
    fn weierstrass_variant_examples() {
        let scherk = data("G/(G^4-1)");
        let v = cr_function_weierstrass(&scherk, c(0.0, 2.0), fin(1.0, 0.0), WeierstrassVariant::OneMinus).unwrap();
        assert!((v - (5.0f64 / 12.0).ln()).abs() < 1e-14);
        let enn = data("G");
        let v = cr_function_weierstrass(&enn, c(0.4, 0.3), ExtendedComplex::Infinity, WeierstrassVariant::OneMinus).unwrap();
        assert!(v.abs() < 1e-15);
        // the product variant at α = 0 is ln|G f|, which is 0 for the catenoid
        let cat = data("1/G");
        let v = cr_function_weierstrass(&cat, c(2.0, 0.0), fin(0.0, 0.0), WeierstrassVariant::Product).unwrap();
        assert!(v.abs() < 1e-15);
        let direct = cr_variant_direct(&cat, c(2.0, 0.0), fin(0.0, 0.0), WeierstrassVariant::Product).unwrap();
        assert!(direct.abs() < 1e-14);
    }

    #[test]
    fn spec_validation() {
        let w = |n, d| Ratio::new(n, d);
        let ok = ChernRicciSpec::new(
            vec![
                CrTerm { alpha: fin(1.0, 0.0), weight: w(1, 3), side: Side::Minus },
                CrTerm { alpha: fin(0.0, 1.0), weight: w(2, 3), side: Side::Plus },
            ],
            Normalization::Weighted,
        );
        assert!(ok.is_ok());
        let bad_sum = ChernRicciSpec::new(
            vec![CrTerm { alpha: fin(1.0, 0.0), weight: w(1, 2), side: Side::Minus }],
            Normalization::Weighted,
        );
        assert!(matches!(bad_sum, Err(Error::InvalidSpec(_))));
        let dup = ChernRicciSpec::uniform(&[fin(1.0, 0.0), fin(1.0, 0.0)], Side::Minus, Normalization::Weighted);
        assert!(matches!(dup, Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn flat_factor_reductions() {
        let cat = data("1/G");
        let g = c(0.6, 0.9);
        let a = fin(0.3, -0.2);
        let single = ChernRicciSpec::single(a, Side::Plus);
        assert!((flat_factor(&cat, g, &single).unwrap() - chern_factor(&cat, g, a).unwrap()).abs() < 1e-14);
        let pair = ChernRicciSpec::uniform(&[a, antipode_parameter(a)], Side::Minus, Normalization::Weighted).unwrap();
        let n = crate::sphere::angle_function(g, a);
        assert!((flat_factor(&cat, g, &pair).unwrap() - (1.0 - n * n)).abs() < 1e-14);
        let eq = ChernRicciSpec::single(fin(0.0, 0.0), Side::Minus);
        assert!((flat_factor(&cat, c(1.0, 0.0), &eq).unwrap() - 1.0).abs() < 1e-15);
    }
}
