//! The four aggregation models and score arithmetic.
//!
//! Linear, product and multi-linear models produce utilities in `[0, 1]`
//! (higher is better). SLoS produces a loss in `[n, +inf]` (lower is better);
//! a zero partial value anywhere yields an infinite loss.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

const SUM_TOLERANCE: f64 = 1e-9;
const ROUNDING_SLACK: f64 = 0.005;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Linear,
    Product,
    Multilinear,
    Slos,
}

impl Model {
    pub const ALL: [Model; 4] = [Model::Linear, Model::Product, Model::Multilinear, Model::Slos];

    pub fn flavor(self) -> Flavor {
        match self {
            Model::Slos => Flavor::Loss,
            _ => Flavor::Utility,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Model::Linear => "linear",
            Model::Product => "product",
            Model::Multilinear => "multilinear",
            Model::Slos => "slos",
        }
    }

    /// Position in [`Model::ALL`].
    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.as_str())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "linear" | "l" => Ok(Model::Linear),
            "product" | "p" => Ok(Model::Product),
            "multilinear" | "multi-linear" | "ml" => Ok(Model::Multilinear),
            "slos" | "s" => Ok(Model::Slos),
            other => Err(Error::field("model", format!("unknown model `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Utility,
    Loss,
}

/// Per-model weights. For the multi-linear model `interaction_mass` is the
/// total weight `c` shared equally by every interaction term; it is zero for
/// the other models.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightSet<T> {
    model: Model,
    weights: Vec<T>,
    interaction_mass: T,
}

impl<T: Scalar> WeightSet<T> {
    /// Strictly positive weights summing to one.
    pub fn linear(weights: Vec<T>) -> Result<Self> {
        Self::normalized(Model::Linear, weights)
    }

    /// Linear weights elicited to two decimals, whose sum may be off by up to
    /// half a hundredth per criterion (e.g. `0.58, 0.11, 0.15, 0.15`). They
    /// are kept as given, not renormalised.
    pub fn linear_rounded(weights: Vec<T>) -> Result<Self> {
        let set = Self::relaxed(Model::Linear, weights, T::zero())?;
        let total = set.weights.iter().fold(T::zero(), |acc, &w| acc + w);
        let slack = T::lit(ROUNDING_SLACK) * T::from_usize_lossy(set.len()) + T::lit(SUM_TOLERANCE);
        if (total - T::one()).abs() > slack {
            return Err(Error::InvalidWeights(format!(
                "linear weights must sum to 1 up to rounding (got {total})"
            )));
        }
        Ok(set)
    }

    /// Strictly positive weights summing to one.
    pub fn product(weights: Vec<T>) -> Result<Self> {
        Self::normalized(Model::Product, weights)
    }

    /// Strictly positive weights summing to one.
    pub fn slos(weights: Vec<T>) -> Result<Self> {
        Self::normalized(Model::Slos, weights)
    }

    /// Non-negative individual weights plus interaction mass `c`, summing to one.
    pub fn multilinear(weights: Vec<T>, interaction_mass: T) -> Result<Self> {
        let set = Self::relaxed(Model::Multilinear, weights, interaction_mass)?;
        let total = set.weights.iter().fold(interaction_mass, |acc, &w| acc + w);
        check_sum(total)?;
        Ok(set)
    }

    /// Builds a weight set checking only signs and ranges.
    ///
    /// Mapped weights need this: marginal mapping does not preserve the unit
    /// sum (SLoS weights move towards 0.5, floored multi-linear weights gain
    /// mass).
    pub fn relaxed(model: Model, weights: Vec<T>, interaction_mass: T) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidWeights("no weights".into()));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidWeights("weights must be finite".into()));
        }
        match model {
            Model::Multilinear => {
                if weights.len() < 2 {
                    return Err(Error::InvalidWeights(
                        "the multi-linear model needs at least two criteria".into(),
                    ));
                }
                if weights.iter().any(|&w| w < T::zero()) {
                    return Err(Error::InvalidWeights("weights must be non-negative".into()));
                }
                if !(interaction_mass >= T::zero() && interaction_mass <= T::one()) {
                    return Err(Error::InvalidWeights(
                        "interaction mass must lie in [0, 1]".into(),
                    ));
                }
                Ok(Self {
                    model,
                    weights,
                    interaction_mass,
                })
            }
            _ => {
                if weights.iter().any(|&w| w <= T::zero()) {
                    return Err(Error::InvalidWeights("weights must be positive".into()));
                }
                Ok(Self {
                    model,
                    weights,
                    interaction_mass: T::zero(),
                })
            }
        }
    }

    fn normalized(model: Model, weights: Vec<T>) -> Result<Self> {
        let set = Self::relaxed(model, weights, T::zero())?;
        check_sum(set.weights.iter().fold(T::zero(), |acc, &w| acc + w))?;
        Ok(set)
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn interaction_mass(&self) -> T {
        self.interaction_mass
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Weight carried by each of the `2^n - n - 1` interaction terms.
    pub fn interaction_coefficient(&self) -> T {
        if self.model != Model::Multilinear {
            return T::zero();
        }
        let n = self.weights.len() as i32;
        let terms = T::lit(2.0).powi(n) - T::from_usize_lossy(self.weights.len()) - T::one();
        self.interaction_mass / terms
    }
}

fn check_sum<T: Scalar>(total: T) -> Result<()> {
    if (total - T::one()).abs() > T::lit(SUM_TOLERANCE) {
        return Err(Error::InvalidWeights(format!(
            "weights must sum to 1 (got {total})"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Score<T> {
    pub value: T,
    pub flavor: Flavor,
    pub model: Model,
    /// For a loss made from a utility: the utility it came from.
    #[serde(skip)]
    complement: Option<T>,
}

impl<T: Scalar> Score<T> {
    pub fn new(value: T, flavor: Flavor, model: Model) -> Self {
        Self {
            value,
            flavor,
            model,
            complement: None,
        }
    }

    /// True when this score is strictly preferable to `other`.
    pub fn beats(&self, other: &Score<T>) -> Result<bool> {
        let d = score_difference(self, other)?;
        Ok(match self.flavor {
            Flavor::Utility => d > T::zero(),
            Flavor::Loss => d < T::zero(),
        })
    }
}

fn check_dims<T>(u: &[T], w: &WeightSet<T>) -> Result<()> {
    if u.len() != w.weights.len() {
        return Err(Error::DimensionMismatch {
            expected: w.weights.len(),
            found: u.len(),
        });
    }
    Ok(())
}

fn expect_model<T>(w: &WeightSet<T>, model: Model) -> Result<()> {
    if w.model != model {
        return Err(Error::ModelMismatch(format!(
            "{model} score requested with {} weights",
            w.model
        )));
    }
    Ok(())
}

/// `sum_j w_j u_j`
pub fn linear_utility<T: Scalar>(u: &[T], w: &WeightSet<T>) -> Result<Score<T>> {
    expect_model(w, Model::Linear)?;
    check_dims(u, w)?;
    Ok(Score::new(
        linear_kernel(u, &w.weights),
        Flavor::Utility,
        Model::Linear,
    ))
}

/// `prod_j u_j ^ w_j`; exactly zero when any `u_j` is zero.
pub fn product_utility<T: Scalar>(u: &[T], w: &WeightSet<T>) -> Result<Score<T>> {
    expect_model(w, Model::Product)?;
    check_dims(u, w)?;
    Ok(Score::new(
        product_kernel(u, &w.weights),
        Flavor::Utility,
        Model::Product,
    ))
}

/// Individual terms plus every interaction of order two or more, each
/// interaction weighted `c / (2^n - n - 1)`.
pub fn multilinear_utility<T: Scalar>(u: &[T], w: &WeightSet<T>) -> Result<Score<T>> {
    expect_model(w, Model::Multilinear)?;
    check_dims(u, w)?;
    Ok(Score::new(
        multilinear_kernel(u, &w.weights, w.interaction_coefficient()),
        Flavor::Utility,
        Model::Multilinear,
    ))
}

/// `sum_j (1 / u_j) ^ w_j`; `+inf` when any `u_j` is zero.
pub fn slos_loss<T: Scalar>(u: &[T], w: &WeightSet<T>) -> Result<Score<T>> {
    expect_model(w, Model::Slos)?;
    check_dims(u, w)?;
    Ok(Score::new(
        slos_kernel(u, &w.weights),
        Flavor::Loss,
        Model::Slos,
    ))
}

/// Scores `u` with whichever model `w` belongs to, in that model's native flavor.
pub fn score<T: Scalar>(u: &[T], w: &WeightSet<T>) -> Result<Score<T>> {
    match w.model {
        Model::Linear => linear_utility(u, w),
        Model::Product => product_utility(u, w),
        Model::Multilinear => multilinear_utility(u, w),
        Model::Slos => slos_loss(u, w),
    }
}

/// `1 - utility`. SLoS is already a loss and is rejected.
pub fn to_loss<T: Scalar>(s: Score<T>) -> Result<Score<T>> {
    if s.flavor != Flavor::Utility || s.model == Model::Slos {
        return Err(Error::ModelMismatch(format!(
            "to_loss needs a utility score, got a {} loss",
            s.model
        )));
    }
    Ok(Score {
        complement: Some(s.value),
        ..Score::new(T::one() - s.value, Flavor::Loss, s.model)
    })
}

/// `s_i - s_h`. Two infinite losses tie at zero.
pub fn score_difference<T: Scalar>(s_i: &Score<T>, s_h: &Score<T>) -> Result<T> {
    if s_i.model != s_h.model || s_i.flavor != s_h.flavor {
        return Err(Error::ModelMismatch(format!(
            "cannot difference a {} {:?} with a {} {:?}",
            s_i.model, s_i.flavor, s_h.model, s_h.flavor
        )));
    }
    if let (Some(u_i), Some(u_h)) = (s_i.complement, s_h.complement) {
        // (1 - u_i) - (1 - u_h) without the rounding of 1 - u, so loss and
        // utility comparisons agree exactly
        return Ok(difference(u_h, u_i));
    }
    Ok(difference(s_i.value, s_h.value))
}

#[inline]
pub(crate) fn difference<T: Scalar>(a: T, b: T) -> T {
    if a == b {
        // covers inf - inf
        T::zero()
    } else {
        a - b
    }
}

#[inline]
pub(crate) fn linear_kernel<T: Scalar>(u: &[T], w: &[T]) -> T {
    u.iter()
        .zip(w)
        .fold(T::zero(), |acc, (&u, &w)| acc + w * u)
}

#[inline]
pub(crate) fn product_kernel<T: Scalar>(u: &[T], w: &[T]) -> T {
    let mut acc = T::one();
    for (&u, &w) in u.iter().zip(w) {
        if u <= T::zero() {
            return T::zero();
        }
        acc = acc * u.powf(w);
    }
    acc
}

/// The interaction sum over all subsets of size >= 2 equals
/// `prod(1 + u_j) - 1 - sum(u_j)`.
#[inline]
pub(crate) fn multilinear_kernel<T: Scalar>(u: &[T], w: &[T], per_term: T) -> T {
    let mut individual = T::zero();
    let mut all_subsets = T::one();
    let mut singles = T::zero();
    for (&u, &w) in u.iter().zip(w) {
        individual = individual + w * u;
        all_subsets = all_subsets * (T::one() + u);
        singles = singles + u;
    }
    let interactions = all_subsets - T::one() - singles;
    individual + per_term * interactions
}

#[inline]
pub(crate) fn slos_kernel<T: Scalar>(u: &[T], w: &[T]) -> T {
    let mut acc = T::zero();
    for (&u, &w) in u.iter().zip(w) {
        if u <= T::zero() {
            return T::infinity();
        }
        acc = acc + u.powf(-w);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn lin(w: &[f64]) -> WeightSet<f64> {
        WeightSet::linear(w.to_vec()).unwrap()
    }

    fn prod(w: &[f64]) -> WeightSet<f64> {
        WeightSet::product(w.to_vec()).unwrap()
    }

    fn slos(w: &[f64]) -> WeightSet<f64> {
        WeightSet::slos(w.to_vec()).unwrap()
    }

    #[test]
    fn linear_examples() {
        assert_relative_eq!(linear_utility(&[1.0, 1.0], &lin(&[0.5, 0.5])).unwrap().value, 1.0);
        assert_relative_eq!(
            linear_utility(&[0.6, 0.8], &lin(&[0.5, 0.5])).unwrap().value,
            0.7,
            epsilon = 1e-12
        );
        // placebo posterior means under equal weights
        assert_relative_eq!(
            linear_utility(&[0.28, 0.84, 0.73, 0.98], &lin(&[0.25; 4])).unwrap().value,
            0.7075,
            epsilon = 1e-12
        );
    }

    #[test]
    fn product_examples() {
        assert_eq!(product_utility(&[0.0, 0.9], &prod(&[0.5, 0.5])).unwrap().value, 0.0);
        assert_eq!(product_utility(&[0.0, 0.9], &prod(&[0.1, 0.9])).unwrap().value, 0.0);
        assert_relative_eq!(
            product_utility(&[0.25, 1.0], &prod(&[0.5, 0.5])).unwrap().value,
            0.5,
            epsilon = 1e-12
        );
        let p = product_utility(&[0.6, 0.8], &prod(&[0.5, 0.5])).unwrap().value;
        assert_relative_eq!(p, 0.48f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(p, 0.692820323, epsilon = 1e-9);
        assert!(p <= 0.7);
    }

    #[test]
    fn multilinear_examples() {
        let w = WeightSet::multilinear(vec![0.4, 0.4], 0.2).unwrap();
        assert_relative_eq!(multilinear_utility(&[0.5, 0.5], &w).unwrap().value, 0.45, epsilon = 1e-12);

        let w4 = WeightSet::multilinear(vec![0.2; 4], 0.2).unwrap();
        assert_relative_eq!(multilinear_utility(&[1.0; 4], &w4).unwrap().value, 1.0, epsilon = 1e-12);
        assert_relative_eq!(w4.interaction_coefficient(), 0.2 / 11.0, epsilon = 1e-15);

        let w0 = WeightSet::multilinear(vec![0.3, 0.7], 0.0).unwrap();
        let u = [0.35, 0.9];
        assert_relative_eq!(
            multilinear_utility(&u, &w0).unwrap().value,
            linear_utility(&u, &lin(&[0.3, 0.7])).unwrap().value,
            epsilon = 1e-15
        );
    }

    #[test]
    fn multilinear_needs_two_criteria() {
        assert!(WeightSet::multilinear(vec![0.8], 0.2).is_err());
    }

    #[test]
    fn slos_examples() {
        assert_relative_eq!(
            slos_loss(&[0.5, 0.5], &slos(&[0.5, 0.5])).unwrap().value,
            2.0 * 2f64.sqrt(),
            epsilon = 1e-12
        );
        assert!(slos_loss(&[0.0, 0.9], &slos(&[0.5, 0.5])).unwrap().value.is_infinite());
        assert_relative_eq!(slos_loss(&[1.0; 4], &slos(&[0.1, 0.2, 0.3, 0.4])).unwrap().value, 4.0);
    }

    #[test]
    fn loss_conversion() {
        let s = linear_utility(&[0.6, 0.8], &lin(&[0.5, 0.5])).unwrap();
        assert_relative_eq!(to_loss(s).unwrap().value, 0.3, epsilon = 1e-12);
        let one = Score::new(1.0, Flavor::Utility, Model::Product);
        assert_eq!(to_loss(one).unwrap().value, 0.0);
        let zero = Score::new(0.0, Flavor::Utility, Model::Linear);
        assert_eq!(to_loss(zero).unwrap().value, 1.0);
        let l = slos_loss(&[0.5, 0.5], &slos(&[0.5, 0.5])).unwrap();
        assert!(to_loss(l).is_err());
    }

    #[test]
    fn differences() {
        let a = Score::new(0.7, Flavor::Utility, Model::Linear);
        let b = Score::new(0.5, a.flavor, a.model);
        assert_relative_eq!(score_difference(&a, &b).unwrap(), 0.2, epsilon = 1e-12);
        assert!(a.beats(&b).unwrap());

        let inf = Score::new(f64::INFINITY, Flavor::Loss, Model::Slos);
        let three = Score { value: 3.0, ..inf };
        assert_eq!(score_difference(&inf, &three).unwrap(), f64::INFINITY);
        assert!(three.beats(&inf).unwrap());
        assert_eq!(score_difference(&inf, &inf).unwrap(), 0.0);
        assert!(!inf.beats(&inf).unwrap());

        assert!(score_difference(&a, &three).is_err());
    }

    #[test]
    fn errors() {
        assert!(matches!(
            linear_utility(&[0.5], &lin(&[0.5, 0.5])),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        ));
        assert!(matches!(
            product_utility(&[0.5, 0.5], &lin(&[0.5, 0.5])),
            Err(Error::ModelMismatch(_))
        ));
        assert!(WeightSet::linear(vec![0.5, 0.6]).is_err());
        assert!(WeightSet::linear(vec![0.58, 0.11, 0.15, 0.15]).is_err());
        assert!(WeightSet::linear_rounded(vec![0.58, 0.11, 0.15, 0.15]).is_ok());
        assert!(WeightSet::linear_rounded(vec![0.5, 0.6]).is_err());
        assert!(WeightSet::linear(vec![0.0, 1.0]).is_err());
        assert!(WeightSet::multilinear(vec![0.4, 0.4], 0.3).is_err());
        assert!(WeightSet::multilinear(vec![0.6, 0.6], -0.2).is_err());
    }

    #[test]
    fn parse_models() {
        assert_eq!("SLoS".parse::<Model>().unwrap(), Model::Slos);
        assert_eq!("multi-linear".parse::<Model>().unwrap(), Model::Multilinear);
        assert!("quadratic".parse::<Model>().is_err());
        assert_eq!(serde_json::to_string(&Model::Multilinear).unwrap(), "\"multilinear\"");
    }

    #[test]
    fn loss_comparison_survives_rounding() {
        // 1 - 1e-17 rounds to 1, yet the loss of the larger utility is smaller
        let a = Score::new(1e-17, Flavor::Utility, Model::Linear);
        let b = Score::new(0.0, Flavor::Utility, Model::Linear);
        assert!(a.beats(&b).unwrap());
        let (la, lb) = (to_loss(a).unwrap(), to_loss(b).unwrap());
        assert_eq!(la.value, lb.value);
        assert!(la.beats(&lb).unwrap());
        assert!(!lb.beats(&la).unwrap());
    }
}
