//! Mapping elicited linear weights onto the other aggregation models.
//!
//! Two criteria carry the same trade-off under two models when their contour
//! lines have the same tangent slope at the midpoint `u_1 = u_2 = 0.5`. That
//! gives closed forms for the product and multi-linear models and a monotone
//! scalar equation for SLoS. With more criteria each weight is mapped on its
//! own, which no longer guarantees equal slopes.
//!
//! Slopes here are measured in the contour-plot plane: benefit value `u_1`
//! on the x axis and `1 - u_2` (risk) on the y axis.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::models::{Model, WeightSet};
use crate::roots::bisect;
use crate::scalar::Scalar;

const SLOS_BRACKET: f64 = 1e-12;
// well inside the 1e-10 weight accuracy needed; the slope round trip near 0 and 1
// amplifies weight error by up to ~1e4
const SLOS_TOLERANCE: f64 = 1e-14;
const SLOS_MAX_ITER: usize = 200;

/// Product weights coincide with linear weights.
#[inline]
pub fn map_to_product<T: Scalar>(w_l: T) -> T {
    w_l
}

/// `max(0, w_l - c / n)`.
#[inline]
pub fn map_to_multilinear<T: Scalar>(w_l: T, c: T, n: usize) -> T {
    let shifted = w_l - c / T::from_usize_lossy(n);
    if shifted > T::zero() {
        shifted
    } else {
        T::zero()
    }
}

/// Midpoint slope of a two-criterion SLoS contour with benefit weight `w_s`:
/// `w/(1-w) * 2^(2w-1)`. Strictly increasing on `(0, 1)`.
#[inline]
pub fn slos_midpoint_slope<T: Scalar>(w_s: T) -> T {
    w_s / (T::one() - w_s) * T::lit(2.0).powf(T::lit(2.0) * w_s - T::one())
}

/// Solves `slos_midpoint_slope(w_s) = w_l / (1 - w_l)` for `w_s` by bisection.
pub fn map_to_slos<T: Scalar>(w_l: T) -> Result<T> {
    if !(w_l > T::zero() && w_l < T::one()) {
        return Err(Error::InvalidWeights(format!(
            "linear weight {w_l} outside (0, 1)"
        )));
    }
    let ln2 = T::lit(std::f64::consts::LN_2);
    let target = w_l.ln() - (T::one() - w_l).ln();
    // log form of the slope equation; same root, better conditioned near 0 and 1
    let h = |s: T| s.ln() - (T::one() - s).ln() + (T::lit(2.0) * s - T::one()) * ln2 - target;
    bisect(
        h,
        T::lit(SLOS_BRACKET),
        T::one() - T::lit(SLOS_BRACKET),
        T::lit(SLOS_TOLERANCE),
        SLOS_MAX_ITER,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MappingRequest<T> {
    pub linear_weights: Vec<T>,
    /// Interaction mass `c`, used only for a multi-linear target.
    pub interaction_mass: T,
    pub target: Model,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MappedWeights<T> {
    pub weights: WeightSet<T>,
    /// Criteria whose multi-linear weight would have gone negative and was set to 0.
    pub floored: Vec<usize>,
}

/// Maps each linear weight independently. Linear weights may carry two-decimal
/// rounding error; results are not renormalised.
pub fn map_weight_vector<T: Scalar>(req: &MappingRequest<T>) -> Result<MappedWeights<T>> {
    let linear = WeightSet::linear_rounded(req.linear_weights.clone())?;
    map_linear_weights(&linear, req.target, req.interaction_mass)
}

pub fn map_linear_weights<T: Scalar>(
    linear: &WeightSet<T>,
    target: Model,
    interaction_mass: T,
) -> Result<MappedWeights<T>> {
    if linear.model() != Model::Linear {
        return Err(Error::ModelMismatch(format!(
            "mapping starts from linear weights, got {}",
            linear.model()
        )));
    }
    let w = linear.weights();
    let n = w.len();
    let mut floored = Vec::new();
    let weights = match target {
        Model::Linear => return Ok(MappedWeights { weights: linear.clone(), floored }),
        Model::Product => {
            WeightSet::relaxed(Model::Product, w.iter().map(|&x| map_to_product(x)).collect(), T::zero())?
        }
        Model::Slos => {
            let mapped = w.iter().map(|&x| map_to_slos(x)).collect::<Result<Vec<_>>>()?;
            WeightSet::relaxed(Model::Slos, mapped, T::zero())?
        }
        Model::Multilinear => {
            let c = interaction_mass;
            if !(c >= T::zero() && c <= T::one()) {
                return Err(Error::InvalidWeights(format!(
                    "interaction mass {c} outside [0, 1]"
                )));
            }
            let mapped = w
                .iter()
                .enumerate()
                .map(|(j, &x)| {
                    if x - c / T::from_usize_lossy(n) < T::zero() {
                        floored.push(j);
                    }
                    map_to_multilinear(x, c, n)
                })
                .collect();
            WeightSet::relaxed(Model::Multilinear, mapped, c)?
        }
    };
    Ok(MappedWeights { weights, floored })
}

/// Analytic tangent slope of the two-criterion contour through `(u1, u2)`.
pub fn tangent_slope<T: Scalar>(w: &WeightSet<T>, u1: T, u2: T) -> Result<T> {
    if w.len() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: w.len(),
        });
    }
    let (w1, w2) = (w.weights()[0], w.weights()[1]);
    let slope = match w.model() {
        Model::Linear => w1 / w2,
        Model::Product => (w1 * u2) / (w2 * u1),
        Model::Multilinear => {
            let c = w.interaction_mass();
            (w1 + c * u2) / (w2 + c * u1)
        }
        Model::Slos => {
            (w1 * u1.powf(-w1 - T::one())) / (w2 * u2.powf(-w2 - T::one()))
        }
    };
    Ok(slope)
}

/// Tangent slope at the midpoint `(0.5, 0.5)`.
pub fn midpoint_slope<T: Scalar>(w: &WeightSet<T>) -> Result<T> {
    let half = T::lit(0.5);
    tangent_slope(w, half, half)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn product_is_identity() {
        assert_eq!(map_to_product(0.25), 0.25);
        assert_eq!(map_to_product(0.58), 0.58);
        assert_eq!(map_to_product(0.5), 0.5);
    }

    #[test]
    fn multilinear_shift_and_floor() {
        assert_relative_eq!(map_to_multilinear(0.25, 0.2, 4), 0.20, epsilon = 1e-15);
        assert_relative_eq!(map_to_multilinear(0.11, 0.2, 4), 0.06, epsilon = 1e-15);
        assert_eq!(map_to_multilinear(0.05, 0.2, 2), 0.0);
        assert_eq!(map_to_multilinear(0.37, 0.0, 3), 0.37);
    }

    #[test]
    fn slos_examples() {
        assert_relative_eq!(map_to_slos(0.5).unwrap(), 0.5, epsilon = 1e-10);
        assert!((map_to_slos(0.25_f64).unwrap() - 0.30).abs() < 0.005);
        assert!((map_to_slos(0.58_f64).unwrap() - 0.56).abs() < 0.005);
        assert!(map_to_slos(0.0).is_err());
        assert!(map_to_slos(1.0).is_err());
        assert!(map_to_slos(f64::NAN).is_err());
    }

    #[test]
    fn slos_round_trip() {
        for &w in &[0.01, 0.1, 0.25, 0.4, 0.5, 0.6, 0.77, 0.99] {
            let s = map_to_slos(w).unwrap();
            assert_relative_eq!(slos_midpoint_slope(s), w / (1.0 - w), epsilon = 1e-9);
        }
    }

    #[test]
    fn vector_mapping() {
        let req = MappingRequest {
            linear_weights: vec![0.25_f64; 4],
            interaction_mass: 0.2,
            target: Model::Slos,
        };
        let out = map_weight_vector(&req).unwrap();
        for &w in out.weights.weights() {
            assert!((w - 0.30).abs() < 0.005);
        }

        let req = MappingRequest {
            linear_weights: vec![0.58, 0.11, 0.15, 0.15],
            interaction_mass: 0.2,
            target: Model::Multilinear,
        };
        let out = map_weight_vector(&req).unwrap();
        let expected = [0.53, 0.06, 0.10, 0.10];
        for (w, e) in out.weights.weights().iter().zip(expected) {
            assert_relative_eq!(*w, e, epsilon = 1e-12);
        }
        assert!(out.floored.is_empty());
        assert_eq!(out.weights.interaction_mass(), 0.2);
    }

    #[test]
    fn floor_is_reported() {
        let req = MappingRequest {
            linear_weights: vec![0.05, 0.95],
            interaction_mass: 0.2,
            target: Model::Multilinear,
        };
        let out = map_weight_vector(&req).unwrap();
        assert_eq!(out.weights.weights(), &[0.0, 0.85]);
        assert_eq!(out.floored, vec![0]);
    }

    #[test]
    fn midpoint_slopes() {
        let lin = WeightSet::linear(vec![0.5, 0.5]).unwrap();
        assert_relative_eq!(midpoint_slope(&lin).unwrap(), 1.0);
        let s = WeightSet::slos(vec![0.5, 0.5]).unwrap();
        assert_relative_eq!(midpoint_slope(&s).unwrap(), 1.0);

        let mapped = map_linear_weights(&WeightSet::linear(vec![0.25, 0.75]).unwrap(), Model::Slos, 0.0)
            .unwrap();
        assert_relative_eq!(midpoint_slope(&mapped.weights).unwrap(), 1.0 / 3.0, epsilon = 1e-6);

        let three = WeightSet::linear(vec![0.2, 0.3, 0.5]).unwrap();
        assert!(midpoint_slope(&three).is_err());
    }
}
