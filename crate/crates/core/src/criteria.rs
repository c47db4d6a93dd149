//! Criteria and their linear partial value functions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CriterionKind {
    /// Higher event probability is better (e.g. treatment response).
    Benefit,
    /// Lower event probability is better (e.g. an adverse event).
    Risk,
}

/// A criterion together with the performances that map to value 1
/// (`most_preferable`) and value 0 (`least_preferable`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionSpec<T> {
    name: String,
    kind: CriterionKind,
    most_preferable: T,
    least_preferable: T,
}

impl<T: Scalar> CriterionSpec<T> {
    pub fn new(
        name: impl Into<String>,
        kind: CriterionKind,
        most_preferable: T,
        least_preferable: T,
    ) -> Result<Self> {
        let name = name.into();
        let invalid = |reason: &str| Error::InvalidCriterion {
            name: name.clone(),
            reason: reason.to_string(),
        };
        if !most_preferable.is_finite() || !least_preferable.is_finite() {
            return Err(invalid("bounds must be finite"));
        }
        if most_preferable == least_preferable {
            return Err(invalid("most and least preferable values coincide"));
        }
        match kind {
            CriterionKind::Benefit if most_preferable < least_preferable => {
                return Err(invalid("a benefit needs most_preferable > least_preferable"))
            }
            CriterionKind::Risk if most_preferable > least_preferable => {
                return Err(invalid("a risk needs most_preferable < least_preferable"))
            }
            _ => {}
        }
        Ok(Self {
            name,
            kind,
            most_preferable,
            least_preferable,
        })
    }

    pub fn benefit(name: impl Into<String>, most: T, least: T) -> Result<Self> {
        Self::new(name, CriterionKind::Benefit, most, least)
    }

    pub fn risk(name: impl Into<String>, most: T, least: T) -> Result<Self> {
        Self::new(name, CriterionKind::Risk, most, least)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> CriterionKind {
        self.kind
    }

    pub fn most_preferable(&self) -> T {
        self.most_preferable
    }

    pub fn least_preferable(&self) -> T {
        self.least_preferable
    }

    /// Linear partial value of performance `xi`, clamped to `[0, 1]`.
    #[inline]
    pub fn partial_value(&self, xi: T) -> T {
        partial_value(self, xi)
    }
}

/// `(xi - least) / (most - least)` clamped to `[0, 1]`.
#[inline]
pub fn partial_value<T: Scalar>(spec: &CriterionSpec<T>, xi: T) -> T {
    let v = (xi - spec.least_preferable) / (spec.most_preferable - spec.least_preferable);
    // NaN falls through to 0 rather than poisoning the score.
    if v >= T::one() {
        T::one()
    } else if v > T::zero() {
        v
    } else {
        T::zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn response() -> CriterionSpec<f64> {
        CriterionSpec::benefit("response", 0.8, 0.2).unwrap()
    }

    fn nausea() -> CriterionSpec<f64> {
        CriterionSpec::risk("nausea", 0.0, 0.5).unwrap()
    }

    #[test]
    fn response_value() {
        assert_relative_eq!(response().partial_value(0.52), 0.32 / 0.6, epsilon = 1e-12);
        assert_relative_eq!(response().partial_value(0.52), 0.5333333333, epsilon = 1e-9);
    }

    #[test]
    fn risk_value_and_clamp() {
        assert_relative_eq!(nausea().partial_value(0.40), 0.20, epsilon = 1e-12);
        assert_eq!(nausea().partial_value(0.60), 0.0);
        assert_eq!(nausea().partial_value(-0.1), 1.0);
        assert_eq!(response().partial_value(0.1), 0.0);
        assert_eq!(response().partial_value(0.95), 1.0);
    }

    #[test]
    fn bounds_hit_endpoints() {
        let r = response();
        assert_eq!(r.partial_value(0.8), 1.0);
        assert_eq!(r.partial_value(0.2), 0.0);
        let n = nausea();
        assert_eq!(n.partial_value(0.0), 1.0);
        assert_eq!(n.partial_value(0.5), 0.0);
    }

    #[test]
    fn rejects_bad_bounds() {
        assert!(CriterionSpec::<f64>::benefit("b", 0.2, 0.2).is_err());
        assert!(CriterionSpec::<f64>::benefit("b", 0.2, 0.8).is_err());
        assert!(CriterionSpec::<f64>::risk("r", 0.5, 0.0).is_err());
        assert!(CriterionSpec::<f64>::risk("r", f64::NAN, 0.0).is_err());
    }

    #[test]
    fn works_in_f32() {
        let r = CriterionSpec::<f32>::benefit("response", 0.8, 0.2).unwrap();
        assert!((r.partial_value(0.5) - 0.5).abs() < 1e-6);
    }
}
