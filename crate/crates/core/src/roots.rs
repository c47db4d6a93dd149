//! Bisection for monotone scalar equations.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Finds a sign change of `f` on `[lo, hi]` by bisection.
///
/// Stops once the bracket half-width drops below `tol`, the midpoint stops
/// moving, or `max_iter` halvings have been done; returns the midpoint.
pub fn bisect<T, F>(f: F, mut lo: T, mut hi: T, tol: T, max_iter: usize) -> Result<T>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    // also rejects NaN endpoints
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(lo < hi) {
        return Err(Error::RootFinding("empty bracket".into()));
    }
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == T::zero() {
        return Ok(lo);
    }
    if f_hi == T::zero() {
        return Ok(hi);
    }
    if f_lo.is_nan() || f_hi.is_nan() || f_lo.signum() == f_hi.signum() {
        return Err(Error::RootFinding(format!(
            "no sign change on [{lo}, {hi}]"
        )));
    }
    let half = T::lit(0.5);
    for _ in 0..max_iter {
        let mid = lo + (hi - lo) * half;
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        let f_mid = f(mid);
        if f_mid == T::zero() {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if (hi - lo) * half < tol {
            break;
        }
    }
    Ok(lo + (hi - lo) * half)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_root_of_two() {
        let r = bisect(|x: f64| x * x - 2.0, 0.0, 2.0, 1e-12, 200).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn decreasing_function() {
        let r = bisect(|x: f64| 1.0 - x, 0.0, 3.0, 1e-12, 200).unwrap();
        assert!((r - 1.0).abs() < 1e-11);
    }

    #[test]
    fn no_sign_change() {
        assert!(bisect(|x: f64| x * x + 1.0, -1.0, 1.0, 1e-9, 100).is_err());
        assert!(bisect(|x: f64| x, 1.0, 1.0, 1e-9, 100).is_err());
    }

    #[test]
    fn f32_terminates() {
        let r = bisect(|x: f32| x - 0.3, 0.0, 1.0, 1e-10, 200).unwrap();
        assert!((r - 0.3).abs() < 1e-6);
    }
}
