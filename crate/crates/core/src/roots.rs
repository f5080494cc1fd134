//! Bracketed bisection for monotone scalar functions.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    /// Stop once the bracket is no wider than this.
    pub x_abs: f64,
    /// ... and the residual at the midpoint is no larger than this.
    pub f_abs: f64,
    pub max_iterations: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            x_abs: 1e-9,
            f_abs: 1e-12,
            max_iterations: 500,
        }
    }
}

/// Finds a root of `f` on `[lo, hi]`, where `f(lo)` and `f(hi)` differ in sign.
///
/// Both tolerances must be met before returning, unless the bracket has
/// collapsed to adjacent floats, in which case the midpoint is already the
/// best representable answer.
pub fn bisect<F>(f: F, mut lo: f64, mut hi: f64, tol: Tolerance) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.is_nan() || f_hi.is_nan() || f_lo.signum() == f_hi.signum() {
        return Err(Error::NotBracketed { lo, hi });
    }

    for _ in 0..tol.max_iterations {
        let mid = lo + 0.5 * (hi - lo);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        let width = hi - lo;
        if (width <= tol.x_abs && f_mid.abs() <= tol.f_abs) || mid == lo || mid == hi {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence {
        iterations: tol.max_iterations,
    })
}
