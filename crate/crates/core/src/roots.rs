//! Bracketing and bisection for the first sign change of a scalar function.

use crate::error::{Error, Result};

/// Bisection on `[a, b]` where `f(a) >= 0 > f(b)`. Returns the right end of
/// the final bracket, so the result always has `f < 0`.
pub fn bisect_to_negative(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    while b - a > tol {
        let mid = a + 0.5 * (b - a);
        if mid <= a || mid >= b {
            break;
        }
        if f(mid) < 0.0 {
            b = mid;
        } else {
            a = mid;
        }
    }
    b
}

/// Settings for [`first_negative`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracketing {
    pub start: f64,
    pub cap: f64,
    pub tol: f64,
}

impl Default for Bracketing {
    fn default() -> Self {
        Self { start: 1.0, cap: 1e9, tol: 1e-8 }
    }
}

/// Smallest `t >= 0` (to `tol`) at which `f` becomes negative, found by
/// doubling an upper bracket from `start` up to `cap` and then bisecting.
/// Returns `0` when `f(0) < 0`.
pub fn first_negative(f: impl Fn(f64) -> f64, settings: Bracketing) -> Result<f64> {
    if f(0.0) < 0.0 {
        return Ok(0.0);
    }
    let mut lo = 0.0;
    let mut hi = settings.start;
    loop {
        if f(hi) < 0.0 {
            break;
        }
        if hi >= settings.cap {
            return Err(Error::NoCrossing { t_cap: settings.cap });
        }
        lo = hi;
        hi = (2.0 * hi).min(settings.cap);
    }
    Ok(bisect_to_negative(f, lo, hi, settings.tol))
}
