//! Bracketing root finder: uniform sign-change scan plus bisection.

use crate::error::{Error, Result};
use crate::real::Real;

/// Splits the open interval `(lo, hi)` into `n` cells and returns every cell
/// whose endpoint values differ in sign. The outer endpoints themselves are
/// never sampled, which keeps singular edge behavior out of the scan.
pub fn scan_brackets<T: Real, F: FnMut(T) -> T>(lo: T, hi: T, n: usize, mut f: F) -> Vec<(T, T)> {
    let step = (hi - lo) / T::from_usize(n + 1).unwrap();
    let mut out = Vec::new();
    let mut x0 = lo + step;
    let mut f0 = f(x0);
    for i in 2..=n {
        let x1 = lo + step * T::from_usize(i).unwrap();
        let f1 = f(x1);
        if f0.is_finite() && f1.is_finite() && (f0 == T::zero() || f0.signum() != f1.signum()) {
            out.push((x0, x1));
        }
        x0 = x1;
        f0 = f1;
    }
    out
}

/// Bisection on a sign-changing bracket down to `rel_tol` of the bracket
/// midpoint (or until the bracket stops shrinking in floating point).
pub fn bisect<T: Real, F: FnMut(T) -> T>(
    mut lo: T,
    mut hi: T,
    rel_tol: T,
    max_iter: usize,
    mut f: F,
) -> Result<T> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == T::zero() {
        return Ok(lo);
    }
    if fhi == T::zero() {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NoConvergence(format!(
            "bracket [{lo:?}, {hi:?}] does not change sign"
        )));
    }
    for _ in 0..max_iter {
        let mid = lo + (hi - lo) / T::lit(2.0);
        if mid <= lo || mid >= hi || (hi - lo) <= rel_tol * mid.abs() {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == T::zero() {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Err(Error::NoConvergence(format!(
        "bisection did not reach tolerance in {max_iter} iterations"
    )))
}
