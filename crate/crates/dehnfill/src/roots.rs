//! Bracketed root finding for monotone functions: bisection with an
//! optional Newton polishing pass once the bracket is tight.

use crate::error::{Error, Result};
use crate::real::{lit, two, Real};

/// Finds the root of `f` in `[lo, hi]` by bisection, to absolute
/// tolerance `tol` in the argument. Requires a sign change on the bracket.
pub fn bisect<T: Real>(f: impl Fn(T) -> T, mut lo: T, mut hi: T, tol: T) -> Result<T> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == T::zero() {
        return Ok(lo);
    }
    if fhi == T::zero() {
        return Ok(hi);
    }
    if (flo > T::zero()) == (fhi > T::zero()) {
        return Err(Error::Numerical {
            op: "roots::bisect",
            detail: format!("no sign change on [{lo}, {hi}]"),
        });
    }
    for _ in 0..200 {
        let mid = (lo + hi) / two();
        if hi - lo <= tol || mid == lo || mid == hi {
            return Ok(mid);
        }
        let fmid = f(mid);
        if fmid == T::zero() {
            return Ok(mid);
        }
        if (fmid > T::zero()) == (flo > T::zero()) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Ok((lo + hi) / two())
}

/// Bisection followed by Newton polishing with derivative `df`.
///
/// Newton steps are accepted only while they stay inside the original
/// bracket; otherwise the bisection answer stands.
pub fn bisect_newton<T: Real>(
    f: impl Fn(T) -> T,
    df: impl Fn(T) -> T,
    lo: T,
    hi: T,
    tol: T,
) -> Result<T> {
    // coarse bisection, then polish
    let coarse = bisect(&f, lo, hi, lit::<T>(1e-6) * (hi - lo).max(T::one()))?;
    let mut x = coarse;
    for _ in 0..50 {
        let fx = f(x);
        let dfx = df(x);
        if dfx == T::zero() {
            break;
        }
        let next = x - fx / dfx;
        if !(next >= lo && next <= hi) {
            break;
        }
        let step = (next - x).abs();
        x = next;
        if step <= tol {
            return Ok(x);
        }
    }
    // fall back to full-precision bisection around the best estimate
    bisect(f, lo, hi, tol)
}
