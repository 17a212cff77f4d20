//! Bracketed root refinement.

use crate::error::{Error, Result};
use crate::specfun::{bessel_j, Order};

/// Bisection on a sign-changing bracket until the width falls below
/// `rel_tol·max(|lo|, |hi|)` (or the midpoint stops moving).
pub fn bisect<F>(f: F, mut lo: f64, mut hi: f64, rel_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NonConvergence(format!("bisection bracket [{lo}, {hi}] has no sign change")));
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || (hi - lo) <= rel_tol * lo.abs().max(hi.abs()) {
            return Ok(mid);
        }
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NonConvergence(format!("bisection on [{lo}, {hi}] did not settle")))
}

/// Smallest positive zero of J_ν.
pub fn first_bessel_zero(order: Order) -> Result<f64> {
    let j = |x: f64| bessel_j(order, x);
    let step = 0.05;
    let mut lo = step;
    let mut f_lo = j(lo)?;
    while lo < 200.0 {
        let hi = lo + step;
        let f_hi = j(hi)?;
        if f_lo.signum() != f_hi.signum() {
            return bisect(j, lo, hi, 1e-15);
        }
        lo = hi;
        f_lo = f_hi;
    }
    Err(Error::NonConvergence(format!("no zero of J_{} below 200", order.nu())))
}

/// Distance from `x` to the nearest zero of J_ν, estimated by Newton steps.
/// Returns `None` if the iteration leaves the neighbourhood.
pub(crate) fn distance_to_bessel_zero(order: Order, x: f64) -> Result<Option<f64>> {
    let mut y = x;
    for _ in 0..6 {
        let jv = bessel_j(order, y)?;
        if jv == 0.0 {
            break;
        }
        // J_ν' = (ν/x) J_ν − J_{ν+1}
        let dj = order.nu() / y * jv - bessel_j(order.shifted(1), y)?;
        let step = jv / dj;
        if !step.is_finite() || step.abs() > 0.5 {
            return Ok(None);
        }
        y -= step;
        if y <= 0.0 {
            return Ok(None);
        }
        if step.abs() <= 1e-15 * y.abs() {
            break;
        }
    }
    Ok(Some((x - y).abs()))
}
