use std::f64::consts::PI;

use crate::error::{domain, Result};

/// Euler–Mascheroni constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_6;

/// Γ(n/2) for integer n, computed exactly by recurrence from Γ(1) and Γ(1/2).
///
/// Non-positive integers are poles and return +∞.
pub(crate) fn gamma_twice(n: i32) -> f64 {
    if n % 2 == 0 {
        let k = n / 2;
        if k <= 0 {
            return f64::INFINITY;
        }
        (1..k).fold(1.0, |acc, i| acc * i as f64)
    } else if n > 0 {
        // Γ(1/2) = √π, Γ(x + 1) = x Γ(x)
        let mut g = PI.sqrt();
        let mut m = 1;
        while m < n {
            g *= m as f64 / 2.0;
            m += 2;
        }
        g
    } else {
        // Γ(x) = Γ(x + 1) / x going down from 1/2
        let mut g = PI.sqrt();
        let mut m = 1;
        while m > n {
            m -= 2;
            g /= m as f64 / 2.0;
        }
        g
    }
}

/// Γ(x) for x an integer or half-integer.
pub fn gamma_half_integer(x: f64) -> Result<f64> {
    let twice = 2.0 * x;
    if !twice.is_finite() || twice.fract() != 0.0 || twice.abs() > 340.0 {
        return domain(format!("gamma_half_integer needs a multiple of 1/2, got {x}"));
    }
    let n = twice as i32;
    if n <= 0 && n % 2 == 0 {
        return domain(format!("gamma pole at {x}"));
    }
    Ok(gamma_twice(n))
}
