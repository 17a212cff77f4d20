//! Bessel functions of integer and half-integer order.
//!
//! Only the orders reachable from an integer dimension are supported:
//! ν = d/2 − 1 and its neighbours, i.e. multiples of 1/2 with ν ≥ −1/2.
//! Half-integer orders go through the elementary closed forms (with a
//! Miller-normalized downward recurrence for J and I), integer orders
//! through Temme's series for x < 2 and Steed's continued fractions above.

mod bessel;
mod gamma;

pub use bessel::{bessel_i, bessel_j, bessel_k, bessel_y};
pub(crate) use bessel::{bessel_i_scaled, bessel_k_scaled};
pub use gamma::{gamma_half_integer, EULER_GAMMA};

use crate::error::{domain, Result};
use crate::geometry::Dimension;

/// Order of a Bessel function, stored as the integer 2ν.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Order {
    twice: i32,
}

impl Order {
    /// Build an order from a real value; it must be a multiple of 1/2 and ≥ −1/2.
    pub fn new(nu: f64) -> Result<Self> {
        let twice = 2.0 * nu;
        if !twice.is_finite() || twice.fract() != 0.0 {
            return domain(format!("order {nu} is not a multiple of 1/2"));
        }
        Self::from_twice(twice as i32)
    }

    pub fn from_twice(twice: i32) -> Result<Self> {
        if twice < -1 {
            return domain(format!("order {} is below -1/2", twice as f64 / 2.0));
        }
        Ok(Self { twice })
    }

    /// α = d/2 − 1, the order of the radial s-wave solutions.
    pub fn alpha(d: Dimension) -> Self {
        Self { twice: d.get() as i32 - 2 }
    }

    /// The order shifted by an integer; panics if the result falls below −1/2.
    pub fn shifted(self, by: i32) -> Self {
        Self::from_twice(self.twice + 2 * by).expect("Bessel order below -1/2")
    }

    pub fn nu(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub fn twice(self) -> i32 {
        self.twice
    }

    pub fn is_half_integer(self) -> bool {
        self.twice % 2 != 0
    }
}

/// Leading small-argument forms of J_α(x) and Y_α(x), α = d/2 − 1.
///
/// Returns `(j_limit, y_limit)` with j_limit = (x/2)^α / Γ(d/2) and
/// y_limit = −Γ(α)/π · (2/x)^α for d ≠ 2, (2/π)(ln(x/2) + γ) for d = 2.
pub fn small_argument_forms(d: Dimension, x: f64) -> Result<(f64, f64)> {
    if !(x > 0.0) || !x.is_finite() {
        return domain(format!("small-argument forms need x > 0, got {x}"));
    }
    let n = d.get() as i32;
    let alpha = n as f64 / 2.0 - 1.0;
    let j = (x / 2.0).powf(alpha) / gamma::gamma_twice(n);
    let y = if n == 2 {
        2.0 / std::f64::consts::PI * ((x / 2.0).ln() + EULER_GAMMA)
    } else {
        -gamma::gamma_twice(n - 2) / std::f64::consts::PI * (2.0 / x).powf(alpha)
    };
    Ok((j, y))
}
