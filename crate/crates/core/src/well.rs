//! The d-dimensional finite square well V(r) = −V₀ Θ(b − r).
//!
//! Energies relate to wavenumbers through E = ℏ²k²/M. Wavefunction
//! amplitudes follow the unit conventions c₁ = g₃ = A = 1.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::geometry::Dimension;
use crate::scattering::tan_delta0_exact;
use crate::specfun::{bessel_j, bessel_k_scaled, bessel_y, small_argument_forms, Order, EULER_GAMMA};

/// ℏ and M. Natural units set both to one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Units {
    pub hbar: f64,
    pub mass: f64,
}

impl Units {
    pub const NATURAL: Units = Units { hbar: 1.0, mass: 1.0 };

    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite() && mass > 0.0 && mass.is_finite()) {
            return domain(format!("units need hbar > 0 and mass > 0, got hbar={hbar}, mass={mass}"));
        }
        Ok(Self { hbar, mass })
    }

    /// ℏ²/M, the energy·length² scale.
    pub fn h2m(self) -> f64 {
        self.hbar * self.hbar / self.mass
    }
}

impl Default for Units {
    fn default() -> Self {
        Self::NATURAL
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WellSpec {
    pub d: Dimension,
    pub v0: f64,
    pub b: f64,
    pub units: Units,
}

impl WellSpec {
    /// Well in natural units.
    pub fn new(d: Dimension, v0: f64, b: f64) -> Result<Self> {
        Self::with_units(d, v0, b, Units::NATURAL)
    }

    pub fn with_units(d: Dimension, v0: f64, b: f64, units: Units) -> Result<Self> {
        if !(v0 > 0.0 && v0.is_finite()) {
            return domain(format!("well depth must be positive, got {v0}"));
        }
        if !(b > 0.0 && b.is_finite()) {
            return domain(format!("well range must be positive, got {b}"));
        }
        let units = Units::new(units.hbar, units.mass)?;
        Ok(Self { d, v0, b, units })
    }

    pub fn alpha(&self) -> Order {
        Order::alpha(self.d)
    }

    /// Zero-energy interior wavenumber √(MV₀)/ℏ.
    pub fn eta0(&self) -> f64 {
        (self.v0 / self.units.h2m()).sqrt()
    }

    /// Dimensionless strength √(MV₀)·b/ℏ.
    pub fn strength(&self) -> f64 {
        self.eta0() * self.b
    }

    /// E = −ℏ²κ²/M
    pub fn energy_of_kappa(&self, kappa: f64) -> f64 {
        -self.units.h2m() * kappa * kappa
    }

    /// E = ℏ²k²/M
    pub fn energy_of_k(&self, k: f64) -> f64 {
        self.units.h2m() * k * k
    }
}

/// Interior wavenumber η = √(M(V₀ + E))/ℏ.
pub fn eta_of_energy(well: &WellSpec, e: f64) -> Result<f64> {
    let s = (well.v0 + e) / well.units.h2m();
    if !(s > 0.0) || !e.is_finite() {
        return domain(format!("energy {e} must exceed -V0 = {}", -well.v0));
    }
    Ok(s.sqrt())
}

/// J_α(x)/x^α, continued smoothly to x = 0.
fn regular_ratio(alpha: Order, x: f64) -> Result<f64> {
    if x < 1e-8 {
        // (1/2)^α/Γ(α+1) · (1 − x²/(4(α+1)))
        let d = Dimension::new((alpha.twice() + 2) as u32)?;
        let (lead, _) = small_argument_forms(d, 1.0)?;
        return Ok(lead * (1.0 - x * x / (4.0 * (alpha.nu() + 1.0))));
    }
    Ok(bessel_j(alpha, x)? / x.powf(alpha.nu()))
}

/// Interior solution c₁ηb^{d/2}/J_{d/2}(ηb) · J_α(ηr)/r^{d/2−1}, 0 ≤ r ≤ b.
pub fn psi_interior(well: &WellSpec, e: f64, r: f64) -> Result<f64> {
    if !(r >= 0.0 && r <= well.b) {
        return domain(format!("interior radius must lie in [0, b], got {r}"));
    }
    let eta = eta_of_energy(well, e)?;
    let alpha = well.alpha();
    let xb = eta * well.b;
    let jd = bessel_j(alpha.shifted(1), xb)?;
    if jd == 0.0 {
        return Err(Error::SingularPoint { what: "J_{d/2}(eta b) vanishes".into(), location: xb });
    }
    let norm = eta * well.b.powf(well.d.as_f64() / 2.0) / jd;
    // J_α(ηr)/r^α = η^α · J_α(ηr)/(ηr)^α
    Ok(norm * eta.powf(alpha.nu()) * regular_ratio(alpha, eta * r)?)
}

/// Exterior scattering solution (J_α(kr) − tan δ₀ Y_α(kr))/r^{d/2−1}, r ≥ b.
pub fn psi_exterior_scattering(well: &WellSpec, k: f64, r: f64) -> Result<f64> {
    if !(r >= well.b) || !r.is_finite() {
        return domain(format!("exterior radius must be at least b, got {r}"));
    }
    let t = tan_delta0_exact(well, k)?.tan_delta0;
    free_combination(well.alpha(), k, r, t)
}

pub(crate) fn free_combination(alpha: Order, k: f64, r: f64, tan_delta0: f64) -> Result<f64> {
    let x = k * r;
    Ok((bessel_j(alpha, x)? - tan_delta0 * bessel_y(alpha, x)?) / r.powf(alpha.nu()))
}

/// Exterior bound solution g₃K_α(κr)/r^{d/2−1} with g₃ = 1.
pub fn psi_exterior_bound(d: Dimension, kappa: f64, r: f64) -> Result<f64> {
    if !(kappa > 0.0) || !(r > 0.0) {
        return domain(format!("exterior bound wave needs kappa > 0 and r > 0, got {kappa}, {r}"));
    }
    let alpha = Order::alpha(d);
    let z = kappa * r;
    Ok(bessel_k_scaled(alpha, z)? * (-z).exp() / r.powf(alpha.nu()))
}

/// z·K_{α+1}(z)/K_α(z), with its z → 0 limit below 1e-30.
pub(crate) fn k_ratio(alpha: Order, z: f64) -> Result<f64> {
    if z < 1e-30 {
        return Ok(k_ratio_small(alpha, z.ln()));
    }
    Ok(z * bessel_k_scaled(alpha.shifted(1), z)? / bessel_k_scaled(alpha, z)?)
}

/// Leading small-z form of z·K_{α+1}(z)/K_α(z) in terms of t = ln z.
pub(crate) fn k_ratio_small(alpha: Order, t: f64) -> f64 {
    match alpha.twice() {
        -1 => t.exp(),
        0 => 1.0 / (std::f64::consts::LN_2 - t - EULER_GAMMA),
        n => n as f64,
    }
}

/// Difference of logarithmic derivatives (ψ'/ψ)_< − (ψ'/ψ)_> at r = b.
///
/// For E < 0 this is κK_{α+1}(κb)/K_α(κb) − ηJ_{α+1}(ηb)/J_α(ηb). For
/// E > 0 the exterior carries the matched phase shift, so the value is a
/// rounding-level consistency residual. E = 0 belongs to the k → 0 limits
/// of the scattering module and is rejected.
pub fn log_derivative_mismatch(well: &WellSpec, e: f64) -> Result<f64> {
    let eta = eta_of_energy(well, e)?;
    let alpha = well.alpha();
    let b = well.b;
    let xb = eta * b;
    let j0 = bessel_j(alpha, xb)?;
    let j1 = bessel_j(alpha.shifted(1), xb)?;
    let envelope = (2.0 / (std::f64::consts::PI * xb)).sqrt().min(1.0);
    if j0.abs() <= 1e-15 * envelope.max(j1.abs()) {
        return Err(Error::SingularPoint { what: "J_alpha(eta b) vanishes".into(), location: xb });
    }
    let inner = -eta * j1 / j0;
    if e < 0.0 {
        let kappa = (-e / well.units.h2m()).sqrt();
        let outer = -k_ratio(alpha, kappa * b)? / b;
        Ok(inner - outer)
    } else if e > 0.0 {
        let k = (e / well.units.h2m()).sqrt();
        let t = tan_delta0_exact(well, k)?.tan_delta0;
        let x = k * b;
        // d/dr [(J_α − tY_α)(kr) r^{−α}] = −k (J_{α+1} − tY_{α+1})(kr) r^{−α}
        let up = alpha.shifted(1);
        let num = bessel_j(up, x)? - t * bessel_y(up, x)?;
        let den = bessel_j(alpha, x)? - t * bessel_y(alpha, x)?;
        Ok(inner + k * num / den)
    } else {
        domain("E = 0 is handled by the zero-energy scattering limits")
    }
}
