//! Positive-energy observables: phase shifts and scattering lengths.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::geometry::Dimension;
use crate::roots::{bisect, distance_to_bessel_zero};
use crate::specfun::{bessel_j, bessel_y, gamma_half_integer, Order, EULER_GAMMA};
use crate::well::{free_combination, Units, WellSpec};

/// Distance in ηb below which a scattering length is reported as a resonance.
pub const RESONANCE_WINDOW: f64 = 1e-9;

/// Relative size below which the tan δ₀ denominator counts as zero.
pub const POLE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseShift {
    pub k: f64,
    pub tan_delta0: f64,
    /// δ₀ on the principal branch (−π/2, π/2].
    pub delta0: f64,
}

impl PhaseShift {
    fn new(k: f64, tan_delta0: f64) -> Self {
        let delta0 = if tan_delta0.is_infinite() { PI / 2.0 } else { tan_delta0.atan() };
        Self { k, tan_delta0, delta0 }
    }
}

/// s-wave scattering length.
///
/// For d ≠ 2 the signed power a^{d−2} is kept in `a_power` and `a` is the
/// real representative sign(a^{d−2})·|a^{d−2}|^{1/(d−2)}. For d = 2, `ln_a`
/// carries ln a, which stays finite where a itself under- or overflows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScatteringLength {
    pub d: Dimension,
    pub a: f64,
    pub a_power: Option<f64>,
    pub ln_a: Option<f64>,
    pub finite: bool,
}

impl ScatteringLength {
    /// A scattering length given directly as a length.
    pub fn from_length(d: Dimension, a: f64) -> Result<Self> {
        if !a.is_finite() || a == 0.0 {
            return domain(format!("scattering length must be finite and nonzero, got {a}"));
        }
        if d.get() == 2 {
            if a < 0.0 {
                return domain("a two-dimensional scattering length is positive");
            }
            return Ok(Self { d, a, a_power: None, ln_a: Some(a.ln()), finite: true });
        }
        let m = d.get() as i32 - 2;
        let a_power = a.signum() * a.abs().powi(m);
        Ok(Self { d, a, a_power: Some(a_power), ln_a: None, finite: true })
    }

    fn from_power(d: Dimension, p: f64) -> Self {
        let m = d.as_f64() - 2.0;
        let a = p.signum() * p.abs().powf(1.0 / m);
        Self { d, a, a_power: Some(p), ln_a: None, finite: true }
    }

    fn resonant(d: Dimension) -> Self {
        Self { d, a: f64::INFINITY, a_power: None, ln_a: None, finite: false }
    }
}

/// π/(Γ(d/2)Γ(d/2−1)), the prefactor of the low-energy law for d ≠ 2.
pub(crate) fn universal_prefactor(d: Dimension) -> Result<f64> {
    let h = d.as_f64() / 2.0;
    Ok(PI / (gamma_half_integer(h)? * gamma_half_integer(h - 1.0)?))
}

/// Exact tan δ₀ at E = ℏ²k²/M.
pub fn tan_delta0_exact(well: &WellSpec, k: f64) -> Result<PhaseShift> {
    if !(k > 0.0) || !k.is_finite() {
        return domain(format!("wavenumber must be positive, got {k}"));
    }
    let eta = (well.eta0().powi(2) + k * k).sqrt();
    let alpha = well.alpha();
    let up = alpha.shifted(1);
    let (kb, xb) = (k * well.b, eta * well.b);
    let (j0, j1) = (bessel_j(alpha, xb)?, bessel_j(up, xb)?);
    let num = eta * bessel_j(alpha, kb)? * j1 - k * bessel_j(up, kb)? * j0;
    let d1 = eta * j1 * bessel_y(alpha, kb)?;
    let d2 = k * bessel_y(up, kb)? * j0;
    let den = d1 - d2;
    if den.abs() <= POLE_TOLERANCE * (d1.abs() + d2.abs()) {
        return Err(Error::ResonancePole { k });
    }
    Ok(PhaseShift::new(k, num / den))
}

/// Leading low-k form of tan δ₀, with η taken at zero energy.
pub fn tan_delta0_lowk(well: &WellSpec, k: f64) -> Result<PhaseShift> {
    if !(k > 0.0) || !k.is_finite() {
        return domain(format!("wavenumber must be positive, got {k}"));
    }
    let sl = scattering_length(well)?;
    if !sl.finite {
        return Err(Error::ResonancePole { k });
    }
    if well.d.get() == 2 {
        let xb = well.strength();
        let j0 = bessel_j(Order::new(0.0)?, xb)?;
        let j1 = bessel_j(Order::new(1.0)?, xb)?;
        let den = (k / 2.0).ln() + EULER_GAMMA + well.b.ln() + j0 / (xb * j1);
        if den == 0.0 {
            return Err(Error::ResonancePole { k });
        }
        return Ok(PhaseShift::new(k, PI / (2.0 * den)));
    }
    let m = well.d.get() as i32 - 2;
    let t = -universal_prefactor(well.d)? * (k / 2.0).powi(m) * sl.a_power.unwrap_or(f64::NAN);
    Ok(PhaseShift::new(k, t))
}

/// Scattering length of the well from its zero-energy matching.
pub fn scattering_length(well: &WellSpec) -> Result<ScatteringLength> {
    let d = well.d;
    let x = well.strength();
    let b = well.b;
    let alpha = well.alpha();
    // the pole sits at zeros of J_{1/2} (d = 1), J_1 (d = 2), J_{α−1} (d ≥ 3)
    let pole_order = match d.get() {
        1 => Order::new(0.5)?,
        2 => Order::new(1.0)?,
        _ => Order::from_twice(alpha.twice() - 2)?,
    };
    if let Some(dist) = distance_to_bessel_zero(pole_order, x)? {
        if dist <= RESONANCE_WINDOW {
            return Ok(ScatteringLength::resonant(d));
        }
    }
    match d.get() {
        2 => {
            let j0 = bessel_j(alpha, x)?;
            let j1 = bessel_j(alpha.shifted(1), x)?;
            let ln_a = b.ln() + j0 / (x * j1);
            Ok(ScatteringLength { d, a: ln_a.exp(), a_power: None, ln_a: Some(ln_a), finite: true })
        }
        1 => {
            // a = b(1 + J_{−1/2}/(x J_{1/2}))
            let jm = bessel_j(alpha, x)?;
            let jp = bessel_j(alpha.shifted(1), x)?;
            let a = b * (1.0 + jm / (x * jp));
            Ok(ScatteringLength { d, a, a_power: Some(1.0 / a), ln_a: None, finite: true })
        }
        n => {
            // x J_{α+1} − (d−2) J_α = −x J_{α−1}
            let jp = bessel_j(alpha.shifted(1), x)?;
            let jm = bessel_j(pole_order, x)?;
            let p = -b.powi(n as i32 - 2) * jp / jm;
            Ok(ScatteringLength::from_power(d, p))
        }
    }
}

/// Shape-independent low-energy tan δ₀ fixed by the scattering length alone.
pub fn tan_delta0_universal(sl: &ScatteringLength, k: f64) -> Result<PhaseShift> {
    if !(k > 0.0) || !k.is_finite() {
        return domain(format!("wavenumber must be positive, got {k}"));
    }
    if !sl.finite {
        return domain("the universal law needs a finite scattering length");
    }
    if sl.d.get() == 2 {
        let ln_a = sl.ln_a.unwrap_or(sl.a.ln());
        let den = k.ln() + ln_a - std::f64::consts::LN_2 + EULER_GAMMA;
        if !(den < 0.0) {
            return domain(format!("two-dimensional law needs k a < 2 e^(-gamma), got k = {k}"));
        }
        return Ok(PhaseShift::new(k, PI / (2.0 * den)));
    }
    let m = sl.d.get() as i32 - 2;
    let p = sl.a_power.ok_or_else(|| Error::Domain("missing a^(d-2)".into()))?;
    Ok(PhaseShift::new(k, -universal_prefactor(sl.d)? * (k / 2.0).powi(m) * p))
}

/// Low-energy exterior wavefunction 1 − a^{d−2}/r^{d−2} (d ≠ 2) or
/// 1 − (ln(kr/2) + γ)/(ln(ka/2) + γ) (d = 2), up to normalization.
pub fn asymptotic_wavefunction(sl: &ScatteringLength, k: f64, r: f64) -> Result<f64> {
    if !(r > 0.0) || !sl.finite {
        return domain("asymptotic wavefunction needs r > 0 and finite a");
    }
    if sl.d.get() == 2 {
        let ln_a = sl.ln_a.unwrap_or(sl.a.ln());
        let num = (k * r / 2.0).ln() + EULER_GAMMA;
        let den = k.ln() + ln_a - std::f64::consts::LN_2 + EULER_GAMMA;
        return Ok(1.0 - num / den);
    }
    let m = sl.d.get() as i32 - 2;
    let p = sl.a_power.ok_or_else(|| Error::Domain("missing a^(d-2)".into()))?;
    Ok(1.0 - p / r.powi(m))
}

/// First node r > b of the exterior scattering wave at wavenumber k.
pub fn node_scattering_length(well: &WellSpec, k: f64) -> Result<f64> {
    let sl = scattering_length(well)?;
    let b = well.b;
    if !sl.finite || !(sl.a > b * (1.0 + 1e-9)) {
        return Err(Error::NoNode { a: sl.a, b });
    }
    let t = tan_delta0_exact(well, k)?.tan_delta0;
    let alpha = well.alpha();
    let f = |r: f64| free_combination(alpha, k, r, t);
    let ratio = 1.01;
    let mut lo = b;
    let mut f_lo = f(lo)?;
    while k * lo < 50.0 {
        let hi = lo * ratio;
        let f_hi = f(hi)?;
        if f_lo.signum() != f_hi.signum() {
            return bisect(f, lo, hi, 1e-15);
        }
        lo = hi;
        f_lo = f_hi;
    }
    Err(Error::NoNode { a: sl.a, b })
}

/// π²ℏ²/(4Mb²), the depth at which the three-dimensional well first binds.
pub fn min_depth_3d(b: f64, units: Units) -> Result<f64> {
    if !(b > 0.0) {
        return domain(format!("well range must be positive, got {b}"));
    }
    Ok(PI * PI * units.h2m() / (4.0 * b * b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::first_bessel_zero;

    fn dim(d: u32) -> Dimension {
        Dimension::new(d).unwrap()
    }

    fn well_at(d: u32, x: f64, b: f64) -> WellSpec {
        WellSpec::new(dim(d), (x / b).powi(2), b).unwrap()
    }

    #[test]
    fn closed_form_scattering_lengths() {
        let a = scattering_length(&WellSpec::new(dim(3), 2.0, 1.0).unwrap()).unwrap();
        let s = 2f64.sqrt();
        assert!((a.a - (1.0 - s.tan() / s)).abs() < 1e-13);
        assert!((a.a + 3.478).abs() < 1e-3);

        let a = scattering_length(&well_at(1, PI / 2.0, 0.7)).unwrap();
        assert!((a.a - 0.7).abs() < 1e-15);
        let a = scattering_length(&well_at(3, PI, 0.7)).unwrap();
        assert!((a.a - 0.7).abs() < 1e-14);
        let j01 = first_bessel_zero(Order::new(0.0).unwrap()).unwrap();
        let a = scattering_length(&well_at(2, j01, 0.7)).unwrap();
        assert!((a.a - 0.7).abs() < 1e-14);
    }

    #[test]
    fn resonances_are_flagged() {
        let j11 = first_bessel_zero(Order::new(1.0).unwrap()).unwrap();
        assert!(!scattering_length(&well_at(2, j11, 1.0)).unwrap().finite);
        assert!(scattering_length(&well_at(2, j11 + 1e-8, 1.0)).unwrap().finite);
        assert!(!scattering_length(&well_at(3, PI / 2.0, 1.0)).unwrap().finite);
        assert!(!scattering_length(&well_at(1, PI, 1.0)).unwrap().finite);
    }

    #[test]
    fn threshold_sign_change_in_3d() {
        let above = scattering_length(&well_at(3, PI / 2.0 + 0.01, 1.0)).unwrap();
        let below = scattering_length(&well_at(3, PI / 2.0 - 0.01, 1.0)).unwrap();
        assert!(above.a > 50.0 && below.a < -50.0);
    }

    #[test]
    fn general_dimension_matches_printed_bracket() {
        for d in 4..=9 {
            let w = well_at(d, 1.3, 0.8);
            let alpha = w.alpha();
            let x = w.strength();
            let ratio = bessel_j(alpha, x).unwrap() / bessel_j(alpha.shifted(1), x).unwrap();
            let bracket = 1.0 + (2.0 - d as f64) / x * ratio;
            let want = 1.0 / (0.8f64.powi(2 - d as i32) * bracket);
            let got = scattering_length(&w).unwrap().a_power.unwrap();
            assert!(((got - want) / want).abs() < 1e-13, "d={d}");
        }
    }

    #[test]
    fn exact_phase_shift_examples() {
        let w = WellSpec::new(dim(3), 2.0, 1.0).unwrap();
        let t = tan_delta0_exact(&w, 0.1).unwrap().tan_delta0;
        // trigonometric form for d = 3: tan δ₀ = (k tan(ηb) − η tan(kb))/(η + k tan(kb) tan(ηb))
        let (k, eta) = (0.1f64, (2.0f64 + 0.01).sqrt());
        let want = (k * eta.tan() - eta * k.tan()) / (eta + k * k.tan() * eta.tan());
        assert!((t - want).abs() < 1e-13, "{t} vs {want}");

        let shallow = WellSpec::new(dim(3), 1e-12, 1.0).unwrap();
        assert!(tan_delta0_exact(&shallow, 0.3).unwrap().tan_delta0.abs() < 1e-11);
    }

    #[test]
    fn lowk_forms() {
        let w = well_at(3, 1.2, 1.0);
        let k = 1e-3;
        let a = 1.0 - 1.2f64.tan() / 1.2;
        let t = tan_delta0_lowk(&w, k).unwrap().tan_delta0;
        assert!((t + k * a).abs() < 1e-15);

        let j01 = first_bessel_zero(Order::new(0.0).unwrap()).unwrap();
        let w = well_at(2, j01, 1.0);
        let t = tan_delta0_lowk(&w, k).unwrap().tan_delta0;
        let want = PI / (2.0 * ((k / 2.0).ln() + EULER_GAMMA));
        assert!((t - want).abs() < 1e-12);

        for d in [1, 2, 3, 5] {
            let w = well_at(d, 0.9, 1.0);
            let err = |k: f64| {
                let e = tan_delta0_exact(&w, k).unwrap().tan_delta0;
                ((tan_delta0_lowk(&w, k).unwrap().tan_delta0 - e) / e).abs()
            };
            assert!(err(1e-4) < err(1e-2) && err(1e-4) < 1e-3, "d={d}");
        }
    }

    #[test]
    fn universal_examples() {
        let t = |d: u32, a: f64, k: f64| {
            let sl = ScatteringLength::from_length(dim(d), a).unwrap();
            tan_delta0_universal(&sl, k).unwrap().tan_delta0
        };
        assert!((t(3, 1.0, 0.01) + 0.01).abs() < 1e-16);
        assert!((t(1, 1.0, 0.01) - 100.0).abs() < 1e-12);
        assert!((t(2, 1.0, 0.01) + 0.332_718_171_745_182_9).abs() < 1e-15);
        let sl = ScatteringLength::from_length(dim(2), 1.0).unwrap();
        assert!(tan_delta0_universal(&sl, 5.0).is_err());
    }

    #[test]
    fn asymptotic_nodes() {
        for d in [1, 2, 3] {
            let sl = ScatteringLength::from_length(dim(d), 2.0).unwrap();
            assert!(asymptotic_wavefunction(&sl, 1e-3, 2.0).unwrap().abs() < 1e-15, "d={d}");
        }
    }

    #[test]
    fn node_tracks_scattering_length() {
        // tune a = 3b on the first bound branch: 1 − tan x/x = 3
        let x = bisect(|x: f64| Ok(1.0 - x.tan() / x - 3.0), PI / 2.0 + 1e-9, PI - 1e-9, 1e-15).unwrap();
        let w = well_at(3, x, 1.0);
        let node = node_scattering_length(&w, 1e-4).unwrap();
        assert!((node - 3.0).abs() < 3e-3);
        let far = node_scattering_length(&w, 1e-2).unwrap();
        assert!((far - 3.0).abs() > (node - 3.0).abs());

        assert!(matches!(
            node_scattering_length(&WellSpec::new(dim(3), 2.0, 1.0).unwrap(), 1e-4),
            Err(Error::NoNode { .. })
        ));
        let j01 = first_bessel_zero(Order::new(0.0).unwrap()).unwrap();
        assert!(node_scattering_length(&well_at(2, j01, 1.0), 1e-4).is_err());
    }

    #[test]
    fn minimum_depth() {
        let v = min_depth_3d(1.0, Units::NATURAL).unwrap();
        assert!((v - 2.467_401_100_272_339_6).abs() < 1e-15);
        assert!((min_depth_3d(2.0, Units::NATURAL).unwrap() - v / 4.0).abs() < 1e-15);
    }

    #[test]
    fn two_dimensional_lengths_are_positive() {
        for i in 1..400 {
            let x = i as f64 * 0.05;
            let sl = scattering_length(&well_at(2, x, 1.0)).unwrap();
            assert!(!sl.finite || sl.ln_a.unwrap().is_finite(), "x={x}");
        }
    }
}
