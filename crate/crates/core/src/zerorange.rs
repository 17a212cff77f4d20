//! The b → 0 limit: fixed-area and fixed-scattering-length families,
//! regularized contact potentials and the operator limits behind them.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bound::{assemble_report, find_bound_states, shallow_kappa, shallowest, ConvergenceReport, ConvergenceRow};
use crate::error::{domain, Error, Result};
use crate::extrapolate::richardson;
use crate::geometry::{ball_volume, central_derivatives, Dimension};
use crate::roots::{bisect, first_bessel_zero};
use crate::scattering::{scattering_length, ScatteringLength};
use crate::specfun::{gamma_half_integer, Order, EULER_GAMMA};
use crate::well::{Units, WellSpec};

/// Integral of V over all space, −V₀ times the ball volume.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WellArea {
    pub v_tilde: f64,
}

pub fn area_under_well(well: &WellSpec) -> WellArea {
    WellArea { v_tilde: -ball_volume(well.d, well.b) * well.v0 }
}

/// Depth that keeps the area fixed at range b.
pub fn v0_from_area(d: Dimension, area: WellArea, b: f64) -> Result<f64> {
    if !(area.v_tilde < 0.0) {
        return domain(format!("an attractive well has negative area, got {}", area.v_tilde));
    }
    if !(b > 0.0) {
        return domain(format!("well range must be positive, got {b}"));
    }
    Ok(-area.v_tilde / ball_volume(d, b))
}

/// lim_{r→0} Ô⁽ᵈ⁾ K_α(κr)/r^{d/2−1}.
///
/// Ô⁽¹⁾ = 1, Ô⁽ᵈ⁾ = (∂/∂r)^{d−2} r^{d−2} for odd d ≥ 3, and
/// Ô⁽²⁾ = 1 − r ln(κr/(2e^{1−γ})) ∂/∂r.
pub fn regularization_operator_limit(d: Dimension, kappa: f64) -> Result<f64> {
    if !(kappa > 0.0) {
        return domain(format!("kappa must be positive, got {kappa}"));
    }
    match d.get() {
        1 => Ok((PI / (2.0 * kappa)).sqrt()),
        2 => Ok(-1.0),
        n if n % 2 == 1 => {
            let h = n as f64 / 2.0;
            let sign = if (n - 1) / 2 % 2 == 0 { 1.0 } else { -1.0 };
            let g = gamma_half_integer(n as f64 - 1.0)? / gamma_half_integer(h)?;
            Ok(sign * g * PI / 2.0 * (kappa / 2.0).powf(h - 1.0))
        }
        n => Err(unsupported_even(n)),
    }
}

fn unsupported_even(n: u32) -> Error {
    Error::UnsupportedDimension {
        d: n,
        reason: "the regularization operator is defined for odd d and d = 2 only".into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    /// Bare delta function (d = 1).
    Identity,
    /// (∂/∂r)^{order} r^{order} with order = d − 2 (odd d ≥ 3).
    DerivativePower { order: u32 },
    /// 1 − r ln(κr/(2e^{1−γ})) ∂/∂r (d = 2).
    Log2d,
}

/// Contact potential coefficient · δ⁽ᵈ⁾(r) · Ô.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PseudoPotential {
    pub d: Dimension,
    /// Energy · length^d.
    pub coefficient: f64,
    pub operator: OperatorKind,
    pub kappa: f64,
    /// Scattering length when the potential was built from one.
    pub a: Option<f64>,
}

fn operator_for(d: Dimension) -> Result<OperatorKind> {
    match d.get() {
        1 => Ok(OperatorKind::Identity),
        2 => Ok(OperatorKind::Log2d),
        n if n % 2 == 1 => Ok(OperatorKind::DerivativePower { order: n - 2 }),
        n => Err(unsupported_even(n)),
    }
}

/// Contact potential reproducing a shallow state of decay constant κ.
pub fn pseudopotential_for_kappa(d: Dimension, kappa: f64, units: Units) -> Result<PseudoPotential> {
    let operator = operator_for(d)?;
    if !(kappa > 0.0) {
        return domain(format!("kappa must be positive, got {kappa}"));
    }
    let h2m = units.h2m();
    let coefficient = match d.get() {
        1 => -2.0 * h2m * kappa,
        2 => 2.0 * PI * h2m,
        n => {
            let x = n as f64;
            let h = x / 2.0;
            let sign = if (n - 1) / 2 % 2 == 0 { 1.0 } else { -1.0 };
            let pre = x * PI.powf(h) / (gamma_half_integer(h + 1.0)? * gamma_half_integer(x - 2.0)?);
            let bracket =
                -sign * gamma_half_integer(h)? * gamma_half_integer(h - 1.0)? / PI * (2.0 / kappa).powi(n as i32 - 2);
            h2m * pre * bracket
        }
    };
    Ok(PseudoPotential { d, coefficient, operator, kappa, a: None })
}

/// Contact potential for a positive scattering length, with κ from the
/// shallow-state relation. Coefficients: −2ℏ²/(Ma) for d = 1, 4πℏ²a/M for
/// d = 3, 2πℏ²/M for d = 2.
pub fn pseudopotential(sl: &ScatteringLength, units: Units) -> Result<PseudoPotential> {
    operator_for(sl.d)?;
    let kappa = shallow_kappa(sl)?.kappa;
    let mut pp = pseudopotential_for_kappa(sl.d, kappa, units)?;
    match sl.d.get() {
        1 => pp.coefficient = -2.0 * units.h2m() / sl.a,
        3 => pp.coefficient = 4.0 * PI * units.h2m() * sl.a,
        _ => {}
    }
    pp.a = Some(sl.a);
    Ok(pp)
}

/// Probe radii r₀·2^{−n}, n = 0..12, with r₀ a multiple of the decay
/// length 1/κ. Larger r₀ in higher d keeps the r^{2−d} term from swamping
/// the finite part at the innermost probes.
pub fn probe_radii(pp: &PseudoPotential) -> Vec<f64> {
    let r0 = match pp.d.get() {
        1 | 2 => 0.5,
        3 => 2.0,
        _ => 12.0,
    } / pp.kappa;
    (0..13).map(|n| r0 * 0.5f64.powi(n)).collect()
}

/// lim_{r→0} Ôψ(r) from samples at geometric probe radii (ratio 1/2).
///
/// For odd d ≥ 3, r^{d−2}ψ is analytic at the origin, so the limit equals
/// (d−2)! times the r⁰ coefficient of ψ; that coefficient is isolated by
/// eliminating the powers r^{2−d}, …, r^{−1}, r, r², …. For d = 2 the
/// operator is applied with a numerical ψ' and the r² lnʲ r corrections
/// are removed (each even power three times, j ≤ 2).
pub fn apply_regularization<F>(pp: &PseudoPotential, psi: F, r_probe: &[f64]) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if r_probe.len() < 3 {
        return Err(Error::InvalidInput("need at least three probe radii".into()));
    }
    let ratio = r_probe[1] / r_probe[0];
    let geometric = r_probe.windows(2).all(|w| w[1] > 0.0 && ((w[1] / w[0]) / ratio - 1.0).abs() < 1e-12);
    if !geometric || !(ratio < 1.0) {
        return Err(Error::InvalidInput("probe radii must decrease geometrically".into()));
    }
    let count = r_probe.len();
    let (values, exponents, scale): (Vec<f64>, Vec<f64>, f64) = match pp.operator {
        OperatorKind::Identity => {
            let v = r_probe.iter().map(|&r| psi(r)).collect();
            (v, (1..count).map(|p| p as f64).collect(), 1.0)
        }
        OperatorKind::DerivativePower { order } => {
            let m = order as i32;
            let v = r_probe.iter().map(|&r| psi(r)).collect();
            let exps = (-m..0).chain(1..count as i32).map(|p| p as f64).collect();
            let factorial = (1..=order).fold(1.0, |acc, i| acc * i as f64);
            (v, exps, factorial)
        }
        OperatorKind::Log2d => {
            let shift = 1.0 - EULER_GAMMA + std::f64::consts::LN_2;
            let v = r_probe
                .iter()
                .map(|&r| {
                    let (d1, _) = central_derivatives(&psi, r)?;
                    Ok(psi(r) - r * ((pp.kappa * r).ln() - shift) * d1)
                })
                .collect::<Result<_>>()?;
            let exps = (1..count).map(|i| (2 * ((i + 2) / 3)) as f64).collect();
            (v, exps, 1.0)
        }
    };
    let est = richardson(&values, ratio, &exponents)?;
    let value = scale * est.value;
    if !(value.is_finite() && scale * est.error <= 1e-6 * value.abs().max(1.0)) {
        return Err(Error::NonConvergence(format!(
            "regularized limit did not stabilize: {value} ± {}",
            scale * est.error
        )));
    }
    Ok(value)
}

/// Depth V₀ giving scattering length `a_target` at range b, on the branch
/// that holds exactly one bound state (the weak-coupling branch for d = 1, 2).
pub fn tune_v0_for_a(d: Dimension, b: f64, a_target: f64, units: Units) -> Result<f64> {
    if !(b > 0.0 && a_target > b) || !a_target.is_finite() {
        return domain(format!("tuning needs 0 < b < a, got b = {b}, a = {a_target}"));
    }
    let (left, right) = match d.get() {
        1 => (0.0, PI / 2.0),
        2 => (0.0, first_bessel_zero(Order::new(0.0)?)?),
        _ => {
            let alpha = Order::alpha(d);
            (first_bessel_zero(alpha.shifted(-1))?, first_bessel_zero(alpha)?)
        }
    };
    let v0_of = |x: f64| (x / b).powi(2) * units.h2m();
    let mismatch = |x: f64| -> Result<f64> {
        let sl = scattering_length(&WellSpec::with_units(d, v0_of(x), b, units)?)?;
        // a runs from +∞ down to b across the bracket
        Ok(if sl.finite { sl.ln_a.unwrap_or(sl.a.ln()) - a_target.ln() } else { f64::INFINITY })
    };
    let lo = if left == 0.0 { right * 1e-100 } else { left * (1.0 + 1e-15) };
    let hi = right * (1.0 - 1e-15);
    if !(mismatch(hi)? < 0.0 && mismatch(lo)? > 0.0) {
        return Err(Error::NoSolution(format!("a = {a_target} is not reached on ηb ∈ ({left}, {right}) at b = {b}")));
    }
    let x = bisect(mismatch, lo, hi, 1e-16)?;
    let v0 = v0_of(x);
    let got = scattering_length(&WellSpec::with_units(d, v0, b, units)?)?;
    if !(got.finite && ((got.a - a_target) / a_target).abs() < 1e-10) {
        return Err(Error::NoSolution(format!("tuned depth {v0} gives a = {} instead of {a_target}", got.a)));
    }
    Ok(v0)
}

fn check_schedule(b_sequence: &[f64]) -> Result<()> {
    if b_sequence.len() < 2 {
        return Err(Error::InvalidInput("need at least two ranges".into()));
    }
    if b_sequence.iter().any(|&b| !(b > 0.0 && b.is_finite())) {
        return Err(Error::InvalidInput("ranges must be positive".into()));
    }
    if b_sequence.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::InvalidInput("ranges must decrease".into()));
    }
    Ok(())
}

/// Shallowest κ of wells tuned to a fixed scattering length as b → 0,
/// against the shallow-state prediction.
pub fn zero_range_convergence(
    d: Dimension,
    a_target: f64,
    b_sequence: &[f64],
    units: Units,
) -> Result<ConvergenceReport> {
    check_schedule(b_sequence)?;
    if b_sequence[0] >= a_target {
        return domain("every range must lie below the scattering length");
    }
    let predicted = shallow_kappa(&ScatteringLength::from_length(d, a_target)?)?;
    let rows = b_sequence
        .par_iter()
        .map(|&b| {
            let v0 = tune_v0_for_a(d, b, a_target, units)?;
            let kappa = shallowest(&WellSpec::with_units(d, v0, b, units)?)?;
            Ok(ConvergenceRow { b, v0, kappa, error: (kappa - predicted.kappa).abs() })
        })
        .collect::<Result<Vec<_>>>()?;
    assemble_report(d, a_target, predicted, rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathologyRow {
    pub b: f64,
    pub v0: f64,
    pub count: usize,
    /// Deepest bound-state energy, absent when nothing binds.
    pub ground_energy: Option<f64>,
}

/// Spectrum of fixed-area wells as b → 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathologyReport {
    pub d: Dimension,
    pub v_tilde: f64,
    pub rows: Vec<PathologyRow>,
    pub count_nondecreasing: bool,
    pub count_increased: bool,
    /// |E_ground| at the smallest b over |E_ground| at the largest.
    pub ground_energy_growth: Option<f64>,
    /// Energy of the one-dimensional delta well of the same area, −Mṽ₀²/(4ℏ²).
    pub delta_well_energy: Option<f64>,
}

pub fn pathology_scan(d: Dimension, area: WellArea, b_sequence: &[f64], units: Units) -> Result<PathologyReport> {
    check_schedule(b_sequence)?;
    let rows = b_sequence
        .par_iter()
        .map(|&b| {
            let v0 = v0_from_area(d, area, b)?;
            let states = find_bound_states(&WellSpec::with_units(d, v0, b, units)?)?;
            Ok(PathologyRow { b, v0, count: states.len(), ground_energy: states.first().map(|s| s.energy) })
        })
        .collect::<Result<Vec<_>>>()?;
    let count_nondecreasing = rows.windows(2).all(|w| w[1].count >= w[0].count);
    let count_increased = rows.last().unwrap().count > rows[0].count;
    let ground_energy_growth = match (rows[0].ground_energy, rows.last().unwrap().ground_energy) {
        (Some(first), Some(last)) => Some(last.abs() / first.abs()),
        _ => None,
    };
    let delta_well_energy = (d.get() == 1).then(|| -area.v_tilde.powi(2) / (4.0 * units.h2m()));
    Ok(PathologyReport {
        d,
        v_tilde: area.v_tilde,
        rows,
        count_nondecreasing,
        count_increased,
        ground_energy_growth,
        delta_well_energy,
    })
}
