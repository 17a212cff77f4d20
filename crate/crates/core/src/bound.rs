//! Bound states: roots of the matching condition, the cot δ₀ = i
//! continuation, and the shallow-state relations to the scattering length.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::extrapolate::{log_log_slope, three_point_limit};
use crate::geometry::Dimension;
use crate::scattering::{scattering_length, ScatteringLength};
use crate::specfun::{bessel_i_scaled, bessel_j, bessel_k_scaled, gamma_half_integer, Order, EULER_GAMMA};
use crate::well::{k_ratio, k_ratio_small, Units, WellSpec};

/// Grid step in ηb for the sign-change scan.
pub const SCAN_STEP: f64 = PI / 200.0;

/// κb below which a state is flagged as sitting at threshold.
pub const THRESHOLD_KAPPA_B: f64 = 1e-8;

const BISECT_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundState {
    pub kappa: f64,
    /// ln κ, finite even when κ underflows.
    pub ln_kappa: f64,
    pub energy: f64,
    /// Matching residual at the root, relative to the size of its two terms.
    pub residual: f64,
    pub threshold: bool,
}

/// κK_{α+1}(κb)J_α(ηb) − ηJ_{α+1}(ηb)K_α(κb) with η² = MV₀/ℏ² − κ².
pub fn bound_condition_residual(well: &WellSpec, kappa: f64) -> Result<f64> {
    let eta0 = well.eta0();
    if !(kappa > 0.0 && kappa < eta0) {
        return domain(format!("kappa must lie in (0, {eta0}), got {kappa}"));
    }
    let eta = ((eta0 - kappa) * (eta0 + kappa)).sqrt();
    let alpha = well.alpha();
    let (z, x) = (kappa * well.b, eta * well.b);
    let damp = (-z).exp();
    let k0 = bessel_k_scaled(alpha, z)? * damp;
    let k1 = bessel_k_scaled(alpha.shifted(1), z)? * damp;
    Ok(kappa * k1 * bessel_j(alpha, x)? - eta * bessel_j(alpha.shifted(1), x)? * k0)
}

/// The cross form divided by K_α(κb)/b: R(κb)·J_α(x) − x·J_{α+1}(x) with
/// R(z) = zK_{α+1}(z)/K_α(z). Returns the value and the sum of the
/// magnitudes of its two terms.
fn scaled_residual(alpha: Order, x: f64, ratio: f64) -> Result<(f64, f64)> {
    let t1 = ratio * bessel_j(alpha, x)?;
    let t2 = x * bessel_j(alpha.shifted(1), x)?;
    Ok((t1 - t2, t1.abs() + t2.abs()))
}

/// Residual as a function of x = ηb at fixed strength X.
fn residual_in_x(alpha: Order, strength: f64, x: f64) -> Result<(f64, f64)> {
    let z = ((strength - x) * (strength + x)).max(0.0).sqrt();
    let ratio = if z == 0.0 { k_ratio_small(alpha, f64::NEG_INFINITY) } else { k_ratio(alpha, z)? };
    scaled_residual(alpha, x, ratio)
}

/// Residual as a function of t = ln(κb) at fixed strength X.
fn residual_in_t(alpha: Order, strength: f64, t: f64) -> Result<(f64, f64)> {
    let z = t.exp();
    let x = ((strength - z) * (strength + z)).sqrt();
    let ratio = if z < 1e-30 { k_ratio_small(alpha, t) } else { k_ratio(alpha, z)? };
    scaled_residual(alpha, x, ratio)
}

/// Bisection keeping the bracket endpoints, followed by one secant (Newton)
/// step. `tol` is absolute in the variable.
fn refine<F>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let mut f_lo = f(lo)?;
    let mut f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NonConvergence(format!("lost the sign change on [{lo}, {hi}]")));
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= tol || mid <= lo || mid >= hi {
            break;
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
            f_hi = f_mid;
        }
    }
    let polished = lo - f_lo * (hi - lo) / (f_hi - f_lo);
    if polished.is_finite() && polished >= lo && polished <= hi {
        Ok(polished)
    } else {
        Ok(0.5 * (lo + hi))
    }
}

/// All bound states, deepest first.
pub fn find_bound_states(well: &WellSpec) -> Result<Vec<BoundState>> {
    let alpha = well.alpha();
    let strength = well.strength();
    let b = well.b;
    let n = ((strength / SCAN_STEP).ceil() as usize).max(16);
    let grid: Vec<f64> =
        (0..=n).map(|i| if i == 0 { strength * 1e-6 / n as f64 } else { strength * i as f64 / n as f64 }).collect();
    let values: Vec<f64> =
        grid.par_iter().map(|&x| residual_in_x(alpha, strength, x).map(|v| v.0)).collect::<Result<_>>()?;

    let mut states: Vec<BoundState> = Vec::new();
    for i in 1..=n {
        let (g0, g1) = (values[i - 1], values[i]);
        let crossing = g0.signum() != g1.signum() && g0 != 0.0;
        if !crossing || (g1 == 0.0 && i == n) {
            continue;
        }
        let (x, t) = if grid[i] <= strength * FRAC_1_SQRT_2 {
            let f = |x: f64| residual_in_x(alpha, strength, x).map(|v| v.0);
            let x = refine(f, grid[i - 1], grid[i], BISECT_TOL * grid[i])?;
            let z = ((strength - x) * (strength + x)).sqrt();
            (x, z.ln())
        } else {
            let f = |t: f64| residual_in_t(alpha, strength, t).map(|v| v.0);
            let z_hi = ((strength - grid[i - 1]) * (strength + grid[i - 1])).sqrt();
            let t_hi = z_hi.ln();
            let t_lo = if i < n {
                let z_lo = ((strength - grid[i]) * (strength + grid[i])).sqrt();
                z_lo.ln()
            } else {
                lower_log_bracket(&f, t_hi)?
            };
            let t = refine(f, t_lo, t_hi, BISECT_TOL)?;
            let z = t.exp();
            (((strength - z) * (strength + z)).sqrt(), t)
        };
        let ratio = if t < -69.0 { k_ratio_small(alpha, t) } else { k_ratio(alpha, t.exp())? };
        let (g, scale) = scaled_residual(alpha, x, ratio)?;
        let ln_kappa = t - b.ln();
        let kappa = ln_kappa.exp();
        let state = BoundState {
            kappa,
            ln_kappa,
            energy: -well.units.h2m() * (2.0 * ln_kappa).exp(),
            residual: g / scale,
            threshold: t < THRESHOLD_KAPPA_B.ln(),
        };
        if let Some(prev) = states.last() {
            if (prev.ln_kappa - state.ln_kappa).abs() < 1e-10 {
                continue;
            }
        }
        states.push(state);
    }
    Ok(states)
}

/// Walk t downward until the residual changes sign relative to t_hi.
fn lower_log_bracket<F>(f: &F, t_hi: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let s_hi = f(t_hi)?.signum();
    let mut step = 1.0;
    while step < 1e300 {
        let t = t_hi - step;
        if f(t)?.signum() != s_hi {
            return Ok(t);
        }
        step *= 2.0;
    }
    Err(Error::NonConvergence("threshold root lies below every representable kappa".into()))
}

pub fn count_bound_states(well: &WellSpec) -> Result<usize> {
    Ok(find_bound_states(well)?.len())
}

/// |cot δ₀ − i| for the phase shift continued to k = iκ.
///
/// With J_α(iz) = i^α I_α(z) and Y_α(iz) = i^{α+1} I_α(z) − (2/π) i^{−α} K_α(z),
/// the numerator of tan δ₀ becomes i^α P and its denominator i^{α+1} P +
/// (2/π) i^{−α} C, where P = ηI_α(κb)J_{α+1}(ηb) + κI_{α+1}(κb)J_α(ηb) and
/// C is the bound-state cross form. The I terms cancel in D − iN, leaving
/// |cot δ₀ − i| = (2/π)|C|/|P|, evaluated here with scaled I and K.
pub fn continuation_identity_residual(well: &WellSpec, kappa: f64) -> Result<f64> {
    let eta0 = well.eta0();
    if !(kappa > 0.0 && kappa < eta0) {
        return domain(format!("kappa must lie in (0, {eta0}), got {kappa}"));
    }
    let eta = ((eta0 - kappa) * (eta0 + kappa)).sqrt();
    let alpha = well.alpha();
    let up = alpha.shifted(1);
    let (z, x) = (kappa * well.b, eta * well.b);
    let (j0, j1) = (bessel_j(alpha, x)?, bessel_j(up, x)?);
    // both sides divided by K̃_α(z); C carries e^{−z}, P carries e^{+z}
    let k0 = bessel_k_scaled(alpha, z)?;
    let c = (k_ratio(alpha, z)? * j0 - x * j1) / well.b;
    let p = (eta * j1 * bessel_i_scaled(alpha, z)? + kappa * j0 * bessel_i_scaled(up, z)?) / k0;
    let value = 2.0 / PI * (-2.0 * z).exp() * c.abs() / p.abs();
    if !value.is_finite() {
        return Err(Error::NonConvergence(format!("continued phase shift overflowed at kappa = {kappa}")));
    }
    Ok(value)
}

/// Shallow-state wavenumber predicted by the scattering length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShallowRelation {
    pub d: Dimension,
    pub kappa: f64,
    /// True where the fractional power of i has no branch fixed by the theory.
    pub branch_dependent: bool,
}

impl ShallowRelation {
    /// E = −ℏ²κ²/M
    pub fn energy(&self, units: Units) -> f64 {
        -units.h2m() * self.kappa * self.kappa
    }
}

/// κ = Im k at cot δ₀ = i: 1/a for d = 1, 3 and 2e^{−γ}/a for d = 2.
/// Other dimensions use the principal branch of i^{1/(d−2)}.
pub fn shallow_kappa(sl: &ScatteringLength) -> Result<ShallowRelation> {
    if !sl.finite || !(sl.a > 0.0) {
        return domain(format!("shallow states need a finite positive scattering length, got {}", sl.a));
    }
    let d = sl.d;
    let (kappa, branch_dependent) = match d.get() {
        1 | 3 => (1.0 / sl.a, false),
        2 => (2.0 * (-EULER_GAMMA - sl.ln_a.unwrap_or(sl.a.ln())).exp(), false),
        n => {
            let p = 1.0 / (n as f64 - 2.0);
            let h = n as f64 / 2.0;
            let base = gamma_half_integer(h)? * gamma_half_integer(h - 1.0)? / PI;
            ((PI * p / 2.0).sin() * 2.0 / sl.a * base.powf(p), true)
        }
    };
    Ok(ShallowRelation { d, kappa, branch_dependent })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub b: f64,
    pub v0: f64,
    pub kappa: f64,
    pub error: f64,
}

/// Shallowest κ along a family of wells with b → 0 at fixed a.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub d: Dimension,
    pub a: f64,
    pub kappa_predicted: f64,
    pub branch_dependent: bool,
    pub rows: Vec<ConvergenceRow>,
    /// Least-squares slope of ln|κ(b) − κ_predicted| against ln b.
    pub order: f64,
    /// Limit of κ(b) through the three smallest b, each triple fitted with
    /// its own order; error is the change from the preceding triple.
    pub kappa_extrapolated: f64,
    pub extrapolation_error: f64,
}

pub(crate) fn assemble_report(
    d: Dimension,
    a: f64,
    predicted: ShallowRelation,
    rows: Vec<ConvergenceRow>,
) -> Result<ConvergenceReport> {
    if rows.len() < 2 {
        return Err(Error::InvalidInput("a convergence study needs at least two wells".into()));
    }
    let bs: Vec<f64> = rows.iter().map(|r| r.b).collect();
    let errs: Vec<f64> = rows.iter().map(|r| r.error).collect();
    let order = log_log_slope(&bs, &errs)?;
    let n = rows.len();
    let kappas: Vec<f64> = rows.iter().map(|r| r.kappa).collect();
    // limit from rows i−1, i at the fitted order
    let pair = |i: usize| {
        let (w1, w2) = (bs[i - 1].powf(order), bs[i].powf(order));
        (kappas[i] * w1 - kappas[i - 1] * w2) / (w1 - w2)
    };
    // limit from rows i−2..=i with their own local order
    let triple = |i: usize| {
        three_point_limit([bs[i - 2], bs[i - 1], bs[i]], [kappas[i - 2], kappas[i - 1], kappas[i]]).map(|(l, _)| l)
    };
    let (kappa_extrapolated, extrapolation_error) = match n {
        2 => (pair(1), (pair(1) - kappas[1]).abs()),
        _ => match (triple(n - 1), (n >= 4).then(|| triple(n - 2)).flatten()) {
            (Some(l), Some(prev)) => (l, (l - prev).abs()),
            (Some(l), None) => (l, (l - pair(n - 1)).abs()),
            _ => (pair(n - 1), (pair(n - 1) - pair(n - 2)).abs()),
        },
    };
    Ok(ConvergenceReport {
        d,
        a,
        kappa_predicted: predicted.kappa,
        branch_dependent: predicted.branch_dependent,
        rows,
        order,
        kappa_extrapolated,
        extrapolation_error,
    })
}

pub(crate) fn shallowest(well: &WellSpec) -> Result<f64> {
    find_bound_states(well)?.last().map(|s| s.kappa).ok_or(Error::MissingBoundState { b: well.b })
}

/// Compares the shallowest bound state of each well against the shallow
/// relation of their common scattering length.
pub fn shallow_limit_check(wells: &[WellSpec]) -> Result<ConvergenceReport> {
    let first = wells.first().ok_or_else(|| Error::InvalidInput("empty well family".into()))?;
    let d = first.d;
    if wells.iter().any(|w| w.d != d) {
        return Err(Error::InvalidInput("well family mixes dimensions".into()));
    }
    if wells.windows(2).any(|w| !(w[1].b < w[0].b)) {
        return Err(Error::InvalidInput("well ranges must decrease".into()));
    }
    let sl = scattering_length(first)?;
    for w in wells {
        let other = scattering_length(w)?;
        if !(((other.a - sl.a) / sl.a).abs() <= 1e-10) {
            return Err(Error::InvalidInput(format!(
                "well with b = {} has a = {}, family has a = {}",
                w.b, other.a, sl.a
            )));
        }
    }
    let predicted = shallow_kappa(&sl)?;
    let rows = wells
        .par_iter()
        .map(|w| {
            let kappa = shallowest(w)?;
            Ok(ConvergenceRow { b: w.b, v0: w.v0, kappa, error: (kappa - predicted.kappa).abs() })
        })
        .collect::<Result<Vec<_>>>()?;
    assemble_report(d, sl.a, predicted, rows)
}
