//! Hyperspherical bookkeeping for s-wave problems in d dimensions.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::specfun::gamma_half_integer;

/// Largest supported spatial dimension.
pub const MAX_DIMENSION: u32 = 9;

/// Spatial dimension d, 1 ≤ d ≤ 9.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct Dimension(u32);

impl Dimension {
    pub fn new(d: u32) -> Result<Self> {
        if (1..=MAX_DIMENSION).contains(&d) {
            Ok(Self(d))
        } else {
            domain(format!("dimension must lie in 1..={MAX_DIMENSION}, got {d}"))
        }
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        self.0 as f64
    }

    /// d/2 − 1
    pub fn alpha(self) -> f64 {
        self.as_f64() / 2.0 - 1.0
    }
}

impl TryFrom<u32> for Dimension {
    type Error = Error;
    fn try_from(d: u32) -> Result<Self> {
        Self::new(d)
    }
}

impl From<Dimension> for u32 {
    fn from(d: Dimension) -> u32 {
        d.0
    }
}

impl std::fmt::Display for Dimension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Γ(d/2 + 1) for the given dimension.
fn gamma_half_d_plus_one(d: Dimension) -> f64 {
    gamma_half_integer(d.as_f64() / 2.0 + 1.0).expect("positive half-integer")
}

/// Surface prefactor dπ^{d/2}/Γ(d/2+1) of the radial integral.
pub fn solid_angle_prefactor(d: Dimension) -> f64 {
    let x = d.as_f64();
    x * PI.powf(x / 2.0) / gamma_half_d_plus_one(d)
}

/// Volume of the d-ball of radius `r`: π^{d/2} r^d / Γ(d/2+1).
pub fn ball_volume(d: Dimension, r: f64) -> f64 {
    let x = d.as_f64();
    PI.powf(x / 2.0) * r.powi(d.get() as i32) / gamma_half_d_plus_one(d)
}

/// Constant C_d in ∇²(1/r^{d−2}) = −C_d δ⁽ᵈ⁾(r), C_d = d(d−2)π^{d/2}/Γ(d/2+1).
pub fn point_source_constant(d: Dimension) -> Result<f64> {
    if d.get() <= 2 {
        return domain(format!("point-source identity for 1/r^(d-2) needs d >= 3, got d = {d}"));
    }
    Ok((d.as_f64() - 2.0) * solid_angle_prefactor(d))
}

/// Tolerances for [`hyperspherical_integral`].
#[derive(Debug, Clone, Copy)]
pub struct QuadratureOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-10, rel_tol: 1e-12, max_intervals: 4000 }
    }
}

/// ∫ f dτ over the hyper-ball of radius `radius`:
/// prefactor(d) · ∫₀ᴿ f(r) r^{d−1} dr.
pub fn hyperspherical_integral<F>(f: F, radius: f64, d: Dimension) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    hyperspherical_integral_with(f, radius, d, QuadratureOptions::default())
}

pub fn hyperspherical_integral_with<F>(f: F, radius: f64, d: Dimension, opts: QuadratureOptions) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(radius > 0.0) || !radius.is_finite() {
        return domain(format!("integration radius must be positive, got {radius}"));
    }
    let n = d.get() as i32 - 1;
    let radial = integrate(|r| f(r) * r.powi(n), 0.0, radius, opts)?;
    Ok(solid_angle_prefactor(d) * radial)
}

// Gauss–Kronrod 7/15 nodes and weights on [−1, 1].
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_0,
];
const WG: [f64; 4] =
    [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (j, (&x, &w)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let s = f(c - h * x) + f(c + h * x);
        kronrod += w * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Globally adaptive Gauss–Kronrod quadrature on [a, b].
///
/// Nodes never touch the endpoints, so integrable endpoint singularities
/// (e.g. at r = 0) are handled by repeated bisection of the worst interval.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: QuadratureOptions) -> Result<f64> {
    let mut intervals = vec![{
        let (v, e) = gk15(&f, a, b);
        (a, b, v, e)
    }];
    loop {
        let total: f64 = intervals.iter().map(|i| i.2).sum();
        let err: f64 = intervals.iter().map(|i| i.3).sum();
        if err <= opts.abs_tol.max(opts.rel_tol * total.abs()) {
            return Ok(total);
        }
        if !err.is_finite() || intervals.len() >= opts.max_intervals {
            return Err(Error::QuadratureNonConvergence { estimate: err, intervals: intervals.len() });
        }
        let (idx, _) = intervals.iter().enumerate().max_by(|x, y| x.1 .3.total_cmp(&y.1 .3)).expect("non-empty");
        let (lo, hi, _, _) = intervals.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        intervals.push((lo, mid, v1, e1));
        intervals.push((mid, hi, v2, e2));
    }
}

/// Radial part of the d-dimensional Laplacian, ψ'' + (d−1)/r ψ',
/// with both derivatives from Richardson-extrapolated central differences.
pub fn radial_laplacian<F: Fn(f64) -> f64>(psi: F, r: f64, d: Dimension) -> Result<f64> {
    let (d1, d2) = central_derivatives(&psi, r)?;
    Ok(radial_laplacian_from_derivatives(d1, d2, r, d))
}

/// Same operator when ψ' and ψ'' are known analytically.
pub fn radial_laplacian_from_derivatives(d1: f64, d2: f64, r: f64, d: Dimension) -> f64 {
    d2 + (d.as_f64() - 1.0) / r * d1
}

/// Relative step of the coarsest difference level.
const DIFF_STEP: f64 = 1e-2;
const DIFF_LEVELS: usize = 4;

/// (ψ'(r), ψ''(r)) by central differences with steps h, h/2, … and a
/// Richardson table in h².
pub(crate) fn central_derivatives<F: Fn(f64) -> f64>(psi: &F, r: f64) -> Result<(f64, f64)> {
    if !(r > 0.0) || !r.is_finite() {
        return domain(format!("radial derivatives need r > 0, got {r}"));
    }
    let h0 = r * DIFF_STEP;
    if h0 < 1e-150 || h0 / 2f64.powi(DIFF_LEVELS as i32) == 0.0 {
        return Err(Error::InvalidInput(format!("step underflow for differencing at r = {r}")));
    }
    let f0 = psi(r);
    let mut first = [[0.0; DIFF_LEVELS]; DIFF_LEVELS];
    let mut second = [[0.0; DIFF_LEVELS]; DIFF_LEVELS];
    let mut h = h0;
    for i in 0..DIFF_LEVELS {
        let fp = psi(r + h);
        let fm = psi(r - h);
        first[i][0] = (fp - fm) / (2.0 * h);
        second[i][0] = (fp - 2.0 * f0 + fm) / (h * h);
        let mut factor = 1.0;
        for k in 1..=i {
            factor *= 4.0;
            first[i][k] = first[i][k - 1] + (first[i][k - 1] - first[i - 1][k - 1]) / (factor - 1.0);
            second[i][k] = second[i][k - 1] + (second[i][k - 1] - second[i - 1][k - 1]) / (factor - 1.0);
        }
        h /= 2.0;
    }
    let k = DIFF_LEVELS - 1;
    Ok((first[k][k], second[k][k]))
}
