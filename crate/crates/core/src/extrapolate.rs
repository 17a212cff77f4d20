//! Fits and limit extrapolation used by the convergence studies.

use crate::error::{Error, Result};

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InvalidInput("slope fit needs at least two paired points".into()));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidInput("slope fit needs distinct abscissae".into()));
    }
    Ok(sxy / sxx)
}

/// Slope of log|y| against log x.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.abs().ln()).collect();
    if lx.iter().chain(&ly).any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("log-log fit needs nonzero finite data".into()));
    }
    fit_slope(&lx, &ly)
}

/// Result of a Richardson extrapolation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extrapolated {
    pub value: f64,
    pub error: f64,
}

/// Richardson extrapolation of samples `values[n] = T(h₀qⁿ)` toward h → 0,
/// where T(h) = L + Σ c_k h^{p_k} (a repeated exponent removes an extra
/// power of ln h). Returns the diagonal entry whose change from its
/// predecessor is smallest, with that change as the error estimate.
pub fn richardson(values: &[f64], ratio: f64, exponents: &[f64]) -> Result<Extrapolated> {
    if values.len() < 2 || !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::InvalidInput("richardson needs ≥ 2 samples and 0 < ratio < 1".into()));
    }
    let mut col: Vec<f64> = values.to_vec();
    let mut best = Extrapolated { value: *col.last().unwrap(), error: f64::INFINITY };
    let mut prev_tail = *col.last().unwrap();
    for &p in exponents.iter().take(values.len() - 1) {
        let f = ratio.powf(p);
        col = col.windows(2).map(|w| (w[1] - f * w[0]) / (1.0 - f)).collect();
        let tail = *col.last().unwrap();
        let change = (tail - prev_tail).abs();
        if change <= best.error {
            best = Extrapolated { value: tail, error: change };
        }
        prev_tail = tail;
    }
    Ok(best)
}

/// Limit L and order p of y = L + C·x^p through three points, with p
/// solved from the ratio of successive differences. `None` when the data
/// are not monotone or no order in (0.01, 20) fits.
pub fn three_point_limit(xs: [f64; 3], ys: [f64; 3]) -> Option<(f64, f64)> {
    let (d1, d2) = (ys[1] - ys[0], ys[2] - ys[1]);
    if d1 == 0.0 || d2 == 0.0 || d1.signum() != d2.signum() {
        return None;
    }
    let target = (d1 / d2).ln();
    let mismatch = |p: f64| {
        let [x0, x1, x2] = xs.map(|x| x.powf(p));
        Ok(((x1 - x0) / (x2 - x1)).ln() - target)
    };
    let p = crate::roots::bisect(mismatch, 0.01, 20.0, 1e-14).ok()?;
    let [_, x1, x2] = xs.map(|x| x.powf(p));
    let c = d2 / (x2 - x1);
    Some((ys[2] - c * x2, p))
}
