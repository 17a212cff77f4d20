//! Command implementations behind the `sqwell` binary. Each command returns
//! a [`Table`] that renders to CSV or JSON.

pub mod output;

use std::fmt;

use sqwell::bound::{bound_condition_residual, count_bound_states, find_bound_states};
use sqwell::error::Error;
use sqwell::geometry::Dimension;
use sqwell::scattering::{min_depth_3d, scattering_length, tan_delta0_exact, tan_delta0_lowk, tan_delta0_universal};
use sqwell::well::{Units, WellSpec};
use sqwell::zerorange::{pseudopotential, v0_from_area, zero_range_convergence, OperatorKind, WellArea};

pub use output::{format_number, Cell, Format, Table};

/// Settings shared by every command.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub units: Units,
    pub format: Format,
    /// Significant digits of numeric output.
    pub precision: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { units: Units::NATURAL, format: Format::Csv, precision: 12 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Core(Error),
}

impl CliError {
    /// 1 usage, 2 domain, 3 numerical non-convergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Core(Error::InvalidInput(_)) => 1,
            CliError::Core(
                Error::NonConvergence(_) | Error::QuadratureNonConvergence { .. } | Error::MissingBoundState { .. },
            ) => 3,
            CliError::Core(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Usage(msg.into()))
}

fn dimension(d: u32) -> CliResult<Dimension> {
    Dimension::new(d).map_err(|e| CliError::Usage(e.to_string()))
}

fn well(d: u32, v0: f64, b: f64, config: &RunConfig) -> CliResult<WellSpec> {
    let d = dimension(d)?;
    Ok(WellSpec::with_units(d, v0, b, config.units)?)
}

fn record_units(t: &mut Table, config: &RunConfig) {
    t.param("hbar", config.units.hbar).param("mass", config.units.mass);
}

/// Geometric grid of `points` wavenumbers on [k_min, k_max].
pub fn k_grid(k_min: f64, k_max: f64, points: usize) -> CliResult<Vec<f64>> {
    if points == 0 {
        return usage("the k grid needs at least one point");
    }
    if !(k_min > 0.0 && k_max > k_min && k_max.is_finite()) {
        return usage(format!("need 0 < k_min < k_max, got {k_min}, {k_max}"));
    }
    if points == 1 {
        return Ok(vec![k_min]);
    }
    let step = (k_max / k_min).ln() / (points - 1) as f64;
    Ok((0..points).map(|i| k_min * (step * i as f64).exp()).collect())
}

/// Comma-separated list of positive lengths.
pub fn parse_b_list(text: &str) -> CliResult<Vec<f64>> {
    let values = text
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("bad entry {s:?} in b list"))))
        .collect::<CliResult<Vec<f64>>>()?;
    if values.is_empty() || values.iter().any(|b| !(*b > 0.0 && b.is_finite())) {
        return usage("b list entries must be positive");
    }
    Ok(values)
}

fn scattering_metadata(t: &mut Table, w: &WellSpec) -> CliResult<()> {
    let sl = scattering_length(w)?;
    t.meta("eta_b", w.strength())
        .meta("scattering_length", if sl.finite { Cell::Num(sl.a) } else { Cell::Num(f64::INFINITY) })
        .meta("finite", sl.finite)
        .meta("resonance", !sl.finite);
    if let Some(ln_a) = sl.ln_a {
        t.meta("ln_scattering_length", ln_a);
    }
    Ok(())
}

/// tan δ₀ on a geometric k grid: exact, low-k and universal columns.
pub fn cmd_phase_shift(
    d: u32,
    v0: f64,
    b: f64,
    k_min: f64,
    k_max: f64,
    points: usize,
    config: &RunConfig,
) -> CliResult<Table> {
    let ks = k_grid(k_min, k_max, points)?;
    let w = well(d, v0, b, config)?;
    let mut t =
        Table::new("phase-shift", &["k", "tan_delta0_exact", "tan_delta0_lowk", "tan_delta0_universal", "resonance"]);
    t.param("d", d).param("v0", v0).param("b", b);
    t.param("k_min", k_min).param("k_max", k_max).param("points", points);
    record_units(&mut t, config);
    scattering_metadata(&mut t, &w)?;
    let sl = scattering_length(&w)?;
    // values outside a formula's domain (poles, 2D ka ≳ 1) are left empty
    let optional = |r: sqwell::error::Result<sqwell::scattering::PhaseShift>| -> CliResult<Cell> {
        match r {
            Ok(p) => Ok(Cell::Num(p.tan_delta0)),
            Err(Error::ResonancePole { .. } | Error::Domain(_)) => Ok(Cell::Missing),
            Err(e) => Err(e.into()),
        }
    };
    for k in ks {
        let exact = tan_delta0_exact(&w, k);
        let pole = matches!(exact, Err(Error::ResonancePole { .. }));
        t.push(vec![
            Cell::Num(k),
            optional(exact)?,
            optional(tan_delta0_lowk(&w, k))?,
            optional(tan_delta0_universal(&sl, k))?,
            Cell::Bool(pole || !sl.finite),
        ]);
    }
    Ok(t)
}

/// Scattering length with the trigonometric closed forms for d = 1, 3.
pub fn cmd_scattering_length(d: u32, v0: f64, b: f64, config: &RunConfig) -> CliResult<Table> {
    let w = well(d, v0, b, config)?;
    let sl = scattering_length(&w)?;
    let x = w.strength();
    let closed = match d {
        1 => Some(b * (1.0 + 1.0 / (x * x.tan()))),
        3 => Some(b * (1.0 - x.tan() / x)),
        _ => None,
    };
    let mut t = Table::new("scattering-length", &["eta_b", "a", "a_power", "ln_a", "finite", "closed_form"]);
    t.param("d", d).param("v0", v0).param("b", b);
    record_units(&mut t, config);
    let a = if sl.finite { Cell::Num(sl.a) } else { Cell::Num(f64::INFINITY) };
    t.push(vec![
        Cell::Num(x),
        a,
        sl.a_power.filter(|_| sl.finite).into(),
        sl.ln_a.filter(|_| sl.finite).into(),
        Cell::Bool(sl.finite),
        closed.filter(|_| sl.finite).into(),
    ]);
    Ok(t)
}

/// Every bound state, deepest first.
pub fn cmd_bound_states(d: u32, v0: f64, b: f64, config: &RunConfig) -> CliResult<Table> {
    let w = well(d, v0, b, config)?;
    let states = find_bound_states(&w)?;
    let mut t = Table::new("bound-states", &["n", "kappa", "ln_kappa", "energy", "residual", "threshold"]);
    t.param("d", d).param("v0", v0).param("b", b);
    record_units(&mut t, config);
    t.meta("count", states.len());
    if d == 3 {
        t.meta("min_depth", min_depth_3d(b, config.units)?);
    }
    for (n, s) in states.iter().enumerate() {
        t.push(vec![
            Cell::from(n),
            Cell::Num(s.kappa),
            Cell::Num(s.ln_kappa),
            Cell::Num(s.energy),
            Cell::Num(s.residual),
            Cell::Bool(s.threshold),
        ]);
    }
    Ok(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphicalMode {
    /// The same depth for every b.
    FixedV0,
    /// Depth set from a fixed area ṽ₀ at each b.
    FixedArea,
}

/// The matching function against κ for each range, for graphical root finding.
///
/// κ is sampled through ηb on a uniform grid of `points` interior points,
/// which resolves every intersection once `points` exceeds the state count.
pub fn cmd_graphical_exercise(
    d: u32,
    value: f64,
    b_list: &[f64],
    mode: GraphicalMode,
    points: usize,
    config: &RunConfig,
) -> CliResult<Table> {
    if b_list.is_empty() {
        return usage("the b list is empty");
    }
    if points == 0 {
        return usage("the curve needs at least one point");
    }
    let dim = dimension(d)?;
    let mut t = Table::new("graphical", &["b", "v0", "kappa", "eta_b", "residual"]);
    t.param("d", d);
    match mode {
        GraphicalMode::FixedV0 => t.param("mode", "fixed_v0").param("v0", value),
        GraphicalMode::FixedArea => t.param("mode", "fixed_area").param("vtilde", value),
    };
    t.param("points", points);
    record_units(&mut t, config);
    let mut counts = Vec::new();
    for &b in b_list {
        let v0 = match mode {
            GraphicalMode::FixedV0 => value,
            GraphicalMode::FixedArea => v0_from_area(dim, WellArea { v_tilde: value }, b)?,
        };
        let w = WellSpec::with_units(dim, v0, b, config.units)?;
        let strength = w.strength();
        counts.push(count_bound_states(&w)?.to_string());
        for i in 0..points {
            let x = strength * (i as f64 + 0.5) / points as f64;
            let kappa = ((strength - x) * (strength + x)).sqrt() / b;
            t.push(vec![
                Cell::Num(b),
                Cell::Num(v0),
                Cell::Num(kappa),
                Cell::Num(x),
                Cell::Num(bound_condition_residual(&w, kappa)?),
            ]);
        }
    }
    t.meta("zero_counts", counts.join(";"));
    Ok(t)
}

/// Fixed-a convergence toward the contact-potential prediction, with the
/// pseudo-potential descriptor.
pub fn cmd_zero_range(d: u32, a: f64, b_list: &[f64], config: &RunConfig) -> CliResult<Table> {
    let dim = dimension(d)?;
    let sl = sqwell::scattering::ScatteringLength::from_length(dim, a)?;
    let pp = pseudopotential(&sl, config.units)?;
    let report = zero_range_convergence(dim, a, b_list, config.units)?;
    let mut t = Table::new("zero-range", &["b", "v0", "kappa", "error"]);
    t.param("d", d).param("a", a);
    record_units(&mut t, config);
    let operator = match pp.operator {
        OperatorKind::Identity => "identity".to_string(),
        OperatorKind::DerivativePower { order } => format!("derivative_power({order})"),
        OperatorKind::Log2d => "log_2d".to_string(),
    };
    t.meta("coefficient", pp.coefficient)
        .meta("operator", operator)
        .meta("kappa_predicted", report.kappa_predicted)
        .meta("branch_dependent", report.branch_dependent)
        .meta("order", report.order)
        .meta("kappa_extrapolated", report.kappa_extrapolated)
        .meta("extrapolation_error", report.extrapolation_error);
    for row in &report.rows {
        t.push(vec![Cell::Num(row.b), Cell::Num(row.v0), Cell::Num(row.kappa), Cell::Num(row.error)]);
    }
    Ok(t)
}
