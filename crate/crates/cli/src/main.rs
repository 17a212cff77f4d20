use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use sqwell::well::Units;
use sqwell_cli::{
    cmd_bound_states, cmd_graphical_exercise, cmd_phase_shift, cmd_scattering_length, cmd_zero_range, parse_b_list,
    CliError, CliResult, Format, GraphicalMode, RunConfig, Table,
};

/// s-wave scattering, bound states and zero-range limits of the
/// d-dimensional finite square well.
#[derive(Parser, Debug)]
#[command(name = "sqwell", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Unit convention: natural sets ℏ = M = 1.
    #[arg(long, value_enum, default_value_t = UnitsArg::Natural, global = true)]
    units: UnitsArg,
    /// ℏ for --units explicit.
    #[arg(long, global = true)]
    hbar: Option<f64>,
    /// Particle mass M for --units explicit.
    #[arg(long, global = true)]
    mass: Option<f64>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv, global = true)]
    format: FormatArg,
    /// Significant digits in numeric output.
    #[arg(long, default_value_t = 12, global = true)]
    precision: usize,
    /// Output file (default stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum UnitsArg {
    Natural,
    Explicit,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum ModeArg {
    #[value(name = "fixed_v0")]
    FixedV0,
    #[value(name = "fixed_area")]
    FixedArea,
}

#[derive(Args, Debug)]
struct WellArgs {
    /// Spatial dimension, 1 to 9.
    #[arg(long = "d")]
    d: u32,
    /// Well depth V₀ > 0.
    #[arg(long)]
    v0: f64,
    /// Well range b > 0.
    #[arg(long = "b")]
    b: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// tan δ₀ on a geometric k grid.
    PhaseShift {
        #[command(flatten)]
        well: WellArgs,
        #[arg(long)]
        k_min: f64,
        #[arg(long)]
        k_max: f64,
        #[arg(long, default_value_t = 50)]
        points: usize,
    },
    /// Scattering length and resonance flag.
    ScatteringLength {
        #[command(flatten)]
        well: WellArgs,
    },
    /// All bound states of the well.
    BoundStates {
        #[command(flatten)]
        well: WellArgs,
    },
    /// Matching-function curves for graphical solution.
    Graphical {
        #[arg(long = "d")]
        d: u32,
        #[arg(long, value_enum)]
        mode: ModeArg,
        /// Depth for fixed_v0 mode.
        #[arg(long)]
        v0: Option<f64>,
        /// Area ṽ₀ < 0 for fixed_area mode.
        #[arg(long, allow_hyphen_values = true)]
        vtilde: Option<f64>,
        /// Comma-separated ranges.
        #[arg(long)]
        b_list: String,
        #[arg(long, default_value_t = 200)]
        points: usize,
    },
    /// Fixed-a convergence toward the contact potential.
    ZeroRange {
        #[arg(long = "d")]
        d: u32,
        #[arg(long)]
        a: f64,
        #[arg(long, default_value = "0.2,0.1,0.05,0.02,0.01")]
        b_list: String,
    },
}

fn config(common: &Common) -> CliResult<RunConfig> {
    let units = match common.units {
        UnitsArg::Natural => {
            if common.hbar.is_some() || common.mass.is_some() {
                return Err(CliError::Usage("--hbar/--mass need --units explicit".into()));
            }
            Units::NATURAL
        }
        UnitsArg::Explicit => match (common.hbar, common.mass) {
            (Some(h), Some(m)) => Units::new(h, m).map_err(|e| CliError::Usage(e.to_string()))?,
            _ => return Err(CliError::Usage("--units explicit needs --hbar and --mass".into())),
        },
    };
    let format = match common.format {
        FormatArg::Csv => Format::Csv,
        FormatArg::Json => Format::Json,
    };
    if !(1..=17).contains(&common.precision) {
        return Err(CliError::Usage("--precision must lie in 1..=17".into()));
    }
    Ok(RunConfig { units, format, precision: common.precision })
}

fn run(cli: &Cli) -> CliResult<Table> {
    let cfg = config(&cli.common)?;
    match &cli.command {
        Command::PhaseShift { well, k_min, k_max, points } => {
            cmd_phase_shift(well.d, well.v0, well.b, *k_min, *k_max, *points, &cfg)
        }
        Command::ScatteringLength { well } => cmd_scattering_length(well.d, well.v0, well.b, &cfg),
        Command::BoundStates { well } => cmd_bound_states(well.d, well.v0, well.b, &cfg),
        Command::Graphical { d, mode, v0, vtilde, b_list, points } => {
            let (mode, value) = match (mode, v0, vtilde) {
                (ModeArg::FixedV0, Some(v), None) => (GraphicalMode::FixedV0, *v),
                (ModeArg::FixedArea, None, Some(v)) => (GraphicalMode::FixedArea, *v),
                (ModeArg::FixedV0, ..) => return Err(CliError::Usage("fixed_v0 mode takes --v0 only".into())),
                (ModeArg::FixedArea, ..) => return Err(CliError::Usage("fixed_area mode takes --vtilde only".into())),
            };
            cmd_graphical_exercise(*d, value, &parse_b_list(b_list)?, mode, *points, &cfg)
        }
        Command::ZeroRange { d, a, b_list } => cmd_zero_range(*d, *a, &parse_b_list(b_list)?, &cfg),
    }
}

fn emit(cli: &Cli, text: &str) -> std::io::Result<()> {
    match &cli.common.out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let table = match run(&cli) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("sqwell: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let cfg = config(&cli.common).expect("validated above");
    if let Err(e) = emit(&cli, &table.render(cfg.format, cfg.precision)) {
        eprintln!("sqwell: cannot write output: {e}");
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
