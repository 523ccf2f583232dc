use std::f64::consts::PI;
use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use mqnmr::sweep::{self, Mode, SweepConfig, Temperature, DEFAULT_STEPS, DEFAULT_TAU_MAX_S};
use mqnmr::{Error, DEFAULT_TOLERANCE, REFERENCE_COUPLING_RAD_S};

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERIC: u8 = 3;

/// Environment variable overriding the matrix comparison tolerance.
const TOLERANCE_ENV: &str = "MQNMR_TOLERANCE";

#[derive(Debug, Clone, Copy, ValueEnum)]
enum CliMode {
    SweepTau,
    SweepBeta,
    Single,
}

/// Multiple-quantum NMR coherence and entanglement sweeps for a dipolar spin pair.
#[derive(Debug, Parser)]
#[command(name = "mqnmr", version)]
struct Args {
    #[arg(long, value_enum, default_value = "sweep-tau")]
    mode: CliMode,

    /// Dimensionless inverse temperature ħω₀/(k_B T).
    #[arg(long, conflicts_with_all = ["omega0_hz", "temperature_k"])]
    beta: Option<f64>,

    /// Larmor frequency in Hz (ω₀ = 2π·value).
    #[arg(long, requires = "temperature_k")]
    omega0_hz: Option<f64>,

    /// Spin temperature in kelvin.
    #[arg(long, requires = "omega0_hz")]
    temperature_k: Option<f64>,

    /// Pair coupling b in rad/s [default: 2π·1307].
    #[arg(long, conflicts_with = "coupling_hz")]
    coupling_rad_s: Option<f64>,

    /// Pair coupling b in Hz (converted by 2π).
    #[arg(long)]
    coupling_hz: Option<f64>,

    /// End of the τ grid in seconds; the evaluation time in single mode.
    #[arg(long, default_value_t = DEFAULT_TAU_MAX_S)]
    tau_max_s: f64,

    #[arg(long)]
    beta_min: Option<f64>,

    #[arg(long)]
    beta_max: Option<f64>,

    #[arg(long, default_value_t = DEFAULT_STEPS)]
    steps: usize,

    /// Output CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn config_from(args: Args) -> Result<SweepConfig, Error> {
    let tolerance = match std::env::var(TOLERANCE_ENV) {
        Ok(raw) => raw.trim().parse::<f64>().map_err(|e| Error::InvalidParameter {
            field: "MQNMR_TOLERANCE",
            reason: format!("{raw:?}: {e}"),
        })?,
        Err(_) => DEFAULT_TOLERANCE,
    };
    let temperature = match (args.beta, args.omega0_hz, args.temperature_k) {
        (Some(beta), _, _) => Some(Temperature::Beta(beta)),
        (None, Some(f), Some(kelvin)) => Some(Temperature::Physical {
            omega0: 2.0 * PI * f,
            kelvin,
        }),
        _ => None,
    };
    let coupling = match (args.coupling_rad_s, args.coupling_hz) {
        (Some(b), _) => b,
        (None, Some(hz)) => 2.0 * PI * hz,
        (None, None) => REFERENCE_COUPLING_RAD_S,
    };
    let mode = match args.mode {
        CliMode::SweepTau => Mode::SweepTau,
        CliMode::SweepBeta => Mode::SweepBeta,
        CliMode::Single => Mode::Single,
    };
    let cfg = SweepConfig {
        mode,
        temperature,
        coupling,
        tau_max: args.tau_max_s,
        beta_min: args.beta_min,
        beta_max: args.beta_max,
        steps: args.steps,
        out: args.out,
        tolerance,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn execute(cfg: &SweepConfig) -> Result<(), Error> {
    let rows = sweep::run(cfg)?;
    match &cfg.out {
        Some(path) => sweep::emit_csv(&rows, path),
        None => sweep::write_csv(&rows, io::stdout().lock()),
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = config_from(args).and_then(|cfg| execute(&cfg));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("mqnmr: {err}");
            ExitCode::from(if err.is_numeric() { EXIT_NUMERIC } else { EXIT_CONFIG })
        }
    }
}
