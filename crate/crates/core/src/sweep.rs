//! Parameter sweeps over τ and β with CSV output.

use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::entangle::{analytic_concurrence, witness_threshold};
use crate::error::{Error, Result};
use crate::matrix::DEFAULT_TOLERANCE;
use crate::model::{beta_from, PhysicalParams, SpinSystem, REFERENCE_COUPLING_RAD_S};
use crate::simulation::Simulation;

/// Grid size used when none is given.
pub const DEFAULT_STEPS: usize = 401;
/// Preparation-time span used when none is given, seconds.
pub const DEFAULT_TAU_MAX_S: f64 = 2e-3;
/// Largest allowed gap between numeric and closed-form concurrence in a row.
pub const ROW_AGREEMENT_TOLERANCE: f64 = 1e-8;

pub const TAU_HEADER: &str = "tau,G0,G2,Gm2,G2_plus_Gm2,concurrence_numeric,concurrence_analytic,witness";
pub const BETA_HEADER: &str = "beta,G0,G2,Gm2,G2_plus_Gm2,concurrence_numeric,concurrence_analytic,witness,threshold";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    SweepTau,
    SweepBeta,
    Single,
}

/// How the spin temperature is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Temperature {
    Beta(f64),
    /// Larmor frequency (rad/s) and temperature (K).
    Physical {
        omega0: f64,
        kelvin: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub mode: Mode,
    pub temperature: Option<Temperature>,
    /// Pair coupling b, rad/s.
    pub coupling: f64,
    pub tau_max: f64,
    pub beta_min: Option<f64>,
    pub beta_max: Option<f64>,
    pub steps: usize,
    pub out: Option<PathBuf>,
    pub tolerance: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            mode: Mode::SweepTau,
            temperature: None,
            coupling: REFERENCE_COUPLING_RAD_S,
            tau_max: DEFAULT_TAU_MAX_S,
            beta_min: None,
            beta_max: None,
            steps: DEFAULT_STEPS,
            out: None,
            tolerance: DEFAULT_TOLERANCE,
        }
    }
}

impl SweepConfig {
    pub fn sweep_tau(beta: f64, coupling: f64, tau_max: f64, steps: usize) -> Self {
        SweepConfig {
            mode: Mode::SweepTau,
            temperature: Some(Temperature::Beta(beta)),
            coupling,
            tau_max,
            steps,
            ..Default::default()
        }
    }

    pub fn sweep_beta(beta_min: f64, beta_max: f64, coupling: f64, steps: usize) -> Self {
        SweepConfig {
            mode: Mode::SweepBeta,
            coupling,
            beta_min: Some(beta_min),
            beta_max: Some(beta_max),
            steps,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::param(
                "tolerance",
                format!("must be > 0, got {}", self.tolerance),
            ));
        }
        if !self.coupling.is_finite() {
            return Err(Error::param("coupling", "must be finite"));
        }
        match self.mode {
            Mode::SweepTau | Mode::Single => {
                if self.temperature.is_none() {
                    return Err(Error::param("beta", "supply either beta or omega0 and temperature"));
                }
                if self.beta_min.is_some() || self.beta_max.is_some() {
                    return Err(Error::param("beta_min", "only valid in sweep-beta mode"));
                }
                if !(self.tau_max.is_finite() && self.tau_max > 0.0) {
                    return Err(Error::param("tau_max", format!("must be > 0, got {}", self.tau_max)));
                }
                if self.mode == Mode::SweepTau && self.steps < 2 {
                    return Err(Error::param("steps", format!("need at least 2, got {}", self.steps)));
                }
                self.beta().map(|_| ())
            }
            Mode::SweepBeta => {
                if self.temperature.is_some() {
                    return Err(Error::param("beta", "sweep-beta takes beta_min/beta_max instead"));
                }
                let (lo, hi) = self.beta_range()?;
                if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi > lo) {
                    return Err(Error::param(
                        "beta_min",
                        format!("need 0 < beta_min < beta_max, got [{lo}, {hi}]"),
                    ));
                }
                if self.coupling == 0.0 {
                    return Err(Error::param("coupling", "must be nonzero for a beta sweep"));
                }
                if self.steps < 2 {
                    return Err(Error::param("steps", format!("need at least 2, got {}", self.steps)));
                }
                Ok(())
            }
        }
    }

    /// The dimensionless β of a τ sweep or single evaluation.
    pub fn beta(&self) -> Result<f64> {
        match self.temperature {
            Some(Temperature::Beta(beta)) if beta.is_finite() && beta > 0.0 => Ok(beta),
            Some(Temperature::Beta(beta)) => Err(Error::param("beta", format!("must be > 0, got {beta}"))),
            Some(Temperature::Physical { omega0, kelvin }) => beta_from(&PhysicalParams::new(omega0, kelvin)?),
            None => Err(Error::param("beta", "missing")),
        }
    }

    fn beta_range(&self) -> Result<(f64, f64)> {
        match (self.beta_min, self.beta_max) {
            (Some(lo), Some(hi)) => Ok((lo, hi)),
            (None, _) => Err(Error::param("beta_min", "required for sweep-beta")),
            (_, None) => Err(Error::param("beta_max", "required for sweep-beta")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowKind {
    Tau,
    Beta,
}

/// One line of sweep output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub kind: RowKind,
    /// τ in seconds for τ sweeps, β for β sweeps.
    pub x: f64,
    pub g0: f64,
    pub g2: f64,
    pub gm2: f64,
    pub g2_plus_gm2: f64,
    pub concurrence_numeric: f64,
    pub concurrence_analytic: f64,
    pub witness: f64,
    /// Witness threshold 1/(2 sinh β cosh²(β/2)); β sweeps only.
    pub threshold: Option<f64>,
}

impl SweepRow {
    fn values(&self) -> Vec<f64> {
        let mut v = vec![
            self.x,
            self.g0,
            self.g2,
            self.gm2,
            self.g2_plus_gm2,
            self.concurrence_numeric,
            self.concurrence_analytic,
            self.witness,
        ];
        v.extend(self.threshold);
        v
    }
}

fn grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    let last = (steps - 1) as f64;
    (0..steps).map(|i| lo + (hi - lo) * i as f64 / last).collect()
}

fn evaluate(sim: &Simulation, kind: RowKind, x: f64, tau: f64) -> Result<SweepRow> {
    let snap = sim.snapshot(tau)?;
    let report = snap.entanglement.expect("pair simulation reports entanglement");
    let p = &snap.profile;
    let b = sim.system().pair_coupling().expect("pair system");
    let analytic = analytic_concurrence(sim.beta(), b, tau);
    let gap = (report.concurrence - analytic).abs();
    if gap > ROW_AGREEMENT_TOLERANCE {
        return Err(Error::NumericResidue {
            context: "sweep row",
            detail: format!("numeric and closed-form concurrence differ by {gap:e} at {x}"),
        });
    }
    Ok(SweepRow {
        kind,
        x,
        g0: p.g(0),
        g2: p.g(2),
        gm2: p.g(-2),
        g2_plus_gm2: p.g2_plus_gm2(),
        concurrence_numeric: report.concurrence,
        concurrence_analytic: analytic,
        witness: report.witness.expect("β > 0 gives a witness"),
        threshold: match kind {
            RowKind::Beta => Some(witness_threshold(sim.beta())?),
            RowKind::Tau => None,
        },
    })
}

fn pair_simulation(cfg: &SweepConfig, beta: f64) -> Result<Simulation> {
    Simulation::with_tolerance(SpinSystem::two_spin(cfg.coupling)?, beta, cfg.tolerance)
}

/// Rows at τ_i = i·tau_max/(steps − 1), computed in parallel and returned
/// in grid order.
pub fn run_sweep_tau(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    if cfg.mode != Mode::SweepTau {
        return Err(Error::param("mode", "expected sweep-tau"));
    }
    cfg.validate()?;
    let sim = pair_simulation(cfg, cfg.beta()?)?;
    grid(0.0, cfg.tau_max, cfg.steps)
        .into_par_iter()
        .map(|tau| evaluate(&sim, RowKind::Tau, tau, tau))
        .collect()
}

/// One row per β on the grid, evaluated at the first concurrence maximum
/// 2bτ = π/2, where G₂ + G₋₂ also peaks at tanh(β/2).
pub fn run_sweep_beta(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    if cfg.mode != Mode::SweepBeta {
        return Err(Error::param("mode", "expected sweep-beta"));
    }
    cfg.validate()?;
    let (lo, hi) = cfg.beta_range()?;
    let tau_peak = PI / (4.0 * cfg.coupling.abs());
    grid(lo, hi, cfg.steps)
        .into_par_iter()
        .map(|beta| evaluate(&pair_simulation(cfg, beta)?, RowKind::Beta, beta, tau_peak))
        .collect()
}

/// A single row at τ = tau_max.
pub fn run_single(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    if cfg.mode != Mode::Single {
        return Err(Error::param("mode", "expected single"));
    }
    cfg.validate()?;
    let sim = pair_simulation(cfg, cfg.beta()?)?;
    Ok(vec![evaluate(&sim, RowKind::Tau, cfg.tau_max, cfg.tau_max)?])
}

pub fn run(cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    match cfg.mode {
        Mode::SweepTau => run_sweep_tau(cfg),
        Mode::SweepBeta => run_sweep_beta(cfg),
        Mode::Single => run_single(cfg),
    }
}

/// Formats `x` with `digits` significant digits, following C's `%.*g`.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string().to_lowercase();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Writes header and rows as CSV with 12 significant digits, LF line ends.
pub fn write_csv<W: Write>(rows: &[SweepRow], mut w: W) -> Result<()> {
    let kind = match rows.first() {
        Some(r) => r.kind,
        None => return Err(Error::param("rows", "nothing to write")),
    };
    if rows.iter().any(|r| r.kind != kind) {
        return Err(Error::param("rows", "mixed τ and β rows"));
    }
    let header = match kind {
        RowKind::Tau => TAU_HEADER,
        RowKind::Beta => BETA_HEADER,
    };
    let io = |source| Error::Io {
        path: PathBuf::from("<stream>"),
        source,
    };
    writeln!(w, "{header}").map_err(io)?;
    for row in rows {
        let line: Vec<String> = row.values().into_iter().map(|v| format_significant(v, 12)).collect();
        writeln!(w, "{}", line.join(",")).map_err(io)?;
    }
    w.flush().map_err(io)
}

pub fn emit_csv(rows: &[SweepRow], path: &Path) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::param("rows", "nothing to write"));
    }
    let with_path = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(with_path)?;
    write_csv(rows, BufWriter::new(file)).map_err(|e| match e {
        Error::Io { source, .. } => with_path(source),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::entanglement_onset_beta;

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_significant(0.0, 12), "0");
        assert_eq!(format_significant(-0.0, 12), "0");
        assert_eq!(format_significant(1.0, 12), "1");
        assert_eq!(format_significant(0.814_794_934_183_042_3, 12), "0.814794934183");
        assert_eq!(format_significant(-0.896_129_043_471_398_5, 12), "-0.896129043471");
        assert_eq!(format_significant(2e-3, 12), "0.002");
        assert_eq!(format_significant(1.234_567_890_123_4e-5, 12), "1.23456789012e-05");
        assert_eq!(format_significant(8212.12345678901, 12), "8212.12345679");
        assert_eq!(format_significant(1e15, 12), "1e+15");
        assert_eq!(format_significant(123_456_789_012.0, 12), "123456789012");
    }

    #[test]
    fn two_step_sweep_starts_separable() {
        let rows = run_sweep_tau(&SweepConfig::sweep_tau(3.0, REFERENCE_COUPLING_RAD_S, 1e-3, 2)).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].x, 0.0);
        assert!(rows[0].g2_plus_gm2.abs() < 1e-15);
        assert!(rows[0].witness > 0.0);
        assert_eq!(rows[1].x, 1e-3);
    }

    #[test]
    fn sweep_below_onset_never_entangles() {
        let rows = run_sweep_tau(&SweepConfig::sweep_tau(0.8, REFERENCE_COUPLING_RAD_S, 2e-3, 401)).unwrap();
        assert!(rows
            .iter()
            .all(|r| r.concurrence_analytic == 0.0 && r.concurrence_numeric < 1e-10));
        assert!(rows.iter().all(|r| r.witness > 0.0));
    }

    #[test]
    fn beta_sweep_boundary_and_reference_point() {
        let onset = entanglement_onset_beta();
        let rows = run_sweep_beta(&SweepConfig::sweep_beta(onset, 3.0, REFERENCE_COUPLING_RAD_S, 2)).unwrap();
        assert!(rows[0].concurrence_analytic < 1e-15);
        assert!(rows[0].concurrence_numeric < 1e-10);
        assert!((rows[1].concurrence_analytic - 0.814_794_934_183_042).abs() < 1e-12);
        assert!((rows[1].threshold.unwrap() - 0.009_019_210_173_468).abs() < 1e-12);
        assert!((rows[1].g2_plus_gm2 - 1.5_f64.tanh()).abs() < 1e-10);
    }

    #[test]
    fn physical_temperature_is_converted() {
        let cfg = SweepConfig {
            mode: Mode::Single,
            temperature: Some(Temperature::Physical {
                omega0: 2.0 * PI * 500e6,
                kelvin: 0.008,
            }),
            ..Default::default()
        };
        assert!((cfg.beta().unwrap() - 2.999_526_919_016).abs() < 1e-9);
        assert_eq!(run_single(&cfg).unwrap().len(), 1);
    }

    #[test]
    fn invalid_configs_name_the_field() {
        let field = |cfg: SweepConfig| match cfg.validate() {
            Err(Error::InvalidParameter { field, .. }) => field,
            other => panic!("expected parameter error, got {other:?}"),
        };
        let base = SweepConfig::sweep_tau(3.0, 1.0, 1e-3, 10);
        assert_eq!(
            field(SweepConfig {
                steps: 1,
                ..base.clone()
            }),
            "steps"
        );
        assert_eq!(
            field(SweepConfig {
                tau_max: 0.0,
                ..base.clone()
            }),
            "tau_max"
        );
        assert_eq!(
            field(SweepConfig {
                temperature: None,
                ..base.clone()
            }),
            "beta"
        );
        assert_eq!(
            field(SweepConfig {
                temperature: Some(Temperature::Beta(-1.0)),
                ..base.clone()
            }),
            "beta"
        );
        assert_eq!(
            field(SweepConfig {
                temperature: Some(Temperature::Physical {
                    omega0: 1.0,
                    kelvin: 0.0
                }),
                ..base.clone()
            }),
            "temperature"
        );
        assert_eq!(field(SweepConfig::sweep_beta(2.0, 1.0, 1.0, 10)), "beta_min");
        assert_eq!(
            field(SweepConfig {
                beta_max: None,
                ..SweepConfig::sweep_beta(1.0, 2.0, 1.0, 10)
            }),
            "beta_max"
        );
        assert_eq!(field(SweepConfig::sweep_beta(1.0, 2.0, 0.0, 10)), "coupling");
        assert!(run_sweep_beta(&base).is_err());
    }

    #[test]
    fn csv_layout() {
        let rows = run_sweep_tau(&SweepConfig::sweep_tau(3.0, REFERENCE_COUPLING_RAD_S, 1e-3, 3)).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.ends_with('\n') && !text.contains('\r'));
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], TAU_HEADER);
        assert!(lines[1..].iter().all(|l| l.split(',').count() == 8));
        assert!(write_csv(&[], Vec::new()).is_err());
    }

    #[test]
    fn unwritable_path_is_an_io_error() {
        let rows = run_single(&SweepConfig {
            mode: Mode::Single,
            temperature: Some(Temperature::Beta(1.0)),
            ..Default::default()
        })
        .unwrap();
        let err = emit_csv(&rows, Path::new("/nonexistent-dir/out.csv")).unwrap_err();
        assert!(matches!(err, Error::Io { .. }));
    }
}
