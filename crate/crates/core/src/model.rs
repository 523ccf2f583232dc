//! Physical parameterization of the MQ preparation period: coupling
//! constants, the dimensionless inverse temperature, the double-quantum
//! Hamiltonian and the entanglement temperature threshold.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, ONE};
use crate::spinops::{check_spin_count, hilbert_dim};

/// Reduced Planck constant, J·s (exact SI).
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K (exact SI).
pub const K_B: f64 = 1.380_649e-23;
/// Magnetic constant over 4π, T·m/A (CODATA 2018).
pub const MU0_OVER_4PI: f64 = 1.000_000_000_55e-7;

/// Coupling used for the reference τ and β sweeps, 2π·1307 rad/s.
pub const REFERENCE_COUPLING_RAD_S: f64 = 2.0 * PI * 1307.0;

/// β at which sinh β = 1, i.e. ln(1 + √2). Below it the two-spin state
/// never becomes entangled.
pub fn entanglement_onset_beta() -> f64 {
    1.0_f64.asinh()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    /// Angular Larmor frequency, rad/s.
    pub omega0: f64,
    /// Kelvin.
    pub temperature: f64,
    pub hbar: f64,
    pub k_b: f64,
}

impl PhysicalParams {
    /// SI constants with the given field and temperature.
    pub fn new(omega0: f64, temperature: f64) -> Result<Self> {
        Self::with_constants(omega0, temperature, HBAR, K_B)
    }

    pub fn with_constants(omega0: f64, temperature: f64, hbar: f64, k_b: f64) -> Result<Self> {
        let params = PhysicalParams {
            omega0,
            temperature,
            hbar,
            k_b,
        };
        params.validate()?;
        Ok(params)
    }

    /// Larmor frequency given in Hz (ω₀ = 2π·f).
    pub fn from_larmor_hz(freq_hz: f64, temperature: f64) -> Result<Self> {
        Self::new(2.0 * PI * freq_hz, temperature)
    }

    pub fn validate(&self) -> Result<()> {
        positive("omega0", self.omega0)?;
        positive("temperature", self.temperature)?;
        positive("hbar", self.hbar)?;
        positive("k_b", self.k_b)
    }
}

fn positive(field: &'static str, value: f64) -> Result<()> {
    if !(value.is_finite() && value > 0.0) {
        return Err(Error::param(field, format!("must be finite and > 0, got {value}")));
    }
    Ok(())
}

/// Geometry of a dipolar-coupled pair, SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipolarGeometry {
    /// Gyromagnetic ratio, rad·s⁻¹·T⁻¹.
    pub gamma: f64,
    /// Internuclear distance, m.
    pub r12: f64,
    /// Angle between the internuclear vector and the field, rad.
    pub theta12: f64,
}

/// Dipolar coupling constant b = k·γ²ħ(1 − 3cos²θ)/(2r³) in rad/s, where
/// `k` is the unit-system prefactor: [`MU0_OVER_4PI`] for SI geometry, 1 for
/// Gaussian units.
pub fn dipolar_coupling(geom: &DipolarGeometry, hbar: f64, mu0_over_4pi: f64) -> Result<f64> {
    positive("r12", geom.r12)?;
    let angular = 1.0 - 3.0 * geom.theta12.cos().powi(2);
    Ok(mu0_over_4pi * geom.gamma * geom.gamma * hbar * angular / (2.0 * geom.r12.powi(3)))
}

/// Dimensionless inverse temperature β = ħω₀/(k_B T).
pub fn beta_from(params: &PhysicalParams) -> Result<f64> {
    params.validate()?;
    Ok(params.hbar * params.omega0 / (params.k_b * params.temperature))
}

/// Temperature below which entanglement can appear: ħω₀/(k_B ln(1+√2)).
/// The `temperature` field of `params` is ignored.
pub fn critical_temperature(params: &PhysicalParams) -> Result<f64> {
    positive("omega0", params.omega0)?;
    positive("hbar", params.hbar)?;
    positive("k_b", params.k_b)?;
    Ok(params.hbar * params.omega0 / (params.k_b * entanglement_onset_beta()))
}

/// One pairwise coupling b_jk (rad/s), stored with j < k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    pub j: usize,
    pub k: usize,
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinSystem {
    n: usize,
    couplings: Vec<Coupling>,
}

impl SpinSystem {
    /// Validates and normalizes the pair list. Pairs may be given in either
    /// order; a two-spin system takes exactly one coupling.
    pub fn new(n: usize, couplings: impl IntoIterator<Item = (usize, usize, f64)>) -> Result<Self> {
        check_spin_count(n)?;
        let mut out: Vec<Coupling> = Vec::new();
        for (a, c, b) in couplings {
            if a == c {
                return Err(Error::InvalidSystem(format!("self-coupling on site {a}")));
            }
            if a >= n || c >= n {
                return Err(Error::InvalidSystem(format!(
                    "pair ({a}, {c}) out of range for {n} spins"
                )));
            }
            if !b.is_finite() {
                return Err(Error::InvalidSystem(format!("non-finite coupling on ({a}, {c})")));
            }
            let (j, k) = (a.min(c), a.max(c));
            if out.iter().any(|p| p.j == j && p.k == k) {
                return Err(Error::InvalidSystem(format!("duplicate pair ({j}, {k})")));
            }
            out.push(Coupling { j, k, b });
        }
        if n == 2 && out.len() != 1 {
            return Err(Error::InvalidSystem(format!(
                "a spin pair needs exactly one coupling, got {}",
                out.len()
            )));
        }
        Ok(SpinSystem { n, couplings: out })
    }

    pub fn two_spin(b: f64) -> Result<Self> {
        Self::new(2, [(0, 1, b)])
    }

    pub fn n_spins(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        hilbert_dim(self.n)
    }

    pub fn couplings(&self) -> &[Coupling] {
        &self.couplings
    }

    /// The single coupling of a two-spin system.
    pub fn pair_coupling(&self) -> Option<f64> {
        match (self.n, self.couplings.as_slice()) {
            (2, [c]) => Some(c.b),
            _ => None,
        }
    }
}

/// H_MQ = Σ b_jk (I_j⁺I_k⁺ + I_j⁻I_k⁻).
///
/// Built entry by entry: I_j⁺I_k⁺ sends a state with both bits j, k set
/// (both spins down) to the state with both cleared, with unit amplitude.
pub fn build_h_mq(sys: &SpinSystem) -> ComplexMatrix {
    let n = sys.n_spins();
    let mut h = ComplexMatrix::zeros(sys.dim());
    for c in sys.couplings() {
        let mask = (1usize << (n - 1 - c.j)) | (1usize << (n - 1 - c.k));
        let b = ONE.scale(c.b);
        for q in (0..sys.dim()).filter(|q| q & mask == mask) {
            let p = q & !mask;
            h[(p, q)] += b;
            h[(q, p)] += b;
        }
    }
    h
}

/// Transformation whose columns are the eigenvectors of the two-spin H_MQ:
/// |01>, |10>, (|00> + |11>)/√2 and (|00> - |11>)/√2, with eigenvalues
/// 0, 0, b, -b. Hence U†·H_MQ·U = diag(0, 0, b, -b).
pub fn hmq_eigenbasis_two_spin() -> ComplexMatrix {
    let s = FRAC_1_SQRT_2;
    let rows = [
        [0.0, 0.0, s, s],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
        [0.0, 0.0, s, -s],
    ];
    ComplexMatrix::from_fn(4, |i, j| Complex64::new(rows[i][j], 0.0))
}
