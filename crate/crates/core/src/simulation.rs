//! Preparation-period simulation of one spin system at fixed β.
//!
//! The Hamiltonian is diagonalized once; every query at a new τ reuses the
//! decomposition. A `Simulation` is immutable and can be shared across
//! threads for parallel sweeps.

use num_complex::Complex64;

use crate::coherence::{profile, CoherenceProfile};
use crate::entangle::{concurrence, partial_trace, EntanglementReport};
use crate::error::{Error, Result};
use crate::evolve::{hermitian_eigendecompose_with_tol, thermal_state, DensityMatrix, SpectralDecomposition};
use crate::matrix::{ComplexMatrix, DEFAULT_TOLERANCE};
use crate::model::{build_h_mq, SpinSystem};

#[derive(Debug, Clone)]
pub struct Simulation {
    system: SpinSystem,
    beta: f64,
    hamiltonian: ComplexMatrix,
    spectrum: SpectralDecomposition,
    rho0: DensityMatrix,
    tolerance: f64,
}

/// Coherence profile and (for spin pairs) entanglement at one τ.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub profile: CoherenceProfile,
    pub entanglement: Option<EntanglementReport>,
}

impl Simulation {
    pub fn new(system: SpinSystem, beta: f64) -> Result<Self> {
        Self::with_tolerance(system, beta, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(system: SpinSystem, beta: f64, tolerance: f64) -> Result<Self> {
        if !(tolerance.is_finite() && tolerance > 0.0) {
            return Err(Error::param("tolerance", format!("must be > 0, got {tolerance}")));
        }
        let rho0 = thermal_state(beta, system.n_spins())?;
        let hamiltonian = build_h_mq(&system);
        let spectrum = hermitian_eigendecompose_with_tol(&hamiltonian, tolerance)?;
        Ok(Simulation {
            system,
            beta,
            hamiltonian,
            spectrum,
            rho0,
            tolerance,
        })
    }

    pub fn two_spin(beta: f64, b: f64) -> Result<Self> {
        Self::new(SpinSystem::two_spin(b)?, beta)
    }

    pub fn system(&self) -> &SpinSystem {
        &self.system
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.hamiltonian
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    pub fn initial_state(&self) -> &DensityMatrix {
        &self.rho0
    }

    /// ρ(τ), with a trace-preservation residue check.
    pub fn state_at(&self, tau: f64) -> Result<DensityMatrix> {
        check_time(tau)?;
        let rho = self.spectrum.evolve(&self.rho0, tau)?;
        let drift = (rho.matrix().trace() - Complex64::new(1.0, 0.0)).norm();
        if drift > self.tolerance {
            return Err(Error::NumericResidue {
                context: "evolution",
                detail: format!("trace drifted by {drift:e}"),
            });
        }
        Ok(rho)
    }

    pub fn ht_reference_at(&self, tau: f64) -> Result<ComplexMatrix> {
        check_time(tau)?;
        self.spectrum.ht_reference(tau)
    }

    pub fn profile_at(&self, tau: f64) -> Result<CoherenceProfile> {
        let rho = self.state_at(tau)?;
        profile(&rho, &self.ht_reference_at(tau)?, self.beta, tau)
    }

    /// Concurrence of the pair `sites` at τ. For a two-spin system the
    /// witness is filled in as well.
    pub fn entanglement_at(&self, tau: f64, sites: (usize, usize)) -> Result<EntanglementReport> {
        Ok(self.snapshot_pair(tau, sites)?.1)
    }

    pub fn snapshot(&self, tau: f64) -> Result<Snapshot> {
        if self.system.n_spins() == 2 {
            let (profile, report) = self.snapshot_pair(tau, (0, 1))?;
            Ok(Snapshot {
                profile,
                entanglement: Some(report),
            })
        } else {
            Ok(Snapshot {
                profile: self.profile_at(tau)?,
                entanglement: None,
            })
        }
    }

    fn snapshot_pair(&self, tau: f64, sites: (usize, usize)) -> Result<(CoherenceProfile, EntanglementReport)> {
        let rho = self.state_at(tau)?;
        let ht = self.ht_reference_at(tau)?;
        let profile = profile(&rho, &ht, self.beta, tau)?;
        let n = self.system.n_spins();
        let pair = partial_trace(&rho, sites, n)?;
        let mut report = concurrence(&pair)?;
        if n == 2 && self.beta > 0.0 {
            report = report.with_witness(self.beta, profile.g2_plus_gm2())?;
        }
        Ok((profile, report))
    }
}

fn check_time(tau: f64) -> Result<()> {
    if !tau.is_finite() {
        return Err(Error::param("tau", format!("must be finite, got {tau}")));
    }
    Ok(())
}
