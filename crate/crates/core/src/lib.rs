//! Exact simulation of multiple-quantum (MQ) NMR preparation-period
//! dynamics for small clusters of dipolar-coupled spin-1/2 nuclei.
//!
//! The crate evolves the thermal equilibrium state under the averaged
//! double-quantum Hamiltonian, splits the result into coherence orders,
//! and measures pair entanglement with the Wootters concurrence and an
//! entanglement witness built from the double-quantum intensities. For a
//! spin pair every numeric quantity has a closed-form counterpart that is
//! exposed alongside it.
//!
//! ```
//! use mqnmr::{Simulation, REFERENCE_COUPLING_RAD_S};
//!
//! let b = REFERENCE_COUPLING_RAD_S;
//! let sim = Simulation::two_spin(3.0, b).unwrap();
//! let tau = std::f64::consts::PI / (4.0 * b);
//! let snap = sim.snapshot(tau).unwrap();
//! let report = snap.entanglement.unwrap();
//! assert!(report.entangled);
//! assert!(report.witness.unwrap() < 0.0);
//! ```

pub mod coherence;
pub mod entangle;
pub mod error;
pub mod evolve;
pub mod matrix;
pub mod model;
pub mod simulation;
pub mod spinops;
pub mod sweep;

pub use coherence::{analytic_intensities, decompose_by_order, intensity, CoherenceComponents, CoherenceProfile};
pub use entangle::{
    analytic_concurrence, analytic_lambdas, concurrence, concurrence_from_coherences, entanglement_witness,
    partial_trace, spin_flip, witness_threshold, EntanglementReport,
};
pub use error::{Error, Result};
pub use evolve::{
    analytic_rho_two_spin, evolve, hermitian_eigendecompose, ht_reference, thermal_state, DensityMatrix,
    SpectralDecomposition,
};
pub use matrix::{ComplexMatrix, DEFAULT_TOLERANCE};
pub use model::{
    beta_from, build_h_mq, critical_temperature, dipolar_coupling, entanglement_onset_beta, hmq_eigenbasis_two_spin,
    DipolarGeometry, PhysicalParams, SpinSystem, HBAR, K_B, MU0_OVER_4PI, REFERENCE_COUPLING_RAD_S,
};
pub use num_complex::Complex64;
pub use simulation::{Simulation, Snapshot};
pub use spinops::{pauli, raising_lowering, site_operator, total_iz, Axis, BasisLabel, Ladder};
