//! C ABI for the `mqnmr` engine.
//!
//! Every fallible function returns an [`MqnmrStatus`] and writes its result
//! through an out-pointer. Simulations are owned by C through the opaque
//! [`MqnmrSimulation`] handle and must be released with
//! [`mqnmr_simulation_free`]. The message of the last failure on the calling
//! thread is available from [`mqnmr_last_error`].
//!
//! Matrices cross the boundary as row-major arrays of interleaved
//! `(re, im)` pairs, so a `dim x dim` matrix occupies `2 * dim * dim`
//! doubles.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mqnmr::{Complex64, ComplexMatrix, DensityMatrix, DipolarGeometry, EntanglementReport, Error, PhysicalParams};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MqnmrStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    Numeric = 4,
    Panic = 5,
}

/// One pairwise coupling b_jk in rad/s.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct MqnmrCoupling {
    pub j: usize,
    pub k: usize,
    pub b: f64,
}

/// Pair entanglement at one evolution time.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct MqnmrEntanglement {
    /// Descending.
    pub lambdas: [f64; 4],
    pub concurrence: f64,
    /// Meaningful only when `has_witness` is set.
    pub witness: f64,
    pub has_witness: bool,
    pub entangled: bool,
}

impl From<EntanglementReport> for MqnmrEntanglement {
    fn from(r: EntanglementReport) -> Self {
        MqnmrEntanglement {
            lambdas: r.lambdas,
            concurrence: r.concurrence,
            witness: r.witness.unwrap_or(f64::NAN),
            has_witness: r.witness.is_some(),
            entangled: r.entangled,
        }
    }
}

/// Opaque simulation handle.
pub struct MqnmrSimulation {
    inner: mqnmr::Simulation,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(msg));
}

fn status_of(err: &Error) -> MqnmrStatus {
    match err {
        Error::DimensionMismatch { .. } => MqnmrStatus::DimensionMismatch,
        e if e.is_numeric() => MqnmrStatus::Numeric,
        _ => MqnmrStatus::InvalidArgument,
    }
}

struct Failure(MqnmrStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(MqnmrStatus::NullPointer, format!("`{what}` is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> MqnmrStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MqnmrStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            MqnmrStatus::Panic
        }
    }
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn sim_ref<'a>(sim: *const MqnmrSimulation) -> Result<&'a mqnmr::Simulation, Failure> {
    sim.as_ref().map(|s| &s.inner).ok_or_else(|| null("sim"))
}

unsafe fn out_slice<'a>(out: *mut f64, len: usize, needed: usize) -> Result<&'a mut [f64], Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    if len < needed {
        return Err(Error::DimensionMismatch {
            expected: needed,
            actual: len,
        }
        .into());
    }
    Ok(std::slice::from_raw_parts_mut(out, needed))
}

fn box_sim(inner: mqnmr::Simulation, out: *mut *mut MqnmrSimulation) -> Result<(), Failure> {
    let raw = Box::into_raw(Box::new(MqnmrSimulation { inner }));
    // SAFETY: caller checked `out` for null before building the simulation.
    unsafe { out.write(raw) };
    Ok(())
}

/// Static description of a status code. Never null.
#[no_mangle]
pub extern "C" fn mqnmr_status_message(status: MqnmrStatus) -> *const c_char {
    let msg: &'static CStr = match status {
        MqnmrStatus::Ok => c"ok",
        MqnmrStatus::NullPointer => c"null pointer argument",
        MqnmrStatus::InvalidArgument => c"invalid argument",
        MqnmrStatus::DimensionMismatch => c"buffer or matrix dimension mismatch",
        MqnmrStatus::Numeric => c"numeric residue check failed",
        MqnmrStatus::Panic => c"internal panic",
    };
    msg.as_ptr()
}

/// Message of the last failure on this thread, or null if none. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mqnmr_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Builds an n-spin simulation from `n_couplings` couplings at inverse
/// temperature `beta`.
///
/// # Safety
/// `couplings` must point to `n_couplings` readable entries (it may be null
/// when `n_couplings` is 0); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mqnmr_simulation_new(
    n_spins: usize,
    couplings: *const MqnmrCoupling,
    n_couplings: usize,
    beta: f64,
    out: *mut *mut MqnmrSimulation,
) -> MqnmrStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let pairs: &[MqnmrCoupling] = match (couplings.is_null(), n_couplings) {
            (_, 0) => &[],
            (true, _) => return Err(null("couplings")),
            (false, n) => std::slice::from_raw_parts(couplings, n),
        };
        let system = mqnmr::SpinSystem::new(n_spins, pairs.iter().map(|c| (c.j, c.k, c.b)))?;
        box_sim(mqnmr::Simulation::new(system, beta)?, out)
    })
}

/// Spin-pair simulation with coupling `b` (rad/s).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mqnmr_simulation_new_two_spin(
    beta: f64,
    b: f64,
    out: *mut *mut MqnmrSimulation,
) -> MqnmrStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        box_sim(mqnmr::Simulation::two_spin(beta, b)?, out)
    })
}

/// # Safety
/// `sim` must be null or a handle from `mqnmr_simulation_new*` that has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn mqnmr_simulation_free(sim: *mut MqnmrSimulation) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// Hilbert space dimension 2^n, or 0 for a null handle.
///
/// # Safety
/// `sim` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mqnmr_simulation_dim(sim: *const MqnmrSimulation) -> usize {
    sim.as_ref().map_or(0, |s| s.inner.system().dim())
}

/// Writes ρ(τ) into `out` (`len >= 2 * dim * dim` doubles).
///
/// # Safety
/// `sim` must be a live handle and `out` must hold `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn mqnmr_simulation_density(
    sim: *const MqnmrSimulation,
    tau: f64,
    out: *mut f64,
    len: usize,
) -> MqnmrStatus {
    guard(|| {
        let sim = sim_ref(sim)?;
        let dim = sim.system().dim();
        let buf = out_slice(out, len, 2 * dim * dim)?;
        let rho = sim.state_at(tau)?;
        for (pair, z) in buf.chunks_exact_mut(2).zip(rho.matrix().to_row_major()) {
            pair[0] = z.re;
            pair[1] = z.im;
        }
        Ok(())
    })
}

/// Writes the coherence intensities G_k(τ) for k = -n..=n into `out`
/// (`len >= 2n + 1`), lowest order first.
///
/// # Safety
/// `sim` must be a live handle and `out` must hold `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn mqnmr_simulation_intensities(
    sim: *const MqnmrSimulation,
    tau: f64,
    out: *mut f64,
    len: usize,
) -> MqnmrStatus {
    guard(|| {
        let sim = sim_ref(sim)?;
        let n = sim.system().n_spins() as i32;
        let buf = out_slice(out, len, (2 * n + 1) as usize)?;
        let profile = sim.profile_at(tau)?;
        for (slot, order) in buf.iter_mut().zip(-n..=n) {
            *slot = profile.g(order);
        }
        Ok(())
    })
}

/// Concurrence of spins `site_a`, `site_b` at τ. The witness is set for
/// two-spin systems.
///
/// # Safety
/// `sim` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn mqnmr_simulation_entanglement(
    sim: *const MqnmrSimulation,
    tau: f64,
    site_a: usize,
    site_b: usize,
    out: *mut MqnmrEntanglement,
) -> MqnmrStatus {
    guard(|| {
        let sim = sim_ref(sim)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let report = sim.entanglement_at(tau, (site_a, site_b))?;
        write_out(out, report.into(), "out")
    })
}

/// Concurrence of an arbitrary two-spin density matrix given as 32 doubles
/// (4x4, row-major, interleaved re/im).
///
/// # Safety
/// `rho` must point to `len` readable doubles and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mqnmr_concurrence(rho: *const f64, len: usize, out: *mut MqnmrEntanglement) -> MqnmrStatus {
    guard(|| {
        if rho.is_null() {
            return Err(null("rho"));
        }
        if len != 32 {
            return Err(Error::DimensionMismatch {
                expected: 32,
                actual: len,
            }
            .into());
        }
        let data: Vec<Complex64> = std::slice::from_raw_parts(rho, len)
            .chunks_exact(2)
            .map(|p| Complex64::new(p[0], p[1]))
            .collect();
        let rho = DensityMatrix::new(ComplexMatrix::from_row_major(4, &data)?)?;
        write_out(out, mqnmr::concurrence(&rho)?.into(), "out")
    })
}

/// β = ħω₀/(k_B T) with ω₀ in rad/s and T in kelvin.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mqnmr_beta_from(omega0: f64, temperature: f64, out: *mut f64) -> MqnmrStatus {
    guard(|| {
        let beta = mqnmr::beta_from(&PhysicalParams::new(omega0, temperature)?)?;
        write_out(out, beta, "out")
    })
}

/// Entanglement onset temperature in kelvin for Larmor frequency ω₀ (rad/s).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mqnmr_critical_temperature(omega0: f64, out: *mut f64) -> MqnmrStatus {
    guard(|| {
        let params = PhysicalParams {
            omega0,
            temperature: 1.0,
            hbar: mqnmr::HBAR,
            k_b: mqnmr::K_B,
        };
        write_out(out, mqnmr::critical_temperature(&params)?, "out")
    })
}

/// Dipolar coupling in rad/s for SI geometry: γ in rad/(s·T), r in metres,
/// θ in radians.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mqnmr_dipolar_coupling(gamma: f64, r12: f64, theta12: f64, out: *mut f64) -> MqnmrStatus {
    guard(|| {
        let geom = DipolarGeometry { gamma, r12, theta12 };
        let b = mqnmr::dipolar_coupling(&geom, mqnmr::HBAR, mqnmr::MU0_OVER_4PI)?;
        write_out(out, b, "out")
    })
}

/// Closed-form pair concurrence at (β, b, τ).
#[no_mangle]
pub extern "C" fn mqnmr_analytic_concurrence(beta: f64, b: f64, tau: f64) -> f64 {
    mqnmr::analytic_concurrence(beta, b, tau)
}

/// Pair concurrence recovered from β and G₂ + G₋₂.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mqnmr_concurrence_from_coherences(beta: f64, g2_plus_gm2: f64, out: *mut f64) -> MqnmrStatus {
    guard(|| write_out(out, mqnmr::concurrence_from_coherences(beta, g2_plus_gm2)?, "out"))
}

/// Entanglement witness; negative means entangled.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mqnmr_entanglement_witness(beta: f64, g2_plus_gm2: f64, out: *mut f64) -> MqnmrStatus {
    guard(|| write_out(out, mqnmr::entanglement_witness(beta, g2_plus_gm2)?, "out"))
}
