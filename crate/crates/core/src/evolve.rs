//! Thermal equilibrium states and exact unitary evolution under H_MQ.

use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, DEFAULT_TOLERANCE, I, ZERO};
use crate::spinops::{basis, check_spin_count, total_iz};

/// Eigenvalue floor accepted as positive semidefinite.
pub const PSD_FLOOR: f64 = -1e-10;

/// A validated density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(mat, DEFAULT_TOLERANCE)
    }

    /// Validates Hermiticity and trace at `tol`; eigenvalues must be at least
    /// [`PSD_FLOOR`].
    pub fn with_tolerance(mat: ComplexMatrix, tol: f64) -> Result<Self> {
        let deviation = mat.hermitian_deviation();
        if deviation > tol {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (deviation {deviation:e})"
            )));
        }
        let tr = mat.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > tol {
            return Err(Error::InvalidDensityMatrix(format!("trace {tr} != 1")));
        }
        let spectrum = hermitian_eigendecompose_with_tol(&mat, tol)?;
        let min = spectrum.eigenvalues[0];
        if min < PSD_FLOOR {
            return Err(Error::InvalidDensityMatrix(format!("negative eigenvalue {min:e}")));
        }
        Ok(DensityMatrix { mat })
    }

    /// Pure state |ψ⟩⟨ψ| of a normalized vector.
    pub fn from_pure(psi: &[Complex64]) -> Result<Self> {
        let dim = psi.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::param("psi", format!("length {dim} is not a power of two")));
        }
        Self::new(ComplexMatrix::from_fn(dim, |i, j| psi[i] * psi[j].conj()))
    }

    pub(crate) fn new_unchecked(mat: ComplexMatrix) -> Self {
        DensityMatrix { mat }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.dim()
    }

    pub fn n_spins(&self) -> usize {
        self.mat.n_spins()
    }

    pub fn kron(&self, other: &DensityMatrix) -> DensityMatrix {
        DensityMatrix::new_unchecked(self.mat.kron(&other.mat))
    }
}

impl AsRef<ComplexMatrix> for DensityMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.mat
    }
}

/// Eigendecomposition H = V·diag(λ)·V† of a Hermitian matrix. Eigenvalues
/// are ascending and V is unitary. Computing it once and calling
/// [`SpectralDecomposition::evolve`] for many τ avoids re-diagonalizing.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// V·diag(f(λ))·V†.
    pub fn map_spectrum(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let weights: Vec<Complex64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let scaled = ComplexMatrix::from_fn(self.dim(), |i, k| v[(i, k)] * weights[k]);
        &scaled * &v.adjoint()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|l| Complex64::new(l, 0.0))
    }

    /// Propagator e^{−iHτ}.
    pub fn propagator(&self, tau: f64) -> ComplexMatrix {
        self.map_spectrum(|l| (-I * (l * tau)).exp())
    }

    /// e^{−iHτ}·A·e^{iHτ} for an arbitrary operator A.
    pub fn conjugate(&self, a: &ComplexMatrix, tau: f64) -> Result<ComplexMatrix> {
        a.ensure_dim(self.dim())?;
        let u = self.propagator(tau);
        Ok(&(&u * a) * &u.adjoint())
    }

    pub fn evolve(&self, rho0: &DensityMatrix, tau: f64) -> Result<DensityMatrix> {
        let out = self.conjugate(rho0.matrix(), tau)?;
        Ok(DensityMatrix::new_unchecked(hermitian_part(&out)))
    }

    /// The high-temperature reference e^{−iHτ}·I_z·e^{iHτ}.
    pub fn ht_reference(&self, tau: f64) -> Result<ComplexMatrix> {
        let iz = total_iz(self.dim().trailing_zeros() as usize)?;
        Ok(hermitian_part(&self.conjugate(&iz, tau)?))
    }
}

/// (A + A†)/2, removing round-off anti-Hermitian residue.
pub(crate) fn hermitian_part(a: &ComplexMatrix) -> ComplexMatrix {
    (a + &a.adjoint()).scale_real(0.5)
}

pub fn hermitian_eigendecompose(h: &ComplexMatrix) -> Result<SpectralDecomposition> {
    hermitian_eigendecompose_with_tol(h, DEFAULT_TOLERANCE)
}

pub fn hermitian_eigendecompose_with_tol(h: &ComplexMatrix, tol: f64) -> Result<SpectralDecomposition> {
    h.ensure_hermitian(tol)?;
    let eig = SymmetricEigen::new(hermitian_part(h).into_nalgebra());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let dim = order.len();
    let eigenvectors = ComplexMatrix::from_fn(dim, |i, k| eig.eigenvectors[(i, order[k])]);
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// ρ₀ = exp(β·I_z)/Z. Entries are shifted by the largest magnetization
/// before exponentiation so large β does not overflow.
pub fn thermal_state(beta: f64, n: usize) -> Result<DensityMatrix> {
    check_spin_count(n)?;
    if !beta.is_finite() {
        return Err(Error::param("beta", format!("must be finite, got {beta}")));
    }
    let top = n as f64 / 2.0 * beta.abs();
    let weights: Vec<f64> = basis(n).map(|b| (beta * b.magnetization() - top).exp()).collect();
    let z: f64 = weights.iter().sum();
    let diag: Vec<f64> = weights.iter().map(|w| w / z).collect();
    Ok(DensityMatrix::new_unchecked(ComplexMatrix::from_real_diagonal(&diag)))
}

/// ρ(τ) = e^{−iHτ}·ρ₀·e^{iHτ}.
pub fn evolve(rho0: &DensityMatrix, h: &ComplexMatrix, tau: f64) -> Result<DensityMatrix> {
    h.ensure_dim(rho0.dim())?;
    hermitian_eigendecompose(h)?.evolve(rho0, tau)
}

/// ρ^ht(τ) = e^{−iHτ}·I_z·e^{iHτ} for an n-spin Hamiltonian.
pub fn ht_reference(h: &ComplexMatrix, tau: f64, n: usize) -> Result<ComplexMatrix> {
    check_spin_count(n)?;
    h.ensure_dim(1 << n)?;
    hermitian_eigendecompose(h)?.ht_reference(tau)
}

/// Closed-form two-spin state after a preparation period τ:
///
/// ```text
///              1          ⎛ cosh β + cos(2bτ) sinh β   0  0   i sin(2bτ) sinh β       ⎞
/// ρ(τ) = ─────────────── ⎜ 0                          1  0   0                       ⎟
///        2(1 + cosh β)    ⎜ 0                          0  1   0                       ⎟
///                         ⎝ −i sin(2bτ) sinh β         0  0   cosh β − cos(2bτ) sinh β⎠
/// ```
///
/// Used as an oracle for the numeric evolution. Overflows for β ≳ 700.
pub fn analytic_rho_two_spin(beta: f64, b: f64, tau: f64) -> DensityMatrix {
    let norm = 2.0 * (1.0 + beta.cosh());
    let (s, c) = (2.0 * b * tau).sin_cos();
    let (sh, ch) = (beta.sinh(), beta.cosh());
    let re = |x: f64| Complex64::new(x / norm, 0.0);
    let mut m = ComplexMatrix::zeros(4);
    m[(0, 0)] = re(ch + c * sh);
    m[(1, 1)] = re(1.0);
    m[(2, 2)] = re(1.0);
    m[(3, 3)] = re(ch - c * sh);
    m[(0, 3)] = Complex64::new(0.0, s * sh / norm);
    m[(3, 0)] = Complex64::new(0.0, -s * sh / norm);
    debug_assert_eq!(m[(1, 2)], ZERO);
    DensityMatrix::new_unchecked(m)
}
