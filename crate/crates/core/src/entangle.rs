//! Wootters concurrence of spin pairs and the MQ entanglement witness.

use nalgebra::SVD;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::evolve::{hermitian_eigendecompose, DensityMatrix};
use crate::matrix::ComplexMatrix;
use crate::spinops::{pauli, Axis};

/// Tolerance on the feasible intensity range [0, tanh(β/2)].
const INTENSITY_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementReport {
    /// Descending λ₁ ≥ λ₂ ≥ λ₃ ≥ λ₄ ≥ 0.
    pub lambdas: [f64; 4],
    pub concurrence: f64,
    /// Filled in by [`EntanglementReport::with_witness`].
    pub witness: Option<f64>,
    pub entangled: bool,
}

impl EntanglementReport {
    pub fn from_lambdas(mut lambdas: [f64; 4]) -> Self {
        lambdas.sort_by(|a, b| b.total_cmp(a));
        let concurrence = (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0);
        EntanglementReport {
            lambdas,
            concurrence,
            witness: None,
            entangled: concurrence > 0.0,
        }
    }

    pub fn with_witness(self, beta: f64, g2_plus_gm2: f64) -> Result<Self> {
        Ok(EntanglementReport {
            witness: Some(entanglement_witness(beta, g2_plus_gm2)?),
            ..self
        })
    }
}

fn sigma_yy() -> ComplexMatrix {
    let y = pauli(Axis::Y);
    y.kron(&y)
}

/// ρ̃ = (σ_y⊗σ_y)·ρ*·(σ_y⊗σ_y), conjugation in the standard basis.
pub fn spin_flip(rho: &DensityMatrix) -> Result<ComplexMatrix> {
    rho.matrix().ensure_dim(4)?;
    let yy = sigma_yy();
    Ok(&(&yy * &rho.matrix().conj()) * &yy)
}

/// Wootters concurrence of a two-spin state.
///
/// The λ's (square roots of the eigenvalues of ρ·ρ̃) are obtained as the
/// singular values of √ρ·(σ_y⊗σ_y)·√ρ*, whose Gram matrix is similar to
/// ρ·ρ̃. This keeps their absolute error at machine precision even when
/// some vanish, which a square root of eigenvalues cannot do.
pub fn concurrence(rho: &DensityMatrix) -> Result<EntanglementReport> {
    rho.matrix().ensure_dim(4)?;
    let spec = hermitian_eigendecompose(rho.matrix())?;
    let sqrt_rho = spec.map_spectrum(|p| Complex64::new(p.max(0.0).sqrt(), 0.0));
    let m = &(&sqrt_rho * &sigma_yy()) * &sqrt_rho.conj();
    let svd = SVD::new(m.into_nalgebra(), false, false);
    let sv = &svd.singular_values;
    if sv.iter().any(|s| !s.is_finite()) {
        return Err(Error::NumericResidue {
            context: "concurrence",
            detail: "non-finite singular value".into(),
        });
    }
    Ok(EntanglementReport::from_lambdas([sv[0], sv[1], sv[2], sv[3]]))
}

/// Closed-form λ's of the evolved two-spin state, sorted descending:
/// λ₁,₂ = (√(1 + sin²(2bτ)sinh²β) ± |sin(2bτ)|sinh β)/(4cosh²(β/2)),
/// λ₃ = λ₄ = 1/(4cosh²(β/2)).
pub fn analytic_lambdas(beta: f64, b: f64, tau: f64) -> [f64; 4] {
    let s = (2.0 * b * tau).sin().abs();
    let sh = beta.sinh();
    let denom = 4.0 * (beta / 2.0).cosh().powi(2);
    let root = (1.0 + s * s * sh * sh).sqrt();
    let mut l = [
        (root + s * sh) / denom,
        (root - s * sh) / denom,
        1.0 / denom,
        1.0 / denom,
    ];
    l.sort_by(|a, b| b.total_cmp(a));
    l
}

/// C = max(0, (|sin(2bτ)|·sinh β − 1)/(2cosh²(β/2))).
pub fn analytic_concurrence(beta: f64, b: f64, tau: f64) -> f64 {
    let raw = raw_analytic_concurrence(beta, (2.0 * b * tau).sin());
    raw.max(0.0)
}

/// Unclamped concurrence expression for a given sin(2bτ).
pub fn raw_analytic_concurrence(beta: f64, sin_2bt: f64) -> f64 {
    (sin_2bt.abs() * beta.sinh() - 1.0) / (2.0 * (beta / 2.0).cosh().powi(2))
}

/// Concurrence recovered from the observable G₂ + G₋₂:
/// C = max(0, √(tanh(β/2)·(G₂ + G₋₂)) − 1/(2cosh²(β/2))).
pub fn concurrence_from_coherences(beta: f64, g2_plus_gm2: f64) -> Result<f64> {
    let t = (beta / 2.0).tanh();
    if !g2_plus_gm2.is_finite() || g2_plus_gm2 < -INTENSITY_SLACK || g2_plus_gm2 > t.abs() + INTENSITY_SLACK {
        return Err(Error::param(
            "g2_plus_gm2",
            format!("{g2_plus_gm2} outside [0, tanh(β/2) = {t}]"),
        ));
    }
    let g = g2_plus_gm2.clamp(0.0, t.abs());
    let raw = (t * g).sqrt() - 1.0 / (2.0 * (beta / 2.0).cosh().powi(2));
    Ok(raw.max(0.0))
}

/// Threshold on G₂ + G₋₂ above which the pair is entangled:
/// 1/(2 sinh β cosh²(β/2)).
pub fn witness_threshold(beta: f64) -> Result<f64> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::param("beta", format!("must be > 0, got {beta}")));
    }
    Ok(1.0 / (2.0 * beta.sinh() * (beta / 2.0).cosh().powi(2)))
}

/// EW = 1/(2 sinh β cosh²(β/2)) − (G₂ + G₋₂). Negative values certify
/// entanglement of the evolved pair state.
pub fn entanglement_witness(beta: f64, g2_plus_gm2: f64) -> Result<f64> {
    Ok(witness_threshold(beta)? - g2_plus_gm2)
}

/// Reduced state of the sites in `keep`, ordered so that `keep.0` is the
/// first (most significant) spin of the result.
pub fn partial_trace(rho: &DensityMatrix, keep: (usize, usize), n: usize) -> Result<DensityMatrix> {
    if n < 2 {
        return Err(Error::InvalidSpinCount(n));
    }
    rho.matrix().ensure_dim(1 << n)?;
    let (a, b) = keep;
    if a >= n || b >= n {
        return Err(Error::SiteOutOfRange { site: a.max(b), n });
    }
    if a == b {
        return Err(Error::param("keep", format!("sites must differ, got ({a}, {b})")));
    }
    let bit_a = 1usize << (n - 1 - a);
    let bit_b = 1usize << (n - 1 - b);
    let others = ((1usize << n) - 1) & !(bit_a | bit_b);
    let reduced_index = |p: usize| 2 * usize::from(p & bit_a != 0) + usize::from(p & bit_b != 0);
    let m = rho.matrix();
    let mut out = ComplexMatrix::zeros(4);
    for p in 0..m.dim() {
        for q in 0..m.dim() {
            if (p ^ q) & others == 0 {
                out[(reduced_index(p), reduced_index(q))] += m[(p, q)];
            }
        }
    }
    DensityMatrix::new(out)
}
