//! Multiple-quantum coherence orders and their intensities.
//!
//! Entry (p, q) of an operator belongs to coherence order m_p − m_q, where
//! m is the total magnetization of the basis state. The intensity of order
//! n is G_n = Re tr(ρ_(n)·ρ^ht_(−n)).

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::evolve::DensityMatrix;
use crate::matrix::{ComplexMatrix, ZERO};
use crate::spinops::{check_spin_count, hilbert_dim, two_m};

/// Largest imaginary part tolerated in an intensity trace.
pub const IMAGINARY_TOLERANCE: f64 = 1e-10;

/// Coherence order of entry (p, q).
pub fn order_of(p: usize, q: usize, n_spins: usize) -> i32 {
    (two_m(p, n_spins) - two_m(q, n_spins)) / 2
}

/// An operator split by coherence order, one component per order in
/// [−n, n] (explicit zero matrices included).
#[derive(Debug, Clone)]
pub struct CoherenceComponents {
    pub by_order: BTreeMap<i32, ComplexMatrix>,
}

impl CoherenceComponents {
    pub fn component(&self, order: i32) -> Option<&ComplexMatrix> {
        self.by_order.get(&order)
    }

    pub fn reconstruct(&self) -> Option<ComplexMatrix> {
        let mut iter = self.by_order.values();
        let first = iter.next()?.clone();
        Some(iter.fold(first, |acc, m| &acc + m))
    }

    /// Orders with at least one entry above `tol` in modulus.
    pub fn nonzero_orders(&self, tol: f64) -> Vec<i32> {
        self.by_order
            .iter()
            .filter(|(_, m)| m.max_abs() > tol)
            .map(|(n, _)| *n)
            .collect()
    }
}

pub fn decompose_by_order(a: &ComplexMatrix, n_spins: usize) -> Result<CoherenceComponents> {
    check_spin_count(n_spins)?;
    let dim = hilbert_dim(n_spins);
    a.ensure_dim(dim)?;
    let n = n_spins as i32;
    let mut by_order: BTreeMap<i32, ComplexMatrix> = (-n..=n).map(|k| (k, ComplexMatrix::zeros(dim))).collect();
    for p in 0..dim {
        for q in 0..dim {
            let part = by_order
                .get_mut(&order_of(p, q, n_spins))
                .expect("order within [-n, n]");
            part[(p, q)] = a[(p, q)];
        }
    }
    Ok(CoherenceComponents { by_order })
}

/// G_n = Re tr(ρ_(n)(τ)·ρ^ht_(−n)(τ)).
///
/// Only entries of order n in `rho` pair with entries of order −n in the
/// reference, so the trace is summed directly over those index pairs.
pub fn intensity(rho: &DensityMatrix, rho_ht: &ComplexMatrix, order: i32) -> Result<f64> {
    let dim = rho.dim();
    rho_ht.ensure_dim(dim)?;
    let n_spins = rho.n_spins();
    let mut tr = ZERO;
    for p in 0..dim {
        for q in 0..dim {
            if order_of(p, q, n_spins) == order {
                tr += rho.matrix()[(p, q)] * rho_ht[(q, p)];
            }
        }
    }
    check_real(tr, "coherence intensity")
}

fn check_real(z: Complex64, context: &'static str) -> Result<f64> {
    if z.im.abs() > IMAGINARY_TOLERANCE {
        return Err(Error::ImaginaryResidue {
            context,
            residue: z.im.abs(),
            tolerance: IMAGINARY_TOLERANCE,
        });
    }
    Ok(z.re)
}

/// Intensities G_n for every order in [−n, n] at one preparation time.
#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceProfile {
    pub intensities: BTreeMap<i32, f64>,
    pub beta: f64,
    pub tau: f64,
}

impl CoherenceProfile {
    /// Intensity of `order`; zero for orders outside the stored range.
    pub fn g(&self, order: i32) -> f64 {
        self.intensities.get(&order).copied().unwrap_or(0.0)
    }

    /// G₂ + G₋₂, the quantity the witness is built from.
    pub fn g2_plus_gm2(&self) -> f64 {
        self.g(2) + self.g(-2)
    }

    pub fn total(&self) -> f64 {
        self.intensities.values().sum()
    }

    /// Intensities divided by their sum. `None` when the sum vanishes.
    pub fn normalized(&self) -> Option<BTreeMap<i32, f64>> {
        let total = self.total();
        if total == 0.0 {
            return None;
        }
        Some(self.intensities.iter().map(|(k, g)| (*k, g / total)).collect())
    }
}

/// Full profile from an evolved state and its high-temperature reference.
pub fn profile(rho: &DensityMatrix, rho_ht: &ComplexMatrix, beta: f64, tau: f64) -> Result<CoherenceProfile> {
    let n = rho.n_spins() as i32;
    let intensities = (-n..=n)
        .map(|k| Ok((k, intensity(rho, rho_ht, k)?)))
        .collect::<Result<_>>()?;
    Ok(CoherenceProfile { intensities, beta, tau })
}

/// Closed-form two-spin intensities:
/// G₀ = tanh(β/2)·cos²(2bτ), G±2 = ½·tanh(β/2)·sin²(2bτ), G±1 = 0.
pub fn analytic_intensities(beta: f64, b: f64, tau: f64) -> CoherenceProfile {
    let t = (beta / 2.0).tanh();
    let (s, c) = (2.0 * b * tau).sin_cos();
    let g2 = 0.5 * t * s * s;
    let intensities = BTreeMap::from([(-2, g2), (-1, 0.0), (0, t * c * c), (1, 0.0), (2, g2)]);
    CoherenceProfile { intensities, beta, tau }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolve::{analytic_rho_two_spin, hermitian_eigendecompose, thermal_state};
    use crate::model::{build_h_mq, SpinSystem, REFERENCE_COUPLING_RAD_S};
    use crate::spinops::total_iz;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn numeric_profile(beta: f64, b: f64, tau: f64) -> CoherenceProfile {
        let spec = hermitian_eigendecompose(&build_h_mq(&SpinSystem::two_spin(b).unwrap())).unwrap();
        let rho = spec.evolve(&thermal_state(beta, 2).unwrap(), tau).unwrap();
        let ht = spec.ht_reference(tau).unwrap();
        profile(&rho, &ht, beta, tau).unwrap()
    }

    #[test]
    fn diagonal_matrix_is_pure_zero_quantum() {
        let comps = decompose_by_order(&total_iz(3).unwrap(), 3).unwrap();
        assert_eq!(comps.nonzero_orders(0.0), vec![0]);
        assert_eq!(
            comps.by_order.keys().copied().collect::<Vec<_>>(),
            (-3..=3).collect::<Vec<_>>()
        );
    }

    #[test]
    fn evolved_pair_state_has_orders_zero_and_two() {
        let rho = analytic_rho_two_spin(3.0, 1.0, 0.3);
        let comps = decompose_by_order(rho.matrix(), 2).unwrap();
        assert_eq!(comps.nonzero_orders(1e-15), vec![-2, 0, 2]);
        assert_eq!(comps.component(2).unwrap()[(0, 3)], rho.matrix()[(0, 3)]);
        assert_eq!(order_of(0, 3, 2), 2);
        assert_eq!(order_of(3, 0, 2), -2);
        assert_eq!(order_of(1, 2, 2), 0);
    }

    #[test]
    fn decompose_rejects_wrong_dimension() {
        assert!(matches!(
            decompose_by_order(&ComplexMatrix::identity(4), 3),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn initial_intensities() {
        let beta = 1.3;
        let p = numeric_profile(beta, 7.0, 0.0);
        assert_relative_eq!(p.g(0), (beta / 2.0).tanh(), max_relative = 1e-14);
        assert_eq!(p.g(2), 0.0);
        assert_eq!(p.g(-2), 0.0);
    }

    #[test]
    fn quarter_period_double_quantum_intensity() {
        let b = REFERENCE_COUPLING_RAD_S;
        let tau = PI / (4.0 * b);
        let p = numeric_profile(3.0, b, tau);
        // ½·tanh(1.5)
        assert_relative_eq!(p.g(2), 0.452_574_126_822_433, max_relative = 1e-10);
        let closed = analytic_intensities(3.0, b, tau);
        assert!(closed.g(0).abs() < 1e-15);
        assert_relative_eq!(closed.g2_plus_gm2(), 1.5_f64.tanh(), max_relative = 1e-14);
    }

    #[test]
    fn numeric_pipeline_matches_closed_form() {
        let b = REFERENCE_COUPLING_RAD_S;
        for beta in [0.5, 1.0, 3.0, 6.0] {
            for k in 0..64 {
                let tau = k as f64 / 63.0 * 2.0 * PI / (2.0 * b);
                let numeric = numeric_profile(beta, b, tau);
                let closed = analytic_intensities(beta, b, tau);
                for order in -2..=2 {
                    assert!((numeric.g(order) - closed.g(order)).abs() < 1e-10);
                }
                assert!((numeric.total() - (beta / 2.0).tanh()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn closed_form_period_is_quarter_cycle() {
        let b = 3.0;
        for tau in [0.05, 0.31, 1.7] {
            let a = analytic_intensities(2.0, b, tau);
            let later = analytic_intensities(2.0, b, tau + PI / (2.0 * b));
            for order in -2..=2 {
                assert!((a.g(order) - later.g(order)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn inconsistent_reference_is_reported() {
        let rho = analytic_rho_two_spin(2.0, 1.0, 0.4);
        let mut bogus = ComplexMatrix::zeros(4);
        bogus[(0, 0)] = Complex64::new(0.0, 1.0);
        let err = intensity(&rho, &bogus, 0).unwrap_err();
        assert!(err.is_numeric());
    }

    #[test]
    fn normalized_view_sums_to_one() {
        let p = analytic_intensities(2.0, 1.0, 0.3);
        let norm = p.normalized().unwrap();
        assert!((norm.values().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!(analytic_intensities(0.0, 1.0, 0.3).normalized().is_none());
    }
}
