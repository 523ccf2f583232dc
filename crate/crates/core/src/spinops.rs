//! Spin-1/2 operator algebra.
//!
//! Basis convention: on every site bit 0 is the m = +1/2 state (aligned with
//! the field) and bit 1 is m = -1/2. Site 0 is the most significant bit of
//! the basis index, so for two spins the basis order is |00>, |01>, |10>, |11>.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{ComplexMatrix, I, ONE, ZERO};

/// Largest supported spin count (matrix dimension 4096).
pub const MAX_SPINS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Selects I+ or I-.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ladder {
    Raising,
    Lowering,
}

pub fn check_spin_count(n: usize) -> Result<()> {
    if n == 0 || n > MAX_SPINS {
        return Err(Error::InvalidSpinCount(n));
    }
    Ok(())
}

/// Hilbert-space dimension 2^n.
pub fn hilbert_dim(n: usize) -> usize {
    1 << n
}

/// The standard 2x2 Pauli matrix for `axis`.
pub fn pauli(axis: Axis) -> ComplexMatrix {
    let rows = match axis {
        Axis::X => [[ZERO, ONE], [ONE, ZERO]],
        Axis::Y => [[ZERO, -I], [I, ZERO]],
        Axis::Z => [[ONE, ZERO], [ZERO, -ONE]],
    };
    ComplexMatrix::from_fn(2, |i, j| rows[i][j])
}

/// Single-site spin component I_alpha = sigma_alpha / 2.
pub fn spin_component(axis: Axis) -> ComplexMatrix {
    pauli(axis).scale_real(0.5)
}

/// Single-site ladder operator. I+ sends |1> (m = -1/2) to |0> (m = +1/2).
pub fn ladder(which: Ladder) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(2);
    match which {
        Ladder::Raising => m[(0, 1)] = ONE,
        Ladder::Lowering => m[(1, 0)] = ONE,
    }
    m
}

/// Lifts a 2x2 operator acting on `site` into the n-spin space.
pub fn site_operator(site: usize, op: &ComplexMatrix, n: usize) -> Result<ComplexMatrix> {
    check_spin_count(n)?;
    if site >= n {
        return Err(Error::SiteOutOfRange { site, n });
    }
    op.ensure_dim(2)?;
    let left = ComplexMatrix::identity(hilbert_dim(site));
    let right = ComplexMatrix::identity(hilbert_dim(n - site - 1));
    Ok(left.kron(op).kron(&right))
}

/// I_j+ or I_j- lifted to the n-spin space.
pub fn raising_lowering(site: usize, which: Ladder, n: usize) -> Result<ComplexMatrix> {
    site_operator(site, &ladder(which), n)
}

/// Total z magnetization I_z = sum_j I_jz, diagonal in the standard basis.
pub fn total_iz(n: usize) -> Result<ComplexMatrix> {
    check_spin_count(n)?;
    let diag: Vec<f64> = basis(n).map(|b| b.magnetization()).collect();
    Ok(ComplexMatrix::from_real_diagonal(&diag))
}

/// Label of a computational basis state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisLabel {
    index: usize,
    n: usize,
}

impl BasisLabel {
    pub fn new(index: usize, n: usize) -> Result<Self> {
        check_spin_count(n)?;
        if index >= hilbert_dim(n) {
            return Err(Error::param("index", format!("{index} out of range for {n} spins")));
        }
        Ok(BasisLabel { index, n })
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn n_spins(&self) -> usize {
        self.n
    }

    /// Bit of `site` (0 = spin up).
    pub fn bit(&self, site: usize) -> u8 {
        assert!(site < self.n, "site {site} out of range");
        ((self.index >> (self.n - 1 - site)) & 1) as u8
    }

    pub fn bits(&self) -> Vec<u8> {
        (0..self.n).map(|s| self.bit(s)).collect()
    }

    /// Twice the magnetization, always an integer.
    pub fn two_m(&self) -> i32 {
        two_m(self.index, self.n)
    }

    pub fn magnetization(&self) -> f64 {
        f64::from(self.two_m()) / 2.0
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|")?;
        for b in self.bits() {
            write!(f, "{b}")?;
        }
        write!(f, "⟩")
    }
}

/// All basis labels of an n-spin system in index order.
pub fn basis(n: usize) -> impl Iterator<Item = BasisLabel> {
    (0..hilbert_dim(n)).map(move |index| BasisLabel { index, n })
}

pub(crate) fn two_m(index: usize, n: usize) -> i32 {
    n as i32 - 2 * index.count_ones() as i32
}

/// Basis vector |index> as a column of complex amplitudes.
pub fn basis_vector(index: usize, n: usize) -> Vec<Complex64> {
    let mut v = vec![ZERO; hilbert_dim(n)];
    v[index] = ONE;
    v
}
