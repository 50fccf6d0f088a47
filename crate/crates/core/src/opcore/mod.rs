//! Dense complex matrix foundation: Hermitian and unitary operator types,
//! Jacobi eigendecomposition with spectral clustering, Schatten norms,
//! the exponential/logarithm pair, direct sums and random sampling.

mod blocks;
pub mod io;
mod jacobi;
pub(crate) mod random;
mod schatten;
mod spectral;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub use blocks::{direct_sum, BlockDiagonal};
pub use jacobi::joint_diagonalize;
pub use random::{
    complex_gaussian, haar_unitary, random_hermitian, random_hermitian_contraction, random_hermitian_direction,
};
pub use schatten::{schatten_norm, singular_values, SchattenExponent};
pub use spectral::{
    eig_hermitian, eig_unitary, exp_i_from, matrix_exp_i, unitary_log, SpectralDecomposition, SpectrumKind,
};

pub type CMatrix = DMatrix<Complex64>;

/// Unitarity residual allowed by [`UnitaryOperator::new`].
pub const UNITARY_TOL: f64 = 1e-10;

pub(crate) fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .fold(0.0_f64, |acc, (x, y)| acc.max((x - y).norm()))
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

fn check_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.nrows() == 0 {
        return Err(Error::EmptyMatrix);
    }
    Ok(m.nrows())
}

/// A self-adjoint matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator {
    entries: CMatrix,
}

impl HermitianOperator {
    /// Validates `entries == entries^*` to `1e-12 * (1 + max|entry|)`.
    pub fn new(entries: CMatrix) -> Result<Self> {
        check_square(&entries)?;
        let tolerance = 1e-12 * (1.0 + max_abs(&entries));
        let residual = max_abs_diff(&entries, &entries.adjoint());
        if residual > tolerance || !residual.is_finite() {
            return Err(Error::NotHermitian { residual, tolerance });
        }
        Ok(Self { entries })
    }

    /// Takes the Hermitian part `(M + M^*)/2` of a square matrix.
    pub fn hermitian_part(m: &CMatrix) -> Result<Self> {
        check_square(m)?;
        Ok(Self {
            entries: (m + m.adjoint()).scale(0.5),
        })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        let n = diag.len();
        Ok(Self {
            entries: CMatrix::from_fn(n, n, |i, j| if i == j { c64(diag[i], 0.0) } else { c64(0.0, 0.0) }),
        })
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::from_real_diagonal(&vec![0.0; n])
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_inner(self) -> CMatrix {
        self.entries
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            entries: self.entries.scale(factor),
        }
    }

    /// `self + t * other`, symmetrized.
    pub fn add_scaled(&self, other: &HermitianOperator, t: f64) -> Self {
        let m = &self.entries + other.entries.scale(t);
        Self {
            entries: (&m + m.adjoint()).scale(0.5),
        }
    }

    /// Conjugation `W H W^*` by a unitary.
    pub fn conjugate_by(&self, w: &UnitaryOperator) -> Self {
        let m = w.entries() * &self.entries * w.entries().adjoint();
        Self {
            entries: (&m + m.adjoint()).scale(0.5),
        }
    }

    pub fn op_norm(&self) -> f64 {
        schatten_norm(&self.entries, SchattenExponent::Inf)
    }

    /// Rescales onto the unit ball of the operator norm when outside it.
    pub fn project_to_contraction(&self) -> Self {
        let norm = self.op_norm();
        if norm > 1.0 {
            self.scale(1.0 / norm)
        } else {
            self.clone()
        }
    }
}

/// A unitary matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryOperator {
    entries: CMatrix,
}

impl UnitaryOperator {
    /// Validates `U U^* = I` within [`UNITARY_TOL`] in max-abs.
    pub fn new(entries: CMatrix) -> Result<Self> {
        let n = check_square(&entries)?;
        let residual = max_abs_diff(&(&entries * entries.adjoint()), &identity(n));
        if residual > UNITARY_TOL || !residual.is_finite() {
            return Err(Error::NotUnitary {
                residual,
                tolerance: UNITARY_TOL,
            });
        }
        Ok(Self { entries })
    }

    pub(crate) fn new_unchecked(entries: CMatrix) -> Self {
        Self { entries }
    }

    pub fn identity(n: usize) -> Self {
        Self { entries: identity(n) }
    }

    pub fn from_phases(phases: &[f64]) -> Result<Self> {
        if phases.is_empty() {
            return Err(Error::EmptyMatrix);
        }
        let n = phases.len();
        Ok(Self {
            entries: CMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    Complex64::from_polar(1.0, phases[i])
                } else {
                    c64(0.0, 0.0)
                }
            }),
        })
    }

    /// Cyclic shift `e_k -> e_{k+1 mod n}`.
    pub fn cyclic_shift(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyMatrix);
        }
        Ok(Self {
            entries: CMatrix::from_fn(
                n,
                n,
                |i, j| {
                    if i == (j + 1) % n {
                        c64(1.0, 0.0)
                    } else {
                        c64(0.0, 0.0)
                    }
                },
            ),
        })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_inner(self) -> CMatrix {
        self.entries
    }

    pub fn adjoint(&self) -> Self {
        Self {
            entries: self.entries.adjoint(),
        }
    }

    pub fn mul(&self, other: &UnitaryOperator) -> Self {
        Self {
            entries: &self.entries * &other.entries,
        }
    }

    /// Multiplication by a unit-modulus scalar.
    pub fn phase(&self, theta: f64) -> Self {
        Self {
            entries: self.entries.map(|z| z * Complex64::from_polar(1.0, theta)),
        }
    }

    pub fn conjugate_by(&self, w: &UnitaryOperator) -> Self {
        Self {
            entries: w.entries() * &self.entries * w.entries().adjoint(),
        }
    }

    /// Integer power; negative exponents go through the adjoint.
    pub fn pow(&self, k: i64) -> CMatrix {
        let base = if k < 0 {
            self.entries.adjoint()
        } else {
            self.entries.clone()
        };
        let mut result = identity(self.dim());
        for _ in 0..k.unsigned_abs() {
            result = &result * &base;
        }
        result
    }
}
