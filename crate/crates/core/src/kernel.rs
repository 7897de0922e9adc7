//! Marginal kernels, samples, and factored outputs.

use num_complex::Complex;

use crate::error::{DppError, Result};
use crate::matrix::Matrix;
use crate::scalar::{Real, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    Hermitian,
    General,
}

/// Square matrix defining a DPP; diagonal entries are the singleton
/// inclusion probabilities.
#[derive(Clone, Debug)]
pub struct MarginalKernel<T: Scalar> {
    matrix: Matrix<T>,
    symmetry: Symmetry,
}

/// Construction tolerance for the diagonal range check. 1e-12 at 64 bits,
/// scaled up for f32 storage where 1e-12 is below roundoff.
pub fn diag_tolerance<T: Scalar>() -> f64 {
    let eps = <T::Real as num_traits::Float>::epsilon().to_f64();
    (16.0 * eps).max(1e-12)
}

impl<T: Scalar> MarginalKernel<T> {
    /// Validates the diagonal (real within tolerance, values in [0, 1]) and,
    /// for Hermitian kernels, exact conjugate symmetry.
    pub fn new(matrix: Matrix<T>, symmetry: Symmetry) -> Result<Self> {
        if matrix.rows() != matrix.cols() {
            return Err(DppError::InvalidKernel(format!(
                "kernel must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let n = matrix.rows();
        let tol = diag_tolerance::<T>();
        for j in 0..n {
            let d = matrix[(j, j)];
            let im = d.im().to_f64().abs();
            let re = d.re().to_f64();
            if im > tol {
                return Err(DppError::InvalidKernel(format!(
                    "diagonal entry {j} has imaginary part {im:e}"
                )));
            }
            if !(-tol..=1.0 + tol).contains(&re) {
                return Err(DppError::InvalidKernel(format!(
                    "diagonal entry {j} = {re} outside [0, 1]"
                )));
            }
        }
        if symmetry == Symmetry::Hermitian {
            for i in 0..n {
                for j in 0..i {
                    if matrix[(i, j)] != matrix[(j, i)].conj() {
                        return Err(DppError::InvalidKernel(format!(
                            "entry ({i}, {j}) is not the exact conjugate of ({j}, {i})"
                        )));
                    }
                }
            }
        }
        Ok(MarginalKernel { matrix, symmetry })
    }

    /// Symmetrizes (averages with the conjugate transpose), snaps the
    /// diagonal into [0, 1], then constructs a Hermitian kernel. Intended for
    /// builders whose arithmetic leaves sub-tolerance asymmetry.
    pub fn new_hermitian_symmetrize(mut matrix: Matrix<T>) -> Result<Self> {
        assert_eq!(matrix.rows(), matrix.cols());
        let n = matrix.rows();
        let half = T::from_real(<T::Real as Real>::of_f64(0.5));
        for i in 0..n {
            for j in 0..i {
                let avg = (matrix[(i, j)] + matrix[(j, i)].conj()) * half;
                matrix[(i, j)] = avg;
                matrix[(j, i)] = avg.conj();
            }
            let d = matrix[(i, i)].re();
            let zero = <T::Real as num_traits::Zero>::zero();
            let one = <T::Real as num_traits::One>::one();
            let re = if d < zero {
                zero
            } else if d > one {
                one
            } else {
                d
            };
            matrix[(i, i)] = T::from_real(re);
        }
        Self::new(matrix, Symmetry::Hermitian)
    }

    /// Skips validation; used internally where entries were just produced by
    /// an algorithm that guarantees the invariants up to roundoff.
    pub fn new_unchecked(matrix: Matrix<T>, symmetry: Symmetry) -> Self {
        assert_eq!(matrix.rows(), matrix.cols());
        MarginalKernel { matrix, symmetry }
    }

    pub fn order(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix<T> {
        self.matrix
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    pub fn is_hermitian(&self) -> bool {
        self.symmetry == Symmetry::Hermitian
    }

    pub fn to_c64(&self) -> MarginalKernel<Complex<f64>> {
        MarginalKernel {
            matrix: self.matrix.to_c64(),
            symmetry: self.symmetry,
        }
    }

    /// Casts entries to another precision (e.g. f64 -> f32 for the
    /// single-precision experiments).
    pub fn cast<U: Scalar>(&self) -> MarginalKernel<U> {
        MarginalKernel {
            matrix: self.matrix.map(|x| U::of_c64(x.to_c64())),
            symmetry: self.symmetry,
        }
    }
}

/// Outcome of one sampling (or MAP, or forced-replay) run.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    /// Kept ground-set indices, strictly increasing.
    pub kept: Vec<usize>,
    /// ln of the elementary probability of the produced subset.
    pub log_likelihood: f64,
    /// Conditional inclusion probability seen at each pivot, in pivot order,
    /// clamped to [0, 1].
    pub pivots: Vec<f64>,
    /// Inclusion decision at each pivot, in pivot order.
    pub decisions: Vec<bool>,
}

impl Sample {
    pub fn kept_bitmask(&self) -> u64 {
        assert!(self.decisions.len() <= 64);
        let mut mask = 0u64;
        for &j in &self.kept {
            mask |= 1 << j;
        }
        mask
    }
}

/// In-place factorization left behind by a sampler: for general kernels the
/// LU factors of `K - 1_{Y^c}`; for Hermitian kernels the unit-lower L below
/// the diagonal and real D on the diagonal (the strict upper triangle is not
/// referenced).
#[derive(Clone, Debug)]
pub struct FactoredKernel<T: Scalar> {
    pub matrix: Matrix<T>,
    pub symmetry: Symmetry,
}

impl<T: Scalar> FactoredKernel<T> {
    pub fn order(&self) -> usize {
        self.matrix.rows()
    }

    /// Reconstructs the factored matrix: unit_tril(A) * triu(A) for general
    /// storage, L * D * L^H for Hermitian storage.
    pub fn reconstruct(&self) -> Matrix<T> {
        let n = self.order();
        let a = &self.matrix;
        match self.symmetry {
            Symmetry::General => {
                let mut l = Matrix::identity(n);
                let mut u = Matrix::zeros(n, n);
                for i in 0..n {
                    for j in 0..n {
                        if i > j {
                            l[(i, j)] = a[(i, j)];
                        } else {
                            u[(i, j)] = a[(i, j)];
                        }
                    }
                }
                l.matmul(&u)
            }
            Symmetry::Hermitian => {
                let mut l = Matrix::identity(n);
                for i in 0..n {
                    for j in 0..i {
                        l[(i, j)] = a[(i, j)];
                    }
                }
                let mut ld = l.clone();
                for j in 0..n {
                    let d = a[(j, j)];
                    for i in 0..n {
                        ld[(i, j)] *= d;
                    }
                }
                ld.matmul(&l.conj_transpose())
            }
        }
    }
}
