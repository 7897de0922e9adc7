//! Conversion from an L-ensemble kernel to a marginal kernel.

use num_complex::Complex;

use crate::elementary::hermitian_eigen;
use crate::error::{DppError, Result};
use crate::kernel::MarginalKernel;
use crate::matrix::Matrix;

type C64 = Complex<f64>;

/// K = I - (L + I)^{-1}, computed spectrally: the eigenvalues map by
/// lambda -> lambda / (1 + lambda), so a PSD L always yields an admissible
/// marginal kernel.
pub fn marginal_from_lensemble(l: &Matrix<C64>) -> Result<MarginalKernel<C64>> {
    let n = l.rows();
    let (vals, q) = hermitian_eigen(l)?;
    if let Some(&worst) = vals.first() {
        if worst < -1e-10 {
            return Err(DppError::IndefiniteL { value: worst });
        }
    }
    let mut scaled = q.clone();
    for j in 0..n {
        let lambda = vals[j].max(0.0);
        let mapped = C64::new(lambda / (1.0 + lambda), 0.0);
        for i in 0..n {
            scaled[(i, j)] *= mapped;
        }
    }
    let k = scaled.matmul(&q.conj_transpose());
    MarginalKernel::new_hermitian_symmetrize(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngStream;

    #[test]
    fn zero_l_gives_zero_k() {
        let l = Matrix::<C64>::zeros(3, 3);
        let k = marginal_from_lensemble(&l).unwrap();
        assert!(k.matrix().max_abs() < 1e-12);
    }

    #[test]
    fn identity_l_gives_half_identity() {
        let l = Matrix::<C64>::identity(3);
        let k = marginal_from_lensemble(&l).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expect = if i == j { 0.5 } else { 0.0 };
                assert!((k.matrix()[(i, j)] - C64::new(expect, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn spectral_mapping_on_random_psd() {
        let mut rng = RngStream::new(6);
        let b = Matrix::from_fn(4, 4, |_, _| C64::new(rng.next_gaussian(), rng.next_gaussian()));
        let l = b.conj_transpose().matmul(&b);
        let (lvals, _) = hermitian_eigen(&l).unwrap();
        let k = marginal_from_lensemble(&l).unwrap();
        let (kvals, _) = hermitian_eigen(k.matrix()).unwrap();
        for (lv, kv) in lvals.iter().zip(&kvals) {
            assert!((kv - lv / (1.0 + lv)).abs() < 1e-10, "{lv} -> {kv}");
        }
    }

    #[test]
    fn indefinite_l_rejected() {
        let mut l = Matrix::<C64>::identity(2);
        l[(0, 0)] = C64::new(-0.5, 0.0);
        assert!(matches!(
            marginal_from_lensemble(&l),
            Err(DppError::IndefiniteL { .. })
        ));
    }
}
