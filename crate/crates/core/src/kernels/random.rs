//! Random admissible test kernels: Hermitian kernels with a prescribed
//! spectrum, and non-Hermitian kernels obtained from them by diagonal
//! similarity (which preserves every principal minor, hence the DPP).

use num_complex::Complex;

use crate::error::Result;
use crate::kernel::{MarginalKernel, Symmetry};
use crate::matrix::Matrix;
use crate::rng::RngStream;

type C64 = Complex<f64>;

/// Random unitary via modified Gram-Schmidt on a complex Gaussian matrix.
fn random_unitary(n: usize, rng: &mut RngStream) -> Matrix<C64> {
    let mut q = Matrix::from_fn(n, n, |_, _| {
        C64::new(rng.next_gaussian(), rng.next_gaussian())
    });
    for j in 0..n {
        for _pass in 0..2 {
            for t in 0..j {
                let mut dot = C64::new(0.0, 0.0);
                for i in 0..n {
                    dot += q[(i, t)].conj() * q[(i, j)];
                }
                for i in 0..n {
                    let v = q[(i, t)];
                    q[(i, j)] -= dot * v;
                }
            }
        }
        let norm: f64 = (0..n).map(|i| q[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        for i in 0..n {
            q[(i, j)] /= norm;
        }
    }
    q
}

/// K = Q diag(spectrum) Q^H for a random unitary Q; admissible iff the
/// prescribed eigenvalues lie in [0, 1] (clamped defensively).
pub fn random_admissible_hermitian(
    n: usize,
    spectrum: &[f64],
    rng: &mut RngStream,
) -> Result<MarginalKernel<C64>> {
    assert_eq!(spectrum.len(), n);
    let q = random_unitary(n, rng);
    let mut scaled = q.clone();
    for j in 0..n {
        let lambda = C64::new(spectrum[j].clamp(0.0, 1.0), 0.0);
        for i in 0..n {
            scaled[(i, j)] *= lambda;
        }
    }
    let k = scaled.matmul(&q.conj_transpose());
    MarginalKernel::new_hermitian_symmetrize(k)
}

/// Hermitian kernel with uniformly random spectrum in [0, 1].
pub fn random_admissible_hermitian_uniform(
    n: usize,
    rng: &mut RngStream,
) -> Result<MarginalKernel<C64>> {
    let spectrum: Vec<f64> = (0..n).map(|_| rng.next_uniform()).collect();
    random_admissible_hermitian(n, &spectrum, rng)
}

/// Non-Hermitian admissible kernel D^{-1} K D: a diagonal similarity of a
/// random admissible Hermitian kernel, with |D_jj| in [1/2, 2] and random
/// phases. Similarity preserves all principal minors, so the subset
/// distribution is unchanged while the matrix itself loses symmetry.
pub fn random_admissible_nonhermitian(
    n: usize,
    rng: &mut RngStream,
) -> Result<MarginalKernel<C64>> {
    let h = random_admissible_hermitian_uniform(n, rng)?;
    let d: Vec<C64> = (0..n)
        .map(|_| {
            let log_mod = rng.next_uniform() * (2.0f64.ln() - 0.5f64.ln()) + 0.5f64.ln();
            let phase = rng.next_uniform() * std::f64::consts::TAU;
            C64::from_polar(log_mod.exp(), phase)
        })
        .collect();
    let a = Matrix::from_fn(n, n, |i, j| h.matrix()[(i, j)] * d[j] / d[i]);
    MarginalKernel::new(a, Symmetry::General)
}
