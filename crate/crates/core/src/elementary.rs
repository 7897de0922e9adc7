//! Projection-DPP sampling via diagonally-pivoted Cholesky, and the spectral
//! sampler that reduces a general Hermitian kernel to a random projection.
//!
//! A projection kernel (K^2 = K) always yields samples of cardinality equal
//! to its rank k, which admits an O(nk^2) left-looking sampler: at step j a
//! pivot t is drawn with probability d_t / (k - j) from the running diagonal
//! of the Schur complement, a Hermitian symmetric swap moves it into place,
//! and only the selected columns are ever formed.

use num_complex::Complex;

use crate::error::{DppError, Result};
use crate::kernel::{MarginalKernel, Sample};
use crate::matrix::Matrix;
use crate::rng::RngStream;
use crate::sampling::{log_likelihood_of, replay_forced};
use crate::scalar::{Real, Scalar};

/// A Hermitian kernel verified to be an orthogonal projection.
#[derive(Clone, Debug)]
pub struct ProjectionKernel<T: Scalar> {
    kernel: MarginalKernel<T>,
    rank: usize,
}

impl<T: Scalar> ProjectionKernel<T> {
    /// Validates idempotence (K^2 = K within 1e-8 elementwise), Hermitian
    /// symmetry, and near-integer trace; the rank is the rounded trace.
    pub fn new(kernel: MarginalKernel<T>) -> Result<Self> {
        if !kernel.is_hermitian() {
            return Err(DppError::InvalidKernel(
                "projection kernels must be hermitian".into(),
            ));
        }
        let n = kernel.order();
        let a = kernel.matrix();
        let sq = a.matmul(a);
        for i in 0..n {
            for j in 0..n {
                let d = sq[(i, j)] - a[(i, j)];
                if d.abs().to_f64() > 1e-8 {
                    return Err(DppError::InvalidKernel(format!(
                        "not idempotent: |K^2 - K| = {:.3e} at ({i}, {j})",
                        d.abs().to_f64()
                    )));
                }
            }
        }
        let trace: f64 = (0..n).map(|i| a[(i, i)].re().to_f64()).sum();
        let rank = trace.round();
        if (trace - rank).abs() > 1e-6 {
            return Err(DppError::InvalidKernel(format!(
                "trace {trace} is not within 1e-6 of an integer"
            )));
        }
        Ok(ProjectionKernel {
            kernel,
            rank: rank as usize,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn kernel(&self) -> &MarginalKernel<T> {
        &self.kernel
    }
}

/// Output of the elementary sampler: the chosen ground-set indices in pivot
/// order, the k x k lower-triangular Cholesky factor of the sampled
/// principal submatrix, and ln P[Y = indices] = sum ln d_j.
#[derive(Clone, Debug)]
pub struct ElementarySample<T: Scalar> {
    pub indices: Vec<usize>,
    pub factor: Matrix<T>,
    pub log_likelihood: f64,
}

/// Draws an exact sample from the projection DPP in O(nk^2) time.
///
/// Left-looking: the running Schur-complement diagonal `d` is tracked
/// out of place, a pivot is drawn by inverse CDF over d_t / (k - j), and the
/// pivot is moved to position j by a symmetric swap before its column is
/// formed from the previously selected columns.
pub fn sample_elementary<T: Scalar>(
    proj: &ProjectionKernel<T>,
    rng: &mut RngStream,
) -> Result<ElementarySample<T>> {
    sample_elementary_inner(proj, rng, None)
}

/// As [`sample_elementary`], but also records the remaining Schur trace
/// observed before each pivot draw (nominally k - j).
pub fn sample_elementary_traced<T: Scalar>(
    proj: &ProjectionKernel<T>,
    rng: &mut RngStream,
) -> Result<(ElementarySample<T>, Vec<f64>)> {
    let mut trace = Vec::with_capacity(proj.rank);
    let sample = sample_elementary_inner(proj, rng, Some(&mut trace))?;
    Ok((sample, trace))
}

fn sample_elementary_inner<T: Scalar>(
    proj: &ProjectionKernel<T>,
    rng: &mut RngStream,
    mut trace: Option<&mut Vec<f64>>,
) -> Result<ElementarySample<T>> {
    let n = proj.kernel.order();
    let k = proj.rank;
    let mut a = proj.kernel.matrix().clone();
    let mut labels: Vec<usize> = (0..n).collect();
    let mut d: Vec<f64> = (0..n).map(|i| a[(i, i)].re().to_f64()).collect();
    let mut log_likelihood = 0.0;

    for j in 0..k {
        let remaining = (k - j) as f64;
        let mut mass = 0.0;
        for &dt in &d[j..] {
            if dt < -1e-8 {
                return Err(DppError::NegativeDiagonal {
                    index: j,
                    value: dt,
                });
            }
            mass += dt.max(0.0);
        }
        debug_assert!(
            (mass - remaining).abs() < 1e-6,
            "schur trace {mass} drifted from {remaining} at step {j}"
        );
        if let Some(t) = trace.as_deref_mut() {
            t.push(mass);
        }
        if mass < 1e-10 {
            return Err(DppError::DegenerateMass {
                drawn: j,
                rank: k,
                mass,
            });
        }
        // Inverse CDF over d_t / (k - j); one draw per step. The target mass
        // is renormalized by the actual remaining trace to absorb drift.
        let u = rng.next_uniform() * mass.min(remaining);
        let mut acc = 0.0;
        let mut pivot = n - 1;
        for t in j..n {
            acc += d[t].max(0.0);
            if u < acc {
                pivot = t;
                break;
            }
        }
        if pivot < j || d[pivot] <= 0.0 {
            // Drift guard: fall back to the largest remaining diagonal.
            pivot = (j..n)
                .max_by(|&x, &y| d[x].partial_cmp(&d[y]).unwrap())
                .unwrap();
        }

        if pivot != j {
            a.swap_symmetric(j, pivot);
            labels.swap(j, pivot);
            d.swap(j, pivot);
        }

        // Left-looking update of column j from columns 0..j, then scale.
        for i in j..n {
            let mut v = a[(i, j)];
            for t in 0..j {
                v -= a[(i, t)] * a[(j, t)].conj();
            }
            a[(i, j)] = v;
        }
        let dj = a[(j, j)].re().to_f64();
        if dj <= 0.0 {
            return Err(DppError::NegativeDiagonal {
                index: labels[j],
                value: dj,
            });
        }
        let root = T::from_real(<T::Real as Real>::of_f64(dj.sqrt()));
        a[(j, j)] = root;
        for i in j + 1..n {
            a[(i, j)] /= root;
            d[i] -= (a[(i, j)].abs().to_f64()).powi(2);
        }
        log_likelihood += dj.ln();
    }

    let factor = Matrix::from_fn(k, k, |i, j| if j <= i { a[(i, j)] } else { T::zero() });
    Ok(ElementarySample {
        indices: labels[..k].to_vec(),
        factor,
        log_likelihood,
    })
}

/// Cyclic Jacobi eigensolver for Hermitian matrices. Returns eigenvalues in
/// ascending order and the matching orthonormal eigenvector columns.
pub fn hermitian_eigen(a: &Matrix<Complex<f64>>) -> Result<(Vec<f64>, Matrix<Complex<f64>>)> {
    let n = a.rows();
    if n != a.cols() {
        return Err(DppError::InvalidArgument("eigen input must be square".into()));
    }
    let mut m = a.clone();
    let mut q: Matrix<Complex<f64>> = Matrix::identity(n);
    let scale = a.max_abs().max(1e-300);
    let tol = 1e-14 * scale;

    for _sweep in 0..60 {
        let mut off: f64 = 0.0;
        for p in 0..n {
            for r in p + 1..n {
                off = off.max(m[(p, r)].norm());
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n {
            for r in p + 1..n {
                let apq = m[(p, r)];
                if apq.norm() <= tol * 1e-2 {
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(r, r)].re;
                let mag = apq.norm();
                let phase = apq / mag; // e^{i alpha}
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Unitary U: col_p' = c*col_p - s*conj(phase)*col_q,
                //            col_q' = s*phase*col_p + c*col_q
                // applied as A <- U^H A U, Q <- Q U.
                let cp = Complex::new(c, 0.0);
                let sp = phase * s;
                for i in 0..n {
                    let vip = m[(i, p)];
                    let viq = m[(i, r)];
                    m[(i, p)] = vip * cp - viq * sp.conj();
                    m[(i, r)] = vip * sp + viq * cp;
                }
                for i in 0..n {
                    let vpi = m[(p, i)];
                    let vqi = m[(r, i)];
                    m[(p, i)] = vpi * cp - vqi * sp;
                    m[(r, i)] = vpi * sp.conj() + vqi * cp;
                }
                for i in 0..n {
                    let vip = q[(i, p)];
                    let viq = q[(i, r)];
                    q[(i, p)] = vip * cp - viq * sp.conj();
                    q[(i, r)] = vip * sp + viq * cp;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let vals: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&x, &y| vals[x].partial_cmp(&vals[y]).unwrap());
    let sorted_vals: Vec<f64> = order.iter().map(|&i| vals[i]).collect();
    let vecs = Matrix::from_fn(n, n, |i, j| q[(i, order[j])]);
    Ok((sorted_vals, vecs))
}

/// Spectral DPP sampler: eigendecompose K, keep eigenvector j independently
/// with probability lambda_j (one draw per eigenvalue, ascending order),
/// then run the elementary sampler on the resulting random projection. The
/// reported likelihood is evaluated against the original kernel.
pub fn sample_spectral<T: Scalar>(
    kernel: &MarginalKernel<T>,
    rng: &mut RngStream,
) -> Result<Sample> {
    if !kernel.is_hermitian() {
        return Err(DppError::InvalidArgument(
            "spectral sampling requires a hermitian kernel".into(),
        ));
    }
    let n = kernel.order();
    let kc = kernel.to_c64();
    let (vals, vecs) = hermitian_eigen(kc.matrix())?;
    for &v in &vals {
        if !(-1e-8..=1.0 + 1e-8).contains(&v) {
            return Err(DppError::SpectrumOutOfRange { value: v });
        }
    }

    let mut chosen = Vec::new();
    for (j, &v) in vals.iter().enumerate() {
        let u = rng.next_uniform();
        if u < v.clamp(0.0, 1.0) {
            chosen.push(j);
        }
    }

    let kept: Vec<usize> = if chosen.is_empty() {
        Vec::new()
    } else {
        // P = Q_Z Q_Z^H
        let qz = Matrix::from_fn(n, chosen.len(), |i, j| vecs[(i, chosen[j])]);
        let p = qz.matmul(&qz.conj_transpose());
        let pk = MarginalKernel::new_hermitian_symmetrize(p)?;
        let proj = ProjectionKernel::new(pk)?;
        let mut s = sample_elementary(&proj, rng)?;
        s.indices.sort_unstable();
        s.indices
    };

    let mut decisions = vec![false; n];
    for &j in &kept {
        decisions[j] = true;
    }
    match replay_forced(&kc, &decisions) {
        Ok(sample) => Ok(sample),
        Err(_) => {
            // Degenerate replay (exactly singular pivot): report the subset
            // with the likelihood evaluated directly.
            let log_likelihood = log_likelihood_of(&kc, &kept);
            Ok(Sample {
                kept,
                log_likelihood,
                pivots: Vec::new(),
                decisions,
            })
        }
    }
}
