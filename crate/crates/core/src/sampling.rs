//! Unblocked factorization-based DPP samplers.
//!
//! The non-Hermitian path is a right-looking LU factorization whose pivots
//! are Bernoulli-adjusted: index j is kept with probability equal to the
//! current diagonal entry, and on exclusion 1 is subtracted from the pivot
//! before elimination proceeds. The Hermitian path is the LDL^H
//! specialization touching only the lower triangle.

use crate::error::{DppError, Result};
use crate::kernel::{FactoredKernel, MarginalKernel, Sample, Symmetry};
use crate::matrix::MatMut;
use crate::rng::RngStream;
use crate::scalar::{Real, Scalar};

/// Pivot validation knobs.
#[derive(Clone, Copy, Debug)]
pub struct SamplerOptions {
    /// Tolerance for the pivot range check (real part in [-tol, 1+tol]) and
    /// for the imaginary-part check (|imag| <= tol * max(1, ||K||)).
    pub pivot_tol: f64,
    /// When false, out-of-range pivots are clamped silently instead of
    /// raising an error. Used for the single-precision corruption
    /// experiments, where pivots drift out of range by design.
    pub check_pivots: bool,
}

impl Default for SamplerOptions {
    fn default() -> Self {
        SamplerOptions {
            pivot_tol: 1e-8,
            check_pivots: true,
        }
    }
}

impl SamplerOptions {
    /// No range/imaginary checks; pivots are clamped for the Bernoulli draw
    /// but the factorization proceeds with whatever values arise.
    pub fn lenient() -> Self {
        SamplerOptions {
            pivot_tol: f64::INFINITY,
            check_pivots: false,
        }
    }
}

/// How inclusion decisions are made at each pivot.
pub(crate) enum PivotRule<'a> {
    /// One uniform draw per index; keep iff u < p.
    Bernoulli(&'a mut RngStream),
    /// Deterministic maximum-likelihood branch; keep iff p >= 1/2.
    MapGreedy,
    /// Replay a fixed decision vector (indexed by global pivot index).
    Forced(&'a [bool]),
}

/// Accumulates the per-pivot record during elimination.
#[derive(Debug, Default)]
pub(crate) struct Recorder {
    pub pivots: Vec<f64>,
    pub decisions: Vec<bool>,
    pub log_likelihood: f64,
}

impl Recorder {
    pub fn with_capacity(n: usize) -> Self {
        Recorder {
            pivots: Vec::with_capacity(n),
            decisions: Vec::with_capacity(n),
            log_likelihood: 0.0,
        }
    }

    pub fn into_sample(self) -> Sample {
        let kept = self
            .decisions
            .iter()
            .enumerate()
            .filter_map(|(j, &d)| d.then_some(j))
            .collect();
        Sample {
            kept,
            log_likelihood: self.log_likelihood,
            pivots: self.pivots,
            decisions: self.decisions,
        }
    }
}

#[inline]
fn decide(rule: &mut PivotRule<'_>, global_index: usize, p_clamped: f64) -> bool {
    match rule {
        PivotRule::Bernoulli(rng) => rng.next_uniform() < p_clamped,
        PivotRule::MapGreedy => p_clamped >= 0.5,
        PivotRule::Forced(decisions) => decisions[global_index],
    }
}

/// Checks the raw pivot, makes the inclusion decision, applies the exclusion
/// shift, and records the outcome. Returns the post-decision diagonal value.
#[inline]
fn resolve_pivot<T: Scalar>(
    raw: T,
    global_index: usize,
    hermitian: bool,
    rule: &mut PivotRule<'_>,
    rec: &mut Recorder,
    opts: &SamplerOptions,
    imag_scale: f64,
) -> Result<T> {
    let p = raw.re().to_f64();
    if opts.check_pivots {
        if !hermitian {
            let im = raw.im().to_f64().abs();
            if im > opts.pivot_tol * imag_scale {
                return Err(DppError::NonRealPivot {
                    index: global_index,
                    imag: im,
                });
            }
        }
        if !(-opts.pivot_tol..=1.0 + opts.pivot_tol).contains(&p) {
            return Err(DppError::PivotOutOfRange {
                index: global_index,
                value: p,
            });
        }
    }
    let p_clamped = p.clamp(0.0, 1.0);
    let keep = decide(rule, global_index, p_clamped);
    rec.pivots.push(p_clamped);
    rec.decisions.push(keep);
    let adjusted = if keep { raw } else { raw - T::one() };
    // ln of the absolute value of the final diagonal entry: ln|p| when kept,
    // ln|p - 1| when excluded.
    let contrib = adjusted.abs().to_f64().ln();
    rec.log_likelihood += contrib;
    if contrib == f64::NEG_INFINITY {
        // Probability-zero branch; elimination cannot continue past a zero
        // pivot. Only reachable under forced replay.
        return Err(DppError::ZeroPivot {
            index: global_index,
        });
    }
    Ok(adjusted)
}

/// Right-looking LU-style DPP elimination of a square diagonal block.
///
/// `base` is the global index of the block's first pivot. The block is fully
/// factored in place; trailing updates outside the block are the caller's
/// responsibility (none for the unblocked case, where the block is the whole
/// matrix).
pub(crate) fn dpp_panel_general<T: Scalar>(
    a: &mut MatMut<'_, T>,
    base: usize,
    rule: &mut PivotRule<'_>,
    rec: &mut Recorder,
    opts: &SamplerOptions,
    imag_scale: f64,
) -> Result<()> {
    let b = a.rows();
    debug_assert_eq!(b, a.cols());
    for j in 0..b {
        let d = resolve_pivot(a.get(j, j), base + j, false, rule, rec, opts, imag_scale)?;
        a.set(j, j, d);
        for i in j + 1..b {
            *a.at_mut(i, j) /= d;
        }
        // Rank-1 Schur update of the trailing block.
        let urow = a.row_slice(j, j + 1, b).as_ptr();
        for i in j + 1..b {
            let lij = a.get(i, j);
            let row = a.row_slice_mut(i, j + 1, b);
            for (t, x) in row.iter_mut().enumerate() {
                *x -= lij * unsafe { *urow.add(t) };
            }
        }
    }
    Ok(())
}

/// LDL^H specialization of the DPP elimination; only the lower triangle of
/// the block is read or written, and pivots are real by construction.
pub(crate) fn dpp_panel_hermitian<T: Scalar>(
    a: &mut MatMut<'_, T>,
    base: usize,
    rule: &mut PivotRule<'_>,
    rec: &mut Recorder,
    opts: &SamplerOptions,
) -> Result<()> {
    let b = a.rows();
    debug_assert_eq!(b, a.cols());
    for j in 0..b {
        let raw = T::from_real(a.get(j, j).re());
        let d = resolve_pivot(raw, base + j, true, rule, rec, opts, 1.0)?;
        a.set(j, j, d);
        // Trailing lower-triangle update with the unscaled column, then the
        // column scaling.
        for k in j + 1..b {
            let factor = a.get(k, j).conj() / d;
            if factor == T::zero() {
                continue;
            }
            for i in k..b {
                let wi = a.get(i, j);
                *a.at_mut(i, k) -= wi * factor;
            }
            // Keep the diagonal structurally real.
            let dk = a.get(k, k);
            a.set(k, k, T::from_real(dk.re()));
        }
        for i in j + 1..b {
            *a.at_mut(i, j) /= d;
        }
    }
    Ok(())
}

/// Replays the elimination with a fixed inclusion vector, returning the full
/// sample record (pivots, decisions, likelihood). Used to attach likelihoods
/// to samples produced by other algorithms.
pub(crate) fn replay_forced<T: Scalar>(
    kernel: &MarginalKernel<T>,
    decisions: &[bool],
) -> Result<Sample> {
    assert_eq!(decisions.len(), kernel.order());
    run_unblocked(kernel, PivotRule::Forced(decisions), &SamplerOptions::lenient())
        .map(|(s, _)| s)
}

fn max_abs_of<T: Scalar>(kernel: &MarginalKernel<T>) -> f64 {
    kernel.matrix().max_abs().to_f64().max(1.0)
}

fn run_unblocked<T: Scalar>(
    kernel: &MarginalKernel<T>,
    mut rule: PivotRule<'_>,
    opts: &SamplerOptions,
) -> Result<(Sample, FactoredKernel<T>)> {
    let n = kernel.order();
    let mut matrix = kernel.matrix().clone();
    let mut rec = Recorder::with_capacity(n);
    let imag_scale = max_abs_of(kernel);
    {
        let mut view = matrix.as_mut_view();
        match kernel.symmetry() {
            Symmetry::General => {
                dpp_panel_general(&mut view, 0, &mut rule, &mut rec, opts, imag_scale)?
            }
            Symmetry::Hermitian => dpp_panel_hermitian(&mut view, 0, &mut rule, &mut rec, opts)?,
        }
    }
    Ok((
        rec.into_sample(),
        FactoredKernel {
            matrix,
            symmetry: kernel.symmetry(),
        },
    ))
}

/// Samples DPP(K) for a general (possibly non-Hermitian) kernel via the
/// Bernoulli-modified unblocked LU factorization. Roughly (2/3)n^3 flops.
pub fn sample_nonhermitian_unblocked<T: Scalar>(
    kernel: &MarginalKernel<T>,
    rng: &mut RngStream,
) -> Result<(Sample, FactoredKernel<T>)> {
    sample_nonhermitian_unblocked_with(kernel, rng, &SamplerOptions::default())
}

pub fn sample_nonhermitian_unblocked_with<T: Scalar>(
    kernel: &MarginalKernel<T>,
    rng: &mut RngStream,
    opts: &SamplerOptions,
) -> Result<(Sample, FactoredKernel<T>)> {
    run_unblocked(kernel, PivotRule::Bernoulli(rng), opts)
}

/// Samples DPP(K) for a Hermitian kernel via the Bernoulli-modified unblocked
/// LDL^H factorization. Roughly (1/3)n^3 flops.
pub fn sample_hermitian_unblocked<T: Scalar>(
    kernel: &MarginalKernel<T>,
    rng: &mut RngStream,
) -> Result<(Sample, FactoredKernel<T>)> {
    sample_hermitian_unblocked_with(kernel, rng, &SamplerOptions::default())
}

pub fn sample_hermitian_unblocked_with<T: Scalar>(
    kernel: &MarginalKernel<T>,
    rng: &mut RngStream,
    opts: &SamplerOptions,
) -> Result<(Sample, FactoredKernel<T>)> {
    if !kernel.is_hermitian() {
        return Err(DppError::InvalidArgument(
            "sample_hermitian_unblocked requires a Hermitian kernel".into(),
        ));
    }
    run_unblocked(kernel, PivotRule::Bernoulli(rng), opts)
}

/// Samples with the path matching the kernel's symmetry flag.
pub fn sample_unblocked<T: Scalar>(
    kernel: &MarginalKernel<T>,
    rng: &mut RngStream,
) -> Result<(Sample, FactoredKernel<T>)> {
    sample_unblocked_with(kernel, rng, &SamplerOptions::default())
}

pub fn sample_unblocked_with<T: Scalar>(
    kernel: &MarginalKernel<T>,
    rng: &mut RngStream,
    opts: &SamplerOptions,
) -> Result<(Sample, FactoredKernel<T>)> {
    match kernel.symmetry() {
        Symmetry::Hermitian => sample_hermitian_unblocked_with(kernel, rng, opts),
        Symmetry::General => sample_nonhermitian_unblocked_with(kernel, rng, opts),
    }
}

/// Deterministic greedy maximum-likelihood inference: include index j iff
/// its conditional probability is at least 1/2 (ties include).
pub fn greedy_map<T: Scalar>(
    kernel: &MarginalKernel<T>,
) -> Result<(Sample, FactoredKernel<T>)> {
    run_unblocked(kernel, PivotRule::MapGreedy, &SamplerOptions::default())
}

/// ln of the elementary probability P[Y = subset] under DPP(K), computed by
/// replaying the elimination with forced decisions. Probability-zero subsets
/// yield -inf; no error paths.
pub fn log_likelihood_of<T: Scalar>(kernel: &MarginalKernel<T>, subset: &[usize]) -> f64 {
    let n = kernel.order();
    let mut decisions = vec![false; n];
    for &j in subset {
        assert!(j < n, "subset index {j} out of range for order {n}");
        decisions[j] = true;
    }
    match run_unblocked(
        kernel,
        PivotRule::Forced(&decisions),
        &SamplerOptions::lenient(),
    ) {
        Ok((sample, _)) => sample.log_likelihood,
        Err(DppError::ZeroPivot { .. }) => f64::NEG_INFINITY,
        Err(e) => unreachable!("forced replay cannot fail with {e}"),
    }
}

/// Marginal kernel of the DPP over the remaining indices, conditioned on the
/// indices of `included` being in the sample and those of `excluded` being
/// out. Implemented by eliminating the pivots of `included ∪ excluded`
/// (subtracting 1 from excluded pivots first).
pub fn conditional_kernel<T: Scalar>(
    kernel: &MarginalKernel<T>,
    included: &[usize],
    excluded: &[usize],
) -> Result<MarginalKernel<T>> {
    let n = kernel.order();
    let mut is_pivot = vec![false; n];
    let mut is_excluded = vec![false; n];
    for &j in included {
        assert!(j < n);
        is_pivot[j] = true;
    }
    for &j in excluded {
        assert!(j < n);
        if is_pivot[j] {
            return Err(DppError::InvalidArgument(format!(
                "index {j} both included and excluded"
            )));
        }
        is_pivot[j] = true;
        is_excluded[j] = true;
    }

    let mut a = kernel.matrix().clone();
    let mut eliminated = vec![false; n];
    for q in 0..n {
        if !is_pivot[q] {
            continue;
        }
        if is_excluded[q] {
            a[(q, q)] -= T::one();
        }
        let d = a[(q, q)];
        if d.abs().to_f64() < 1e-12 {
            return Err(DppError::SingularConditioning {
                index: q,
                magnitude: d.abs().to_f64(),
            });
        }
        eliminated[q] = true;
        let alive: Vec<usize> = (0..n).filter(|&i| !eliminated[i]).collect();
        for &i in &alive {
            let scale = a[(i, q)] / d;
            if scale == T::zero() {
                continue;
            }
            for &k in &alive {
                let update = scale * a[(q, k)];
                a[(i, k)] -= update;
            }
        }
    }

    let remaining: Vec<usize> = (0..n).filter(|&i| !eliminated[i]).collect();
    let m = remaining.len();
    let mut out = crate::matrix::Matrix::zeros(m, m);
    for (ii, &i) in remaining.iter().enumerate() {
        for (kk, &k) in remaining.iter().enumerate() {
            out[(ii, kk)] = a[(i, k)];
        }
    }
    if kernel.is_hermitian() {
        MarginalKernel::new_hermitian_symmetrize(out)
    } else {
        Ok(MarginalKernel::new_unchecked(out, Symmetry::General))
    }
}
