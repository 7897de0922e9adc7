//! Blocked and tiled-parallel variants of the dense samplers, plus the plain
//! blocked factorizations used as performance baselines.
//!
//! The blocked algorithm factors a `block_size` diagonal panel with the
//! unblocked sampler, produces the off-diagonal panels with triangular
//! solves, and applies the trailing Schur update tile by tile with GEMM. The
//! tiled-parallel variant runs the same tile tasks through rayon; every tile
//! is written by exactly one task per panel step, so results are identical
//! for any thread count.

use rayon::prelude::*;

use crate::error::{DppError, Result};
use crate::kernel::{FactoredKernel, MarginalKernel, Sample, Symmetry};
use crate::matrix::{MatMut, Matrix, SyncPtr};
use crate::rng::RngStream;
use crate::sampling::{dpp_panel_general, dpp_panel_hermitian, PivotRule, Recorder, SamplerOptions};
use crate::scalar::{Real, Scalar};

/// Panel / tile geometry and parallelism knobs.
#[derive(Clone, Copy, Debug)]
pub struct BlockingConfig {
    /// Panel width for the blocked factorization.
    pub block_size: usize,
    /// Edge length of the square tiles used for trailing updates.
    pub tile_size: usize,
    /// `None` means use all available threads.
    pub thread_count: Option<usize>,
}

impl Default for BlockingConfig {
    fn default() -> Self {
        BlockingConfig {
            block_size: 128,
            tile_size: 256,
            thread_count: None,
        }
    }
}

impl BlockingConfig {
    pub fn with_block_size(block_size: usize) -> Self {
        BlockingConfig {
            block_size,
            tile_size: block_size.max(256),
            thread_count: None,
        }
    }

    /// Default geometry for a given problem size: 128 panels up to n=2000,
    /// 256 beyond.
    pub fn for_order(n: usize) -> Self {
        let block_size = if n <= 2000 { 128 } else { 256 };
        BlockingConfig {
            block_size,
            tile_size: 256,
            thread_count: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.block_size == 0 || self.tile_size == 0 {
            return Err(DppError::InvalidArgument(
                "block_size and tile_size must be positive".into(),
            ));
        }
        if self.block_size > self.tile_size {
            return Err(DppError::InvalidArgument(format!(
                "block_size {} exceeds tile_size {}",
                self.block_size, self.tile_size
            )));
        }
        Ok(())
    }
}

/// What the diagonal panel does: plain factorization or DPP sampling.
enum PanelMode<'c, 'a> {
    Factor,
    Sample {
        rule: &'c mut PivotRule<'a>,
        rec: &'c mut Recorder,
        opts: &'c SamplerOptions,
        imag_scale: f64,
    },
}

/// Plain unpivoted LU of a square block.
fn lu_panel_plain<T: Scalar>(a: &mut MatMut<'_, T>, base: usize) -> Result<()> {
    let b = a.rows();
    for j in 0..b {
        let d = a.get(j, j);
        if d.abs().to_f64() < 1e-300 {
            return Err(DppError::ZeroPivot { index: base + j });
        }
        for i in j + 1..b {
            *a.at_mut(i, j) /= d;
        }
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

/// Plain unpivoted LDL^H of a square block (lower triangle only).
fn ldl_panel_plain<T: Scalar>(a: &mut MatMut<'_, T>, base: usize) -> Result<()> {
    let b = a.rows();
    for j in 0..b {
        let d = T::from_real(a.get(j, j).re());
        if d.abs().to_f64() < 1e-300 {
            return Err(DppError::ZeroPivot { index: base + j });
        }
        a.set(j, j, d);
        for k in j + 1..b {
            let factor = a.get(k, j).conj() / d;
            if factor == T::zero() {
                continue;
            }
            for i in k..b {
                let wi = a.get(i, j);
                *a.at_mut(i, k) -= wi * factor;
            }
            let dk = a.get(k, k);
            a.set(k, k, T::from_real(dk.re()));
        }
        for i in j + 1..b {
            *a.at_mut(i, j) /= d;
        }
    }
    Ok(())
}

/// Chunks `[start, end)` into ranges of at most `size`.
fn chunks(start: usize, end: usize, size: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut lo = start;
    while lo < end {
        let hi = (lo + size).min(end);
        out.push((lo, hi));
        lo = hi;
    }
    out
}

fn run_jobs<J: Send>(parallel: bool, jobs: Vec<J>, f: impl Fn(J) + Send + Sync) {
    if parallel && jobs.len() > 1 {
        jobs.into_par_iter().for_each(f);
    } else {
        jobs.into_iter().for_each(f);
    }
}

/// One panel step of the general (LU) blocked elimination, shared by the
/// sequential blocked and tiled-parallel drivers.
#[allow(clippy::too_many_arguments)]
fn panel_step_general<T: Scalar>(
    a: &mut Matrix<T>,
    j: usize,
    b: usize,
    cfg: &BlockingConfig,
    parallel: bool,
    mode: &mut PanelMode<'_, '_>,
) -> Result<()> {
    let n = a.rows();
    let stride = a.cols();
    {
        let mut view = a.as_mut_view();
        let mut panel = view.submatrix(j, j, b, b);
        match mode {
            PanelMode::Factor => lu_panel_plain(&mut panel, j)?,
            PanelMode::Sample {
                rule,
                rec,
                opts,
                imag_scale,
            } => dpp_panel_general(&mut panel, j, rule, rec, opts, *imag_scale)?,
        }
    }
    if j + b >= n {
        return Ok(());
    }
    let ptr = SyncPtr(a.data_mut().as_mut_ptr());

    // A21 := A21 * triu(panel)^{-1}, by row tiles.
    let row_tiles = chunks(j + b, n, cfg.tile_size);
    run_jobs(parallel, row_tiles.clone(), |(r0, r1)| {
        let panel = unsafe { MatMut::from_raw(ptr.get().add(j * stride + j), b, b, stride) };
        for r in r0..r1 {
            let row =
                unsafe { std::slice::from_raw_parts_mut(ptr.get().add(r * stride + j), b) };
            for k in 0..b {
                let mut acc = row[k];
                for t in 0..k {
                    acc -= row[t] * panel.get(t, k);
                }
                row[k] = acc / panel.get(k, k);
            }
        }
    });

    // A12 := unit_tril(panel)^{-1} * A12, by column tiles.
    let col_tiles = chunks(j + b, n, cfg.tile_size);
    run_jobs(parallel, col_tiles.clone(), |(c0, c1)| {
        let w = c1 - c0;
        for k in 1..b {
            for t in 0..k {
                let l = unsafe { *ptr.get().add((j + k) * stride + (j + t)) };
                if l == T::zero() {
                    continue;
                }
                let from =
                    unsafe { std::slice::from_raw_parts(ptr.get().add((j + t) * stride + c0), w) };
                let to = unsafe {
                    std::slice::from_raw_parts_mut(ptr.get().add((j + k) * stride + c0), w)
                };
                for (x, y) in to.iter_mut().zip(from) {
                    *x -= l * *y;
                }
            }
        }
    });

    // Trailing Schur update per tile: A22 -= A21 * A12.
    let mut tiles = Vec::with_capacity(row_tiles.len() * col_tiles.len());
    for &r in &row_tiles {
        for &c in &col_tiles {
            tiles.push((r, c));
        }
    }
    run_jobs(parallel, tiles, |((r0, r1), (c0, c1))| unsafe {
        T::gemm(
            r1 - r0,
            b,
            c1 - c0,
            -T::one(),
            ptr.get().add(r0 * stride + j),
            stride as isize,
            1,
            ptr.get().add(j * stride + c0),
            stride as isize,
            1,
            T::one(),
            ptr.get().add(r0 * stride + c0),
            stride as isize,
            1,
        );
    });
    Ok(())
}

/// One panel step of the Hermitian (LDL^H) blocked elimination. Only the
/// lower triangle is read or written; `w_buf` and `lh_buf` are per-panel
/// scratch holding L21*D and conj(L21).
#[allow(clippy::too_many_arguments)]
fn panel_step_hermitian<T: Scalar>(
    a: &mut Matrix<T>,
    j: usize,
    b: usize,
    cfg: &BlockingConfig,
    parallel: bool,
    mode: &mut PanelMode<'_, '_>,
    w_buf: &mut Vec<T>,
    lh_buf: &mut Vec<T>,
) -> Result<()> {
    let n = a.rows();
    let stride = a.cols();
    {
        let mut view = a.as_mut_view();
        let mut panel = view.submatrix(j, j, b, b);
        match mode {
            PanelMode::Factor => ldl_panel_plain(&mut panel, j)?,
            PanelMode::Sample {
                rule, rec, opts, ..
            } => dpp_panel_hermitian(&mut panel, j, rule, rec, opts)?,
        }
    }
    if j + b >= n {
        return Ok(());
    }
    let below = n - (j + b);
    w_buf.clear();
    w_buf.resize(below * b, T::zero());
    lh_buf.clear();
    lh_buf.resize(below * b, T::zero());

    let ptr = SyncPtr(a.data_mut().as_mut_ptr());
    let w_ptr = SyncPtr(w_buf.as_mut_ptr());
    let lh_ptr = SyncPtr(lh_buf.as_mut_ptr());

    // Row solve: y = row of L21 * D from A21 = L21 D L1^H, then store
    // L21 = y / d in the matrix and conj(L21) in scratch.
    let row_tiles = chunks(j + b, n, cfg.tile_size);
    run_jobs(parallel, row_tiles.clone(), |(r0, r1)| {
        let panel = unsafe { MatMut::from_raw(ptr.get().add(j * stride + j), b, b, stride) };
        for r in r0..r1 {
            let row =
                unsafe { std::slice::from_raw_parts_mut(ptr.get().add(r * stride + j), b) };
            let w_row = unsafe {
                std::slice::from_raw_parts_mut(w_ptr.get().add((r - j - b) * b), b)
            };
            let lh_row = unsafe {
                std::slice::from_raw_parts_mut(lh_ptr.get().add((r - j - b) * b), b)
            };
            for k in 0..b {
                let mut y = row[k];
                for t in 0..k {
                    y -= w_row[t] * panel.get(k, t).conj();
                }
                w_row[k] = y;
                let l = y / panel.get(k, k);
                row[k] = l;
                lh_row[k] = l.conj();
            }
        }
    });

    // Schur update on tiles at or below the diagonal: A22 -= W * L21^H.
    let mut tiles = Vec::new();
    for &r in &row_tiles {
        for &c in &row_tiles {
            if r.0 >= c.0 {
                tiles.push((r, c));
            }
        }
    }
    run_jobs(parallel, tiles, |((r0, r1), (c0, c1))| unsafe {
        // B[k, c] = conj(L21)[c, k]: transpose strides over lh_buf.
        T::gemm(
            r1 - r0,
            b,
            c1 - c0,
            -T::one(),
            w_ptr.get().add((r0 - j - b) * b),
            b as isize,
            1,
            lh_ptr.get().add((c0 - j - b) * b),
            1,
            b as isize,
            T::one(),
            ptr.get().add(r0 * stride + c0),
            stride as isize,
            1,
        );
    });
    Ok(())
}

fn eliminate_blocked<T: Scalar>(
    a: &mut Matrix<T>,
    symmetry: Symmetry,
    mut mode: PanelMode<'_, '_>,
    cfg: &BlockingConfig,
    parallel: bool,
) -> Result<()> {
    cfg.validate()?;
    let n = a.rows();
    let mut w_buf = Vec::new();
    let mut lh_buf = Vec::new();
    let mut j = 0;
    while j < n {
        let b = cfg.block_size.min(n - j);
        match symmetry {
            Symmetry::General => panel_step_general(a, j, b, cfg, parallel, &mut mode)?,
            Symmetry::Hermitian => {
                panel_step_hermitian(a, j, b, cfg, parallel, &mut mode, &mut w_buf, &mut lh_buf)?
            }
        }
        j += b;
    }
    Ok(())
}

fn in_pool<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match threads {
        None => f(),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .expect("thread pool")
            .install(f),
    }
}

fn sample_with_engine<T: Scalar>(
    kernel: &MarginalKernel<T>,
    rng: &mut RngStream,
    cfg: &BlockingConfig,
    opts: &SamplerOptions,
    parallel: bool,
) -> Result<(Sample, FactoredKernel<T>)> {
    let n = kernel.order();
    let mut matrix = kernel.matrix().clone();
    let mut rec = Recorder::with_capacity(n);
    let imag_scale = kernel.matrix().max_abs().to_f64().max(1.0);
    let mut rule = PivotRule::Bernoulli(rng);
    let mode = PanelMode::Sample {
        rule: &mut rule,
        rec: &mut rec,
        opts,
        imag_scale,
    };
    in_pool(if parallel { cfg.thread_count } else { None }, || {
        eliminate_blocked(&mut matrix, kernel.symmetry(), mode, cfg, parallel)
    })?;
    Ok((
        rec.into_sample(),
        FactoredKernel {
            matrix,
            symmetry: kernel.symmetry(),
        },
    ))
}

/// Blocked DPP sampler; identical sampling semantics to the unblocked
/// variants, with the trailing updates recast as GEMM. Sequential execution.
pub fn sample_blocked<T: Scalar>(
    kernel: &MarginalKernel<T>,
    rng: &mut RngStream,
    cfg: &BlockingConfig,
) -> Result<(Sample, FactoredKernel<T>)> {
    sample_blocked_with(kernel, rng, cfg, &SamplerOptions::default())
}

pub fn sample_blocked_with<T: Scalar>(
    kernel: &MarginalKernel<T>,
    rng: &mut RngStream,
    cfg: &BlockingConfig,
    opts: &SamplerOptions,
) -> Result<(Sample, FactoredKernel<T>)> {
    sample_with_engine(kernel, rng, cfg, opts, false)
}

/// Tiled-parallel DPP sampler. The diagonal-panel sampling tasks form a
/// sequential chain (all Bernoulli draws happen in pivot order); solve and
/// Schur tasks on distinct tiles run concurrently. Output is byte-identical
/// to [`sample_blocked`] for any thread count.
pub fn sample_tiled_parallel<T: Scalar>(
    kernel: &MarginalKernel<T>,
    rng: &mut RngStream,
    cfg: &BlockingConfig,
) -> Result<(Sample, FactoredKernel<T>)> {
    sample_tiled_parallel_with(kernel, rng, cfg, &SamplerOptions::default())
}

pub fn sample_tiled_parallel_with<T: Scalar>(
    kernel: &MarginalKernel<T>,
    rng: &mut RngStream,
    cfg: &BlockingConfig,
    opts: &SamplerOptions,
) -> Result<(Sample, FactoredKernel<T>)> {
    sample_with_engine(kernel, rng, cfg, opts, true)
}

/// Plain blocked LU factorization without pivoting (no DPP modification).
pub fn factor_blocked_lu<T: Scalar>(
    mut matrix: Matrix<T>,
    cfg: &BlockingConfig,
) -> Result<FactoredKernel<T>> {
    eliminate_blocked(&mut matrix, Symmetry::General, PanelMode::Factor, cfg, false)?;
    Ok(FactoredKernel {
        matrix,
        symmetry: Symmetry::General,
    })
}

/// Plain blocked LDL^H factorization (lower triangle), optionally tiled
/// parallel; the performance baseline the DPP sampler is compared against.
pub fn factor_blocked_ldl<T: Scalar>(
    mut matrix: Matrix<T>,
    cfg: &BlockingConfig,
    parallel: bool,
) -> Result<FactoredKernel<T>> {
    in_pool(if parallel { cfg.thread_count } else { None }, || {
        eliminate_blocked(&mut matrix, Symmetry::Hermitian, PanelMode::Factor, cfg, parallel)
    })?;
    Ok(FactoredKernel {
        matrix,
        symmetry: Symmetry::Hermitian,
    })
}

/// Tiled-parallel plain LU.
pub fn factor_tiled_lu<T: Scalar>(
    mut matrix: Matrix<T>,
    cfg: &BlockingConfig,
) -> Result<FactoredKernel<T>> {
    in_pool(cfg.thread_count, || {
        eliminate_blocked(&mut matrix, Symmetry::General, PanelMode::Factor, cfg, true)
    })?;
    Ok(FactoredKernel {
        matrix,
        symmetry: Symmetry::General,
    })
}

/// ln|det| of a Hermitian matrix via plain LDL^H.
pub fn ldl_log_abs_det<T: Scalar>(matrix: Matrix<T>) -> Result<f64> {
    let n = matrix.rows();
    let f = factor_blocked_ldl(matrix, &BlockingConfig::for_order(n), false)?;
    let mut acc = 0.0;
    for j in 0..n {
        acc += f.matrix[(j, j)].abs().to_f64().ln();
    }
    Ok(acc)
}

/// Benchmark variant: which factorization family, whether the Bernoulli
/// sampling modification is enabled, and the working precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BenchVariant {
    /// Tiled Hermitian DPP sampling, real arithmetic.
    Hermitian64,
    Hermitian32,
    /// Plain tiled LDL^H, real arithmetic (baseline).
    Ldl64,
    Ldl32,
    /// Tiled general (LU-based) DPP sampling, complex arithmetic.
    General64,
    General32,
    /// Plain tiled LU, complex arithmetic (baseline).
    Lu64,
    Lu32,
}

impl BenchVariant {
    pub fn parse(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_lowercase();
        Ok(match key.as_str() {
            "hermitian64" => BenchVariant::Hermitian64,
            "hermitian32" => BenchVariant::Hermitian32,
            "ldl64" => BenchVariant::Ldl64,
            "ldl32" => BenchVariant::Ldl32,
            "general64" => BenchVariant::General64,
            "general32" => BenchVariant::General32,
            "lu64" => BenchVariant::Lu64,
            "lu32" => BenchVariant::Lu32,
            _ => {
                return Err(DppError::InvalidArgument(format!(
                    "unknown benchmark variant '{s}'"
                )))
            }
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            BenchVariant::Hermitian64 => "hermitian-64",
            BenchVariant::Hermitian32 => "hermitian-32",
            BenchVariant::Ldl64 => "ldl-64",
            BenchVariant::Ldl32 => "ldl-32",
            BenchVariant::General64 => "general-64",
            BenchVariant::General32 => "general-32",
            BenchVariant::Lu64 => "lu-64",
            BenchVariant::Lu32 => "lu-32",
        }
    }

    pub fn precision(self) -> u32 {
        match self {
            BenchVariant::Hermitian64
            | BenchVariant::Ldl64
            | BenchVariant::General64
            | BenchVariant::Lu64 => 64,
            _ => 32,
        }
    }

    fn is_hermitian(self) -> bool {
        matches!(
            self,
            BenchVariant::Hermitian64
                | BenchVariant::Hermitian32
                | BenchVariant::Ldl64
                | BenchVariant::Ldl32
        )
    }

    /// Model flop count: (1/3)n^3 Hermitian real; (2/3)n^3 general, with a
    /// 4x multiplier for complex arithmetic.
    fn model_flops(self, n: usize) -> f64 {
        let n = n as f64;
        if self.is_hermitian() {
            n * n * n / 3.0
        } else {
            4.0 * 2.0 * n * n * n / 3.0
        }
    }
}

#[derive(Clone, Debug)]
pub struct BenchRow {
    pub variant: String,
    pub n: usize,
    pub precision: u32,
    pub seconds: f64,
    pub gflops: f64,
}

/// Well-conditioned admissible Hermitian test kernel: diagonal 1/2 with
/// small random symmetric off-diagonal perturbation (Gershgorin keeps the
/// spectrum inside (0, 1)).
fn bench_kernel_hermitian(n: usize, seed: u64) -> Matrix<f64> {
    let mut rng = RngStream::new(seed);
    let amp = 1.0 / (4.0 * n as f64);
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = 0.5;
        for j in 0..i {
            let v = rng.next_gaussian() * amp;
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

fn bench_kernel_general(n: usize, seed: u64) -> Matrix<num_complex::Complex<f64>> {
    let mut rng = RngStream::new(seed);
    let amp = 1.0 / (4.0 * n as f64);
    Matrix::from_fn(n, n, |i, j| {
        if i == j {
            num_complex::Complex::new(0.5, 0.0)
        } else {
            num_complex::Complex::new(rng.next_gaussian() * amp, rng.next_gaussian() * amp)
        }
    })
}

fn time_variant(variant: BenchVariant, n: usize, cfg: &BlockingConfig) -> Result<f64> {
    use num_complex::Complex;
    let opts = SamplerOptions::lenient();
    let start = std::time::Instant::now();
    match variant {
        BenchVariant::Hermitian64 => {
            let k = MarginalKernel::new_unchecked(bench_kernel_hermitian(n, 7), Symmetry::Hermitian);
            let mut rng = RngStream::new(1);
            sample_tiled_parallel_with(&k, &mut rng, cfg, &opts)?;
        }
        BenchVariant::Hermitian32 => {
            let k64 = bench_kernel_hermitian(n, 7);
            let k = MarginalKernel::new_unchecked(k64.map(|x| x as f32), Symmetry::Hermitian);
            let mut rng = RngStream::new(1);
            sample_tiled_parallel_with(&k, &mut rng, cfg, &opts)?;
        }
        BenchVariant::Ldl64 => {
            let mut a = bench_kernel_hermitian(n, 7);
            for j in 0..n {
                a[(j, j)] += 0.75;
            }
            factor_blocked_ldl(a, cfg, true)?;
        }
        BenchVariant::Ldl32 => {
            let mut a = bench_kernel_hermitian(n, 7);
            for j in 0..n {
                a[(j, j)] += 0.75;
            }
            factor_blocked_ldl(a.map(|x| x as f32), cfg, true)?;
        }
        BenchVariant::General64 => {
            let k = MarginalKernel::new_unchecked(bench_kernel_general(n, 7), Symmetry::General);
            let mut rng = RngStream::new(1);
            sample_tiled_parallel_with(&k, &mut rng, cfg, &opts)?;
        }
        BenchVariant::General32 => {
            let k64 = bench_kernel_general(n, 7);
            let k = MarginalKernel::new_unchecked(
                k64.map(|x| Complex::new(x.re as f32, x.im as f32)),
                Symmetry::General,
            );
            let mut rng = RngStream::new(1);
            sample_tiled_parallel_with(&k, &mut rng, cfg, &opts)?;
        }
        BenchVariant::Lu64 => {
            let mut a = bench_kernel_general(n, 7);
            for j in 0..n {
                a[(j, j)] += Complex::new(0.75, 0.0);
            }
            factor_tiled_lu(a, cfg)?;
        }
        BenchVariant::Lu32 => {
            let a64 = bench_kernel_general(n, 7);
            let mut a = a64.map(|x| Complex::new(x.re as f32, x.im as f32));
            for j in 0..n {
                a[(j, j)] += Complex::new(0.75f32, 0.0);
            }
            factor_tiled_lu(a, cfg)?;
        }
    }
    Ok(start.elapsed().as_secs_f64())
}

/// Times each (variant, n) pair `reps` times, keeping the median, and
/// reports gigaflop rates against the model flop counts. Kernel
/// construction time is included in the timing loop but is O(n^2) against
/// the O(n^3) factorization.
pub fn benchmark_suite(
    sizes: &[usize],
    variants: &[BenchVariant],
    reps: usize,
    cfg: &BlockingConfig,
) -> Result<Vec<BenchRow>> {
    let reps = reps.max(1);
    let mut rows = Vec::new();
    for &variant in variants {
        for &n in sizes {
            let mut times = Vec::with_capacity(reps);
            for _ in 0..reps {
                times.push(time_variant(variant, n, cfg)?);
            }
            times.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let seconds = times[times.len() / 2];
            rows.push(BenchRow {
                variant: variant.name().to_string(),
                n,
                precision: variant.precision(),
                seconds,
                gflops: variant.model_flops(n) / seconds / 1e9,
            });
        }
    }
    Ok(rows)
}

pub fn benchmark_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("variant,n,precision,seconds,gflops\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{:.6},{:.3}\n",
            r.variant, r.n, r.precision, r.seconds, r.gflops
        ));
    }
    out
}


#[cfg(test)]
mod bench_tests {
    use super::*;

    #[test]
    fn bench_single_row() {
        let rows = benchmark_suite(
            &[200],
            &[BenchVariant::Hermitian64],
            1,
            &BlockingConfig::with_block_size(64),
        )
        .unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].seconds > 0.0);
        assert!(rows[0].gflops > 0.0);
        let csv = benchmark_csv(&rows);
        assert!(csv.starts_with("variant,n,precision,seconds,gflops\n"));
        assert!(csv.contains("hermitian-64,200,64,"));
    }

    #[test]
    fn variant_parse_roundtrip() {
        for v in [
            BenchVariant::Hermitian64,
            BenchVariant::Ldl32,
            BenchVariant::General64,
            BenchVariant::Lu32,
        ] {
            assert_eq!(BenchVariant::parse(v.name()).unwrap(), v);
        }
        assert_eq!(
            BenchVariant::parse("hermitian64").unwrap(),
            BenchVariant::Hermitian64
        );
        assert!(BenchVariant::parse("nope").is_err());
    }
}
