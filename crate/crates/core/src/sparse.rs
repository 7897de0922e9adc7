//! Sparse-direct Hermitian DPP sampling: elimination-tree symbolic analysis
//! followed by an up-looking scalar LDL^H elimination with the Bernoulli
//! pivot rule. Decisions only change diagonal values, never the factor
//! structure, so the numeric pattern must match the symbolic prediction
//! exactly.

use crate::error::{DppError, Result};
use crate::kernel::Sample;
use crate::matrix::Matrix;
use crate::rng::RngStream;
use crate::sampling::SamplerOptions;
use crate::scalar::{Real, Scalar};

/// Hermitian sparse kernel, lower triangle plus diagonal in compressed
/// sparse column layout. Row indices are strictly increasing per column and
/// the diagonal entry (real, in [0,1]) leads every column.
#[derive(Clone, Debug)]
pub struct SparseKernel<T: Scalar> {
    n: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<T>,
}

impl<T: Scalar> SparseKernel<T> {
    /// Builds a kernel from lower-triangle triplets (row >= col). Entries
    /// are sorted; duplicates, missing diagonals, and out-of-range or
    /// non-real diagonal values are rejected.
    pub fn from_lower_triplets(n: usize, entries: &[(usize, usize, T)]) -> Result<Self> {
        let mut cols: Vec<Vec<(usize, T)>> = vec![Vec::new(); n];
        for &(r, c, v) in entries {
            if r >= n || c >= n {
                return Err(DppError::MalformedSparse(format!(
                    "entry ({r}, {c}) out of range for order {n}"
                )));
            }
            if r < c {
                return Err(DppError::MalformedSparse(format!(
                    "entry ({r}, {c}) lies in the strict upper triangle"
                )));
            }
            cols[c].push((r, v));
        }
        let mut col_ptr = Vec::with_capacity(n + 1);
        let mut row_idx = Vec::new();
        let mut values = Vec::new();
        col_ptr.push(0);
        for (c, col) in cols.iter_mut().enumerate() {
            col.sort_by_key(|&(r, _)| r);
            for w in col.windows(2) {
                if w[0].0 == w[1].0 {
                    return Err(DppError::MalformedSparse(format!(
                        "duplicate entry at ({}, {c})",
                        w[0].0
                    )));
                }
            }
            if col.is_empty() || col[0].0 != c {
                return Err(DppError::MalformedSparse(format!(
                    "missing diagonal entry in column {c}"
                )));
            }
            let d = col[0].1;
            if d.im().to_f64().abs() > 1e-12 {
                return Err(DppError::MalformedSparse(format!(
                    "diagonal at {c} has imaginary part {:.3e}",
                    d.im().to_f64()
                )));
            }
            let dr = d.re().to_f64();
            if !(-1e-12..=1.0 + 1e-12).contains(&dr) {
                return Err(DppError::MalformedSparse(format!(
                    "diagonal at {c} equals {dr}, outside [0, 1]"
                )));
            }
            for &(r, v) in col.iter() {
                row_idx.push(r);
                values.push(if r == c {
                    T::from_real(<T::Real as Real>::of_f64(dr.clamp(0.0, 1.0)))
                } else {
                    v
                });
            }
            col_ptr.push(row_idx.len());
        }
        Ok(SparseKernel {
            n,
            col_ptr,
            row_idx,
            values,
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn nnz_lower(&self) -> usize {
        self.row_idx.len()
    }

    pub fn col_range(&self, c: usize) -> (&[usize], &[T]) {
        let (lo, hi) = (self.col_ptr[c], self.col_ptr[c + 1]);
        (&self.row_idx[lo..hi], &self.values[lo..hi])
    }

    /// Densifies to a full Hermitian matrix (tests and small problems).
    pub fn to_dense(&self) -> Matrix<T> {
        let mut m = Matrix::zeros(self.n, self.n);
        for c in 0..self.n {
            let (rows, vals) = self.col_range(c);
            for (&r, &v) in rows.iter().zip(vals) {
                m[(r, c)] = v;
                if r != c {
                    m[(c, r)] = v.conj();
                }
            }
        }
        m
    }

    /// Symmetric permutation: index `i` of the result is index `perm[i]` of
    /// `self`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n;
        validate_permutation(n, perm)?;
        let mut newpos = vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            newpos[old] = new;
        }
        let mut trips = Vec::with_capacity(self.nnz_lower());
        for c in 0..n {
            let (rows, vals) = self.col_range(c);
            for (&r, &v) in rows.iter().zip(vals) {
                let (a, b) = (newpos[r], newpos[c]);
                if a >= b {
                    trips.push((a, b, v));
                } else {
                    trips.push((b, a, v.conj()));
                }
            }
        }
        SparseKernel::from_lower_triplets(n, &trips)
    }

    /// Upper-triangle CSC view (column j holds conjugated entries of row j
    /// of the lower triangle, i.e. indices i <= j): the access pattern the
    /// up-looking elimination needs.
    fn upper_csc(&self) -> (Vec<usize>, Vec<usize>, Vec<T>) {
        let n = self.n;
        let mut counts = vec![0usize; n + 1];
        for &r in &self.row_idx {
            counts[r + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let mut ptr = counts.clone();
        let mut rows = vec![0usize; self.nnz_lower()];
        let mut vals = vec![T::zero(); self.nnz_lower()];
        for c in 0..n {
            let (rr, vv) = self.col_range(c);
            for (&r, &v) in rr.iter().zip(vv) {
                let slot = ptr[r];
                ptr[r] += 1;
                rows[slot] = c;
                vals[slot] = v.conj();
            }
        }
        (counts, rows, vals)
    }
}

fn validate_permutation(n: usize, perm: &[usize]) -> Result<()> {
    if perm.len() != n {
        return Err(DppError::InvalidArgument(format!(
            "permutation length {} does not match order {n}",
            perm.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(DppError::InvalidArgument(
                "not a bijection on the index set".into(),
            ));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Elimination tree plus exact factor column counts for a (possibly
/// permuted) sparse Hermitian kernel.
#[derive(Clone, Debug)]
pub struct EliminationTree {
    /// parent(j) > j, or None for roots.
    pub parent: Vec<Option<usize>>,
    /// A topological order of the forest (children before parents).
    pub postorder: Vec<usize>,
    /// Nonzeros per factor column, diagonal included.
    pub column_counts: Vec<usize>,
    /// Modeled multiply-add count of the numeric factorization.
    pub flops: u64,
    /// The permutation the analysis was performed under (new -> old).
    pub perm: Option<Vec<usize>>,
}

impl EliminationTree {
    pub fn factor_nnz(&self) -> usize {
        self.column_counts.iter().sum()
    }
}

/// Symbolic phase: elimination tree, factor column counts, and a flop
/// model for the permuted kernel.
pub fn symbolic_analyze<T: Scalar>(
    kernel: &SparseKernel<T>,
    perm: Option<&[usize]>,
) -> Result<EliminationTree> {
    let permuted;
    let k = match perm {
        Some(p) => {
            permuted = kernel.permute(p)?;
            &permuted
        }
        None => kernel,
    };
    let n = k.order();
    let (uptr, urow, _uval) = k.upper_csc();

    // Liu's algorithm with path compression.
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut ancestor: Vec<Option<usize>> = vec![None; n];
    for j in 0..n {
        for p in uptr[j]..uptr[j + 1] {
            let mut i = urow[p];
            while i < j {
                let next = ancestor[i];
                ancestor[i] = Some(j);
                match next {
                    None => {
                        parent[i] = Some(j);
                        i = j;
                    }
                    Some(a) => i = a,
                }
            }
        }
    }

    // Row-pattern traversal gives exact column counts.
    let mut column_counts = vec![1usize; n]; // diagonal
    let mut mark = vec![usize::MAX; n];
    for j in 0..n {
        mark[j] = j;
        for p in uptr[j]..uptr[j + 1] {
            let mut i = urow[p];
            while i < j && mark[i] != j {
                mark[i] = j;
                column_counts[i] += 1;
                i = parent[i].unwrap_or(j);
            }
        }
    }

    let mut flops = 0u64;
    for &c in &column_counts {
        let s = (c - 1) as u64; // strictly-below-diagonal entries
        flops += s * (s + 2);
    }

    // Postorder by DFS over the children lists.
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut roots = Vec::new();
    for j in 0..n {
        match parent[j] {
            Some(p) => children[p].push(j),
            None => roots.push(j),
        }
    }
    let mut postorder = Vec::with_capacity(n);
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for &r in &roots {
        stack.push((r, 0));
        while let Some(&mut (node, ref mut ci)) = stack.last_mut() {
            if *ci < children[node].len() {
                let child = children[node][*ci];
                *ci += 1;
                stack.push((child, 0));
            } else {
                postorder.push(node);
                stack.pop();
            }
        }
    }

    Ok(EliminationTree {
        parent,
        postorder,
        column_counts,
        flops,
        perm: perm.map(|p| p.to_vec()),
    })
}

/// Unit-lower-triangular sparse factor with real diagonal, in the permuted
/// index space.
#[derive(Clone, Debug)]
pub struct SparseFactor<T: Scalar> {
    pub col_ptr: Vec<usize>,
    pub row_idx: Vec<usize>,
    pub values: Vec<T>,
    /// Final diagonal of D: the kept/excluded pivot values.
    pub diag: Vec<f64>,
}

enum SparsePivotRule<'a> {
    Bernoulli(&'a mut RngStream),
    MapGreedy,
}

fn sample_sparse_inner<T: Scalar>(
    kernel: &SparseKernel<T>,
    tree: &EliminationTree,
    mut rule: SparsePivotRule<'_>,
    opts: &SamplerOptions,
) -> Result<(Sample, SparseFactor<T>)> {
    let permuted;
    let k = match &tree.perm {
        Some(p) => {
            permuted = kernel.permute(p)?;
            &permuted
        }
        None => kernel,
    };
    let n = k.order();
    if tree.parent.len() != n {
        return Err(DppError::InvalidArgument(
            "elimination tree order does not match kernel".into(),
        ));
    }
    let (uptr, urow, uval) = k.upper_csc();

    // Factor storage preallocated from the symbolic counts (diagonal kept
    // separately, columns hold strictly-below entries).
    let mut col_ptr = vec![0usize; n + 1];
    for j in 0..n {
        col_ptr[j + 1] = col_ptr[j] + (tree.column_counts[j] - 1);
    }
    let nnz = col_ptr[n];
    let mut row_idx = vec![0usize; nnz];
    let mut values = vec![T::zero(); nnz];
    let mut col_len = vec![0usize; n];

    let mut diag = vec![0.0f64; n];
    let mut y = vec![T::zero(); n];
    let mut pattern = Vec::with_capacity(n);
    let mut mark = vec![usize::MAX; n];

    let mut pivots = Vec::with_capacity(n);
    let mut decisions = Vec::with_capacity(n);
    let mut log_likelihood = 0.0;

    for j in 0..n {
        // Row pattern: climb the elimination tree from each structural
        // entry of row j, collecting indices < j, then sort ascending.
        pattern.clear();
        mark[j] = j;
        let mut djj = 0.0f64;
        for p in uptr[j]..uptr[j + 1] {
            let i = urow[p];
            if i == j {
                djj = uval[p].re().to_f64();
                continue;
            }
            y[i] = uval[p];
            let mut t = i;
            while t < j && mark[t] != j {
                mark[t] = j;
                pattern.push(t);
                t = tree.parent[t].unwrap_or(j);
            }
        }
        pattern.sort_unstable();

        // Up-looking forward solve: x = (L_row_j D)^H over the pattern.
        let mut dj = djj;
        for idx in 0..pattern.len() {
            let i = pattern[idx];
            let xi = y[i];
            y[i] = T::zero();
            for p in col_ptr[i]..col_ptr[i] + col_len[i] {
                let r = row_idx[p];
                if r >= j {
                    break;
                }
                // rows in a column arrive in increasing order; entries at
                // rows >= j belong to later pivots and are not present yet.
                y[r] -= values[p] * xi;
            }
            let di = diag[i];
            let lji = xi.conj() / T::from_real(<T::Real as Real>::of_f64(di));
            dj -= (xi * xi.conj()).re().to_f64() / di;
            // Append L[j, i] to column i; the symbolic count bounds the fill.
            let slot = col_ptr[i] + col_len[i];
            if slot >= col_ptr[i + 1] {
                return Err(DppError::StructureMismatch { row: j, col: i });
            }
            row_idx[slot] = j;
            values[slot] = lji;
            col_len[i] += 1;
        }

        // Bernoulli (or greedy) pivot decision on the Schur diagonal.
        if opts.check_pivots {
            let lo = -opts.pivot_tol;
            let hi = 1.0 + opts.pivot_tol;
            if !(lo..=hi).contains(&dj) {
                return Err(DppError::PivotOutOfRange {
                    index: j,
                    value: dj,
                });
            }
        }
        let p = dj.clamp(0.0, 1.0);
        let keep = match &mut rule {
            SparsePivotRule::Bernoulli(rng) => rng.next_uniform() < p,
            SparsePivotRule::MapGreedy => p >= 0.5,
        };
        pivots.push(p);
        decisions.push(keep);
        if !keep {
            dj -= 1.0;
        }
        log_likelihood += dj.abs().ln();
        if dj == 0.0 {
            return Err(DppError::ZeroPivot { index: j });
        }
        diag[j] = dj;
    }

    for j in 0..n {
        if col_len[j] != tree.column_counts[j] - 1 {
            return Err(DppError::StructureMismatch { row: j, col: j });
        }
    }

    // Map kept pivots back to original labels.
    let mut kept: Vec<usize> = decisions
        .iter()
        .enumerate()
        .filter(|(_, &d)| d)
        .map(|(j, _)| match &tree.perm {
            Some(p) => p[j],
            None => j,
        })
        .collect();
    kept.sort_unstable();

    Ok((
        Sample {
            kept,
            log_likelihood,
            pivots,
            decisions,
        },
        SparseFactor {
            col_ptr,
            row_idx,
            values,
            diag,
        },
    ))
}

/// Samples DPP(K) from a sparse Hermitian kernel with the up-looking scalar
/// elimination. `tree` must come from [`symbolic_analyze`] on the same
/// kernel and permutation.
pub fn sample_sparse_hermitian<T: Scalar>(
    kernel: &SparseKernel<T>,
    tree: &EliminationTree,
    rng: &mut RngStream,
) -> Result<(Sample, SparseFactor<T>)> {
    sample_sparse_hermitian_with(kernel, tree, rng, &SamplerOptions::default())
}

pub fn sample_sparse_hermitian_with<T: Scalar>(
    kernel: &SparseKernel<T>,
    tree: &EliminationTree,
    rng: &mut RngStream,
    opts: &SamplerOptions,
) -> Result<(Sample, SparseFactor<T>)> {
    sample_sparse_inner(kernel, tree, SparsePivotRule::Bernoulli(rng), opts)
}

/// Deterministic greedy maximum-likelihood inference on a sparse kernel.
pub fn greedy_map_sparse<T: Scalar>(
    kernel: &SparseKernel<T>,
    tree: &EliminationTree,
) -> Result<(Sample, SparseFactor<T>)> {
    sample_sparse_inner(
        kernel,
        tree,
        SparsePivotRule::MapGreedy,
        &SamplerOptions::default(),
    )
}

/// Reverse Cuthill-McKee bandwidth-reducing ordering of the kernel's
/// symmetric pattern, as a permutation usable with [`symbolic_analyze`].
pub fn rcm_ordering<T: Scalar>(kernel: &SparseKernel<T>) -> Vec<usize> {
    let n = kernel.order();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for c in 0..n {
        let (rows, _) = kernel.col_range(c);
        for &r in rows {
            if r != c {
                adj[r].push(c);
                adj[c].push(r);
            }
        }
    }
    for a in &mut adj {
        a.sort_unstable();
        a.dedup();
    }
    let degree: Vec<usize> = adj.iter().map(|a| a.len()).collect();

    let mut order = Vec::with_capacity(n);
    let mut visited = vec![false; n];
    loop {
        // Lowest-degree unvisited vertex starts the next component.
        let start = match (0..n)
            .filter(|&v| !visited[v])
            .min_by_key(|&v| (degree[v], v))
        {
            Some(v) => v,
            None => break,
        };
        visited[start] = true;
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut nbrs: Vec<usize> = adj[v].iter().copied().filter(|&u| !visited[u]).collect();
            nbrs.sort_by_key(|&u| (degree[u], u));
            for u in nbrs {
                visited[u] = true;
                queue.push_back(u);
            }
        }
    }
    order.reverse();
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{MarginalKernel, Symmetry};
    use crate::oracle::{chi_square_compare, enumerate_probabilities};
    use crate::sampling::{log_likelihood_of, sample_hermitian_unblocked};

    fn tridiag(n: usize, d: f64, off: f64) -> SparseKernel<f64> {
        let mut t = Vec::new();
        for j in 0..n {
            t.push((j, j, d));
            if j + 1 < n {
                t.push((j + 1, j, off));
            }
        }
        SparseKernel::from_lower_triplets(n, &t).unwrap()
    }

    #[test]
    fn tridiagonal_symbolic_chain() {
        let k = tridiag(4, 0.5, 0.1);
        let tree = symbolic_analyze(&k, None).unwrap();
        assert_eq!(
            tree.parent,
            vec![Some(1), Some(2), Some(3), None]
        );
        assert_eq!(tree.column_counts, vec![2, 2, 2, 1]);
        assert_eq!(tree.factor_nnz(), 7);
    }

    #[test]
    fn arrow_matrix_no_fill() {
        // Dense last row/column: parent(j) = 3 directly for j < 3, and the
        // factor fills nothing beyond the input pattern.
        let mut t = vec![(0, 0, 0.5), (1, 1, 0.5), (2, 2, 0.5), (3, 3, 0.5)];
        for j in 0..3 {
            t.push((3, j, 0.05));
        }
        let k = SparseKernel::from_lower_triplets(4, &t).unwrap();
        let tree = symbolic_analyze(&k, None).unwrap();
        assert_eq!(tree.parent, vec![Some(3), Some(3), Some(3), None]);
        assert_eq!(tree.factor_nnz(), k.nnz_lower());
    }

    #[test]
    fn grid_counts_match_dense_symbolic_oracle() {
        // 5x5 grid Laplacian pattern, natural order: simulate dense
        // elimination of the same pattern and compare column counts.
        let (w, h) = (5usize, 5usize);
        let n = w * h;
        let idx = |x: usize, y: usize| y * w + x;
        let mut t = Vec::new();
        for y in 0..h {
            for x in 0..w {
                t.push((idx(x, y), idx(x, y), 0.5));
                if x + 1 < w {
                    t.push((idx(x + 1, y), idx(x, y), -0.09));
                }
                if y + 1 < h {
                    t.push((idx(x, y + 1), idx(x, y), -0.09));
                }
            }
        }
        let k = SparseKernel::from_lower_triplets(n, &t).unwrap();
        let tree = symbolic_analyze(&k, None).unwrap();

        // structural dense elimination
        let mut pat = vec![[false; 25]; 25];
        for &(r, c, _) in &t {
            pat[r][c] = true;
            pat[c][r] = true;
        }
        for j in 0..n {
            for r in j + 1..n {
                if pat[r][j] {
                    for c in j + 1..n {
                        if pat[c][j] {
                            pat[r][c] = true;
                        }
                    }
                }
            }
        }
        for j in 0..n {
            let count = 1 + (j + 1..n).filter(|&r| pat[r][j]).count();
            assert_eq!(tree.column_counts[j], count, "column {j}");
        }
    }

    #[test]
    fn diagonal_kernel_independent_bernoullis() {
        let t: Vec<(usize, usize, f64)> = (0..10).map(|j| (j, j, 0.5)).collect();
        let k = SparseKernel::from_lower_triplets(10, &t).unwrap();
        let tree = symbolic_analyze(&k, None).unwrap();
        let mut rng = RngStream::new(21);
        let mut hits = vec![0usize; 10];
        let trials = 20_000;
        for _ in 0..trials {
            let (s, _) = sample_sparse_hermitian(&k, &tree, &mut rng).unwrap();
            for &i in &s.kept {
                hits[i] += 1;
            }
        }
        for (i, &h) in hits.iter().enumerate() {
            let f = h as f64 / trials as f64;
            assert!((f - 0.5).abs() < 0.02, "index {i}: {f}");
        }
    }

    #[test]
    fn tridiagonal_matches_dense_sampler() {
        let k = tridiag(3, 0.5, 0.2);
        let dense = MarginalKernel::new(k.to_dense(), Symmetry::Hermitian).unwrap();
        let dist = enumerate_probabilities(&dense.to_c64()).unwrap();
        let tree = symbolic_analyze(&k, None).unwrap();
        let mut rng = RngStream::new(5);
        let report = chi_square_compare(
            || {
                let (s, _) = sample_sparse_hermitian(&k, &tree, &mut rng).unwrap();
                s.kept_bitmask()
            },
            &dist,
            200_000,
            0.001,
        );
        assert!(report.pass, "{report}");
        // and the dense sampler agrees with the same enumeration
        let mut rng2 = RngStream::new(6);
        let report2 = chi_square_compare(
            || {
                let (s, _) = sample_hermitian_unblocked(&dense, &mut rng2).unwrap();
                s.kept_bitmask()
            },
            &dist,
            200_000,
            0.001,
        );
        assert!(report2.pass, "{report2}");
    }

    #[test]
    fn permutation_leaves_distribution_invariant() {
        let k = tridiag(4, 0.5, 0.15);
        let dense = MarginalKernel::new(k.to_dense(), Symmetry::Hermitian).unwrap();
        let dist = enumerate_probabilities(&dense.to_c64()).unwrap();
        let perm = vec![2usize, 0, 3, 1];
        let tree = symbolic_analyze(&k, Some(&perm)).unwrap();
        let mut rng = RngStream::new(33);
        let report = chi_square_compare(
            || {
                let (s, _) = sample_sparse_hermitian(&k, &tree, &mut rng).unwrap();
                s.kept_bitmask()
            },
            &dist,
            100_000,
            0.001,
        );
        assert!(report.pass, "{report}");
    }

    #[test]
    fn log_likelihood_matches_dense_replay() {
        let k = tridiag(12, 0.5, 0.12);
        let dense = MarginalKernel::new(k.to_dense(), Symmetry::Hermitian).unwrap();
        let tree = symbolic_analyze(&k, None).unwrap();
        let mut rng = RngStream::new(8);
        for _ in 0..50 {
            let (s, _) = sample_sparse_hermitian(&k, &tree, &mut rng).unwrap();
            let expect = log_likelihood_of(&dense, &s.kept);
            let rel = (s.log_likelihood - expect).abs() / expect.abs().max(1.0);
            assert!(rel < 1e-9, "{} vs {expect}", s.log_likelihood);
        }
    }

    #[test]
    fn structure_identical_across_seeds() {
        let k = tridiag(20, 0.5, 0.1);
        let tree = symbolic_analyze(&k, None).unwrap();
        let run = |seed| {
            let mut rng = RngStream::new(seed);
            let (_, f) = sample_sparse_hermitian(&k, &tree, &mut rng).unwrap();
            (f.col_ptr, f.row_idx)
        };
        assert_eq!(run(1), run(2));
    }

    #[test]
    fn map_is_deterministic_and_matches_dense() {
        let k = tridiag(6, 0.7, 0.1);
        let dense = MarginalKernel::new(k.to_dense(), Symmetry::Hermitian).unwrap();
        let tree = symbolic_analyze(&k, None).unwrap();
        let (s1, _) = greedy_map_sparse(&k, &tree).unwrap();
        let (s2, _) = greedy_map_sparse(&k, &tree).unwrap();
        assert_eq!(s1.kept, s2.kept);
        let (sd, _) = crate::sampling::greedy_map(&dense).unwrap();
        assert_eq!(s1.kept, sd.kept);
        assert!((s1.log_likelihood - sd.log_likelihood).abs() < 1e-10);
    }

    #[test]
    fn rcm_is_a_permutation_and_reduces_arrow_fill() {
        // Arrow pointing at the FIRST pivot fills in completely under the
        // natural order; RCM pushes the hub last and removes the fill.
        let n = 8;
        let mut t = vec![(0usize, 0usize, 0.5)];
        for j in 1..n {
            t.push((j, j, 0.5));
            t.push((j, 0, 0.05));
        }
        let k = SparseKernel::from_lower_triplets(n, &t).unwrap();
        let natural = symbolic_analyze(&k, None).unwrap();
        let perm = rcm_ordering(&k);
        let mut sorted = perm.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..n).collect::<Vec<_>>());
        let reordered = symbolic_analyze(&k, Some(&perm)).unwrap();
        assert!(reordered.factor_nnz() < natural.factor_nnz());
        assert_eq!(reordered.factor_nnz(), k.nnz_lower());
    }

    #[test]
    fn malformed_inputs_rejected() {
        assert!(SparseKernel::from_lower_triplets(2, &[(0, 0, 0.5)]).is_err()); // missing diag
        assert!(
            SparseKernel::from_lower_triplets(2, &[(0, 0, 0.5), (1, 1, 0.5), (0, 1, 0.1)])
                .is_err()
        ); // upper entry
        assert!(
            SparseKernel::from_lower_triplets(2, &[(0, 0, 1.5), (1, 1, 0.5)]).is_err()
        ); // diagonal out of range
        assert!(SparseKernel::from_lower_triplets(
            2,
            &[(0, 0, 0.5), (1, 1, 0.5), (1, 0, 0.1), (1, 0, 0.1)]
        )
        .is_err()); // duplicate
    }
}
