//! Uniform-spanning-tree marginal kernel: the transfer-current projection
//! onto the cycle-free directions of edge space.

use crate::elementary::ProjectionKernel;
use crate::error::{DppError, Result};
use crate::kernel::{MarginalKernel, Symmetry};
use crate::kernels::graphs::UndirectedGraph;
use crate::matrix::Matrix;

/// Builds the projection kernel K = B^T (B B^T)^{-1} B over edges, where B
/// is the reduced signed incidence matrix (vertex 0's row dropped; edge
/// (u, v) with u < v gets +1 at u and -1 at v).
///
/// Computed by orthonormalizing the columns of B^T with modified
/// Gram-Schmidt and forming K = Q Q^T, which is numerically stabler than an
/// explicit inverse. Sampling this DPP yields uniformly random spanning
/// trees.
pub fn ust_kernel(graph: &UndirectedGraph) -> Result<ProjectionKernel<f64>> {
    if !graph.is_connected() {
        return Err(DppError::DisconnectedGraph);
    }
    let n = graph.vertex_count;
    let m = graph.edge_count();
    let r = n - 1;

    // B^T: m x (n-1)
    let mut bt = Matrix::<f64>::zeros(m, r);
    for (e, &(u, v)) in graph.edges.iter().enumerate() {
        if u > 0 {
            bt[(e, u - 1)] = 1.0;
        }
        if v > 0 {
            bt[(e, v - 1)] = -1.0;
        }
    }

    // Modified Gram-Schmidt with reorthogonalization pass.
    for j in 0..r {
        for _pass in 0..2 {
            for t in 0..j {
                let mut dot = 0.0;
                for i in 0..m {
                    dot += bt[(i, t)] * bt[(i, j)];
                }
                for i in 0..m {
                    bt[(i, j)] -= dot * bt[(i, t)];
                }
            }
        }
        let norm: f64 = (0..m).map(|i| bt[(i, j)] * bt[(i, j)]).sum::<f64>().sqrt();
        if norm < 1e-10 {
            // rank deficiency: B^T columns dependent, graph disconnected
            return Err(DppError::DisconnectedGraph);
        }
        for i in 0..m {
            bt[(i, j)] /= norm;
        }
    }

    let k = bt.matmul(&bt.transpose());
    let kernel = MarginalKernel::new_hermitian_symmetrize(k)?;
    debug_assert_eq!(kernel.symmetry(), Symmetry::Hermitian);
    ProjectionKernel::new(kernel)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elementary::sample_elementary;
    use crate::kernels::graphs::{decode_spanning_tree, grid_graph, spanning_tree_count_log};
    use crate::rng::RngStream;

    #[test]
    fn path_graph_is_its_own_tree() {
        let g = grid_graph(3, 1);
        let proj = ust_kernel(&g).unwrap();
        assert_eq!(proj.rank(), 2);
        let k = proj.kernel().matrix();
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((k[(i, j)] - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn triangle_diagonal_two_thirds() {
        let g = UndirectedGraph {
            vertex_count: 3,
            edges: vec![(0, 1), (0, 2), (1, 2)],
            positions: vec![(0.0, 0.0), (1.0, 0.0), (0.5, 1.0)],
        };
        let proj = ust_kernel(&g).unwrap();
        assert_eq!(proj.rank(), 2);
        let k = proj.kernel().matrix();
        for e in 0..3 {
            assert!((k[(e, e)] - 2.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn grid_trace_is_vertex_count_minus_one() {
        let g = grid_graph(8, 8);
        let proj = ust_kernel(&g).unwrap();
        assert_eq!(proj.rank(), 63);
        let tr: f64 = (0..g.edge_count())
            .map(|e| proj.kernel().matrix()[(e, e)])
            .sum();
        assert!((tr - 63.0).abs() < 1e-6);
    }

    #[test]
    fn samples_are_spanning_trees_with_uniform_likelihood() {
        let g = grid_graph(4, 4);
        let proj = ust_kernel(&g).unwrap();
        let expect = -spanning_tree_count_log(&g).unwrap();
        let mut rng = RngStream::new(19);
        for _ in 0..25 {
            let s = sample_elementary(&proj, &mut rng).unwrap();
            let report = decode_spanning_tree(&g, &s.indices);
            assert!(report.is_spanning_tree());
            assert!(
                (s.log_likelihood - expect).abs() < 1e-6,
                "{} vs {expect}",
                s.log_likelihood
            );
        }
    }
}
