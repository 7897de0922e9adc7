//! Undirected graphs whose edge sets serve as DPP ground sets, plus the
//! spanning-tree decoder and a matrix-tree reference count.

use crate::blocked::ldl_log_abs_det;
use crate::error::{DppError, Result};
use crate::matrix::Matrix;

/// Simple undirected graph. The edge order fixes the DPP ground-set
/// indexing; positions are carried along for rendering.
#[derive(Clone, Debug)]
pub struct UndirectedGraph {
    pub vertex_count: usize,
    /// (u, v) with u < v, no duplicates.
    pub edges: Vec<(usize, usize)>,
    /// Optional 2D embedding per vertex, for image output.
    pub positions: Vec<(f64, f64)>,
}

impl UndirectedGraph {
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); self.vertex_count];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    stack.push(u);
                }
            }
        }
        count == self.vertex_count
    }
}

/// width x height box of the integer lattice: width*height vertices and
/// 2wh - w - h edges, indexed row-major with the rightward edge before the
/// downward edge at each vertex.
pub fn grid_graph(width: usize, height: usize) -> UndirectedGraph {
    assert!(width >= 1 && height >= 1);
    let idx = |x: usize, y: usize| y * width + x;
    let mut edges = Vec::new();
    let mut positions = Vec::with_capacity(width * height);
    for y in 0..height {
        for x in 0..width {
            positions.push((x as f64, y as f64));
        }
    }
    for y in 0..height {
        for x in 0..width {
            if x + 1 < width {
                edges.push((idx(x, y), idx(x + 1, y)));
            }
            if y + 1 < height {
                edges.push((idx(x, y), idx(x, y + 1)));
            }
        }
    }
    UndirectedGraph {
        vertex_count: width * height,
        edges,
        positions,
    }
}

/// A d x d section of the hexagonal lattice in its brick-wall embedding: a
/// 2d x 2d vertex grid with every horizontal edge present and the vertical
/// edge between rows y and y+1 at column x present iff x + y is even.
/// Edge count 6d^2 - 3d (about 6d^2). Each face of the resulting wall is a
/// "brick", i.e. a combinatorial hexagon.
pub fn hex_graph(d: usize) -> UndirectedGraph {
    assert!(d >= 1);
    let side = 2 * d;
    let idx = |x: usize, y: usize| y * side + x;
    let mut edges = Vec::new();
    let mut positions = Vec::with_capacity(side * side);
    for y in 0..side {
        for x in 0..side {
            positions.push((x as f64, y as f64));
        }
    }
    for y in 0..side {
        for x in 0..side {
            if x + 1 < side {
                edges.push((idx(x, y), idx(x + 1, y)));
            }
            if y + 1 < side && (x + y) % 2 == 0 {
                edges.push((idx(x, y), idx(x, y + 1)));
            }
        }
    }
    UndirectedGraph {
        vertex_count: side * side,
        edges,
        positions,
    }
}

/// Validity report for a sampled edge subset interpreted as a spanning tree.
#[derive(Clone, Debug)]
pub struct TreeReport {
    pub edge_count: usize,
    pub expected_edges: usize,
    pub acyclic: bool,
    pub spanning: bool,
}

impl TreeReport {
    pub fn is_spanning_tree(&self) -> bool {
        self.acyclic && self.spanning && self.edge_count == self.expected_edges
    }
}

/// Union-find check that the selected edges form a spanning tree.
pub fn decode_spanning_tree(graph: &UndirectedGraph, sample: &[usize]) -> TreeReport {
    let n = graph.vertex_count;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    let mut acyclic = true;
    let mut components = n;
    for &e in sample {
        let (u, v) = graph.edges[e];
        let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
        if ru == rv {
            acyclic = false;
        } else {
            parent[ru] = rv;
            components -= 1;
        }
    }
    TreeReport {
        edge_count: sample.len(),
        expected_edges: n.saturating_sub(1),
        acyclic,
        spanning: components == 1,
    }
}

/// ln(#spanning trees) via the matrix-tree theorem: the log-determinant of
/// the reduced combinatorial Laplacian (vertex 0's row/column dropped).
pub fn spanning_tree_count_log(graph: &UndirectedGraph) -> Result<f64> {
    if !graph.is_connected() {
        return Err(DppError::DisconnectedGraph);
    }
    let n = graph.vertex_count;
    if n <= 1 {
        return Ok(0.0);
    }
    let mut l = Matrix::<f64>::zeros(n - 1, n - 1);
    for &(u, v) in &graph.edges {
        if u > 0 {
            l[(u - 1, u - 1)] += 1.0;
        }
        if v > 0 {
            l[(v - 1, v - 1)] += 1.0;
        }
        if u > 0 && v > 0 {
            l[(u - 1, v - 1)] -= 1.0;
            l[(v - 1, u - 1)] -= 1.0;
        }
    }
    ldl_log_abs_det(l)
}
