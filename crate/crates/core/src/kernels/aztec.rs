//! Aztec-diamond domino kernel: a complex non-Hermitian marginal kernel
//! over domino positions whose DPP is the uniform distribution on domino
//! tilings, built from the entries and inverse of a Kasteleyn matrix.

use num_complex::Complex;

use crate::error::{DppError, Result};
use crate::kernel::{MarginalKernel, Symmetry};
use crate::matrix::Matrix;

type C64 = Complex<f64>;

/// The order-d Aztec diamond: the unit squares [i, i+1] x [j, j+1] with
/// |i + 1/2| + |j + 1/2| <= d, checkerboard-colored. Dominoes (the DPP
/// ground set) are the adjacent black-white square pairs.
#[derive(Clone, Debug)]
pub struct AztecDiamond {
    pub order: usize,
    /// Lower-left integer corners of the black squares.
    pub black: Vec<(i64, i64)>,
    /// Lower-left integer corners of the white squares.
    pub white: Vec<(i64, i64)>,
    /// Ground set: (white index, black index, horizontal?) per domino slot.
    pub edges: Vec<(usize, usize, bool)>,
}

impl AztecDiamond {
    pub fn new(d: usize) -> Self {
        let di = d as i64;
        let mut black = Vec::new();
        let mut white = Vec::new();
        let inside = |i: i64, j: i64| {
            (i as f64 + 0.5).abs() + (j as f64 + 0.5).abs() <= d as f64
        };
        for j in -di..di {
            for i in -di..di {
                if !inside(i, j) {
                    continue;
                }
                // checkerboard color; the offset keeps parity well-defined
                // for negative coordinates
                if (i + j).rem_euclid(2) == 0 {
                    black.push((i, j));
                } else {
                    white.push((i, j));
                }
            }
        }
        let pos = |list: &[(i64, i64)], p: (i64, i64)| list.iter().position(|&q| q == p);
        let mut edges = Vec::new();
        // Enumerate dominoes from each white square: right, left, up, down
        // neighbors that are black and inside the region.
        for (w, &(i, j)) in white.iter().enumerate() {
            for (dx, dy, horizontal) in [(1, 0, true), (-1, 0, true), (0, 1, false), (0, -1, false)]
            {
                let q = (i + dx, j + dy);
                if !inside(q.0, q.1) {
                    continue;
                }
                if let Some(b) = pos(&black, q) {
                    edges.push((w, b, horizontal));
                }
            }
        }
        edges.sort();
        AztecDiamond {
            order: d,
            black,
            white,
            edges,
        }
    }

    pub fn squares_per_color(&self) -> usize {
        self.black.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Kasteleyn matrix: rows = white squares, columns = black squares;
    /// weight 1 for horizontal adjacency, i for vertical.
    pub fn kasteleyn(&self) -> Matrix<C64> {
        let m = self.white.len();
        let mut k = Matrix::zeros(m, m);
        for &(w, b, horizontal) in &self.edges {
            k[(w, b)] = if horizontal {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 1.0)
            };
        }
        k
    }
}

/// Dense inverse with partial pivoting (Gauss-Jordan).
fn invert_c64(a: &Matrix<C64>) -> Result<Matrix<C64>> {
    let n = a.rows();
    let mut m = a.clone();
    let mut inv: Matrix<C64> = Matrix::identity(n);
    for j in 0..n {
        let (mut piv, mut best) = (j, m[(j, j)].norm());
        for r in j + 1..n {
            let v = m[(r, j)].norm();
            if v > best {
                piv = r;
                best = v;
            }
        }
        if best < 1e-300 {
            return Err(DppError::SingularKasteleyn);
        }
        if piv != j {
            for c in 0..n {
                let t = m[(j, c)];
                m[(j, c)] = m[(piv, c)];
                m[(piv, c)] = t;
                let t = inv[(j, c)];
                inv[(j, c)] = inv[(piv, c)];
                inv[(piv, c)] = t;
            }
        }
        let d = m[(j, j)];
        for c in 0..n {
            m[(j, c)] /= d;
            inv[(j, c)] /= d;
        }
        for r in 0..n {
            if r == j {
                continue;
            }
            let f = m[(r, j)];
            if f == C64::new(0.0, 0.0) {
                continue;
            }
            for c in 0..n {
                let mj = m[(j, c)];
                let ij = inv[(j, c)];
                m[(r, c)] -= f * mj;
                inv[(r, c)] -= f * ij;
            }
        }
    }
    Ok(inv)
}

/// Builds the complex non-Hermitian marginal kernel over the d-order Aztec
/// diamond's domino slots: for slots e = (w_e, b_e) and f = (w_f, b_f),
/// C[e][f] = M[w_e][b_e] * M^{-1}[b_f][w_e]. Principal minors give the
/// inclusion probabilities of domino subsets; the diagonal is validated to
/// be real in [0, 1] within 1e-10.
pub fn aztec_kernel(diamond: &AztecDiamond) -> Result<MarginalKernel<C64>> {
    let m = diamond.kasteleyn();
    let minv = invert_c64(&m)?;
    let ne = diamond.edge_count();
    let mut c = Matrix::zeros(ne, ne);
    for (e, &(we, be, _)) in diamond.edges.iter().enumerate() {
        let mwb = m[(we, be)];
        for (f, &(_, bf, _)) in diamond.edges.iter().enumerate() {
            c[(e, f)] = mwb * minv[(bf, we)];
        }
    }
    for e in 0..ne {
        let d = c[(e, e)];
        if d.im.abs() > 1e-10 || !(-1e-10..=1.0 + 1e-10).contains(&d.re) {
            return Err(DppError::InvalidKernel(format!(
                "domino-slot diagonal {e} = {d} is not a probability"
            )));
        }
        c[(e, e)] = C64::new(d.re.clamp(0.0, 1.0), 0.0);
    }
    MarginalKernel::new(c, Symmetry::General)
}

/// Per-domino orientation classes used for rendering, following the
/// black-to-white direction: a horizontal domino is Left when its white
/// square sits left of its black square, and a vertical domino Down when
/// the white square sits below.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DominoOrientation {
    Left,
    Right,
    Up,
    Down,
}

#[derive(Clone, Debug)]
pub struct TilingReport {
    pub valid: bool,
    pub uncovered: usize,
    pub doubly_covered: usize,
    /// (white corner, black corner, orientation) per selected domino.
    pub dominoes: Vec<((i64, i64), (i64, i64), DominoOrientation)>,
}

/// Checks that the selected domino slots tile the diamond (every square
/// covered exactly once) and classifies each domino's orientation.
pub fn decode_tiling(diamond: &AztecDiamond, sample: &[usize]) -> TilingReport {
    let nsq = 2 * diamond.squares_per_color();
    let mut cover = vec![0usize; nsq];
    let mut dominoes = Vec::with_capacity(sample.len());
    for &e in sample {
        let (w, b, horizontal) = diamond.edges[e];
        cover[w] += 1;
        cover[diamond.white.len() + b] += 1;
        let wp = diamond.white[w];
        let bp = diamond.black[b];
        let orientation = if horizontal {
            if wp.0 < bp.0 {
                DominoOrientation::Left
            } else {
                DominoOrientation::Right
            }
        } else if wp.1 < bp.1 {
            DominoOrientation::Down
        } else {
            DominoOrientation::Up
        };
        dominoes.push((wp, bp, orientation));
    }
    let uncovered = cover.iter().filter(|&&c| c == 0).count();
    let doubly_covered = cover.iter().filter(|&&c| c > 1).count();
    TilingReport {
        valid: uncovered == 0 && doubly_covered == 0,
        uncovered,
        doubly_covered,
        dominoes,
    }
}
