//! Concrete marginal-kernel constructions: spanning-tree transfer-current
//! projections, Aztec-diamond domino kernels, shifted grid Laplacians,
//! random admissible test kernels, and L-ensemble conversion, together with
//! decoders that validate sampled structures.

pub mod aztec;
pub mod graphs;
pub mod laplacian;
pub mod lensemble;
pub mod random;
pub mod ust;

pub use aztec::{aztec_kernel, decode_tiling, AztecDiamond, DominoOrientation, TilingReport};
pub use graphs::{
    decode_spanning_tree, grid_graph, hex_graph, spanning_tree_count_log, TreeReport,
    UndirectedGraph,
};
pub use laplacian::laplacian2d_kernel;
pub use lensemble::marginal_from_lensemble;
pub use random::{
    random_admissible_hermitian, random_admissible_hermitian_uniform,
    random_admissible_nonhermitian,
};
pub use ust::ust_kernel;
