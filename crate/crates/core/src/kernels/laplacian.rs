//! Shifted 2D grid Laplacian marginal kernel.

use crate::error::{DppError, Result};
use crate::sparse::SparseKernel;

/// K = (sigma/8) L with L the 5-point negative Laplacian of a width x
/// height grid with Dirichlet boundary (diagonal 4, grid-neighbor
/// off-diagonals -1). Gershgorin puts the spectrum inside (0, sigma), so
/// the kernel is admissible for sigma in (0, 1].
pub fn laplacian2d_kernel(width: usize, height: usize, sigma: f64) -> Result<SparseKernel<f64>> {
    if !(sigma > 0.0 && sigma <= 1.0) {
        return Err(DppError::InvalidSigma { sigma });
    }
    if width < 2 || height < 2 {
        return Err(DppError::InvalidArgument(
            "grid dimensions must be at least 2".into(),
        ));
    }
    let idx = |x: usize, y: usize| y * width + x;
    let diag = sigma / 2.0; // 4 * sigma / 8
    let off = -sigma / 8.0;
    let mut trips = Vec::with_capacity(3 * width * height);
    for y in 0..height {
        for x in 0..width {
            trips.push((idx(x, y), idx(x, y), diag));
            if x + 1 < width {
                trips.push((idx(x + 1, y), idx(x, y), off));
            }
            if y + 1 < height {
                trips.push((idx(x, y + 1), idx(x, y), off));
            }
        }
    }
    SparseKernel::from_lower_triplets(width * height, &trips)
}
