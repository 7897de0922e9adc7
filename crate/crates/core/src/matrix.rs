//! Dense row-major matrix storage shared by all dense routines.

use std::ops::{Index, IndexMut};

use num_complex::Complex;

use crate::scalar::{Real, Scalar};

/// Dense matrix, row-major, column stride 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for j in 0..n {
            m[(j, j)] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds from row-major nested slices; all rows must share a length.
    pub fn from_rows(rows: &[&[T]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend_from_slice(row);
        }
        Matrix {
            rows: r,
            cols: c,
            data,
        }
    }

    #[inline(always)]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline(always)]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline(always)]
    pub fn data(&self) -> &[T] {
        &self.data
    }

    #[inline(always)]
    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    /// Applies the symmetric permutation swapping indices `i` and `j`:
    /// rows i,j and columns i,j are exchanged.
    pub fn swap_symmetric(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    #[inline(always)]
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline(always)]
    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj_transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn to_c64(&self) -> Matrix<Complex<f64>> {
        self.map(|x| x.to_c64())
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> T::Real {
        let mut m = <T::Real as num_traits::Zero>::zero();
        for &x in &self.data {
            let a = x.abs();
            if a > m {
                m = a;
            }
        }
        m
    }

    /// Frobenius norm, accumulated in f64.
    pub fn frobenius(&self) -> f64 {
        self.data
            .iter()
            .map(|x| {
                let a = x.abs().to_f64();
                a * a
            })
            .sum::<f64>()
            .sqrt()
    }

    /// self * other via GEMM.
    pub fn matmul(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, other.rows);
        let mut c = Matrix::zeros(self.rows, other.cols);
        let (m, k, n) = (self.rows, self.cols, other.cols);
        if m == 0 || k == 0 || n == 0 {
            return c;
        }
        unsafe {
            T::gemm(
                m,
                k,
                n,
                T::one(),
                self.data.as_ptr(),
                k as isize,
                1,
                other.data.as_ptr(),
                n as isize,
                1,
                T::zero(),
                c.data.as_mut_ptr(),
                n as isize,
                1,
            );
        }
        c
    }

    pub fn sub(&self, other: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&other.data) {
            *x -= *y;
        }
        out
    }

    /// Mutable view of the whole matrix.
    pub fn as_mut_view(&mut self) -> MatMut<'_, T> {
        let stride = self.cols;
        MatMut {
            ptr: self.data.as_mut_ptr(),
            rows: self.rows,
            cols: self.cols,
            row_stride: stride,
            _marker: std::marker::PhantomData,
        }
    }
}

impl<T: Scalar> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    #[inline(always)]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T: Scalar> IndexMut<(usize, usize)> for Matrix<T> {
    #[inline(always)]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Raw mutable submatrix view with row stride; column stride is 1.
///
/// Used by the blocked/tiled elimination engine, where disjoint tiles of one
/// backing matrix are updated concurrently.
pub struct MatMut<'a, T> {
    ptr: *mut T,
    rows: usize,
    cols: usize,
    row_stride: usize,
    _marker: std::marker::PhantomData<&'a mut T>,
}

unsafe impl<T: Send> Send for MatMut<'_, T> {}

impl<'a, T: Scalar> MatMut<'a, T> {
    /// # Safety
    /// The region `[0, rows) x [0, cols)` under `row_stride` must be valid
    /// and exclusively borrowed.
    pub unsafe fn from_raw(ptr: *mut T, rows: usize, cols: usize, row_stride: usize) -> Self {
        MatMut {
            ptr,
            rows,
            cols,
            row_stride,
            _marker: std::marker::PhantomData,
        }
    }

    #[inline(always)]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline(always)]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline(always)]
    pub fn row_stride(&self) -> usize {
        self.row_stride
    }

    #[inline(always)]
    pub fn as_ptr(&self) -> *const T {
        self.ptr
    }

    #[inline(always)]
    pub fn as_mut_ptr(&mut self) -> *mut T {
        self.ptr
    }

    #[inline(always)]
    pub fn get(&self, i: usize, j: usize) -> T {
        debug_assert!(i < self.rows && j < self.cols);
        unsafe { *self.ptr.add(i * self.row_stride + j) }
    }

    #[inline(always)]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        debug_assert!(i < self.rows && j < self.cols);
        unsafe { *self.ptr.add(i * self.row_stride + j) = v }
    }

    #[inline(always)]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        unsafe { &mut *self.ptr.add(i * self.row_stride + j) }
    }

    /// Contiguous slice of row `i`, columns `[j0, j1)`.
    #[inline(always)]
    pub fn row_slice_mut(&mut self, i: usize, j0: usize, j1: usize) -> &mut [T] {
        debug_assert!(i < self.rows && j0 <= j1 && j1 <= self.cols);
        unsafe { std::slice::from_raw_parts_mut(self.ptr.add(i * self.row_stride + j0), j1 - j0) }
    }

    #[inline(always)]
    pub fn row_slice(&self, i: usize, j0: usize, j1: usize) -> &[T] {
        debug_assert!(i < self.rows && j0 <= j1 && j1 <= self.cols);
        unsafe { std::slice::from_raw_parts(self.ptr.add(i * self.row_stride + j0), j1 - j0) }
    }

    /// Subview with top-left corner `(i, j)` and dimensions `rows x cols`.
    pub fn submatrix(&mut self, i: usize, j: usize, rows: usize, cols: usize) -> MatMut<'_, T> {
        assert!(i + rows <= self.rows && j + cols <= self.cols);
        MatMut {
            ptr: unsafe { self.ptr.add(i * self.row_stride + j) },
            rows,
            cols,
            row_stride: self.row_stride,
            _marker: std::marker::PhantomData,
        }
    }
}

/// Shareable raw pointer to a matrix used to hand disjoint tiles to rayon
/// tasks. Callers guarantee disjointness of the written regions.
#[derive(Clone, Copy)]
pub(crate) struct SyncPtr<T>(pub *mut T);

impl<T> SyncPtr<T> {
    /// Accessor used inside parallel closures so the Send+Sync wrapper is
    /// captured rather than the bare pointer field.
    pub(crate) fn get(&self) -> *mut T {
        self.0
    }
}

unsafe impl<T> Send for SyncPtr<T> {}
unsafe impl<T> Sync for SyncPtr<T> {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matmul_small() {
        let a = Matrix::from_rows(&[&[1.0f64, 2.0], &[3.0, 4.0]]);
        let b = Matrix::from_rows(&[&[5.0f64, 6.0], &[7.0, 8.0]]);
        let c = a.matmul(&b);
        assert_eq!(c[(0, 0)], 19.0);
        assert_eq!(c[(0, 1)], 22.0);
        assert_eq!(c[(1, 0)], 43.0);
        assert_eq!(c[(1, 1)], 50.0);
    }

    #[test]
    fn complex_matmul() {
        use num_complex::Complex;
        let i = Complex::new(0.0f64, 1.0);
        let one = Complex::new(1.0f64, 0.0);
        let a = Matrix::from_rows(&[&[one, i], &[i, one]]);
        let b = a.matmul(&a);
        // [[1,i],[i,1]]^2 = [[0, 2i],[2i, 0]]
        assert!((b[(0, 0)] - Complex::new(0.0, 0.0)).norm() < 1e-14);
        assert!((b[(0, 1)] - Complex::new(0.0, 2.0)).norm() < 1e-14);
    }
}
