//! Scalar abstraction over the four supported entry types:
//! `f32`, `f64`, `Complex<f32>`, and `Complex<f64>`.

use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_complex::Complex;

/// Real field underlying a scalar type.
pub trait Real:
    num_traits::Float + num_traits::NumAssign + Debug + Display + Send + Sync + 'static
{
    fn to_f64(self) -> f64;
    fn of_f64(x: f64) -> Self;
}

impl Real for f32 {
    #[inline(always)]
    fn to_f64(self) -> f64 {
        self as f64
    }
    #[inline(always)]
    fn of_f64(x: f64) -> Self {
        x as f32
    }
}

impl Real for f64 {
    #[inline(always)]
    fn to_f64(self) -> f64 {
        self
    }
    #[inline(always)]
    fn of_f64(x: f64) -> Self {
        x
    }
}

/// Matrix entry type. Provides the complex-arithmetic hooks the samplers need
/// plus a strided GEMM dispatched to `matrixmultiply`.
pub trait Scalar:
    Copy
    + PartialEq
    + Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + num_traits::Zero
    + num_traits::One
{
    type Real: Real;

    const IS_COMPLEX: bool;

    fn from_real(re: Self::Real) -> Self;
    fn from_parts(re: Self::Real, im: Self::Real) -> Self;
    fn re(self) -> Self::Real;
    fn im(self) -> Self::Real;
    fn conj(self) -> Self;
    fn abs(self) -> Self::Real;
    fn to_c64(self) -> Complex<f64>;
    fn of_c64(z: Complex<f64>) -> Self;

    /// C := alpha * A * B + beta * C over raw strided buffers.
    ///
    /// # Safety
    /// Pointers must be valid for the given dimensions and strides, and C must
    /// not alias A or B.
    #[allow(clippy::too_many_arguments)]
    unsafe fn gemm(
        m: usize,
        k: usize,
        n: usize,
        alpha: Self,
        a: *const Self,
        rsa: isize,
        csa: isize,
        b: *const Self,
        rsb: isize,
        csb: isize,
        beta: Self,
        c: *mut Self,
        rsc: isize,
        csc: isize,
    );
}

impl Scalar for f32 {
    type Real = f32;
    const IS_COMPLEX: bool = false;

    #[inline(always)]
    fn from_real(re: f32) -> Self {
        re
    }
    #[inline(always)]
    fn from_parts(re: f32, _im: f32) -> Self {
        re
    }
    #[inline(always)]
    fn re(self) -> f32 {
        self
    }
    #[inline(always)]
    fn im(self) -> f32 {
        0.0
    }
    #[inline(always)]
    fn conj(self) -> Self {
        self
    }
    #[inline(always)]
    fn abs(self) -> f32 {
        f32::abs(self)
    }
    #[inline(always)]
    fn to_c64(self) -> Complex<f64> {
        Complex::new(self as f64, 0.0)
    }
    #[inline(always)]
    fn of_c64(z: Complex<f64>) -> Self {
        z.re as f32
    }

    unsafe fn gemm(
        m: usize,
        k: usize,
        n: usize,
        alpha: Self,
        a: *const Self,
        rsa: isize,
        csa: isize,
        b: *const Self,
        rsb: isize,
        csb: isize,
        beta: Self,
        c: *mut Self,
        rsc: isize,
        csc: isize,
    ) {
        matrixmultiply::sgemm(m, k, n, alpha, a, rsa, csa, b, rsb, csb, beta, c, rsc, csc)
    }
}

impl Scalar for f64 {
    type Real = f64;
    const IS_COMPLEX: bool = false;

    #[inline(always)]
    fn from_real(re: f64) -> Self {
        re
    }
    #[inline(always)]
    fn from_parts(re: f64, _im: f64) -> Self {
        re
    }
    #[inline(always)]
    fn re(self) -> f64 {
        self
    }
    #[inline(always)]
    fn im(self) -> f64 {
        0.0
    }
    #[inline(always)]
    fn conj(self) -> Self {
        self
    }
    #[inline(always)]
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    #[inline(always)]
    fn to_c64(self) -> Complex<f64> {
        Complex::new(self, 0.0)
    }
    #[inline(always)]
    fn of_c64(z: Complex<f64>) -> Self {
        z.re
    }

    unsafe fn gemm(
        m: usize,
        k: usize,
        n: usize,
        alpha: Self,
        a: *const Self,
        rsa: isize,
        csa: isize,
        b: *const Self,
        rsb: isize,
        csb: isize,
        beta: Self,
        c: *mut Self,
        rsc: isize,
        csc: isize,
    ) {
        matrixmultiply::dgemm(m, k, n, alpha, a, rsa, csa, b, rsb, csb, beta, c, rsc, csc)
    }
}

impl Scalar for Complex<f32> {
    type Real = f32;
    const IS_COMPLEX: bool = true;

    #[inline(always)]
    fn from_real(re: f32) -> Self {
        Complex::new(re, 0.0)
    }
    #[inline(always)]
    fn from_parts(re: f32, im: f32) -> Self {
        Complex::new(re, im)
    }
    #[inline(always)]
    fn re(self) -> f32 {
        self.re
    }
    #[inline(always)]
    fn im(self) -> f32 {
        self.im
    }
    #[inline(always)]
    fn conj(self) -> Self {
        Complex::new(self.re, -self.im)
    }
    #[inline(always)]
    fn abs(self) -> f32 {
        self.norm()
    }
    #[inline(always)]
    fn to_c64(self) -> Complex<f64> {
        Complex::new(self.re as f64, self.im as f64)
    }
    #[inline(always)]
    fn of_c64(z: Complex<f64>) -> Self {
        Complex::new(z.re as f32, z.im as f32)
    }

    unsafe fn gemm(
        m: usize,
        k: usize,
        n: usize,
        alpha: Self,
        a: *const Self,
        rsa: isize,
        csa: isize,
        b: *const Self,
        rsb: isize,
        csb: isize,
        beta: Self,
        c: *mut Self,
        rsc: isize,
        csc: isize,
    ) {
        // num_complex::Complex is repr(C), layout-compatible with [f32; 2].
        matrixmultiply::cgemm(
            matrixmultiply::CGemmOption::Standard,
            matrixmultiply::CGemmOption::Standard,
            m,
            k,
            n,
            [alpha.re, alpha.im],
            a as *const [f32; 2],
            rsa,
            csa,
            b as *const [f32; 2],
            rsb,
            csb,
            [beta.re, beta.im],
            c as *mut [f32; 2],
            rsc,
            csc,
        )
    }
}

impl Scalar for Complex<f64> {
    type Real = f64;
    const IS_COMPLEX: bool = true;

    #[inline(always)]
    fn from_real(re: f64) -> Self {
        Complex::new(re, 0.0)
    }
    #[inline(always)]
    fn from_parts(re: f64, im: f64) -> Self {
        Complex::new(re, im)
    }
    #[inline(always)]
    fn re(self) -> f64 {
        self.re
    }
    #[inline(always)]
    fn im(self) -> f64 {
        self.im
    }
    #[inline(always)]
    fn conj(self) -> Self {
        Complex::new(self.re, -self.im)
    }
    #[inline(always)]
    fn abs(self) -> f64 {
        self.norm()
    }
    #[inline(always)]
    fn to_c64(self) -> Complex<f64> {
        self
    }
    #[inline(always)]
    fn of_c64(z: Complex<f64>) -> Self {
        z
    }

    unsafe fn gemm(
        m: usize,
        k: usize,
        n: usize,
        alpha: Self,
        a: *const Self,
        rsa: isize,
        csa: isize,
        b: *const Self,
        rsb: isize,
        csb: isize,
        beta: Self,
        c: *mut Self,
        rsc: isize,
        csc: isize,
    ) {
        matrixmultiply::zgemm(
            matrixmultiply::CGemmOption::Standard,
            matrixmultiply::CGemmOption::Standard,
            m,
            k,
            n,
            [alpha.re, alpha.im],
            a as *const [f64; 2],
            rsa,
            csa,
            b as *const [f64; 2],
            rsb,
            csb,
            [beta.re, beta.im],
            c as *mut [f64; 2],
            rsc,
            csc,
        )
    }
}
