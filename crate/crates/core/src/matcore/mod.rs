//! Dense square complex matrices and the spectral machinery built on them.
//!
//! [`CMatrix`] is the single operand type used across the crate. Entries are
//! stored row-major as `Complex64`. The ring operations are available both as
//! operator impls on references (which panic on a dimension mismatch, like
//! most dense linear-algebra crates) and as `checked_*` methods that return a
//! [`MatrixError`].

mod calculus;
pub(crate) mod eig;
mod svd;

pub use calculus::{abs_parts, op_norm, power_psd, sqrt_psd};
pub use eig::{herm_eig, herm_eigvals, HermEig};
pub use svd::{svd, SvdResult};

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::MatrixError;

/// Zero complex scalar.
pub const C0: Complex64 = Complex64::new(0.0, 0.0);
/// Unit complex scalar.
pub const C1: Complex64 = Complex64::new(1.0, 0.0);
/// Imaginary unit.
pub const CI: Complex64 = Complex64::new(0.0, 1.0);

/// Ring operation selector for [`matrix_algebra`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum AlgebraOp {
    Add,
    Sub,
    Mul,
    /// Scale the first operand; the second is only checked for conformability.
    Scale(Complex64),
}

/// A dense `n x n` complex matrix.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    /// Builds a matrix from row-major entries.
    pub fn from_vec(n: usize, data: Vec<Complex64>) -> Result<Self, MatrixError> {
        if n == 0 {
            return Err(MatrixError::Empty);
        }
        if data.len() != n * n {
            return Err(MatrixError::BadLength {
                n,
                len: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(MatrixError::NonFinite {
                row: pos / n,
                col: pos % n,
            });
        }
        Ok(Self { n, data })
    }

    /// Builds a matrix from real and (optionally) imaginary row arrays.
    pub fn from_parts(re: &[Vec<f64>], im: Option<&[Vec<f64>]>) -> Result<Self, MatrixError> {
        let n = re.len();
        if n == 0 {
            return Err(MatrixError::Empty);
        }
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in re.iter().enumerate() {
            if row.len() != n {
                return Err(MatrixError::RaggedRow {
                    row: i,
                    len: row.len(),
                    n,
                });
            }
            let im_row = match im {
                Some(im) => {
                    let r = im.get(i).ok_or(MatrixError::ImagShape { n })?;
                    if r.len() != n {
                        return Err(MatrixError::ImagShape { n });
                    }
                    Some(r)
                }
                None => None,
            };
            for (j, &x) in row.iter().enumerate() {
                let y = im_row.map_or(0.0, |r| r[j]);
                data.push(Complex64::new(x, y));
            }
        }
        if let Some(im) = im {
            if im.len() != n {
                return Err(MatrixError::ImagShape { n });
            }
        }
        Self::from_vec(n, data)
    }

    /// Real matrix from rows. Panics on ragged or non-finite input; meant for
    /// literals in code and tests.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let re: Vec<Vec<f64>> = rows.iter().map(|r| r.as_ref().to_vec()).collect();
        Self::from_parts(&re, None).expect("valid real matrix literal")
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n > 0, "matrix dimension must be positive");
        Self {
            n,
            data: vec![C0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = C1;
        }
        m
    }

    /// Diagonal matrix with real entries.
    pub fn diag_real(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = Complex64::new(x, 0.0);
        }
        m
    }

    pub fn diag(d: &[Complex64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &z) in d.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    /// Builds an `n x n` matrix from a function of `(row, col)`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = f(i, j);
            }
        }
        m
    }

    /// Outer product `u v*`.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        assert_eq!(u.len(), v.len(), "outer product of unequal vectors");
        Self::from_fn(u.len(), |i, j| u[i] * v[j].conj())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Row-major entries.
    #[inline]
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[Complex64]) {
        for (i, &z) in col.iter().enumerate() {
            self[(i, j)] = z;
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let n = self.n;
        Self::from_fn(n, |i, j| self.data[j * n + i].conj())
    }

    pub fn transpose(&self) -> Self {
        let n = self.n;
        Self::from_fn(n, |i, j| self.data[j * n + i])
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, MatrixError> {
        self.conform(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, MatrixError> {
        self.conform(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, MatrixError> {
        self.conform(other)?;
        Ok(self.matmul(other))
    }

    fn conform(&self, other: &Self) -> Result<(), MatrixError> {
        if self.n != other.n {
            return Err(MatrixError::DimensionMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        Self {
            n: self.n,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    fn matmul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = vec![C0; n * n];
        for i in 0..n {
            let row = &mut out[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == C0 {
                    continue;
                }
                let brow = &other.data[k * n..(k + 1) * n];
                for (o, &b) in row.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Self { n, data: out }
    }

    /// Matrix-vector product.
    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n, "vector length does not match matrix");
        let n = self.n;
        (0..n)
            .map(|i| {
                self.data[i * n..(i + 1) * n]
                    .iter()
                    .zip(x)
                    .map(|(&a, &b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// Quadratic form `<A x, x> = x* A x`.
    pub fn quadratic_form(&self, x: &[Complex64]) -> Complex64 {
        dot(x, &self.apply(x))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `||A - A*||_F`.
    pub fn hermitian_residual(&self) -> f64 {
        let n = self.n;
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self.data[i * n + j] - self.data[j * n + i].conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Whether `||A - A*||_F <= tol * (1 + ||A||_F)`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_residual() <= tol * (1.0 + self.frobenius_norm())
    }

    /// `(A + A*) / 2`, exactly Hermitian (real diagonal, mirrored off-diagonal).
    pub fn symmetrized(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            out.data[i * n + i] = Complex64::new(self.data[i * n + i].re, 0.0);
            for j in (i + 1)..n {
                let z = (self.data[i * n + j] + self.data[j * n + i].conj()) * 0.5;
                out.data[i * n + j] = z;
                out.data[j * n + i] = z.conj();
            }
        }
        out
    }

    /// Cartesian decomposition `A = Re(A) + i Im(A)` with
    /// `Re(A) = (A + A*)/2` and `Im(A) = (A - A*)/(2i)`.
    pub fn cartesian_parts(&self) -> (Self, Self) {
        let n = self.n;
        let re = Self::from_fn(n, |i, j| (self.data[i * n + j] + self.data[j * n + i].conj()) * 0.5);
        let im = Self::from_fn(n, |i, j| {
            (self.data[i * n + j] - self.data[j * n + i].conj()) * Complex64::new(0.0, -0.5)
        });
        (re.symmetrized(), im.symmetrized())
    }

    /// Integer power by repeated squaring.
    pub fn powi(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.n);
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Real and imaginary parts as nested row vectors.
    pub fn to_parts(&self) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let n = self.n;
        let re = (0..n)
            .map(|i| (0..n).map(|j| self.data[i * n + j].re).collect())
            .collect();
        let im = (0..n)
            .map(|i| (0..n).map(|j| self.data[i * n + j].im).collect())
            .collect();
        (re, im)
    }

    /// Canonical byte encoding: `n` as little-endian u64 followed by each
    /// entry's real and imaginary parts as little-endian f64, row-major.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 + 16 * self.data.len());
        out.extend_from_slice(&(self.n as u64).to_le_bytes());
        for z in &self.data {
            // Normalize -0.0 so that equal matrices hash equally.
            out.extend_from_slice(&(z.re + 0.0).to_le_bytes());
            out.extend_from_slice(&(z.im + 0.0).to_le_bytes());
        }
        out
    }
}

/// Applies a ring operation to two conformable matrices.
pub fn matrix_algebra(a: &CMatrix, b: &CMatrix, op: AlgebraOp) -> Result<CMatrix, MatrixError> {
    match op {
        AlgebraOp::Add => a.checked_add(b),
        AlgebraOp::Sub => a.checked_sub(b),
        AlgebraOp::Mul => a.checked_mul(b),
        AlgebraOp::Scale(s) => {
            a.conform(b)?;
            Ok(a.scale(s))
        }
    }
}

/// Assembles the `2n x 2n` block matrix `[[A, X], [Y, B]]`.
pub fn block2(a: &CMatrix, x: &CMatrix, y: &CMatrix, b: &CMatrix) -> Result<CMatrix, MatrixError> {
    let n = a.n;
    for m in [x, y, b] {
        a.conform(m)?;
    }
    let m = 2 * n;
    Ok(CMatrix::from_fn(m, |i, j| {
        let blk = match (i < n, j < n) {
            (true, true) => a,
            (true, false) => x,
            (false, true) => y,
            (false, false) => b,
        };
        blk[(i % n, j % n)]
    }))
}

/// Hermitian inner product `<y, x> = sum conj(x_i) y_i`, linear in the first
/// argument as in `<Ax, x>`.
pub fn dot(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

pub fn vec_norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

impl<'a> Add<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        self.checked_add(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a> Sub<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        self.checked_sub(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl<'a> Mul<&'a CMatrix> for &'a CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.checked_mul(rhs).unwrap_or_else(|e| panic!("{e}"))
    }
}

impl Neg for &CMatrix {
    type Output = CMatrix;
    fn neg(self) -> CMatrix {
        self.scale_real(-1.0)
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix({}x{}) [", self.n, self.n)?;
        for i in 0..self.n {
            write!(f, "  ")?;
            for j in 0..self.n {
                let z = self[(i, j)];
                write!(f, "{:>10.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}
