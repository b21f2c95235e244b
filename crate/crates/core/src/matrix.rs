//! Dense complex matrices in row-major layout.
//!
//! Everything in this crate works on small dense matrices (dimension ≤ 16),
//! so the representation is a flat `Vec<Complex64>` with explicit row and
//! column counts and no stride tricks. The module provides the arithmetic
//! needed by the channel and decomposition layers: products, adjoints,
//! Kronecker products, partial traces over either tensor factor, the
//! Hilbert–Schmidt inner product `⟨A,B⟩ = Tr(A†B)`, and cheap unitarity /
//! Hermiticity diagnostics.
//!
//! Tensor-product index convention, used consistently everywhere: the flat
//! index of `A ⊗ B` with `A` acting on the first factor (dimension `d`) and
//! `B` on the second (dimension `n`) is `i·n + e`, i.e. the first factor is
//! the major index.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type Complex64 = Complex<f64>;

/// Default relative tolerance for Hermiticity, unitarity, and eigenvector
/// orthonormality checks.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Dense complex matrix, row-major: entry `(i, j)` lives at `i·cols + j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixData", into = "MatrixData")]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

/// Serialized form: row-major `[re, im]` pairs alongside the shape.
#[derive(Serialize, Deserialize)]
struct MatrixData {
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
}

impl TryFrom<MatrixData> for ComplexMatrix {
    type Error = Error;

    fn try_from(data: MatrixData) -> Result<Self> {
        let entries = data
            .entries
            .iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect();
        ComplexMatrix::new(data.rows, data.cols, entries)
    }
}

impl From<ComplexMatrix> for MatrixData {
    fn from(m: ComplexMatrix) -> Self {
        MatrixData {
            rows: m.rows,
            cols: m.cols,
            entries: m.entries.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, validating the shape and
    /// rejecting non-finite values.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidMatrix(format!(
                "zero-sized shape {rows}x{cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::InvalidMatrix(format!(
                "{} entries for shape {rows}x{cols}",
                entries.len()
            )));
        }
        if let Some(z) = entries.iter().find(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidMatrix(format!("non-finite entry {z}")));
        }
        Ok(ComplexMatrix { rows, cols, entries })
    }

    /// All-zero matrix of the given shape. Panics on a zero-sized shape.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "zero-sized matrix shape");
        ComplexMatrix {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    /// Identity matrix of dimension `n`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    /// Builds a matrix from nested rows; rows must be non-empty and of equal
    /// length.
    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::InvalidMatrix("ragged rows".into()));
        }
        Self::new(nrows, ncols, rows.into_iter().flatten().collect())
    }

    /// Matrix unit `E_{ij}` of dimension `n`: one at `(i, j)`, zero elsewhere.
    pub fn matrix_unit(n: usize, i: usize, j: usize) -> Self {
        assert!(i < n && j < n, "matrix unit index out of range");
        let mut m = Self::zeros(n, n);
        m.set(i, j, Complex64::new(1.0, 0.0));
        m
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// True when the matrix is square.
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Entry at `(i, j)`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.entries[i * self.cols + j]
    }

    /// Overwrites the entry at `(i, j)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        debug_assert!(i < self.rows && j < self.cols);
        self.entries[i * self.cols + j] = value;
    }

    /// Row-major view of the raw entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Column `j` as a plain vector.
    pub fn col(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Builds a square-free matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<Complex64>]) -> Result<Self> {
        let ncols = cols.len();
        let nrows = cols.first().map_or(0, Vec::len);
        if cols.iter().any(|c| c.len() != nrows) {
            return Err(Error::InvalidMatrix("ragged columns".into()));
        }
        let mut m = Self::new(nrows, ncols, vec![Complex64::new(0.0, 0.0); nrows * ncols])?;
        for (j, c) in cols.iter().enumerate() {
            for (i, &z) in c.iter().enumerate() {
                m.set(i, j, z);
            }
        }
        Ok(m)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    /// Transpose without conjugation.
    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Scales every entry by `factor`.
    pub fn scale(&self, factor: Complex64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    /// Scales every entry by a real factor.
    pub fn scale_re(&self, factor: f64) -> Self {
        self.scale(Complex64::new(factor, 0.0))
    }

    /// Matrix trace. Panics if the matrix is not square.
    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace of a non-square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    /// Frobenius norm `√(Σ |a_ij|²)`.
    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius distance `‖A − B‖_F`. Panics on shape mismatch.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "distance between mismatched shapes"
        );
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest absolute imaginary part over all entries.
    pub fn max_imag(&self) -> f64 {
        self.entries.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// Matrix-vector product. Panics on shape mismatch.
    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..self.cols {
                acc += self.get(i, j) * v[j];
            }
            out[i] = acc;
        }
        out
    }

    /// `‖H − H†‖_F`, zero for exactly Hermitian input.
    pub fn hermiticity_violation(&self) -> f64 {
        assert!(self.is_square(), "Hermiticity of a non-square matrix");
        self.distance(&self.adjoint())
    }

    /// `‖U†U − 𝟙‖_F`, zero for exactly unitary input.
    pub fn unitarity_violation(&self) -> f64 {
        assert!(self.is_square(), "unitarity of a non-square matrix");
        (&self.adjoint() * self).distance(&Self::identity(self.rows))
    }

    /// True when `‖U†U − 𝟙‖_F ≤ tol` (and the matrix is square).
    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_square() && self.unitarity_violation() <= tol
    }

    /// Kronecker product with the first factor as the major index:
    /// `(A ⊗ B)[(i·n + e), (j·n + f)] = A[i,j]·B[e,f]` where `n = B.rows`.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                for e in 0..other.rows {
                    for f in 0..other.cols {
                        out.set(i * other.rows + e, j * other.cols + f, a * other.get(e, f));
                    }
                }
            }
        }
        out
    }

    /// Partial trace over the second (minor) tensor factor of a square matrix
    /// on `ℂ^d ⊗ ℂ^n`: `out[i,j] = Σ_e Y[(i·n+e), (j·n+e)]`.
    pub fn partial_trace_env(&self, d: usize, n: usize) -> Result<Self> {
        if !self.is_square() || self.rows != d * n {
            return Err(Error::DimensionMismatch(format!(
                "partial trace of a {}x{} matrix as {d}·{n} bipartite",
                self.rows, self.cols
            )));
        }
        let mut out = Self::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                let mut acc = Complex64::new(0.0, 0.0);
                for e in 0..n {
                    acc += self.get(i * n + e, j * n + e);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Partial trace over the first (major) tensor factor of a square matrix
    /// on `ℂ^d ⊗ ℂ^n`: `out[e,f] = Σ_i Y[(i·n+e), (i·n+f)]`.
    pub fn partial_trace_sys(&self, d: usize, n: usize) -> Result<Self> {
        if !self.is_square() || self.rows != d * n {
            return Err(Error::DimensionMismatch(format!(
                "partial trace of a {}x{} matrix as {d}·{n} bipartite",
                self.rows, self.cols
            )));
        }
        let mut out = Self::zeros(n, n);
        for e in 0..n {
            for f in 0..n {
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..d {
                    acc += self.get(i * n + e, i * n + f);
                }
                out.set(e, f, acc);
            }
        }
        Ok(out)
    }
}

/// Hilbert–Schmidt inner product `⟨A, B⟩ = Tr(A†B)`, conjugate-linear in the
/// first argument.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Complex64> {
    if (a.rows, a.cols) != (b.rows, b.cols) {
        return Err(Error::DimensionMismatch(format!(
            "inner product between {}x{} and {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    Ok(a
        .entries
        .iter()
        .zip(&b.entries)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

impl std::ops::Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "add shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

impl std::ops::Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "sub shape mismatch");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect(),
        }
    }
}

impl std::ops::Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let cur = out.get(i, j);
                    out.set(i, j, cur + a * rhs.get(k, j));
                }
            }
        }
        out
    }
}
