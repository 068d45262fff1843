//! Dense complex linear algebra: rank, kernels, least squares, projective
//! points, univariate roots and small zero-dimensional polynomial systems.

mod polysys;
mod roots;

pub use polysys::{polysys_solve, PolySysOptions};
pub use roots::{eval_univariate, univariate_roots, ROOT_RESIDUAL_TOL};

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use std::ops::{Index, IndexMut};

/// Relative singular-value cutoff used when callers have no better choice.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// Dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    inner: DMatrix<C64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            inner: DMatrix::zeros(rows, cols),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            inner: DMatrix::identity(n, n),
        }
    }

    /// Builds from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::InvalidInput(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Self {
            inner: DMatrix::from_row_slice(rows, cols, entries),
        })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInput("ragged rows".into()));
        }
        let flat: Vec<C64> = rows.iter().flatten().copied().collect();
        Self::from_row_major(rows.len(), cols, &flat)
    }

    pub fn from_columns(columns: &[Vec<C64>]) -> Result<Self> {
        Ok(Self::from_rows(columns)?.transpose())
    }

    pub fn from_nalgebra(inner: DMatrix<C64>) -> Self {
        Self { inner }
    }

    pub fn as_nalgebra(&self) -> &DMatrix<C64> {
        &self.inner
    }

    pub fn rows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn cols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn row(&self, i: usize) -> Vec<C64> {
        self.inner.row(i).iter().copied().collect()
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        self.inner.column(j).iter().copied().collect()
    }

    pub fn to_row_major(&self) -> Vec<C64> {
        self.inner.transpose().as_slice().to_vec()
    }

    pub fn transpose(&self) -> Self {
        Self {
            inner: self.inner.transpose(),
        }
    }

    /// Places the blocks side by side.
    pub fn hstack(blocks: &[DenseMatrix]) -> Result<Self> {
        let rows = blocks.first().map_or(0, DenseMatrix::rows);
        if blocks.iter().any(|b| b.rows() != rows) {
            return Err(Error::InvalidInput("hstack blocks differ in row count".into()));
        }
        let cols = blocks.iter().map(DenseMatrix::cols).sum();
        let mut out = DMatrix::zeros(rows, cols);
        let mut offset = 0;
        for b in blocks {
            out.columns_mut(offset, b.cols()).copy_from(&b.inner);
            offset += b.cols();
        }
        Ok(Self { inner: out })
    }

    pub fn vstack(blocks: &[DenseMatrix]) -> Result<Self> {
        let transposed: Vec<_> = blocks.iter().map(DenseMatrix::transpose).collect();
        Ok(Self::hstack(&transposed)?.transpose())
    }

    pub fn mul_vec(&self, v: &[C64]) -> Vec<C64> {
        (&self.inner * DVector::from_column_slice(v)).as_slice().to_vec()
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = C64;
    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.inner[idx]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, idx: (usize, usize)) -> &mut C64 {
        &mut self.inner[idx]
    }
}

/// Singular values in decreasing order.
pub fn singular_values(m: &DenseMatrix) -> Result<Vec<f64>> {
    if m.rows() == 0 || m.cols() == 0 {
        return Err(Error::EmptyMatrix);
    }
    let mut sv: Vec<f64> = m.inner.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// Number of singular values above `tol` times the largest one.
pub fn rank_with_tol(m: &DenseMatrix, tol: f64) -> Result<usize> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("rank tolerance must be positive, got {tol}")));
    }
    let sv = singular_values(m)?;
    let top = sv[0];
    if top == 0.0 {
        return Ok(0);
    }
    Ok(sv.iter().filter(|&&s| s > tol * top).count())
}

/// Orthonormal basis of the right kernel, one vector per column.
pub fn nullspace(m: &DenseMatrix, tol: f64) -> Result<DenseMatrix> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("rank tolerance must be positive, got {tol}")));
    }
    if m.rows() == 0 || m.cols() == 0 {
        return Err(Error::EmptyMatrix);
    }
    let n = m.cols();
    // Pad wide matrices with zero rows so the SVD returns a full V.
    let padded = if m.rows() < n {
        let mut p = DMatrix::zeros(n, n);
        p.rows_mut(0, m.rows()).copy_from(&m.inner);
        p
    } else {
        m.inner.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let kernel: Vec<Vec<C64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| top == 0.0 || s <= tol * top)
        .map(|(i, _)| v_t.row(i).iter().map(|c| c.conj()).collect())
        .collect();
    if kernel.is_empty() {
        return Ok(DenseMatrix::zeros(n, 0));
    }
    DenseMatrix::from_columns(&kernel)
}

/// Minimum-norm least-squares solution of `A x = b`.
pub fn least_squares(a: &DenseMatrix, b: &[C64]) -> Result<Vec<C64>> {
    if a.rows() == 0 || a.cols() == 0 {
        return Err(Error::EmptyMatrix);
    }
    if b.len() != a.rows() {
        return Err(Error::InvalidInput("right-hand side length mismatch".into()));
    }
    let svd = a.inner.clone().svd(true, true);
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let rhs = DVector::from_column_slice(b);
    let x = svd
        .solve(&rhs, top * 1e-13)
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    Ok(x.as_slice().to_vec())
}

/// Fubini-Study sine distance between the lines spanned by `a` and `b`.
///
/// Computed as the norm of the component of `a/|a|` orthogonal to `b`, which
/// stays accurate for nearly equal points.
pub fn projective_distance(a: &[C64], b: &[C64]) -> f64 {
    let na = a.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    let nb = b.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        return f64::INFINITY;
    }
    let inner: C64 = a.iter().zip(b).map(|(x, y)| y.conj() * x).sum::<C64>() / (na * nb);
    a.iter()
        .zip(b)
        .map(|(x, y)| (x / na - inner * y / nb).norm_sqr())
        .sum::<f64>()
        .sqrt()
        .min(1.0)
}

/// Unit-norm representative with the first non-negligible entry real positive.
pub fn normalize_projective(coords: &[C64]) -> Option<Vec<C64>> {
    let norm = coords.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return None;
    }
    let pivot = coords.iter().find(|c| c.norm() > 1e-9 * norm)?;
    let scale = pivot / pivot.norm() * norm;
    Some(coords.iter().map(|c| c / scale).collect())
}

/// A point of projective space stored as its normalized representative.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectivePoint {
    coords: Vec<C64>,
}

impl ProjectivePoint {
    pub fn new(coords: &[C64]) -> Result<Self> {
        normalize_projective(coords)
            .map(|coords| Self { coords })
            .ok_or_else(|| Error::InvalidInput("projective point needs a nonzero finite vector".into()))
    }

    pub fn from_real(coords: &[f64]) -> Result<Self> {
        Self::new(&coords.iter().map(|&c| C64::new(c, 0.0)).collect::<Vec<_>>())
    }

    pub fn coords(&self) -> &[C64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn distance(&self, other: &ProjectivePoint) -> f64 {
        projective_distance(&self.coords, &other.coords)
    }

    pub fn approx_eq(&self, other: &ProjectivePoint, tol: f64) -> bool {
        self.coords.len() == other.coords.len() && self.distance(other) <= tol
    }
}

/// Lexicographic order on (re, im) of each coordinate, quantized to 1e-9 so
/// that round-off noise does not reorder numerically equal entries.
pub(crate) fn lex_cmp(a: &[C64], b: &[C64]) -> std::cmp::Ordering {
    fn key(x: f64) -> i64 {
        (x * 1e9).round() as i64
    }
    a.iter()
        .zip(b)
        .map(|(x, y)| key(x.re).cmp(&key(y.re)).then(key(x.im).cmp(&key(y.im))))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}
