use std::ops::{Deref, DerefMut, Index, IndexMut};

use faer::{Accum, MatRef, Par};
use num_complex::Complex64;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

/// A state vector: complex amplitudes indexed `0..dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVector(Vec<C64>);

impl ComplexVector {
    pub fn new(entries: Vec<C64>) -> Self {
        assert!(!entries.is_empty(), "vector dimension must be at least 1");
        Self(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        Self::new(vec![ZERO; dim])
    }

    /// Canonical basis vector `|index>`.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[index] = ONE;
        v
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self::new(values.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `<self|other>`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> C64 {
        assert_eq!(self.dim(), other.dim());
        self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn normalized(mut self) -> Self {
        let n = self.norm();
        if n > 0.0 {
            self.0.iter_mut().for_each(|z| *z /= n);
        }
        self
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn into_inner(self) -> Vec<C64> {
        self.0
    }
}

impl Deref for ComplexVector {
    type Target = [C64];
    fn deref(&self) -> &[C64] {
        &self.0
    }
}

impl DerefMut for ComplexVector {
    fn deref_mut(&mut self) -> &mut [C64] {
        &mut self.0
    }
}

impl From<Vec<C64>> for ComplexVector {
    fn from(v: Vec<C64>) -> Self {
        Self::new(v)
    }
}

/// Dense complex matrix. `m[(k, l)]` is row `k`, column `l`; storage is
/// row-major but nothing outside this type depends on that.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for k in 0..rows {
            for l in 0..cols {
                data.push(f(k, l));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rows * cols, "row-major buffer has wrong length");
        Self { rows, cols, data }
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Self::from_fn(r, c, |k, l| C64::new(rows[k][l], 0.0))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, k: usize) -> &[C64] {
        &self.data[k * self.cols..(k + 1) * self.cols]
    }

    pub fn row_mut(&mut self, k: usize) -> &mut [C64] {
        &mut self.data[k * self.cols..(k + 1) * self.cols]
    }

    pub fn as_row_major(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, l: usize) -> ComplexVector {
        ComplexVector::new((0..self.rows).map(|k| self[(k, l)]).collect())
    }

    pub(crate) fn view(&self) -> MatRef<'_, C64> {
        MatRef::from_row_major_slice(&self.data, self.rows, self.cols)
    }

    pub(crate) fn from_faer(m: MatRef<'_, C64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |k, l| m[(k, l)])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |k, l| self[(l, k)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |k, l| self[(l, k)])
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matmul inner dimensions differ");
        let mut out = faer::Mat::<C64>::zeros(self.rows, rhs.cols);
        faer::linalg::matmul::matmul(
            out.as_mut(),
            Accum::Replace,
            self.view(),
            rhs.view(),
            ONE,
            Par::Seq,
        );
        Self::from_faer(out.as_ref())
    }

    pub fn mul_vec(&self, v: &[C64]) -> ComplexVector {
        assert_eq!(self.cols, v.len(), "matrix-vector dimensions differ");
        ComplexVector::new(
            (0..self.rows)
                .map(|k| self.row(k).iter().zip(v).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    /// Kronecker product `self ⊗ rhs`; the left factor indexes the most
    /// significant digit of the flat index.
    pub fn kron(&self, rhs: &Self) -> Self {
        Self::from_fn(self.rows * rhs.rows, self.cols * rhs.cols, |k, l| {
            self[(k / rhs.rows, l / rhs.cols)] * rhs[(k % rhs.rows, l % rhs.cols)]
        })
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    /// Entrywise max-modulus norm.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |m - m†|` entrywise. Infinite for non-square input.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for k in 0..self.rows {
            for l in k..self.cols {
                worst = worst.max((self[(k, l)] - self[(l, k)].conj()).norm());
            }
        }
        worst
    }

    /// `‖m†m − I‖∞` entrywise.
    pub fn unitarity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        self.adjoint()
            .matmul(self)
            .max_abs_diff(&Self::identity(self.rows))
    }

    pub fn determinant(&self) -> C64 {
        assert!(self.is_square());
        self.view().determinant()
    }

    /// Sum of `|m_kl|` over `k != l`.
    pub fn offdiagonal_abs_sum(&self) -> f64 {
        let mut total = 0.0;
        for k in 0..self.rows {
            for (l, z) in self.row(k).iter().enumerate() {
                if k != l {
                    total += z.norm();
                }
            }
        }
        total
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (k, l): (usize, usize)) -> &C64 {
        debug_assert!(k < self.rows && l < self.cols);
        &self.data[k * self.cols + l]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (k, l): (usize, usize)) -> &mut C64 {
        debug_assert!(k < self.rows && l < self.cols);
        &mut self.data[k * self.cols + l]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_orders_left_factor_most_significant() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let b = ComplexMatrix::identity(2);
        let k = a.kron(&b);
        assert_eq!(k[(0, 2)], C64::new(2.0, 0.0));
        assert_eq!(k[(1, 3)], C64::new(2.0, 0.0));
        assert_eq!(k[(0, 1)], ZERO);
        assert_eq!(k[(3, 1)], C64::new(3.0, 0.0));
    }

    #[test]
    fn matmul_matches_naive_product() {
        let a = ComplexMatrix::from_fn(3, 2, |k, l| C64::new(k as f64, l as f64 + 1.0));
        let b = ComplexMatrix::from_fn(2, 4, |k, l| C64::new((k + l) as f64, -(k as f64)));
        let c = a.matmul(&b);
        for k in 0..3 {
            for l in 0..4 {
                let expect: C64 = (0..2).map(|i| a[(k, i)] * b[(i, l)]).sum();
                assert!((c[(k, l)] - expect).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn hermiticity_defect_detects_asymmetry() {
        let mut m = ComplexMatrix::identity(3);
        assert_eq!(m.hermiticity_defect(), 0.0);
        m[(0, 1)] = C64::new(0.0, 1.0);
        m[(1, 0)] = C64::new(0.0, 1.0);
        assert!((m.hermiticity_defect() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn determinant_of_diagonal() {
        let m = ComplexMatrix::from_diagonal(&[C64::new(2.0, 0.0), C64::new(0.0, 3.0)]);
        assert!((m.determinant() - C64::new(0.0, 6.0)).norm() < 1e-12);
    }
}
