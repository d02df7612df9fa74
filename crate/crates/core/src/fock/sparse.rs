use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::par;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Square complex matrix in compressed-row layout.
///
/// Rows are sorted by column with duplicates merged and exact zeros dropped.
/// When `hermitian` is set the stored entries satisfy `A = A†` bit for bit.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOperator {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<Complex64>,
    hermitian: bool,
}

impl SparseOperator {
    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            row_ptr: vec![0; dim + 1],
            cols: Vec::new(),
            vals: Vec::new(),
            hermitian: true,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(&vec![1.0; dim])
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let rows = diag
            .iter()
            .enumerate()
            .map(|(i, &d)| vec![(i, Complex64::new(d, 0.0))])
            .collect();
        let mut op = Self::from_rows(diag.len(), rows);
        op.hermitian = true;
        op
    }

    /// Builds from per-row entry lists; unsorted and repeated columns are fine.
    pub fn from_rows(dim: usize, rows: Vec<Vec<(usize, Complex64)>>) -> Self {
        assert_eq!(rows.len(), dim);
        let mut row_ptr = Vec::with_capacity(dim + 1);
        row_ptr.push(0);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        for mut row in rows {
            row.sort_by_key(|&(c, _)| c);
            let mut k = 0;
            while k < row.len() {
                let c = row[k].0;
                let mut acc = ZERO;
                while k < row.len() && row[k].0 == c {
                    acc += row[k].1;
                    k += 1;
                }
                if acc != ZERO {
                    assert!(c < dim, "column {c} out of range");
                    cols.push(c);
                    vals.push(acc);
                }
            }
            row_ptr.push(cols.len());
        }
        Self {
            dim,
            row_ptr,
            cols,
            vals,
            hermitian: false,
        }
    }

    /// Builds from per-column lists: `columns[j]` holds the `(row, value)`
    /// pairs of `A e_j`.
    pub fn from_columns(dim: usize, columns: Vec<Vec<(usize, Complex64)>>) -> Self {
        let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); dim];
        for (j, col) in columns.into_iter().enumerate() {
            for (i, v) in col {
                rows[i].push((j, v));
            }
        }
        Self::from_rows(dim, rows)
    }

    /// `½(A + A†)`, exactly Hermitian.
    pub fn hermitized(&self) -> Self {
        let adj = self.adjoint();
        let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); self.dim];
        for (i, row) in rows.iter_mut().enumerate() {
            // merge two sorted rows so each entry is formed as ½(a + conj b)
            let (a_cols, a_vals) = self.row(i);
            let (b_cols, b_vals) = adj.row(i);
            let (mut x, mut y) = (0, 0);
            while x < a_cols.len() || y < b_cols.len() {
                let ca = a_cols.get(x).copied().unwrap_or(usize::MAX);
                let cb = b_cols.get(y).copied().unwrap_or(usize::MAX);
                if ca == cb {
                    row.push((ca, hermitian_mean(a_vals[x], b_vals[y], i, ca)));
                    x += 1;
                    y += 1;
                } else if ca < cb {
                    row.push((ca, hermitian_mean(a_vals[x], ZERO, i, ca)));
                    x += 1;
                } else {
                    row.push((cb, hermitian_mean(ZERO, b_vals[y], i, cb)));
                    y += 1;
                }
            }
        }
        let mut op = Self::from_rows(self.dim, rows);
        op.hermitian = true;
        op
    }

    pub fn adjoint(&self) -> Self {
        let mut rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::new(); self.dim];
        for i in 0..self.dim {
            let (c, v) = self.row(i);
            for (&j, &a) in c.iter().zip(v) {
                rows[j].push((i, a.conj()));
            }
        }
        let mut op = Self::from_rows(self.dim, rows);
        op.hermitian = self.hermitian;
        op
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn row(&self, i: usize) -> (&[usize], &[Complex64]) {
        let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
        (&self.cols[a..b], &self.vals[a..b])
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        let (c, v) = self.row(i);
        match c.binary_search(&j) {
            Ok(k) => v[k],
            Err(_) => ZERO,
        }
    }

    /// `(row, col, value)` for every stored entry, row-major.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        (0..self.dim).flat_map(move |i| {
            let (c, v) = self.row(i);
            c.iter().zip(v).map(move |(&j, &a)| (i, j, a))
        })
    }

    pub fn apply_into(&self, x: &[Complex64], y: &mut [Complex64]) {
        assert_eq!(x.len(), self.dim);
        assert_eq!(y.len(), self.dim);
        par::fill_rows(y, |i| {
            let (c, v) = self.row(i);
            c.iter().zip(v).fold(ZERO, |acc, (&j, &a)| acc + a * x[j])
        });
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let mut y = vec![ZERO; self.dim];
        self.apply_into(x, &mut y);
        y
    }

    /// `⟨x, A x⟩`.
    pub fn expectation(&self, x: &[Complex64]) -> Complex64 {
        let y = self.apply(x);
        x.iter().zip(&y).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for (i, j, a) in self.triplets() {
            m[(i, j)] = a;
        }
        m
    }

    pub fn from_dense(m: &DMatrix<Complex64>) -> Self {
        let n = m.nrows();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| (j, m[(i, j)])).collect())
            .collect();
        Self::from_rows(n, rows)
    }

    pub fn diagonal_entries(&self) -> Vec<Complex64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    /// `Σ c_k A_k` over operators of equal dimension. Hermitian when every
    /// coefficient is real and every term is Hermitian.
    pub fn linear_combination(terms: &[(Complex64, &SparseOperator)]) -> Self {
        let dim = terms.first().map(|t| t.1.dim).unwrap_or(0);
        let rows = par::map_rows(dim, |i| {
            let mut row = Vec::new();
            for (c, op) in terms {
                assert_eq!(op.dim, dim);
                let (cols, vals) = op.row(i);
                row.extend(cols.iter().zip(vals).map(|(&j, &a)| (j, *c * a)));
            }
            row
        });
        let mut op = Self::from_rows(dim, rows);
        op.hermitian = terms.iter().all(|(c, t)| c.im == 0.0 && t.hermitian);
        op
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut op = self.clone();
        op.vals.iter_mut().for_each(|v| *v *= c);
        op
    }

    /// `A + c·Id`.
    pub fn shifted(&self, c: f64) -> Self {
        let id = Self::identity(self.dim);
        let one = Complex64::new(1.0, 0.0);
        Self::linear_combination(&[(one, self), (Complex64::new(c, 0.0), &id)])
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::linear_combination(&[(Complex64::new(1.0, 0.0), self), (Complex64::new(-1.0, 0.0), other)])
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::linear_combination(&[(Complex64::new(1.0, 0.0), self), (Complex64::new(1.0, 0.0), other)])
    }

    /// Sparse product `A·B`.
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let rows = par::map_rows(self.dim, |i| {
            let mut row = Vec::new();
            let (c, v) = self.row(i);
            for (&k, &a) in c.iter().zip(v) {
                let (c2, v2) = other.row(k);
                row.extend(c2.iter().zip(v2).map(|(&j, &b)| (j, a * b)));
            }
            row
        });
        Self::from_rows(self.dim, rows)
    }

    /// Restriction to the given rows and columns, in the given order.
    pub fn submatrix(&self, keep: &[usize]) -> Self {
        let mut pos = vec![usize::MAX; self.dim];
        for (new, &old) in keep.iter().enumerate() {
            pos[old] = new;
        }
        let rows = keep
            .iter()
            .map(|&i| {
                let (c, v) = self.row(i);
                c.iter()
                    .zip(v)
                    .filter(|(&j, _)| pos[j] != usize::MAX)
                    .map(|(&j, &a)| (pos[j], a))
                    .collect()
            })
            .collect();
        let mut op = Self::from_rows(keep.len(), rows);
        op.hermitian = self.hermitian;
        op
    }

    /// Largest `|A_ij − conj(A_ji)|`.
    pub fn max_hermitian_deviation(&self) -> f64 {
        let adj = self.adjoint();
        self.sub(&adj).max_abs()
    }

    pub fn max_abs(&self) -> f64 {
        self.vals.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.vals.iter().map(|v| v.norm_sqr()).sum())
    }

    /// Gershgorin bounds `[lo, hi]` on the spectrum of a Hermitian operator.
    pub fn gershgorin_bounds(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.dim {
            let (c, v) = self.row(i);
            let mut d = 0.0;
            let mut r = 0.0;
            for (&j, a) in c.iter().zip(v) {
                if j == i {
                    d = a.re;
                } else {
                    r += a.norm();
                }
            }
            lo = lo.min(d - r);
            hi = hi.max(d + r);
        }
        if self.dim == 0 {
            (0.0, 0.0)
        } else {
            (lo, hi)
        }
    }

    pub fn apply_dvector(&self, x: &DVector<Complex64>) -> DVector<Complex64> {
        DVector::from_vec(self.apply(x.as_slice()))
    }
}

fn hermitian_mean(a: Complex64, b_adj: Complex64, i: usize, j: usize) -> Complex64 {
    // b_adj = conj(A_ji); keep the diagonal real
    let m = (a + b_adj) * 0.5;
    if i == j {
        Complex64::new(m.re, 0.0)
    } else {
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn merge_and_drop_zeros() {
        let op = SparseOperator::from_rows(2, vec![vec![(1, c(1.0, 0.0)), (0, c(2.0, 0.0)), (1, c(-1.0, 0.0))], vec![]]);
        assert_eq!(op.nnz(), 1);
        assert_eq!(op.get(0, 0), c(2.0, 0.0));
    }

    #[test]
    fn hermitize_is_exact() {
        let op = SparseOperator::from_rows(
            3,
            vec![
                vec![(0, c(1.0, 0.3)), (2, c(0.1, 0.7))],
                vec![(0, c(0.3, -0.2))],
                vec![(0, c(0.1 + 1e-17, -0.7)), (1, c(0.5, 0.5))],
            ],
        );
        let h = op.hermitized();
        assert!(h.is_hermitian());
        assert_eq!(h.max_hermitian_deviation(), 0.0);
        assert_eq!(h.get(0, 0), c(1.0, 0.0));
    }

    #[test]
    fn apply_matches_dense() {
        let op = SparseOperator::from_rows(2, vec![vec![(0, c(1.0, 0.0)), (1, c(0.0, 2.0))], vec![(1, c(3.0, 0.0))]]);
        let x = [c(1.0, 1.0), c(2.0, 0.0)];
        let y = op.apply(&x);
        let d = op.to_dense() * DVector::from_row_slice(&x);
        assert_eq!(y[0], d[0]);
        assert_eq!(y[1], d[1]);
    }

    #[test]
    fn product_and_submatrix() {
        let a = SparseOperator::from_rows(2, vec![vec![(1, c(1.0, 0.0))], vec![(0, c(1.0, 0.0))]]);
        let sq = a.matmul(&a);
        assert_eq!(sq.to_dense(), DMatrix::identity(2, 2));
        let s = sq.submatrix(&[1]);
        assert_eq!(s.get(0, 0), c(1.0, 0.0));
    }

    #[test]
    fn gershgorin() {
        let op = SparseOperator::from_rows(2, vec![vec![(0, c(1.0, 0.0)), (1, c(0.5, 0.0))], vec![(0, c(0.5, 0.0)), (1, c(-1.0, 0.0))]]);
        assert_eq!(op.gershgorin_bounds(), (-1.5, 1.5));
    }
}
