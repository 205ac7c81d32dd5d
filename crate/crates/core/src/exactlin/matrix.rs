//! Dense matrices over an exact field: rank, row reduction and kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::field::{Field, Rationals};
use crate::error::{Error, Result};

/// Row-major dense matrix over `F`.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseMatrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> DenseMatrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        DenseMatrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: &F, rows: Vec<Vec<F::Elem>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(DenseMatrix {
            field: field.clone(),
            rows: n,
            cols,
            data,
        })
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(field: &F, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        Self::from_rows(field, data, cols).expect("ragged integer matrix")
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: F::Elem) {
        self.data[i * self.cols + j] = x;
    }

    pub fn add_to(&mut self, i: usize, j: usize, x: &F::Elem) {
        let k = i * self.cols + j;
        self.data[k] = self.field.add(&self.data[k], x);
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F::Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| self.field.is_zero(x))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let mut out = self.clone();
        for x in out.data.iter_mut() {
            *x = self.field.mul(x, c);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = self.clone();
        for (x, y) in out.data.iter_mut().zip(&other.data) {
            *x = self.field.add(x, y);
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !f.is_zero(b) {
                        out.add_to(i, j, &f.mul(a, b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(f.zero(), |acc, (a, b)| f.add(&acc, &f.mul(a, b)))
            })
            .collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "hstack of {} and {} rows",
                self.rows, other.rows
            )));
        }
        let cols = self.cols + other.cols;
        let rows = (0..self.rows)
            .map(|i| self.row(i).iter().chain(other.row(i)).cloned().collect())
            .collect();
        Self::from_rows(&self.field, rows, cols)
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(field: &F, rows: usize, columns: &[Vec<F::Elem>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    /// Block-diagonal sum.
    pub fn block_diag(&self, other: &Self) -> Self {
        let mut m = Self::zeros(&self.field, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                m.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        m
    }

    pub fn map_field<G: Field>(&self, target: &G, f: impl Fn(&F::Elem) -> Option<G::Elem>) -> Option<DenseMatrix<G>> {
        let data = self.data.iter().map(f).collect::<Option<Vec<_>>>()?;
        Some(DenseMatrix {
            field: target.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Rank over the matrix's field.
    pub fn rank(&self) -> usize {
        self.field.rank(self)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !f.is_zero(m.get(i, c))) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = f.inv(m.get(r, c)).expect("nonzero pivot");
            for j in c..m.cols {
                let x = f.mul(m.get(r, j), &inv);
                m.set(r, j, x);
            }
            for i in 0..m.rows {
                if i == r || f.is_zero(m.get(i, c)) {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in c..m.cols {
                    let x = f.sub(m.get(i, j), &f.mul(&factor, m.get(r, j)));
                    m.set(i, j, x);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    /// Columns form a basis of the right kernel.
    pub fn kernel_basis(&self) -> Self {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Self::zeros(f, self.cols, free.len());
        for (idx, &fc) in free.iter().enumerate() {
            k.set(fc, idx, f.one());
            for (pr, &pc) in pivots.iter().enumerate() {
                k.set(pc, idx, f.neg(r.get(pr, fc)));
            }
        }
        k
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

/// Rank by ordinary elimination; used for prime fields.
pub(crate) fn gauss_rank<F: Field>(m: &DenseMatrix<F>) -> usize {
    let f = m.field();
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.data.clone();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !f.is_zero(&a[i * cols + c])) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                a.swap(p * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(&a[r * cols + c]).expect("nonzero pivot");
        for i in r + 1..rows {
            if f.is_zero(&a[i * cols + c]) {
                continue;
            }
            let factor = f.mul(&a[i * cols + c], &inv);
            for j in c..cols {
                let x = f.sub(&a[i * cols + j], &f.mul(&factor, &a[r * cols + j]));
                a[i * cols + j] = x;
            }
        }
        r += 1;
    }
    r
}

/// Fraction-free (Bareiss) rank over `Q`: rows are first scaled to integers.
pub(crate) fn bareiss_rank(m: &DenseMatrix<Rationals>) -> usize {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<BigInt> = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        let row = m.row(i);
        let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        a.extend(row.iter().map(|x| (x * &lcm).to_integer()));
    }
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i * cols + c].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                a.swap(p * cols + j, r * cols + j);
            }
        }
        let pivot = a[r * cols + c].clone();
        for i in r + 1..rows {
            let lead = a[i * cols + c].clone();
            for j in c + 1..cols {
                let x = &pivot * &a[i * cols + j] - &lead * &a[r * cols + j];
                a[i * cols + j] = x / &prev;
            }
            a[i * cols + c] = BigInt::zero();
        }
        // entries below row r are now (r+1)-minors of the input
        prev = pivot;
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::field::PrimeField;

    #[test]
    fn rank_small_cases() {
        let q = Rationals;
        assert_eq!(DenseMatrix::from_i64(&q, &[&[1, 0], &[0, 0]]).rank(), 1);
        assert_eq!(DenseMatrix::zeros(&q, 3, 5).rank(), 0);
        assert_eq!(DenseMatrix::<Rationals>::zeros(&q, 0, 4).rank(), 0);
    }

    #[test]
    fn rank_of_locally_free_beta_coefficients() {
        // rows are the coefficient vectors of -y, x, z, w
        let m = DenseMatrix::from_i64(
            &Rationals,
            &[&[0, -1, 0, 0], &[1, 0, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]],
        );
        assert_eq!(m.rank(), 4);
    }

    #[test]
    fn bareiss_agrees_with_gauss() {
        let m = DenseMatrix::from_i64(
            &Rationals,
            &[&[2, 4, 6, 8], &[1, 2, 3, 5], &[0, 0, 0, 0], &[3, 6, 9, 13], &[1, 1, 1, 1]],
        );
        assert_eq!(bareiss_rank(&m), gauss_rank(&m));
        assert_eq!(m.rank(), 3);
    }

    #[test]
    fn kernel_examples() {
        let q = Rationals;
        assert_eq!(DenseMatrix::identity(&q, 3).kernel_basis().cols(), 0);
        assert_eq!(DenseMatrix::zeros(&q, 2, 3).kernel_basis().cols(), 3);
        let k = DenseMatrix::from_i64(&q, &[&[1, 1]]).kernel_basis();
        assert_eq!(k.cols(), 1);
        assert_eq!(k.column(0), vec![q.from_i64(-1), q.from_i64(1)]);
    }

    #[test]
    fn kernel_over_prime_field() {
        let f = PrimeField::new(5).unwrap();
        let m = DenseMatrix::from_i64(&f, &[&[1, 2, 3], &[2, 4, 6]]);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 2);
        assert!(m.mul(&k).unwrap().is_zero());
    }
}
