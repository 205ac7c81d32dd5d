//! Matrices whose entries are homogeneous linear forms.

use super::field::Field;
use super::matrix::DenseMatrix;
use super::monomial::MonomialBasis;
use crate::error::{Error, Result};

/// An `r x c` matrix of linear forms in `m` variables, stored as one
/// coefficient matrix per variable: entry `(i, j)` is `sum_t A_t[i, j] x_t`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearFormMatrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    coeffs: Vec<DenseMatrix<F>>,
}

impl<F: Field> LinearFormMatrix<F> {
    pub fn new(field: &F, rows: usize, cols: usize, coeffs: Vec<DenseMatrix<F>>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::DimensionMismatch("a linear form matrix needs at least one variable".into()));
        }
        for (t, a) in coeffs.iter().enumerate() {
            if a.rows() != rows || a.cols() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "coefficient matrix {t} is {}x{}, expected {rows}x{cols}",
                    a.rows(),
                    a.cols()
                )));
            }
            if a.field() != field {
                return Err(Error::FieldMismatch);
            }
        }
        Ok(LinearFormMatrix {
            field: field.clone(),
            rows,
            cols,
            coeffs,
        })
    }

    pub fn zeros(field: &F, rows: usize, cols: usize, vars: usize) -> Self {
        LinearFormMatrix {
            field: field.clone(),
            rows,
            cols,
            coeffs: vec![DenseMatrix::zeros(field, rows, cols); vars],
        }
    }

    /// Build from a table of integer coefficient vectors: `entries[i][j][t]`
    /// is the coefficient of `x_t` in entry `(i, j)`.
    pub fn from_i64(field: &F, vars: usize, entries: &[Vec<Vec<i64>>]) -> Self {
        let rows = entries.len();
        let cols = entries.first().map_or(0, |r| r.len());
        let mut out = Self::zeros(field, rows, cols, vars);
        for (i, row) in entries.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged linear form matrix");
            for (j, form) in row.iter().enumerate() {
                assert_eq!(form.len(), vars);
                for (t, &c) in form.iter().enumerate() {
                    out.coeffs[t].set(i, j, field.from_i64(c));
                }
            }
        }
        out
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
    pub fn vars(&self) -> usize {
        self.coeffs.len()
    }
    pub fn coeff(&self, t: usize) -> &DenseMatrix<F> {
        &self.coeffs[t]
    }
    pub fn coeffs(&self) -> &[DenseMatrix<F>] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|a| a.is_zero())
    }

    pub fn transpose(&self) -> Self {
        LinearFormMatrix {
            field: self.field.clone(),
            rows: self.cols,
            cols: self.rows,
            coeffs: self.coeffs.iter().map(|a| a.transpose()).collect(),
        }
    }

    pub fn block_diag(&self, other: &Self) -> Result<Self> {
        if self.vars() != other.vars() {
            return Err(Error::DimensionMismatch("variable counts differ".into()));
        }
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.block_diag(b))
            .collect();
        Ok(LinearFormMatrix {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols: self.cols + other.cols,
            coeffs,
        })
    }

    /// The linear form in entry `(i, j)` as a coefficient vector.
    pub fn entry(&self, i: usize, j: usize) -> Vec<F::Elem> {
        self.coeffs.iter().map(|a| a.get(i, j).clone()).collect()
    }

    /// Value at a point: `sum_t point[t] A_t`.
    pub fn evaluate(&self, point: &[F::Elem]) -> Result<DenseMatrix<F>> {
        if point.len() != self.vars() {
            return Err(Error::DimensionMismatch(format!(
                "point has {} coordinates, expected {}",
                point.len(),
                self.vars()
            )));
        }
        let f = &self.field;
        let mut out = DenseMatrix::zeros(f, self.rows, self.cols);
        for (a, x) in self.coeffs.iter().zip(point) {
            if f.is_zero(x) {
                continue;
            }
            out = out.add(&a.scale(x))?;
        }
        Ok(out)
    }

    /// Pull back along a linear map: `points` is `k x m`, each row a point;
    /// the result is a matrix of forms in `k` new variables with
    /// `B_s = sum_t points[s][t] A_t`.
    pub fn substitute(&self, points: &DenseMatrix<F>) -> Result<Self> {
        let coeffs = (0..points.rows())
            .map(|s| self.evaluate(points.row(s)))
            .collect::<Result<Vec<_>>>()?;
        LinearFormMatrix::new(&self.field, self.rows, self.cols, coeffs)
    }

    pub fn map_field<G: Field>(&self, target: &G, f: impl Fn(&F::Elem) -> Option<G::Elem> + Copy) -> Option<LinearFormMatrix<G>> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|a| a.map_field(target, f))
            .collect::<Option<Vec<_>>>()?;
        Some(LinearFormMatrix {
            field: target.clone(),
            rows: self.rows,
            cols: self.cols,
            coeffs,
        })
    }

    /// Matrix of `U (x) S_d -> U' (x) S_{d+1}`, `u (x) f -> L u f`, with
    /// domain index `j * |S_d| + mono` and codomain index `i * |S_{d+1}| + mono`.
    pub fn mult_map(&self, d: i64) -> DenseMatrix<F> {
        let src = MonomialBasis::new(self.vars(), d);
        let dst = MonomialBasis::new(self.vars(), d + 1);
        self.mult_map_with(&src, &dst)
    }

    pub(crate) fn mult_map_with(&self, src: &MonomialBasis, dst: &MonomialBasis) -> DenseMatrix<F> {
        let f = &self.field;
        let (ns, nd) = (src.len(), dst.len());
        let mut out = DenseMatrix::zeros(f, self.rows * nd, self.cols * ns);
        for (mi, mono) in src.exponents().iter().enumerate() {
            for t in 0..self.vars() {
                let mut shifted = mono.clone();
                shifted[t] += 1;
                let row_mono = dst.index_of(&shifted).expect("degree shift");
                let a = &self.coeffs[t];
                for i in 0..self.rows {
                    for j in 0..self.cols {
                        let c = a.get(i, j);
                        if !f.is_zero(c) {
                            out.add_to(i * nd + row_mono, j * ns + mi, c);
                        }
                    }
                }
            }
        }
        out
    }

    /// Human-readable entry, e.g. `x0 - 2*x3`.
    pub fn format_entry(&self, i: usize, j: usize, names: &[&str]) -> String {
        let f = &self.field;
        let mut s = String::new();
        for (t, c) in self.entry(i, j).iter().enumerate() {
            if f.is_zero(c) {
                continue;
            }
            let neg = f.format(c).starts_with('-');
            let mag = if neg { f.neg(c) } else { c.clone() };
            let mag_s = if f.is_one(&mag) {
                String::new()
            } else {
                format!("{}*", f.format(&mag))
            };
            let name = names.get(t).copied().map(String::from).unwrap_or_else(|| format!("x{t}"));
            if s.is_empty() {
                s = format!("{}{mag_s}{name}", if neg { "-" } else { "" });
            } else {
                s = format!("{s} {} {mag_s}{name}", if neg { "-" } else { "+" });
            }
        }
        if s.is_empty() {
            "0".into()
        } else {
            s
        }
    }
}

/// True iff the quadratic-form matrix `B * A` vanishes identically:
/// `B_t A_t = 0` for all `t` and `B_s A_t + B_t A_s = 0` for `s < t`.
pub fn compose_check<F: Field>(b: &LinearFormMatrix<F>, a: &LinearFormMatrix<F>) -> Result<bool> {
    if b.cols() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "cannot compose a {}x{} matrix after a {}x{} matrix",
            b.rows(),
            b.cols(),
            a.rows(),
            a.cols()
        )));
    }
    if b.vars() != a.vars() {
        return Err(Error::DimensionMismatch("variable counts differ".into()));
    }
    if b.field() != a.field() {
        return Err(Error::FieldMismatch);
    }
    let m = a.vars();
    for s in 0..m {
        for t in s..m {
            let mut q = b.coeff(s).mul(a.coeff(t))?;
            if s != t {
                q = q.add(&b.coeff(t).mul(a.coeff(s))?)?;
            }
            if !q.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
