//! Exact scalar arithmetic, dense linear algebra and graded multiplication maps.

pub mod field;
pub mod forms;
pub mod matrix;
pub mod monomial;
pub mod poly;

pub use field::{Field, FieldKind, PrimeField, Rationals, DEFAULT_PRIME};
pub use forms::{compose_check, LinearFormMatrix};
pub use matrix::DenseMatrix;
pub use monomial::{graded_dim, MonomialBasis};
pub use poly::{BinaryGcd, Poly};

/// Rank of a matrix over its field.
pub fn rank<F: Field>(m: &DenseMatrix<F>) -> usize {
    m.rank()
}

/// Columns spanning the right kernel.
pub fn kernel_basis<F: Field>(m: &DenseMatrix<F>) -> DenseMatrix<F> {
    m.kernel_basis()
}

pub fn monomial_basis(vars: usize, degree: i64) -> MonomialBasis {
    MonomialBasis::new(vars, degree)
}

pub fn mult_map<F: Field>(l: &LinearFormMatrix<F>, degree: i64) -> DenseMatrix<F> {
    l.mult_map(degree)
}
