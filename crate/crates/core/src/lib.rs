//! Exact computations with special monads
//!
//! ```text
//! 0 -> V (x) O(-1) --alpha--> W (x) O --beta--> V' (x) O(1) -> 0
//! ```
//!
//! on `P^3` (and `P^2`): validation, Chern data, regularity of the cohomology
//! sheaf, twist-cohomology tables, stability criteria, restriction to lines,
//! splitting types and jumping-line scans.

pub mod cohomology;
pub mod error;
pub mod exactlin;
pub mod monad;
pub mod pencil;
pub mod pointwise;
mod rng;
pub mod scan;

pub use error::{Error, Result};
pub use exactlin::{DenseMatrix, Field, FieldKind, LinearFormMatrix, PrimeField, Rationals};
pub use monad::{AnyMonad, SpecialMonad};
