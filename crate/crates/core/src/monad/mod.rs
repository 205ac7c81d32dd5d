//! The special monad data model
//!
//! A special monad on `P^n` is `V (x) O(-1) -> W (x) O -> V' (x) O(1)` with the
//! left map injective and the right map surjective as sheaf maps. This module
//! holds the data type, the existence predicate, Chern data, and the
//! constructors (examples, direct sums, duals, random draws).

mod examples;
mod io;
mod random;
mod validate;

use std::fmt;

use num_rational::Rational64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactlin::{Field, FieldKind, LinearFormMatrix, PrimeField, Rationals};

pub use examples::{example, trivial, EXAMPLE_NAMES};
pub use io::{decode, encode};
pub use random::{random_monad, COEFFICIENT_BOUND, RETRY_BOUND};
pub use validate::{validate, validate_with, CheckOutcome, ValidationReport};

/// Regularity of the cohomology sheaf, strongest first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Regularity {
    LocallyFree,
    Reflexive,
    TorsionFree,
    CoherentOnly,
}

impl Regularity {
    /// Whether `self` is at least as regular as `other`.
    pub fn at_least(self, other: Regularity) -> bool {
        self <= other
    }
}

impl fmt::Display for Regularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Regularity::LocallyFree => "LocallyFree",
            Regularity::Reflexive => "Reflexive",
            Regularity::TorsionFree => "TorsionFree",
            Regularity::CoherentOnly => "CoherentOnly",
        };
        f.write_str(s)
    }
}

/// A special monad on `P^n`, `n` in {2, 3}.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecialMonad<F: Field> {
    ambient: usize,
    v: usize,
    w: usize,
    v_prime: usize,
    alpha: LinearFormMatrix<F>,
    beta: LinearFormMatrix<F>,
}

impl<F: Field> SpecialMonad<F> {
    /// Shape-checked constructor; mathematical validity is checked by [`validate`].
    pub fn new(ambient: usize, alpha: LinearFormMatrix<F>, beta: LinearFormMatrix<F>) -> Result<Self> {
        if !(2..=3).contains(&ambient) {
            return Err(Error::DimensionMismatch(format!(
                "ambient dimension must be 2 or 3, got {ambient}"
            )));
        }
        for (name, m) in [("alpha", &alpha), ("beta", &beta)] {
            if m.vars() != ambient + 1 {
                return Err(Error::DimensionMismatch(format!(
                    "{name} has {} variables, expected {}",
                    m.vars(),
                    ambient + 1
                )));
            }
        }
        if alpha.field() != beta.field() {
            return Err(Error::FieldMismatch);
        }
        if beta.cols() != alpha.rows() {
            return Err(Error::DimensionMismatch(format!(
                "beta has {} columns but alpha has {} rows",
                beta.cols(),
                alpha.rows()
            )));
        }
        Ok(SpecialMonad {
            ambient,
            v: alpha.cols(),
            w: alpha.rows(),
            v_prime: beta.rows(),
            alpha,
            beta,
        })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn v(&self) -> usize {
        self.v
    }
    pub fn w(&self) -> usize {
        self.w
    }
    pub fn v_prime(&self) -> usize {
        self.v_prime
    }
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.v, self.w, self.v_prime)
    }
    pub fn alpha(&self) -> &LinearFormMatrix<F> {
        &self.alpha
    }
    pub fn beta(&self) -> &LinearFormMatrix<F> {
        &self.beta
    }
    pub fn field(&self) -> &F {
        self.alpha.field()
    }

    /// `rank(E) = w - v - v'`, negative only for malformed input.
    pub fn rank(&self) -> i64 {
        self.w as i64 - self.v as i64 - self.v_prime as i64
    }

    pub fn is_trivial(&self) -> bool {
        self.v == 0 && self.v_prime == 0
    }

    pub fn invariants(&self) -> ChernData {
        ChernData::from_dims(self.ambient, self.v, self.w, self.v_prime)
    }

    /// Block-diagonal sum; realizes the split extension of the two sheaves.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!(
                "ambient dimensions {} and {} differ",
                self.ambient, other.ambient
            )));
        }
        if self.field() != other.field() {
            return Err(Error::FieldMismatch);
        }
        SpecialMonad::new(
            self.ambient,
            self.alpha.block_diag(&other.alpha)?,
            self.beta.block_diag(&other.beta)?,
        )
    }

    /// Dual monad `V'* (x) O(-1) -> W* (x) O -> V* (x) O(1)` with maps
    /// `(beta^T, alpha^T)`; its cohomology is `E*` when `E` is locally free.
    pub fn dualize(&self, verified: Regularity) -> Result<Self> {
        if verified != Regularity::LocallyFree {
            return Err(Error::NotLocallyFree(verified.to_string()));
        }
        SpecialMonad::new(self.ambient, self.beta.transpose(), self.alpha.transpose())
    }

    /// Reduce modulo `p`; fails when a coefficient has a denominator divisible by `p`
    /// or the monad is already over a different prime field.
    pub fn reduce_mod(&self, p: &PrimeField) -> Result<SpecialMonad<PrimeField>> {
        let f = self.field().clone();
        let map = |x: &F::Elem| f.reduce_to(x, p);
        let alpha = self
            .alpha
            .map_field(p, map)
            .ok_or_else(|| Error::Reduction("alpha".into(), p.modulus()))?;
        let beta = self
            .beta
            .map_field(p, map)
            .ok_or_else(|| Error::Reduction("beta".into(), p.modulus()))?;
        SpecialMonad::new(self.ambient, alpha, beta)
    }

    pub fn describe(&self) -> String {
        let names: &[&str] = if self.ambient == 3 {
            &["x", "y", "z", "w"]
        } else {
            &["x", "y", "z"]
        };
        let col = |m: &LinearFormMatrix<F>| -> String {
            (0..m.rows())
                .map(|i| {
                    let row: Vec<String> = (0..m.cols()).map(|j| m.format_entry(i, j, names)).collect();
                    format!("[{}]", row.join(", "))
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        format!(
            "P^{} monad over {}, (v, w, v') = ({}, {}, {}); alpha = {}; beta = {}",
            self.ambient,
            self.field().kind(),
            self.v,
            self.w,
            self.v_prime,
            col(&self.alpha),
            col(&self.beta)
        )
    }
}

/// A monad over a field chosen at runtime.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyMonad {
    Rational(SpecialMonad<Rationals>),
    Prime(SpecialMonad<PrimeField>),
}

impl AnyMonad {
    pub fn field_kind(&self) -> FieldKind {
        match self {
            AnyMonad::Rational(_) => FieldKind::Rational,
            AnyMonad::Prime(m) => m.field().kind(),
        }
    }
}

impl From<SpecialMonad<Rationals>> for AnyMonad {
    fn from(m: SpecialMonad<Rationals>) -> Self {
        AnyMonad::Rational(m)
    }
}

impl From<SpecialMonad<PrimeField>> for AnyMonad {
    fn from(m: SpecialMonad<PrimeField>) -> Self {
        AnyMonad::Prime(m)
    }
}

/// Evaluate an expression generically on whichever monad an [`AnyMonad`] holds.
#[macro_export]
macro_rules! with_monad {
    ($any:expr, $m:ident => $body:expr) => {
        match $any {
            $crate::monad::AnyMonad::Rational($m) => $body,
            $crate::monad::AnyMonad::Prime($m) => $body,
        }
    };
}

/// Existence of a special monad on `P^3` with the given dimensions, exactly
/// as classified: `(w >= 2v'+2 and w >= v+v')` or `w >= v+v'+3`.
pub fn floystad_exists(v: usize, w: usize, v_prime: usize) -> bool {
    (w >= 2 * v_prime + 2 && w >= v + v_prime) || w >= v + v_prime + 3
}

/// Rank and Chern data of the cohomology sheaf.
///
/// `ch(E) = w - v ch(O(-1)) - v' ch(O(1))`, so `c1 = v - v'`,
/// `ch2 = -(v + v')/2`, `ch3 = (v - v')/6`; `c2` and `c3` follow from
/// Newton's identities. On `P^2` there is no degree-3 part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChernData {
    pub rank: i64,
    pub c1: i64,
    #[serde(serialize_with = "ser_ratio")]
    pub ch2: Rational64,
    #[serde(serialize_with = "ser_opt_ratio")]
    pub ch3: Option<Rational64>,
    pub c2: i64,
    pub c3: Option<i64>,
}

impl ChernData {
    pub fn from_dims(ambient: usize, v: usize, w: usize, v_prime: usize) -> Self {
        let (v, w, vp) = (v as i64, w as i64, v_prime as i64);
        let c1 = v - vp;
        let ch2 = Rational64::new(-(v + vp), 2);
        // c2 = (c1^2 - 2 ch2) / 2, always an integer since c1 = v + v' mod 2
        let c2 = (c1 * c1 + v + vp) / 2;
        let (ch3, c3) = if ambient >= 3 {
            let ch3 = Rational64::new(v - vp, 6);
            // ch3 = (c1^3 - 3 c1 c2 + 3 c3) / 6
            let c3 = (c1 - c1 * c1 * c1 + 3 * c1 * c2) / 3;
            (Some(ch3), Some(c3))
        } else {
            (None, None)
        };
        ChernData {
            rank: w - v - vp,
            c1,
            ch2,
            ch3,
            c2,
            c3,
        }
    }
}

fn ser_ratio<S: Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn ser_opt_ratio<S: Serializer>(r: &Option<Rational64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&r.to_string()),
        None => s.serialize_none(),
    }
}
