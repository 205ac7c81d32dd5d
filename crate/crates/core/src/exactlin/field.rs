//! Exact scalar fields: the rationals and prime fields `F_p`.
//!
//! Linear algebra in this crate is generic over [`Field`]. A field value is a
//! small context object (the prime, for `F_p`) and elements are plain data.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Default working prime for finite-field computations.
pub const DEFAULT_PRIME: u64 = 32003;

/// Runtime descriptor of a field, as written in monad files (`Q` or `Fp:<p>`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rational,
    Prime(u64),
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Rational => write!(f, "Q"),
            FieldKind::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for FieldKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" {
            return Ok(FieldKind::Rational);
        }
        if let Some(rest) = s.strip_prefix("Fp:") {
            let p: u64 = rest
                .parse()
                .map_err(|_| Error::Parse(format!("invalid prime in field descriptor {s:?}")))?;
            PrimeField::new(p)?;
            return Ok(FieldKind::Prime(p));
        }
        Err(Error::Parse(format!(
            "unknown field descriptor {s:?} (expected \"Q\" or \"Fp:<p>\")"
        )))
    }
}

/// An exact computable field.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Send + Sync;

    fn kind(&self) -> FieldKind;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    /// Image of a rational number; `None` when the denominator vanishes in the field.
    fn from_rational(&self, q: &BigRational) -> Option<Self::Elem>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// Canonical text form (reduced fraction, or residue in `[0, p)`).
    fn format(&self, a: &Self::Elem) -> String;
    fn parse(&self, s: &str) -> Result<Self::Elem>;
    /// A random element: small integers in `[-bound, bound]` over `Q`,
    /// uniform residues over `F_p` (the bound is ignored there).
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> Self::Elem;
    /// Image in a prime field, when it exists.
    fn reduce_to(&self, a: &Self::Elem, target: &PrimeField) -> Option<u64>;
    /// Integer representative used for witness points and Plücker output.
    fn to_integer(&self, a: &Self::Elem) -> Option<BigInt>;
    /// Scale a vector to a primitive integer vector when possible.
    fn homogenize(&self, v: &[Self::Elem]) -> Vec<String> {
        v.iter().map(|x| self.format(x)).collect()
    }

    fn rank(&self, m: &super::matrix::DenseMatrix<Self>) -> usize {
        super::matrix::gauss_rank(m)
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

/// The field of rational numbers, with unbounded integer parts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn kind(&self) -> FieldKind {
        FieldKind::Rational
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_rational(&self, q: &BigRational) -> Option<BigRational> {
        Some(q.clone())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn format(&self, a: &BigRational) -> String {
        if a.is_integer() {
            a.numer().to_string()
        } else {
            format!("{}/{}", a.numer(), a.denom())
        }
    }
    fn parse(&self, s: &str) -> Result<BigRational> {
        parse_rational(s)
    }
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R, bound: i64) -> BigRational {
        self.from_i64(rng.gen_range(-bound..=bound))
    }
    fn reduce_to(&self, a: &BigRational, target: &PrimeField) -> Option<u64> {
        target.from_rational(a)
    }
    fn to_integer(&self, a: &BigRational) -> Option<BigInt> {
        a.is_integer().then(|| a.numer().clone())
    }
    fn homogenize(&self, v: &[BigRational]) -> Vec<String> {
        primitive_integer_vector(v).iter().map(|x| x.to_string()).collect()
    }
    fn rank(&self, m: &super::matrix::DenseMatrix<Self>) -> usize {
        super::matrix::bareiss_rank(m)
    }
}

/// Parse `a`, `-a` or `a/b` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid rational {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(num, den))
}

/// Clear denominators and divide out the content; the first nonzero entry is
/// made positive.
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() {
        for x in ints.iter_mut() {
            *x = &*x / &g;
        }
    }
    if let Some(first) = ints.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in ints.iter_mut() {
                *x = -&*x;
            }
        }
    }
    ints
}

/// The prime field `F_p`, `p < 2^32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= (1 << 32) {
            return Err(Error::InvalidPrime(p));
        }
        if !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn reduce_int(&self, v: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        let r = v.mod_floor(&p);
        r.to_u64().expect("residue fits")
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        base %= self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field for PrimeField {
    type Elem = u64;

    fn kind(&self) -> FieldKind {
        FieldKind::Prime(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }
    fn from_rational(&self, q: &BigRational) -> Option<u64> {
        let den = self.reduce_int(q.denom());
        let inv = self.inv(&den)?;
        Some(self.reduce_int(q.numer()) * inv % self.p)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            None
        } else {
            Some(self.pow(*a, self.p - 2))
        }
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
    fn parse(&self, s: &str) -> Result<u64> {
        let q = parse_rational(s)?;
        self.from_rational(&q)
            .ok_or_else(|| Error::Parse(format!("{s:?} has a denominator divisible by {}", self.p)))
    }
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R, _bound: i64) -> u64 {
        rng.gen_range(0..self.p)
    }
    fn reduce_to(&self, a: &u64, target: &PrimeField) -> Option<u64> {
        (target.p == self.p).then_some(*a)
    }
    fn to_integer(&self, a: &u64) -> Option<BigInt> {
        Some(BigInt::from(*a))
    }
    fn rank(&self, m: &super::matrix::DenseMatrix<Self>) -> usize {
        super::matrix::gauss_rank(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parse_normalizes() {
        let q = Rationals.parse("2/4").unwrap();
        assert_eq!(Rationals.format(&q), "1/2");
        assert_eq!(Rationals.format(&Rationals.parse("-6/-3").unwrap()), "2");
        assert!(Rationals.parse("1/0").is_err());
        assert!(Rationals.parse("x").is_err());
    }

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.from_i64(-1), 6);
        assert_eq!(f.inv(&3), Some(5));
        assert_eq!(f.parse("1/2").unwrap(), 4);
        assert!(f.parse("1/7").is_err());
        assert!(PrimeField::new(9).is_err());
        assert!(PrimeField::new(1).is_err());
    }

    #[test]
    fn field_kind_round_trip() {
        for s in ["Q", "Fp:32003", "Fp:5"] {
            assert_eq!(s.parse::<FieldKind>().unwrap().to_string(), s);
        }
        assert!("Fp:10".parse::<FieldKind>().is_err());
        assert!("R".parse::<FieldKind>().is_err());
    }

    #[test]
    fn primitive_vector() {
        let v: Vec<BigRational> = ["-1/2", "0", "3/4"].iter().map(|s| parse_rational(s).unwrap()).collect();
        let p = primitive_integer_vector(&v);
        assert_eq!(p, vec![BigInt::from(2), BigInt::from(0), BigInt::from(-3)]);
    }
}
