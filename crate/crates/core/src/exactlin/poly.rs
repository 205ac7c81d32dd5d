//! Univariate polynomials and common roots of binary forms.

use super::field::{Field, PrimeField};

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly<F: Field> {
    field: F,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> Poly<F> {
    pub fn new(field: &F, mut coeffs: Vec<F::Elem>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &F) -> Self {
        Poly::new(field, Vec::new())
    }

    pub fn x(field: &F) -> Self {
        Poly::new(field, vec![field.zero(), field.one()])
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &F::Elem) -> F::Elem {
        let f = &self.field;
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let f = &self.field;
        self.sub(&Poly::new(f, other.coeffs.iter().map(|c| f.neg(c)).collect()))
    }

    pub fn sub(&self, other: &Self) -> Self {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = f.zero();
        let c = (0..n)
            .map(|i| {
                f.sub(
                    self.coeffs.get(i).unwrap_or(&z),
                    other.coeffs.get(i).unwrap_or(&z),
                )
            })
            .collect();
        Poly::new(f, c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Poly::zero(f);
        }
        let mut c = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = f.add(&c[i + j], &f.mul(a, b));
            }
        }
        Poly::new(f, c)
    }

    /// Quotient and remainder.
    pub fn divrem(&self, divisor: &Self) -> (Self, Self) {
        let f = &self.field;
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead_inv = f.inv(&divisor.coeffs[dd]).expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        let mut q = vec![f.zero(); r.len().saturating_sub(dd)];
        while r.len() > dd {
            let top = r.len() - 1;
            let factor = f.mul(&r[top], &lead_inv);
            if !f.is_zero(&factor) {
                for (k, c) in divisor.coeffs.iter().enumerate() {
                    let idx = top - dd + k;
                    r[idx] = f.sub(&r[idx], &f.mul(&factor, c));
                }
            }
            q[top - dd] = factor;
            r.pop();
        }
        (Poly::new(f, q), Poly::new(f, r))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        let f = &self.field;
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead_inv = f.inv(&divisor.coeffs[dd]).expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        while r.len() > dd {
            let top = r.len() - 1;
            let factor = f.mul(&r[top], &lead_inv);
            if !f.is_zero(&factor) {
                for (k, c) in divisor.coeffs.iter().enumerate() {
                    let idx = top - dd + k;
                    r[idx] = f.sub(&r[idx], &f.mul(&factor, c));
                }
            }
            r.pop();
            while r.last().is_some_and(|c| f.is_zero(c)) {
                r.pop();
            }
        }
        Poly::new(f, r)
    }

    pub fn constant(field: &F, c: F::Elem) -> Self {
        Poly::new(field, vec![c])
    }

    /// Leading coefficient; zero for the zero polynomial.
    pub fn lead(&self) -> F::Elem {
        self.coeffs.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn monic(&self) -> Self {
        let f = &self.field;
        match self.coeffs.last() {
            None => self.clone(),
            Some(lead) => {
                let inv = f.inv(lead).expect("nonzero");
                Poly::new(f, self.coeffs.iter().map(|c| f.mul(c, &inv)).collect())
            }
        }
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Lagrange interpolation through `(xs[i], ys[i])`.
    pub fn interpolate(field: &F, xs: &[F::Elem], ys: &[F::Elem]) -> Self {
        let f = field;
        let mut acc = Poly::zero(f);
        for (i, (xi, yi)) in xs.iter().zip(ys).enumerate() {
            if f.is_zero(yi) {
                continue;
            }
            let mut basis = Poly::new(f, vec![f.one()]);
            let mut denom = f.one();
            for (j, xj) in xs.iter().enumerate() {
                if i == j {
                    continue;
                }
                basis = basis.mul(&Poly::new(f, vec![f.neg(xj), f.one()]));
                denom = f.mul(&denom, &f.sub(xi, xj));
            }
            let scale = f.mul(yi, &f.inv(&denom).expect("distinct nodes"));
            let scaled = Poly::new(f, basis.coeffs.iter().map(|c| f.mul(c, &scale)).collect());
            acc = acc.add(&scaled);
        }
        acc
    }

    pub fn format(&self, var: &str) -> String {
        let f = &self.field;
        if self.is_zero() {
            return "0".into();
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !f.is_zero(c))
            .map(|(i, c)| match i {
                0 => f.format(c),
                1 => format!("({})*{var}", f.format(c)),
                _ => format!("({})*{var}^{i}", f.format(c)),
            })
            .collect();
        terms.join(" + ")
    }
}

impl Poly<PrimeField> {
    /// `base^e mod modulus` by square-and-multiply.
    pub fn powmod(&self, mut e: u64, modulus: &Self) -> Self {
        let f = self.field;
        let mut acc = Poly::new(&f, vec![f.one()]).rem(modulus);
        let mut base = self.rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            e >>= 1;
        }
        acc
    }

    /// Whether the polynomial has a root in `F_p` (via `gcd(g, x^p - x)`).
    pub fn has_root_in_base_field(&self) -> bool {
        match self.degree() {
            None => true,
            Some(0) => false,
            Some(_) => {
                let f = self.field;
                let xp = Poly::x(&f).powmod(f.modulus(), self);
                let h = xp.sub(&Poly::x(&f));
                self.gcd(&h).degree().is_some_and(|d| d > 0)
            }
        }
    }

    /// Some root in `F_p`, found by exhaustive evaluation.
    pub fn find_root(&self) -> Option<u64> {
        (0..self.field.modulus()).find(|x| self.field.is_zero(&self.eval(x)))
    }
}

/// Common zeros on `P^1` of binary forms of equal degree `d`, each given as
/// coefficients `c_i` of `s^(d-i) t^i`.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryGcd<F: Field> {
    /// Every form is identically zero.
    pub all_zero: bool,
    /// All forms vanish at `[0:1]`.
    pub vanishes_at_infinity: bool,
    /// Monic gcd of the dehomogenized forms `f(1, x)`.
    pub affine_gcd: Poly<F>,
}

impl<F: Field> BinaryGcd<F> {
    pub fn compute(field: &F, forms: &[Vec<F::Elem>]) -> Self {
        let mut g = Poly::zero(field);
        let mut at_inf = true;
        let mut all_zero = true;
        for form in forms {
            let p = Poly::new(field, form.clone());
            if !p.is_zero() {
                all_zero = false;
            }
            if let Some(last) = form.last() {
                if !field.is_zero(last) {
                    at_inf = false;
                }
            }
            g = g.gcd(&p);
        }
        BinaryGcd {
            all_zero,
            vanishes_at_infinity: at_inf,
            affine_gcd: g,
        }
    }

    /// No common root over the algebraic closure.
    pub fn is_unit(&self) -> bool {
        !self.all_zero && !self.vanishes_at_infinity && self.affine_gcd.degree() == Some(0)
    }

    /// Degree of the homogeneous gcd (number of common roots with multiplicity).
    pub fn describe(&self) -> String {
        if self.all_zero {
            return "0".into();
        }
        let mut s = self.affine_gcd.format("t/s");
        if self.vanishes_at_infinity {
            s.push_str(" (also vanishing at [0:1])");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::field::Rationals;

    #[test]
    fn gcd_and_remainder() {
        let q = Rationals;
        // (x-1)(x-2) and (x-1)(x+3)
        let a = Poly::new(&q, vec![q.from_i64(2), q.from_i64(-3), q.from_i64(1)]);
        let b = Poly::new(&q, vec![q.from_i64(-3), q.from_i64(2), q.from_i64(1)]);
        let g = a.gcd(&b);
        assert_eq!(g, Poly::new(&q, vec![q.from_i64(-1), q.from_i64(1)]));
    }

    #[test]
    fn exact_division() {
        let q = Rationals;
        let a = Poly::new(&q, vec![q.from_i64(2), q.from_i64(-3), q.from_i64(1)]);
        let b = Poly::new(&q, vec![q.from_i64(-1), q.from_i64(1)]);
        let (quo, r) = a.divrem(&b);
        assert!(r.is_zero());
        assert_eq!(quo, Poly::new(&q, vec![q.from_i64(-2), q.from_i64(1)]));
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let q = Rationals;
        let p = Poly::new(&q, vec![q.from_i64(5), q.from_i64(0), q.from_i64(-2)]);
        let xs: Vec<_> = (0..3).map(|i| q.from_i64(i)).collect();
        let ys: Vec<_> = xs.iter().map(|x| p.eval(x)).collect();
        assert_eq!(Poly::interpolate(&q, &xs, &ys), p);
    }

    #[test]
    fn roots_over_prime_field() {
        let f = PrimeField::new(7).unwrap();
        // x^2 + 1 is irreducible mod 7, x^2 - 2 = (x-3)(x+3) mod 7
        let irr = Poly::new(&f, vec![1, 0, 1]);
        let split = Poly::new(&f, vec![f.from_i64(-2), 0, 1]);
        assert!(!irr.has_root_in_base_field());
        assert!(split.has_root_in_base_field());
        assert_eq!(split.find_root(), Some(3));
    }

    #[test]
    fn binary_forms_s_and_t() {
        let q = Rationals;
        // s = [1, 0], t = [0, 1] have no common zero
        let g = BinaryGcd::compute(&q, &[vec![q.one(), q.zero()], vec![q.zero(), q.one()]]);
        assert!(g.is_unit());
        // s alone vanishes at [0:1]
        let g = BinaryGcd::compute(&q, &[vec![q.one(), q.zero()]]);
        assert!(!g.is_unit());
        assert!(g.vanishes_at_infinity);
    }
}
