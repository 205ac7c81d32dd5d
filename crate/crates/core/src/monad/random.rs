//! Seeded random special monads on `P^3`.
//!
//! One map gets small random integer coefficients; the other is then a random
//! combination of a basis of its linear syzygies (for `beta`, the kernel of
//! the degree-1 multiplication map of `alpha^T`). Either side can be drawn
//! first: the dual draw builds `(beta^T, alpha^T)` and transposes back.

use rand::Rng;

use super::{floystad_exists, trivial, validate, SpecialMonad};
use crate::error::{Error, Result};
use crate::exactlin::{DenseMatrix, Field, LinearFormMatrix};
use crate::rng;

/// Coefficients are drawn from `[-COEFFICIENT_BOUND, COEFFICIENT_BOUND]`.
pub const COEFFICIENT_BOUND: i64 = 9;
pub const RETRY_BOUND: usize = 200;

const AMBIENT: usize = 3;
const VARS: usize = AMBIENT + 1;

pub fn random_monad<F: Field>(v: usize, w: usize, v_prime: usize, seed: u64, field: &F) -> Result<SpecialMonad<F>> {
    if v == 0 && v_prime == 0 {
        return Ok(trivial(field, AMBIENT, w));
    }
    if !floystad_exists(v, w, v_prime) {
        return Err(Error::NotRepresentable(v, w, v_prime));
    }
    // expected syzygy count is about 4w - 10 * (size of the drawn side)
    let alpha_first = v <= v_prime;
    for attempt in 0..RETRY_BOUND {
        let from_alpha = alpha_first == (attempt % 2 == 0);
        let drawn = if from_alpha {
            draw(v, w, v_prime, seed, attempt as u64, field)?
        } else {
            match draw(v_prime, w, v, seed, attempt as u64, field)? {
                Some(d) => Some(SpecialMonad::new(AMBIENT, d.beta().transpose(), d.alpha().transpose())?),
                None => None,
            }
        };
        let Some(m) = drawn else {
            continue;
        };
        if validate(&m)?.overall {
            return Ok(m);
        }
    }
    Err(Error::RetryExhausted(RETRY_BOUND))
}

fn draw<F: Field>(v: usize, w: usize, vp: usize, seed: u64, attempt: u64, f: &F) -> Result<Option<SpecialMonad<F>>> {
    let mut r = rng::stream(seed, attempt);
    let coeffs: Vec<DenseMatrix<F>> = (0..VARS)
        .map(|_| {
            let rows = (0..w)
                .map(|_| (0..v).map(|_| f.sample(&mut r, COEFFICIENT_BOUND)).collect())
                .collect();
            DenseMatrix::from_rows(f, rows, v).expect("rectangular")
        })
        .collect();
    let alpha = LinearFormMatrix::new(f, w, v, coeffs)?;

    // index j * VARS + t of a kernel vector is the x_t coefficient of beta[., j]
    let kernel = alpha.transpose().mult_map(1).kernel_basis();
    if kernel.cols() == 0 {
        return Ok(None);
    }
    let basis: Vec<Vec<F::Elem>> = (0..kernel.cols())
        .map(|c| {
            f.homogenize(&kernel.column(c))
                .iter()
                .map(|s| f.parse(s).expect("formatted scalar"))
                .collect()
        })
        .collect();
    let mut beta = LinearFormMatrix::zeros(f, vp, w, VARS);
    let mut beta_coeffs: Vec<DenseMatrix<F>> = beta.coeffs().to_vec();
    for i in 0..vp {
        let mut row = vec![f.zero(); w * VARS];
        for b in &basis {
            let c = f.from_i64(r.gen_range(-3..=3));
            for (acc, x) in row.iter_mut().zip(b) {
                *acc = f.add(acc, &f.mul(&c, x));
            }
        }
        for j in 0..w {
            for (t, m) in beta_coeffs.iter_mut().enumerate() {
                m.set(i, j, row[j * VARS + t].clone());
            }
        }
    }
    beta = LinearFormMatrix::new(f, vp, w, beta_coeffs)?;
    Ok(Some(SpecialMonad::new(AMBIENT, alpha, beta)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{PrimeField, Rationals};

    #[test]
    fn seeded_draw_validates_and_repeats() {
        let a = random_monad(1, 4, 1, 7, &Rationals).unwrap();
        let b = random_monad(1, 4, 1, 7, &Rationals).unwrap();
        assert_eq!(a, b);
        assert!(validate(&random_monad(2, 4, 1, 7, &Rationals).unwrap()).unwrap().overall);
        assert!(validate(&random_monad(1, 6, 2, 7, &Rationals).unwrap()).unwrap().overall);
        assert!(validate(&a).unwrap().overall);
        assert_eq!(a.dims(), (1, 4, 1));
    }

    #[test]
    fn unrepresentable_dims() {
        assert!(matches!(random_monad(2, 3, 2, 0, &Rationals), Err(Error::NotRepresentable(2, 3, 2))));
    }

    #[test]
    fn trivial_dims() {
        let m = random_monad(0, 3, 0, 1, &Rationals).unwrap();
        assert!(m.is_trivial());
        assert_eq!(m.w(), 3);
    }

    #[test]
    fn prime_field_draw() {
        let f = PrimeField::new(32003).unwrap();
        let m = random_monad(2, 8, 2, 3, &f).unwrap();
        assert!(validate(&m).unwrap().overall);
    }

    #[test]
    fn every_small_representable_dim() {
        for v in 0..=2 {
            for vp in 0..=2 {
                for w in (v + vp + 1)..=8 {
                    if (v, vp) != (0, 0) && !floystad_exists(v, w, vp) {
                        continue;
                    }
                    let m = random_monad(v, w, vp, 11, &Rationals).unwrap();
                    assert_eq!(m.dims(), (v, w, vp));
                }
            }
        }
    }
}
