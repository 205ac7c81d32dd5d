//! The three rank-2/rank-3 monads on `P^3` with `v = v' = 1`, plus trivial monads.

use super::SpecialMonad;
use crate::error::{Error, Result};
use crate::exactlin::{Field, LinearFormMatrix, Rationals};

pub const EXAMPLE_NAMES: [&str; 3] = ["torsion-free", "reflexive", "locally-free"];

const X: [i64; 4] = [1, 0, 0, 0];
const Y: [i64; 4] = [0, 1, 0, 0];
const Z: [i64; 4] = [0, 0, 1, 0];
const W: [i64; 4] = [0, 0, 0, 1];
const NEG_Y: [i64; 4] = [0, -1, 0, 0];
const NEG_W: [i64; 4] = [0, 0, 0, -1];
const ZERO: [i64; 4] = [0, 0, 0, 0];

fn column(forms: &[[i64; 4]]) -> LinearFormMatrix<Rationals> {
    let entries: Vec<Vec<Vec<i64>>> = forms.iter().map(|f| vec![f.to_vec()]).collect();
    LinearFormMatrix::from_i64(&Rationals, 4, &entries)
}

fn row(forms: &[[i64; 4]]) -> LinearFormMatrix<Rationals> {
    let entries = vec![forms.iter().map(|f| f.to_vec()).collect::<Vec<_>>()];
    LinearFormMatrix::from_i64(&Rationals, 4, &entries)
}

/// One of the named example monads over `Q`:
///
/// * `torsion-free`: alpha = (x, y, 0, 0)^T, beta = (-y, x, z, w)
/// * `reflexive`: alpha = (x, y, 0, 0, z)^T, beta = (-y, x, z, w, 0)
/// * `locally-free`: alpha = (x, y, -w, z)^T, beta = (-y, x, z, w)
pub fn example(name: &str) -> Result<SpecialMonad<Rationals>> {
    let (alpha, beta) = match name {
        "torsion-free" => (column(&[X, Y, ZERO, ZERO]), row(&[NEG_Y, X, Z, W])),
        "reflexive" => (column(&[X, Y, ZERO, ZERO, Z]), row(&[NEG_Y, X, Z, W, ZERO])),
        "locally-free" => (column(&[X, Y, NEG_W, Z]), row(&[NEG_Y, X, Z, W])),
        other => return Err(Error::UnknownExample(other.to_string())),
    };
    SpecialMonad::new(3, alpha, beta)
}

/// The trivial monad `0 -> O^w -> 0` on `P^n`, whose cohomology is `O^w`.
pub fn trivial<F: Field>(field: &F, ambient: usize, w: usize) -> SpecialMonad<F> {
    let alpha = LinearFormMatrix::zeros(field, w, 0, ambient + 1);
    let beta = LinearFormMatrix::zeros(field, 0, w, ambient + 1);
    SpecialMonad::new(ambient, alpha, beta).expect("trivial monad shapes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_of_examples() {
        assert_eq!(example("torsion-free").unwrap().dims(), (1, 4, 1));
        assert_eq!(example("reflexive").unwrap().dims(), (1, 5, 1));
        assert_eq!(example("locally-free").unwrap().dims(), (1, 4, 1));
        assert!(matches!(example("stable"), Err(Error::UnknownExample(_))));
    }

    #[test]
    fn printed_matrices() {
        let names = ["x", "y", "z", "w"];
        let lf = example("locally-free").unwrap();
        let a: Vec<String> = (0..4).map(|i| lf.alpha().format_entry(i, 0, &names)).collect();
        let b: Vec<String> = (0..4).map(|j| lf.beta().format_entry(0, j, &names)).collect();
        assert_eq!(a, ["x", "y", "-w", "z"]);
        assert_eq!(b, ["-y", "x", "z", "w"]);
        let rf = example("reflexive").unwrap();
        let a: Vec<String> = (0..5).map(|i| rf.alpha().format_entry(i, 0, &names)).collect();
        assert_eq!(a, ["x", "y", "0", "0", "z"]);
    }

    #[test]
    fn trivial_has_rank_w() {
        let t = trivial(&Rationals, 3, 5);
        assert_eq!(t.dims(), (0, 5, 0));
        assert_eq!(t.rank(), 5);
        assert!(t.is_trivial());
    }
}
