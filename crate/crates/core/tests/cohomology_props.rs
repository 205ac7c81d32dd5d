use monadlab::cohomology::{
    admissibility_check, chi_line_bundle, cohomology_table, dual_vanishing_check, CohomologyTable,
};
use monadlab::monad::{example, floystad_exists, random_monad, trivial, Regularity, SpecialMonad};
use monadlab::pointwise::{classify, Budget};
use monadlab::{Field, PrimeField, Rationals};
use proptest::prelude::*;

fn table<F: Field>(m: &SpecialMonad<F>) -> CohomologyTable {
    cohomology_table(m, -6, 2).unwrap()
}

/// Euler characteristic from the monad, with binomials computed by hand.
fn chi_oracle(n: usize, (v, w, vp): (usize, usize, usize), k: i64) -> i64 {
    let chi = |d: i64| -> i64 {
        // dim S_d + (-1)^n dim S_{-d-n-1}
        let dim = |e: i64| -> i64 {
            if e < 0 {
                return 0;
            }
            (1..=n as i64).map(|i| e + i).product::<i64>() / (1..=n as i64).product::<i64>()
        };
        dim(d) + if n % 2 == 1 { -dim(-d - n as i64 - 1) } else { dim(-d - n as i64 - 1) }
    };
    w as i64 * chi(k) - v as i64 * chi(k - 1) - vp as i64 * chi(k + 1)
}

#[test]
fn chi_helper_agrees_with_oracle() {
    for n in [2usize, 3] {
        for d in -8..=4 {
            assert_eq!(chi_line_bundle(n, d), chi_oracle(n, (0, 1, 0), d), "n={n} d={d}");
        }
    }
}

#[test]
fn serre_duality_on_locally_free_examples() {
    let lf = example("locally-free").unwrap();
    let cases = vec![lf.clone(), lf.direct_sum(&lf).unwrap(), trivial(&Rationals, 3, 2)];
    for m in cases {
        let class = classify(&m, &Budget::default()).unwrap();
        assert_eq!(class.level, Regularity::LocallyFree);
        let dual = m.dualize(class.level).unwrap();
        let (t, td) = (table(&m), table(&dual));
        for p in 0..4 {
            for k in -6..=2 {
                assert_eq!(t.get(p, k), td.get(3 - p, -k - 4), "p={p} k={k}");
            }
        }
        assert!(dual_vanishing_check(&m, &Budget::default()).unwrap().pass);
    }
}

#[test]
fn direct_sum_is_additive() {
    let names = ["torsion-free", "reflexive", "locally-free"];
    for a in names {
        for b in names {
            let (ma, mb) = (example(a).unwrap(), example(b).unwrap());
            let sum = table(&ma.direct_sum(&mb).unwrap());
            assert_eq!(sum, table(&ma).add(&table(&mb)).unwrap(), "{a} + {b}");
        }
    }
}

#[test]
fn golden_tables_match_the_instanton_pattern() {
    for name in ["torsion-free", "reflexive", "locally-free"] {
        let m = example(name).unwrap();
        let t = table(&m);
        assert_eq!(t.get(1, -1), Some(1), "{name}");
        assert_eq!(t.get(2, -3), Some(1), "{name}");
        assert!(admissibility_check(&m, -6, 2).unwrap().pass, "{name}");
    }
}

fn dims() -> impl Strategy<Value = (usize, usize, usize)> {
    (0usize..=2, 1usize..=8, 0usize..=2)
        .prop_filter("representable with positive rank", |&(v, w, vp)| {
            w > v + vp && ((v == 0 && vp == 0) || floystad_exists(v, w, vp))
        })
}

fn check_random<F: Field>(m: &SpecialMonad<F>) {
    let (v, w, vp) = m.dims();
    let t = table(m);
    for k in -6..=2 {
        assert_eq!(t.euler_characteristic(k), chi_oracle(3, (v, w, vp), k), "k={k}");
    }
    assert!(admissibility_check(m, -6, 2).unwrap().pass);
    assert_eq!(t.get(1, -1), Some(vp));
    assert_eq!(t.get(2, -3), Some(v));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn random_rational_monads_are_admissible(d in dims(), seed in any::<u64>()) {
        let m = random_monad(d.0, d.1, d.2, seed, &Rationals).unwrap();
        check_random(&m);
    }

    #[test]
    fn random_prime_monads_are_admissible(d in dims(), seed in any::<u64>()) {
        let m = random_monad(d.0, d.1, d.2, seed, &PrimeField::new(32003).unwrap()).unwrap();
        check_random(&m);
    }
}
