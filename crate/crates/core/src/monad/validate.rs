//! The three monad conditions: `beta alpha = 0`, `beta` surjective at every
//! point, `alpha` injective at a generic point.

use serde::Serialize;

use super::SpecialMonad;
use crate::error::Result;
use crate::exactlin::{compose_check, Field};
use crate::pointwise::{degeneracy_dim, Budget, Confidence, Verdict};
use crate::rng;

/// Random points tried before declaring `alpha` generically degenerate.
const INJECTIVITY_TRIES: u64 = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub pass: bool,
    pub confidence: Confidence,
    pub detail: String,
    pub witness: Option<Vec<String>>,
}

impl CheckOutcome {
    fn exact(pass: bool, detail: impl Into<String>) -> Self {
        CheckOutcome {
            pass,
            confidence: Confidence::Exact,
            detail: detail.into(),
            witness: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub composition: CheckOutcome,
    pub beta_surjective: CheckOutcome,
    pub alpha_injective: CheckOutcome,
    /// `w = v + v'`: accepted, but the cohomology sheaf has rank 0.
    pub rank_zero: bool,
    pub overall: bool,
}

impl ValidationReport {
    /// First failing check, for diagnostics.
    pub fn failure(&self) -> Option<(&'static str, &CheckOutcome)> {
        [
            ("composition", &self.composition),
            ("beta surjectivity", &self.beta_surjective),
            ("alpha injectivity", &self.alpha_injective),
        ]
        .into_iter()
        .find(|(_, c)| !c.pass)
    }
}

/// Validate with the default budget.
pub fn validate<F: Field>(m: &SpecialMonad<F>) -> Result<ValidationReport> {
    validate_with(m, &Budget::default())
}

pub fn validate_with<F: Field>(m: &SpecialMonad<F>, budget: &Budget) -> Result<ValidationReport> {
    let composition = if compose_check(m.beta(), m.alpha())? {
        CheckOutcome::exact(true, "beta * alpha vanishes identically")
    } else {
        CheckOutcome::exact(false, "beta * alpha is not zero")
    };
    let beta_surjective = beta_check(m, budget)?;
    let alpha_injective = alpha_check(m);
    let overall = composition.pass && beta_surjective.pass && alpha_injective.pass;
    Ok(ValidationReport {
        composition,
        beta_surjective,
        alpha_injective,
        rank_zero: m.rank() == 0,
        overall,
    })
}

fn beta_check<F: Field>(m: &SpecialMonad<F>, budget: &Budget) -> Result<CheckOutcome> {
    let (w, vp) = (m.w(), m.v_prime());
    if vp == 0 {
        return Ok(CheckOutcome::exact(true, "V' = 0"));
    }
    if w < vp {
        return Ok(CheckOutcome::exact(false, format!("w = {w} < v' = {vp}")));
    }
    let r = degeneracy_dim(m.beta(), vp, budget)?;
    let method = &r.method;
    Ok(match r.verdict {
        Verdict::Empty => CheckOutcome {
            pass: true,
            confidence: r.confidence,
            detail: format!("no point where beta drops rank ({method})"),
            witness: None,
        },
        Verdict::Dim { dim } => CheckOutcome {
            pass: false,
            confidence: r.confidence,
            detail: format!("beta drops rank on a locus of dimension {dim} ({method})"),
            witness: r.witness,
        },
        Verdict::Unknown { .. } => CheckOutcome {
            pass: false,
            confidence: Confidence::Unknown,
            detail: format!("surjectivity of beta not established ({method}); {}", r.notes.join("; ")),
            witness: None,
        },
    })
}

fn alpha_check<F: Field>(m: &SpecialMonad<F>) -> CheckOutcome {
    let (v, w) = (m.v(), m.w());
    if v == 0 {
        return CheckOutcome::exact(true, "V = 0");
    }
    if w < v {
        return CheckOutcome::exact(false, format!("w = {w} < v = {v}"));
    }
    let f = m.field();
    for i in 0..INJECTIVITY_TRIES {
        let mut r = rng::stream(0x0061_6c70_6861, i);
        let point: Vec<F::Elem> = (0..=m.ambient()).map(|_| f.sample(&mut r, 9)).collect();
        if point.iter().all(|x| f.is_zero(x)) {
            continue;
        }
        if m.alpha().evaluate(&point).expect("point size").rank() == v {
            return CheckOutcome {
                pass: true,
                confidence: Confidence::Exact,
                detail: "alpha has full rank at a sampled point".into(),
                witness: Some(f.homogenize(&point)),
            };
        }
    }
    CheckOutcome {
        pass: false,
        confidence: Confidence::MonteCarlo,
        detail: format!("alpha drops rank at {INJECTIVITY_TRIES} random points"),
        witness: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{LinearFormMatrix, Rationals};
    use crate::monad::{example, trivial, EXAMPLE_NAMES};

    #[test]
    fn examples_validate_exactly() {
        for name in EXAMPLE_NAMES {
            let r = validate(&example(name).unwrap()).unwrap();
            assert!(r.overall, "{name}");
            assert_eq!(r.beta_surjective.confidence, Confidence::Exact);
            assert!(!r.rank_zero);
        }
    }

    #[test]
    fn beta_with_common_zero_fails() {
        let q = Rationals;
        let alpha = LinearFormMatrix::zeros(&q, 4, 0, 4);
        let beta = LinearFormMatrix::from_i64(
            &q,
            4,
            &[vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, 0]]],
        );
        let m = SpecialMonad::new(3, alpha, beta).unwrap();
        let r = validate(&m).unwrap();
        assert!(!r.overall);
        assert!(!r.beta_surjective.pass);
        assert_eq!(r.beta_surjective.witness.as_deref(), Some(&["0", "0", "0", "1"].map(String::from)[..]));
        assert_eq!(r.failure().unwrap().0, "beta surjectivity");
    }

    #[test]
    fn zero_alpha_is_not_injective() {
        let q = Rationals;
        let m = SpecialMonad::new(3, LinearFormMatrix::zeros(&q, 4, 1, 4), LinearFormMatrix::zeros(&q, 0, 4, 4)).unwrap();
        let r = validate(&m).unwrap();
        assert!(!r.alpha_injective.pass);
    }

    #[test]
    fn rank_zero_is_flagged() {
        let m = trivial(&Rationals, 3, 0);
        let r = validate(&m).unwrap();
        assert!(r.overall && r.rank_zero);
    }
}
