//! Twist cohomology of the cohomology sheaf `E` of a special monad.
//!
//! With `K = ker beta`, the sequences `0 -> K -> W(k) -> V'(k+1) -> 0` and
//! `0 -> V(k-1) -> K(k) -> E(k) -> 0` reduce every `h^p(E(k))` to ranks of
//! multiplication maps. Top-degree groups are computed on the dual side
//! through Serre duality for line bundles, at the dual twist `j = -k-n-1`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::{graded_dim, Field};
use crate::monad::{Regularity, SpecialMonad};
use crate::pointwise::{classify, Budget, ClassificationReport};

/// Twists every admissibility check must cover.
pub const REQUIRED_WINDOW: (i64, i64) = (-6, 2);

/// `chi(O(d))` on `P^n`, as a polynomial in `d`.
pub fn chi_line_bundle(n: usize, d: i64) -> i64 {
    match n {
        2 => (d + 1) * (d + 2) / 2,
        3 => (d + 1) * (d + 2) * (d + 3) / 6,
        _ => panic!("unsupported ambient dimension {n}"),
    }
}

/// `chi(E(k)) = w chi(k) - v chi(k-1) - v' chi(k+1)`.
pub fn expected_euler_characteristic(n: usize, (v, w, vp): (usize, usize, usize), k: i64) -> i64 {
    w as i64 * chi_line_bundle(n, k) - v as i64 * chi_line_bundle(n, k - 1) - vp as i64 * chi_line_bundle(n, k + 1)
}

/// `(h^0, ..., h^n)` of `E(k)`.
pub fn twist_cohomology<F: Field>(m: &SpecialMonad<F>, k: i64) -> Vec<usize> {
    let n = m.ambient();
    let vars = n + 1;
    let (v, w, vp) = m.dims();
    let s = |d: i64| graded_dim(vars, d);
    let alpha_t = m.alpha().transpose();
    let beta_t = m.beta().transpose();

    let rank_alpha = m.alpha().mult_map(k - 1).rank();
    let rank_beta = m.beta().mult_map(k).rank();
    let j = -k - vars as i64;
    let rank_alpha_dual = alpha_t.mult_map(j).rank();
    let rank_beta_dual = beta_t.mult_map(j - 1).rank();

    let h0 = w * s(k) - rank_beta - rank_alpha;
    let coker_beta = vp * s(k + 1) - rank_beta;
    let coker_alpha_dual = v * s(j + 1) - rank_alpha_dual;
    let top = w * s(j) - rank_alpha_dual - rank_beta_dual;
    match n {
        3 => vec![h0, coker_beta, coker_alpha_dual, top],
        2 => vec![h0, coker_beta + coker_alpha_dual, top],
        _ => unreachable!("ambient dimension is 2 or 3"),
    }
}

/// `h[p][k - k_min]` over a window of twists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CohomologyTable {
    pub ambient: usize,
    pub dims: (usize, usize, usize),
    pub k_min: i64,
    pub k_max: i64,
    pub h: Vec<Vec<usize>>,
}

impl CohomologyTable {
    /// Build from explicit entries, checking the shape.
    pub fn from_entries(ambient: usize, dims: (usize, usize, usize), k_min: i64, h: Vec<Vec<usize>>) -> Result<Self> {
        let width = h.first().map_or(0, |r| r.len());
        if h.len() != ambient + 1 || width == 0 || h.iter().any(|r| r.len() != width) {
            return Err(Error::DimensionMismatch("cohomology table shape".into()));
        }
        Ok(CohomologyTable {
            ambient,
            dims,
            k_min,
            k_max: k_min + width as i64 - 1,
            h,
        })
    }

    pub fn twists(&self) -> impl Iterator<Item = i64> {
        self.k_min..=self.k_max
    }

    pub fn get(&self, p: usize, k: i64) -> Option<usize> {
        if k < self.k_min || k > self.k_max {
            return None;
        }
        self.h.get(p).map(|row| row[(k - self.k_min) as usize])
    }

    pub fn column(&self, k: i64) -> Vec<usize> {
        (0..=self.ambient).map(|p| self.get(p, k).expect("twist in window")).collect()
    }

    pub fn euler_characteristic(&self, k: i64) -> i64 {
        self.column(k)
            .iter()
            .enumerate()
            .map(|(p, h)| if p % 2 == 0 { *h as i64 } else { -(*h as i64) })
            .sum()
    }

    /// Twists where the alternating sum disagrees with the Chern-data value.
    pub fn euler_mismatches(&self) -> Vec<i64> {
        self.twists()
            .filter(|&k| self.euler_characteristic(k) != expected_euler_characteristic(self.ambient, self.dims, k))
            .collect()
    }

    /// Entrywise sum of two tables over the same window.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.ambient, self.k_min, self.k_max) != (other.ambient, other.k_min, other.k_max) {
            return Err(Error::DimensionMismatch("tables cover different windows".into()));
        }
        let h = self
            .h
            .iter()
            .zip(&other.h)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
            .collect();
        let dims = (self.dims.0 + other.dims.0, self.dims.1 + other.dims.1, self.dims.2 + other.dims.2);
        CohomologyTable::from_entries(self.ambient, dims, self.k_min, h)
    }

    /// Rows `p`, columns `k`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p");
        for k in self.twists() {
            out.push_str(&format!(",{k}"));
        }
        out.push('\n');
        for (p, row) in self.h.iter().enumerate() {
            out.push_str(&p.to_string());
            for h in row {
                out.push_str(&format!(",{h}"));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let ks: Vec<String> = self.twists().map(|k| k.to_string()).collect();
        let mut out = format!("| h^p(E(k)) | {} |\n", ks.join(" | "));
        out.push_str(&format!("|---|{}\n", "---|".repeat(ks.len())));
        for (p, row) in self.h.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|h| h.to_string()).collect();
            out.push_str(&format!("| p = {p} | {} |\n", cells.join(" | ")));
        }
        out
    }
}

/// Table over `[k_min, k_max]`; every column is checked against the Euler
/// characteristic identity.
pub fn cohomology_table<F: Field>(m: &SpecialMonad<F>, k_min: i64, k_max: i64) -> Result<CohomologyTable> {
    if k_min > k_max {
        return Err(Error::Precondition(format!("empty twist window [{k_min}, {k_max}]")));
    }
    let columns: Vec<Vec<usize>> = (k_min..=k_max)
        .into_par_iter()
        .map(|k| twist_cohomology(m, k))
        .collect();
    let h = (0..=m.ambient())
        .map(|p| columns.iter().map(|c| c[p]).collect())
        .collect();
    let table = CohomologyTable::from_entries(m.ambient(), m.dims(), k_min, h)?;
    let bad = table.euler_mismatches();
    if !bad.is_empty() {
        return Err(Error::EngineInvariant(format!("Euler characteristic mismatch at twists {bad:?}")));
    }
    Ok(table)
}

/// A nonzero entry where the vanishing pattern demands zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub p: usize,
    pub k: i64,
    pub h: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    pub ambient: usize,
    pub k_min: i64,
    pub k_max: i64,
    pub violations: Vec<Violation>,
    pub pass: bool,
}

/// Whether `h^p(E(k))` must vanish. On `P^3`: `p <= 1, p + k <= -1` or
/// `p >= 2, p + k >= 0`. On `P^2` the instanton conditions: `h^0(E(k)) = 0`
/// for `k <= -1` and `h^2(E(k)) = 0` for `k >= -2`.
pub fn must_vanish(ambient: usize, p: usize, k: i64) -> bool {
    let pk = p as i64 + k;
    match ambient {
        3 => (p <= 1 && pk <= -1) || (p >= 2 && pk >= 0),
        2 => (p == 0 && k <= -1) || (p == 2 && k >= -2),
        _ => false,
    }
}

impl AdmissibilityReport {
    pub fn from_table(table: &CohomologyTable) -> Self {
        let mut violations = Vec::new();
        for p in 0..=table.ambient {
            for k in table.twists() {
                let h = table.get(p, k).expect("in window");
                if h != 0 && must_vanish(table.ambient, p, k) {
                    violations.push(Violation { p, k, h });
                }
            }
        }
        AdmissibilityReport {
            ambient: table.ambient,
            k_min: table.k_min,
            k_max: table.k_max,
            pass: violations.is_empty(),
            violations,
        }
    }
}

pub fn admissibility_check<F: Field>(m: &SpecialMonad<F>, k_min: i64, k_max: i64) -> Result<AdmissibilityReport> {
    if k_min > REQUIRED_WINDOW.0 || k_max < REQUIRED_WINDOW.1 {
        return Err(Error::WindowTooSmall(k_min, k_max));
    }
    Ok(AdmissibilityReport::from_table(&cohomology_table(m, k_min, k_max)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityVerdict {
    Stable,
    SemistableNotStable,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilityReport {
    pub rank: i64,
    pub c1: i64,
    pub regularity: Regularity,
    pub h0: usize,
    /// `h^0(E*)`, computed only for locally free sheaves.
    pub h0_dual: Option<usize>,
    pub semistable: Option<bool>,
    pub stable: Option<bool>,
    pub verdict: StabilityVerdict,
    pub criterion: String,
    pub notes: Vec<String>,
}

/// The cohomological stability criteria on `P^3`:
///
/// * rank 2, torsion-free, `c1 = 0`: semistable;
/// * rank 3, reflexive, `c1 = 0`: semistable;
/// * a semistable admissible torsion-free sheaf with `c1 = 0` is stable iff `h^0(E) = 0`.
pub fn stability_report<F: Field>(m: &SpecialMonad<F>, class: &ClassificationReport) -> Result<StabilityReport> {
    let inv = m.invariants();
    let h0 = twist_cohomology(m, 0)[0];
    let h0_dual = if class.level == Regularity::LocallyFree {
        Some(twist_cohomology(&m.dualize(class.level)?, 0)[0])
    } else {
        None
    };
    let mut notes = Vec::new();
    let hypothesis = match (m.ambient(), inv.rank, inv.c1) {
        (3, 2, 0) if class.level.at_least(Regularity::TorsionFree) => Some("rank 2 torsion-free with c1 = 0"),
        (3, 3, 0) if class.level.at_least(Regularity::Reflexive) => Some("rank 3 reflexive with c1 = 0"),
        _ => None,
    };
    let (semistable, stable, verdict, criterion) = match hypothesis {
        Some(h) => {
            let stable = h0 == 0;
            if inv.rank == 3 {
                match h0_dual {
                    Some(hd) if stable && hd != 0 => notes.push(format!(
                        "h^0(E*) = {hd}: the sufficient condition h^0(E) = h^0(E*) = 0 does not apply"
                    )),
                    None => notes.push("h^0(E*) not computed (E not known to be locally free)".into()),
                    _ => {}
                }
            }
            let verdict = if stable {
                StabilityVerdict::Stable
            } else {
                StabilityVerdict::SemistableNotStable
            };
            (
                Some(true),
                Some(stable),
                verdict,
                format!("{h}: semistable; stable iff h^0(E) = 0"),
            )
        }
        None => {
            if m.ambient() != 3 {
                notes.push("the stability criteria are stated on P^3".into());
            }
            (
                None,
                None,
                StabilityVerdict::Inconclusive,
                "no criterion applies; h^0 values reported".into(),
            )
        }
    };
    Ok(StabilityReport {
        rank: inv.rank,
        c1: inv.c1,
        regularity: class.level,
        h0,
        h0_dual,
        semistable,
        stable,
        verdict,
        criterion,
        notes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DualVanishingReport {
    /// `(k, h^0(E*(k)))` for `k` in `[-5, -1]`.
    pub values: Vec<(i64, usize)>,
    pub pass: bool,
}

/// `h^0(E*(k)) = 0` for `k <= -1`, checked on `[-5, -1]`; requires a
/// locally free sheaf.
pub fn dual_vanishing_check<F: Field>(m: &SpecialMonad<F>, budget: &Budget) -> Result<DualVanishingReport> {
    let class = classify(m, budget)?;
    let dual = m.dualize(class.level)?;
    let values: Vec<(i64, usize)> = (-5..=-1).map(|k| (k, twist_cohomology(&dual, k)[0])).collect();
    Ok(DualVanishingReport {
        pass: values.iter().all(|(_, h)| *h == 0),
        values,
    })
}
