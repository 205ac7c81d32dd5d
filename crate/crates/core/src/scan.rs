//! Sampling lines and scanning splitting types: trivial-splitting witnesses,
//! jumping-line statistics over `F_p`, codimension scaling and uniformity.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::{DenseMatrix, Field, PrimeField};
use crate::monad::{Regularity, SpecialMonad};
use crate::pencil::{line_status, restrict, splitting_type, Line, LineStatus, LineSummary};
use crate::pointwise::{classify, Budget};
use crate::rng;

pub const MAX_WITNESSES: usize = 32;
pub const MAX_SAMPLES: usize = 1_000_000;

/// Half-width of the integer box for line coordinates over `Q`.
const LINE_BOUND: i64 = 9;

/// The `index`-th line of the stream `seed` in `P^n`.
pub fn sample_line<F: Field>(seed: u64, index: u64, field: &F, ambient: usize) -> Line<F> {
    let mut r = rng::stream(seed, index);
    loop {
        let rows: Vec<Vec<F::Elem>> = (0..2)
            .map(|_| (0..=ambient).map(|_| field.sample(&mut r, LINE_BOUND)).collect())
            .collect();
        let m = DenseMatrix::from_rows(field, rows, ambient + 1).expect("rectangular");
        if let Ok(l) = Line::new(m) {
            return l;
        }
    }
}

/// Every line of `P^3(F_p)`, one per reduced row echelon form.
pub fn enumerate_lines(p: &PrimeField) -> Vec<Line<PrimeField>> {
    let q = p.modulus();
    let mut out = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            // free entries: row 0 after i except j, row 1 after j
            let free0: Vec<usize> = (i + 1..4).filter(|&c| c != j).collect();
            let free1: Vec<usize> = (j + 1..4).collect();
            let n_free = free0.len() + free1.len();
            for code in 0..q.pow(n_free as u32) {
                let mut digits = code;
                let mut r0 = vec![0u64; 4];
                let mut r1 = vec![0u64; 4];
                r0[i] = 1;
                r1[j] = 1;
                for &c in free0.iter() {
                    r0[c] = digits % q;
                    digits /= q;
                }
                for &c in free1.iter() {
                    r1[c] = digits % q;
                    digits /= q;
                }
                out.push(Line::from_points(p, r0, r1).expect("echelon rows are independent"));
            }
        }
    }
    out
}

/// Outcome of restricting to one line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum LineOutcome {
    Split { splitting: Vec<i64> },
    Degenerate { gcd: String },
}

impl LineOutcome {
    pub fn is_jumping(&self) -> bool {
        matches!(self, LineOutcome::Split { splitting } if splitting.iter().any(|a| *a != 0))
    }
}

fn outcome<F: Field>(m: &SpecialMonad<F>, line: &Line<F>) -> Result<LineOutcome> {
    let pc = restrict(m, line)?;
    if let LineStatus::AlphaDegenerate { gcd } = line_status(&pc) {
        return Ok(LineOutcome::Degenerate { gcd });
    }
    Ok(LineOutcome::Split {
        splitting: splitting_type(&pc)?.degrees,
    })
}

fn splitting_label(s: &[i64]) -> String {
    let parts: Vec<String> = s.iter().map(|a| a.to_string()).collect();
    format!("({})", parts.join(", "))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineRecord {
    pub index: u64,
    pub line: LineSummary,
    #[serde(flatten)]
    pub outcome: LineOutcome,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrivialSplittingReport {
    pub field: String,
    pub seed: u64,
    pub samples_tried: usize,
    pub certified: bool,
    pub verdict: String,
    pub witness: Option<LineRecord>,
    /// Splitting label (or `degenerate`) -> count over the lines tried.
    pub spectrum: BTreeMap<String, usize>,
}

/// Look for a line with trivial splitting among `samples` sampled lines,
/// stopping at the first one.
pub fn trivial_splitting_test<F: Field>(m: &SpecialMonad<F>, samples: usize, seed: u64) -> Result<TrivialSplittingReport> {
    check_samples(samples)?;
    let mut spectrum = BTreeMap::new();
    let mut witness = None;
    let mut tried = 0;
    for index in 0..samples as u64 {
        tried += 1;
        let line = sample_line(seed, index, m.field(), m.ambient());
        let out = outcome(m, &line)?;
        let label = match &out {
            LineOutcome::Split { splitting } => splitting_label(splitting),
            LineOutcome::Degenerate { .. } => "degenerate".into(),
        };
        *spectrum.entry(label).or_insert(0) += 1;
        if matches!(&out, LineOutcome::Split { .. }) && !out.is_jumping() {
            witness = Some(LineRecord {
                index,
                line: line.summary(),
                outcome: out,
            });
            break;
        }
    }
    let certified = witness.is_some();
    let verdict = if certified {
        "trivial splitting type certified".to_string()
    } else {
        format!("no trivial splitting among {tried} sampled lines")
    };
    Ok(TrivialSplittingReport {
        field: m.field().kind().to_string(),
        seed,
        samples_tried: tried,
        certified,
        verdict,
        witness,
        spectrum,
    })
}

fn check_samples(samples: usize) -> Result<()> {
    if samples > MAX_SAMPLES {
        return Err(Error::SampleCap(samples, MAX_SAMPLES));
    }
    Ok(())
}

fn require_locally_free<F: Field>(m: &SpecialMonad<F>, budget: &Budget) -> Result<()> {
    let class = classify(m, budget)?;
    if class.level != Regularity::LocallyFree {
        return Err(Error::NotLocallyFree(class.summary()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanReport {
    pub monad: String,
    pub field: String,
    pub prime: u64,
    pub samples: usize,
    pub seed: u64,
    pub jumping: usize,
    pub degenerate: usize,
    pub fraction: f64,
    pub spectrum: BTreeMap<String, usize>,
    pub witnesses: Vec<LineRecord>,
    #[serde(skip)]
    pub records: Vec<LineRecord>,
}

impl ScanReport {
    /// One JSON object per sampled line.
    pub fn to_jsonl(&self) -> Result<String> {
        let mut out = String::new();
        for r in &self.records {
            out.push_str(&serde_json::to_string(r)?);
            out.push('\n');
        }
        Ok(out)
    }

    pub fn csv_header() -> &'static str {
        "prime,samples,jumping,fraction"
    }

    pub fn csv_row(&self) -> String {
        format!("{},{},{},{}", self.prime, self.samples, self.jumping, self.fraction)
    }
}

/// Splitting types on `samples` random lines over `F_p`; requires a locally
/// free sheaf with `c1 = 0`.
pub fn jumping_scan<F: Field>(m: &SpecialMonad<F>, p: u64, samples: usize, seed: u64, budget: &Budget) -> Result<ScanReport> {
    check_samples(samples)?;
    require_locally_free(m, budget)?;
    let c1 = m.invariants().c1;
    if c1 != 0 {
        return Err(Error::Precondition(format!("jumping lines are scanned for c1 = 0, got c1 = {c1}")));
    }
    let pf = PrimeField::new(p)?;
    let mp = m.reduce_mod(&pf)?;
    let records: Vec<LineRecord> = (0..samples as u64)
        .into_par_iter()
        .map(|index| {
            let line = sample_line(seed, index, &pf, mp.ambient());
            outcome(&mp, &line).map(|outcome| LineRecord {
                index,
                line: line.summary(),
                outcome,
            })
        })
        .collect::<Result<_>>()?;
    Ok(summarize(m.describe(), &pf, samples, seed, records))
}

fn summarize(monad: String, pf: &PrimeField, samples: usize, seed: u64, records: Vec<LineRecord>) -> ScanReport {
    let mut spectrum = BTreeMap::new();
    let mut jumping = 0;
    let mut degenerate = 0;
    let mut witnesses = Vec::new();
    for r in &records {
        let label = match &r.outcome {
            LineOutcome::Split { splitting } => splitting_label(splitting),
            LineOutcome::Degenerate { .. } => {
                degenerate += 1;
                "degenerate".into()
            }
        };
        *spectrum.entry(label).or_insert(0) += 1;
        if r.outcome.is_jumping() {
            jumping += 1;
            if witnesses.len() < MAX_WITNESSES {
                witnesses.push(r.clone());
            }
        }
    }
    ScanReport {
        monad,
        field: pf.kind().to_string(),
        prime: pf.modulus(),
        samples,
        seed,
        jumping,
        degenerate,
        fraction: if samples == 0 { 0.0 } else { jumping as f64 / samples as f64 },
        spectrum,
        witnesses,
        records,
    }
}

/// Counts over every line of `P^3(F_p)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExhaustiveCount {
    pub prime: u64,
    pub lines: usize,
    pub jumping: usize,
    pub degenerate: usize,
}

pub fn exhaustive_count<F: Field>(m: &SpecialMonad<F>, p: u64) -> Result<ExhaustiveCount> {
    if m.ambient() != 3 {
        return Err(Error::Precondition("exhaustive line enumeration is implemented on P^3".into()));
    }
    let pf = PrimeField::new(p)?;
    let mp = m.reduce_mod(&pf)?;
    let lines = enumerate_lines(&pf);
    let outcomes: Vec<LineOutcome> = lines.par_iter().map(|l| outcome(&mp, l)).collect::<Result<_>>()?;
    Ok(ExhaustiveCount {
        prime: p,
        lines: lines.len(),
        jumping: outcomes.iter().filter(|o| o.is_jumping()).count(),
        degenerate: outcomes.iter().filter(|o| matches!(o, LineOutcome::Degenerate { .. })).count(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrimeRow {
    pub prime: u64,
    pub samples: usize,
    pub jumping: usize,
    pub fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CodimReport {
    pub seed: u64,
    pub rows: Vec<PrimeRow>,
    /// `e` in `fraction ~ c / p^e`.
    pub exponent: Option<f64>,
    pub tolerance: f64,
    pub verdict: String,
}

impl CodimReport {
    pub fn to_csv(&self) -> String {
        let mut out = format!("{}\n", ScanReport::csv_header());
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{}\n", r.prime, r.samples, r.jumping, r.fraction));
        }
        out
    }
}

pub const EXPONENT_TOLERANCE: f64 = 0.5;

/// Least-squares slope of `ln y` against `ln x`, negated.
pub fn scaling_exponent(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 || points.iter().any(|(x, y)| *x <= 0.0 || *y <= 0.0) {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|(x, y)| (x.ln(), y.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(-sxy / sxx)
}

/// Verdict text for an exponent estimate.
pub fn codim_verdict(exponent: Option<f64>, rows: &[PrimeRow], rank: i64) -> String {
    if rows.iter().all(|r| r.jumping == 0) {
        return "empty jumping locus".into();
    }
    if rank != 2 {
        return "no verdict (the codimension statement concerns rank 2)".into();
    }
    match exponent {
        None => "inconclusive (need nonzero counts at two or more distinct primes)".into(),
        Some(e) if (e - 1.0).abs() <= EXPONENT_TOLERANCE => "consistent with codimension 1".into(),
        Some(_) => "not consistent with codimension 1".into(),
    }
}

/// Jumping fractions across primes and the fitted scaling exponent.
pub fn codim_evidence<F: Field>(
    m: &SpecialMonad<F>,
    primes: &[u64],
    samples: usize,
    seed: u64,
    budget: &Budget,
) -> Result<CodimReport> {
    let mut rows = Vec::new();
    for &p in primes {
        let r = jumping_scan(m, p, samples, seed, budget)?;
        rows.push(PrimeRow {
            prime: p,
            samples,
            jumping: r.jumping,
            fraction: r.fraction,
        });
    }
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.prime as f64, r.fraction)).collect();
    let exponent = scaling_exponent(&pts);
    let verdict = codim_verdict(exponent, &rows, m.rank());
    Ok(CodimReport {
        seed,
        rows,
        exponent,
        tolerance: EXPONENT_TOLERANCE,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniformityReport {
    pub field: String,
    pub seed: u64,
    pub lines: usize,
    pub spectrum: BTreeMap<String, usize>,
    pub refuted: bool,
    pub verdict: String,
    /// A line whose splitting differs from the most common one.
    pub witness: Option<LineRecord>,
    pub note: Option<String>,
}

/// Compare splitting types on sampled lines plus `extra` lines (indexed
/// after the samples). Uniformity is never certified, only refuted.
pub fn uniformity_evidence<F: Field>(
    m: &SpecialMonad<F>,
    samples: usize,
    seed: u64,
    extra: &[Line<F>],
    budget: &Budget,
) -> Result<UniformityReport> {
    check_samples(samples)?;
    require_locally_free(m, budget)?;
    let sampled = (0..samples as u64).map(|i| (i, sample_line(seed, i, m.field(), m.ambient())));
    let all: Vec<(u64, Line<F>)> = sampled
        .chain(extra.iter().enumerate().map(|(i, l)| ((samples + i) as u64, l.clone())))
        .collect();
    let records: Vec<LineRecord> = all
        .par_iter()
        .map(|(index, line)| {
            outcome(m, line).map(|outcome| LineRecord {
                index: *index,
                line: line.summary(),
                outcome,
            })
        })
        .collect::<Result<_>>()?;
    let mut spectrum: BTreeMap<String, usize> = BTreeMap::new();
    for r in &records {
        if let LineOutcome::Split { splitting } = &r.outcome {
            *spectrum.entry(splitting_label(splitting)).or_insert(0) += 1;
        }
    }
    let common = spectrum
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
        .map(|(k, _)| k.clone());
    let witness = records
        .iter()
        .find(|r| match &r.outcome {
            LineOutcome::Split { splitting } => Some(splitting_label(splitting)) != common,
            LineOutcome::Degenerate { .. } => false,
        })
        .cloned();
    let refuted = witness.is_some();
    let inv = m.invariants();
    let note = if refuted {
        None
    } else if inv.rank == 2 && inv.c1 == 0 && common.as_deref() == Some("(0, 0)") {
        Some(if inv.c2 != 0 {
            format!(
                "a uniform admissible locally-free rank 2 sheaf with c1 = 0 is trivial, so c2 = {} forces jumping lines that these samples missed",
                inv.c2
            )
        } else {
            "consistent with the trivial bundle (c2 = 0)".into()
        })
    } else if inv.c2 == 0 && inv.c1 == 0 {
        Some("consistent with the trivial bundle (c2 = 0)".into())
    } else {
        None
    };
    Ok(UniformityReport {
        field: m.field().kind().to_string(),
        seed,
        lines: records.len(),
        spectrum,
        refuted,
        verdict: if refuted {
            "uniformity refuted".into()
        } else {
            "uniformity not refuted".into()
        },
        witness,
        note,
    })
}
