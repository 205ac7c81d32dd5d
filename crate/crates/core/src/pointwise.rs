//! Pointwise evaluation of linear-form matrices and the regularity of the
//! cohomology sheaf via the degeneracy locus of the left map.
//!
//! A matrix whose short side is 1 degenerates on a linear subspace, found
//! exactly. Otherwise emptiness is certified exactly when the graded
//! multiplication map of the wide orientation is surjective in some degree
//! (the cokernel module then has finite length, so no point degenerates).
//! Failing that, the locus dimension is estimated over `F_p` by slicing with
//! random linear subspaces.

use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::{BinaryGcd, DenseMatrix, Field, FieldKind, LinearFormMatrix, Poly, PrimeField, DEFAULT_PRIME};
use crate::monad::{Regularity, SpecialMonad};
use crate::rng;

/// Resources for the non-exact paths.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    pub prime: u64,
    /// Random slices per codimension.
    pub slices: usize,
    pub seed: u64,
    /// Highest degree tried for the surjectivity certificate.
    pub certificate_degree: i64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            prime: DEFAULT_PRIME,
            slices: 50,
            seed: 0,
            certificate_degree: 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Confidence {
    Exact,
    MonteCarlo,
    Unknown,
}

impl fmt::Display for Confidence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Confidence::Exact => "exact",
            Confidence::MonteCarlo => "Monte-Carlo",
            Confidence::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    Empty,
    Dim { dim: usize },
    /// Not decided; `at_most` is an upper bound on the dimension when the
    /// slices ruled out the higher ones.
    Unknown { at_most: Option<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Method {
    ExactLinear,
    GradedSurjectivity { degree: i64 },
    FiniteFieldScan { prime: u64, slices: usize, seed: u64 },
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::ExactLinear => write!(f, "exact linear algebra"),
            Method::GradedSurjectivity { degree } => write!(f, "surjective in degree {degree}"),
            Method::FiniteFieldScan { prime, slices, seed } => {
                write!(f, "scan over F_{prime}, {slices} slices, seed {seed}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegeneracyResult {
    pub verdict: Verdict,
    pub method: Method,
    pub confidence: Confidence,
    /// A degenerate point, as a primitive integer vector over `Q` or
    /// normalized residues over `F_p`.
    pub witness: Option<Vec<String>>,
    /// Spanning points of the locus (exact linear case only).
    pub locus_span: Option<Vec<Vec<String>>>,
    pub notes: Vec<String>,
}

impl DegeneracyResult {
    pub fn dim(&self) -> Option<usize> {
        match self.verdict {
            Verdict::Dim { dim } => Some(dim),
            _ => None,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.verdict == Verdict::Empty
    }

    fn empty(method: Method) -> Self {
        DegeneracyResult {
            verdict: Verdict::Empty,
            method,
            confidence: Confidence::Exact,
            witness: None,
            locus_span: None,
            notes: Vec::new(),
        }
    }
}

/// `sum_t point[t] A_t`; the zero vector is rejected.
pub fn evaluate<F: Field>(l: &LinearFormMatrix<F>, point: &[F::Elem]) -> Result<DenseMatrix<F>> {
    if point.iter().all(|x| l.field().is_zero(x)) {
        return Err(Error::ZeroPoint);
    }
    l.evaluate(point)
}

/// Dimension of the locus where `l` has rank below `full_rank`.
pub fn degeneracy_dim<F: Field>(l: &LinearFormMatrix<F>, full_rank: usize, budget: &Budget) -> Result<DegeneracyResult> {
    let short = l.rows().min(l.cols());
    if full_rank != short {
        return Err(Error::Precondition(format!(
            "full rank {full_rank} differs from the short side {short}"
        )));
    }
    if short == 0 {
        return Ok(DegeneracyResult::empty(Method::ExactLinear));
    }
    if short == 1 {
        return Ok(exact_linear(l));
    }
    if let Some(degree) = surjectivity_certificate(l, budget)? {
        return Ok(DegeneracyResult::empty(Method::GradedSurjectivity { degree }));
    }
    slice_scan(l, short, budget)
}

/// Common zeros of the entries of a single row or column.
fn exact_linear<F: Field>(l: &LinearFormMatrix<F>) -> DegeneracyResult {
    let f = l.field();
    let n_vars = l.vars();
    let forms: Vec<Vec<F::Elem>> = (0..l.rows())
        .flat_map(|i| (0..l.cols()).map(move |j| (i, j)))
        .map(|(i, j)| l.entry(i, j))
        .collect();
    let coeffs = DenseMatrix::from_rows(f, forms, n_vars).expect("rectangular");
    let kernel = coeffs.kernel_basis();
    if kernel.cols() == 0 {
        return DegeneracyResult::empty(Method::ExactLinear);
    }
    let span: Vec<Vec<String>> = (0..kernel.cols()).map(|c| f.homogenize(&kernel.column(c))).collect();
    DegeneracyResult {
        verdict: Verdict::Dim { dim: kernel.cols() - 1 },
        method: Method::ExactLinear,
        confidence: Confidence::Exact,
        witness: span.first().cloned(),
        locus_span: Some(span),
        notes: Vec::new(),
    }
}

/// Lowest degree `d <= budget.certificate_degree` in which the wide
/// orientation of `l` gives a surjective multiplication map.
fn surjectivity_certificate<F: Field>(l: &LinearFormMatrix<F>, budget: &Budget) -> Result<Option<i64>> {
    if l.rows() == l.cols() {
        // a square matrix degenerates along its determinant hypersurface
        return Ok(None);
    }
    let wide = if l.rows() < l.cols() { l.clone() } else { l.transpose() };
    // full rank of a reduction mod p implies full rank over Q
    match l.field().kind() {
        FieldKind::Prime(_) => Ok(first_surjective_degree(&wide, budget.certificate_degree)),
        FieldKind::Rational => {
            let p = PrimeField::new(budget.prime)?;
            let f = l.field().clone();
            match wide.map_field(&p, |x| f.reduce_to(x, &p)) {
                Some(reduced) => Ok(first_surjective_degree(&reduced, budget.certificate_degree)),
                None => Ok(first_surjective_degree(&wide, budget.certificate_degree)),
            }
        }
    }
}

fn first_surjective_degree<F: Field>(wide: &LinearFormMatrix<F>, max_degree: i64) -> Option<i64> {
    (0..=max_degree).find(|&d| {
        let m = wide.mult_map(d);
        m.rows() > 0 && m.rank() == m.rows()
    })
}

/// Slice protocol over `F_p`: for `d = n, n-1, ...` intersect with random
/// codimension-`d` subspaces; the first `d` with an `F_p`-rational hit gives
/// `Dim(d)`. Slices of dimension at most 2 are searched exhaustively.
fn slice_scan<F: Field>(l: &LinearFormMatrix<F>, full: usize, budget: &Budget) -> Result<DegeneracyResult> {
    let (p, reduced) = match l.field().kind() {
        FieldKind::Prime(q) => {
            let pf = PrimeField::new(q)?;
            let f = l.field().clone();
            (pf, l.map_field(&pf, |x| f.reduce_to(x, &pf)))
        }
        FieldKind::Rational => {
            let pf = PrimeField::new(budget.prime)?;
            let f = l.field().clone();
            (pf, l.map_field(&pf, |x| f.reduce_to(x, &pf)))
        }
    };
    let method = Method::FiniteFieldScan {
        prime: p.modulus(),
        slices: budget.slices,
        seed: budget.seed,
    };
    let Some(lp) = reduced else {
        return Ok(DegeneracyResult {
            verdict: Verdict::Unknown { at_most: None },
            method,
            confidence: Confidence::Unknown,
            witness: None,
            locus_span: None,
            notes: vec![format!("coefficients do not reduce modulo {}", p.modulus())],
        });
    };
    let n = lp.vars() - 1;
    // tall orientation: minors are taken over row subsets
    let lp = if lp.rows() < lp.cols() { lp.transpose() } else { lp };

    for d in (0..=n).rev() {
        let slice_dim = n - d;
        if slice_dim > 2 {
            return Ok(DegeneracyResult {
                verdict: Verdict::Unknown { at_most: Some(d) },
                method,
                confidence: Confidence::MonteCarlo,
                witness: None,
                locus_span: None,
                notes: vec![format!(
                    "no degenerate F_{}-point on {} random slices of dimension {}; a {}-dimensional slice is too large to enumerate",
                    p.modulus(),
                    budget.slices,
                    slice_dim - 1,
                    slice_dim
                )],
            });
        }
        let hit = if slice_dim == 0 {
            generic_rank_drop(&lp, full, &p, budget, d)
        } else {
            (0..budget.slices)
                .into_par_iter()
                .find_map_first(|i| {
                    let mut r = rng::stream(budget.seed, ((d as u64) << 32) | i as u64);
                    let basis = random_frame(&p, slice_dim + 1, n + 1, &mut r);
                    let sliced = lp.substitute(&basis).expect("slice shape");
                    let local = match slice_dim {
                        1 => line_hit(sliced.coeff(0), sliced.coeff(1), full).map(|(s, t)| vec![s, t]),
                        _ => plane_hit(&sliced, full, &p),
                    }?;
                    Some(combine(&p, &basis, &local))
                })
        };
        if let Some(point) = hit {
            return Ok(DegeneracyResult {
                verdict: Verdict::Dim { dim: d },
                method,
                confidence: Confidence::MonteCarlo,
                witness: Some(normalize(&p, &point)),
                locus_span: None,
                notes: Vec::new(),
            });
        }
    }
    Ok(DegeneracyResult {
        verdict: Verdict::Unknown { at_most: Some(0) },
        method,
        confidence: Confidence::MonteCarlo,
        witness: None,
        locus_span: None,
        notes: vec![format!("no degenerate F_{}-point in projective space", p.modulus())],
    })
}

/// Dimension-`n` test: the rank drops at every sampled point.
fn generic_rank_drop(
    lp: &LinearFormMatrix<PrimeField>,
    full: usize,
    p: &PrimeField,
    budget: &Budget,
    d: usize,
) -> Option<Vec<u64>> {
    let mut first = None;
    for i in 0..budget.slices.clamp(1, 3) {
        let mut r = rng::stream(budget.seed, ((d as u64) << 32) | i as u64);
        let pt = random_frame(p, 1, lp.vars(), &mut r).row(0).to_vec();
        if lp.evaluate(&pt).ok()?.rank() == full {
            return None;
        }
        first.get_or_insert(pt);
    }
    first
}

/// `k` random linearly independent points of `F_p^m`, as rows.
pub(crate) fn random_frame<R: Rng>(p: &PrimeField, k: usize, m: usize, r: &mut R) -> DenseMatrix<PrimeField> {
    loop {
        let rows: Vec<Vec<u64>> = (0..k).map(|_| (0..m).map(|_| p.sample(r, 0)).collect()).collect();
        let mat = DenseMatrix::from_rows(p, rows, m).expect("rectangular");
        if mat.rank() == k {
            return mat;
        }
    }
}

fn combine(p: &PrimeField, basis: &DenseMatrix<PrimeField>, local: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; basis.cols()];
    for (i, c) in local.iter().enumerate() {
        for (o, b) in out.iter_mut().zip(basis.row(i)) {
            *o = p.add(o, &p.mul(c, b));
        }
    }
    out
}

/// Scale so that the first nonzero coordinate is 1.
fn normalize(p: &PrimeField, v: &[u64]) -> Vec<String> {
    let lead = v.iter().find(|x| **x != 0).copied().unwrap_or(1);
    let inv = p.inv(&lead).unwrap_or(1);
    v.iter().map(|x| p.mul(x, &inv).to_string()).collect()
}

/// An `F_p`-point of the plane where the sliced matrix degenerates, found by
/// sweeping the `p + 1` lines through the first frame point.
fn plane_hit(sliced: &LinearFormMatrix<PrimeField>, full: usize, p: &PrimeField) -> Option<Vec<u64>> {
    let (a0, a1, a2) = (sliced.coeff(0), sliced.coeff(1), sliced.coeff(2));
    let through = |b: u64, c: u64| -> DenseMatrix<PrimeField> {
        a1.scale(&b).add(&a2.scale(&c)).expect("same shape")
    };
    let directions = (0..p.modulus()).map(|x| (1, x)).chain(std::iter::once((0, 1)));
    for (b, c) in directions {
        if let Some((s, t)) = line_hit(a0, &through(b, c), full) {
            return Some(vec![s, p.mul(&t, &b), p.mul(&t, &c)]);
        }
    }
    None
}

/// An `F_p`-point `[s:t]` where the tall pencil `s A + t B` drops rank.
fn line_hit(a: &DenseMatrix<PrimeField>, b: &DenseMatrix<PrimeField>, full: usize) -> Option<(u64, u64)> {
    let g = minor_gcd(a, b, full);
    if g.all_zero {
        return Some((1, 0));
    }
    if g.vanishes_at_infinity {
        return Some((0, 1));
    }
    if g.affine_gcd.degree().unwrap_or(0) == 0 || !g.affine_gcd.has_root_in_base_field() {
        return None;
    }
    g.affine_gcd.find_root().map(|x| (1, x))
}

/// Gcd of the maximal (`k x k`) minors of the pencil `s A + t B`, where the
/// matrices are tall; stops once the gcd is a unit.
pub(crate) fn minor_gcd<F: Field>(a: &DenseMatrix<F>, b: &DenseMatrix<F>, k: usize) -> BinaryGcd<F> {
    let f = a.field();
    let (a, b) = if a.rows() < a.cols() {
        (a.transpose(), b.transpose())
    } else {
        (a.clone(), b.clone())
    };
    let mut out = BinaryGcd {
        all_zero: true,
        vanishes_at_infinity: true,
        affine_gcd: Poly::zero(f),
    };
    if k == 0 {
        out.all_zero = false;
        out.vanishes_at_infinity = false;
        out.affine_gcd = Poly::constant(f, f.one());
        return out;
    }
    let mut rows: Vec<usize> = (0..k).collect();
    loop {
        let entries: Vec<Vec<Poly<F>>> = rows
            .iter()
            .map(|&i| {
                (0..k)
                    .map(|j| Poly::new(f, vec![a.get(i, j).clone(), b.get(i, j).clone()]))
                    .collect()
            })
            .collect();
        let minor = poly_det(f, entries);
        if !minor.is_zero() {
            out.all_zero = false;
            if minor.degree() == Some(k) {
                out.vanishes_at_infinity = false;
            }
            out.affine_gcd = out.affine_gcd.gcd(&minor);
            if out.is_unit() {
                return out;
            }
        }
        if !next_combination(&mut rows, a.rows()) {
            return out;
        }
    }
}

/// Advance a sorted `k`-subset of `0..n` in lexicographic order.
pub(crate) fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Determinant of a square polynomial matrix by fraction-free elimination.
fn poly_det<F: Field>(f: &F, mut m: Vec<Vec<Poly<F>>>) -> Poly<F> {
    let n = m.len();
    let mut prev = Poly::constant(f, f.one());
    let mut negate = false;
    for i in 0..n {
        if m[i][i].is_zero() {
            match (i + 1..n).find(|&r| !m[r][i].is_zero()) {
                Some(r) => {
                    m.swap(i, r);
                    negate = !negate;
                }
                None => return Poly::zero(f),
            }
        }
        for r in i + 1..n {
            for c in i + 1..n {
                let num = m[r][c].mul(&m[i][i]).sub(&m[r][i].mul(&m[i][c]));
                m[r][c] = num.divrem(&prev).0;
            }
        }
        prev = m[i][i].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        Poly::zero(f).sub(&d)
    } else {
        d
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub level: Regularity,
    pub confidence: Confidence,
    pub degeneracy: DegeneracyResult,
    pub diagnostics: Vec<String>,
}

impl ClassificationReport {
    /// e.g. `LocallyFree (exact)`.
    pub fn summary(&self) -> String {
        format!("{} ({})", self.level, self.confidence)
    }
}

/// Regularity from the codimension of the degeneracy locus of the left map:
/// torsion-free iff codimension at least 2, reflexive iff at least 3,
/// locally free iff empty.
pub fn level_for_dim(ambient: usize, dim: usize) -> Regularity {
    match ambient.saturating_sub(dim) {
        c if c >= 3 => Regularity::Reflexive,
        2 => Regularity::TorsionFree,
        _ => Regularity::CoherentOnly,
    }
}

pub fn classify<F: Field>(m: &SpecialMonad<F>, budget: &Budget) -> Result<ClassificationReport> {
    let degeneracy = degeneracy_dim(m.alpha(), m.v(), budget)?;
    let n = m.ambient();
    let mut diagnostics = Vec::new();
    let (mut level, confidence) = match degeneracy.verdict {
        Verdict::Empty => (Regularity::LocallyFree, degeneracy.confidence),
        Verdict::Dim { dim } => (level_for_dim(n, dim), degeneracy.confidence),
        Verdict::Unknown { at_most: Some(dim) } => {
            diagnostics.push(format!("degeneracy dimension bounded by {dim}, not decided"));
            (level_for_dim(n, dim), Confidence::MonteCarlo)
        }
        Verdict::Unknown { at_most: None } => (Regularity::CoherentOnly, Confidence::Unknown),
    };
    if m.rank() <= 0 {
        diagnostics.push("rank-0 cohomology sheaf: classified as coherent only".into());
        level = Regularity::CoherentOnly;
    }
    let inv = m.invariants();
    if n == 3 && inv.rank == 2 && level == Regularity::Reflexive && inv.c3 == Some(0) {
        diagnostics.push(
            "warning: rank 2 reflexive but not locally free with c3 = 0 contradicts the rank 2 classification; the degeneracy evidence is suspect"
                .into(),
        );
    }
    Ok(ClassificationReport {
        level,
        confidence,
        degeneracy,
        diagnostics,
    })
}

/// Classify, then dualize when the sheaf is locally free.
pub fn dualize_verified<F: Field>(m: &SpecialMonad<F>, budget: &Budget) -> Result<SpecialMonad<F>> {
    let report = classify(m, budget)?;
    m.dualize(report.level)
}
