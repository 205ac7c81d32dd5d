//! Restriction of a monad to a line and the cohomology of the restricted
//! complex on `P^1`.
//!
//! On `P^1` with coordinates `s, t` the Čech model uses Laurent monomials
//! `s^a t^b`: `H^0(O(d))` is spanned by those with `a, b >= 0` and `H^1(O(d))`
//! by those with `a, b <= -1`. The hypercohomology of
//! `V(k-1) -> W(k) -> V'(k+1)` then splits into a global-section part, an
//! `H^1` part and one connecting map `d2`, computed by Laurent lifting.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::{graded_dim, DenseMatrix, Field, LinearFormMatrix};
use crate::monad::SpecialMonad;
use crate::pointwise::minor_gcd;

/// A line `[s:t] -> s P[0] + t P[1]` in `P^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Line<F: Field> {
    points: DenseMatrix<F>,
}

impl<F: Field> Line<F> {
    pub fn new(points: DenseMatrix<F>) -> Result<Self> {
        if points.rows() != 2 {
            return Err(Error::DimensionMismatch(format!(
                "a line needs 2 spanning points, got {}",
                points.rows()
            )));
        }
        let r = points.rank();
        if r != 2 {
            return Err(Error::DegenerateLine(r));
        }
        Ok(Line { points })
    }

    pub fn from_points(field: &F, p: Vec<F::Elem>, q: Vec<F::Elem>) -> Result<Self> {
        let cols = p.len();
        Line::new(DenseMatrix::from_rows(field, vec![p, q], cols)?)
    }

    pub fn points(&self) -> &DenseMatrix<F> {
        &self.points
    }

    pub fn field(&self) -> &F {
        self.points.field()
    }

    /// `p_ij = P0_i P1_j - P0_j P1_i` in the order `01, 02, 03, 12, 13, 23`
    /// (lines in `P^3` only).
    pub fn plucker(&self) -> Option<Vec<F::Elem>> {
        if self.points.cols() != 4 {
            return None;
        }
        let f = self.field();
        let (p, q) = (self.points.row(0), self.points.row(1));
        let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        Some(
            pairs
                .iter()
                .map(|&(i, j)| f.sub(&f.mul(&p[i], &q[j]), &f.mul(&p[j], &q[i])))
                .collect(),
        )
    }

    pub fn summary(&self) -> LineSummary {
        let f = self.field();
        LineSummary {
            points: self.points.to_rows().iter().map(|r| r.iter().map(|x| f.format(x)).collect()).collect(),
            plucker: self.plucker().map(|p| f.homogenize(&p)),
        }
    }
}

/// Serializable form of a line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineSummary {
    pub points: Vec<Vec<String>>,
    pub plucker: Option<Vec<String>>,
}

/// The monad restricted to a line: `alpha = s A_s + t A_t`, `beta = s B_s + t B_t`.
#[derive(Clone, Debug, PartialEq)]
pub struct PencilComplex<F: Field> {
    pub v: usize,
    pub w: usize,
    pub v_prime: usize,
    pub a_s: DenseMatrix<F>,
    pub a_t: DenseMatrix<F>,
    pub b_s: DenseMatrix<F>,
    pub b_t: DenseMatrix<F>,
}

impl<F: Field> PencilComplex<F> {
    pub fn new(a_s: DenseMatrix<F>, a_t: DenseMatrix<F>, b_s: DenseMatrix<F>, b_t: DenseMatrix<F>) -> Result<Self> {
        let (w, v) = (a_s.rows(), a_s.cols());
        let vp = b_s.rows();
        let shapes_ok = (a_t.rows(), a_t.cols()) == (w, v)
            && (b_s.cols(), b_t.rows(), b_t.cols()) == (w, vp, w);
        if !shapes_ok {
            return Err(Error::DimensionMismatch("pencil matrices have inconsistent shapes".into()));
        }
        Ok(PencilComplex {
            v,
            w,
            v_prime: vp,
            a_s,
            a_t,
            b_s,
            b_t,
        })
    }

    pub fn field(&self) -> &F {
        self.a_s.field()
    }

    pub fn rank(&self) -> i64 {
        self.w as i64 - self.v as i64 - self.v_prime as i64
    }

    pub fn c1(&self) -> i64 {
        self.v as i64 - self.v_prime as i64
    }

    /// `B_s A_s = 0`, `B_t A_t = 0`, `B_s A_t + B_t A_s = 0`.
    pub fn composes_to_zero(&self) -> bool {
        let ss = self.b_s.mul(&self.a_s).expect("shapes");
        let tt = self.b_t.mul(&self.a_t).expect("shapes");
        let st = self
            .b_s
            .mul(&self.a_t)
            .and_then(|x| x.add(&self.b_t.mul(&self.a_s)?))
            .expect("shapes");
        ss.is_zero() && tt.is_zero() && st.is_zero()
    }

    /// The restricted dual monad, with maps `(beta^T, alpha^T)`.
    pub fn dual(&self) -> Self {
        PencilComplex {
            v: self.v_prime,
            w: self.w,
            v_prime: self.v,
            a_s: self.b_s.transpose(),
            a_t: self.b_t.transpose(),
            b_s: self.a_s.transpose(),
            b_t: self.a_t.transpose(),
        }
    }

    pub fn alpha_forms(&self) -> LinearFormMatrix<F> {
        LinearFormMatrix::new(self.field(), self.w, self.v, vec![self.a_s.clone(), self.a_t.clone()]).expect("shapes")
    }

    pub fn beta_forms(&self) -> LinearFormMatrix<F> {
        LinearFormMatrix::new(self.field(), self.v_prime, self.w, vec![self.b_s.clone(), self.b_t.clone()])
            .expect("shapes")
    }
}

pub fn restrict<F: Field>(m: &SpecialMonad<F>, line: &Line<F>) -> Result<PencilComplex<F>> {
    if line.points().cols() != m.ambient() + 1 {
        return Err(Error::DimensionMismatch(format!(
            "line lives in P^{}, monad in P^{}",
            line.points().cols() - 1,
            m.ambient()
        )));
    }
    if line.field() != m.field() {
        return Err(Error::FieldMismatch);
    }
    let (p, q) = (line.points().row(0), line.points().row(1));
    PencilComplex::new(
        m.alpha().evaluate(p)?,
        m.alpha().evaluate(q)?,
        m.beta().evaluate(p)?,
        m.beta().evaluate(q)?,
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LineStatus {
    Clean,
    /// `alpha` drops rank somewhere on the line; `gcd` is the gcd of its
    /// maximal minors in the affine coordinate `t/s`.
    AlphaDegenerate { gcd: String },
}

/// Clean iff the maximal minors of the restricted `alpha` have no common
/// root over the algebraic closure.
pub fn line_status<F: Field>(pc: &PencilComplex<F>) -> LineStatus {
    if pc.v == 0 {
        return LineStatus::Clean;
    }
    if pc.w < pc.v {
        return LineStatus::AlphaDegenerate { gcd: "0".into() };
    }
    let g = minor_gcd(&pc.a_s, &pc.a_t, pc.v);
    if g.is_unit() {
        LineStatus::Clean
    } else {
        LineStatus::AlphaDegenerate { gcd: g.describe() }
    }
}

/// Which Laurent monomials of `alpha h` go to the `t`-chart part when lifting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LiftConvention {
    /// Every monomial with `a >= 0` goes to `f_t`.
    SRegularToT,
    /// Monomials regular on both charts go to `f_s` instead.
    BothRegularToS,
}

/// `(h^0, h^1)` of the restricted sheaf twisted by `k`.
pub fn p1_cohomology<F: Field>(pc: &PencilComplex<F>, k: i64) -> Result<(usize, usize)> {
    p1_cohomology_with(pc, k, LiftConvention::SRegularToT)
}

/// Dimension of `H^1(O(d))`.
fn h1_dim(d: i64) -> usize {
    if d <= -2 {
        (-d - 1) as usize
    } else {
        0
    }
}

/// The map `U (x) H^1(O(d)) -> U' (x) H^1(O(d+1))` induced by `s A + t B`.
/// Basis element `s^a t^(d-a)` with `a in [d+1, -1]` has index `-1 - a`.
fn h1_map<F: Field>(a: &DenseMatrix<F>, b: &DenseMatrix<F>, d: i64) -> DenseMatrix<F> {
    let f = a.field();
    let (ns, nd) = (h1_dim(d), h1_dim(d + 1));
    let mut out = DenseMatrix::zeros(f, a.rows() * nd, a.cols() * ns);
    for src in 0..ns {
        let ea = -1 - src as i64;
        let eb = d - ea;
        // s * s^a t^b survives iff a + 1 <= -1; t * s^a t^b iff b + 1 <= -1
        let targets = [(ea + 1, eb, a), (ea, eb + 1, b)];
        for (na, nb, coeff) in targets {
            if na > -1 || nb > -1 {
                continue;
            }
            let dst = (-1 - na) as usize;
            for i in 0..a.rows() {
                for j in 0..a.cols() {
                    let c = coeff.get(i, j);
                    if !f.is_zero(c) {
                        out.add_to(i * nd + dst, j * ns + src, c);
                    }
                }
            }
        }
    }
    out
}

/// Laurent vector: `(component, s-exponent) -> coefficient`; the
/// `t`-exponent is fixed by the degree.
type Laurent<E> = BTreeMap<(usize, i64), E>;

/// Multiply a Laurent vector by `s A + t B`, keeping every monomial.
fn laurent_apply<F: Field>(a: &DenseMatrix<F>, b: &DenseMatrix<F>, x: &Laurent<F::Elem>) -> Laurent<F::Elem> {
    let f = a.field();
    let mut out: Laurent<F::Elem> = BTreeMap::new();
    for (&(j, ea), c) in x {
        for i in 0..a.rows() {
            for (coeff, shift) in [(a, 1), (b, 0)] {
                let m = coeff.get(i, j);
                if f.is_zero(m) {
                    continue;
                }
                let e = out.entry((i, ea + shift)).or_insert_with(|| f.zero());
                *e = f.add(e, &f.mul(m, c));
            }
        }
    }
    out.retain(|_, c| !f.is_zero(c));
    out
}

pub fn p1_cohomology_with<F: Field>(pc: &PencilComplex<F>, k: i64, convention: LiftConvention) -> Result<(usize, usize)> {
    if let LineStatus::AlphaDegenerate { gcd } = line_status(pc) {
        return Err(Error::AlphaDegenerate(gcd));
    }
    clean_cohomology(pc, k, convention)
}

/// `p1_cohomology_with` for a pencil already known to be clean.
fn clean_cohomology<F: Field>(pc: &PencilComplex<F>, k: i64, convention: LiftConvention) -> Result<(usize, usize)> {
    let f = pc.field();
    let (v, w, vp) = (pc.v, pc.w, pc.v_prime);
    let alpha = pc.alpha_forms();
    let beta = pc.beta_forms();

    // global sections
    let alpha_k = alpha.mult_map(k - 1);
    let beta_k = beta.mult_map(k);
    let rank_alpha_k = alpha_k.rank();
    let rank_beta_k = beta_k.rank();
    let ker_beta_k = w * graded_dim(2, k) - rank_beta_k;
    let coker_beta_k = vp * graded_dim(2, k + 1) - rank_beta_k;

    // H^1 level
    let alpha_1 = h1_map(&pc.a_s, &pc.a_t, k - 1);
    let beta_1 = h1_map(&pc.b_s, &pc.b_t, k);
    let rank_alpha_1 = alpha_1.rank();
    let rank_beta_1 = beta_1.rank();
    if rank_beta_1 != vp * h1_dim(k + 1) {
        return Err(Error::EngineInvariant(format!(
            "H^1-level beta map not surjective at twist {k}"
        )));
    }
    let ker_beta_1 = w * h1_dim(k) - rank_beta_1;
    let ker_alpha_1 = alpha_1.kernel_basis();

    // connecting map on ker(alpha_1)
    let n_src = h1_dim(k - 1);
    let dst_len = graded_dim(2, k + 1);
    let mut images = Vec::with_capacity(ker_alpha_1.cols());
    for c in 0..ker_alpha_1.cols() {
        let col = ker_alpha_1.column(c);
        let mut h: Laurent<F::Elem> = BTreeMap::new();
        for j in 0..v {
            for idx in 0..n_src {
                let x = &col[j * n_src + idx];
                if !f.is_zero(x) {
                    h.insert((j, -1 - idx as i64), x.clone());
                }
            }
        }
        let ah = laurent_apply(&pc.a_s, &pc.a_t, &h);
        let mut f_t: Laurent<F::Elem> = BTreeMap::new();
        for (&(i, ea), x) in &ah {
            let eb = k - ea;
            if ea < 0 && eb < 0 {
                return Err(Error::EngineInvariant("kernel element of the H^1-level alpha map does not lift".into()));
            }
            let to_t = match convention {
                LiftConvention::SRegularToT => ea >= 0,
                LiftConvention::BothRegularToS => ea >= 0 && eb < 0,
            };
            if to_t {
                f_t.insert((i, ea), x.clone());
            }
        }
        let bf = laurent_apply(&pc.b_s, &pc.b_t, &f_t);
        let mut image = vec![f.zero(); vp * dst_len];
        for (&(i, ea), x) in &bf {
            let eb = k + 1 - ea;
            if ea < 0 || eb < 0 {
                return Err(Error::EngineInvariant("connecting map leaves the global sections".into()));
            }
            // monomial s^a t^b of degree k+1 has index b
            image[i * dst_len + eb as usize] = x.clone();
        }
        images.push(image);
    }
    let rank_d2 = if images.is_empty() {
        0
    } else {
        let img = DenseMatrix::from_columns(f, vp * dst_len, &images);
        beta_k.hstack(&img)?.rank() - rank_beta_k
    };

    let h0 = (ker_beta_k - rank_alpha_k) + (ker_alpha_1.cols() - rank_d2);
    let h1 = (coker_beta_k - rank_d2) + (ker_beta_1 - rank_alpha_1);
    let chi = pc.rank() * (k + 1) + pc.c1();
    if h0 as i64 - h1 as i64 != chi {
        return Err(Error::EngineInvariant(format!(
            "Euler characteristic on the line: h0 - h1 = {} but expected {chi} at twist {k}",
            h0 as i64 - h1 as i64
        )));
    }
    Ok((h0, h1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TwistDims {
    pub k: i64,
    pub h0: usize,
    pub h1: usize,
}

/// Degrees `a_1 >= ... >= a_r` of `E|_l = sum O(a_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingType {
    pub degrees: Vec<i64>,
    /// Measured `(h0, h1)` on the scan window.
    pub profile: Vec<TwistDims>,
}

impl SplittingType {
    pub fn is_trivial(&self) -> bool {
        self.degrees.iter().all(|a| *a == 0)
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.degrees.iter().map(|a| a.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Scan window `[-v-2, v'+2]`, from `a_i in [-v', v]`.
pub fn scan_window<F: Field>(pc: &PencilComplex<F>) -> (i64, i64) {
    (-(pc.v as i64) - 2, pc.v_prime as i64 + 2)
}

/// Splitting type from `h0` over the scan window: `h0(k) - h0(k-1)` counts
/// the `a_i >= -k`.
pub fn splitting_type<F: Field>(pc: &PencilComplex<F>) -> Result<SplittingType> {
    if let LineStatus::AlphaDegenerate { gcd } = line_status(pc) {
        return Err(Error::AlphaDegenerate(gcd));
    }
    let r = pc.rank();
    if r < 0 {
        return Err(Error::Precondition("negative rank".into()));
    }
    let (lo, hi) = scan_window(pc);
    let profile: Vec<TwistDims> = (lo..=hi)
        .map(|k| clean_cohomology(pc, k, LiftConvention::SRegularToT).map(|(h0, h1)| TwistDims { k, h0, h1 }))
        .collect::<Result<_>>()?;
    let bad = |msg: String| Error::InconsistentReconstruction(msg);
    if profile[0].h0 != 0 {
        return Err(bad(format!("h0 = {} at the bottom twist {lo}", profile[0].h0)));
    }
    // at_least[k - lo] = #{a_i >= -k}
    let at_least: Vec<i64> = profile
        .windows(2)
        .map(|p| p[1].h0 as i64 - p[0].h0 as i64)
        .collect();
    // at_least has entries for k = lo+1 ..= hi
    let count_ge = |x: i64| -> i64 {
        let k = -x;
        if k <= lo {
            0
        } else if k > hi {
            r
        } else {
            at_least[(k - lo - 1) as usize]
        }
    };
    let mut degrees = Vec::new();
    for x in (-hi..=-lo).rev() {
        let n = count_ge(x) - count_ge(x + 1);
        if n < 0 {
            return Err(bad(format!("negative multiplicity for degree {x}")));
        }
        degrees.extend(std::iter::repeat_n(x, n as usize));
    }
    if degrees.len() as i64 != r {
        return Err(bad(format!("recovered {} degrees for rank {r}", degrees.len())));
    }
    if degrees.iter().sum::<i64>() != pc.c1() {
        return Err(bad(format!("degrees {degrees:?} do not sum to c1 = {}", pc.c1())));
    }
    let (vmin, vmax) = (-(pc.v_prime as i64), pc.v as i64);
    if degrees.iter().any(|a| *a < vmin || *a > vmax) {
        return Err(bad(format!("degrees {degrees:?} outside [{vmin}, {vmax}]")));
    }
    for t in &profile {
        let h0: i64 = degrees.iter().map(|a| (a + t.k + 1).max(0)).sum();
        let h1: i64 = degrees.iter().map(|a| (-a - t.k - 1).max(0)).sum();
        if (h0, h1) != (t.h0 as i64, t.h1 as i64) {
            return Err(bad(format!(
                "degrees {degrees:?} predict ({h0}, {h1}) at twist {} but measured ({}, {})",
                t.k, t.h0, t.h1
            )));
        }
    }
    Ok(SplittingType { degrees, profile })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{PrimeField, Rationals};
    use crate::monad::{example, trivial};
    use num_rational::BigRational;

    fn q(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|x| Rationals.from_i64(*x)).collect()
    }

    fn line(p: &[i64], r: &[i64]) -> Line<Rationals> {
        Line::from_points(&Rationals, q(p), q(r)).unwrap()
    }

    #[test]
    fn degenerate_parametrization_rejected() {
        let l = Line::from_points(&Rationals, q(&[1, 0, 0, 0]), q(&[2, 0, 0, 0]));
        assert!(matches!(l, Err(Error::DegenerateLine(1))));
    }

    #[test]
    fn restriction_of_locally_free_example() {
        let lf = example("locally-free").unwrap();
        let pc = restrict(&lf, &line(&[1, 0, 0, 0], &[0, 1, 0, 0])).unwrap();
        let col = |m: &DenseMatrix<Rationals>| m.column(0);
        assert_eq!(col(&pc.a_s), q(&[1, 0, 0, 0]));
        assert_eq!(col(&pc.a_t), q(&[0, 1, 0, 0]));
        assert_eq!(pc.b_s.row(0), &q(&[0, 1, 0, 0])[..]);
        assert_eq!(pc.b_t.row(0), &q(&[-1, 0, 0, 0])[..]);
        assert!(pc.composes_to_zero());
        assert_eq!(line_status(&pc), LineStatus::Clean);
    }

    #[test]
    fn worked_connecting_map() {
        let lf = example("locally-free").unwrap();
        let pc = restrict(&lf, &line(&[1, 0, 0, 0], &[0, 1, 0, 0])).unwrap();
        assert_eq!(p1_cohomology(&pc, -1).unwrap(), (0, 0));
        assert_eq!(p1_cohomology(&pc, 0).unwrap(), (2, 0));
        for k in -4..=3 {
            assert_eq!(
                p1_cohomology_with(&pc, k, LiftConvention::SRegularToT).unwrap(),
                p1_cohomology_with(&pc, k, LiftConvention::BothRegularToS).unwrap()
            );
        }
        assert_eq!(splitting_type(&pc).unwrap().degrees, vec![0, 0]);
    }

    #[test]
    fn torsion_free_singular_line() {
        let tf = example("torsion-free").unwrap();
        let pc = restrict(&tf, &line(&[0, 0, 1, 0], &[0, 0, 0, 1])).unwrap();
        assert!(pc.a_s.is_zero() && pc.a_t.is_zero());
        assert!(matches!(line_status(&pc), LineStatus::AlphaDegenerate { .. }));
        assert!(matches!(splitting_type(&pc), Err(Error::AlphaDegenerate(_))));
        let pc = restrict(&tf, &line(&[1, 0, 0, 0], &[0, 1, 0, 0])).unwrap();
        assert_eq!(line_status(&pc), LineStatus::Clean);
    }

    #[test]
    fn trivial_pencil() {
        let t = trivial(&Rationals, 3, 3);
        let pc = restrict(&t, &line(&[1, 2, 0, 0], &[0, 1, 5, 1])).unwrap();
        assert_eq!(p1_cohomology(&pc, 2).unwrap(), (9, 0));
        assert_eq!(p1_cohomology(&pc, -1).unwrap(), (0, 0));
        assert_eq!(p1_cohomology(&pc, -4).unwrap(), (0, 9));
        assert!(splitting_type(&pc).unwrap().is_trivial());
    }

    #[test]
    fn known_jumping_line() {
        // the span of e0 and e2 lies in the jumping complex p01 = p23
        let lf = example("locally-free").unwrap();
        let pc = restrict(&lf, &line(&[1, 0, 0, 0], &[0, 0, 1, 0])).unwrap();
        let st = splitting_type(&pc).unwrap();
        assert_eq!(st.degrees, vec![1, -1]);
        assert_eq!(st.to_string(), "(1, -1)");
        assert_eq!(p1_cohomology(&pc, -1).unwrap().0, 1);
    }

    #[test]
    fn serre_duality_on_a_line() {
        let lf = example("locally-free").unwrap();
        for l in [line(&[1, 0, 0, 0], &[0, 0, 1, 0]), line(&[1, 2, -1, 3], &[0, 1, 4, -2])] {
            let pc = restrict(&lf, &l).unwrap();
            let dual = pc.dual();
            for k in -5..=3 {
                assert_eq!(p1_cohomology(&pc, k).unwrap().1, p1_cohomology(&dual, -k - 2).unwrap().0);
            }
        }
    }

    #[test]
    fn direct_sum_splitting_is_union() {
        let lf = example("locally-free").unwrap();
        let sum = lf.direct_sum(&lf).unwrap();
        let pc = restrict(&sum, &line(&[1, 0, 0, 0], &[0, 0, 1, 0])).unwrap();
        assert_eq!(splitting_type(&pc).unwrap().degrees, vec![1, 1, -1, -1]);
    }

    #[test]
    fn plucker_relation() {
        let l = line(&[1, 2, -1, 3], &[0, 1, 4, -2]);
        let p = l.plucker().unwrap();
        let f = Rationals;
        let rel = f.add(&f.sub(&f.mul(&p[0], &p[5]), &f.mul(&p[1], &p[4])), &f.mul(&p[2], &p[3]));
        assert!(f.is_zero(&rel));
    }

    #[test]
    fn prime_field_pencil() {
        let p = PrimeField::new(5).unwrap();
        let lf = example("locally-free").unwrap().reduce_mod(&p).unwrap();
        let l = Line::from_points(&p, vec![1, 0, 0, 0], vec![0, 0, 1, 0]).unwrap();
        let pc = restrict(&lf, &l).unwrap();
        assert_eq!(splitting_type(&pc).unwrap().degrees, vec![1, -1]);
    }
}
