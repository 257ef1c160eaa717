//! Minimal elements of even linkage classes of codimension 2 subschemes:
//! partial-sum comparison of twist functions, basic double links, the
//! domination order, the rank profile of the evaluation map and the
//! optimal twist function `q`, minimal curves and the dual minimal link.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::algebra::{GradedFreeModule, GradedMatrix, Poly};
use crate::cohomology::{self, CohomologyError, GradedDimensionTable};
use crate::groebner::{is_regular_sequence, syzygies, GroebnerError, Ideal, Lifter};
use crate::liaison::{
    link, n_type_via_link, random_element, same_even_class, stable_normal_form, first_syzygy,
    CompleteIntersection, LiaisonError,
};
use crate::modules::GradedModule;
use crate::resolutions::{ETypeData, FreeComplex, NTypeData, ResolutionError};
use crate::twist::TwistFunction;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LrError {
    #[error(transparent)]
    Liaison(#[from] LiaisonError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
    #[error("twist functions have different totals ({0} and {1})")]
    UnequalTotals(u32, u32),
    #[error("the module has torsion")]
    Torsion,
    #[error("the class is ACM (no non-free part); it has no minimal element here")]
    AcmClass,
    #[error("the form is not in the ideal")]
    NotInIdeal,
    #[error("the forms cut out a subscheme of codimension {0}, need at least 2")]
    CodimensionTooSmall(usize),
    #[error("nothing found within the budget of {0} attempts")]
    BudgetExhausted(usize),
    #[error("the ideals lie in different even linkage classes")]
    ClassMismatch,
    #[error("the input is not minimal in its class: {0}")]
    NotMinimal(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

impl LrError {
    pub fn is_budget(&self) -> bool {
        match self {
            LrError::BudgetExhausted(_) => true,
            LrError::Liaison(e) => e.is_budget(),
            _ => false,
        }
    }
}

/// Verdict of comparing `f^#` with `g^#`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SharpOrder {
    /// `f^# >= g^#` everywhere, with strict inequality somewhere.
    FDominates,
    GDominates,
    Equal,
    Incomparable,
}

impl fmt::Display for SharpOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SharpOrder::FDominates => "f_dominates",
            SharpOrder::GDominates => "g_dominates",
            SharpOrder::Equal => "equal",
            SharpOrder::Incomparable => "incomparable",
        })
    }
}

fn verdict(ge: bool, le: bool) -> SharpOrder {
    match (ge, le) {
        (true, true) => SharpOrder::Equal,
        (true, false) => SharpOrder::FDominates,
        (false, true) => SharpOrder::GDominates,
        (false, false) => SharpOrder::Incomparable,
    }
}

/// `f^#(a)`.
pub fn sharp(f: &TwistFunction, a: i32) -> u32 {
    f.sharp(a)
}

/// Comparison by partial sums over the joint support.
pub fn compare_by_partial_sums(f: &TwistFunction, g: &TwistFunction) -> SharpOrder {
    let pts: Vec<i32> = f.iter().chain(g.iter()).map(|(n, _)| n).collect();
    let ge = pts.iter().all(|&n| f.sharp(n) >= g.sharp(n));
    let le = pts.iter().all(|&n| f.sharp(n) <= g.sharp(n));
    verdict(ge, le)
}

/// Comparison by the sorted twist sequences `a_i` of `f` and `b_i` of `g`:
/// `f^# >= g^#` iff `a_i <= b_i` for every `i`.
pub fn compare_by_sequences(f: &TwistFunction, g: &TwistFunction) -> SharpOrder {
    let a = f.to_twists();
    let b = g.to_twists();
    let ge = a.iter().zip(&b).all(|(x, y)| x <= y);
    let le = a.iter().zip(&b).all(|(x, y)| x >= y);
    verdict(ge, le)
}

/// Compares `f^#` and `g^#` for functions with equal totals, checking that
/// both characterizations agree.
pub fn sharp_compare(f: &TwistFunction, g: &TwistFunction) -> Result<SharpOrder, LrError> {
    if f.total() != g.total() {
        return Err(LrError::UnequalTotals(f.total(), g.total()));
    }
    let v = compare_by_partial_sums(f, g);
    let w = compare_by_sequences(f, g);
    if v != w {
        return Err(LrError::VerificationFailed(format!("partial sums say {v}, sequences say {w}")));
    }
    Ok(v)
}

/// The two links making up a basic double link.
#[derive(Clone, Debug)]
pub struct BdlStep {
    /// Degree of the surface `S`.
    pub s: u32,
    /// Height.
    pub h: u32,
    /// `(S, T)` and `(S, T H)`.
    pub witnesses: [CompleteIntersection; 2],
}

/// Basic double link of height `deg h_form` on `S = s_form`: link by
/// `(S, T)` and then by `(S, T H)`, with `T` a random partner in `i`.
/// The result is `H I + (S)`, which is checked.
pub fn basic_double_link<R: Rng + ?Sized>(
    i: &Ideal,
    s_form: &Poly,
    h_form: &Poly,
    rng: &mut R,
    tries: usize,
) -> Result<(Ideal, BdlStep), LrError> {
    if !i.contains(s_form) {
        return Err(LrError::NotInIdeal);
    }
    let h = h_form.degree().ok_or(LrError::VerificationFailed("zero height form".into()))?;
    let s = s_form.degree().ok_or(LrError::NotInIdeal)?;
    let gens = i.minimal_generators();
    let lo = i.min_generator_degree().unwrap_or(1);
    let hi = i.max_generator_degree().unwrap_or(1) + 2;
    for t in lo..=hi {
        for _ in 0..tries {
            let Some(tf) = random_element(&gens, t, rng) else { break };
            let Ok(c1) = CompleteIntersection::new(vec![s_form.clone(), tf.clone()]) else { continue };
            let Ok(c2) = CompleteIntersection::new(vec![s_form.clone(), tf.mul(h_form)]) else { continue };
            let z = link(i, &c1)?;
            let y = link(&z.ideal, &c2)?;
            let expected = i.mul_poly(h_form).sum(&Ideal::new(i.ring(), vec![s_form.clone()])?);
            if !y.ideal.equals(&expected) {
                return Err(LrError::VerificationFailed("double link differs from H I + (S)".into()));
            }
            return Ok((y.ideal, BdlStep { s, h, witnesses: [c1, c2] }));
        }
    }
    Err(LrError::BudgetExhausted(tries))
}

/// Ranks of the evaluation map on generators of degree `<= a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaProfile {
    /// Generator degrees of the module.
    pub l: TwistFunction,
    pub rank: i64,
    /// Generic rank `α_a`, over the degrees where it changes.
    pub alpha: BTreeMap<i32, i64>,
    /// Smallest rank along a prime divisor, `β_a`.
    pub beta: BTreeMap<i32, i64>,
    /// `None` stands for `+∞` (free modules).
    pub a0: Option<i32>,
    pub a1: i32,
}

impl SigmaProfile {
    fn lookup(map: &BTreeMap<i32, i64>, a: i32, top: i64) -> i64 {
        match map.range(..=a).next_back() {
            Some((_, &v)) => v,
            None if map.keys().next().is_some_and(|&k| a < k) => 0,
            None => top,
        }
    }

    pub fn alpha_at(&self, a: i32) -> i64 {
        Self::lookup(&self.alpha, a, self.rank)
    }

    pub fn beta_at(&self, a: i32) -> i64 {
        Self::lookup(&self.beta, a, self.rank)
    }

    pub fn is_free(&self) -> bool {
        self.a0.is_none()
    }
}

/// Determinant by cofactor expansion along the first row.
fn det(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    let ring = m[0][0].ring();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = ring.zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Poly>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, p)| p.clone()).collect()).collect();
        let term = m[0][j].mul(&det(&minor));
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// The ideal of `k`-minors of `m` (zero rows are skipped).
fn minors_ideal(m: &GradedMatrix, k: usize) -> Ideal {
    let ring = m.ring();
    if k == 0 {
        return Ideal::unit(ring);
    }
    let rows: Vec<usize> = (0..m.nrows()).filter(|&i| (0..m.ncols()).any(|j| !m.entry(i, j).is_zero())).collect();
    let cols: Vec<usize> = (0..m.ncols()).filter(|&j| (0..m.nrows()).any(|i| !m.entry(i, j).is_zero())).collect();
    if k > rows.len() || k > cols.len() {
        return Ideal::zero(ring);
    }
    let mut gens = Vec::new();
    for rs in subsets(rows.len(), k) {
        for cs in subsets(cols.len(), k) {
            let sub: Vec<Vec<Poly>> =
                rs.iter().map(|&a| cs.iter().map(|&b| m.entry(rows[a], cols[b]).clone()).collect()).collect();
            let d = det(&sub);
            if !d.is_zero() {
                gens.push(d);
            }
        }
    }
    Ideal::new(ring, gens).unwrap_or_else(|_| Ideal::zero(ring))
}

/// Height of an ideal, 0 for the zero ideal.
fn height(i: &Ideal) -> Result<usize, LrError> {
    if i.is_zero() {
        return Ok(0);
    }
    Ok(i.codimension()?)
}

/// `max { j : the (j-1)-th Fitting ideal of coker(pres) has height <= 1 }`:
/// the largest number of generators the module needs along some prime
/// divisor.
fn max_divisorial_generators(pres: &GradedMatrix) -> Result<i64, LrError> {
    let g = pres.nrows();
    for j in (1..=g).rev() {
        // Fitt_{j-1} is generated by the (g - j + 1)-minors.
        let fitt = minors_ideal(pres, g - j + 1);
        if height(&fitt)? <= 1 {
            return Ok(j as i64);
        }
    }
    Ok(0)
}

/// The rank profile of the evaluation map from the minimal generators of a
/// torsion-free module `n`.
pub fn sigma_profile(n: &GradedModule) -> Result<SigmaProfile, LrError> {
    let m = n.minimal_presentation();
    if !cohomology::is_torsion_free(&m) {
        return Err(LrError::Torsion);
    }
    let pres = m.presentation();
    let twists = m.generators().twists().to_vec();
    let l = TwistFunction::from_twists(&twists);
    let rank = m.rank();
    let (Some(lo), Some(hi)) = (l.min_degree(), l.max_degree()) else {
        return Ok(SigmaProfile { l, rank: 0, alpha: BTreeMap::new(), beta: BTreeMap::new(), a0: None, a1: 0 });
    };
    let mut alpha = BTreeMap::new();
    let mut beta = BTreeMap::new();
    for a in lo - 1..=hi {
        let rows: Vec<usize> = (0..twists.len()).filter(|&i| twists[i] > a).collect();
        let sub = pres.select_rows(&rows);
        let (al, be) = if rows.is_empty() {
            (rank, rank)
        } else {
            let c = GradedModule::new(sub.clone());
            (rank - c.rank(), rank - max_divisorial_generators(&sub)?)
        };
        alpha.insert(a, al);
        beta.insert(a, be);
    }
    let full = |a: i32| alpha[&a] == beta[&a] && alpha[&a] == l.sharp(a) as i64;
    let a0 = (lo - 1..=hi).find(|&a| !full(a));
    let a1 = (lo - 1..=hi).find(|&a| alpha[&a] == rank && beta[&a] == rank).unwrap_or(hi);
    Ok(SigmaProfile { l, rank, alpha, beta, a0, a1 })
}

/// The optimal twist function: `q = l` below `a_0`, and
/// `q^#(n) = min(α_n - 1, β_n)` from `a_0` on.
pub fn q_from_profile(p: &SigmaProfile) -> Result<TwistFunction, LrError> {
    let Some(a0) = p.a0 else { return Ok(p.l.clone()) };
    let hi = p.l.max_degree().unwrap_or(a0).max(p.a1);
    let mut q = TwistFunction::new();
    for (n, c) in p.l.iter() {
        if n < a0 {
            q.add(n, c);
        }
    }
    let mut prev = p.l.sharp(a0 - 1) as i64;
    for n in a0..=hi {
        let s = (p.alpha_at(n) - 1).min(p.beta_at(n));
        if s < prev {
            return Err(LrError::VerificationFailed(format!("q^# decreases at {n}")));
        }
        if s > prev {
            q.add(n, (s - prev) as u32);
        }
        prev = s;
    }
    Ok(q)
}

/// Checks the structural clauses relating `q`, `l`, `a_0`, `a_1` and the rank.
pub fn verify_q_clauses(p: &SigmaProfile, q: &TwistFunction) -> Result<(), LrError> {
    let fail = |s: String| Err(LrError::VerificationFailed(s));
    let Some(a0) = p.a0 else {
        return if q == &p.l { Ok(()) } else { fail("free module with q != l".into()) };
    };
    if a0 > p.a1 {
        return fail(format!("a0 = {a0} exceeds a1 = {}", p.a1));
    }
    if q.sharp(p.a1) as i64 != p.rank - 1 || q.total() as i64 != p.rank - 1 {
        return fail(format!("q^#(a1) = {} but rank - 1 = {}", q.sharp(p.a1), p.rank - 1));
    }
    if p.l.minus(q).is_none() {
        return fail("q exceeds l somewhere".into());
    }
    if q.get(a0) >= p.l.get(a0) {
        return fail(format!("q(a0) = {} is not below l(a0) = {}", q.get(a0), p.l.get(a0)));
    }
    if q.max_degree().is_some_and(|m| m > p.a1) {
        return fail("q is nonzero above a1".into());
    }
    // Monotonicity and bounds of the profile.
    for (&a, &al) in &p.alpha {
        let be = p.beta[&a];
        if !(0 <= be && be <= al && al <= p.l.sharp(a) as i64) {
            return fail(format!("profile bounds fail at {a}"));
        }
    }
    Ok(())
}

/// `q` for a torsion-free module, with every clause verified.
pub fn q_function(n: &GradedModule) -> Result<TwistFunction, LrError> {
    let p = sigma_profile(n)?;
    let q = q_from_profile(&p)?;
    verify_q_clauses(&p, &q)?;
    Ok(q)
}

/// Both sides of `q(n) + q'(-n) = l(n) - ε_0(n) - ε_1(n)`, where `q'`
/// belongs to the dual of the syzygy module `E_0` of `n0`.
#[derive(Clone, Debug)]
pub struct QDuality {
    pub profile: SigmaProfile,
    pub q: TwistFunction,
    pub q_dual: TwistFunction,
    pub lhs: BTreeMap<i32, i64>,
    pub rhs: BTreeMap<i32, i64>,
}

impl QDuality {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

pub fn q_duality(n0: &GradedModule) -> Result<QDuality, LrError> {
    let profile = sigma_profile(n0)?;
    let q = q_from_profile(&profile)?;
    verify_q_clauses(&profile, &q)?;
    let e0 = first_syzygy(n0);
    let q_dual = q_function(&e0.dual())?;
    let a0 = profile.a0.ok_or(LrError::AcmClass)?;
    let mut lhs = BTreeMap::new();
    let mut rhs = BTreeMap::new();
    let keys: std::collections::BTreeSet<i32> =
        profile.l.iter().map(|(n, _)| n).chain(q_dual.iter().map(|(n, _)| -n)).chain([a0, profile.a1]).collect();
    for n in keys {
        let l = q.get(n) as i64 + q_dual.get(-n) as i64;
        let r = profile.l.get(n) as i64 - (n == a0) as i64 - (n == profile.a1) as i64;
        if l != 0 {
            lhs.insert(n, l);
        }
        if r != 0 {
            rhs.insert(n, r);
        }
    }
    Ok(QDuality { profile, q, q_dual, lhs, rhs })
}

/// N-type data and its non-free core for an ideal, in the ideal's own twist.
#[derive(Clone, Debug)]
pub struct ClassData {
    pub n_type: NTypeData,
    /// `N` with its free summands split off, in the twist of `n_type`.
    pub core: GradedModule,
    /// Twists of the free summands of `N`.
    pub free_twists: TwistFunction,
    /// Twist offset of the normalized core.
    pub offset: i32,
}

pub fn class_data<R: Rng + ?Sized>(i: &Ideal, rng: &mut R, tries: usize) -> Result<ClassData, LrError> {
    let n_type = n_type_via_link(i, 2, rng, tries)?;
    let snf = stable_normal_form(&n_type.n_module());
    Ok(ClassData {
        core: snf.core(),
        free_twists: TwistFunction::from_twists(&snf.split_twists),
        offset: snf.twist_offset,
        n_type,
    })
}

/// `Some(h)` when `x ≤ y` with height `h`, by padding the N-type
/// resolutions of both to a common middle module and comparing the
/// partial sums of the kernel twist functions.
pub fn dominates<R: Rng + ?Sized>(x: &Ideal, y: &Ideal, rng: &mut R, tries: usize) -> Result<Option<i32>, LrError> {
    let cx = class_data(x, rng, tries)?;
    let cy = class_data(y, rng, tries)?;
    dominates_from(&cx, &cy, rng)
}

/// `dominates` on precomputed class data.
pub fn dominates_from<R: Rng + ?Sized>(cx: &ClassData, cy: &ClassData, rng: &mut R) -> Result<Option<i32>, LrError> {
    let sx = stable_normal_form(&cx.core);
    let sy = stable_normal_form(&cy.core);
    if !sx.equivalent(&sy, rng) {
        return Err(LrError::ClassMismatch);
    }
    // Twisting y's resolution by δ aligns the cores.
    let delta = cy.offset - cx.offset;
    let px = TwistFunction::from_twists(cx.n_type.complex.module(2).twists());
    let py = TwistFunction::from_twists(cy.n_type.complex.module(2).twists()).shifted(-delta);
    let fx = cx.free_twists.clone();
    let fy = cy.free_twists.shifted(-delta);
    let (only_x, only_y) = fx.difference_parts(&fy);
    let r = px.plus(&only_y);
    let s = py.plus(&only_x);
    if r.total() != s.total() {
        return Err(LrError::UnequalTotals(r.total(), s.total()));
    }
    Ok(match sharp_compare(&r, &s)? {
        SharpOrder::FDominates | SharpOrder::Equal => Some(delta),
        _ => None,
    })
}

/// Cohomology tables of two ideals over a common window.
pub fn cohomology_tables(i: &Ideal, j: &Ideal) -> Result<(GradedDimensionTable, GradedDimensionTable), LrError> {
    let (a, b) = cohomology::default_window(i)?;
    let (c, d) = cohomology::default_window(j)?;
    let (lo, hi) = (a.min(c), b.max(d));
    Ok((cohomology::ideal_sheaf_cohomology(i, lo, hi)?, cohomology::ideal_sheaf_cohomology(j, lo, hi)?))
}

pub fn same_cohomology(i: &Ideal, j: &Ideal) -> Result<bool, LrError> {
    let (a, b) = cohomology_tables(i, j)?;
    Ok(a == b)
}

/// Stand-in for a deformation with constant cohomology inside the class:
/// equal cohomology tables and the same even linkage class.
pub fn deformation_equivalent<R: Rng + ?Sized>(i: &Ideal, j: &Ideal, rng: &mut R) -> Result<bool, LrError> {
    Ok(same_cohomology(i, j)? && same_even_class(i, j, rng)?)
}

/// A minimal element of an even linkage class with its resolution
/// `0 -> ⊕ S(-n)^{q(n)} -> N_0 -> I(h) -> 0`.
#[derive(Clone, Debug)]
pub struct MinimalElement {
    pub ideal: Ideal,
    pub n_type: NTypeData,
    /// The non-free core, in the twist used for `profile` and `q`.
    pub n0: GradedModule,
    pub profile: SigmaProfile,
    pub q: TwistFunction,
    pub h: i32,
    /// The chosen injection `⊕ S(-n)^{q(n)} -> generators of N_0`.
    pub iota: GradedMatrix,
}

/// Random columns `⊕ S(-n)^{q(n)} -> f0` of degree 0.
fn random_injection<R: Rng + ?Sized>(
    ring: crate::algebra::Ring,
    f0: &GradedFreeModule,
    q: &TwistFunction,
    rng: &mut R,
) -> GradedMatrix {
    let src = GradedFreeModule::new(q.to_twists());
    let cols = src
        .twists()
        .iter()
        .map(|&n| {
            f0.twists()
                .iter()
                .map(|&t| if n >= t { ring.random_form((n - t) as u32, rng) } else { ring.zero() })
                .collect()
        })
        .collect();
    GradedMatrix::from_columns_unchecked(ring, f0.clone(), src, cols)
}

/// Builds a minimal element of the class of `class_rep` from a random
/// injection of `⊕ S(-n)^{q(n)}` into the generators of the non-free core
/// `N_0`, keeping the first choice whose cokernel is a saturated ideal of
/// codimension 2.
pub fn minimal_element<R: Rng + ?Sized>(class_rep: &Ideal, rng: &mut R, tries: usize) -> Result<MinimalElement, LrError> {
    let cd = class_data(class_rep, rng, tries)?;
    let snf = stable_normal_form(&cd.core);
    if snf.is_zero() {
        return Err(LrError::AcmClass);
    }
    let n0 = snf.module.clone();
    let profile = sigma_profile(&n0)?;
    let q = q_from_profile(&profile)?;
    verify_q_clauses(&profile, &q)?;
    let a0 = profile.a0.ok_or(LrError::AcmClass)?;
    let ring = class_rep.ring();
    let r0 = n0.presentation().clone();
    let f0 = r0.target().clone();
    let emb = n0.dual_embedding();
    let emb_lift = Lifter::new(&emb);

    for _ in 0..tries.max(1) {
        let iota = random_injection(ring, &f0, &q, rng);
        let m = r0.hconcat(&iota).map_err(|e| LrError::VerificationFailed(e.to_string()))?;
        // Functionals on N_0 killing the image of iota.
        let k = syzygies(&m.dual(0));
        if k.ncols() != 1 {
            continue;
        }
        // The cokernel is an ideal exactly when it has no torsion.
        let kernel = syzygies(&k.dual(0));
        if !cohomology::subquotient(&kernel, &m).is_zero() {
            continue;
        }
        let h = k.source().twist(0);
        let j = Ideal::new(ring, k.column(0))?.minimalized();
        if j.codimension()? < 2 || !j.equals(&j.saturate_irrelevant()) {
            continue;
        }
        let Some(c) = emb_lift.lift_matrix(&k) else { continue };
        let n_gens = emb.dual(0);
        let d1 = c.dual(0).twisted(-h);
        let d2 = n_gens.mul_unchecked(&iota).twisted(-h);
        let complex = FreeComplex::from_differentials(ring, GradedFreeModule::new(vec![0]), vec![d1, d2])?;
        let n_type = NTypeData { complex, n_gens: n_gens.twisted(-h), h, r: 2, koszul: None };
        if !n_type.ideal().equals(&j) {
            return Err(LrError::VerificationFailed("constructed N-type data does not resolve the ideal".into()));
        }
        let s = j.min_generator_degree().map(|d| d as i32);
        if s != Some(a0 + h) {
            return Err(LrError::VerificationFailed(format!(
                "least degree of a surface is {s:?}, expected a0 + h = {}",
                a0 + h
            )));
        }
        let cx = class_data(&j, rng, tries)?;
        if dominates_from(&cx, &cd, rng)?.is_none() {
            return Err(LrError::VerificationFailed("the constructed element does not dominate the input".into()));
        }
        return Ok(MinimalElement { ideal: j, n_type, n0, profile, q, h, iota });
    }
    Err(LrError::BudgetExhausted(tries))
}

/// E-type data `0 -> E_0 -> ⊕ S(-n-h)^{l(n)-q(n)} -> I -> 0` of a minimal
/// element. The middle is the minimal generators of `x0` padded with zero
/// maps; `E_0` is the kernel.
pub fn minimal_e_type(x0: &Ideal, me: &MinimalElement) -> Result<ETypeData, LrError> {
    if !same_cohomology(x0, &me.ideal)? {
        return Err(LrError::NotMinimal("cohomology differs from the minimal element".into()));
    }
    let ring = x0.ring();
    let middle = me
        .profile
        .l
        .minus(&me.q)
        .ok_or_else(|| LrError::VerificationFailed("q exceeds l".into()))?
        .shifted(me.h);
    let mut gens = x0.minimal_generators();
    gens.sort_by_key(|g| g.degree());
    let degs: Vec<i32> = gens.iter().map(|g| g.degree().unwrap_or(0) as i32).collect();
    let extra = middle
        .minus(&TwistFunction::from_twists(&degs))
        .ok_or_else(|| LrError::NotMinimal("minimal generators do not fit the middle term".into()))?;
    let mut twists = degs;
    let mut row = gens;
    for t in extra.to_twists() {
        twists.push(t);
        row.push(ring.zero());
    }
    let d1 = GradedMatrix::from_columns(
        ring,
        GradedFreeModule::new(vec![0]),
        GradedFreeModule::new(twists),
        row.into_iter().map(|p| vec![p]).collect(),
    )
    .map_err(|e| LrError::VerificationFailed(e.to_string()))?;
    let d2 = syzygies(&d1);
    let d3 = syzygies(&d2);
    let complex = FreeComplex::from_differentials(ring, GradedFreeModule::new(vec![0]), vec![d1, d2, d3])?;
    Ok(ETypeData { complex, r: 2 })
}

/// Two forms without common factor: `fs[0]` and a form of the degree of
/// the last entry in the ideal of `fs` (the last entry itself if it works).
pub fn coprime_pair<R: Rng + ?Sized>(fs: &[Poly], rng: &mut R, tries: usize) -> Result<(Poly, Poly), LrError> {
    let (Some(g1), Some(last)) = (fs.first(), fs.last()) else {
        return Err(LrError::CodimensionTooSmall(0));
    };
    let codim = Ideal::new(g1.ring(), fs.to_vec())?.codimension()?;
    if codim < 2 {
        return Err(LrError::CodimensionTooSmall(codim));
    }
    let d = last.degree().unwrap_or(0);
    if is_regular_sequence(&[g1.clone(), last.clone()]) {
        return Ok((g1.clone(), last.clone()));
    }
    for _ in 0..tries {
        let Some(g) = random_element(fs, d, rng) else { continue };
        if is_regular_sequence(&[g1.clone(), g.clone()]) {
            return Ok((g1.clone(), g));
        }
    }
    Err(LrError::BudgetExhausted(tries))
}

/// Links the minimal element `x0` by surfaces of degrees `a0 + h` and
/// `a1 + h` to a minimal element of the dual class, verified against a
/// freshly constructed minimal element of that class.
pub fn link_to_dual_minimal<R: Rng + ?Sized>(
    x0: &Ideal,
    me: &MinimalElement,
    rng: &mut R,
    tries: usize,
) -> Result<(Ideal, CompleteIntersection), LrError> {
    if !same_cohomology(x0, &me.ideal)? {
        return Err(LrError::NotMinimal("cohomology differs from the minimal element".into()));
    }
    let a0 = me.profile.a0.ok_or(LrError::AcmClass)? + me.h;
    let a1 = me.profile.a1 + me.h;
    let mut gens: Vec<Poly> = x0
        .minimal_generators()
        .into_iter()
        .filter(|g| g.degree().is_some_and(|d| d as i32 <= a1))
        .collect();
    gens.sort_by_key(|g| g.degree());
    if gens.first().and_then(|g| g.degree()) != Some(a0 as u32) {
        return Err(LrError::NotMinimal(format!("no surface of degree a0 + h = {a0} is a minimal generator")));
    }
    let mut fs = Vec::with_capacity(gens.len() + 2);
    fs.push(random_element(&gens, a0 as u32, rng).ok_or(LrError::BudgetExhausted(1))?);
    fs.extend(gens.iter().cloned());
    fs.push(random_element(&gens, a1 as u32, rng).ok_or(LrError::BudgetExhausted(1))?);
    let (g1, g2) = coprime_pair(&fs, rng, tries)?;
    let ci = CompleteIntersection::new(vec![g1, g2])?;
    let y = link(x0, &ci)?;
    let ym = minimal_element(&y.ideal, rng, tries)?;
    if !same_cohomology(&y.ideal, &ym.ideal)? {
        return Err(LrError::VerificationFailed("the linked scheme is not minimal in its class".into()));
    }
    Ok((y.ideal, ci))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Field, Ring};
    use crate::parse::parse_poly;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn r4() -> Ring {
        Ring::new(Field::default(), 4).unwrap()
    }

    fn ideal(r: Ring, gens: &[&str]) -> Ideal {
        Ideal::new(r, gens.iter().map(|g| parse_poly(r, g).unwrap()).collect()).unwrap()
    }

    fn tf(pairs: &[(i32, u32)]) -> TwistFunction {
        TwistFunction::from_pairs(pairs)
    }

    const SKEW: [&str; 4] = ["x0*x2", "x0*x3", "x1*x2", "x1*x3"];

    #[test]
    fn partial_sums() {
        assert_eq!(sharp(&tf(&[(1, 2)]), 0), 0);
        assert_eq!(sharp(&tf(&[(1, 2)]), 1), 2);
        assert_eq!(sharp(&tf(&[(1, 1), (3, 2)]), 3), 3);
        assert_eq!(sharp_compare(&tf(&[(1, 2)]), &tf(&[(1, 1), (2, 1)])).unwrap(), SharpOrder::FDominates);
        assert_eq!(sharp_compare(&tf(&[(1, 2)]), &tf(&[(1, 2)])).unwrap(), SharpOrder::Equal);
        assert_eq!(sharp_compare(&tf(&[(1, 1), (4, 1)]), &tf(&[(2, 2)])).unwrap(), SharpOrder::Incomparable);
        assert!(matches!(sharp_compare(&tf(&[(1, 1)]), &tf(&[(1, 2)])), Err(LrError::UnequalTotals(1, 2))));
    }

    #[test]
    fn skew_lines_profile_and_q() {
        let r = r4();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let cd = class_data(&ideal(r, &SKEW), &mut rng, 20).unwrap();
        let n0 = stable_normal_form(&cd.core).module;
        let p = sigma_profile(&n0).unwrap();
        assert_eq!(p.rank, 3);
        assert_eq!(p.l, tf(&[(0, 6)]));
        assert_eq!((p.a0, p.a1), (Some(0), 0));
        let q = q_function(&n0).unwrap();
        assert_eq!(q, tf(&[(0, 2)]));
        let qd = q_duality(&n0).unwrap();
        assert!(qd.holds(), "{:?} vs {:?}", qd.lhs, qd.rhs);
    }

    #[test]
    fn dissocie_profile() {
        let r = r4();
        let n = GradedModule::free(r, GradedFreeModule::new(vec![2, 3]));
        let p = sigma_profile(&n).unwrap();
        assert!(p.is_free());
        for a in 0..5 {
            assert_eq!(p.alpha_at(a), p.l.sharp(a) as i64);
            assert_eq!(p.beta_at(a), p.l.sharp(a) as i64);
        }
        assert_eq!(q_function(&n).unwrap(), p.l);
    }

    #[test]
    fn rank_one_beta_drops_on_common_factor() {
        let r = r4();
        let i = ideal(r, &["x0*x1", "x0*x2", "x3^3"]);
        let n = cohomology::ideal_module(&i);
        let p = sigma_profile(&n).unwrap();
        assert_eq!(p.alpha_at(2), 1);
        assert_eq!(p.beta_at(2), 0);
        assert_eq!((p.alpha_at(3), p.beta_at(3)), (1, 1));
    }

    #[test]
    fn bdl_of_skew_lines() {
        let r = r4();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let x = ideal(r, &SKEW);
        let s = parse_poly(r, "x0*x2 + x1*x3").unwrap();
        let hf = parse_poly(r, "x0 + x1 + x2 + x3").unwrap();
        let (y, step) = basic_double_link(&x, &s, &hf, &mut rng, 10).unwrap();
        assert_eq!((step.s, step.h, y.degree()), (2, 1, 4));
        let rx = cohomology::rao_modules(&x).unwrap();
        let ry = cohomology::rao_modules(&y).unwrap();
        let shifted: BTreeMap<i32, u64> = rx[0].clone().unwrap().into_iter().map(|(d, v)| (d + 1, v)).collect();
        assert_eq!(ry[0].clone().unwrap(), shifted);
        assert!(same_even_class(&x, &y, &mut rng).unwrap());
        assert_eq!(dominates(&x, &y, &mut rng, 20).unwrap(), Some(1));
        assert_eq!(dominates(&x, &x, &mut rng, 20).unwrap(), Some(0));
        assert_eq!(dominates(&y, &x, &mut rng, 20).unwrap(), None);

        let one = r.one();
        let (z, _) = basic_double_link(&x, &s, &one, &mut rng, 10).unwrap();
        assert!(same_cohomology(&x, &z).unwrap());
    }

    #[test]
    fn minimal_element_of_skew_lines() {
        let r = r4();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let x = ideal(r, &SKEW);
        let me = minimal_element(&x, &mut rng, 20).unwrap();
        assert!(deformation_equivalent(&me.ideal, &x, &mut rng).unwrap());
        let e = minimal_e_type(&x, &me).unwrap();
        assert!(e.ideal().equals(&x));
        assert_eq!(e.complex.module(1).rank() as u32, me.profile.l.total() - me.q.total());
        let (y, ci) = link_to_dual_minimal(&x, &me, &mut rng, 20).unwrap();
        assert_eq!(ci.degrees(), &[2, 2]);
        let px = crate::liaison::phi_invariant(&x).unwrap();
        let py = crate::liaison::phi_invariant(&y).unwrap();
        assert!(py.equivalent(&px.dual_class(), &mut rng));
    }

    #[test]
    fn acm_class_is_refused() {
        let r = r4();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let cubic = ideal(r, &["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"]);
        assert!(matches!(minimal_element(&cubic, &mut rng, 10), Err(LrError::AcmClass)));
    }

    #[test]
    fn coprime_pairs() {
        let r = r4();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let p = |s| parse_poly(r, s).unwrap();
        let (a, b) = coprime_pair(&[p("x0"), p("x1")], &mut rng, 10).unwrap();
        assert_eq!((a, b), (p("x0"), p("x1")));
        let fs = [p("x0*x1"), p("x0*x2"), p("x1*x2")];
        let (a, b) = coprime_pair(&fs, &mut rng, 10).unwrap();
        assert_eq!(a, p("x0*x1"));
        assert!(!Ideal::new(r, vec![b.clone()]).unwrap().contains(&p("x0*x1*x2*x3")) || b.degree() == Some(2));
        assert!(is_regular_sequence(&[a, b]));
        let bad = [p("x0*x1"), p("x0*x2")];
        assert!(matches!(coprime_pair(&bad, &mut rng, 10), Err(LrError::CodimensionTooSmall(1))));
    }

    #[test]
    fn dissocie_padding_adds_to_q() {
        let r = r4();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let cd = class_data(&ideal(r, &SKEW), &mut rng, 20).unwrap();
        let n0 = stable_normal_form(&cd.core).module;
        let q = q_function(&n0).unwrap();
        let pad = GradedMatrix::zero(r, GradedFreeModule::new(vec![1, 3]), GradedFreeModule::zero());
        let padded = GradedModule::new(n0.presentation().direct_sum(&pad).unwrap());
        let qp = q_function(&padded).unwrap();
        assert_eq!(qp, q.plus(&tf(&[(1, 1), (3, 1)])));
    }

    #[test]
    fn domination_is_transitive_along_bdls() {
        let r = r4();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = ideal(r, &SKEW);
        let s = parse_poly(r, "x0*x2 + x1*x3").unwrap();
        let h1 = parse_poly(r, "x0 + x3").unwrap();
        let (y, _) = basic_double_link(&x, &s, &h1, &mut rng, 10).unwrap();
        let (z, _) = basic_double_link(&y, &s, &h1, &mut rng, 10).unwrap();
        assert_eq!(dominates(&x, &y, &mut rng, 20).unwrap(), Some(1));
        assert_eq!(dominates(&y, &z, &mut rng, 20).unwrap(), Some(1));
        assert_eq!(dominates(&x, &z, &mut rng, 20).unwrap(), Some(2));
        let me = minimal_element(&z, &mut rng, 20).unwrap();
        assert!(same_cohomology(&me.ideal, &x).unwrap());
    }
}
