//! Linkage by complete intersections, the E/N mapping-cone transforms,
//! purity, stable equivalence classes and the class invariant of even
//! linkage.

use rand::Rng;
use thiserror::Error;

use crate::algebra::{GradedFreeModule, GradedMatrix, Poly, Ring};
use crate::cohomology::{self, CohomologyError};
use crate::groebner::{is_regular_sequence, syzygies, GroebnerError, Ideal, Lifter};
use crate::modules::GradedModule;
use crate::resolutions::{
    block_matrix, extract_e_type, koszul_complex, lift_morphism, ComplexMorphism, ETypeData, FreeComplex,
    KoszulMap, NTypeData, ResolutionError,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LiaisonError {
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
    #[error(transparent)]
    Cohomology(#[from] CohomologyError),
    #[error("forms must be nonzero homogeneous polynomials of positive degree")]
    BadForm,
    #[error("the forms are not a regular sequence")]
    NotRegularSequence,
    #[error("the complete intersection is not contained in the ideal")]
    NotContained,
    #[error("expected {expected} forms, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("codimension {codim} is smaller than {r}")]
    CodimensionTooSmall { codim: usize, r: usize },
    #[error("the ideal is not of pure codimension {0}")]
    NotPure(usize),
    #[error("the ideal has no elements of degree {0}")]
    NoFormsOfDegree(u32),
    #[error("nothing found within the budget of {0} attempts")]
    BudgetExhausted(usize),
    #[error("the ideals lie in different even linkage classes")]
    ClassMismatch,
    #[error("verification failed: {0}")]
    ConditionFailed(String),
}

impl LiaisonError {
    /// True for failures caused by running out of random attempts.
    pub fn is_budget(&self) -> bool {
        matches!(self, LiaisonError::BudgetExhausted(_))
    }
}

/// A random element of degree `d` in the ideal generated by `gens`.
pub fn random_element<R: Rng + ?Sized>(gens: &[Poly], d: u32, rng: &mut R) -> Option<Poly> {
    let ring = gens.first()?.ring();
    let mut acc = ring.zero();
    for g in gens {
        match g.degree() {
            Some(e) if e <= d => acc = acc.add(&ring.random_form(d - e, rng).mul(g)),
            _ => {}
        }
    }
    (!acc.is_zero()).then_some(acc)
}

/// The linking complete intersection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompleteIntersection {
    forms: Vec<Poly>,
    degrees: Vec<u32>,
    d_total: i32,
}

impl CompleteIntersection {
    pub fn new(forms: Vec<Poly>) -> Result<Self, LiaisonError> {
        if forms.is_empty() || forms.iter().any(|f| f.is_zero() || !f.is_homogeneous() || f.degree() == Some(0)) {
            return Err(LiaisonError::BadForm);
        }
        if !is_regular_sequence(&forms) {
            return Err(LiaisonError::NotRegularSequence);
        }
        let degrees: Vec<u32> = forms.iter().map(|f| f.degree().unwrap()).collect();
        let d_total = degrees.iter().sum::<u32>() as i32;
        Ok(CompleteIntersection { forms, degrees, d_total })
    }

    /// Random forms of the given degrees in `ideal`, retried until they form
    /// a regular sequence.
    pub fn random_in<R: Rng + ?Sized>(
        ideal: &Ideal,
        degrees: &[u32],
        rng: &mut R,
        tries: usize,
    ) -> Result<Self, LiaisonError> {
        let gens = ideal.minimal_generators();
        for _ in 0..tries {
            let mut forms = Vec::with_capacity(degrees.len());
            for &d in degrees {
                forms.push(random_element(&gens, d, rng).ok_or(LiaisonError::NoFormsOfDegree(d))?);
            }
            if let Ok(ci) = CompleteIntersection::new(forms) {
                return Ok(ci);
            }
        }
        Err(LiaisonError::BudgetExhausted(tries))
    }

    /// A complete intersection of `r` forms in `ideal`, chosen greedily in
    /// the smallest degrees that admit a regular sequence.
    pub fn smallest_in<R: Rng + ?Sized>(
        ideal: &Ideal,
        r: usize,
        rng: &mut R,
        tries: usize,
    ) -> Result<Self, LiaisonError> {
        let gens = ideal.minimal_generators();
        let lo = ideal.min_generator_degree().ok_or(LiaisonError::NoFormsOfDegree(0))?;
        let hi = ideal.max_generator_degree().unwrap() + 2;
        let mut forms: Vec<Poly> = Vec::with_capacity(r);
        let mut d = lo;
        while forms.len() < r {
            let mut found = false;
            while !found && d <= hi {
                for _ in 0..tries {
                    let Some(f) = random_element(&gens, d, rng) else { break };
                    let mut cand = forms.clone();
                    cand.push(f);
                    if is_regular_sequence(&cand) {
                        forms = cand;
                        found = true;
                        break;
                    }
                }
                if !found {
                    d += 1;
                }
            }
            if !found {
                return Err(LiaisonError::BudgetExhausted(tries));
            }
        }
        CompleteIntersection::new(forms)
    }

    pub fn forms(&self) -> &[Poly] {
        &self.forms
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// `d = d_1 + ... + d_r`.
    pub fn d_total(&self) -> i32 {
        self.d_total
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn ring(&self) -> Ring {
        self.forms[0].ring()
    }

    pub fn ideal(&self) -> Ideal {
        Ideal::from_gens(self.ring(), self.forms.clone())
    }

    /// `∏ d_i`, the degree of the complete intersection.
    pub fn degree(&self) -> i64 {
        self.degrees.iter().map(|&d| d as i64).product()
    }
}

/// Result of a link.
#[derive(Clone, Debug)]
pub struct Linked {
    pub ideal: Ideal,
    /// The input equals the complete intersection, so the residual scheme
    /// is empty and `ideal` is the unit ideal.
    pub empty: bool,
}

/// The residual `((ci) : i)`.
pub fn link(i: &Ideal, ci: &CompleteIntersection) -> Result<Linked, LiaisonError> {
    let x = ci.ideal();
    if !i.contains_ideal(&x) {
        return Err(LiaisonError::NotContained);
    }
    let j = x.quotient(i);
    let empty = j.is_unit();
    Ok(Linked { ideal: j, empty })
}

/// Degree of the subscheme (0 for the empty scheme).
fn scheme_degree(i: &Ideal) -> i64 {
    if i.is_unit() {
        0
    } else {
        i.degree()
    }
}

/// `deg V_1 + deg V_2 = ∏ d_i`.
pub fn degree_additivity_holds(i: &Ideal, j: &Linked, ci: &CompleteIntersection) -> bool {
    let dj = if j.empty { 0 } else { scheme_degree(&j.ideal) };
    scheme_degree(i) + dj == ci.degree()
}

/// Links twice by the same complete intersection and compares with the
/// input (reduced Gröbner bases).
pub fn double_link_identity_check(i: &Ideal, ci: &CompleteIntersection) -> Result<bool, LiaisonError> {
    let j = link(i, ci)?;
    let back = link(&j.ideal, ci)?;
    Ok(back.ideal.equals(i))
}

/// Mapping cone of the dual of `α: F -> C` at twist `-d`. `C` is given by
/// modules `0..=r` and differentials `d_1..d_r`; it needs to be a complex
/// only where the cone uses it. Position `p` is
/// `C_{r-p+1}^∨(-d) ⊕ F_{r-p}^∨(-d)` for `p = 0..=r+1`.
fn dual_cone(
    ring: Ring,
    cmods: &[GradedFreeModule],
    cdiffs: &[GradedMatrix],
    f: &FreeComplex,
    alpha: &[GradedMatrix],
    r: usize,
    d: i32,
) -> Vec<GradedMatrix> {
    let cm = |k: isize| {
        if k >= 0 && (k as usize) <= r {
            cmods[k as usize].dual(-d)
        } else {
            GradedFreeModule::zero()
        }
    };
    let km = |k: isize| {
        if k >= 0 && (k as usize) <= r {
            f.module(k as usize).dual(-d)
        } else {
            GradedFreeModule::zero()
        }
    };
    let mut out = Vec::with_capacity(r + 1);
    for p in 1..=r + 1 {
        let k = r as isize - p as isize;
        let dc = (k + 2 <= r as isize).then(|| cdiffs[(k + 1) as usize].dual(-d));
        let a = alpha[(k + 1) as usize].dual(-d);
        let df = (k >= 0).then(|| f.differential((k + 1) as usize).dual(-d).neg());
        out.push(block_matrix(
            ring,
            &[cm(k + 2), km(k + 1)],
            &[cm(k + 1), km(k)],
            &[vec![dc.as_ref(), None], vec![Some(&a), df.as_ref()]],
        ));
    }
    out
}

/// N-type data of the scheme linked to `e` by `ci`: the cone of the dual
/// of the Koszul comparison map, with split summands cancelled.
pub fn e_to_n(e: &ETypeData, ci: &CompleteIntersection) -> Result<NTypeData, LiaisonError> {
    let r = e.r;
    if ci.len() != r {
        return Err(LiaisonError::WrongLength { expected: r, got: ci.len() });
    }
    if !e.ideal().contains_ideal(&ci.ideal()) {
        return Err(LiaisonError::NotContained);
    }
    let ring = e.ring();
    let d = ci.d_total();
    let f = koszul_complex(ci.forms())?;
    let c = &e.complex;
    let id = GradedMatrix::identity(ring, &c.module(0));
    let alpha = lift_morphism(&f, c, id, r)?;
    let cmods: Vec<GradedFreeModule> = (0..=r).map(|k| c.module(k)).collect();
    let cdiffs: Vec<GradedMatrix> = (1..=r).map(|k| c.differential(k)).collect();
    let diffs = dual_cone(ring, &cmods, &cdiffs, &f, &alpha.maps, r, d);
    let complex = FreeComplex::from_differentials(ring, f.module(r).dual(-d), diffs)?;

    // N = E^∨(-d) ⊕ F_{r-1}^∨(-d) inside G^∨(-d) ⊕ F_{r-1}^∨(-d).
    let gdual = c.module(r).dual(-d);
    let kd = if c.module(r + 1).rank() == 0 {
        GradedMatrix::identity(ring, &gdual)
    } else {
        syzygies(&c.differential(r + 1).dual(-d))
    };
    let krm1 = f.module(r - 1).dual(-d);
    let idk = GradedMatrix::identity(ring, &krm1);
    let n_gens = block_matrix(
        ring,
        &[gdual, krm1.clone()],
        &[kd.source().clone(), krm1],
        &[vec![Some(&kd), None], vec![None, Some(&idk)]],
    );

    // β: dual Koszul complex -> cone, ±inclusion into the Koszul summand.
    let kc = f.dual(-d);
    let field = ring.field();
    let mut maps = vec![GradedMatrix::identity(ring, &kc.module(0))];
    for p in 1..=r {
        let kp = kc.module(p);
        let sign = if p % 2 == 0 { field.one() } else { field.neg(&field.one()) };
        let inc = GradedMatrix::identity(ring, &kp).scale(&sign);
        let cpart = if r + 1 >= p { cmods[r + 1 - p].dual(-d) } else { GradedFreeModule::zero() };
        maps.push(block_matrix(ring, &[cpart, kp.clone()], &[kp], &[vec![None], vec![Some(&inc)]]));
    }
    let morphism = ComplexMorphism { maps };
    debug_assert!(morphism.commutes(&kc, &complex));
    let koszul = KoszulMap { forms: ci.forms().to_vec(), source: kc, morphism };

    let raw = NTypeData { complex, n_gens, h: 0, r, koszul: Some(koszul) };
    let mut n = raw.cancel_split_summands();
    if (r + 1..=n.complex.length()).any(|p| n.complex.module(p).rank() > 0) {
        return Err(LiaisonError::ConditionFailed("the cone did not shorten to length r".into()));
    }
    n.complex = n.complex.truncated(r);
    Ok(n)
}

/// E-type data of the scheme linked to `n` by `ci`. Uses the stored Koszul
/// morphism when its forms match `ci`, otherwise lifts a fresh one.
pub fn n_to_e(n: &NTypeData, ci: &CompleteIntersection) -> Result<ETypeData, LiaisonError> {
    let r = n.r;
    if ci.len() != r {
        return Err(LiaisonError::WrongLength { expected: r, got: ci.len() });
    }
    let nm = n.n_module();
    if !cohomology::ext_sheaves_vanish(&nm, r)? {
        return Err(LiaisonError::ConditionFailed(
            "Ext^i(N, S) is not of finite length for some 0 < i < r".into(),
        ));
    }
    if !n.ideal().contains_ideal(&ci.ideal()) {
        return Err(LiaisonError::NotContained);
    }
    let ring = n.ring();
    let d = ci.d_total();
    let c = &n.complex;
    let ng = &n.n_gens;
    let z = ng.source().clone();
    let lift_n = Lifter::new(ng);
    let d1z = c.differential(1).mul_unchecked(ng);
    let lift_fail = |k| LiaisonError::Resolution(ResolutionError::LiftFailed(k));

    let (kc, beta) = match &n.koszul {
        Some(km) if km.forms == ci.forms() => {
            let az = lift_n.lift_matrix(&km.morphism.maps[1]).ok_or(lift_fail(1))?;
            let mut beta = vec![km.morphism.maps[0].clone(), az];
            beta.extend(km.morphism.maps[2..=r].iter().cloned());
            (km.source.clone(), beta)
        }
        _ => {
            let kc = koszul_complex(ci.forms())?;
            let az = Lifter::new(&d1z).lift_matrix(&kc.differential(1)).ok_or(lift_fail(1))?;
            let mut beta = vec![GradedMatrix::identity(ring, &kc.module(0)), az];
            for p in 2..=r {
                let prev = if p == 2 { ng.mul_unchecked(&beta[1]) } else { beta[p - 1].clone() };
                let b = prev.mul_unchecked(&kc.differential(p));
                let m = Lifter::new(&c.differential(p)).lift_matrix(&b).ok_or(lift_fail(p))?;
                beta.push(m);
            }
            (kc, beta)
        }
    };

    // Ñ: generators Z of N in place of the ambient A.
    let psi = if r >= 2 { lift_n.lift_matrix(&c.differential(2)).ok_or(lift_fail(2))? } else { d1z.clone() };
    let mut cmods = vec![c.module(0), z.clone()];
    cmods.extend((2..=r).map(|p| c.module(p)));
    let mut cdiffs = vec![d1z];
    if r >= 2 {
        cdiffs.push(psi);
    }
    cdiffs.extend((3..=r).map(|p| c.differential(p)));
    let cone = dual_cone(ring, &cmods, &cdiffs, &kc, &beta, r, d);

    // E = N^∨(-d), generated by syz(R_N^T) inside Z^∨(-d).
    let rn = syzygies(ng);
    let zd = z.dual(-d);
    let kn = if rn.ncols() == 0 { GradedMatrix::identity(ring, &zd) } else { syzygies(&rn.dual(-d)) };
    let zcols: Vec<usize> = (0..z.rank()).collect();
    let e_gens = cone[r - 1].select_columns(&zcols).mul_unchecked(&kn);
    let pres = syzygies(&e_gens);
    let mut diffs: Vec<GradedMatrix> = cone[..r - 1].to_vec();
    diffs.push(e_gens);
    diffs.push(pres);
    let complex = FreeComplex::from_differentials(ring, kc.module(r).dual(-d), diffs)?;
    Ok(ETypeData { complex, r }.cancel_split_summands())
}

/// `Ext^i(E^∨, S)` has finite length for `0 < i < r`.
pub fn verify_e_condition(e: &ETypeData) -> Result<bool, LiaisonError> {
    let edual = e.e_module().dual();
    Ok(cohomology::ext_sheaves_vanish(&edual, e.r)?)
}

/// `N` is reflexive as a sheaf, `Ext^i(N, S)` has finite length and
/// `H^i_*(N^∨) = 0` for `0 < i < r`.
pub fn verify_n_condition(n: &NTypeData) -> Result<bool, LiaisonError> {
    let nm = n.n_module();
    if !cohomology::is_sheaf_reflexive(&nm) {
        return Ok(false);
    }
    if !cohomology::ext_sheaves_vanish(&nm, n.r)? {
        return Ok(false);
    }
    Ok(cohomology::check_h_star_vanishing(&nm.dual(), n.r)?)
}

/// Whether the subscheme cut out by `i` has pure codimension `r`. For
/// `r >= 2` this is the Ext condition on an E-type resolution; for `r = 1`
/// the saturation must be principal.
pub fn is_pure_codimension(i: &Ideal, r: usize) -> Result<bool, LiaisonError> {
    let codim = i.codimension()?;
    if codim < r || r == 0 {
        return Err(LiaisonError::CodimensionTooSmall { codim, r });
    }
    if r == 1 {
        return Ok(i.saturate_irrelevant().minimal_generators().len() == 1);
    }
    let e = extract_e_type(i, r)?;
    verify_e_condition(&e)
}

/// A module with every rank-1 free summand split off, twisted so that its
/// lowest generator sits in degree 0.
#[derive(Clone, Debug)]
pub struct StableClass {
    pub module: GradedModule,
    /// Lowest generator degree before normalization.
    pub twist_offset: i32,
    /// Twists of the free summands that were split off.
    pub split_twists: Vec<i32>,
}

/// Splits off free summands until none is left. A generator `e_i` spans a
/// free summand exactly when some functional takes a unit value on it,
/// i.e. the dual embedding has a constant entry in row `i`.
pub fn stable_normal_form(m: &GradedModule) -> StableClass {
    let mut cur = m.minimal_presentation();
    let mut split = Vec::new();
    loop {
        if cur.generators().rank() == 0 {
            break;
        }
        let k = cur.dual_embedding();
        let hit = (0..k.nrows()).find(|&i| (0..k.ncols()).any(|j| k.entry(i, j).is_unit()));
        match hit {
            Some(i) => {
                split.push(cur.generators().twist(i));
                cur = GradedModule::new(cur.presentation().without_row(i)).minimal_presentation();
            }
            None => break,
        }
    }
    split.sort();
    let offset = cur.generators().twists().iter().copied().min().unwrap_or(0);
    StableClass { module: cur.twisted(offset), twist_offset: offset, split_twists: split }
}

impl StableClass {
    pub fn is_zero(&self) -> bool {
        self.module.generators().rank() == 0
    }

    pub fn rank(&self) -> i64 {
        if self.is_zero() {
            0
        } else {
            self.module.rank()
        }
    }

    /// The core in its original twist.
    pub fn core(&self) -> GradedModule {
        self.module.twisted(-self.twist_offset)
    }

    /// Isomorphic normal forms (hence stably equivalent up to twist).
    pub fn equivalent<R: Rng + ?Sized>(&self, other: &StableClass, rng: &mut R) -> bool {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => true,
            (false, false) => self.module.is_isomorphic(&other.module, rng),
            _ => false,
        }
    }

    /// The class reached by an odd number of links: `[syz_1(E^∨)]`.
    pub fn dual_class(&self) -> StableClass {
        if self.is_zero() {
            return self.clone();
        }
        stable_normal_form(&first_syzygy(&self.module.dual()))
    }

    /// The N-sheaf class of the same schemes: `[(syz_1(E^∨))^∨]`.
    pub fn n_class(&self) -> StableClass {
        if self.is_zero() {
            return self.clone();
        }
        stable_normal_form(&first_syzygy(&self.module.dual()).dual())
    }
}

/// Kernel of the minimal generators of `m`.
pub fn first_syzygy(m: &GradedModule) -> GradedModule {
    let mm = m.minimal_presentation();
    let pres = mm.presentation();
    if pres.ncols() == 0 {
        return GradedModule::free(m.ring(), GradedFreeModule::zero());
    }
    GradedModule::from_image(pres)
}

/// The stable class of `E` in an E-type resolution of a pure codimension 2
/// subscheme.
pub fn phi_invariant(i: &Ideal) -> Result<StableClass, LiaisonError> {
    if !is_pure_codimension(i, 2)? {
        return Err(LiaisonError::NotPure(2));
    }
    let e = extract_e_type(i, 2)?;
    Ok(stable_normal_form(&e.e_module()))
}

pub fn same_even_class<R: Rng + ?Sized>(i: &Ideal, j: &Ideal, rng: &mut R) -> Result<bool, LiaisonError> {
    Ok(phi_invariant(i)?.equivalent(&phi_invariant(j)?, rng))
}

/// N-type data of `i` obtained by linking to a residual and back.
pub fn n_type_via_link<R: Rng + ?Sized>(i: &Ideal, r: usize, rng: &mut R, tries: usize) -> Result<NTypeData, LiaisonError> {
    let ci = CompleteIntersection::smallest_in(i, r, rng, tries)?;
    let w = link(i, &ci)?;
    if w.empty {
        // A complete intersection: its Koszul complex is already N-type.
        let k = koszul_complex(ci.forms())?;
        let a = k.module(1);
        return Ok(NTypeData {
            n_gens: GradedMatrix::identity(i.ring(), &a),
            complex: k.truncated(r),
            h: 0,
            r,
            koszul: None,
        });
    }
    let ew = extract_e_type(&w.ideal, r)?;
    let n = e_to_n(&ew, &ci)?;
    if !n.ideal().equals(i) {
        return Err(LiaisonError::ConditionFailed("N-type data does not resolve the input ideal".into()));
    }
    Ok(n)
}

/// Randomized search for an even chain of links from `i` to `j`. Both
/// links share a surface through `i` and `j`; the residual in the middle
/// is linked onward by a form through it and `j`. Best effort: `None` when
/// the budget runs out.
pub fn connect_even_linkage_heuristic<R: Rng + ?Sized>(
    i: &Ideal,
    j: &Ideal,
    budget: usize,
    rng: &mut R,
) -> Result<Option<Vec<CompleteIntersection>>, LiaisonError> {
    if i.equals(j) {
        return Ok(Some(Vec::new()));
    }
    if !same_even_class(i, j, rng)? {
        return Err(LiaisonError::ClassMismatch);
    }
    let both = i.intersect(j);
    let both_gens = both.minimal_generators();
    let i_gens = i.minimal_generators();
    let smin = both.min_generator_degree().unwrap_or(1);
    let top = i.max_generator_degree().unwrap_or(1).max(j.max_generator_degree().unwrap_or(1)) + 1;
    let mut attempts = 0;
    for s in smin..=top {
        for t in 1..=top {
            for t2 in 1..=top {
                if attempts >= budget {
                    return Ok(None);
                }
                attempts += 1;
                let Some(f) = random_element(&both_gens, s, rng) else { continue };
                let Some(g) = random_element(&i_gens, t, rng) else { continue };
                let Ok(ci1) = CompleteIntersection::new(vec![f.clone(), g]) else { continue };
                let w = link(i, &ci1)?;
                if w.empty {
                    continue;
                }
                let wj = w.ideal.intersect(j);
                let Some(g2) = random_element(&wj.minimal_generators(), t2, rng) else { continue };
                let Ok(ci2) = CompleteIntersection::new(vec![f.clone(), g2]) else { continue };
                let Ok(back) = link(&w.ideal, &ci2) else { continue };
                if back.ideal.equals(j)
                    && double_link_identity_check(i, &ci1)?
                    && double_link_identity_check(&w.ideal, &ci2)?
                {
                    return Ok(Some(vec![ci1, ci2]));
                }
            }
        }
    }
    Ok(None)
}
