//! Gröbner-basis kernel: ideals, normal forms, quotients, intersections,
//! dimension, Hilbert functions, syzygies and lifts.

mod engine;
pub mod hilbert;
pub mod monomial;
pub mod oracle;

use std::sync::OnceLock;

use thiserror::Error;

use crate::algebra::{AlgebraError, GradedFreeModule, GradedMatrix, Mono, Poly, Ring};
use crate::twist::TwistFunction;
pub(crate) use engine::{column_to_vect, vect_to_column, GbEngine, ModOrder, Vect};
use hilbert::LaurentPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroebnerError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("generator {0} is not homogeneous")]
    NotHomogeneous(String),
    #[error("the unit ideal has no codimension")]
    UnitIdeal,
}

#[derive(Clone, Debug)]
struct IdealGb {
    polys: Vec<Poly>,
    engine: GbEngine,
}

/// A homogeneous ideal with a lazily computed reduced Gröbner basis.
#[derive(Clone, Debug)]
pub struct Ideal {
    ring: Ring,
    gens: Vec<Poly>,
    gb: OnceLock<IdealGb>,
}

fn poly_vect(order: &ModOrder, p: &Poly) -> Vect {
    column_to_vect(order, std::slice::from_ref(p), 0)
}

impl Ideal {
    pub fn new(ring: Ring, gens: Vec<Poly>) -> Result<Ideal, GroebnerError> {
        for g in &gens {
            if g.ring() != ring {
                return Err(AlgebraError::RingMismatch.into());
            }
            if !g.is_homogeneous() {
                return Err(GroebnerError::NotHomogeneous(g.to_string()));
            }
        }
        Ok(Ideal::from_gens(ring, gens))
    }

    pub(crate) fn from_gens(ring: Ring, gens: Vec<Poly>) -> Ideal {
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ideal { ring, gens, gb: OnceLock::new() }
    }

    pub fn unit(ring: Ring) -> Ideal {
        Ideal::from_gens(ring, vec![ring.one()])
    }

    pub fn zero(ring: Ring) -> Ideal {
        Ideal::from_gens(ring, Vec::new())
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn generators(&self) -> &[Poly] {
        &self.gens
    }

    fn gb_data(&self) -> &IdealGb {
        self.gb.get_or_init(|| {
            let order = ModOrder::new(vec![0]);
            let mut eng = GbEngine::new(self.ring, order.clone());
            let mut gens = self.gens.clone();
            gens.sort_by_key(|g| g.degree());
            for g in &gens {
                eng.add(poly_vect(&order, g));
            }
            eng.complete();
            let reduced = eng.reduced_basis();
            let mut final_engine = GbEngine::new(self.ring, order);
            let mut polys = Vec::new();
            for v in reduced {
                polys.push(vect_to_column(self.ring, &v, 0, 1).remove(0));
                final_engine.add(v);
            }
            IdealGb { polys, engine: final_engine }
        })
    }

    /// Reduced Gröbner basis in grevlex, sorted by leading monomial.
    pub fn groebner_basis(&self) -> &[Poly] {
        &self.gb_data().polys
    }

    pub fn normal_form(&self, f: &Poly) -> Poly {
        let data = self.gb_data();
        let v = data.engine.reduce(poly_vect(data.engine.order(), f));
        vect_to_column(self.ring, &v, 0, 1).remove(0)
    }

    pub fn contains(&self, f: &Poly) -> bool {
        self.normal_form(f).is_zero()
    }

    /// `other ⊆ self`.
    pub fn contains_ideal(&self, other: &Ideal) -> bool {
        other.gens.iter().all(|g| self.contains(g))
    }

    pub fn equals(&self, other: &Ideal) -> bool {
        self.groebner_basis() == other.groebner_basis()
    }

    pub fn is_unit(&self) -> bool {
        self.groebner_basis().iter().any(|g| g.is_unit())
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn lead_monomials(&self) -> Vec<Mono> {
        self.groebner_basis().iter().filter_map(|g| g.lead_mono()).collect()
    }

    /// Numerator of the Hilbert series of `S / I`.
    pub fn hilbert_numerator(&self) -> LaurentPoly {
        let n = self.ring.nvars();
        let v = hilbert::monomial_numerator(&self.lead_monomials(), n);
        LaurentPoly(v.iter().enumerate().filter(|(_, &c)| c != 0).map(|(i, &c)| (i as i32, c)).collect())
    }

    /// `dim_k (S / I)_d`.
    pub fn quotient_dimension(&self, d: i64) -> i128 {
        hilbert::hilbert_from_numerator(&self.hilbert_numerator(), self.ring.nvars(), d)
    }

    /// `dim_k I_d`.
    pub fn dimension_in_degree(&self, d: i64) -> i128 {
        hilbert::monomial_count(self.ring.nvars(), d) - self.quotient_dimension(d)
    }

    /// Height via a minimum vertex cover of the initial ideal's supports.
    pub fn codimension(&self) -> Result<usize, GroebnerError> {
        if self.is_unit() {
            return Err(GroebnerError::UnitIdeal);
        }
        let supports: Vec<u32> = self.lead_monomials().iter().map(Mono::support).collect();
        let n = self.ring.nvars();
        let mut best = n;
        for mask in 0u32..(1 << n) {
            let size = mask.count_ones() as usize;
            if size < best && supports.iter().all(|s| s & mask != 0) {
                best = size;
            }
        }
        Ok(best)
    }

    /// Krull dimension of `S / I`.
    pub fn krull_dimension(&self) -> Result<usize, GroebnerError> {
        Ok(self.ring.nvars() - self.codimension()?)
    }

    /// Multiplicity of `S / I` read off the Hilbert series.
    pub fn degree(&self) -> i64 {
        let (q, _) = self.hilbert_numerator().strip_one_minus_t();
        q.eval_one()
    }

    /// Codimension from the Hilbert series pole order.
    pub fn codimension_from_series(&self) -> usize {
        self.hilbert_numerator().strip_one_minus_t().1
    }

    /// Row matrix `⊕ S(-deg g) -> S` of the generators.
    pub fn generator_row(&self) -> GradedMatrix {
        GradedMatrix::row(self.ring, 0, &self.gens)
    }

    /// `(self : other) = {f : f * other ⊆ self}`.
    pub fn quotient(&self, other: &Ideal) -> Ideal {
        let ring = self.ring;
        if other.gens.is_empty() || self.is_unit() {
            return Ideal::unit(ring);
        }
        if self.gens.is_empty() {
            return Ideal::zero(ring);
        }
        let k = other.gens.len();
        let target: Vec<i32> = other.gens.iter().map(|f| -(f.degree().unwrap() as i32)).collect();
        let mut source = vec![0];
        let mut cols: Vec<Vec<Poly>> = vec![other.gens.clone()];
        for (j, tj) in target.iter().enumerate() {
            for g in &self.gens {
                source.push(g.degree().unwrap() as i32 + tj);
                let mut col = vec![ring.zero(); k];
                col[j] = g.clone();
                cols.push(col);
            }
        }
        let m = GradedMatrix::from_columns_unchecked(
            ring,
            GradedFreeModule::new(target),
            GradedFreeModule::new(source),
            cols,
        );
        let syz = kernel_generators(&m);
        let gens: Vec<Poly> = syz.into_iter().map(|c| c[0].clone()).collect();
        Ideal::from_gens(ring, gens).minimalized()
    }

    pub fn quotient_by_poly(&self, f: &Poly) -> Ideal {
        self.quotient(&Ideal::from_gens(self.ring, vec![f.clone()]))
    }

    pub fn intersect(&self, other: &Ideal) -> Ideal {
        let ring = self.ring;
        if self.gens.is_empty() || other.gens.is_empty() {
            return Ideal::zero(ring);
        }
        let mut all = self.gens.clone();
        all.extend(other.gens.iter().map(|g| g.neg()));
        let m = GradedMatrix::row(ring, 0, &all);
        let syz = kernel_generators(&m);
        let ns = self.gens.len();
        let gens: Vec<Poly> = syz
            .into_iter()
            .map(|c| {
                let mut acc = ring.zero();
                for (u, g) in c.iter().zip(&self.gens).take(ns) {
                    if !u.is_zero() {
                        acc = acc.add(&u.mul(g));
                    }
                }
                acc
            })
            .collect();
        Ideal::from_gens(ring, gens).minimalized()
    }

    /// `self : other^∞`.
    pub fn saturate(&self, other: &Ideal) -> Ideal {
        let mut cur = self.clone();
        loop {
            let next = cur.quotient(other);
            if next.contains_ideal(&cur) && cur.contains_ideal(&next) {
                return cur;
            }
            cur = next;
        }
    }

    /// Saturation with respect to the irrelevant ideal.
    pub fn saturate_irrelevant(&self) -> Ideal {
        self.saturate(&Ideal::irrelevant(self.ring))
    }

    pub fn irrelevant(ring: Ring) -> Ideal {
        Ideal::from_gens(ring, (0..ring.nvars()).map(|i| ring.var(i)).collect())
    }

    pub fn is_saturated(&self) -> bool {
        self.quotient(&Ideal::irrelevant(self.ring)).equals(self)
    }

    pub fn sum(&self, other: &Ideal) -> Ideal {
        let mut g = self.gens.clone();
        g.extend(other.gens.iter().cloned());
        Ideal::from_gens(self.ring, g)
    }

    pub fn product(&self, other: &Ideal) -> Ideal {
        let mut g = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                g.push(a.mul(b));
            }
        }
        Ideal::from_gens(self.ring, g).minimalized()
    }

    pub fn mul_poly(&self, f: &Poly) -> Ideal {
        Ideal::from_gens(self.ring, self.gens.iter().map(|g| g.mul(f)).collect())
    }

    /// A minimal homogeneous generating set, chosen greedily by degree.
    pub fn minimal_generators(&self) -> Vec<Poly> {
        let order = ModOrder::new(vec![0]);
        let mut gens = self.gens.clone();
        gens.sort_by_key(|g| g.degree());
        let vects: Vec<Vect> = gens.iter().map(|g| poly_vect(&order, g)).collect();
        minimal_subset(self.ring, order, &vects)
            .into_iter()
            .map(|i| gens[i].clone())
            .collect()
    }

    /// Same ideal with a minimal generating set.
    pub fn minimalized(&self) -> Ideal {
        Ideal::from_gens(self.ring, self.minimal_generators())
    }

    pub fn max_generator_degree(&self) -> Option<u32> {
        self.gens.iter().filter_map(Poly::degree).max()
    }

    pub fn min_generator_degree(&self) -> Option<u32> {
        self.gens.iter().filter_map(Poly::degree).min()
    }

    /// Lift of `f` to cofactors: `f = sum c_i g_i`.
    pub fn cofactors(&self, f: &Poly) -> Option<Vec<Poly>> {
        if f.is_zero() {
            return Some(vec![self.ring.zero(); self.gens.len()]);
        }
        let m = GradedMatrix::row(self.ring, 0, &self.gens);
        let aug = Augmented::new(&m);
        aug.lift(std::slice::from_ref(f))
    }
}

/// Indices of a minimal generating subset, taking elements in the given
/// (degree-sorted) order.
fn minimal_subset(ring: Ring, order: ModOrder, vects: &[Vect]) -> Vec<usize> {
    let mut eng = GbEngine::new(ring, order);
    let mut idx: Vec<usize> = (0..vects.len()).filter(|&i| !vects[i].is_empty()).collect();
    idx.sort_by_key(|&i| eng.vect_degree(&vects[i]).unwrap());
    let mut chosen = Vec::new();
    for i in idx {
        let d = eng.vect_degree(&vects[i]).unwrap();
        eng.run(Some(d));
        if eng.add(vects[i].clone()) {
            chosen.push(i);
        }
    }
    chosen.sort_unstable();
    chosen
}

/// Gröbner basis of the image of a matrix `G -> F` with `F` in the first
/// block and the graph coordinates `G` in a lower elimination block.
#[derive(Clone, Debug)]
pub(crate) struct Augmented {
    ring: Ring,
    rows: usize,
    source: GradedFreeModule,
    engine: GbEngine,
}

impl Augmented {
    pub fn new(m: &GradedMatrix) -> Self {
        let ring = m.ring();
        let (r, c) = (m.nrows(), m.ncols());
        let mut shifts = m.target().twists().to_vec();
        shifts.extend_from_slice(m.source().twists());
        let mut blocks = vec![1u8; r];
        blocks.extend(std::iter::repeat_n(0u8, c));
        let order = ModOrder::with_blocks(shifts, blocks);
        let mut eng = GbEngine::new(ring, order.clone());
        let mut cols: Vec<(i32, Vect)> = (0..c)
            .map(|j| {
                let mut col = m.column(j);
                let mut tail = vec![ring.zero(); c];
                tail[j] = ring.one();
                col.extend(tail);
                (m.source().twist(j), column_to_vect(&order, &col, 0))
            })
            .collect();
        cols.sort_by_key(|x| x.0);
        for (_, v) in cols {
            eng.add(v);
        }
        eng.complete();
        Augmented { ring, rows: r, source: m.source().clone(), engine: eng }
    }

    /// Kernel elements found in the Gröbner basis (a generating set).
    pub fn kernel_vectors(&self) -> Vec<Vect> {
        let rows = self.rows as u32;
        self.engine
            .basis()
            .iter()
            .filter(|v| v[0].comp >= rows)
            .map(|v| {
                v.iter()
                    .map(|t| engine::VTerm { comp: t.comp - rows, mono: t.mono, c: t.c.clone() })
                    .collect()
            })
            .collect()
    }

    /// Solves `m x = y`.
    pub fn lift(&self, y: &[Poly]) -> Option<Vec<Poly>> {
        debug_assert_eq!(y.len(), self.rows);
        let v = column_to_vect(self.engine.order(), y, 0);
        let r = self.engine.reduce_high_block(v);
        if r.first().is_some_and(|t| (t.comp as usize) < self.rows) {
            return None;
        }
        let x = vect_to_column(self.ring, &r, self.rows as u32, self.source.rank());
        Some(x.into_iter().map(|p| p.neg()).collect())
    }
}

/// Generators of the kernel of `m` (not necessarily minimal), as columns.
fn kernel_generators(m: &GradedMatrix) -> Vec<Vec<Poly>> {
    let aug = Augmented::new(m);
    let order = ModOrder::new(m.source().twists().to_vec());
    let mut vects: Vec<Vect> = aug
        .kernel_vectors()
        .into_iter()
        .map(|v| {
            let mut v = v;
            v.sort_by(|a, b| order.cmp(b.comp, &b.mono, a.comp, &a.mono));
            v
        })
        .collect();
    vects.sort_by_key(|v| order.total_degree(v[0].comp, &v[0].mono));
    let keep = minimal_subset(m.ring(), order, &vects);
    keep.into_iter()
        .map(|i| vect_to_column(m.ring(), &vects[i], 0, m.ncols()))
        .collect()
}

/// Minimal generators of the kernel of `m`, as the columns of a matrix into
/// `m.source()`.
pub fn syzygies(m: &GradedMatrix) -> GradedMatrix {
    let ring = m.ring();
    let cols = kernel_generators(m);
    let twists: Vec<i32> = cols.iter().map(|c| column_degree(m.source(), c)).collect();
    GradedMatrix::from_columns_unchecked(ring, m.source().clone(), GradedFreeModule::new(twists), cols)
}

/// Degree of a nonzero homogeneous column in a graded free module.
pub(crate) fn column_degree(ambient: &GradedFreeModule, col: &[Poly]) -> i32 {
    col.iter()
        .enumerate()
        .find(|(_, p)| !p.is_zero())
        .map(|(i, p)| p.degree().unwrap() as i32 + ambient.twist(i))
        .expect("zero column has no degree")
}

/// Solves `m x = y` for a column `y`.
pub fn lift_vector(m: &GradedMatrix, y: &[Poly]) -> Option<Vec<Poly>> {
    Augmented::new(m).lift(y)
}

/// Reusable solver for `m X = B`.
#[derive(Clone, Debug)]
pub struct Lifter {
    m: GradedMatrix,
    aug: Augmented,
}

impl Lifter {
    pub fn new(m: &GradedMatrix) -> Self {
        Lifter { m: m.clone(), aug: Augmented::new(m) }
    }

    pub fn lift(&self, y: &[Poly]) -> Option<Vec<Poly>> {
        if y.iter().all(Poly::is_zero) {
            return Some(vec![self.m.ring().zero(); self.m.ncols()]);
        }
        self.aug.lift(y)
    }

    /// `X` with `m X = b`, as a map `b.source() -> m.source()`.
    pub fn lift_matrix(&self, b: &GradedMatrix) -> Option<GradedMatrix> {
        let mut cols = Vec::with_capacity(b.ncols());
        for j in 0..b.ncols() {
            cols.push(self.lift(&b.column(j))?);
        }
        Some(GradedMatrix::from_columns_unchecked(
            self.m.ring(),
            self.m.source().clone(),
            b.source().clone(),
            cols,
        ))
    }
}

/// Solves `m X = b` for a matrix `b` with the same target.
pub fn lift_matrix(m: &GradedMatrix, b: &GradedMatrix) -> Option<GradedMatrix> {
    Lifter::new(m).lift_matrix(b)
}

/// A minimal generating subset of the columns of `m` (zero columns dropped).
pub fn minimal_columns(m: &GradedMatrix) -> GradedMatrix {
    let order = ModOrder::new(m.target().twists().to_vec());
    let vects: Vec<Vect> = (0..m.ncols()).map(|j| column_to_vect(&order, &m.column(j), 0)).collect();
    let keep = minimal_subset(m.ring(), order, &vects);
    m.select_columns(&keep)
}

/// Gröbner basis of a submodule given by generating columns.
#[derive(Clone, Debug)]
pub struct SubmoduleGb {
    ring: Ring,
    ambient: GradedFreeModule,
    engine: GbEngine,
}

impl SubmoduleGb {
    pub fn new(columns: &GradedMatrix) -> Self {
        let ring = columns.ring();
        let order = ModOrder::new(columns.target().twists().to_vec());
        let mut eng = GbEngine::new(ring, order.clone());
        let mut vs: Vec<Vect> = (0..columns.ncols())
            .map(|j| column_to_vect(&order, &columns.column(j), 0))
            .filter(|v| !v.is_empty())
            .collect();
        vs.sort_by_key(|v| order.total_degree(v[0].comp, &v[0].mono));
        for v in vs {
            eng.add(v);
        }
        eng.complete();
        SubmoduleGb { ring, ambient: columns.target().clone(), engine: eng }
    }

    pub fn ambient(&self) -> &GradedFreeModule {
        &self.ambient
    }

    pub fn reduce(&self, v: &[Poly]) -> Vec<Poly> {
        let r = self.engine.reduce(column_to_vect(self.engine.order(), v, 0));
        vect_to_column(self.ring, &r, 0, self.ambient.rank())
    }

    pub fn contains(&self, v: &[Poly]) -> bool {
        self.reduce(v).iter().all(Poly::is_zero)
    }

    pub fn contains_columns(&self, m: &GradedMatrix) -> bool {
        (0..m.ncols()).all(|j| self.contains(&m.column(j)))
    }

    pub fn is_groebner(&self) -> bool {
        self.engine.is_groebner()
    }

    pub fn lead_monomials(&self) -> Vec<Vec<Mono>> {
        self.engine.lead_monomials()
    }

    /// Hilbert series numerator of `ambient / submodule`.
    pub fn quotient_numerator(&self) -> LaurentPoly {
        let n = self.ring.nvars();
        let mut acc = LaurentPoly::default();
        for (c, leads) in self.lead_monomials().iter().enumerate() {
            let v = hilbert::monomial_numerator(leads, n);
            let shift = self.ambient.twist(c);
            for (i, &x) in v.iter().enumerate() {
                acc.add_assign(&LaurentPoly::monomial(i as i32 + shift, x));
            }
        }
        acc
    }

    pub fn quotient_dimension(&self, d: i64) -> i128 {
        hilbert::hilbert_from_numerator(&self.quotient_numerator(), self.ring.nvars(), d)
    }
}

/// Reduced Gröbner basis of an ideal.
pub fn groebner_basis(i: &Ideal) -> Vec<Poly> {
    i.groebner_basis().to_vec()
}

pub fn ideal_quotient(i: &Ideal, j: &Ideal) -> Ideal {
    i.quotient(j)
}

pub fn codimension(i: &Ideal) -> Result<usize, GroebnerError> {
    i.codimension()
}

/// `dim_k I_d` (zero for negative `d`).
pub fn hilbert_function(i: &Ideal, d: i64) -> i128 {
    i.dimension_in_degree(d)
}

/// True iff the forms generate an ideal of codimension equal to their number.
pub fn is_regular_sequence(fs: &[Poly]) -> bool {
    let Some(first) = fs.first() else { return true };
    if fs.iter().any(|f| f.is_zero() || f.degree() == Some(0) || !f.is_homogeneous()) {
        return false;
    }
    let i = Ideal::from_gens(first.ring(), fs.to_vec());
    i.codimension().map(|c| c == fs.len()).unwrap_or(false)
}

/// Number of minimal generators per degree of `coker(presentation)`.
pub fn module_minimal_generators(presentation: &GradedMatrix) -> TwistFunction {
    let m = crate::modules::GradedModule::new(presentation.clone()).minimal_presentation();
    TwistFunction::from_twists(m.generators().twists())
}
