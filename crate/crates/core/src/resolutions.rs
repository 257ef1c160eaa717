//! Graded free complexes: minimal resolutions, Koszul complexes, E-type and
//! N-type data, lifts of morphisms, mapping cones and cancellation of split
//! summands.
//!
//! Complexes are homological: `modules[0]` is the augmentation target and
//! `diffs[i]` maps `modules[i + 1] -> modules[i]`. The dual of a complex of
//! length `L` at twist `t` puts `modules[L - i]^∨(t)` in position `i`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::algebra::{GradedFreeModule, GradedMatrix, Poly, Ring};
use crate::groebner::{is_regular_sequence, oracle, syzygies, GroebnerError, Ideal, Lifter};
use crate::modules::GradedModule;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ResolutionError {
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error("resolution longer than the bound {0}")]
    LengthExceeded(usize),
    #[error("the forms are not a regular sequence")]
    NotRegularSequence,
    #[error("codimension {codim} is smaller than {r}")]
    CodimensionTooSmall { codim: usize, r: usize },
    #[error("no lift exists at position {0}")]
    LiftFailed(usize),
    #[error("not a complex: d∘d ≠ 0 at position {0}")]
    NotAComplex(usize),
    #[error("shape mismatch at position {0}")]
    Shape(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeComplex {
    ring: Ring,
    modules: Vec<GradedFreeModule>,
    diffs: Vec<GradedMatrix>,
}

/// Rank census of a complex: `(position, twist) -> rank`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BettiTable(pub BTreeMap<(usize, i32), usize>);

impl BettiTable {
    pub fn get(&self, pos: usize, twist: i32) -> usize {
        self.0.get(&(pos, twist)).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, i32, usize)> + '_ {
        self.0.iter().map(|(&(p, t), &c)| (p, t, c))
    }
}

impl fmt::Display for BettiTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut last = None;
        for (p, t, c) in self.iter() {
            if last != Some(p) {
                if last.is_some() {
                    writeln!(f)?;
                }
                write!(f, "{p}:")?;
                last = Some(p);
            }
            match t {
                0 => write!(f, " S^{c}")?,
                t if t > 0 => write!(f, " S(-{t})^{c}")?,
                t => write!(f, " S({})^{c}", -t)?,
            }
        }
        if last.is_some() {
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A unit entry of `d_pos` at `(row, col)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct UnitPivot {
    pub pos: usize,
    pub row: usize,
    pub col: usize,
}

/// `π(w) = w - (w_a / u) v` applied to each column of `m`, then row `a`
/// dropped. `v` is the pivot column with `v[a] = u`.
pub(crate) fn project_columns(m: &GradedMatrix, v: &[Poly], a: usize) -> GradedMatrix {
    let ring = m.ring();
    let field = ring.field();
    let u = v[a].constant_value().expect("pivot is a unit");
    let uinv = field.inv(&u).unwrap();
    let rows: Vec<usize> = (0..m.nrows()).filter(|&k| k != a).collect();
    let cols: Vec<Vec<Poly>> = (0..m.ncols())
        .map(|j| {
            let wa = m.entry(a, j).scale(&uinv);
            rows.iter()
                .map(|&k| {
                    let e = m.entry(k, j);
                    if wa.is_zero() || v[k].is_zero() {
                        e.clone()
                    } else {
                        e.sub(&wa.mul(&v[k]))
                    }
                })
                .collect()
        })
        .collect();
    GradedMatrix::from_columns_unchecked(ring, m.target().select(&rows), m.source().clone(), cols)
}

fn drop_row(m: &GradedMatrix, b: usize) -> GradedMatrix {
    m.without_row(b)
}

impl FreeComplex {
    /// Builds a complex from its differentials `d_1, d_2, ...`.
    pub fn from_differentials(ring: Ring, base: GradedFreeModule, diffs: Vec<GradedMatrix>) -> Result<Self, ResolutionError> {
        let mut modules = vec![base];
        for (i, d) in diffs.iter().enumerate() {
            if d.target() != &modules[i] {
                return Err(ResolutionError::Shape(i + 1));
            }
            modules.push(d.source().clone());
        }
        let c = FreeComplex { ring, modules, diffs };
        for k in 1..c.diffs.len() {
            if !c.diffs[k - 1].mul_unchecked(&c.diffs[k]).is_zero() {
                return Err(ResolutionError::NotAComplex(k));
            }
        }
        Ok(c)
    }

    pub(crate) fn from_parts(ring: Ring, base: GradedFreeModule, diffs: Vec<GradedMatrix>) -> Self {
        let mut modules = vec![base];
        for d in &diffs {
            modules.push(d.source().clone());
        }
        let c = FreeComplex { ring, modules, diffs };
        debug_assert!(c.is_complex(), "internally built complex has d∘d ≠ 0");
        c
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// Index of the last position.
    pub fn length(&self) -> usize {
        self.diffs.len()
    }

    pub fn modules(&self) -> &[GradedFreeModule] {
        &self.modules
    }

    /// The module at position `i`, zero beyond the end.
    pub fn module(&self, i: usize) -> GradedFreeModule {
        self.modules.get(i).cloned().unwrap_or_default()
    }

    /// `d_i: modules[i] -> modules[i - 1]`, zero beyond the end.
    pub fn differential(&self, i: usize) -> GradedMatrix {
        assert!(i >= 1);
        match self.diffs.get(i - 1) {
            Some(d) => d.clone(),
            None => GradedMatrix::zero(self.ring, self.module(i - 1), self.module(i)),
        }
    }

    pub fn differentials(&self) -> &[GradedMatrix] {
        &self.diffs
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.modules.iter().map(GradedFreeModule::rank).collect()
    }

    pub fn is_complex(&self) -> bool {
        (1..self.diffs.len()).all(|k| self.diffs[k - 1].mul_unchecked(&self.diffs[k]).is_zero())
    }

    /// Drops trailing zero modules.
    pub fn trimmed(mut self) -> Self {
        while self.diffs.last().is_some_and(|d| d.ncols() == 0) {
            self.diffs.pop();
            self.modules.pop();
        }
        self
    }

    /// Positions `0..=n`, padding with zero modules.
    pub fn truncated(&self, n: usize) -> FreeComplex {
        let mut diffs: Vec<GradedMatrix> = self.diffs.iter().take(n).cloned().collect();
        while diffs.len() < n {
            let t = diffs.last().map(|d| d.source().clone()).unwrap_or_else(|| self.modules[0].clone());
            diffs.push(GradedMatrix::zero(self.ring, t, GradedFreeModule::zero()));
        }
        FreeComplex::from_parts(self.ring, self.modules[0].clone(), diffs)
    }

    /// Dual at twist `t` with positions reversed (`i -> length - i`).
    pub fn dual(&self, t: i32) -> FreeComplex {
        let l = self.length();
        let base = self.modules[l].dual(t);
        let diffs = (1..=l).map(|k| self.diffs[l - k].dual(t)).collect();
        FreeComplex::from_parts(self.ring, base, diffs)
    }

    pub fn twisted(&self, h: i32) -> FreeComplex {
        FreeComplex::from_parts(
            self.ring,
            self.modules[0].twisted(h),
            self.diffs.iter().map(|d| d.twisted(h)).collect(),
        )
    }

    pub fn betti_table(&self) -> BettiTable {
        let mut t = BTreeMap::new();
        for (p, m) in self.modules.iter().enumerate() {
            for &d in m.twists() {
                *t.entry((p, d)).or_insert(0) += 1;
            }
        }
        BettiTable(t)
    }

    /// `dim H_i` in degree `d` by degreewise linear algebra.
    pub fn homology_dimension(&self, i: usize, d: i64) -> usize {
        let ker = if i == 0 {
            let n = self.ring.nvars();
            self.modules[0]
                .twists()
                .iter()
                .map(|&t| crate::groebner::hilbert::monomial_count(n, d - t as i64) as usize)
                .sum()
        } else {
            oracle::kernel_dimension(&self.differential(i), d)
        };
        let im = if i < self.length() { oracle::image_dimension(&self.diffs[i], d) } else { 0 };
        ker - im
    }

    /// Lowest unit entry in differentials `d_k` for `k >= from`.
    pub(crate) fn find_unit(&self, from: usize) -> Option<UnitPivot> {
        for k in from.max(1)..=self.length() {
            if let Some((row, col)) = self.diffs[k - 1].first_unit() {
                return Some(UnitPivot { pos: k, row, col });
            }
        }
        None
    }

    /// Gaussian elimination of one unit pivot; returns the pivot column
    /// (in the old position `pos - 1`) for transporting maps.
    pub(crate) fn cancel(&mut self, p: UnitPivot) -> Vec<Poly> {
        let k = p.pos;
        let d = &self.diffs[k - 1];
        let v = d.column(p.col);
        let new_d = project_columns(&d.without_column(p.col), &v, p.row);
        self.diffs[k - 1] = new_d;
        if k < self.diffs.len() {
            self.diffs[k] = drop_row(&self.diffs[k], p.col);
        }
        if k >= 2 {
            self.diffs[k - 2] = self.diffs[k - 2].without_column(p.row);
        }
        self.modules[k - 1] = self.modules[k - 1].without(p.row);
        self.modules[k] = self.modules[k].without(p.col);
        v
    }

    /// Repeatedly cancels unit entries, lowest `(position, row, column)` first.
    pub fn cancel_split_summands(&self) -> FreeComplex {
        let mut c = self.clone();
        while let Some(p) = c.find_unit(1) {
            c.cancel(p);
        }
        c
    }

    /// Max over positions `p` of `(largest twist at p) - p - offset`.
    pub fn regularity(&self, offset: i32) -> Option<i32> {
        self.modules
            .iter()
            .enumerate()
            .filter_map(|(p, m)| m.twists().iter().max().map(|&t| t - p as i32 - offset))
            .max()
    }
}

/// Minimal free resolution of `S / I`, with `I`'s minimal generators at
/// position 1.
pub fn minimal_free_resolution(i: &Ideal, max_length: usize) -> Result<FreeComplex, ResolutionError> {
    let ring = i.ring();
    let gens = i.minimal_generators();
    let d1 = GradedMatrix::row(ring, 0, &gens);
    resolve_from(ring, GradedFreeModule::new(vec![0]), d1, max_length)
}

/// Minimal free resolution of a module, generators at position 0.
pub fn resolve_module(m: &GradedModule, max_length: usize) -> Result<FreeComplex, ResolutionError> {
    let m = m.minimal_presentation();
    let p = m.presentation().clone();
    resolve_from(m.ring(), p.target().clone(), p, max_length)
}

fn resolve_from(ring: Ring, base: GradedFreeModule, first: GradedMatrix, max_length: usize) -> Result<FreeComplex, ResolutionError> {
    let mut diffs = Vec::new();
    let mut cur = first;
    while cur.ncols() > 0 {
        if diffs.len() >= max_length {
            return Err(ResolutionError::LengthExceeded(max_length));
        }
        let next = syzygies(&cur);
        diffs.push(cur);
        cur = next;
    }
    Ok(FreeComplex::from_parts(ring, base, diffs))
}

/// Koszul complex of a regular sequence.
pub fn koszul_complex(fs: &[Poly]) -> Result<FreeComplex, ResolutionError> {
    if !is_regular_sequence(fs) {
        return Err(ResolutionError::NotRegularSequence);
    }
    let ring = fs[0].ring();
    Ok(koszul_unchecked(ring, fs))
}

pub(crate) fn koszul_unchecked(ring: Ring, fs: &[Poly]) -> FreeComplex {
    let r = fs.len();
    let degs: Vec<i32> = fs.iter().map(|f| f.degree().unwrap() as i32).collect();
    let subsets = |k: usize| -> Vec<u32> {
        let mut v: Vec<u32> = (0u32..(1 << r)).filter(|m| m.count_ones() as usize == k).collect();
        v.sort_by_key(|m| (0..r).map(|i| (m >> i) & 1 == 0).collect::<Vec<_>>());
        v
    };
    let twist = |m: u32| (0..r).filter(|i| m >> i & 1 == 1).map(|i| degs[i]).sum::<i32>();
    let mut diffs = Vec::new();
    for k in 1..=r {
        let src = subsets(k);
        let tgt = subsets(k - 1);
        let cols: Vec<Vec<Poly>> = src
            .iter()
            .map(|&s| {
                let mut col = vec![ring.zero(); tgt.len()];
                let mut sign = 1i64;
                for i in 0..r {
                    if s >> i & 1 == 1 {
                        let t = s & !(1 << i);
                        let row = tgt.iter().position(|&x| x == t).unwrap();
                        col[row] = fs[i].scale(&ring.field().from_i64(sign));
                        sign = -sign;
                    }
                }
                col
            })
            .collect();
        diffs.push(GradedMatrix::from_columns_unchecked(
            ring,
            GradedFreeModule::new(tgt.iter().map(|&m| twist(m)).collect()),
            GradedFreeModule::new(src.iter().map(|&m| twist(m)).collect()),
            cols,
        ));
    }
    FreeComplex::from_parts(ring, GradedFreeModule::new(vec![0]), diffs)
}

/// A morphism of complexes: `maps[k]: F_k -> G_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexMorphism {
    pub maps: Vec<GradedMatrix>,
}

impl ComplexMorphism {
    /// Checks `d^G_k ∘ α_k = α_{k-1} ∘ d^F_k` for every available `k`.
    pub fn commutes(&self, f: &FreeComplex, g: &FreeComplex) -> bool {
        (1..self.maps.len()).all(|k| {
            let lhs = g.differential(k).mul_unchecked(&self.maps[k]);
            let rhs = self.maps[k - 1].mul_unchecked(&f.differential(k));
            lhs == rhs
        })
    }
}

/// Lifts `alpha0: F_0 -> G_0` to a morphism through position `upto`, using
/// exactness of `G`.
pub fn lift_morphism(
    f: &FreeComplex,
    g: &FreeComplex,
    alpha0: GradedMatrix,
    upto: usize,
) -> Result<ComplexMorphism, ResolutionError> {
    let mut maps = vec![alpha0];
    for k in 1..=upto {
        let b = maps[k - 1].mul_unchecked(&f.differential(k));
        let gk = g.differential(k);
        let m = if b.is_zero() {
            GradedMatrix::zero(f.ring(), gk.source().clone(), b.source().clone())
        } else {
            Lifter::new(&gk).lift_matrix(&b).ok_or(ResolutionError::LiftFailed(k))?
        };
        maps.push(m);
    }
    Ok(ComplexMorphism { maps })
}

/// Assembles a block matrix; `None` blocks are zero.
pub(crate) fn block_matrix(
    ring: Ring,
    targets: &[GradedFreeModule],
    sources: &[GradedFreeModule],
    blocks: &[Vec<Option<&GradedMatrix>>],
) -> GradedMatrix {
    let target = targets.iter().fold(GradedFreeModule::zero(), |a, b| a.direct_sum(b));
    let source = sources.iter().fold(GradedFreeModule::zero(), |a, b| a.direct_sum(b));
    let mut cols: Vec<Vec<Poly>> = vec![vec![ring.zero(); target.rank()]; source.rank()];
    let mut r0 = 0;
    for (bi, t) in targets.iter().enumerate() {
        let mut c0 = 0;
        for (bj, s) in sources.iter().enumerate() {
            if let Some(m) = blocks[bi][bj] {
                debug_assert_eq!((m.nrows(), m.ncols()), (t.rank(), s.rank()));
                for j in 0..s.rank() {
                    for i in 0..t.rank() {
                        cols[c0 + j][r0 + i] = m.entry(i, j).clone();
                    }
                }
            }
            c0 += s.rank();
        }
        r0 += t.rank();
    }
    GradedMatrix::from_columns_unchecked(ring, target, source, cols)
}

/// Mapping cone of `α: F -> G`: `C_k = G_k ⊕ F_{k-1}` with
/// `d(g, f) = (d g + α f, -d f)`.
pub fn mapping_cone(f: &FreeComplex, g: &FreeComplex, alpha: &ComplexMorphism) -> Result<FreeComplex, ResolutionError> {
    if !alpha.commutes(f, g) {
        return Err(ResolutionError::NotAComplex(0));
    }
    let ring = f.ring();
    let len = g.length().max(f.length() + 1);
    let fm = |k: isize| if k < 0 { GradedFreeModule::zero() } else { f.module(k as usize) };
    let am = |k: usize| {
        alpha.maps.get(k).cloned().unwrap_or_else(|| GradedMatrix::zero(ring, g.module(k), f.module(k)))
    };
    let mut diffs = Vec::new();
    for k in 1..=len {
        let (gk, gk1) = (g.module(k), g.module(k - 1));
        let (fk1, fk2) = (fm(k as isize - 1), fm(k as isize - 2));
        let dg = g.differential(k);
        let a = am(k - 1);
        let df = if k >= 2 { f.differential(k - 1).neg() } else { GradedMatrix::zero(ring, fk2.clone(), fk1.clone()) };
        diffs.push(block_matrix(
            ring,
            &[gk1, fk2],
            &[gk, fk1],
            &[vec![Some(&dg), Some(&a)], vec![None, Some(&df)]],
        ));
    }
    Ok(FreeComplex::from_parts(ring, g.module(0), diffs))
}

/// An E-type resolution `0 -> E -> Q_{r-1} -> ... -> Q_1 -> I -> 0`,
/// stored as a free complex at positions `0..=r+1`: position 0 is `S`,
/// positions `1..r` hold `Q_i`, position `r` holds generators of `E` (with
/// `d_r` their images in `Q_{r-1}`), and `d_{r+1}` presents `E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ETypeData {
    pub complex: FreeComplex,
    pub r: usize,
}

impl ETypeData {
    pub fn ring(&self) -> Ring {
        self.complex.ring()
    }

    /// The dissocié part `Q_{r-1} -> ... -> Q_1 -> S`.
    pub fn tail(&self) -> FreeComplex {
        self.complex.truncated(self.r - 1)
    }

    /// Generators of `E` inside `Q_{r-1}`.
    pub fn e_generators(&self) -> GradedMatrix {
        self.complex.differential(self.r)
    }

    pub fn e_module(&self) -> GradedModule {
        GradedModule::new(self.complex.differential(self.r + 1))
    }

    /// The ideal resolved.
    pub fn ideal(&self) -> Ideal {
        let d1 = self.complex.differential(1);
        Ideal::from_gens(self.ring(), d1.row_entries(0))
    }

    pub fn cancel_split_summands(&self) -> ETypeData {
        ETypeData { complex: self.complex.cancel_split_summands(), r: self.r }
    }

    /// Exactness of `0 -> E -> Q_{r-1} -> ... -> Q_1 -> S` at every inner
    /// position, degree by degree over `[lo, hi]`.
    pub fn is_exact_in_degrees(&self, lo: i64, hi: i64) -> bool {
        (lo..=hi).all(|d| (1..=self.r).all(|i| self.complex.homology_dimension(i, d) == 0))
    }
}

/// E-type data cut from the minimal free resolution at step `r`.
pub fn extract_e_type(i: &Ideal, r: usize) -> Result<ETypeData, ResolutionError> {
    let codim = i.codimension()?;
    if codim < r || r == 0 {
        return Err(ResolutionError::CodimensionTooSmall { codim, r });
    }
    let n = i.ring().nvars();
    let res = minimal_free_resolution(i, n + 1)?;
    Ok(ETypeData { complex: res.truncated(r + 1), r })
}

/// The morphism from a Koszul complex used by the linked transform.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulMap {
    pub forms: Vec<Poly>,
    pub source: FreeComplex,
    pub morphism: ComplexMorphism,
}

/// An N-type resolution `0 -> P_{r-1} -> ... -> P_1 -> N -> I(h) -> 0`.
///
/// The complex is normalized so that position 0 is `S` (twist 0); `h`
/// records the twist of the original. Position 1 is a free module `A`
/// containing `N` as the image of `n_gens`, and `d_1` restricted to `N`
/// maps onto the ideal. Positions `2..=r` hold `P_1..P_{r-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NTypeData {
    pub complex: FreeComplex,
    pub n_gens: GradedMatrix,
    pub h: i32,
    pub r: usize,
    pub koszul: Option<KoszulMap>,
}

impl NTypeData {
    pub fn ring(&self) -> Ring {
        self.complex.ring()
    }

    /// The dissocié part `P_{r-1} -> ... -> P_1` (positions `2..=r`).
    pub fn p_modules(&self) -> Vec<GradedFreeModule> {
        (2..=self.r).map(|p| self.complex.module(p)).collect()
    }

    /// `N` as a module, generated by the columns of `n_gens`.
    pub fn n_module(&self) -> GradedModule {
        GradedModule::new(syzygies(&self.n_gens))
    }

    /// The ideal resolved (in the normalized twist).
    pub fn ideal(&self) -> Ideal {
        let m = self.complex.differential(1).mul_unchecked(&self.n_gens);
        Ideal::from_gens(self.ring(), m.row_entries(0)).minimalized()
    }

    /// Unit cancellation in `d_2, d_3, ...`, projecting `n_gens` and the
    /// Koszul morphism along the way.
    pub fn cancel_split_summands(&self) -> NTypeData {
        let mut out = self.clone();
        while let Some(p) = out.complex.find_unit(2) {
            out.cancel_at(p);
        }
        out
    }

    fn cancel_at(&mut self, p: UnitPivot) {
        let v = self.complex.cancel(p);
        if p.pos == 2 {
            self.n_gens = project_columns(&self.n_gens, &v, p.row);
        }
        if let Some(km) = &mut self.koszul {
            let maps = &mut km.morphism.maps;
            if p.pos - 1 < maps.len() {
                maps[p.pos - 1] = project_columns(&maps[p.pos - 1], &v, p.row);
            }
            if p.pos < maps.len() {
                maps[p.pos] = maps[p.pos].without_row(p.col);
            }
        }
    }

    /// Exactness of `0 -> P_{r-1} -> ... -> P_1 -> N -> S` in the given degrees.
    pub fn is_exact_in_degrees(&self, lo: i64, hi: i64) -> bool {
        let c = &self.complex;
        let n_in_a = &self.n_gens;
        (lo..=hi).all(|d| {
            // At N: ker(d_1|N) = im d_2, measured inside A.
            let d1n = c.differential(1).mul_unchecked(n_in_a);
            let ker_n = oracle::kernel_dimension(&d1n, d) as i64 - oracle::kernel_dimension(n_in_a, d) as i64;
            let im2 = if c.length() >= 2 { oracle::image_dimension(&c.differential(2), d) as i64 } else { 0 };
            ker_n == im2 && (2..=self.r).all(|i| c.homology_dimension(i, d) == 0)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;
    use crate::parse::parse_poly;

    fn r4() -> Ring {
        Ring::new(Field::default(), 4).unwrap()
    }

    fn ideal(r: Ring, gens: &[&str]) -> Ideal {
        Ideal::new(r, gens.iter().map(|g| parse_poly(r, g).unwrap()).collect()).unwrap()
    }

    #[test]
    fn koszul_ranks_and_twists() {
        let r = r4();
        let k = koszul_complex(&[r.var(0), r.var(1)]).unwrap();
        assert_eq!(k.ranks(), vec![1, 2, 1]);
        let k3 = koszul_complex(&[r.var(0), r.var(1), r.var(2)]).unwrap();
        assert_eq!(k3.ranks(), vec![1, 3, 3, 1]);
        assert_eq!(k3.module(2).sorted_twists(), vec![2, 2, 2]);
        let q = koszul_complex(&[parse_poly(r, "x0*x2").unwrap(), parse_poly(r, "x1*x3").unwrap()]).unwrap();
        assert_eq!(q.module(2).twists(), &[4]);
        assert!(koszul_complex(&[r.var(0), parse_poly(r, "x0*x1").unwrap()]).is_err());
    }

    #[test]
    fn resolutions_of_curves() {
        let r = r4();
        let cubic = ideal(r, &["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"]);
        let res = minimal_free_resolution(&cubic, 5).unwrap();
        let b = res.betti_table();
        assert_eq!((b.get(1, 2), b.get(2, 3), res.length()), (3, 2, 2));
        let skew = ideal(r, &["x0*x2", "x0*x3", "x1*x2", "x1*x3"]);
        let res = minimal_free_resolution(&skew, 5).unwrap();
        assert_eq!(res.ranks(), vec![1, 4, 4, 1]);
        assert_eq!(res.module(3).twists(), &[4]);
        assert!(res.is_complex());
        for d in 0..6 {
            for i in 1..=3 {
                assert_eq!(res.homology_dimension(i, d), 0);
            }
        }
    }

    #[test]
    fn e_type_extraction() {
        let r = r4();
        let e = extract_e_type(&ideal(r, &["x0", "x1"]), 2).unwrap();
        assert_eq!(e.complex.module(2).twists(), &[2]);
        assert_eq!(e.e_module().relations().rank(), 0);
        let skew = extract_e_type(&ideal(r, &["x0*x2", "x0*x3", "x1*x2", "x1*x3"]), 2).unwrap();
        assert_eq!(skew.e_module().rank(), 3);
        assert!(skew.is_exact_in_degrees(-1, 5));
        assert!(extract_e_type(&ideal(r, &["x0"]), 2).is_err());
    }

    #[test]
    fn lifts_and_cones() {
        let r = r4();
        let line = ideal(r, &["x0", "x1"]);
        let g = minimal_free_resolution(&line, 5).unwrap();
        let f = koszul_complex(&[r.var(0), parse_poly(r, "x1*x2").unwrap()]).unwrap();
        let id = GradedMatrix::identity(r, &GradedFreeModule::new(vec![0]));
        let a = lift_morphism(&f, &g, id.clone(), 2).unwrap();
        assert!(a.commutes(&f, &g));
        assert_eq!(a.maps[1].entry(1, 1), &r.var(2));
        let same = lift_morphism(&g, &g, id, 2).unwrap();
        assert!(same.commutes(&g, &g));
        let cone = mapping_cone(&g, &g, &same).unwrap();
        assert!(cone.is_complex());
        assert_eq!(cone.ranks(), vec![1, 3, 3, 1]);
        let min = cone.cancel_split_summands();
        assert!(min.ranks().iter().all(|&x| x == 0));
    }

    #[test]
    fn dual_complex_mirrors_betti() {
        let r = r4();
        let k = koszul_complex(&[r.var(0), r.var(1)]).unwrap();
        let d = k.dual(0);
        assert_eq!(d.module(0).twists(), &[-2]);
        assert_eq!(d.module(2).twists(), &[0]);
        assert_eq!(d.dual(0), k);
    }
}
