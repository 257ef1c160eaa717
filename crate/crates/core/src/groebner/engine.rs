//! Buchberger's algorithm for homogeneous submodules of graded free modules.
//!
//! Vectors are lists of `(component, monomial, coefficient)` terms sorted
//! decreasingly in a position-aware order: an optional block index first
//! (used for elimination), then total degree, then grevlex, then position.

use std::cmp::Ordering;

use crate::algebra::{Coeff, Field, Mono, Poly, Ring};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct VTerm {
    pub comp: u32,
    pub mono: Mono,
    pub c: Coeff,
}

pub(crate) type Vect = Vec<VTerm>;

#[derive(Clone, Debug)]
pub(crate) struct ModOrder {
    shifts: Vec<i32>,
    blocks: Vec<u8>,
}

impl ModOrder {
    pub fn new(shifts: Vec<i32>) -> Self {
        let blocks = vec![0; shifts.len()];
        ModOrder { shifts, blocks }
    }

    pub fn with_blocks(shifts: Vec<i32>, blocks: Vec<u8>) -> Self {
        debug_assert_eq!(shifts.len(), blocks.len());
        ModOrder { shifts, blocks }
    }

    pub fn rank(&self) -> usize {
        self.shifts.len()
    }

    pub fn block(&self, comp: u32) -> u8 {
        self.blocks[comp as usize]
    }

    #[inline]
    pub fn total_degree(&self, comp: u32, m: &Mono) -> i32 {
        m.degree() as i32 + self.shifts[comp as usize]
    }

    #[inline]
    pub fn cmp(&self, ca: u32, ma: &Mono, cb: u32, mb: &Mono) -> Ordering {
        let (ba, bb) = (self.blocks[ca as usize], self.blocks[cb as usize]);
        if ba != bb {
            return ba.cmp(&bb);
        }
        let (da, db) = (self.total_degree(ca, ma), self.total_degree(cb, mb));
        if da != db {
            return da.cmp(&db);
        }
        match ma.grevlex(mb) {
            Ordering::Equal => cb.cmp(&ca),
            o => o,
        }
    }
}

/// `a - c * m * g`.
pub(crate) fn sub_scaled(
    field: Field,
    order: &ModOrder,
    a: &[VTerm],
    c: &Coeff,
    m: &Mono,
    g: &[VTerm],
) -> Vect {
    let mut out = Vec::with_capacity(a.len() + g.len());
    let (mut i, mut j) = (0, 0);
    let mut gt: Option<VTerm> = g.first().map(|t| VTerm {
        comp: t.comp,
        mono: t.mono.mul(m),
        c: field.neg(&field.mul(&t.c, c)),
    });
    while i < a.len() {
        let Some(b) = &gt else { break };
        match order.cmp(a[i].comp, &a[i].mono, b.comp, &b.mono) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push(b.clone());
                j += 1;
                gt = next_scaled(field, g, j, c, m);
            }
            Ordering::Equal => {
                let s = field.add(&a[i].c, &b.c);
                if !field.is_zero(&s) {
                    out.push(VTerm { comp: a[i].comp, mono: a[i].mono, c: s });
                }
                i += 1;
                j += 1;
                gt = next_scaled(field, g, j, c, m);
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    while let Some(b) = gt {
        out.push(b);
        j += 1;
        gt = next_scaled(field, g, j, c, m);
    }
    out
}

#[inline]
fn next_scaled(field: Field, g: &[VTerm], j: usize, c: &Coeff, m: &Mono) -> Option<VTerm> {
    g.get(j).map(|t| VTerm { comp: t.comp, mono: t.mono.mul(m), c: field.neg(&field.mul(&t.c, c)) })
}

pub(crate) fn scale_vect(field: Field, v: &[VTerm], c: &Coeff) -> Vect {
    if field.is_zero(c) {
        return Vec::new();
    }
    v.iter().map(|t| VTerm { comp: t.comp, mono: t.mono, c: field.mul(&t.c, c) }).collect()
}

pub(crate) fn mul_vect(field: Field, v: &[VTerm], m: &Mono, c: &Coeff) -> Vect {
    if field.is_zero(c) {
        return Vec::new();
    }
    v.iter().map(|t| VTerm { comp: t.comp, mono: t.mono.mul(m), c: field.mul(&t.c, c) }).collect()
}

pub(crate) fn monic(field: Field, v: Vect) -> Vect {
    match v.first() {
        None => v,
        Some(t) if field.is_one(&t.c) => v,
        Some(t) => {
            let inv = field.inv(&t.c).unwrap();
            scale_vect(field, &v, &inv)
        }
    }
}

/// Converts a column of polynomials (component `i + offset`) into a sorted vector.
pub(crate) fn column_to_vect(order: &ModOrder, col: &[Poly], offset: u32) -> Vect {
    let mut v: Vect = Vec::new();
    for (i, p) in col.iter().enumerate() {
        for (m, c) in p.terms() {
            v.push(VTerm { comp: i as u32 + offset, mono: *m, c: c.clone() });
        }
    }
    v.sort_by(|a, b| order.cmp(b.comp, &b.mono, a.comp, &a.mono));
    v
}

/// Splits a vector back into polynomials for components `offset..offset+len`.
pub(crate) fn vect_to_column(ring: Ring, v: &[VTerm], offset: u32, len: usize) -> Vec<Poly> {
    let mut buckets: Vec<Vec<(Mono, Coeff)>> = vec![Vec::new(); len];
    for t in v {
        let k = t.comp.checked_sub(offset).expect("component below offset") as usize;
        if k < len {
            buckets[k].push((t.mono, t.c.clone()));
        }
    }
    buckets.into_iter().map(|b| Poly::from_sorted(ring, b)).collect()
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Mono,
    comp: u32,
    deg: i32,
}

#[derive(Clone, Debug)]
struct Lead {
    comp: u32,
    mono: Mono,
    support: u32,
}

/// Incremental Gröbner basis builder. Elements are kept monic.
#[derive(Clone, Debug)]
pub(crate) struct GbEngine {
    ring: Ring,
    order: ModOrder,
    basis: Vec<Vect>,
    leads: Vec<Lead>,
    by_comp: Vec<Vec<usize>>,
    pairs: Vec<Pair>,
    ideal_mode: bool,
}

impl GbEngine {
    pub fn new(ring: Ring, order: ModOrder) -> Self {
        let n = order.rank();
        GbEngine {
            ring,
            ideal_mode: n == 1,
            order,
            basis: Vec::new(),
            leads: Vec::new(),
            by_comp: vec![Vec::new(); n],
            pairs: Vec::new(),
        }
    }

    pub fn order(&self) -> &ModOrder {
        &self.order
    }

    pub fn basis(&self) -> &[Vect] {
        &self.basis
    }

    fn field(&self) -> Field {
        self.ring.field()
    }

    pub fn vect_degree(&self, v: &[VTerm]) -> Option<i32> {
        v.first().map(|t| self.order.total_degree(t.comp, &t.mono))
    }

    fn find_divisor(&self, comp: u32, m: &Mono) -> Option<usize> {
        let sup = m.support();
        self.by_comp[comp as usize].iter().copied().find(|&k| {
            let l = &self.leads[k];
            l.support & !sup == 0 && l.mono.divides(m)
        })
    }

    /// Reduces `v`; with `full` the tail is reduced too, otherwise only the
    /// leading term is cleared. `stop` returns true for a leading term that
    /// should end the reduction (used by lifts).
    fn reduce_with(&self, v: Vect, full: bool, stop: &dyn Fn(&VTerm) -> bool) -> Vect {
        let field = self.field();
        let mut out: Vect = Vec::new();
        let mut rest = v;
        let mut start = 0;
        while start < rest.len() {
            let t = &rest[start];
            if stop(t) {
                break;
            }
            match self.find_divisor(t.comp, &t.mono) {
                Some(k) => {
                    let q = self.leads[k].mono.quotient(&t.mono);
                    let c = t.c.clone();
                    rest = sub_scaled(field, &self.order, &rest[start..], &c, &q, &self.basis[k]);
                    start = 0;
                }
                None if full => {
                    out.push(rest[start].clone());
                    start += 1;
                }
                None => break,
            }
        }
        out.extend_from_slice(&rest[start..]);
        out
    }

    pub fn reduce(&self, v: Vect) -> Vect {
        self.reduce_with(v, true, &|_| false)
    }

    /// Clears all terms in block `> 0` if possible.
    pub fn reduce_high_block(&self, v: Vect) -> Vect {
        let order = &self.order;
        self.reduce_with(v, false, &|t| order.block(t.comp) == 0)
    }

    /// Adds an element without reduction bookkeeping beyond making it monic.
    fn push(&mut self, v: Vect) {
        let v = monic(self.field(), v);
        let t = &v[0];
        let lead = Lead { comp: t.comp, mono: t.mono, support: t.mono.support() };
        let idx = self.basis.len();
        self.update_pairs(idx, &lead);
        self.by_comp[lead.comp as usize].push(idx);
        self.leads.push(lead);
        self.basis.push(v);
    }

    fn update_pairs(&mut self, t: usize, lead: &Lead) {
        let comp = lead.comp;
        let m = lead.mono;
        let leads = &self.leads;
        self.pairs.retain(|p| {
            if p.comp != comp || !m.divides(&p.lcm) {
                return true;
            }
            let li = leads[p.i].mono.lcm(&m);
            let lj = leads[p.j].mono.lcm(&m);
            li == p.lcm || lj == p.lcm
        });
        let mut new: Vec<(Pair, bool)> = self.by_comp[comp as usize]
            .iter()
            .map(|&i| {
                let li = self.leads[i].mono;
                let l = li.lcm(&m);
                let coprime = li.is_coprime(&m);
                (Pair { i, j: t, lcm: l, comp, deg: self.order.total_degree(comp, &l) }, coprime)
            })
            .collect();
        let all_lcms: Vec<Mono> = new.iter().map(|(p, _)| p.lcm).collect();
        new.retain(|(p, _)| !all_lcms.iter().any(|q| *q != p.lcm && q.divides(&p.lcm)));
        let mut kept: Vec<Pair> = Vec::new();
        let mut groups: Vec<(Mono, bool)> = Vec::new();
        for (p, coprime) in &new {
            match groups.iter_mut().find(|g| g.0 == p.lcm) {
                Some(g) => g.1 |= *coprime,
                None => groups.push((p.lcm, *coprime)),
            }
        }
        for (l, any_coprime) in groups {
            if self.ideal_mode && any_coprime {
                continue;
            }
            if let Some((p, _)) = new.iter().find(|(p, _)| p.lcm == l) {
                kept.push(p.clone());
            }
        }
        self.pairs.extend(kept);
    }

    fn spoly(&self, p: &Pair) -> Vect {
        let field = self.field();
        let gi = &self.basis[p.i];
        let gj = &self.basis[p.j];
        let mi = self.leads[p.i].mono.quotient(&p.lcm);
        let mj = self.leads[p.j].mono.quotient(&p.lcm);
        let a = mul_vect(field, gi, &mi, &field.one());
        sub_scaled(field, &self.order, &a, &field.one(), &mj, gj)
    }

    /// Reduces and, if nonzero, adds `v`. Returns whether it was new.
    pub fn add(&mut self, v: Vect) -> bool {
        let r = self.reduce(v);
        if r.is_empty() {
            return false;
        }
        self.push(r);
        true
    }

    /// Lowest degree among pending pairs.
    pub fn next_degree(&self) -> Option<i32> {
        self.pairs.iter().map(|p| p.deg).min()
    }

    /// Processes all pairs of degree at most `bound` (all pairs if `None`).
    pub fn run(&mut self, bound: Option<i32>) {
        while let Some(d) = self.next_degree() {
            if bound.is_some_and(|b| d > b) {
                break;
            }
            let (mut batch, rest): (Vec<Pair>, Vec<Pair>) =
                std::mem::take(&mut self.pairs).into_iter().partition(|p| p.deg == d);
            self.pairs = rest;
            let order = &self.order;
            batch.sort_by(|a, b| order.cmp(a.comp, &a.lcm, b.comp, &b.lcm));
            for p in batch {
                let s = self.spoly(&p);
                let r = self.reduce(s);
                if !r.is_empty() {
                    self.push(r);
                }
            }
        }
    }

    pub fn complete(&mut self) {
        self.run(None);
    }

    /// Indices of elements whose leads are minimal (no other lead divides them).
    pub fn minimal_indices(&self) -> Vec<usize> {
        (0..self.basis.len())
            .filter(|&i| {
                let li = &self.leads[i];
                !self.by_comp[li.comp as usize].iter().any(|&j| {
                    j != i
                        && self.leads[j].mono.divides(&li.mono)
                        && (self.leads[j].mono != li.mono || j < i)
                })
            })
            .collect()
    }

    /// The reduced Gröbner basis, sorted increasingly by leading term.
    pub fn reduced_basis(&self) -> Vec<Vect> {
        let keep = self.minimal_indices();
        let mut tmp = GbEngine::new(self.ring, self.order.clone());
        for &i in &keep {
            tmp.push_raw(self.basis[i].clone());
        }
        let mut out: Vec<Vect> = (0..tmp.basis.len())
            .map(|k| {
                let v = &tmp.basis[k];
                let mut tail = tmp.reduce_excluding(v[1..].to_vec(), k);
                let mut full = vec![v[0].clone()];
                full.append(&mut tail);
                full
            })
            .collect();
        let order = &self.order;
        out.sort_by(|a, b| order.cmp(a[0].comp, &a[0].mono, b[0].comp, &b[0].mono));
        out
    }

    fn push_raw(&mut self, v: Vect) {
        let v = monic(self.field(), v);
        let t = &v[0];
        let lead = Lead { comp: t.comp, mono: t.mono, support: t.mono.support() };
        self.by_comp[lead.comp as usize].push(self.basis.len());
        self.leads.push(lead);
        self.basis.push(v);
    }

    fn reduce_excluding(&self, v: Vect, skip: usize) -> Vect {
        let field = self.field();
        let mut out: Vect = Vec::new();
        let mut rest = v;
        let mut start = 0;
        while start < rest.len() {
            let t = &rest[start];
            let sup = t.mono.support();
            let div = self.by_comp[t.comp as usize].iter().copied().find(|&k| {
                k != skip && self.leads[k].support & !sup == 0 && self.leads[k].mono.divides(&t.mono)
            });
            match div {
                Some(k) => {
                    let q = self.leads[k].mono.quotient(&t.mono);
                    let c = t.c.clone();
                    rest = sub_scaled(field, &self.order, &rest[start..], &c, &q, &self.basis[k]);
                    start = 0;
                }
                None => {
                    out.push(rest[start].clone());
                    start += 1;
                }
            }
        }
        out
    }

    /// Minimal leading monomials per component.
    pub fn lead_monomials(&self) -> Vec<Vec<Mono>> {
        let mut out = vec![Vec::new(); self.order.rank()];
        for i in self.minimal_indices() {
            out[self.leads[i].comp as usize].push(self.leads[i].mono);
        }
        out
    }

    /// Checks Buchberger's criterion on the current basis.
    pub fn is_groebner(&self) -> bool {
        for i in 0..self.basis.len() {
            for j in (i + 1)..self.basis.len() {
                if self.leads[i].comp != self.leads[j].comp {
                    continue;
                }
                let l = self.leads[i].mono.lcm(&self.leads[j].mono);
                let p = Pair { i, j, lcm: l, comp: self.leads[i].comp, deg: 0 };
                if !self.reduce(self.spoly(&p)).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}
