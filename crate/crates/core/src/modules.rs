//! Finitely generated graded modules given by presentations.

use std::collections::HashMap;

use rand::Rng;

use crate::algebra::{Coeff, GradedFreeModule, GradedMatrix, Mono, Poly, Ring};
use crate::groebner::hilbert::{self, LaurentPoly};
use crate::linalg::DenseMatrix;
use crate::groebner::{minimal_columns, syzygies, SubmoduleGb};
use crate::twist::TwistFunction;

/// `coker(R: F1 -> F0)`; the generators are the basis of `F0`.
#[derive(Clone, Debug)]
pub struct GradedModule {
    pres: GradedMatrix,
}

/// Removes the generator `i` using the relation `j`, whose `i`th entry is a
/// unit. Returns the presentation on the remaining generators and the
/// expression of the removed generator in terms of the others (indexed by
/// the old rows with row `i` dropped).
pub(crate) fn eliminate_generator(r: &GradedMatrix, i: usize, j: usize) -> (GradedMatrix, Vec<Poly>) {
    let ring = r.ring();
    let field = ring.field();
    let u = r.entry(i, j).constant_value().expect("pivot must be a unit");
    let uinv = field.inv(&u).expect("unit pivot");
    let pivot_col = r.column(j);
    let rows: Vec<usize> = (0..r.nrows()).filter(|&k| k != i).collect();
    let cols: Vec<usize> = (0..r.ncols()).filter(|&k| k != j).collect();
    let mut out_cols = Vec::with_capacity(cols.len());
    for &l in &cols {
        let a = r.entry(i, l).scale(&uinv);
        let col: Vec<Poly> = rows
            .iter()
            .map(|&k| {
                let e = r.entry(k, l);
                if a.is_zero() || pivot_col[k].is_zero() {
                    e.clone()
                } else {
                    e.sub(&a.mul(&pivot_col[k]))
                }
            })
            .collect();
        out_cols.push(col);
    }
    // e_i = -u^{-1} sum_{k != i} R_kj e_k.
    let nu = field.neg(&uinv);
    let expr: Vec<Poly> = rows.iter().map(|&k| pivot_col[k].scale(&nu)).collect();
    let m = GradedMatrix::from_columns_unchecked(
        ring,
        r.target().select(&rows),
        r.source().select(&cols),
        out_cols,
    );
    (m, expr)
}

impl GradedModule {
    pub fn new(pres: GradedMatrix) -> Self {
        GradedModule { pres }
    }

    pub fn free(ring: Ring, f: GradedFreeModule) -> Self {
        GradedModule { pres: GradedMatrix::zero(ring, f, GradedFreeModule::zero()) }
    }

    /// The image of `m`, generated by its columns.
    pub fn from_image(m: &GradedMatrix) -> Self {
        GradedModule { pres: syzygies(m) }.minimal_presentation()
    }

    /// The kernel of `m`.
    pub fn from_kernel(m: &GradedMatrix) -> Self {
        let k = syzygies(m);
        GradedModule { pres: syzygies(&k) }
    }

    pub fn ring(&self) -> Ring {
        self.pres.ring()
    }

    pub fn presentation(&self) -> &GradedMatrix {
        &self.pres
    }

    pub fn generators(&self) -> &GradedFreeModule {
        self.pres.target()
    }

    pub fn relations(&self) -> &GradedFreeModule {
        self.pres.source()
    }

    /// Minimal presentation: unit entries are cleared, then redundant
    /// relations dropped.
    pub fn minimal_presentation(&self) -> GradedModule {
        let mut r = self.pres.clone();
        while let Some((i, j)) = r.first_unit() {
            r = eliminate_generator(&r, i, j).0;
        }
        GradedModule { pres: minimal_columns(&r) }
    }

    /// Number of minimal generators per degree.
    pub fn generator_degrees(&self) -> TwistFunction {
        TwistFunction::from_twists(self.minimal_presentation().generators().twists())
    }

    pub fn hilbert_numerator(&self) -> LaurentPoly {
        SubmoduleGb::new(&self.pres).quotient_numerator()
    }

    /// `dim_k M_d`.
    pub fn dimension(&self, d: i64) -> i128 {
        hilbert::hilbert_from_numerator(&self.hilbert_numerator(), self.ring().nvars(), d)
    }

    /// Generic rank.
    pub fn rank(&self) -> i64 {
        self.hilbert_numerator().eval_one()
    }

    /// Krull dimension of the module (0 for the zero module).
    pub fn krull_dimension(&self) -> usize {
        let num = self.hilbert_numerator();
        if num.is_zero() {
            return 0;
        }
        self.ring().nvars() - num.strip_one_minus_t().1
    }

    pub fn is_zero(&self) -> bool {
        self.hilbert_numerator().is_zero()
    }

    /// True iff the module has finite length.
    pub fn is_finite_length(&self) -> bool {
        self.krull_dimension() == 0
    }

    /// `M(h)`.
    pub fn twisted(&self, h: i32) -> GradedModule {
        GradedModule { pres: self.pres.twisted(h) }
    }

    /// `Hom(M, S)`, presented as a kernel inside `F0^∨`.
    pub fn dual(&self) -> GradedModule {
        let rt = self.pres.dual(0);
        if rt.nrows() == 0 {
            return GradedModule::free(self.ring(), rt.source().clone());
        }
        GradedModule::from_kernel(&rt).minimal_presentation()
    }

    /// Generators of `Hom(M, S)` as columns of a matrix into `F0^∨`.
    pub fn dual_embedding(&self) -> GradedMatrix {
        let rt = self.pres.dual(0);
        if rt.nrows() == 0 {
            return GradedMatrix::identity(self.ring(), rt.source());
        }
        syzygies(&rt)
    }
}

/// Basis of the degree-zero homomorphisms `coker R1 -> coker R2`, each
/// given by a matrix on generators `A` with `A R1 ⊆ im R2`.
pub fn hom_degree_zero(m1: &GradedModule, m2: &GradedModule) -> Vec<GradedMatrix> {
    let ring = m1.ring();
    let field = ring.field();
    let n = ring.nvars();
    let (r1, r2) = (m1.presentation(), m2.presentation());
    let (g1, g2) = (r1.target(), r2.target());
    let (s1, s2) = (r1.source(), r2.source());
    let monos = |e: i32| if e < 0 { Vec::new() } else { Mono::all_of_degree(n, e as u32) };
    // Unknowns: coefficients of A (k, i, u) then B (l, j, v).
    let mut a_unknowns: Vec<(usize, usize, Mono)> = Vec::new();
    for k in 0..g2.rank() {
        for i in 0..g1.rank() {
            for u in monos(g1.twist(i) - g2.twist(k)) {
                a_unknowns.push((k, i, u));
            }
        }
    }
    let mut b_unknowns: Vec<(usize, usize, Mono)> = Vec::new();
    for l in 0..s2.rank() {
        for j in 0..s1.rank() {
            for v in monos(s1.twist(j) - s2.twist(l)) {
                b_unknowns.push((l, j, v));
            }
        }
    }
    let na = a_unknowns.len();
    let ncols = na + b_unknowns.len();
    if na == 0 {
        return Vec::new();
    }
    let mut eq_index: HashMap<(usize, usize, Mono), usize> = HashMap::new();
    let mut entries: Vec<(usize, usize, Coeff)> = Vec::new();
    let mut push = |key: (usize, usize, Mono), col: usize, c: Coeff, eq_index: &mut HashMap<_, usize>| {
        let len = eq_index.len();
        let row = *eq_index.entry(key).or_insert(len);
        entries.push((row, col, c));
    };
    for (col, &(k, i, u)) in a_unknowns.iter().enumerate() {
        for j in 0..s1.rank() {
            for (m, c) in r1.entry(i, j).terms() {
                push((k, j, m.mul(&u)), col, c.clone(), &mut eq_index);
            }
        }
    }
    for (bc, &(l, j, v)) in b_unknowns.iter().enumerate() {
        for k in 0..g2.rank() {
            for (m, c) in r2.entry(k, l).terms() {
                push((k, j, m.mul(&v)), na + bc, field.neg(c), &mut eq_index);
            }
        }
    }
    let mut mat = DenseMatrix::zeros(field, eq_index.len().max(1), ncols);
    for (row, col, c) in entries {
        let v = field.add(mat.get(row, col), &c);
        mat.set(row, col, v);
    }
    // Project the solution space onto the A coordinates.
    let kernel = mat.kernel();
    let rows: Vec<Vec<Coeff>> = kernel.into_iter().map(|v| v[..na].to_vec()).collect();
    if rows.is_empty() {
        return Vec::new();
    }
    let mut proj = DenseMatrix::from_rows(field, rows, na);
    let pivots = proj.rref();
    (0..pivots.len())
        .map(|r| {
            let mut cols = vec![vec![ring.zero(); g2.rank()]; g1.rank()];
            for (idx, &(k, i, u)) in a_unknowns.iter().enumerate() {
                let c = proj.get(r, idx);
                if !field.is_zero(c) {
                    cols[i][k] = cols[i][k].add(&ring.term(u, c.clone()));
                }
            }
            GradedMatrix::from_columns_unchecked(ring, g2.clone(), g1.clone(), cols)
        })
        .collect()
}

impl GradedModule {
    /// Isomorphism test for two modules (no twist). Both are minimalized;
    /// a random degree-zero map is tested for invertibility of its constant
    /// part, which together with equal Hilbert series certifies an
    /// isomorphism. A negative answer is correct with high probability
    /// (several random draws are tried).
    pub fn is_isomorphic<R: Rng + ?Sized>(&self, other: &GradedModule, rng: &mut R) -> bool {
        let a = self.minimal_presentation();
        let b = other.minimal_presentation();
        if a.generators().sorted_twists() != b.generators().sorted_twists()
            || a.relations().sorted_twists() != b.relations().sorted_twists()
            || a.hilbert_numerator() != b.hilbert_numerator()
        {
            return false;
        }
        if a.generators().rank() == 0 {
            return true;
        }
        let basis = hom_degree_zero(&a, &b);
        if basis.is_empty() {
            return false;
        }
        let field = a.ring().field();
        for _ in 0..3 {
            let mut acc = GradedMatrix::zero(a.ring(), b.generators().clone(), a.generators().clone());
            for m in &basis {
                acc = acc.add(&m.scale(&field.random(rng))).expect("same shape");
            }
            if constant_part_invertible(&acc) {
                return true;
            }
        }
        false
    }
}

/// The constant part of a degree-zero map between free modules with the
/// same twists is invertible.
fn constant_part_invertible(m: &GradedMatrix) -> bool {
    let field = m.ring().field();
    if m.nrows() != m.ncols() {
        return false;
    }
    let rows: Vec<Vec<Coeff>> = (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| m.entry(i, j).constant_value().unwrap_or_else(|| field.zero()))
                .collect()
        })
        .collect();
    DenseMatrix::from_rows(field, rows, m.ncols()).is_invertible()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;

    #[test]
    fn unit_elimination() {
        let r = Ring::new(Field::default(), 4).unwrap();
        // coker of [1; x0] from S(0) to S(0) ⊕ S(-1)... shifted so the
        // entries are homogeneous: generators in degrees 0 and 1.
        let m = GradedMatrix::from_columns(
            r,
            GradedFreeModule::new(vec![1, 0]),
            GradedFreeModule::new(vec![1]),
            vec![vec![r.one(), r.var(0)]],
        )
        .unwrap();
        let g = GradedModule::new(m).minimal_presentation();
        assert_eq!(g.generators().twists(), &[0]);
        assert_eq!(g.relations().rank(), 0);
        assert_eq!(g.rank(), 1);
    }

    #[test]
    fn ideal_as_module() {
        let r = Ring::new(Field::default(), 4).unwrap();
        let m = GradedMatrix::row(r, 0, &[r.var(0), r.var(1)]);
        let i = GradedModule::from_image(&m);
        assert_eq!(i.generators().twists(), &[1, 1]);
        assert_eq!(i.rank(), 1);
        assert_eq!(i.dimension(1), 2);
        // Hom((x0, x1), S) = S.
        let d = i.dual();
        assert_eq!(d.generators().twists(), &[0]);
        assert_eq!(d.relations().rank(), 0);
    }

    #[test]
    fn isomorphism_up_to_base_change() {
        use rand::SeedableRng;
        let r = Ring::new(Field::default(), 4).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let a = GradedModule::new(GradedMatrix::row(r, 0, &[r.var(0), r.var(1)]));
        let lin = crate::parse::parse_poly(r, "x0 + x1").unwrap();
        let b = GradedModule::new(GradedMatrix::row(r, 0, &[lin, r.var(1)]));
        let c = GradedModule::new(GradedMatrix::row(r, 0, &[r.var(2), r.var(3)]));
        assert!(a.is_isomorphic(&b, &mut rng));
        // Same Hilbert series, different annihilators.
        assert!(!a.is_isomorphic(&c, &mut rng));
        assert!(!a.is_isomorphic(&a.twisted(1), &mut rng));
    }
}
