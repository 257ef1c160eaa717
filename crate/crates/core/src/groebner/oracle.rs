//! Degreewise exact linear algebra: an independent check on Gröbner-based
//! results, using only multiplication maps between graded pieces.

use std::collections::HashMap;

use crate::algebra::{Coeff, Field, GradedMatrix, Mono, Poly, Ring};
use crate::linalg::DenseMatrix;

/// Monomial basis of `(⊕ S(-t_i))_d`.
struct DegreeBasis {
    index: HashMap<(usize, Mono), usize>,
    len: usize,
}

impl DegreeBasis {
    fn new(nvars: usize, twists: &[i32], d: i64) -> Self {
        let mut index = HashMap::new();
        let mut len = 0;
        for (c, &t) in twists.iter().enumerate() {
            let e = d - t as i64;
            if e < 0 {
                continue;
            }
            for m in Mono::all_of_degree(nvars, e as u32) {
                index.insert((c, m), len);
                len += 1;
            }
        }
        DegreeBasis { index, len }
    }

    /// Coordinates of `mult * col`.
    fn coords(&self, field: Field, col: &[Poly], mult: &Mono) -> Vec<Coeff> {
        let mut v = vec![field.zero(); self.len];
        for (c, p) in col.iter().enumerate() {
            for (m, k) in p.terms() {
                let i = self.index[&(c, m.mul(mult))];
                v[i] = k.clone();
            }
        }
        v
    }
}

fn monos(nvars: usize, e: i64) -> Vec<Mono> {
    if e < 0 {
        Vec::new()
    } else {
        Mono::all_of_degree(nvars, e as u32)
    }
}

/// Matrix of `m` in degree `d`: rows indexed by the basis of the source in
/// degree `d`, each row the image of that basis vector.
fn image_rows(m: &GradedMatrix, d: i64) -> (DenseMatrix, usize) {
    let ring = m.ring();
    let field = ring.field();
    let n = ring.nvars();
    let tb = DegreeBasis::new(n, m.target().twists(), d);
    let mut rows = Vec::new();
    for j in 0..m.ncols() {
        let col = m.column(j);
        for u in monos(n, d - m.source().twist(j) as i64) {
            rows.push(tb.coords(field, &col, &u));
        }
    }
    let src_dim = rows.len();
    (DenseMatrix::from_rows(field, rows, tb.len), src_dim)
}

/// `dim (im m)_d`.
pub fn image_dimension(m: &GradedMatrix, d: i64) -> usize {
    image_rows(m, d).0.rank()
}

/// `dim (ker m)_d`.
pub fn kernel_dimension(m: &GradedMatrix, d: i64) -> usize {
    let (a, src) = image_rows(m, d);
    src - a.rank()
}

/// `dim (coker m)_d`.
pub fn cokernel_dimension(m: &GradedMatrix, d: i64) -> usize {
    let n = m.ring().nvars();
    let total = DegreeBasis::new(n, m.target().twists(), d).len;
    total - image_dimension(m, d)
}

/// `dim I_d` for `I = (gens)`.
pub fn ideal_dimension(ring: Ring, gens: &[Poly], d: i64) -> usize {
    let gens: Vec<Poly> = gens.iter().filter(|g| !g.is_zero()).cloned().collect();
    if gens.is_empty() {
        return 0;
    }
    image_dimension(&GradedMatrix::row(ring, 0, &gens), d)
}

/// `dim (S/I)_d`.
pub fn quotient_ring_dimension(ring: Ring, gens: &[Poly], d: i64) -> usize {
    monos(ring.nvars(), d).len() - ideal_dimension(ring, gens, d)
}

/// `dim ((I : J)_d)` where `I = (i_gens)`, `J = (j_gens)`.
pub fn colon_dimension(ring: Ring, i_gens: &[Poly], j_gens: &[Poly], d: i64) -> usize {
    let field = ring.field();
    let n = ring.nvars();
    let sd = monos(n, d);
    let j_gens: Vec<&Poly> = j_gens.iter().filter(|g| !g.is_zero()).collect();
    if d < 0 {
        return 0;
    }
    if j_gens.is_empty() {
        return sd.len();
    }
    // Target ⊕_j S_{d + deg f_j}; one block per generator of J.
    let twists: Vec<i32> = j_gens.iter().map(|f| -(f.degree().unwrap() as i32)).collect();
    let tb = DegreeBasis::new(n, &twists, d);
    let k = j_gens.len();
    let a_rows: Vec<Vec<Coeff>> = sd
        .iter()
        .map(|u| {
            let col: Vec<Poly> = j_gens.iter().map(|f| (*f).clone()).collect();
            tb.coords(field, &col, u)
        })
        .collect();
    let mut b_rows: Vec<Vec<Coeff>> = Vec::new();
    for (blk, f) in j_gens.iter().enumerate() {
        let e = d + f.degree().unwrap() as i64;
        for g in i_gens.iter().filter(|g| !g.is_zero()) {
            for u in monos(n, e - g.degree().unwrap() as i64) {
                let mut col = vec![ring.zero(); k];
                col[blk] = g.clone();
                b_rows.push(tb.coords(field, &col, &u));
            }
        }
    }
    let rb = DenseMatrix::from_rows(field, b_rows.clone(), tb.len).rank();
    let mut all = a_rows;
    all.extend(b_rows);
    let rab = DenseMatrix::from_rows(field, all, tb.len).rank();
    sd.len() - (rab - rb)
}

/// `dim (S/I)_d` by reducing every degree-`d` monomial to normal form and
/// measuring the span of the results.
pub fn normal_form_dimension(ideal: &crate::groebner::Ideal, d: i64) -> usize {
    let ring = ideal.ring();
    let field = ring.field();
    let n = ring.nvars();
    let basis = DegreeBasis::new(n, &[0], d);
    let rows: Vec<Vec<Coeff>> = monos(n, d)
        .iter()
        .map(|m| basis.coords(field, &[ideal.normal_form(&ring.monomial(*m))], &Mono::one()))
        .collect();
    DenseMatrix::from_rows(field, rows, basis.len).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    #[test]
    fn colon_and_kernel_counts() {
        let r = Ring::new(Field::default(), 4).unwrap();
        let p = |s: &str| parse_poly(r, s).unwrap();
        let i = [p("x0"), p("x1*x2")];
        let j = [p("x0"), p("x1")];
        // (I : J) = (x0, x2): degree 1 has dimension 2.
        assert_eq!(colon_dimension(r, &i, &j, 1), 2);
        assert_eq!(colon_dimension(r, &i, &j, 0), 0);
        let m = GradedMatrix::row(r, 0, &[p("x0"), p("x1")]);
        assert_eq!(kernel_dimension(&m, 2), 1);
        assert_eq!(kernel_dimension(&m, 1), 0);
        assert_eq!(ideal_dimension(r, &[p("x0"), p("x1")], 1), 2);
    }
}
