//! Graded Ext modules, sheaf cohomology tables via local duality, Rao
//! modules, and the vanishing and reflexivity tests used by E-type and
//! N-type data.
//!
//! With `N = nvars` and `n = N - 1`, for `i >= 1`
//! `h^i(M~(d)) = dim Ext^{n-i}(M, S)_{-d-N}`, and
//! `h^0(M~(d)) = dim M_d - dim Ext^N(M, S)_{-d-N} + dim Ext^n(M, S)_{-d-N}`.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::algebra::{GradedFreeModule, GradedMatrix, Mono, Ring};
use crate::groebner::{hilbert, syzygies, GroebnerError, Ideal};
use crate::linalg::DenseMatrix;
use crate::modules::GradedModule;
use crate::resolutions::{minimal_free_resolution, resolve_module, ResolutionError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error("empty twist window [{0}, {1}]")]
    EmptyWindow(i32, i32),
}

/// `h^i` values over a twist window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedDimensionTable {
    pub low: i32,
    pub high: i32,
    rows: BTreeMap<usize, Vec<u64>>,
}

impl GradedDimensionTable {
    pub fn new(low: i32, high: i32) -> Self {
        GradedDimensionTable { low, high, rows: BTreeMap::new() }
    }

    pub fn set_row(&mut self, i: usize, values: Vec<u64>) {
        debug_assert_eq!(values.len() as i32, self.high - self.low + 1);
        self.rows.insert(i, values);
    }

    pub fn get(&self, i: usize, d: i32) -> u64 {
        if d < self.low || d > self.high {
            return 0;
        }
        self.rows.get(&i).map(|r| r[(d - self.low) as usize]).unwrap_or(0)
    }

    pub fn row_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    /// Nonzero entries of row `i`.
    pub fn row(&self, i: usize) -> BTreeMap<i32, u64> {
        (self.low..=self.high).map(|d| (d, self.get(i, d))).filter(|x| x.1 != 0).collect()
    }

    pub fn is_row_zero(&self, i: usize) -> bool {
        self.row(i).is_empty()
    }

    /// Same table with twists shifted by `s` (`d -> d + s`).
    pub fn shifted(&self, s: i32) -> Self {
        GradedDimensionTable { low: self.low + s, high: self.high + s, rows: self.rows.clone() }
    }
}

impl fmt::Display for GradedDimensionTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:>5}", "n")?;
        for d in self.low..=self.high {
            write!(f, "{d:>6}")?;
        }
        writeln!(f)?;
        for (i, vals) in &self.rows {
            write!(f, "{:>5}", format!("h{i}"))?;
            for v in vals {
                write!(f, "{v:>6}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// `(im gens + im rels) / im rels`, presented on the columns of `gens`.
pub fn subquotient(gens: &GradedMatrix, rels: &GradedMatrix) -> GradedModule {
    let ring = gens.ring();
    let k = gens.ncols();
    if k == 0 {
        return GradedModule::free(ring, GradedFreeModule::zero());
    }
    let both = gens.hconcat(rels).expect("common ambient");
    let s = syzygies(&both);
    let rows: Vec<usize> = (0..k).collect();
    let pres = s.select_rows(&rows);
    debug_assert_eq!(pres.target(), gens.source());
    GradedModule::new(pres)
}

/// `Ext^i(M, S)` for every `i` in `0..=nvars`.
#[derive(Clone, Debug)]
pub struct ExtModules {
    ring: Ring,
    exts: Vec<GradedModule>,
}

impl ExtModules {
    pub fn compute(m: &GradedModule) -> Result<ExtModules, CohomologyError> {
        let ring = m.ring();
        let nv = ring.nvars();
        let res = resolve_module(m, nv + 2)?;
        let mut exts = Vec::with_capacity(nv + 1);
        for i in 0..=nv {
            let fi = res.module(i);
            if fi.rank() == 0 {
                exts.push(GradedModule::free(ring, GradedFreeModule::zero()));
                continue;
            }
            let fdual = fi.dual(0);
            let k = if i < res.length() {
                syzygies(&res.differential(i + 1).dual(0))
            } else {
                GradedMatrix::identity(ring, &fdual)
            };
            let l = if i >= 1 {
                res.differential(i).dual(0)
            } else {
                GradedMatrix::zero(ring, fdual.clone(), GradedFreeModule::zero())
            };
            exts.push(subquotient(&k, &l).minimal_presentation());
        }
        Ok(ExtModules { ring, exts })
    }

    pub fn get(&self, i: usize) -> &GradedModule {
        &self.exts[i]
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }
}

/// `Ext^i(M, S)` as a graded module.
pub fn graded_ext(m: &GradedModule, i: usize) -> Result<GradedModule, CohomologyError> {
    Ok(ExtModules::compute(m)?.get(i).clone())
}

/// Dimensions of a finite-length module, or `None` if it has positive
/// Krull dimension.
pub fn finite_length_dimensions(m: &GradedModule) -> Option<BTreeMap<i32, u64>> {
    let num = m.hilbert_numerator();
    if num.is_zero() {
        return Some(BTreeMap::new());
    }
    let (q, k) = num.strip_one_minus_t();
    if k < m.ring().nvars() {
        return None;
    }
    // H(t) = q(t) exactly.
    Some(q.0.iter().filter(|(_, &c)| c != 0).map(|(&e, &c)| (e, c as u64)).collect())
}

/// Sheaf-level vanishing: the graded module has finite length.
pub fn is_finite_length(m: &GradedModule) -> bool {
    m.is_finite_length()
}

/// `h^i(M~(d))` for `i = 0..=n` and `d` in the window.
pub fn sheaf_cohomology_table(m: &GradedModule, low: i32, high: i32) -> Result<GradedDimensionTable, CohomologyError> {
    if low > high {
        return Err(CohomologyError::EmptyWindow(low, high));
    }
    let ext = ExtModules::compute(m)?;
    Ok(table_from_ext(m, &ext, low, high))
}

fn table_from_ext(m: &GradedModule, ext: &ExtModules, low: i32, high: i32) -> GradedDimensionTable {
    let nv = m.ring().nvars() as i64;
    let n = (nv - 1) as usize;
    let nums: Vec<_> = (0..=nv as usize).map(|i| ext.get(i).hilbert_numerator()).collect();
    let mnum = m.hilbert_numerator();
    let dim = |num: &hilbert::LaurentPoly, e: i64| hilbert::hilbert_from_numerator(num, nv as usize, e);
    let mut t = GradedDimensionTable::new(low, high);
    let mut h0 = Vec::new();
    for d in low..=high {
        let e = -(d as i64) - nv;
        let v = dim(&mnum, d as i64) - dim(&nums[n + 1], e) + dim(&nums[n], e);
        h0.push(v as u64);
    }
    t.set_row(0, h0);
    for i in 1..=n {
        let row = (low..=high).map(|d| dim(&nums[n - i], -(d as i64) - nv) as u64).collect();
        t.set_row(i, row);
    }
    t
}

/// The ideal as a module, generated by its minimal generators.
pub fn ideal_module(i: &Ideal) -> GradedModule {
    GradedModule::from_image(&GradedMatrix::row(i.ring(), 0, &i.minimal_generators()))
}

/// `S / I` as a module.
pub fn quotient_module(i: &Ideal) -> GradedModule {
    GradedModule::new(GradedMatrix::row(i.ring(), 0, &i.minimal_generators()))
}

/// Default window `[-(reg + 2), reg + 2]` from the Betti table of `S / I`.
pub fn default_window(i: &Ideal) -> Result<(i32, i32), CohomologyError> {
    let res = minimal_free_resolution(i, i.ring().nvars() + 1)?;
    let reg = res.regularity(0).unwrap_or(0).max(0) + 1;
    Ok((-(reg + 2), reg + 2))
}

/// `h^i(I~(d))`.
pub fn ideal_sheaf_cohomology(i: &Ideal, low: i32, high: i32) -> Result<GradedDimensionTable, CohomologyError> {
    sheaf_cohomology_table(&ideal_module(i), low, high)
}

/// `h^i(O_X(d))` for `X = V(I)`.
pub fn structure_sheaf_cohomology(i: &Ideal, low: i32, high: i32) -> Result<GradedDimensionTable, CohomologyError> {
    sheaf_cohomology_table(&quotient_module(i), low, high)
}

/// Middle cohomology `H^k_*(I~)` for `k = 1..=n-2`, as exact dimension maps
/// (these modules have finite length for locally Cohen-Macaulay curves; a
/// row is `None` otherwise).
pub fn rao_modules(i: &Ideal) -> Result<Vec<Option<BTreeMap<i32, u64>>>, CohomologyError> {
    let m = ideal_module(i);
    let ext = ExtModules::compute(&m)?;
    let nv = i.ring().nvars() as i32;
    let n = (nv - 1) as usize;
    Ok((1..n.saturating_sub(1))
        .map(|k| {
            finite_length_dimensions(ext.get(n - k)).map(|dims| dims.into_iter().map(|(e, c)| (-e - nv, c)).collect())
        })
        .collect())
}

/// `H^i_*(M~) = 0` for `0 < i < r`, tested exactly through the vanishing of
/// `Ext^{n-i}(M, S)`.
pub fn check_h_star_vanishing(m: &GradedModule, r: usize) -> Result<bool, CohomologyError> {
    let ext = ExtModules::compute(m)?;
    let n = m.ring().nvars() - 1;
    Ok((1..r).all(|i| i > n || ext.get(n - i).is_zero()))
}

/// `Ext^i(M, S)` has finite length for every `0 < i < r`.
pub fn ext_sheaves_vanish(m: &GradedModule, r: usize) -> Result<bool, CohomologyError> {
    let ext = ExtModules::compute(m)?;
    Ok((1..r).all(|i| i >= ext.exts.len() || ext.get(i).is_finite_length()))
}

/// Kernel and cokernel of the natural map `M -> M^∨∨`.
fn double_dual_defect(m: &GradedModule) -> (GradedModule, GradedModule) {
    let ring = m.ring();
    let r = m.presentation();
    let f0 = r.target().clone();
    // M^∨ = ker(R^T) ⊂ F0^∨, generated by K.
    let k = m.dual_embedding();
    let kt = k.dual(0);
    // ker(K^T: F0 -> H^∨) modulo im R.
    let ker_kt = if kt.nrows() == 0 { GradedMatrix::identity(ring, &f0) } else { syzygies(&kt) };
    let kernel = subquotient(&ker_kt, r);
    // M^∨∨ = ker(syz(K)^T) ⊂ H^∨ modulo im K^T.
    let sk = syzygies(&k);
    let hdual = k.source().dual(0);
    let dd = if sk.ncols() == 0 { GradedMatrix::identity(ring, &hdual) } else { syzygies(&sk.dual(0)) };
    let coker = subquotient(&dd, &kt);
    (kernel, coker)
}

/// `M -> M^∨∨` is injective, i.e. `M` has no torsion.
pub fn is_torsion_free(m: &GradedModule) -> bool {
    double_dual_defect(m).0.is_zero()
}

/// Module-level reflexivity: `M -> M^∨∨` is an isomorphism.
pub fn is_reflexive(m: &GradedModule) -> bool {
    let (k, c) = double_dual_defect(m);
    k.is_zero() && c.is_zero()
}

/// Sheaf-level reflexivity: kernel and cokernel of `M -> M^∨∨` have finite length.
pub fn is_sheaf_reflexive(m: &GradedModule) -> bool {
    let (k, c) = double_dual_defect(m);
    k.is_finite_length() && c.is_finite_length()
}

/// Independent cohomology of curves in `P^3` (and points) by truncated
/// Čech-style limits, without Ext or local duality.
pub mod oracle {
    use super::*;

    fn standard_monomials(i: &Ideal, e: i64) -> Vec<Mono> {
        if e < 0 {
            return Vec::new();
        }
        let leads = i.lead_monomials();
        Mono::all_of_degree(i.ring().nvars(), e as u32)
            .into_iter()
            .filter(|m| !leads.iter().any(|l| l.divides(m)))
            .collect()
    }

    /// `dim Hom((x_0^k, ..., x_n^k), S/I)_d`.
    fn hom_dimension(i: &Ideal, d: i64, k: u32) -> usize {
        let ring = i.ring();
        let field = ring.field();
        let nv = ring.nvars();
        let src = standard_monomials(i, d + k as i64);
        let tgt = standard_monomials(i, d + 2 * k as i64);
        if src.is_empty() {
            return 0;
        }
        let tidx: std::collections::HashMap<Mono, usize> = tgt.iter().enumerate().map(|(a, m)| (*m, a)).collect();
        let pairs: Vec<(usize, usize)> = (0..nv).flat_map(|a| (a + 1..nv).map(move |b| (a, b))).collect();
        let ncols = nv * src.len();
        let nrows = pairs.len() * tgt.len();
        let mut mat = DenseMatrix::zeros(field, nrows.max(1), ncols);
        let pow = |v: usize| {
            let mut e = vec![0u32; nv];
            e[v] = k;
            Mono::from_exps(&e)
        };
        for (pi, &(a, b)) in pairs.iter().enumerate() {
            // x_b^k m_a - x_a^k m_b = 0.
            for (si, m) in src.iter().enumerate() {
                for (var, col_block, sign) in [(b, a, 1i64), (a, b, -1i64)] {
                    let nf = i.normal_form(&ring.monomial(m.mul(&pow(var))));
                    for (t, c) in nf.terms() {
                        let row = pi * tgt.len() + tidx[t];
                        let col = col_block * src.len() + si;
                        let v = field.add(mat.get(row, col), &field.mul(c, &field.from_i64(sign)));
                        mat.set(row, col, v);
                    }
                }
            }
        }
        ncols - mat.rank()
    }

    /// `h^0(O_X(d))` as the stable value of `dim Hom((x_i^k), S/I)_d`.
    pub fn h0_structure(i: &Ideal, d: i64) -> usize {
        let mut prev = hom_dimension(i, d, 1);
        let mut streak = 0;
        let mut k = 2;
        loop {
            let cur = hom_dimension(i, d, k);
            if cur == prev {
                streak += 1;
                if streak >= 2 {
                    return cur;
                }
            } else {
                streak = 0;
            }
            prev = cur;
            k += 1;
        }
    }

    /// `h^i(I~(d))` for a saturated ideal of dimension at most one in `P^3`.
    pub fn ideal_sheaf_row(i: &Ideal, sat: &Ideal, idx: usize, d: i64) -> i128 {
        let n = i.ring().nvars();
        let s_d = hilbert::monomial_count(n, d);
        let h3_o = hilbert::monomial_count(n, -d - n as i64);
        match idx {
            0 => sat.dimension_in_degree(d),
            1 => h0_structure(i, d) as i128 - s_d + sat.dimension_in_degree(d),
            2 => {
                let p = hilbert::hilbert_polynomial_value(&sat.hilbert_numerator(), n, d);
                h0_structure(i, d) as i128 - p
            }
            3 => h3_o,
            _ => 0,
        }
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
    fn koszul_self_duality() {
        let r = r4();
        let q = quotient_module(&ideal(r, &["x0", "x1"]));
        let e2 = graded_ext(&q, 2).unwrap();
        assert_eq!(e2.generators().twists(), &[-2]);
        assert_eq!(e2.dimension(-2), 1);
        assert_eq!(e2.dimension(-1), 2);
        assert!(graded_ext(&q, 1).unwrap().is_zero());
        assert!(graded_ext(&GradedModule::free(r, GradedFreeModule::new(vec![0, 1])), 1).unwrap().is_zero());
    }

    #[test]
    fn projective_space_cohomology() {
        let r = r4();
        let s = GradedModule::free(r, GradedFreeModule::new(vec![0]));
        let t = sheaf_cohomology_table(&s, -6, 3).unwrap();
        assert_eq!(t.get(0, 2), 10);
        assert_eq!(t.get(3, -4), 1);
        assert_eq!(t.get(3, -6), 10);
        assert!(t.is_row_zero(1) && t.is_row_zero(2));
    }

    #[test]
    fn skew_lines_rao() {
        let r = r4();
        let skew = ideal(r, &["x0*x2", "x0*x3", "x1*x2", "x1*x3"]);
        let rao = rao_modules(&skew).unwrap();
        assert_eq!(rao.len(), 1);
        assert_eq!(rao[0].as_ref().unwrap(), &BTreeMap::from([(0, 1)]));
        let cubic = ideal(r, &["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"]);
        assert!(rao_modules(&cubic).unwrap()[0].as_ref().unwrap().is_empty());
        let t = ideal_sheaf_cohomology(&skew, -3, 3).unwrap();
        assert_eq!(t.row(1), BTreeMap::from([(0, 1)]));
        assert_eq!(t.get(0, 2), 4);
    }

    #[test]
    fn oracle_matches_duality() {
        let r = r4();
        let skew = ideal(r, &["x0*x2", "x0*x3", "x1*x2", "x1*x3"]);
        let t = ideal_sheaf_cohomology(&skew, -3, 3).unwrap();
        for d in -3..=3 {
            for i in 0..=3 {
                assert_eq!(oracle::ideal_sheaf_row(&skew, &skew, i, d as i64), t.get(i, d) as i128, "h{i}({d})");
            }
        }
    }

    #[test]
    fn vanishing_and_reflexivity() {
        let r = r4();
        let skew = ideal(r, &["x0*x2", "x0*x3", "x1*x2", "x1*x3"]);
        assert!(!check_h_star_vanishing(&ideal_module(&skew), 2).unwrap());
        let free = GradedModule::free(r, GradedFreeModule::new(vec![0, 2]));
        assert!(check_h_star_vanishing(&free, 3).unwrap());
        assert!(is_reflexive(&free));
        // A codimension-two ideal is torsion free but not reflexive.
        assert!(!is_reflexive(&ideal_module(&skew)));
        // S/(x0) is torsion.
        assert!(!is_sheaf_reflexive(&quotient_module(&ideal(r, &["x0"]))));
    }
}
