//! Hilbert series of monomial ideals and quotients of free modules.

use std::collections::BTreeMap;

use crate::algebra::Mono;

/// Laurent polynomial in `t` with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentPoly(pub BTreeMap<i32, i64>);

impl LaurentPoly {
    pub fn monomial(e: i32, c: i64) -> Self {
        let mut m = BTreeMap::new();
        if c != 0 {
            m.insert(e, c);
        }
        LaurentPoly(m)
    }

    pub fn add_assign(&mut self, o: &LaurentPoly) {
        for (&e, &c) in &o.0 {
            let v = self.0.entry(e).or_insert(0);
            *v += c;
            if *v == 0 {
                self.0.remove(&e);
            }
        }
    }

    pub fn shifted(&self, s: i32) -> LaurentPoly {
        LaurentPoly(self.0.iter().map(|(&e, &c)| (e + s, c)).collect())
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly(self.0.iter().map(|(&e, &c)| (e, -c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn eval_one(&self) -> i64 {
        self.0.values().sum()
    }

    /// Divides by `(1 - t)` as often as possible; returns the quotient and
    /// the number of divisions.
    pub fn strip_one_minus_t(&self) -> (LaurentPoly, usize) {
        let mut cur = self.clone();
        let mut k = 0;
        while !cur.is_zero() && cur.eval_one() == 0 {
            // q(t) with (1 - t) q = cur: q_e = sum_{f <= e} cur_f.
            let lo = *cur.0.keys().next().unwrap();
            let hi = *cur.0.keys().next_back().unwrap();
            let mut q = BTreeMap::new();
            let mut acc = 0;
            for e in lo..hi {
                acc += cur.0.get(&e).copied().unwrap_or(0);
                if acc != 0 {
                    q.insert(e, acc);
                }
            }
            cur = LaurentPoly(q);
            k += 1;
        }
        (cur, k)
    }
}

fn minimalize(gens: &mut Vec<Mono>) {
    gens.sort_by_key(|m| m.degree());
    gens.dedup();
    let mut out: Vec<Mono> = Vec::with_capacity(gens.len());
    for g in gens.iter() {
        if !out.iter().any(|o| o.divides(g)) {
            out.push(*g);
        }
    }
    *gens = out;
}

/// Numerator `N(t)` of the Hilbert series `N(t) / (1 - t)^n` of `S / J` for a
/// monomial ideal `J`.
pub fn monomial_numerator(gens: &[Mono], nvars: usize) -> Vec<i64> {
    let mut g = gens.to_vec();
    minimalize(&mut g);
    numer(g, nvars)
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add_shift(a: &mut Vec<i64>, b: &[i64], s: usize) {
    if a.len() < b.len() + s {
        a.resize(b.len() + s, 0);
    }
    for (i, y) in b.iter().enumerate() {
        a[i + s] += y;
    }
}

fn numer(gens: Vec<Mono>, nvars: usize) -> Vec<i64> {
    if gens.is_empty() {
        return vec![1];
    }
    let pairwise_coprime = gens
        .iter()
        .enumerate()
        .all(|(i, a)| gens[i + 1..].iter().all(|b| a.is_coprime(b)));
    if pairwise_coprime {
        let mut acc = vec![1];
        for g in &gens {
            let mut f = vec![0; g.degree() as usize + 1];
            f[0] = 1;
            f[g.degree() as usize] -= 1;
            acc = poly_mul(&acc, &f);
        }
        return acc;
    }
    // Pivot on the variable occurring in the most non-pure generators.
    let mut best = (0usize, 0usize);
    for v in 0..nvars {
        let cnt = gens.iter().filter(|g| g.exp(v) > 0 && g.degree() > g.exp(v)).count();
        if cnt > best.1 {
            best = (v, cnt);
        }
    }
    let v = best.0;
    let mut exps: Vec<u32> = gens
        .iter()
        .filter(|g| g.exp(v) > 0 && g.degree() > g.exp(v))
        .map(|g| g.exp(v))
        .collect();
    exps.sort_unstable();
    let e = exps[(exps.len() - 1) / 2];
    let mut pe = vec![0u32; nvars];
    pe[v] = e;
    let p = Mono::from_exps(&pe);
    // N(J) = N(J + p) + t^deg(p) N(J : p)
    let mut plus = gens.clone();
    plus.push(p);
    minimalize(&mut plus);
    let mut colon: Vec<Mono> = gens.iter().map(|g| g.gcd(&p).quotient(g)).collect();
    minimalize(&mut colon);
    let mut a = numer(plus, nvars);
    let b = numer(colon, nvars);
    poly_add_shift(&mut a, &b, e as usize);
    a
}

/// `binom(x, k)` as an integer for any integer `x`, treating it as a polynomial in `x`.
pub fn binom_poly(x: i64, k: usize) -> i128 {
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for i in 0..k {
        num *= (x - i as i64) as i128;
        den *= (i + 1) as i128;
    }
    num / den
}

/// Number of monomials of degree `d` in `n` variables (zero for negative `d`).
pub fn monomial_count(n: usize, d: i64) -> i128 {
    if d < 0 {
        return 0;
    }
    binom_poly(d + n as i64 - 1, n - 1)
}

/// Hilbert function from a numerator: `sum_k N_k binom(d - k + n - 1, n - 1)`.
pub fn hilbert_from_numerator(num: &LaurentPoly, nvars: usize, d: i64) -> i128 {
    num.0.iter().map(|(&k, &c)| c as i128 * monomial_count(nvars, d - k as i64)).sum()
}

/// Hilbert polynomial value at `d` (the binomials read as polynomials in `d`).
pub fn hilbert_polynomial_value(num: &LaurentPoly, nvars: usize, d: i64) -> i128 {
    num.0
        .iter()
        .map(|(&k, &c)| c as i128 * binom_poly(d - k as i64 + nvars as i64 - 1, nvars - 1))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(e: &[u32]) -> Mono {
        Mono::from_exps(e)
    }

    #[test]
    fn numerator_of_twisted_cubic_initial_ideal() {
        // in(I) = (x1^2, x1 x2, x2^2) for the twisted cubic in grevlex.
        let gens = [m(&[0, 2, 0, 0]), m(&[0, 1, 1, 0]), m(&[0, 0, 2, 0])];
        let n = monomial_numerator(&gens, 4);
        let lp = LaurentPoly(n.iter().enumerate().map(|(i, &c)| (i as i32, c)).filter(|x| x.1 != 0).collect());
        let (q, k) = lp.strip_one_minus_t();
        assert_eq!(k, 2);
        assert_eq!(q.eval_one(), 3);
        assert_eq!(hilbert_from_numerator(&lp, 4, 2), 7);
    }

    #[test]
    fn binomials() {
        assert_eq!(monomial_count(4, 2), 10);
        assert_eq!(monomial_count(4, -1), 0);
        assert_eq!(binom_poly(-1, 3), -1);
    }
}
