//! Coefficient fields, homogeneous polynomials in grevlex order, graded free
//! modules and homogeneous matrices between them.
//!
//! Twist convention: a generator of degree `d` stands for the line bundle
//! `O(-d)`. A matrix entry `(i, j)` must be zero or homogeneous of degree
//! `source[j] - target[i]`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

/// Largest number of variables a ring may have.
pub const MAX_VARS: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("a ring needs between 2 and {MAX_VARS} variables, got {0}")]
    VariableCount(usize),
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("twist mismatch: {0}")]
    TwistMismatch(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("entry ({row}, {col}) is not homogeneous of degree {expected}")]
    NotHomogeneous { row: usize, col: usize, expected: i32 },
    #[error("denominator {0} is not invertible in the coefficient field")]
    NonInvertible(String),
}

/// The coefficient field of the polynomial ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Prime(u32),
    Rationals,
}

impl Default for Field {
    fn default() -> Self {
        Field::Prime(32003)
    }
}

/// A field element. `Mod` values are reduced residues, `Rat` values are
/// normalized fractions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coeff {
    Mod(u32),
    Rat(Box<BigRational>),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

impl Field {
    pub fn prime(p: u64) -> Result<Field, AlgebraError> {
        if p >= (1 << 31) || !is_prime(p) {
            return Err(AlgebraError::NotPrime(p));
        }
        Ok(Field::Prime(p as u32))
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Prime(p) => *p,
            Field::Rationals => 0,
        }
    }

    pub fn zero(&self) -> Coeff {
        match self {
            Field::Prime(_) => Coeff::Mod(0),
            Field::Rationals => Coeff::Rat(Box::new(BigRational::zero())),
        }
    }

    pub fn one(&self) -> Coeff {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Coeff {
        match self {
            Field::Prime(p) => Coeff::Mod(v.rem_euclid(*p as i64) as u32),
            Field::Rationals => Coeff::Rat(Box::new(BigRational::from_integer(BigInt::from(v)))),
        }
    }

    pub fn from_rational(&self, q: &BigRational) -> Result<Coeff, AlgebraError> {
        match self {
            Field::Rationals => Ok(Coeff::Rat(Box::new(q.clone()))),
            Field::Prime(p) => {
                let pb = BigInt::from(*p);
                let num = (q.numer() % &pb + &pb) % &pb;
                let den = (q.denom() % &pb + &pb) % &pb;
                if den.is_zero() {
                    return Err(AlgebraError::NonInvertible(q.denom().to_string()));
                }
                let n = num.to_u64().unwrap_or(0);
                let d = den.to_u64().unwrap_or(1);
                let inv = mod_pow(d, *p as u64 - 2, *p as u64);
                Ok(Coeff::Mod((n * inv % *p as u64) as u32))
            }
        }
    }

    pub fn is_zero(&self, a: &Coeff) -> bool {
        match a {
            Coeff::Mod(v) => *v == 0,
            Coeff::Rat(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self, a: &Coeff) -> bool {
        match a {
            Coeff::Mod(v) => *v == 1,
            Coeff::Rat(q) => q.is_one(),
        }
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (Field::Prime(p), Coeff::Mod(x), Coeff::Mod(y)) => {
                let s = *x as u64 + *y as u64;
                Coeff::Mod((s % *p as u64) as u32)
            }
            (_, Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(Box::new(&**x + &**y)),
            _ => panic!("coefficient kinds do not match the field"),
        }
    }

    pub fn neg(&self, a: &Coeff) -> Coeff {
        match (self, a) {
            (Field::Prime(p), Coeff::Mod(x)) => Coeff::Mod(if *x == 0 { 0 } else { p - x }),
            (_, Coeff::Rat(x)) => Coeff::Rat(Box::new(-&**x)),
            _ => panic!("coefficient kinds do not match the field"),
        }
    }

    pub fn sub(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Coeff, b: &Coeff) -> Coeff {
        match (self, a, b) {
            (Field::Prime(p), Coeff::Mod(x), Coeff::Mod(y)) => {
                Coeff::Mod((*x as u64 * *y as u64 % *p as u64) as u32)
            }
            (_, Coeff::Rat(x), Coeff::Rat(y)) => Coeff::Rat(Box::new(&**x * &**y)),
            _ => panic!("coefficient kinds do not match the field"),
        }
    }

    pub fn inv(&self, a: &Coeff) -> Option<Coeff> {
        if self.is_zero(a) {
            return None;
        }
        match (self, a) {
            (Field::Prime(p), Coeff::Mod(x)) => {
                Some(Coeff::Mod(mod_pow(*x as u64, *p as u64 - 2, *p as u64) as u32))
            }
            (_, Coeff::Rat(x)) => Some(Coeff::Rat(Box::new(x.recip()))),
            _ => panic!("coefficient kinds do not match the field"),
        }
    }

    pub fn div(&self, a: &Coeff, b: &Coeff) -> Coeff {
        self.mul(a, &self.inv(b).expect("division by zero"))
    }

    /// A random element. Over the rationals small integers are drawn so that
    /// intermediate growth stays manageable.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Coeff {
        match self {
            Field::Prime(p) => Coeff::Mod(rng.gen_range(0..*p)),
            Field::Rationals => self.from_i64(rng.gen_range(-40..=40)),
        }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> Coeff {
        loop {
            let c = self.random(rng);
            if !self.is_zero(&c) {
                return c;
            }
        }
    }

    /// Display form; prime-field residues use the symmetric representative.
    pub fn format(&self, a: &Coeff) -> String {
        match (self, a) {
            (Field::Prime(p), Coeff::Mod(x)) => {
                if *x > p / 2 {
                    format!("-{}", p - x)
                } else {
                    x.to_string()
                }
            }
            (_, Coeff::Rat(q)) => q.to_string(),
            _ => panic!("coefficient kinds do not match the field"),
        }
    }

    fn is_negative(&self, a: &Coeff) -> bool {
        match (self, a) {
            (Field::Prime(p), Coeff::Mod(x)) => *x > p / 2,
            (_, Coeff::Rat(q)) => q.is_negative(),
            _ => false,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(p) => write!(f, "GF({p})"),
            Field::Rationals => write!(f, "QQ"),
        }
    }
}

/// Exponent vector with cached total degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Mono {
    exps: [u8; MAX_VARS],
    deg: u16,
}

impl Mono {
    pub fn one() -> Mono {
        Mono::default()
    }

    pub fn var(i: usize) -> Mono {
        let mut m = Mono::one();
        m.exps[i] = 1;
        m.deg = 1;
        m
    }

    pub fn from_exps(exps: &[u32]) -> Mono {
        assert!(exps.len() <= MAX_VARS);
        let mut m = Mono::one();
        for (i, &e) in exps.iter().enumerate() {
            m.exps[i] = u8::try_from(e).expect("exponent exceeds 255");
            m.deg += e as u16;
        }
        m
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.deg as u32
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u32 {
        self.exps[i] as u32
    }

    pub fn exps(&self) -> &[u8; MAX_VARS] {
        &self.exps
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    #[inline]
    pub fn mul(&self, o: &Mono) -> Mono {
        let mut m = *self;
        for i in 0..MAX_VARS {
            m.exps[i] = m.exps[i].checked_add(o.exps[i]).expect("exponent exceeds 255");
        }
        m.deg += o.deg;
        m
    }

    #[inline]
    pub fn divides(&self, o: &Mono) -> bool {
        self.deg <= o.deg && (0..MAX_VARS).all(|i| self.exps[i] <= o.exps[i])
    }

    /// `o / self`, assuming divisibility.
    #[inline]
    pub fn quotient(&self, o: &Mono) -> Mono {
        let mut m = *o;
        for i in 0..MAX_VARS {
            m.exps[i] -= self.exps[i];
        }
        m.deg -= self.deg;
        m
    }

    pub fn lcm(&self, o: &Mono) -> Mono {
        let mut m = Mono::one();
        for i in 0..MAX_VARS {
            m.exps[i] = self.exps[i].max(o.exps[i]);
            m.deg += m.exps[i] as u16;
        }
        m
    }

    pub fn gcd(&self, o: &Mono) -> Mono {
        let mut m = Mono::one();
        for i in 0..MAX_VARS {
            m.exps[i] = self.exps[i].min(o.exps[i]);
            m.deg += m.exps[i] as u16;
        }
        m
    }

    pub fn is_coprime(&self, o: &Mono) -> bool {
        (0..MAX_VARS).all(|i| self.exps[i] == 0 || o.exps[i] == 0)
    }

    /// Graded reverse lexicographic comparison.
    #[inline]
    pub fn grevlex(&self, o: &Mono) -> Ordering {
        match self.deg.cmp(&o.deg) {
            Ordering::Equal => {}
            c => return c,
        }
        for i in (0..MAX_VARS).rev() {
            if self.exps[i] != o.exps[i] {
                return o.exps[i].cmp(&self.exps[i]);
            }
        }
        Ordering::Equal
    }

    /// Variables present in the monomial, as a bit mask.
    pub fn support(&self) -> u32 {
        let mut s = 0;
        for i in 0..MAX_VARS {
            if self.exps[i] > 0 {
                s |= 1 << i;
            }
        }
        s
    }

    /// All monomials of degree `d` in `n` variables, in decreasing grevlex order.
    pub fn all_of_degree(n: usize, d: u32) -> Vec<Mono> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; n];
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Mono>) {
            if i + 1 == cur.len() {
                cur[i] = left;
                out.push(Mono::from_exps(cur));
                return;
            }
            for e in (0..=left).rev() {
                cur[i] = e;
                rec(i + 1, left - e, cur, out);
            }
        }
        if n == 0 {
            return out;
        }
        rec(0, d, &mut cur, &mut out);
        out.sort_by(|a, b| b.grevlex(a));
        out
    }

    pub(crate) fn write(&self, nvars: usize, f: &mut impl fmt::Write) -> fmt::Result {
        let mut first = true;
        for i in 0..nvars {
            let e = self.exps[i];
            if e == 0 {
                continue;
            }
            if !first {
                f.write_char('*')?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial ring `k[x_0..x_n]` with grevlex order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    field: Field,
    nvars: u8,
}

impl Ring {
    pub fn new(field: Field, nvars: usize) -> Result<Ring, AlgebraError> {
        if !(2..=MAX_VARS).contains(&nvars) {
            return Err(AlgebraError::VariableCount(nvars));
        }
        Ok(Ring { field, nvars: nvars as u8 })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars as usize
    }

    pub fn zero(&self) -> Poly {
        Poly { ring: *self, terms: Vec::new() }
    }

    pub fn one(&self) -> Poly {
        self.constant(self.field.one())
    }

    pub fn constant(&self, c: Coeff) -> Poly {
        self.term(Mono::one(), c)
    }

    pub fn term(&self, m: Mono, c: Coeff) -> Poly {
        if self.field.is_zero(&c) {
            return self.zero();
        }
        Poly { ring: *self, terms: vec![(m, c)] }
    }

    pub fn monomial(&self, m: Mono) -> Poly {
        self.term(m, self.field.one())
    }

    pub fn var(&self, i: usize) -> Poly {
        assert!(i < self.nvars());
        self.monomial(Mono::var(i))
    }

    /// Builds a polynomial from unsorted terms, combining repeats.
    pub fn from_terms(&self, mut terms: Vec<(Mono, Coeff)>) -> Poly {
        terms.sort_by(|a, b| b.0.grevlex(&a.0));
        let mut out: Vec<(Mono, Coeff)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == m => last.1 = self.field.add(&last.1, &c),
                _ => out.push((m, c)),
            }
        }
        out.retain(|t| !self.field.is_zero(&t.1));
        Poly { ring: *self, terms: out }
    }

    /// A random homogeneous polynomial of degree `d`.
    pub fn random_form<R: Rng + ?Sized>(&self, d: u32, rng: &mut R) -> Poly {
        let terms = Mono::all_of_degree(self.nvars(), d)
            .into_iter()
            .map(|m| (m, self.field.random(rng)))
            .collect();
        self.from_terms(terms)
    }
}

/// A polynomial: terms strictly decreasing in grevlex, no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    ring: Ring,
    terms: Vec<(Mono, Coeff)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Mul,
}

/// Checked binary arithmetic.
pub fn poly_arith(a: &Poly, b: &Poly, op: PolyOp) -> Result<Poly, AlgebraError> {
    if a.ring != b.ring {
        return Err(AlgebraError::RingMismatch);
    }
    Ok(match op {
        PolyOp::Add => a.add(b),
        PolyOp::Mul => a.mul(b),
    })
}

impl Poly {
    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn field(&self) -> Field {
        self.ring.field
    }

    pub fn terms(&self) -> &[(Mono, Coeff)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Mono, Coeff)> {
        self.terms
    }

    pub(crate) fn from_sorted(ring: Ring, terms: Vec<(Mono, Coeff)>) -> Poly {
        Poly { ring, terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&(Mono, Coeff)> {
        self.terms.first()
    }

    pub fn lead_mono(&self) -> Option<Mono> {
        self.terms.first().map(|t| t.0)
    }

    /// Degree of the leading term; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.first().map(|t| t.0.degree())
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some((m, _)) => self.terms.iter().all(|t| t.0.degree() == m.degree()),
        }
    }

    /// A nonzero constant.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    pub fn constant_value(&self) -> Option<Coeff> {
        if self.is_zero() {
            return Some(self.ring.field.zero());
        }
        if self.is_unit() {
            return Some(self.terms[0].1.clone());
        }
        None
    }

    pub fn add(&self, o: &Poly) -> Poly {
        assert_eq!(self.ring, o.ring, "ring mismatch");
        let f = self.ring.field;
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            match self.terms[i].0.grevlex(&o.terms[j].0) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(o.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = f.add(&self.terms[i].1, &o.terms[j].1);
                    if !f.is_zero(&c) {
                        out.push((self.terms[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&o.terms[j..]);
        Poly { ring: self.ring, terms: out }
    }

    pub fn neg(&self) -> Poly {
        let f = self.ring.field;
        Poly {
            ring: self.ring,
            terms: self.terms.iter().map(|(m, c)| (*m, f.neg(c))).collect(),
        }
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &Coeff) -> Poly {
        let f = self.ring.field;
        if f.is_zero(c) {
            return self.ring.zero();
        }
        Poly {
            ring: self.ring,
            terms: self.terms.iter().map(|(m, a)| (*m, f.mul(a, c))).collect(),
        }
    }

    pub fn mul_term(&self, m: &Mono, c: &Coeff) -> Poly {
        let f = self.ring.field;
        if f.is_zero(c) {
            return self.ring.zero();
        }
        Poly {
            ring: self.ring,
            terms: self.terms.iter().map(|(n, a)| (n.mul(m), f.mul(a, c))).collect(),
        }
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        assert_eq!(self.ring, o.ring, "ring mismatch");
        if self.is_zero() || o.is_zero() {
            return self.ring.zero();
        }
        let (small, big) = if self.len() <= o.len() { (self, o) } else { (o, self) };
        let mut acc = self.ring.zero();
        for (m, c) in &small.terms {
            acc = acc.add(&big.mul_term(m, c));
        }
        acc
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = self.ring.one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn monic(&self) -> Poly {
        match self.terms.first() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = self.ring.field.inv(c).expect("nonzero lead");
                self.scale(&inv)
            }
        }
    }

    /// Exact division by a monomial, assuming it divides every term.
    pub fn div_mono(&self, m: &Mono) -> Poly {
        Poly {
            ring: self.ring,
            terms: self.terms.iter().map(|(n, c)| (m.quotient(n), c.clone())).collect(),
        }
    }

    /// Common monomial factor of all terms.
    pub fn mono_content(&self) -> Mono {
        let mut it = self.terms.iter();
        let Some((first, _)) = it.next() else { return Mono::one() };
        it.fold(*first, |g, (m, _)| g.gcd(m))
    }

    pub fn variables_used(&self) -> u32 {
        self.terms.iter().fold(0, |s, (m, _)| s | m.support())
    }

    /// Substitutes polynomials for the variables.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        let ring = images.first().map(|p| p.ring).unwrap_or(self.ring);
        let mut acc = ring.zero();
        for (m, c) in &self.terms {
            let mut t = ring.constant(c.clone());
            for (i, img) in images.iter().enumerate() {
                if m.exp(i) > 0 {
                    t = t.mul(&img.pow(m.exp(i)));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let field = self.ring.field;
        let n = self.ring.nvars();
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = field.is_negative(c);
            let abs = if neg { field.neg(c) } else { c.clone() };
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else if neg {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            if m.is_one() {
                f.write_str(&field.format(&abs))?;
            } else {
                if !field.is_one(&abs) {
                    write!(f, "{}*", field.format(&abs))?;
                }
                m.write(n, f)?;
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        Poly::add(self, o)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        Poly::sub(self, o)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        Poly::mul(self, o)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::neg(self)
    }
}

/// `⊕ O(-d_i)` recorded by its generator degrees.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GradedFreeModule {
    twists: Vec<i32>,
}

impl GradedFreeModule {
    pub fn new(twists: Vec<i32>) -> Self {
        GradedFreeModule { twists }
    }

    pub fn zero() -> Self {
        GradedFreeModule { twists: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    pub fn twists(&self) -> &[i32] {
        &self.twists
    }

    pub fn twist(&self, i: usize) -> i32 {
        self.twists[i]
    }

    pub fn direct_sum(&self, o: &GradedFreeModule) -> GradedFreeModule {
        let mut t = self.twists.clone();
        t.extend_from_slice(&o.twists);
        GradedFreeModule { twists: t }
    }

    /// The sheaf twist `F(h)`: every generator degree drops by `h`.
    pub fn twisted(&self, h: i32) -> GradedFreeModule {
        GradedFreeModule { twists: self.twists.iter().map(|d| d - h).collect() }
    }

    /// `F^∨(t)`.
    pub fn dual(&self, t: i32) -> GradedFreeModule {
        GradedFreeModule { twists: self.twists.iter().map(|d| -d - t).collect() }
    }

    pub fn select(&self, idx: &[usize]) -> GradedFreeModule {
        GradedFreeModule { twists: idx.iter().map(|&i| self.twists[i]).collect() }
    }

    pub fn without(&self, i: usize) -> GradedFreeModule {
        let mut t = self.twists.clone();
        t.remove(i);
        GradedFreeModule { twists: t }
    }

    /// Twists sorted ascending.
    pub fn sorted_twists(&self) -> Vec<i32> {
        let mut t = self.twists.clone();
        t.sort_unstable();
        t
    }
}

/// A homogeneous matrix `source -> target`, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedMatrix {
    ring: Ring,
    target: GradedFreeModule,
    source: GradedFreeModule,
    entries: Vec<Poly>,
}

impl GradedMatrix {
    /// Checked constructor: every entry must have the degree forced by the twists.
    pub fn new(
        ring: Ring,
        target: GradedFreeModule,
        source: GradedFreeModule,
        entries: Vec<Poly>,
    ) -> Result<Self, AlgebraError> {
        if entries.len() != target.rank() * source.rank() {
            return Err(AlgebraError::ShapeMismatch(format!(
                "{} entries for a {}x{} matrix",
                entries.len(),
                target.rank(),
                source.rank()
            )));
        }
        if entries.iter().any(|p| p.ring != ring) {
            return Err(AlgebraError::RingMismatch);
        }
        let m = GradedMatrix { ring, target, source, entries };
        m.check_homogeneous()?;
        Ok(m)
    }

    pub(crate) fn from_parts(
        ring: Ring,
        target: GradedFreeModule,
        source: GradedFreeModule,
        entries: Vec<Poly>,
    ) -> Self {
        debug_assert_eq!(entries.len(), target.rank() * source.rank());
        let m = GradedMatrix { ring, target, source, entries };
        debug_assert!(m.check_homogeneous().is_ok(), "inhomogeneous matrix built internally");
        m
    }

    /// Matrix from columns (each of length `target.rank()`).
    pub fn from_columns(
        ring: Ring,
        target: GradedFreeModule,
        source: GradedFreeModule,
        cols: Vec<Vec<Poly>>,
    ) -> Result<Self, AlgebraError> {
        let (r, c) = (target.rank(), source.rank());
        if cols.len() != c || cols.iter().any(|v| v.len() != r) {
            return Err(AlgebraError::ShapeMismatch("column lengths".into()));
        }
        let mut entries = vec![ring.zero(); r * c];
        for (j, col) in cols.into_iter().enumerate() {
            for (i, p) in col.into_iter().enumerate() {
                entries[i * c + j] = p;
            }
        }
        GradedMatrix::new(ring, target, source, entries)
    }

    pub(crate) fn from_columns_unchecked(
        ring: Ring,
        target: GradedFreeModule,
        source: GradedFreeModule,
        cols: Vec<Vec<Poly>>,
    ) -> Self {
        let (r, c) = (target.rank(), source.rank());
        let mut entries = vec![ring.zero(); r * c];
        for (j, col) in cols.into_iter().enumerate() {
            debug_assert_eq!(col.len(), r);
            for (i, p) in col.into_iter().enumerate() {
                entries[i * c + j] = p;
            }
        }
        GradedMatrix::from_parts(ring, target, source, entries)
    }

    pub fn zero(ring: Ring, target: GradedFreeModule, source: GradedFreeModule) -> Self {
        let n = target.rank() * source.rank();
        GradedMatrix { ring, target, source, entries: vec![ring.zero(); n] }
    }

    pub fn identity(ring: Ring, m: &GradedFreeModule) -> Self {
        let mut out = GradedMatrix::zero(ring, m.clone(), m.clone());
        for i in 0..m.rank() {
            out.entries[i * m.rank() + i] = ring.one();
        }
        out
    }

    /// Row matrix `F -> S(-t)` whose entries are the given forms; the source
    /// twists are derived from the entry degrees.
    pub fn row(ring: Ring, target_twist: i32, forms: &[Poly]) -> Self {
        let src = GradedFreeModule::new(
            forms.iter().map(|f| target_twist + f.degree().unwrap_or(0) as i32).collect(),
        );
        GradedMatrix::from_parts(ring, GradedFreeModule::new(vec![target_twist]), src, forms.to_vec())
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn target(&self) -> &GradedFreeModule {
        &self.target
    }

    pub fn source(&self) -> &GradedFreeModule {
        &self.source
    }

    pub fn nrows(&self) -> usize {
        self.target.rank()
    }

    pub fn ncols(&self) -> usize {
        self.source.rank()
    }

    pub fn entry(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.ncols() + j]
    }

    pub fn column(&self, j: usize) -> Vec<Poly> {
        (0..self.nrows()).map(|i| self.entry(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Poly>> {
        (0..self.ncols()).map(|j| self.column(j)).collect()
    }

    pub fn row_entries(&self, i: usize) -> Vec<Poly> {
        (0..self.ncols()).map(|j| self.entry(i, j).clone()).collect()
    }

    /// Degree an entry `(i, j)` must have.
    pub fn entry_degree(&self, i: usize, j: usize) -> i32 {
        self.source.twist(j) - self.target.twist(i)
    }

    pub fn check_homogeneous(&self) -> Result<(), AlgebraError> {
        for i in 0..self.nrows() {
            for j in 0..self.ncols() {
                let p = self.entry(i, j);
                if p.is_zero() {
                    continue;
                }
                let want = self.entry_degree(i, j);
                let ok = want >= 0
                    && p.terms.iter().all(|(m, _)| m.degree() as i32 == want);
                if !ok {
                    return Err(AlgebraError::NotHomogeneous { row: i, col: j, expected: want });
                }
            }
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedMatrix) -> Result<GradedMatrix, AlgebraError> {
        if self.ring != other.ring {
            return Err(AlgebraError::RingMismatch);
        }
        if self.source != other.target {
            return Err(AlgebraError::TwistMismatch(format!(
                "cannot compose: {:?} vs {:?}",
                self.source.twists, other.target.twists
            )));
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &GradedMatrix) -> GradedMatrix {
        let (r, k, c) = (self.nrows(), self.ncols(), other.ncols());
        debug_assert_eq!(k, other.nrows());
        let mut entries = Vec::with_capacity(r * c);
        for i in 0..r {
            for j in 0..c {
                let mut acc = self.ring.zero();
                for l in 0..k {
                    let a = self.entry(i, l);
                    if a.is_zero() {
                        continue;
                    }
                    let b = other.entry(l, j);
                    if b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b));
                }
                entries.push(acc);
            }
        }
        GradedMatrix::from_parts(self.ring, self.target.clone(), other.source.clone(), entries)
    }

    /// Applies the matrix to a column vector.
    pub fn apply(&self, v: &[Poly]) -> Vec<Poly> {
        assert_eq!(v.len(), self.ncols());
        (0..self.nrows())
            .map(|i| {
                let mut acc = self.ring.zero();
                for (j, x) in v.iter().enumerate() {
                    let a = self.entry(i, j);
                    if !a.is_zero() && !x.is_zero() {
                        acc = acc.add(&a.mul(x));
                    }
                }
                acc
            })
            .collect()
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &GradedMatrix) -> Result<GradedMatrix, AlgebraError> {
        if self.ring != other.ring {
            return Err(AlgebraError::RingMismatch);
        }
        let target = self.target.direct_sum(&other.target);
        let source = self.source.direct_sum(&other.source);
        let mut out = GradedMatrix::zero(self.ring, target, source);
        let c = out.ncols();
        for i in 0..self.nrows() {
            for j in 0..self.ncols() {
                out.entries[i * c + j] = self.entry(i, j).clone();
            }
        }
        for i in 0..other.nrows() {
            for j in 0..other.ncols() {
                out.entries[(i + self.nrows()) * c + j + self.ncols()] = other.entry(i, j).clone();
            }
        }
        Ok(out)
    }

    /// `[self | other]` over a common target.
    pub fn hconcat(&self, other: &GradedMatrix) -> Result<GradedMatrix, AlgebraError> {
        if self.target != other.target {
            return Err(AlgebraError::TwistMismatch("hconcat targets differ".into()));
        }
        let mut cols = self.columns();
        cols.extend(other.columns());
        Ok(GradedMatrix::from_columns_unchecked(
            self.ring,
            self.target.clone(),
            self.source.direct_sum(&other.source),
            cols,
        ))
    }

    /// `[self; other]` over a common source.
    pub fn vconcat(&self, other: &GradedMatrix) -> Result<GradedMatrix, AlgebraError> {
        if self.source != other.source {
            return Err(AlgebraError::TwistMismatch("vconcat sources differ".into()));
        }
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(GradedMatrix::from_parts(
            self.ring,
            self.target.direct_sum(&other.target),
            self.source.clone(),
            entries,
        ))
    }

    /// Transpose as a map `target^∨(t) -> source^∨(t)`.
    pub fn dual(&self, t: i32) -> GradedMatrix {
        let (r, c) = (self.nrows(), self.ncols());
        let mut entries = Vec::with_capacity(r * c);
        for j in 0..c {
            for i in 0..r {
                entries.push(self.entry(i, j).clone());
            }
        }
        GradedMatrix::from_parts(self.ring, self.source.dual(t), self.target.dual(t), entries)
    }

    /// The sheaf twist of source and target by `h`.
    pub fn twisted(&self, h: i32) -> GradedMatrix {
        GradedMatrix {
            ring: self.ring,
            target: self.target.twisted(h),
            source: self.source.twisted(h),
            entries: self.entries.clone(),
        }
    }

    pub fn scale(&self, c: &Coeff) -> GradedMatrix {
        GradedMatrix {
            ring: self.ring,
            target: self.target.clone(),
            source: self.source.clone(),
            entries: self.entries.iter().map(|p| p.scale(c)).collect(),
        }
    }

    pub fn neg(&self) -> GradedMatrix {
        self.scale(&self.ring.field.from_i64(-1))
    }

    pub fn add(&self, o: &GradedMatrix) -> Result<GradedMatrix, AlgebraError> {
        if self.source != o.source || self.target != o.target {
            return Err(AlgebraError::TwistMismatch("sum of maps with different shapes".into()));
        }
        Ok(GradedMatrix {
            ring: self.ring,
            target: self.target.clone(),
            source: self.source.clone(),
            entries: self.entries.iter().zip(&o.entries).map(|(a, b)| a.add(b)).collect(),
        })
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> GradedMatrix {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                entries.push(self.entry(i, j).clone());
            }
        }
        GradedMatrix::from_parts(self.ring, self.target.select(rows), self.source.select(cols), entries)
    }

    pub fn select_columns(&self, cols: &[usize]) -> GradedMatrix {
        let rows: Vec<usize> = (0..self.nrows()).collect();
        self.submatrix(&rows, cols)
    }

    pub fn select_rows(&self, rows: &[usize]) -> GradedMatrix {
        let cols: Vec<usize> = (0..self.ncols()).collect();
        self.submatrix(rows, &cols)
    }

    pub fn without_row(&self, i: usize) -> GradedMatrix {
        let rows: Vec<usize> = (0..self.nrows()).filter(|&k| k != i).collect();
        self.select_rows(&rows)
    }

    pub fn without_column(&self, j: usize) -> GradedMatrix {
        let cols: Vec<usize> = (0..self.ncols()).filter(|&k| k != j).collect();
        self.select_columns(&cols)
    }

    /// First nonzero constant entry in row-major order.
    pub fn first_unit(&self) -> Option<(usize, usize)> {
        for i in 0..self.nrows() {
            for j in 0..self.ncols() {
                if self.entry(i, j).is_unit() {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

impl fmt::Display for GradedMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.nrows() {
            let row: Vec<String> = (0..self.ncols()).map(|j| self.entry(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
