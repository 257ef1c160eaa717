//! Finitely supported functions `Z -> N` with partial sums `f^#(n) = sum_{m <= n} f(m)`.

use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TwistFunction {
    support: BTreeMap<i32, u32>,
}

impl TwistFunction {
    pub fn new() -> Self {
        TwistFunction::default()
    }

    /// Builds `f` from a multiset of twists: `f(n)` counts occurrences of `n`.
    pub fn from_twists(twists: &[i32]) -> Self {
        let mut f = TwistFunction::new();
        for &t in twists {
            f.add(t, 1);
        }
        f
    }

    pub fn from_pairs(pairs: &[(i32, u32)]) -> Self {
        let mut f = TwistFunction::new();
        for &(n, c) in pairs {
            f.add(n, c);
        }
        f
    }

    pub fn get(&self, n: i32) -> u32 {
        self.support.get(&n).copied().unwrap_or(0)
    }

    pub fn add(&mut self, n: i32, c: u32) {
        if c > 0 {
            *self.support.entry(n).or_insert(0) += c;
        }
    }

    pub fn set(&mut self, n: i32, c: u32) {
        if c == 0 {
            self.support.remove(&n);
        } else {
            self.support.insert(n, c);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, u32)> + '_ {
        self.support.iter().map(|(&n, &c)| (n, c))
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn total(&self) -> u32 {
        self.support.values().sum()
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.support.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.support.keys().next_back().copied()
    }

    /// `f^#(a) = sum_{n <= a} f(n)`.
    pub fn sharp(&self, a: i32) -> u32 {
        self.support.range(..=a).map(|(_, &c)| c).sum()
    }

    /// Sum of `n * f(n)`.
    pub fn weighted_sum(&self) -> i64 {
        self.support.iter().map(|(&n, &c)| n as i64 * c as i64).sum()
    }

    pub fn plus(&self, o: &TwistFunction) -> TwistFunction {
        let mut out = self.clone();
        for (n, c) in o.iter() {
            out.add(n, c);
        }
        out
    }

    /// `self - o`, or `None` when some value would go negative.
    pub fn minus(&self, o: &TwistFunction) -> Option<TwistFunction> {
        let mut out = self.clone();
        for (n, c) in o.iter() {
            let cur = out.get(n);
            if cur < c {
                return None;
            }
            out.set(n, cur - c);
        }
        Some(out)
    }

    /// `n -> f(n - s)`.
    pub fn shifted(&self, s: i32) -> TwistFunction {
        TwistFunction { support: self.support.iter().map(|(&n, &c)| (n + s, c)).collect() }
    }

    /// `n -> f(-n)`.
    pub fn reflected(&self) -> TwistFunction {
        TwistFunction { support: self.support.iter().map(|(&n, &c)| (-n, c)).collect() }
    }

    /// Expands back into a sorted multiset of twists.
    pub fn to_twists(&self) -> Vec<i32> {
        let mut out = Vec::new();
        for (n, c) in self.iter() {
            out.extend(std::iter::repeat_n(n, c as usize));
        }
        out
    }

    /// Multiset symmetric difference parts: `(self \ o, o \ self)`.
    pub fn difference_parts(&self, o: &TwistFunction) -> (TwistFunction, TwistFunction) {
        let mut a = TwistFunction::new();
        let mut b = TwistFunction::new();
        let keys: std::collections::BTreeSet<i32> =
            self.support.keys().chain(o.support.keys()).copied().collect();
        for n in keys {
            let (x, y) = (self.get(n), o.get(n));
            if x > y {
                a.add(n, x - y);
            } else if y > x {
                b.add(n, y - x);
            }
        }
        (a, b)
    }
}

impl fmt::Display for TwistFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|(n, c)| format!("{n}:{c}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_sums() {
        let f = TwistFunction::from_pairs(&[(1, 2)]);
        assert_eq!(f.sharp(0), 0);
        assert_eq!(f.sharp(1), 2);
        let g = TwistFunction::from_pairs(&[(1, 1), (3, 2)]);
        assert_eq!(g.sharp(3), 3);
    }

    #[test]
    fn symmetric_difference() {
        let a = TwistFunction::from_twists(&[1, 1, 2]);
        let b = TwistFunction::from_twists(&[1, 3]);
        let (x, y) = a.difference_parts(&b);
        assert_eq!(x.to_twists(), vec![1, 2]);
        assert_eq!(y.to_twists(), vec![3]);
    }
}
