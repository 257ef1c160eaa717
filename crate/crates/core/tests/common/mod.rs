//! Shared corpus of ideals for the integration tests.
#![allow(dead_code)]

use liaison_core::{parse_poly, Field, Ideal, Poly, Ring};

pub fn ring(nvars: usize) -> Ring {
    Ring::new(Field::default(), nvars).unwrap()
}

pub fn poly(r: Ring, s: &str) -> Poly {
    parse_poly(r, s).unwrap()
}

pub fn ideal(r: Ring, gens: &[&str]) -> Ideal {
    Ideal::new(r, gens.iter().map(|g| poly(r, g)).collect()).unwrap()
}

pub fn intersection(parts: &[Ideal]) -> Ideal {
    let mut acc = parts[0].clone();
    for p in &parts[1..] {
        acc = acc.intersect(p);
    }
    acc.minimalized()
}

/// A named ideal with its codimension and whether it has a non-zero Rao class.
pub struct Item {
    pub name: &'static str,
    pub ideal: Ideal,
    pub codim: usize,
    pub acm: bool,
}

/// Locally Cohen-Macaulay curves in P^3.
pub fn curves_p3() -> Vec<Item> {
    let r = ring(4);
    let it = |name, ideal, acm| Item { name, ideal, codim: 2, acm };
    vec![
        it("line", ideal(r, &["x0", "x1"]), true),
        it("conic", ideal(r, &["x0", "x1*x3 - x2^2"]), true),
        it("plane cubic", ideal(r, &["x0", "x1^3 + x2^3 + x3^3"]), true),
        it("line pair", ideal(r, &["x0", "x1*x2"]), true),
        it("twisted cubic", ideal(r, &["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"]), true),
        it("elliptic quartic", ideal(r, &["x0*x1 - x2*x3", "x0^2 - x1*x3 + x2^2"]), true),
        it("skew lines", ideal(r, &["x0*x2", "x0*x3", "x1*x2", "x1*x3"]), false),
        it(
            "line and conic",
            intersection(&[ideal(r, &["x0", "x1"]), ideal(r, &["x3", "x2^2 - x0*x1"])]),
            false,
        ),
        it(
            "rational quartic",
            ideal(r, &["x1*x2 - x0*x3", "x1^3 - x0^2*x2", "x2^3 - x1*x3^2", "x0*x2^2 - x1^2*x3"]),
            false,
        ),
        it("double line", ideal(r, &["x0^2", "x0*x1", "x1^2", "x0*x3 - x1*x2"]), false),
        it(
            "three skew lines",
            intersection(&[ideal(r, &["x0", "x1"]), ideal(r, &["x2", "x3"]), ideal(r, &["x0 - x2", "x1 - x3"])]),
            false,
        ),
        it(
            "two disjoint conics",
            intersection(&[ideal(r, &["x0", "x2^2 - x1*x3"]), ideal(r, &["x3", "x1^2 - x0*x2"])]),
            false,
        ),
    ]
}

/// Curves in P^4 (codimension 3).
pub fn curves_p4() -> Vec<Item> {
    let r = ring(5);
    let it = |name, ideal| Item { name, ideal, codim: 3, acm: false };
    vec![
        it("line", ideal(r, &["x0", "x1", "x2"])),
        it("conic", ideal(r, &["x0", "x1", "x2*x3 - x4^2"])),
        it("twisted cubic", ideal(r, &["x0", "x1*x3 - x2^2", "x2*x4 - x3^2", "x1*x4 - x2*x3"])),
        it(
            "rational normal quartic",
            ideal(
                r,
                &[
                    "x0*x2 - x1^2",
                    "x0*x3 - x1*x2",
                    "x0*x4 - x1*x3",
                    "x1*x3 - x2^2",
                    "x1*x4 - x2*x3",
                    "x2*x4 - x3^2",
                ],
            ),
        ),
        it("skew lines", intersection(&[ideal(r, &["x0", "x1", "x2"]), ideal(r, &["x2", "x3", "x4"])])),
    ]
}

pub fn non_acm_p3() -> Vec<Item> {
    curves_p3().into_iter().filter(|c| !c.acm).collect()
}
