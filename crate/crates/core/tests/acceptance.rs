//! The ten acceptance criteria, one report line each.
//!
//! Run with `cargo test -p liaison-core --test acceptance -- --nocapture`
//! to see the lines; the test fails if any criterion fails.

mod common;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;
use liaison_core::cohomology::{ideal_sheaf_cohomology, rao_modules};
use liaison_core::groebner::{monomial, oracle, syzygies};
use liaison_core::liaison::{
    e_to_n, is_pure_codimension, link, n_to_e, phi_invariant, stable_normal_form, StableClass,
};
use liaison_core::lr::{self, ClassData};
use liaison_core::resolutions::extract_e_type;
use liaison_core::{CompleteIntersection, GradedFreeModule, GradedMatrix, GradedModule, Ideal, Mono, TwistFunction};

const TRIES: usize = 30;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {:.1?}, limit {:?}", t, limit))
}

/// Linking complete intersections for a curve: the smallest one and one in
/// degrees raised by one.
fn linking_cis(i: &Ideal, r: usize, rng: &mut ChaCha8Rng) -> Result<Vec<CompleteIntersection>, String> {
    let small = CompleteIntersection::smallest_in(i, r, rng, TRIES).map_err(|e| e.to_string())?;
    let raised: Vec<u32> = small.degrees().iter().map(|d| d + 1).collect();
    let big = CompleteIntersection::random_in(i, &raised, rng, TRIES).map_err(|e| e.to_string())?;
    Ok(vec![small, big])
}

fn criterion_1_2() -> (Outcome, Outcome) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut pairs = (0, 0);
    let mut degree_checks = 0;
    let mut involution = Ok(());
    let mut additivity = Ok(());
    for item in curves_p3().into_iter().chain(curves_p4()) {
        let cis = match linking_cis(&item.ideal, item.codim, &mut rng) {
            Ok(c) => c,
            Err(e) => {
                involution = Err(format!("{}: {e}", item.name));
                break;
            }
        };
        for ci in cis {
            let once = link(&item.ideal, &ci).unwrap();
            let twice = link(&once.ideal, &ci).unwrap();
            if !twice.ideal.equals(&item.ideal) && involution.is_ok() {
                involution = Err(format!("{} (codim {}) by {:?}", item.name, item.codim, ci.degrees()));
            }
            if item.codim == 2 {
                pairs.0 += 1;
            } else {
                pairs.1 += 1;
            }
            let linked_degree = if once.empty { 0 } else { once.ideal.degree() };
            degree_checks += 1;
            if item.ideal.degree() + linked_degree != ci.degree() && additivity.is_ok() {
                additivity = Err(format!(
                    "{}: {} + {} != {}",
                    item.name,
                    item.ideal.degree(),
                    linked_degree,
                    ci.degree()
                ));
            }
        }
    }
    let c1 = involution
        .and_then(|_| ensure(pairs.0 >= 20 && pairs.1 >= 5, || format!("only {pairs:?} pairs")))
        .and_then(|_| within(Duration::from_secs(60), start))
        .map(|_| format!("{} codim-2 and {} codim-3 pairs, {:.1?}", pairs.0, pairs.1, start.elapsed()));
    let c2 = additivity.map(|_| format!("{degree_checks} links"));
    (c1, c2)
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut count = 0;
    for item in curves_p3() {
        let cis = linking_cis(&item.ideal, 2, &mut rng)?;
        // The raised complete intersection always leaves a non-empty residual.
        let ci = &cis[1];
        let e = extract_e_type(&item.ideal, 2).map_err(|e| format!("{}: {e}", item.name))?;
        let n = e_to_n(&e, ci).map_err(|e| format!("{}: {e}", item.name))?;
        let linked = link(&item.ideal, ci).unwrap();
        ensure(n.ideal().equals(&linked.ideal), || format!("{}: N-type does not resolve the residual", item.name))?;
        let back = n_to_e(&n, ci).map_err(|e| format!("{}: {e}", item.name))?.cancel_split_summands();
        let orig = e.cancel_split_summands();
        ensure(back.ideal().equals(&item.ideal), || format!("{}: round trip changed the ideal", item.name))?;
        ensure(back.complex.betti_table() == orig.complex.betti_table(), || {
            format!("{}: Betti tables differ\n{}\nvs\n{}", item.name, back.complex.betti_table(), orig.complex.betti_table())
        })?;
        let (a, b) = (back.e_module().minimal_presentation(), orig.e_module().minimal_presentation());
        ensure(a.is_isomorphic(&b, &mut rng), || format!("{}: E modules are not isomorphic", item.name))?;
        count += 1;
    }
    ensure(count >= 10, || format!("only {count} curves"))?;
    Ok(format!("{count} curves"))
}

/// Monomial ideals in four variables: handpicked cases plus seeded random ones.
fn monomial_corpus() -> Vec<Vec<Mono>> {
    let m = |e: [u32; 4]| Mono::from_exps(&e);
    let mut out: Vec<Vec<Mono>> = vec![
        vec![m([1, 0, 0, 0]), m([0, 1, 0, 0])],
        vec![m([1, 0, 1, 0]), m([1, 0, 0, 1]), m([0, 1, 1, 0]), m([0, 1, 0, 1])],
        vec![m([2, 0, 0, 0]), m([1, 1, 0, 0]), m([0, 2, 0, 0]), m([1, 0, 1, 0])],
        vec![m([1, 0, 0, 0]), m([0, 1, 1, 0]), m([0, 1, 0, 1])],
        vec![m([2, 0, 0, 0]), m([0, 2, 0, 0]), m([1, 1, 1, 0])],
        vec![m([1, 1, 0, 0])],
        vec![m([1, 1, 0, 0]), m([1, 0, 1, 0])],
        vec![m([1, 0, 0, 0]), m([0, 1, 0, 0]), m([0, 0, 1, 0])],
        vec![m([1, 1, 1, 0])],
        vec![m([2, 0, 0, 0]), m([0, 3, 0, 0])],
        vec![m([1, 1, 0, 0]), m([0, 0, 1, 1])],
        vec![m([1, 1, 0, 0]), m([0, 1, 1, 0]), m([0, 0, 1, 1])],
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    while out.len() < 40 {
        let k = rng.gen_range(1..=4);
        let gens: Vec<Mono> = (0..k)
            .map(|_| {
                let mut e = [0u32; 4];
                let deg = rng.gen_range(1..=3);
                for _ in 0..deg {
                    e[rng.gen_range(0..4)] += 1;
                }
                m(e)
            })
            .collect();
        // Keep ideals defining a non-empty scheme.
        if monomial::associated_primes(&gens, 4).iter().any(|&p| p != 0b1111) {
            out.push(gens);
        }
    }
    out
}

fn criterion_4() -> Outcome {
    let r = ring(4);
    let (mut pure, mut impure) = (0, 0);
    let corpus = monomial_corpus();
    for gens in &corpus {
        let i = Ideal::new(r, gens.iter().map(|g| r.monomial(*g)).collect()).unwrap();
        let primes: Vec<u32> = monomial::associated_primes(gens, 4).into_iter().filter(|&p| p != 0b1111).collect();
        let codim = primes.iter().map(|p| p.count_ones()).min().unwrap() as usize;
        let oracle = primes.iter().all(|p| p.count_ones() as usize == codim);
        let got = is_pure_codimension(&i, codim).map_err(|e| e.to_string())?;
        ensure(got == oracle, || format!("{gens:?} in codim {codim}: got {got}, oracle {oracle}"))?;
        if oracle {
            pure += 1;
        } else {
            impure += 1;
        }
    }
    ensure(corpus.len() >= 30 && pure > 0 && impure > 0, || format!("corpus mix {pure}/{impure}"))?;
    Ok(format!("{} ideals ({pure} pure, {impure} not)", corpus.len()))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut chains = 0;
    let mut links = 0;
    for item in curves_p3().into_iter().filter(|c| c.name != "line" && c.name != "conic") {
        let base = phi_invariant(&item.ideal).map_err(|e| format!("{}: {e}", item.name))?;
        for len in [2usize, 4] {
            let mut cur = item.ideal.clone();
            for step in 1..=len {
                let ci = CompleteIntersection::smallest_in(&cur, 2, &mut rng, TRIES).map_err(|e| e.to_string())?;
                // Raising the degrees keeps the residual non-empty when the curve is itself a complete intersection.
                let raised: Vec<u32> = ci.degrees().iter().map(|d| d + 1).collect();
                let ci = CompleteIntersection::random_in(&cur, &raised, &mut rng, TRIES).map_err(|e| e.to_string())?;
                let next = link(&cur, &ci).map_err(|e| e.to_string())?;
                ensure(!next.empty, || format!("{}: empty residual", item.name))?;
                cur = next.ideal;
                links += 1;
                let phi = phi_invariant(&cur).map_err(|e| format!("{} step {step}: {e}", item.name))?;
                let expected: StableClass = if step % 2 == 0 { base.clone() } else { base.dual_class() };
                ensure(phi.equivalent(&expected, &mut rng), || {
                    format!("{}: class changed after {step} links (degree {})", item.name, cur.degree())
                })?;
            }
            chains += 1;
        }
    }
    ensure(chains >= 15, || format!("only {chains} chains"))?;
    Ok(format!("{chains} chains, {links} links"))
}

fn window_table(i: &Ideal, lo: i32, hi: i32) -> liaison_core::cohomology::GradedDimensionTable {
    ideal_sheaf_cohomology(i, lo, hi).unwrap()
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let r = ring(4);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let skew = ideal(r, &["x0*x2", "x0*x3", "x1*x2", "x1*x3"]);
    let rao = rao_modules(&skew).map_err(|e| e.to_string())?;
    let expected: Vec<Option<BTreeMap<i32, u64>>> = vec![Some(BTreeMap::from([(0, 1)]))];
    ensure(rao == expected, || format!("Rao modules {rao:?}"))?;
    let s = poly(r, "x0*x2 + x1*x3");
    let h = poly(r, "x0^2 + x1*x2 + x3^2");
    let (y, step) = lr::basic_double_link(&skew, &s, &h, &mut rng, TRIES).map_err(|e| e.to_string())?;
    ensure(step.h == 2 && y.degree() == 6, || format!("descendant of degree {}", y.degree()))?;
    let me = lr::minimal_element(&y, &mut rng, TRIES).map_err(|e| e.to_string())?;
    let (a, b) = (window_table(&me.ideal, -4, 6), window_table(&skew, -4, 6));
    ensure(a == b, || format!("tables differ:\n{a}\nvs\n{b}"))?;
    within(Duration::from_secs(120), start)?;
    Ok(format!("minimal element of degree {} from a degree-6 descendant, {:.1?}", me.ideal.degree(), start.elapsed()))
}

fn core_of(i: &Ideal, rng: &mut ChaCha8Rng) -> Result<GradedModule, String> {
    let cd = lr::class_data(i, rng, TRIES).map_err(|e| e.to_string())?;
    Ok(stable_normal_form(&cd.core).module)
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let r = ring(4);
    let mut classes = 0;
    let mut paddings = 0;
    for item in non_acm_p3() {
        let n0 = core_of(&item.ideal, &mut rng)?;
        let q = lr::q_function(&n0).map_err(|e| format!("{}: {e}", item.name))?;
        let qd = lr::q_duality(&n0).map_err(|e| format!("{}: {e}", item.name))?;
        ensure(qd.holds(), || format!("{}: q + q' = {:?}, l - e0 - e1 = {:?}", item.name, qd.lhs, qd.rhs))?;
        for _ in 0..10 {
            let k = rng.gen_range(1..=3);
            let twists: Vec<i32> = (0..k).map(|_| rng.gen_range(-2..=4)).collect();
            let pad = GradedMatrix::zero(r, GradedFreeModule::new(twists.clone()), GradedFreeModule::zero());
            let padded = GradedModule::new(n0.presentation().direct_sum(&pad).unwrap());
            let qp = lr::q_function(&padded).map_err(|e| format!("{} + {twists:?}: {e}", item.name))?;
            let expected = q.plus(&TwistFunction::from_twists(&twists));
            ensure(qp == expected, || format!("{} padded by {twists:?}: q = {qp}, expected {expected}", item.name))?;
            paddings += 1;
        }
        classes += 1;
    }
    Ok(format!("{classes} classes, {paddings} paddings"))
}

struct Node {
    ideal: Ideal,
    data: ClassData,
    parent: Option<usize>,
    /// Height of the basic double link from the parent.
    h: i32,
}

fn bdl_tree(base: &Ideal, rng: &mut ChaCha8Rng) -> Result<Vec<Node>, String> {
    let r = base.ring();
    let data = lr::class_data(base, rng, TRIES).map_err(|e| e.to_string())?;
    let mut nodes = vec![Node { ideal: base.clone(), data, parent: None, h: 0 }];
    // Root with two children of heights 1 and 2, then a chain of height 1 below each.
    let plan: [(usize, u32); 6] = [(0, 1), (0, 2), (1, 1), (2, 1), (3, 1), (4, 1)];
    for (parent, h) in plan {
        let x = nodes[parent].ideal.clone();
        let gens = x.minimal_generators();
        let s_deg = x.min_generator_degree().unwrap();
        let s = liaison_core::liaison::random_element(&gens, s_deg, rng).ok_or("no surface")?;
        let hf = r.random_form(h, rng);
        let (y, _) = lr::basic_double_link(&x, &s, &hf, rng, TRIES).map_err(|e| e.to_string())?;
        let data = lr::class_data(&y, rng, TRIES).map_err(|e| e.to_string())?;
        nodes.push(Node { ideal: y, data, parent: Some(parent), h: h as i32 });
    }
    Ok(nodes)
}

fn random_twist_function(rng: &mut ChaCha8Rng, total: u32) -> TwistFunction {
    let mut f = TwistFunction::new();
    for _ in 0..total {
        f.add(rng.gen_range(-3..=3), 1);
    }
    f
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let r = ring(4);
    let bases = [
        ideal(r, &["x0*x2", "x0*x3", "x1*x2", "x1*x3"]),
        intersection(&[ideal(r, &["x0", "x1"]), ideal(r, &["x3", "x2^2 - x0*x1"])]),
    ];
    let mut edges = 0;
    let mut triples = 0;
    for base in &bases {
        let nodes = bdl_tree(base, &mut rng)?;
        let dom = |a: usize, b: usize, rng: &mut ChaCha8Rng| {
            lr::dominates_from(&nodes[a].data, &nodes[b].data, rng).map_err(|e| e.to_string())
        };
        // Heights from each node down to each of its descendants.
        let mut ancestors: Vec<Vec<(usize, i32)>> = vec![Vec::new(); nodes.len()];
        for (k, n) in nodes.iter().enumerate() {
            if let Some(p) = n.parent {
                let mut up: Vec<(usize, i32)> = ancestors[p].iter().map(|&(a, h)| (a, h + n.h)).collect();
                up.push((p, n.h));
                ancestors[k] = up;
            }
        }
        for (k, n) in nodes.iter().enumerate() {
            if let Some(p) = n.parent {
                let got = dom(p, k, &mut rng)?;
                ensure(got == Some(n.h), || format!("edge {p}->{k}: got {got:?}, built with height {}", n.h))?;
                edges += 1;
            }
            ensure(dom(k, k, &mut rng)? == Some(0), || format!("node {k} is not reflexive"))?;
        }
        for (z, anc) in ancestors.iter().enumerate() {
            for &(x, hxz) in anc {
                for &(y, hyz) in anc {
                    if let Some(&(_, hxy)) = ancestors[y].iter().find(|(a, _)| *a == x) {
                        let (a, b, c) = (dom(x, y, &mut rng)?, dom(y, z, &mut rng)?, dom(x, z, &mut rng)?);
                        ensure(a == Some(hxy) && b == Some(hyz) && c == Some(hxz) && hxy + hyz == hxz, || {
                            format!("triple {x},{y},{z}: {a:?} {b:?} {c:?}")
                        })?;
                        triples += 1;
                    }
                }
                // A strict descendant never dominates its ancestor.
                if hxz > 0 {
                    ensure(dom(z, x, &mut rng)?.is_none(), || format!("{z} dominates its ancestor {x}"))?;
                }
            }
        }
    }
    for _ in 0..1000 {
        let total = rng.gen_range(1..=8);
        let (f, g) = (random_twist_function(&mut rng, total), random_twist_function(&mut rng, total));
        lr::sharp_compare(&f, &g).map_err(|e| format!("{f} vs {g}: {e}"))?;
    }
    Ok(format!("{edges} edges, {triples} triples, 1000 sharp pairs"))
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let r = ring(4);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let skew = ideal(r, &["x0*x2", "x0*x3", "x1*x2", "x1*x3"]);
    let me = lr::minimal_element(&skew, &mut rng, TRIES).map_err(|e| e.to_string())?;
    let (y0, ci) = lr::link_to_dual_minimal(&me.ideal, &me, &mut rng, TRIES).map_err(|e| e.to_string())?;
    let phi = phi_invariant(&y0).map_err(|e| e.to_string())?;
    let dual = phi_invariant(&skew).map_err(|e| e.to_string())?.dual_class();
    ensure(phi.equivalent(&dual, &mut rng), || "class of Y0 is not the dual class".into())?;
    let other = lr::minimal_element(&y0, &mut rng, TRIES).map_err(|e| e.to_string())?;
    let (a, b) = (window_table(&y0, -4, 6), window_table(&other.ideal, -4, 6));
    ensure(a == b, || format!("tables differ:\n{a}\nvs\n{b}"))?;
    within(Duration::from_secs(120), start)?;
    Ok(format!("linked by degrees {:?}, {:.1?}", ci.degrees(), start.elapsed()))
}

fn criterion_10() -> Outcome {
    let mut checks = 0;
    let items: Vec<Item> = curves_p3().into_iter().chain(curves_p4()).collect();
    for item in &items {
        let i = &item.ideal;
        let r = i.ring();
        let gens = i.generators().to_vec();
        let row = i.generator_row();
        let syz = syzygies(&row);
        let j = Ideal::new(r, vec![poly(r, "x0 + x1"), poly(r, "x2^2")]).unwrap();
        let colon = i.quotient(&j);
        for d in 0..=6i64 {
            let lin = oracle::quotient_ring_dimension(r, &gens, d);
            ensure(i.quotient_dimension(d) == lin as i128, || format!("{} Hilbert, degree {d}", item.name))?;
            ensure(oracle::normal_form_dimension(i, d) == lin, || format!("{} normal forms, degree {d}", item.name))?;
            ensure(oracle::image_dimension(&syz, d) == oracle::kernel_dimension(&row, d), || {
                format!("{} syzygies, degree {d}", item.name)
            })?;
            ensure(
                oracle::colon_dimension(r, &gens, j.generators(), d)
                    == oracle::ideal_dimension(r, colon.generators(), d),
                || format!("{} quotient, degree {d}", item.name),
            )?;
            checks += 4;
        }
    }
    Ok(format!("{} ideals, {checks} degreewise checks", items.len()))
}

#[test]
fn acceptance() {
    fn timed(n: usize, name: &'static str, f: fn() -> Outcome) -> (usize, &'static str, Outcome, Duration) {
        let t = Instant::now();
        let out = f();
        (n, name, out, t.elapsed())
    }
    let t = Instant::now();
    let (c1, c2) = criterion_1_2();
    let e = t.elapsed();
    let mut results = vec![(1, "linkage involution", c1, e), (2, "degree additivity", c2, e)];
    results.push(timed(3, "mapping-cone round trip", criterion_3));
    results.push(timed(4, "purity criterion", criterion_4));
    results.push(timed(5, "class invariance along chains", criterion_5));
    results.push(timed(6, "skew-lines class", criterion_6));
    results.push(timed(7, "q-machinery identities", criterion_7));
    results.push(timed(8, "domination order", criterion_8));
    results.push(timed(9, "duality link", criterion_9));
    results.push(timed(10, "kernel correctness", criterion_10));

    let mut failed = Vec::new();
    for (n, name, out, t) in &results {
        match out {
            Ok(msg) => println!("criterion {n:>2} PASS  {name}: {msg} [{t:.1?}]"),
            Err(msg) => {
                println!("criterion {n:>2} FAIL  {name}: {msg} [{t:.1?}]");
                failed.push(*n);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
