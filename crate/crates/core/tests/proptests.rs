mod common;

use proptest::prelude::*;

use common::*;
use liaison_core::lr::{self, SharpOrder};
use liaison_core::{parse_poly, GradedFreeModule, GradedMatrix, GradedModule, Ideal, Mono, Poly, Ring, TwistFunction};

fn twists(total: usize) -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec(-5i32..=5, total)
}

fn poly_in(r: Ring) -> impl Strategy<Value = Poly> {
    prop::collection::vec(((0u32..3, 0u32..3, 0u32..3, 0u32..3), -20i64..=20), 0..5).prop_map(move |terms| {
        let f = r.field();
        r.from_terms(
            terms
                .into_iter()
                .map(|((a, b, c, d), k)| (Mono::from_exps(&[a, b, c, d]), f.from_i64(k)))
                .collect(),
        )
    })
}

proptest! {
    #[test]
    fn sharp_characterizations_agree(n in 1usize..8, seed in any::<u64>()) {
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let a: Vec<i32> = (0..n).map(|_| rand::Rng::gen_range(&mut rng, -4..=4)).collect();
        let b: Vec<i32> = (0..n).map(|_| rand::Rng::gen_range(&mut rng, -4..=4)).collect();
        let (f, g) = (TwistFunction::from_twists(&a), TwistFunction::from_twists(&b));
        let o = lr::sharp_compare(&f, &g).unwrap();
        let back = lr::sharp_compare(&g, &f).unwrap();
        let flipped = match o {
            SharpOrder::FDominates => SharpOrder::GDominates,
            SharpOrder::GDominates => SharpOrder::FDominates,
            other => other,
        };
        prop_assert_eq!(back, flipped);
        prop_assert_eq!(o == SharpOrder::Equal, f == g);
    }

    #[test]
    fn shifting_down_dominates(t in twists(5), s in 1i32..4) {
        let f = TwistFunction::from_twists(&t);
        let g = f.shifted(-s);
        prop_assert_eq!(lr::sharp_compare(&g, &f).unwrap(), SharpOrder::FDominates);
    }

    #[test]
    fn printed_polynomials_parse_back(f in poly_in(ring(4))) {
        let r = ring(4);
        let printed = f.to_string();
        prop_assert_eq!(parse_poly(r, &printed).unwrap(), f);
    }

    #[test]
    fn ring_axioms(a in poly_in(ring(4)), b in poly_in(ring(4)), c in poly_in(ring(4))) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&b).sub(&b), a.clone());
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        if !a.is_zero() && !b.is_zero() {
            prop_assert_eq!(a.mul(&b).lead_mono(), Some(a.lead_mono().unwrap().mul(&b.lead_mono().unwrap())));
        }
    }

    #[test]
    fn ideal_members_reduce_to_zero(a in poly_in(ring(4)), b in poly_in(ring(4))) {
        let r = ring(4);
        let i = ideal(r, &["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"]);
        let g = i.generators();
        let f = a.mul(&g[0]).add(&b.mul(&g[2]));
        prop_assert!(i.normal_form(&f).is_zero());
        prop_assert!(i.contains(&f));
    }

    #[test]
    fn hilbert_function_matches_linear_algebra(k in 1usize..4, seed in any::<u64>()) {
        let r = ring(4);
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed);
        let gens: Vec<Poly> = (0..k).map(|j| r.random_form(1 + (j as u32 % 2), &mut rng)).collect();
        let i = Ideal::new(r, gens.clone()).unwrap();
        for d in 0..5 {
            let lin = liaison_core::groebner::oracle::quotient_ring_dimension(r, &gens, d);
            prop_assert_eq!(i.quotient_dimension(d), lin as i128);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Free summands enter q additively.
    #[test]
    fn free_padding_adds_to_q(t in prop::collection::vec(-2i32..=4, 1..4)) {
        let r = ring(4);
        let skew = ideal(r, &["x0*x2", "x0*x3", "x1*x2", "x1*x3"]);
        let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(0);
        let cd = lr::class_data(&skew, &mut rng, 30).unwrap();
        let n0 = liaison_core::liaison::stable_normal_form(&cd.core).module;
        let q = lr::q_function(&n0).unwrap();
        let pad = GradedMatrix::zero(r, GradedFreeModule::new(t.clone()), GradedFreeModule::zero());
        let padded = GradedModule::new(n0.presentation().direct_sum(&pad).unwrap());
        prop_assert_eq!(lr::q_function(&padded).unwrap(), q.plus(&TwistFunction::from_twists(&t)));
    }
}
