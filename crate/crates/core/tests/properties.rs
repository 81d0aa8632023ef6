use llab::hilbert::{graded_piece, hilbert_function};
use llab::resolution::FreeResolution;
use llab::{random_form, Ideal, MultiDegree, Polynomial, PrimeField, Ring};
use proptest::prelude::*;

fn ring(r: usize) -> std::sync::Arc<Ring> {
    Ring::projective(PrimeField::new(32003).unwrap(), r)
}

fn ideal(r: usize, degs: &[i64], seed: u64) -> Ideal {
    let ring = ring(r);
    let gens: Vec<Polynomial> = degs.iter().enumerate().map(|(i, &d)| random_form(&ring, &MultiDegree::single(d), seed + i as u64).unwrap()).collect();
    Ideal::new(&ring, gens).unwrap()
}

fn sorted_gb(i: &Ideal) -> Vec<String> {
    let mut v: Vec<String> = i.groebner_basis().iter().map(|g| g.to_string()).collect();
    v.sort();
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn groebner_basis_is_canonical(r in 2usize..4, degs in prop::collection::vec(1i64..4, 1..4), seed in 0u64..1000, rot in 0usize..4) {
        let i = ideal(r, &degs, seed);
        let again = Ideal::new(i.ring(), i.groebner_basis().to_vec()).unwrap();
        prop_assert_eq!(sorted_gb(&again), sorted_gb(&i));
        let mut gens = i.gens().to_vec();
        let k = rot % gens.len();
        gens.rotate_left(k);
        prop_assert_eq!(sorted_gb(&Ideal::new(i.ring(), gens).unwrap()), sorted_gb(&i));
    }

    #[test]
    fn colon_times_divisor_lies_in_ideal(degs in prop::collection::vec(1i64..4, 2..4), jd in prop::collection::vec(1i64..3, 1..3), seed in 0u64..1000) {
        let i = ideal(3, &degs, seed);
        let j = ideal(3, &jd, seed + 77);
        let q = i.quotient(&j).unwrap();
        prop_assert!(i.is_subset_of(&q));
        prop_assert!(q.product(&j).unwrap().is_subset_of(&i));
    }

    #[test]
    fn saturation_is_idempotent(degs in prop::collection::vec(1i64..3, 1..3), seed in 0u64..1000) {
        let base = ideal(3, &degs, seed);
        let m = Ideal::new(base.ring(), base.ring().variables()).unwrap();
        // add junk supported at the irrelevant ideal
        let i = base.intersect(&m.product(&m).unwrap()).unwrap();
        let s = i.saturate(None).unwrap();
        prop_assert!(s.saturate(None).unwrap().equals(&s));
        prop_assert!(s.equals(&base.saturate(None).unwrap()));
    }

    #[test]
    fn hilbert_function_complements_graded_piece(r in 2usize..4, degs in prop::collection::vec(1i64..4, 1..4), seed in 0u64..1000, d in 0i64..7) {
        let i = ideal(r, &degs, seed);
        let deg = MultiDegree::single(d);
        prop_assert_eq!(hilbert_function(&i, &deg) + graded_piece(&i, &deg).len() as i64, i.ring().monomial_count(&deg) as i64);
    }

    #[test]
    fn resolutions_are_complexes(degs in prop::collection::vec(1i64..3, 1..4), seed in 0u64..1000, d in 0i64..8) {
        let i = ideal(3, &degs, seed);
        let res = FreeResolution::of_ideal(&i, 5).unwrap();
        prop_assert!(res.is_complex());
        prop_assert_eq!(res.euler_characteristic(&MultiDegree::single(d)), hilbert_function(&i, &MultiDegree::single(d)));
    }
}
