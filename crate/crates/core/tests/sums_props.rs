mod common;

use common::*;
use gls_normal::simplex_sums::multinomial;
use gls_normal::{lattice_points_t, lattice_sums, s_for_string, threshold_counts, EvalMode, SumResult, Word};
use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn exact(r: &SumResult) -> BigUint {
    r.value.clone().expect("exact mode")
}

/// `(S, S#)` through the library, zero above `ε = 1`.
fn sums(sys: &gls_normal::DigitSystem, eps: &BigRational) -> (BigUint, BigUint) {
    if *eps > BigRational::one() {
        return (BigUint::zero(), BigUint::zero());
    }
    let r = lattice_sums(sys, eps, EvalMode::Exact).unwrap();
    (exact(&r.s), exact(&r.s_sharp))
}

#[test]
fn base2_closed_forms() {
    let b2 = base(2);
    for n in 1..=20u32 {
        let (s, sharp) = sums(&b2, &pow2(n));
        assert_eq!(s, BigUint::from((n as u64 - 1) * (1u64 << (n + 1)) + 2), "n = {n}");
        assert_eq!(sharp, BigUint::from((1u64 << (n + 1)) - 1));
    }
}

#[test]
fn multinomial_matches_factorials() {
    for m in [vec![0, 0], vec![3, 4, 5], vec![20, 1, 0, 7], vec![60, 60]] {
        assert_eq!(multinomial(&m), multinomial_by_factorials(&m));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lattice_matches_box_scan(w in arb_weights(4), eps in arb_eps(5000)) {
        let sys = system_from_weights(&w);
        let got: Vec<Vec<u64>> = lattice_points_t(&sys, &eps).unwrap().into_iter().map(|c| c.0).collect();
        let mut sorted = got.clone();
        sorted.sort();
        prop_assert_eq!(sorted, brute_lattice(&sys, &eps));
        prop_assert_eq!(sums(&sys, &eps), brute_sums(&sys, &eps));
    }

    #[test]
    fn counting_identities(w in arb_weights(4), eps in arb_eps(800), s in prop::collection::vec(0u8..4, 1..4)) {
        let sys = system_from_weights(&w);
        let s = Word::from_digits(&s.into_iter().map(|x| x % sys.len() as u8).collect::<Vec<_>>());
        let a = threshold_counts(&sys, &eps, Some(&s)).unwrap();
        let (big_s, sharp) = sums(&sys, &eps);
        prop_assert_eq!(BigUint::from(a.a_total), big_s);
        prop_assert_eq!(BigUint::from(a.a_sharp + 1), sharp);
        let via = s_for_string(&sys, &eps, &s, EvalMode::Exact).unwrap();
        prop_assert_eq!(BigUint::from(a.a_for_s.unwrap()), exact(&via));
    }

    #[test]
    fn pascal_recurrence(w in arb_weights(4), eps in arb_eps(20000)) {
        let sys = system_from_weights(&w);
        let (s, sharp) = sums(&sys, &eps);
        let mut s_rec = BigUint::zero();
        let mut sharp_rec = BigUint::one();
        for d in 0..sys.len() as u8 {
            let (a, b) = sums(&sys, &(&eps / sys.measure(d)));
            s_rec += &a + &b;
            sharp_rec += b;
        }
        prop_assert_eq!(s, s_rec);
        prop_assert_eq!(sharp, sharp_rec);
    }

    #[test]
    fn monotone_in_eps(w in arb_weights(4), a in arb_eps(20000), b in arb_eps(20000)) {
        let sys = system_from_weights(&w);
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (s_lo, sharp_lo) = sums(&sys, &lo);
        let (s_hi, sharp_hi) = sums(&sys, &hi);
        prop_assert!(s_lo >= s_hi && sharp_lo >= sharp_hi);
    }

    #[test]
    fn float_path_tracks_exact(w in arb_weights(4), k in 4u32..40) {
        let sys = system_from_weights(&w);
        let eps = pow2(k);
        let ex = lattice_sums(&sys, &eps, EvalMode::Exact).unwrap();
        let fl = lattice_sums(&sys, &eps, EvalMode::Float).unwrap();
        prop_assert!(ex.s.dual_rel_error().unwrap() <= 1e-10);
        prop_assert!(ex.s_sharp.dual_rel_error().unwrap() <= 1e-10);
        prop_assert!((fl.s.log_value - ex.s.log_value).abs() <= 1e-10 * (1.0 + ex.s.log_value.abs()));
        prop_assert!((fl.s_sharp.log_value - ex.s_sharp.log_value).abs() <= 1e-10 * (1.0 + ex.s_sharp.log_value.abs()));
    }
}
