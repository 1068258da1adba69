use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use selector_lab::iteration::iterate_exact;
use selector_lab::modules::{
    module_by_cube, module_by_recursion, module_from_profile, module_inclusion_exclusion,
};
use selector_lab::scalar::rational;
use selector_lab::{BernsteinCoeffs, RationalPoly, SpernerFamily};

fn family(max_n: usize) -> impl Strategy<Value = SpernerFamily> {
    (1..=max_n).prop_flat_map(|n| {
        let full = (1u32 << n) - 1;
        prop::collection::vec(1..=full, 1..=8)
            .prop_map(move |masks| SpernerFamily::from_masks(n, &masks).unwrap())
    })
}

fn family_with_point(max_n: usize) -> impl Strategy<Value = (SpernerFamily, Vec<i64>)> {
    family(max_n).prop_flat_map(|f| {
        let n = f.n();
        (Just(f), prop::collection::vec(-50i64..50, n))
    })
}

fn unit_rational() -> impl Strategy<Value = BigRational> {
    (1i64..1000).prop_map(|j| rational(j, 1000))
}

fn rational_poly(max_degree: usize) -> impl Strategy<Value = RationalPoly> {
    prop::collection::vec((-40i64..40, 1i64..12), 1..=max_degree + 1)
        .prop_map(|c| RationalPoly::new(c.into_iter().map(|(a, b)| rational(a, b)).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn three_constructions_agree(f in family(6)) {
        let cube = module_from_profile(&f.profile()).unwrap();
        prop_assert_eq!(&cube, &module_inclusion_exclusion(&f).unwrap());
        prop_assert_eq!(&cube, &module_by_recursion(&f));
    }

    #[test]
    fn selects_a_coordinate((f, x) in family_with_point(6)) {
        let s = f.evaluate(&x).unwrap();
        prop_assert_eq!(x[s.coordinate - 1], s.value);
    }

    #[test]
    fn monotone((f, x) in family_with_point(6), bumps in prop::collection::vec(0i64..5, 6)) {
        let y: Vec<i64> = x.iter().zip(&bumps).map(|(a, b)| a + b).collect();
        prop_assert!(f.evaluate(&y).unwrap().value >= f.evaluate(&x).unwrap().value);
    }

    #[test]
    fn commutes_with_increasing_maps((f, x) in family_with_point(6), a in 1i64..9, b in -20i64..20) {
        let y: Vec<i64> = x.iter().map(|v| a * v + b).collect();
        prop_assert_eq!(f.evaluate(&y).unwrap().value, a * f.evaluate(&x).unwrap().value + b);
    }

    #[test]
    fn truth_table_round_trip(f in family(6)) {
        prop_assert_eq!(SpernerFamily::from_truth_table(&f.truth_table(), f.n()).unwrap(), f);
    }

    #[test]
    fn profile_is_valid_and_g_is_dual(f in family(6)) {
        prop_assert!(f.profile().validate().is_ok());
        let pair = module_by_cube(&f);
        prop_assert_eq!(pair.g, pair.h.dual());
    }

    #[test]
    fn transversal_dual_is_an_involution(f in family(5)) {
        let d = f.transversal_dual();
        prop_assert_eq!(module_by_cube(&d).h, module_by_cube(&f).g);
        prop_assert_eq!(d.transversal_dual(), f);
    }

    #[test]
    fn module_depends_only_on_isomorphism_class(f in family(5), seed in any::<u64>()) {
        let n = f.n();
        let mut perm: Vec<usize> = (0..n).collect();
        // Fisher-Yates driven by the seed
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        let g = f.permute(&perm);
        prop_assert!(f.are_isomorphic(&g).unwrap());
        prop_assert_eq!(module_by_cube(&f).h, module_by_cube(&g).h);
    }

    #[test]
    fn russo_identity(f in family(6), p in unit_rational()) {
        let dg = module_by_cube(&f).g.derivative();
        prop_assert_eq!(f.total_influence(&p).unwrap(), dg.eval(&p));
    }

    #[test]
    fn strict_bounds(f in family(6), t in unit_rational()) {
        let h = module_by_cube(&f).h;
        let (m, b) = f.bounds_exponents();
        let ht = h.eval(&t);
        let one = BigRational::one();
        prop_assert!(num_traits::pow(t.clone(), b as usize) <= ht);
        prop_assert!(ht <= one.clone() - num_traits::pow(one - t, m as usize));
    }

    #[test]
    fn float_shadow_is_accurate(f in family(6), j in 1u32..1000) {
        let h = module_by_cube(&f).h;
        let t = j as f64 / 1000.0;
        let exact = h.eval(&BigRational::from_float(t).unwrap());
        let exact = selector_lab::scalar::rational_to_f64(&exact);
        prop_assert!((h.eval_float(t) - exact).abs() <= 1e-12 * exact.abs().max(1e-300));
    }

    #[test]
    fn bernstein_round_trip(p in rational_poly(12), extra in 0usize..4) {
        let n = p.degree().unwrap_or(0) + extra;
        let b = p.to_bernstein(n).unwrap();
        prop_assert_eq!(RationalPoly::from_bernstein(&BernsteinCoeffs::new(b.beta)), p);
    }

    #[test]
    fn chain_rule(p in rational_poly(5), q in rational_poly(5), t in unit_rational()) {
        let lhs = p.compose(&q).unwrap().derivative().eval(&t);
        let rhs = p.derivative().eval(&q.eval(&t)) * q.derivative().eval(&t);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn iteration_is_a_semigroup(f in family(4), t in unit_rational(), a in 0usize..3, b in 0usize..3) {
        let h = module_by_cube(&f).h;
        let once = iterate_exact(&h, &t, a + b).unwrap();
        let twice = iterate_exact(&h, &iterate_exact(&h, &t, a).unwrap(), b).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn module_maps_unit_interval_to_itself(f in family(6), t in unit_rational()) {
        let ht = module_by_cube(&f).h.eval(&t);
        prop_assert!(ht > BigRational::zero() && ht < BigRational::one());
    }
}
