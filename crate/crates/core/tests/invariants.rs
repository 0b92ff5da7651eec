use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};
use proptest::prelude::*;

use preper_core::bounds::{compute_bounds, BoundContext};
use preper_core::projective::{affine, infinity, log_distance, reduce_point};
use preper_core::ratmap::{
    apply, bareiss_determinant, has_good_reduction, reduce_map, sylvester_matrix,
};
use preper_core::sunit::{enumerate_s_units, s_unit_generators};
use preper_core::{
    FactorBudget, FieldOps, FpPoly, FpPolyRing, FractionField, GlobalRing, Integers, LogDistance,
    Place, PlaceSet, ProjPoint, RationalMap,
};

const SMALL_PRIMES: [i64; 6] = [2, 3, 5, 7, 11, 13];

fn coeffs(deg: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-9i64..=9, deg + 1)
}

fn rational_map() -> impl Strategy<Value = RationalMap<BigInt>> {
    (2usize..=3)
        .prop_flat_map(|d| (coeffs(d), coeffs(d)))
        .prop_filter_map("degenerate", |(f, g)| {
            let big = |v: Vec<i64>| v.into_iter().map(BigInt::from).collect();
            RationalMap::new(&Integers, big(f), big(g)).ok()
        })
}

fn rational_point() -> impl Strategy<Value = ProjPoint<BigInt>> {
    (-200i64..=200, 0i64..=200).prop_map(|(x, y)| {
        let z = Integers;
        if y == 0 {
            infinity(&z)
        } else {
            affine(&z, &FractionField::new(z).make(x.into(), y.into()))
        }
    })
}

fn ff_poly(p: u64, max_deg: usize) -> impl Strategy<Value = FpPoly> {
    prop::collection::vec(0..p, 0..=max_deg + 1).prop_map(FpPoly::from_coeffs)
}

fn place_degree(place: &Place<FpPoly>) -> i64 {
    match place {
        Place::Finite(pi) => pi.degree().unwrap() as i64,
        Place::Infinite => 1,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn resultant_scales_by_power_of_the_scalar(f in coeffs(3), g in coeffs(3), lambda in -5i64..=5) {
        let z = Integers;
        let big = |v: &[i64], k: i64| v.iter().map(|&c| BigInt::from(c * k)).collect::<Vec<_>>();
        let base = bareiss_determinant(&z, sylvester_matrix(&big(&f, 1), &big(&g, 1), BigInt::from(0)));
        let scaled = bareiss_determinant(&z, sylvester_matrix(&big(&f, lambda), &big(&g, lambda), BigInt::from(0)));
        prop_assert_eq!(scaled, base * BigInt::from(lambda).pow(6));
    }

    #[test]
    fn distance_is_symmetric_and_ultrametric(a in rational_point(), b in rational_point(), c in rational_point(), i in 0usize..6) {
        let z = Integers;
        let place = Place::Finite(BigInt::from(SMALL_PRIMES[i]));
        let d = |p: &ProjPoint<BigInt>, q: &ProjPoint<BigInt>| log_distance(&z, p, q, &place).unwrap();
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert_eq!(d(&a, &a), LogDistance::Infinite);
        prop_assert!(d(&a, &c) >= d(&a, &b).min(d(&b, &c)));
    }

    #[test]
    fn good_reduction_never_expands(map in rational_map(), a in rational_point(), b in rational_point(), i in 0usize..6) {
        let z = Integers;
        let place = Place::Finite(BigInt::from(SMALL_PRIMES[i]));
        prop_assume!(has_good_reduction(&z, &map, &place).unwrap());
        let before = log_distance(&z, &a, &b, &place).unwrap();
        let after = log_distance(&z, &apply(&z, &map, &a), &apply(&z, &map, &b), &place).unwrap();
        prop_assert!(after >= before);
    }

    #[test]
    fn reduction_commutes_with_the_map(map in rational_map(), a in rational_point(), i in 0usize..6) {
        let z = Integers;
        let place = Place::Finite(BigInt::from(SMALL_PRIMES[i]));
        prop_assume!(has_good_reduction(&z, &map, &place).unwrap());
        let red = reduce_map(&z, &map, &place).unwrap();
        let down = |p: &ProjPoint<BigInt>| reduce_point(&z, p, &place, &red.field).unwrap();
        prop_assert_eq!(down(&apply(&z, &map, &a)), red.apply(&down(&a)));
    }

    #[test]
    fn reduction_commutes_over_function_fields(
        f in prop::collection::vec(ff_poly(3, 2), 3),
        g in prop::collection::vec(ff_poly(3, 2), 3),
        x in ff_poly(3, 3),
        y in ff_poly(3, 3),
        which in 0usize..8,
    ) {
        let ring = FpPolyRing::new(3).unwrap();
        let map = RationalMap::new(&ring, f, g);
        prop_assume!(map.is_ok() && !(x.is_zero() && y.is_zero()));
        let map = map.unwrap();
        let place = ring.places_by_size().nth(which).unwrap();
        prop_assume!(has_good_reduction(&ring, &map, &place).unwrap());
        let k = FractionField::new(ring);
        let pt = if y.is_zero() { infinity(&ring) } else { affine(&ring, &k.make(x, y)) };
        let red = reduce_map(&ring, &map, &place).unwrap();
        let down = |p: &ProjPoint<FpPoly>| reduce_point(&ring, p, &place, &red.field).unwrap();
        prop_assert_eq!(down(&apply(&ring, &map, &pt)), red.apply(&down(&pt)));
    }

    #[test]
    fn valuations_are_additive_and_ultrametric(a in 1i64..5000, b in 1i64..5000, c in -5000i64..5000, d in 1i64..5000, i in 0usize..6) {
        prop_assume!(c != 0);
        let k = FractionField::new(Integers);
        let place = Place::Finite(BigInt::from(SMALL_PRIMES[i]));
        let x = k.make(a.into(), b.into());
        let y = k.make(c.into(), d.into());
        let v = |e| k.valuation(&e, &place).unwrap();
        prop_assert_eq!(v(k.mul(&x, &y)), v(x.clone()) + v(y.clone()));
        let sum = k.add(&x, &y);
        if !k.is_zero(&sum) {
            prop_assert!(v(sum) >= v(x).min(v(y)));
        }
    }

    #[test]
    fn product_formula_over_q(a in -100_000i64..100_000, b in 1i64..100_000) {
        prop_assume!(a != 0);
        let k = FractionField::new(Integers);
        let x = k.make(a.into(), b.into());
        let (mut up, mut down) = (BigInt::one(), BigInt::one());
        for place in k.support(&x, &FactorBudget::default()).unwrap() {
            let p = place.finite().unwrap().clone();
            let v = k.valuation(&x, &place).unwrap();
            if v > 0 { up *= p.pow(v as u32) } else { down *= p.pow((-v) as u32) }
        }
        // the archimedean absolute value balances the rest
        prop_assert_eq!(up, x.num.abs());
        prop_assert_eq!(down, x.den);
    }

    #[test]
    fn product_formula_over_fp_t(num in ff_poly(5, 5), den in ff_poly(5, 5)) {
        prop_assume!(!num.is_zero() && !den.is_zero());
        let ring = FpPolyRing::new(5).unwrap();
        let k = FractionField::new(ring);
        let x = k.make(num, den);
        let total: i64 = k
            .support(&x, &FactorBudget::default())
            .unwrap()
            .iter()
            .map(|pl| place_degree(pl) * k.valuation(&x, pl).unwrap())
            .sum();
        prop_assert_eq!(total, 0);
    }

    #[test]
    fn positive_characteristic_bounds_grow(p in prop::sample::select(vec![2u64, 3, 5, 7]), d in 1u32..=3, s in 1u64..=4) {
        let at = |d, s| compute_bounds(&BoundContext::new(p, d, s, None).unwrap());
        let (b, up_s, up_d) = (at(d, s), at(d, s + 1), at(d + 1, s));
        for next in [&up_s, &up_d] {
            prop_assert!(next.eta >= b.eta);
            prop_assert!(next.cycle_bound >= b.cycle_bound);
            prop_assert!(next.i_bound >= b.i_bound);
        }
        prop_assert!(up_s.r_bound >= b.r_bound);
        prop_assert!(b.cycle_bound < b.eta);
    }

    #[test]
    fn enumerated_s_units_are_s_units(extra in prop::sample::subsequence(vec![2i64, 3, 5, 7], 0..=3), cap in 0u32..=3) {
        let z = Integers;
        let places = std::iter::once(Place::Infinite).chain(extra.iter().map(|&p| Place::Finite(BigInt::from(p))));
        let s = PlaceSet::new(&z, places).unwrap();
        let group = s_unit_generators(&s).unwrap();
        let units = enumerate_s_units(&group, cap, 1 << 20).unwrap();
        prop_assert_eq!(BigUint::from(units.len()), group.enumeration_size(cap));
        let k = FractionField::new(z);
        let mut distinct = std::collections::HashSet::new();
        for u in &units {
            prop_assert!(k.is_s_unit(u, &s).unwrap());
            prop_assert!(distinct.insert(u.clone()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn characteristic_zero_bounds_grow(d in 1u32..=2, s in 1u64..=3) {
        let at = |d, s| compute_bounds(&BoundContext::new(0, d, s, None).unwrap());
        let (b, up_s, up_d) = (at(d, s), at(d, s + 1), at(d + 1, s));
        for next in [&up_s, &up_d] {
            prop_assert!(next.eta >= b.eta);
            prop_assert!(next.cycle_bound >= b.cycle_bound);
            prop_assert!(next.i_bound >= b.i_bound);
        }
        prop_assert!(b.r_bound.is_none());
    }
}
