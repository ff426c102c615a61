mod common;

use common::*;
use proptest::prelude::*;
use slopelab_core::exact_algebra::{CycloRat, RamifiedExponent, Rat};

fn exponent() -> impl Strategy<Value = RamifiedExponent> {
    (
        1u32..=4,
        prop::collection::btree_map(1i64..=6, cyclo_coeff(), 0..=3),
    )
        .prop_map(|(ram, terms)| {
            RamifiedExponent::new(ram, terms.into_iter().map(|(k, c)| (-k, c)))
        })
}

fn root() -> impl Strategy<Value = CycloRat> {
    (1u64..=6, 0i64..6).prop_map(|(n, k)| CycloRat::root_of_unity(n, k).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn rational_field_laws(a in small_rat(), b in small_rat(), c in small_rat()) {
        prop_assert_eq!((&a + &b) * &c, &a * &c + &b * &c);
        prop_assert_eq!(&a - &a, Rat::zero());
        if !a.is_zero() {
            prop_assert_eq!(&a * a.recip().unwrap(), Rat::one());
        }
        let s = a.to_fraction_string();
        prop_assert_eq!(s.parse::<Rat>().unwrap(), a);
    }

    #[test]
    fn cyclotomic_field_laws(a in cyclo_element(), b in cyclo_element(), c in cyclo_element()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn embedding_is_injective(a in cyclo_element(), b in cyclo_element()) {
        let target = 24 * 5 * 7;
        let (ea, eb) = (a.embed(target), b.embed(target));
        if let (Ok(ea), Ok(eb)) = (ea, eb) {
            prop_assert_eq!(ea == eb, a == b);
        }
    }

    #[test]
    fn substitute_identity(phi in exponent()) {
        prop_assert_eq!(phi.substitute(&CycloRat::one(), 1), phi);
    }

    #[test]
    fn substitute_multiplicative_in_scale(phi in exponent(), s in 1u32..=4, t in 1u32..=4) {
        let one = CycloRat::one();
        prop_assert_eq!(
            phi.substitute(&one, s).substitute(&one, t),
            phi.substitute(&one, s * t)
        );
    }

    #[test]
    fn substitute_scales_slope(phi in exponent(), z in root(), s in 1u32..=4) {
        let out = phi.substitute(&z, s);
        prop_assert_eq!(out.slope(), phi.slope() * Rat::from(s));
        if num_integer::Integer::gcd(&s, &phi.ram()) == 1 {
            prop_assert_eq!(out.ord(), phi.ord() * s as u64);
        }
    }

    #[test]
    fn galois_canonical_on_orbits(phi in exponent(), j in 0i64..6) {
        prop_assert_eq!(phi.rotate(j).galois_canonical(), phi.galois_canonical());
    }
}

#[test]
fn cyclo_mul_examples() {
    let z2 = CycloRat::root_of_unity(2, 1).unwrap();
    assert!((&z2 * &z2).is_one());
    let z4 = CycloRat::root_of_unity(4, 1).unwrap();
    assert_eq!(&z4 * &z4, CycloRat::from_integer(-1));
    let z3 = CycloRat::root_of_unity(3, 1).unwrap();
    let one = CycloRat::one();
    assert!((&(&one + &z3) * &(&one + &(&z3 * &z3))).is_one());
}

#[test]
fn substitute_examples() {
    let one = CycloRat::one();
    let u = |k: i64, c: i64| RamifiedExponent::monomial(1, k, CycloRat::from_integer(c));
    assert_eq!(u(-3, 1).substitute(&one, 2), u(-6, 1));
    assert_eq!(
        u(-1, 1).substitute(&CycloRat::from_integer(-1), 1),
        u(-1, -1)
    );
    let phi = RamifiedExponent::new(1, [(-2, one.clone()), (-1, one.clone())]);
    let z4 = CycloRat::root_of_unity(4, 1).unwrap();
    let expected = RamifiedExponent::new(1, [(-2, CycloRat::from_integer(-1)), (-1, -&z4)]);
    assert_eq!(phi.substitute(&z4, 1), expected);
}
