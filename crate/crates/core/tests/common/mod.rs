#![allow(dead_code)]

use proptest::prelude::*;
use slopelab_core::elementary::{ElementaryModule, FormalModule, RegularPart};
use slopelab_core::exact_algebra::{CycloRat, Rat};

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

/// Small rationals with denominators up to 4.
pub fn small_rat() -> impl Strategy<Value = Rat> {
    (-4i64..=4, 1i64..=4).prop_map(|(n, d)| Rat::new(n, d))
}

pub fn nonzero_rat() -> impl Strategy<Value = Rat> {
    small_rat().prop_filter("nonzero", |r| !r.is_zero())
}

/// `r·ζ_n^k` with `n ≤ 6`.
pub fn cyclo_coeff() -> impl Strategy<Value = CycloRat> {
    (nonzero_rat(), 1u64..=6, 0i64..6)
        .prop_map(|(r, n, k)| CycloRat::root_of_unity(n, k).unwrap().scale(&r))
}

/// Sums of scaled roots of unity of orders dividing 24 or 10.
pub fn cyclo_element() -> impl Strategy<Value = CycloRat> {
    let orders = prop::sample::select(vec![1u64, 2, 3, 4, 5, 6, 8, 10, 12, 24]);
    prop::collection::vec((small_rat(), orders, 0i64..24), 1..4).prop_map(|parts| {
        parts.into_iter().fold(CycloRat::zero(), |acc, (r, n, k)| {
            &acc + &CycloRat::root_of_unity(n, k).unwrap().scale(&r)
        })
    })
}

pub fn regular_part() -> impl Strategy<Value = RegularPart> {
    prop::collection::vec((0i64..6, 1i64..=6), 1..=2)
        .prop_map(|v| RegularPart::new(v.into_iter().map(|(n, d)| Rat::new(n, d))))
}

pub fn elementary(max_ram: u32, max_pole: i64) -> impl Strategy<Value = ElementaryModule> {
    (
        1..=max_ram,
        prop::collection::btree_map(1..=max_pole, cyclo_coeff(), 0..=2),
        regular_part(),
    )
        .prop_map(|(ram, terms, reg)| {
            ElementaryModule::from_terms(ram, terms.into_iter().map(|(k, c)| (-k, c)), reg).unwrap()
        })
}

pub fn module() -> impl Strategy<Value = FormalModule> {
    prop::collection::vec(elementary(4, 6), 1..=3).prop_map(FormalModule::from_factors)
}

/// Modules whose factors all have rational leading data; cheaper for nested products.
pub fn small_module() -> impl Strategy<Value = FormalModule> {
    prop::collection::vec(elementary(3, 4), 1..=2).prop_map(FormalModule::from_factors)
}
