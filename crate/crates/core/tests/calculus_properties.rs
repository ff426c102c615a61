mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::*;
use num_integer::Integer;
use proptest::prelude::*;
use slopelab_core::elementary::{
    nearby_slopes, psi_dim, trivial, twisted_psi_dim, witness_twist, ElementaryModule, FormalModule,
};
use slopelab_core::exact_algebra::{CycloRat, Rat};

/// All conjugate exponents of `el` written in `w` with `x = w^cover`, each
/// with its multiplicity (the regular rank).
fn conjugates(el: &ElementaryModule, cover: u64) -> Vec<(BTreeMap<i64, CycloRat>, u64)> {
    let p = el.ram() as u64;
    let step = (cover / p) as i64;
    let rank = el.reg().rank() as u64;
    (0..p as i64)
        .map(|j| {
            let mut out = BTreeMap::new();
            for (k, c) in el.phi().terms() {
                let z = CycloRat::root_of_unity(p, j * k).unwrap();
                out.insert(k * step, c * &z);
            }
            (out, rank)
        })
        .collect()
}

fn sum_is_zero(a: &BTreeMap<i64, CycloRat>, b: &BTreeMap<i64, CycloRat>) -> bool {
    let keys: BTreeSet<i64> = a.keys().chain(b.keys()).copied().collect();
    keys.into_iter().all(|k| {
        let x = a.get(&k).cloned().unwrap_or_else(CycloRat::zero);
        let y = b.get(&k).cloned().unwrap_or_else(CycloRat::zero);
        (&x + &y).is_zero()
    })
}

/// `dim ψ_{y^p}(M ⊗ ρ_p^+ N)` by brute force: pass to a cover where every
/// conjugate of both sides is a Laurent series, count cancelling pairs.
fn psi_oracle(m: &FormalModule, n: &FormalModule, p: u32) -> u64 {
    let p = p as u64;
    let mut l = 1u64;
    for el in m.factors().iter().chain(n.factors()) {
        l = l.lcm(&(el.ram() as u64));
    }
    // y = w^l, t = y^p = w^{pl}
    let ms: Vec<_> = m
        .factors()
        .iter()
        .flat_map(|el| conjugates(el, l))
        .collect();
    let ns: Vec<_> = n
        .factors()
        .iter()
        .flat_map(|el| conjugates(el, p * l))
        .collect();
    let mut count = 0;
    for (a, ra) in &ms {
        for (b, rb) in &ns {
            if sum_is_zero(a, b) {
                count += ra * rb;
            }
        }
    }
    // each rank-one term over the w-cover counts once; ψ along y^p multiplies by p
    p * count
}

fn scaled(s: &BTreeMap<Rat, u64>, f: &Rat) -> BTreeMap<Rat, u64> {
    s.iter().map(|(k, &v)| (k * f, v)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dual_preserves_slopes(m in module()) {
        prop_assert_eq!(m.dual().slopes(), m.slopes());
        prop_assert_eq!(m.dual().dual(), m);
    }

    #[test]
    fn dual_preserves_nearby_slopes(m in module(), p in 1u32..=4) {
        prop_assert_eq!(nearby_slopes(&m.dual(), p).unwrap(), nearby_slopes(&m, p).unwrap());
    }

    #[test]
    fn pullback_scales_slopes(m in module(), q in 1u32..=4) {
        let pulled = m.pullback(q);
        prop_assert_eq!(pulled.rank(), m.rank());
        prop_assert_eq!(pulled.slopes(), scaled(&m.slopes(), &Rat::from(q)));
    }

    #[test]
    fn pushforward_scales_slopes(m in module(), p in 1u32..=4) {
        let pushed = m.pushforward(p);
        prop_assert_eq!(pushed.rank(), m.rank() * p as u64);
        let expected: BTreeMap<Rat, u64> = m
            .slopes()
            .into_iter()
            .map(|(s, k)| (s / Rat::from(p), k * p as u64))
            .collect();
        prop_assert_eq!(pushed.slopes(), expected);
    }

    #[test]
    fn pushforward_nearby_inclusion(m in module(), p in 1u32..=4) {
        let lhs = nearby_slopes(&m.pushforward(p), 1).unwrap();
        let rhs = nearby_slopes(&m, p).unwrap();
        prop_assert!(lhs.is_subset(&rhs));
        // equality on the positive part
        let pos = |s: &BTreeSet<Rat>| s.iter().filter(|r| r.is_positive()).cloned().collect::<Vec<_>>();
        prop_assert_eq!(pos(&lhs), pos(&rhs));
    }

    #[test]
    fn tensor_laws(a in small_module(), b in small_module(), c in small_module()) {
        prop_assert_eq!(a.tensor(&b), b.tensor(&a));
        prop_assert_eq!(a.tensor(&b).rank(), a.rank() * b.rank());
        prop_assert_eq!(a.tensor(&trivial(1)), a.clone());
        prop_assert_eq!(a.tensor(&b).tensor(&c), a.tensor(&b.tensor(&c)));
    }

    #[test]
    fn psi_vanishes_on_positive_slopes(m in module(), k in 1u32..=5) {
        let irregular = FormalModule::from_factors(
            m.factors().iter().filter(|el| !el.is_regular()).cloned(),
        );
        prop_assert_eq!(psi_dim(&irregular, k), 0);
    }

    #[test]
    fn witnesses_are_nonzero(m in module(), p in 1u32..=4) {
        for (r, _) in m.slopes() {
            if r.is_positive() {
                let n = witness_twist(&m, &r, p).unwrap();
                prop_assert_eq!(n.max_slope().unwrap(), &r / Rat::from(p));
                prop_assert!(twisted_psi_dim(&m, &n, p) > 0);
            }
        }
    }

    #[test]
    fn psi_agrees_with_oracle(m in module(), n in small_module(), p in 1u32..=3) {
        prop_assert_eq!(twisted_psi_dim(&m, &n, p), psi_oracle(&m, &n, p));
    }

    #[test]
    fn witness_psi_agrees_with_oracle(m in module(), p in 1u32..=3) {
        for (r, _) in m.slopes() {
            if r.is_positive() {
                let n = witness_twist(&m, &r, p).unwrap();
                prop_assert_eq!(twisted_psi_dim(&m, &n, p), psi_oracle(&m, &n, p));
            }
        }
    }

    #[test]
    fn regularity_matches_nearby_slopes(m in module()) {
        let zero_only = (1..=4).all(|p| {
            nearby_slopes(&m, p).unwrap().iter().all(Rat::is_zero)
        });
        prop_assert_eq!(m.is_regular(), zero_only);
        prop_assert_eq!(m.is_regular(), m.max_slope() == Some(Rat::zero()));
    }
}

#[test]
fn oracle_reproduces_hand_examples() {
    use slopelab_core::elementary::el_monomial;
    let m = el_monomial(1, 3, 1, 1);
    assert_eq!(psi_oracle(&m, &el_monomial(1, 3, -1, 1), 1), 1);
    assert_eq!(psi_oracle(&trivial(2), &trivial(1), 3), 6);
    // El(2, -u^-2) pulled back along y^2 contains E^{-y^-2} once per branch
    let m = el_monomial(1, 2, 1, 1);
    assert_eq!(psi_oracle(&m, &el_monomial(2, 2, -1, 1), 2), 2 * 2);
    assert_eq!(psi_oracle(&m, &el_monomial(1, 2, 1, 1), 1), 0);
    assert_eq!(rat(1, 2) + rat(1, 2), Rat::one());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn regular_rank_shortcut_matches_full_tensor(a in module(), b in module()) {
        prop_assert_eq!(a.tensor_regular_rank(&b), a.tensor(&b).regular_rank());
    }

    #[test]
    fn regular_rank_shortcut_on_cancelling_pairs(a in module(), p in 1u32..=3) {
        let b = a.dual().pullback(p).pushforward(p);
        prop_assert_eq!(a.tensor_regular_rank(&b), a.tensor(&b).regular_rank());
        prop_assert!(a.tensor_regular_rank(&a.dual()) > 0);
    }
}
