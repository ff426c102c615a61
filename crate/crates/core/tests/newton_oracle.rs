use std::collections::BTreeMap;

use slopelab_core::elementary::{
    el_monomial, operator_slopes, slopes_from_operator, trivial, DiffOperator, FormalModule,
    RegularPart,
};
use slopelab_core::exact_algebra::{Laurent, Rat};

fn x(k: i64, c: Rat) -> Laurent {
    Laurent::monomial(k, c)
}

fn xi(k: i64, c: i64) -> Laurent {
    x(k, Rat::from_integer(c))
}

/// `x^{m+1}∂ − (c·x^m − m)` annihilates `x^c·e^{x^{-m}}`.
fn rank_one(m: i64, c: Rat) -> Vec<(u32, Laurent)> {
    let a0 = x(m, -c).add(&xi(0, m));
    vec![(1, xi(m + 1, 1)), (0, a0)]
}

#[test]
fn rank_one_fixtures_match_elementary_modules() {
    for m in 0..=10i64 {
        for c in [
            Rat::zero(),
            Rat::new(1, 3),
            Rat::new(-5, 2),
            Rat::from_integer(2),
        ] {
            let ops = slopes_from_operator(&rank_one(m, c.clone())).unwrap();
            let module = if m == 0 {
                FormalModule::regular(RegularPart::new([c.clone()]))
            } else {
                el_monomial(1, m as u32, 1, 1).tensor(&FormalModule::regular(RegularPart::new([c])))
            };
            assert_eq!(ops, module.slopes(), "m = {m}");
        }
    }
}

fn op(terms: &[(u32, i64, i64)]) -> DiffOperator {
    DiffOperator::new(terms.iter().map(|&(i, k, c)| (i, xi(k, c))))
}

#[test]
fn golden_fixtures() {
    let half = Rat::new(1, 2);
    let cases: Vec<(DiffOperator, FormalModule)> = vec![
        // 4x³∂² + 6x²∂ − 1 annihilates e^{±2x^{-1/2}}
        (
            op(&[(2, 3, 4), (1, 2, 6), (0, 0, -1)]),
            el_monomial(2, 1, 2, 1),
        ),
        (
            op(&[(2, 4, 1), (1, 0, 1), (0, 0, 1)]),
            trivial(1).direct_sum(&el_monomial(1, 3, 1, 1)),
        ),
        (op(&[(2, 5, 1), (0, 0, 1)]), el_monomial(2, 3, 1, 1)),
        (op(&[(2, 3, 1), (0, 0, 1)]), el_monomial(2, 1, 1, 1)),
        (op(&[(3, 7, 1), (0, 0, 1)]), el_monomial(3, 4, 1, 1)),
        (
            op(&[(3, 6, 1), (1, 2, 1), (0, 0, 1)]),
            el_monomial(1, 1, 1, 3),
        ),
        (
            op(&[(2, 4, 1), (1, 1, 1), (0, 0, 1)]),
            trivial(1).direct_sum(&el_monomial(1, 2, 1, 1)),
        ),
        (op(&[(2, 2, 1), (1, 1, 1), (0, 0, -1)]), trivial(2)),
        (op(&[(3, 3, 1), (0, 0, 1)]), trivial(3)),
        (
            op(&[(1, 1, 2), (0, 0, -1)])
                .compose(&op(&[(1, 2, 1), (0, 0, 1)]))
                .compose(&op(&[(1, 3, 1), (0, 0, 2)])),
            trivial(1)
                .direct_sum(&el_monomial(1, 1, 1, 1))
                .direct_sum(&el_monomial(1, 2, 1, 1)),
        ),
    ];
    for (i, (operator, module)) in cases.iter().enumerate() {
        assert_eq!(
            operator_slopes(operator).unwrap(),
            module.slopes(),
            "fixture {i}"
        );
    }
    assert_eq!(
        operator_slopes(&cases[0].0).unwrap(),
        BTreeMap::from([(half, 2)])
    );
}
