//! Seeded sweeps over every invariant of the calculus, the model engine and
//! the blow-up simulator.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use slopelab_core::blowup::{verify_inequality, ComponentKind, Mode};
use slopelab_core::elementary::{
    certify_nearby_slopes, nearby_slopes, psi_dim, slopes_from_operator, trivial, twisted_psi_dim,
    witness_twist, ElementaryModule, ExhaustionBounds, FormalModule, RegularPart,
};
use slopelab_core::exact_algebra::{CycloRat, Laurent, MultiIndex, RamifiedExponent, Rat};
use slopelab_core::monomial::{
    curve_exponent, curve_restriction, highest_generic_slopes, lemma_vanishing, mediant_domain,
    nearby_slope_bound, vanishing_threshold, GoodModel, ModelFactor, MonomialFunction, Verdict,
};

use crate::corpus::{self, ModuleBounds};
use crate::expr::{eval, parse_module};

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub name: &'static str,
    pub cases: usize,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(name: &'static str, cases: usize) -> Self {
        SuiteReport {
            name,
            cases,
            checks: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub cases: usize,
    pub suites: Vec<SuiteReport>,
}

impl SelftestReport {
    pub fn ok(&self) -> bool {
        self.suites.iter().all(SuiteReport::ok)
    }
}

/// Runs every suite with `cases` random cases each.
pub fn run(cases: usize, seed: u64) -> SelftestReport {
    let suites = vec![
        algebra(cases, seed),
        calculus(cases, seed.wrapping_add(1)),
        exhaustion(cases.div_ceil(4), seed.wrapping_add(2)),
        newton(),
        models(cases, seed.wrapping_add(3)),
        blowups(cases, seed.wrapping_add(4)),
        expressions(cases, seed.wrapping_add(5)),
    ];
    SelftestReport {
        seed,
        cases,
        suites,
    }
}

/// A sum of up to three scaled roots of unity of orders dividing 24 or 10.
fn cyclo(rng: &mut impl Rng) -> CycloRat {
    (0..rng.gen_range(1..=3)).fold(CycloRat::zero(), |acc, _| {
        let n = *[1u64, 2, 3, 4, 5, 6, 8, 10, 12, 24].choose(rng).unwrap();
        let r = Rat::new(rng.gen_range(-3..=3), rng.gen_range(1..=3));
        &acc + &CycloRat::root_of_unity(n, rng.gen_range(0..24))
            .unwrap()
            .scale(&r)
    })
}

fn exponent(rng: &mut impl Rng) -> RamifiedExponent {
    let ram = rng.gen_range(1..=4);
    let terms: Vec<(i64, CycloRat)> = (0..rng.gen_range(0..=3))
        .map(|_| (-rng.gen_range(1..=6), cyclo(rng)))
        .collect();
    RamifiedExponent::new(ram, terms)
}

pub fn algebra(cases: usize, seed: u64) -> SuiteReport {
    let mut rng = corpus::rng(seed);
    let mut r = SuiteReport::new("exact_algebra", cases);
    let one = CycloRat::one();
    for _ in 0..cases {
        let (a, b, c) = (cyclo(&mut rng), cyclo(&mut rng), cyclo(&mut rng));
        r.check(&(&a * &b) * &c == &a * &(&b * &c), || {
            format!("associativity: {a}, {b}, {c}")
        });
        r.check(&(&a + &b) + &c == &a + &(&b + &c), || {
            format!("additive associativity: {a}, {b}, {c}")
        });
        r.check(&(&a + &b) * &c == &(&a * &c) + &(&b * &c), || {
            format!("distributivity: {a}, {b}, {c}")
        });
        r.check(&a * &b == &b * &a, || format!("commutativity: {a}, {b}"));
        if !a.is_zero() {
            r.check(a.inv().is_some_and(|i| (&a * &i).is_one()), || {
                format!("inverse: {a}")
            });
        }
        let phi = exponent(&mut rng);
        let (s, t) = (rng.gen_range(1..=4u32), rng.gen_range(1..=4u32));
        r.check(phi.substitute(&one, 1) == phi, || {
            format!("substitute identity: {phi}")
        });
        r.check(
            phi.substitute(&one, s).substitute(&one, t) == phi.substitute(&one, s * t),
            || format!("substitute scales {s}, {t}: {phi}"),
        );
        let zeta = CycloRat::root_of_unity(rng.gen_range(1..=6), rng.gen_range(0..6)).unwrap();
        let out = phi.substitute(&zeta, s);
        r.check(out.slope() == phi.slope() * Rat::from(s), || {
            format!("substitute slope {s}: {phi}")
        });
        if num_gcd(s, phi.ram()) == 1 {
            r.check(out.ord() == phi.ord() * s as u64, || {
                format!("substitute ord {s}: {phi}")
            });
        }
    }
    r
}

fn num_gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

fn scaled(s: &BTreeMap<Rat, u64>, by: &Rat, mult: u64) -> BTreeMap<Rat, u64> {
    s.iter().map(|(k, &v)| (k * by, v * mult)).collect()
}

pub fn calculus(cases: usize, seed: u64) -> SuiteReport {
    let mut rng = corpus::rng(seed);
    let mut r = SuiteReport::new("elementary_calc", cases);
    let b = ModuleBounds::default();
    let small = ModuleBounds {
        max_ram: 3,
        max_pole: 4,
        max_rank: 2,
        max_factors: 2,
    };
    for _ in 0..cases {
        let m = corpus::module(&mut rng, &b);
        let dual = m.dual();
        r.check(dual.slopes() == m.slopes(), || format!("dual slopes: {m}"));
        r.check(dual.dual() == m, || format!("dual involution: {m}"));
        for p in 1..=6 {
            let n = nearby_slopes(&m, p);
            r.check(n.is_ok(), || format!("witness failure along x^{p}: {m}"));
            let Ok(n) = n else { continue };
            r.check(nearby_slopes(&dual, p).ok().as_ref() == Some(&n), || {
                format!("dual nearby slopes along x^{p}: {m}")
            });
            let pushed = nearby_slopes(&m.pushforward(p), 1);
            r.check(pushed.is_ok_and(|s| s.is_subset(&n)), || {
                format!("pushforward inclusion along x^{p}: {m}")
            });
            r.check(m.is_regular() == n.iter().all(Rat::is_zero), || {
                format!("regularity along x^{p}: {m}")
            });
            for (s, _) in m.slopes() {
                if s.is_positive() {
                    let ok = witness_twist(&m, &s, p).is_ok_and(|w| twisted_psi_dim(&m, &w, p) > 0);
                    r.check(ok, || format!("witness of slope {s} along x^{p}: {m}"));
                }
            }
        }
        let q = rng.gen_range(1..=4u32);
        let pulled = m.pullback(q);
        r.check(
            pulled.rank() == m.rank() && pulled.slopes() == scaled(&m.slopes(), &Rat::from(q), 1),
            || format!("pullback {q}: {m}"),
        );
        let pushed = m.pushforward(q);
        let inv = Rat::new(1, q as i64);
        r.check(
            pushed.rank() == m.rank() * q as u64
                && pushed.slopes() == scaled(&m.slopes(), &inv, q as u64),
            || format!("pushforward {q}: {m}"),
        );
        r.check(
            m.is_regular() == (m.max_slope() == Some(Rat::zero())),
            || format!("regular iff max slope 0: {m}"),
        );
        let irregular =
            FormalModule::from_factors(m.factors().iter().filter(|el| !el.is_regular()).cloned());
        r.check(psi_dim(&irregular, q) == 0, || {
            format!("ψ of positive slopes: {m}")
        });
        let (x, y, z) = (
            corpus::module(&mut rng, &small),
            corpus::module(&mut rng, &small),
            corpus::module(&mut rng, &small),
        );
        let xy = x.tensor(&y);
        r.check(xy == y.tensor(&x), || format!("tensor commutes: {x}; {y}"));
        r.check(xy.rank() == x.rank() * y.rank(), || {
            format!("tensor rank: {x}; {y}")
        });
        r.check(x.tensor(&trivial(1)) == x, || format!("tensor unit: {x}"));
        r.check(xy.tensor(&z) == x.tensor(&y.tensor(&z)), || {
            format!("tensor associates: {x}; {y}; {z}")
        });
    }
    r
}

pub fn exhaustion(cases: usize, seed: u64) -> SuiteReport {
    let mut rng = corpus::rng(seed);
    let mut r = SuiteReport::new("exhaustion", cases);
    let b = ModuleBounds::default();
    for _ in 0..cases {
        let m = corpus::module(&mut rng, &b);
        let p = rng.gen_range(1..=6);
        let cert = certify_nearby_slopes(&m, p, ExhaustionBounds::default());
        r.check(cert.is_ok(), || {
            format!("exhaustion along x^{p}: {m}: {:?}", cert.as_ref().err())
        });
    }
    r
}

/// `x^{m+1}∂ − (c·x^m − m)` annihilates `x^c·e^{x^{-m}}`.
pub fn rank_one_operator(m: i64, c: &Rat) -> Vec<(u32, Laurent)> {
    let a0 = Laurent::monomial(m, -c).add(&Laurent::monomial(0, Rat::from(m)));
    vec![(1, Laurent::monomial(m + 1, Rat::one())), (0, a0)]
}

pub fn newton() -> SuiteReport {
    let cs = [
        Rat::zero(),
        Rat::new(1, 3),
        Rat::new(-5, 2),
        Rat::from(2u32),
    ];
    let mut r = SuiteReport::new("newton", 11 * cs.len());
    for m in 0..=10i64 {
        for c in &cs {
            let reg = RegularPart::new([c.clone()]);
            let module = if m == 0 {
                FormalModule::regular(reg)
            } else {
                let el = ElementaryModule::from_terms(1, [(-m, CycloRat::one())], reg).unwrap();
                FormalModule::elementary(el)
            };
            let ops = slopes_from_operator(&rank_one_operator(m, c));
            r.check(ops.is_ok_and(|s| s == module.slopes()), || {
                format!("rank-one fixture m = {m}, c = {c}")
            });
        }
    }
    r
}

fn monomials(dim: usize, max: u32) -> Vec<MultiIndex> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u32>| {
                (0..=max).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(MultiIndex::new).collect()
}

pub fn models(cases: usize, seed: u64) -> SuiteReport {
    let mut rng = corpus::rng(seed);
    let mut r = SuiteReport::new("monomial_models", cases);
    for _ in 0..cases {
        let m = corpus::good_model(&mut rng, 3, 6);
        let n = m.dim();
        let bound = nearby_slope_bound(&m);
        let curves: Vec<MultiIndex> = monomials(n, 2)
            .into_iter()
            .map(|c| MultiIndex::new(c.entries().iter().map(|x| x + 1).collect()))
            .collect();
        let a = MultiIndex::new((0..n).map(|_| rng.gen_range(0..=3)).collect());
        let Ok(f) = MonomialFunction::new(a) else {
            continue;
        };
        let Ok(t) = vanishing_threshold(&m, &f) else {
            r.check(false, || format!("threshold failed: {f}"));
            continue;
        };
        if t.applicable {
            r.check(t.value <= bound, || {
                format!("threshold {} > bound {bound} for {f}", t.value)
            });
        }
        let dom = mediant_domain(&m, &f);
        for c in &curves {
            let k = curve_exponent(&f, c).unwrap();
            if !dom.factors().is_empty() {
                let restricted = curve_restriction(&dom, c).unwrap();
                let ok =
                    nearby_slopes(&restricted, k).is_ok_and(|s| s.iter().all(|x| x <= &t.value));
                r.check(ok, || {
                    format!("restriction along {c} exceeds threshold for {f}")
                });
            }
            for fac in m.factors() {
                if let Verdict::Vanishes(_) = lemma_vanishing(&fac.pole, None, &f) {
                    let single = GoodModel::new(n, vec![fac.clone()]).unwrap();
                    let res = curve_restriction(&single, c).unwrap();
                    r.check(psi_dim(&res, k) == 0, || {
                        format!("lemma verdict contradicted along {c} for {f}")
                    });
                }
            }
        }
        let before = highest_generic_slopes(&m).r;
        let extra = corpus::good_model(&mut rng, n, 6);
        if extra.dim() == n {
            let after =
                highest_generic_slopes(&m.with_factor(extra.factors()[0].clone()).unwrap()).r;
            r.check(before.iter().zip(&after).all(|(x, y)| x <= y), || {
                "generic slopes decreased after adding a factor".into()
            });
        }
        let reg = GoodModel::new(
            n,
            m.factors()
                .iter()
                .map(|fac| ModelFactor {
                    pole: MultiIndex::zeros(n),
                    ..fac.clone()
                })
                .collect(),
        )
        .unwrap();
        r.check(
            vanishing_threshold(&reg, &f).is_ok_and(|t| t.value.is_zero()),
            || format!("regular model threshold for {f}"),
        );
    }
    r
}

pub fn blowups(cases: usize, seed: u64) -> SuiteReport {
    let mut rng = corpus::rng(seed);
    let mut r = SuiteReport::new("blowup_sim", cases);
    for i in 0..cases {
        let mode = if i % 2 == 0 {
            Mode::Toric
        } else {
            Mode::Abstract
        };
        let mut state = corpus::blowup_start(&mut rng, 4, mode);
        let len = rng.gen_range(1..=6);
        for _ in 0..len {
            let Some(step) = corpus::blowup_step(&mut rng, &state) else {
                break;
            };
            match state.blow_up(&step) {
                Ok(next) => state = next,
                Err(e) => {
                    r.check(false, || format!("admissible step rejected: {e}"));
                    break;
                }
            }
            let report = verify_inequality(&state);
            r.check(report.ok(), || {
                format!("inequality: {:?}", report.violations)
            });
            let a = state.a();
            let rr = state.r();
            for comp in state.components() {
                if let Some(ray) = &comp.ray {
                    let vz: u64 = ray.iter().zip(a).map(|(x, &y)| x * y as u64).sum();
                    let vs: Rat = ray.iter().zip(rr).map(|(&x, y)| Rat::from(x) * y).sum();
                    r.check(vz == comp.vz && vs == comp.vs, || {
                        format!("conservation at {}", comp.id)
                    });
                }
                let exceptional_id = comp.id.starts_with('E');
                let exceptional_kind = matches!(comp.kind, ComponentKind::Exceptional { .. });
                r.check(exceptional_id == exceptional_kind, || {
                    format!("component kinds mixed at {}", comp.id)
                });
            }
        }
    }
    r
}

pub fn expressions(cases: usize, seed: u64) -> SuiteReport {
    let mut rng = corpus::rng(seed);
    let mut r = SuiteReport::new("expressions", cases);
    for _ in 0..cases {
        let e = corpus::module_expr(&mut rng, 3);
        let printed = e.to_string();
        let Ok(parsed) = parse_module(&printed) else {
            r.check(false, || {
                format!("printed expression does not parse: {printed}")
            });
            continue;
        };
        r.check(parsed == e, || {
            format!("parse∘print changed the tree: {printed}")
        });
        r.check(parsed.to_string() == printed, || {
            format!("print∘parse∘print: {printed}")
        });
        match eval(&parsed) {
            Ok(m) => {
                let text = m.to_string();
                let back = parse_module(&text).ok().and_then(|x| eval(&x).ok());
                r.check(back.as_ref() == Some(&m), || {
                    format!("canonical form does not re-parse: {text}")
                });
            }
            Err(err) => r.check(false, || format!("{printed}: {err}")),
        }
    }
    r
}
