//! Acceptance sweeps, one pass/fail line per criterion.
//!
//! Every check compares the library against an oracle computed here from
//! first principles: conjugate expansions for ψ, slope arithmetic for nearby
//! slopes, dot products for curve restrictions and the blow-up recursion.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::Instant;

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::Rng;
use slopelab::app;
use slopelab::corpus::{self, DEFAULT_SEED};
use slopelab::expr::{eval, parse_module};
use slopelab_core::blowup::{verify_inequality, BlowupState, BlowupStep, ComponentKind, Mode};
use slopelab_core::elementary::{
    certify_nearby_slopes, el_monomial, nearby_slopes, operator_slopes, slopes_from_operator,
    trivial, twisted_psi_dim, witness_twist, DiffOperator, ElementaryModule, ExhaustionBounds,
    FormalModule, RegularPart,
};
use slopelab_core::exact_algebra::{CycloRat, Laurent, MultiIndex, Rat};
use slopelab_core::monomial::{
    curve_exponent, curve_restriction, mediant_domain, nearby_slope_bound, vanishing_threshold,
    MonomialFunction,
};

const CORPUS: usize = 500;

struct Outcome {
    failures: Vec<String>,
    note: String,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            failures: Vec::new(),
            note: String::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok && self.failures.len() < 20 {
            self.failures.push(what());
        } else if !ok {
            self.failures.push(String::new());
        }
    }
}

// ---------------------------------------------------------------- oracles

type Series = BTreeMap<i64, CycloRat>;

/// The conjugates `φ(ζ^j u)` of a factor written in `w` with `x = w^cover`.
fn conjugates(el: &ElementaryModule, cover: u64) -> Vec<(Series, u64)> {
    let p = el.ram() as u64;
    let step = (cover / p) as i64;
    let rank = el.reg().rank() as u64;
    (0..p as i64)
        .map(|j| {
            let s = el
                .phi()
                .terms()
                .map(|(k, c)| (k * step, c * &CycloRat::root_of_unity(p, j * k).unwrap()))
                .collect();
            (s, rank)
        })
        .collect()
}

fn cancels(a: &Series, b: &Series) -> bool {
    a.len() == b.len()
        && a.iter()
            .all(|(k, x)| b.get(k).is_some_and(|y| (x + y).is_zero()))
}

/// `dim ψ_{y^p}(M ⊗ ρ_p^+ N)` by expanding every conjugate over a common
/// cover and counting cancelling pairs.
fn psi_oracle(m: &FormalModule, n: &FormalModule, p: u32) -> u64 {
    let p = p as u64;
    let l = m
        .factors()
        .iter()
        .chain(n.factors())
        .fold(1u64, |acc, el| acc.lcm(&(el.ram() as u64)));
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
            if cancels(a, b) {
                count += ra * rb;
            }
        }
    }
    p * count
}

/// Nearby slopes predicted from the slope multiset: `r/p` for every positive
/// slope `r`, and `0` when there is a regular part.
fn predicted(m: &FormalModule, p: u32) -> BTreeSet<Rat> {
    let mut out = BTreeSet::new();
    for el in m.factors() {
        let ord = el.phi().terms().map(|(k, _)| -k).max().unwrap_or(0);
        out.insert(Rat::new(ord, el.ram() as i64 * p as i64));
    }
    out
}

// ---------------------------------------------------------------- criteria

fn criterion_1(corpus: &[FormalModule]) -> Outcome {
    let mut o = Outcome::new();
    let mut witnesses = 0;
    for (i, m) in corpus.iter().enumerate() {
        let oracle_p = (i % 6) as u32 + 1;
        for p in 1..=6u32 {
            for r in m.slopes().into_keys().filter(Rat::is_positive) {
                let Ok(n) = witness_twist(m, &r, p) else {
                    o.check(false, || format!("no witness for slope {r} of {m}"));
                    continue;
                };
                witnesses += 1;
                o.check(n.max_slope() == Some(&r / Rat::from(p)), || {
                    format!("witness {n} has the wrong slope for {r}/{p}")
                });
                o.check(twisted_psi_dim(m, &n, p) > 0, || {
                    format!("ψ = 0 for {m} ⊗ {n}, p = {p}")
                });
                if p == oracle_p {
                    let d = psi_oracle(m, &n, p);
                    o.check(d > 0 && d == twisted_psi_dim(m, &n, p), || {
                        format!("oracle ψ = {d} for {m} ⊗ {n}, p = {p}")
                    });
                }
            }
        }
    }
    o.note = format!("{witnesses} witnesses over p <= 6");
    o
}

fn criterion_2(corpus: &[FormalModule], seed: u64) -> Outcome {
    let mut o = Outcome::new();
    let mut rng = corpus::rng(seed);
    let bounds = ExhaustionBounds::default();
    let (mut twists, mut excluded, mut sampled) = (0usize, 0usize, 0usize);
    for (i, m) in corpus.iter().enumerate() {
        let p = (i % 6) as u32 + 1;
        match certify_nearby_slopes(m, p, bounds) {
            Ok(c) => {
                o.check(c.slopes() == predicted(m, p), || {
                    format!(
                        "certified set {:?} differs from prediction for {m}, p = {p}",
                        c.slopes()
                    )
                });
                excluded += c.excluded.len();
                twists += c.excluded.iter().map(|x| x.twists_checked).sum::<usize>();
                // re-derive a few exclusions with the oracle
                let positive: Vec<_> = c
                    .excluded
                    .iter()
                    .filter(|x| x.slope.is_positive())
                    .collect();
                for x in positive.choose_multiple(&mut rng, 3) {
                    let s = &x.slope;
                    let realizations: Vec<(u32, i64)> = (1..=bounds.max_ram)
                        .filter_map(|q| (s * Rat::from(q)).to_i64().map(|pole| (q, pole)))
                        .filter(|&(_, pole)| pole <= bounds.max_pole as i64)
                        .collect();
                    let Some(&(q, pole)) = realizations.choose(&mut rng) else {
                        o.check(false, || format!("excluded slope {s} outside the bounds"));
                        continue;
                    };
                    let mut coefficients = vec![CycloRat::one(), CycloRat::from_integer(-1)];
                    coefficients.extend(
                        m.factors()
                            .iter()
                            .filter_map(|el| el.phi().leading().map(|(_, c)| -c)),
                    );
                    for c in coefficients {
                        let el =
                            ElementaryModule::from_terms(q, [(-pole, c)], RegularPart::trivial(1))
                                .unwrap();
                        let n = FormalModule::elementary(el);
                        sampled += 1;
                        o.check(psi_oracle(m, &n, p) == 0, || {
                            format!("oracle ψ ≠ 0 for excluded slope {s}: {m} ⊗ {n}, p = {p}")
                        });
                    }
                }
            }
            Err(e) => o.check(false, || format!("{m}, p = {p}: {e}")),
        }
    }
    o.note = format!(
        "{excluded} slopes excluded with {twists} twists (ram <= {}, pole <= {}), {sampled} re-derived by oracle",
        bounds.max_ram, bounds.max_pole
    );
    o
}

fn criterion_3(corpus: &[FormalModule]) -> Outcome {
    let mut o = Outcome::new();
    for m in corpus {
        let d = m.dual();
        for p in 1..=6 {
            let (a, b) = (nearby_slopes(&d, p), nearby_slopes(m, p));
            o.check(a.is_ok() && a == b, || {
                format!("dual changes nearby slopes of {m}, p = {p}")
            });
            o.check(b.as_ref().ok() == Some(&predicted(&d, p)), || {
                format!("nearby slopes of {m} disagree with the dual's slope prediction, p = {p}")
            });
        }
    }
    o.note = "p <= 6".into();
    o
}

fn criterion_4(corpus: &[FormalModule]) -> Outcome {
    let mut o = Outcome::new();
    let mut equal_positive = 0;
    for m in corpus {
        for p in 1..=6 {
            let pushed = m.pushforward(p);
            let lhs = nearby_slopes(&pushed, 1);
            let rhs = nearby_slopes(m, p);
            let (Ok(lhs), Ok(rhs)) = (lhs, rhs) else {
                o.check(false, || format!("witness failure for {m}, p = {p}"));
                continue;
            };
            o.check(lhs.is_subset(&rhs), || {
                format!("{lhs:?} ⊄ {rhs:?} for {m}, p = {p}")
            });
            o.check(lhs == predicted(&pushed, 1), || {
                format!("pushforward prediction for {m}, p = {p}")
            });
            let pos = |s: &BTreeSet<Rat>| {
                s.iter()
                    .filter(|r| r.is_positive())
                    .cloned()
                    .collect::<Vec<_>>()
            };
            if pos(&lhs) == pos(&rhs) {
                equal_positive += 1;
            }
        }
    }
    o.note = format!(
        "p <= 6; equality on the positive part in {equal_positive}/{} cases",
        corpus.len() * 6
    );
    o
}

fn criterion_5(corpus: &[FormalModule]) -> Outcome {
    let mut o = Outcome::new();
    let mut regular = 0;
    for m in corpus {
        let oracle = m
            .factors()
            .iter()
            .all(|el| el.phi().terms().next().is_none());
        regular += oracle as usize;
        o.check(m.is_regular() == oracle, || {
            format!("is_regular disagrees for {m}")
        });
        for p in 1..=6 {
            let zero_only = nearby_slopes(m, p).is_ok_and(|s| s.iter().all(Rat::is_zero));
            o.check(zero_only == oracle, || {
                format!("nearby slopes ⊆ {{0}} disagrees for {m}, p = {p}")
            });
        }
    }
    let extra: Vec<FormalModule> = (1..=4)
        .flat_map(|k| {
            [
                trivial(k),
                FormalModule::regular(RegularPart::new([Rat::new(1, k as i64); 1])),
            ]
        })
        .collect();
    for m in &extra {
        o.check(
            m.is_regular()
                && (1..=6).all(|p| nearby_slopes(m, p).is_ok_and(|s| s.iter().all(Rat::is_zero))),
            || format!("regular fixture {m}"),
        );
    }
    o.note = format!(
        "{regular} regular and {} irregular corpus modules, p <= 6",
        corpus.len() - regular
    );
    o
}

fn all_vectors(dim: usize, lo: u32, hi: u32) -> Vec<MultiIndex> {
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u32>| {
                (lo..=hi).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(MultiIndex::new).collect()
}

fn criterion_6(seed: u64) -> Outcome {
    let mut o = Outcome::new();
    let mut rng = corpus::rng(seed);
    let (mut functions, mut restrictions, mut library_calls) = (0usize, 0usize, 0usize);
    for _ in 0..200 {
        let m = corpus::good_model(&mut rng, 4, 6);
        let n = m.dim();
        let bound = nearby_slope_bound(&m);
        let oracle_bound: Rat = (0..n)
            .map(|i| m.factors().iter().map(|f| f.pole.get(i)).max().unwrap_or(0))
            .map(Rat::from)
            .sum();
        o.check(bound == oracle_bound, || {
            format!("bound {bound} ≠ {oracle_bound}")
        });
        let curves = all_vectors(n, 1, 3);
        // library nearby slopes of the restriction along t^1, memoized per (domain, curve)
        let mut memo: HashMap<(Vec<usize>, usize), BTreeSet<Rat>> = HashMap::new();
        for a in all_vectors(n, 0, 4) {
            let Ok(f) = MonomialFunction::new(a.clone()) else {
                continue;
            };
            functions += 1;
            let t = vanishing_threshold(&m, &f).unwrap();
            let supp = a.support();
            let pole_locus: BTreeSet<usize> =
                m.factors().iter().flat_map(|f| f.pole.support()).collect();
            o.check(t.applicable == supp.is_subset(&pole_locus), || {
                format!("applicability for {f}")
            });
            if t.applicable {
                o.check(t.value <= bound, || {
                    format!("threshold {} > bound {bound} for {f}", t.value)
                });
            }
            let dom = mediant_domain(&m, &f);
            let in_dom: Vec<usize> = m
                .factors()
                .iter()
                .enumerate()
                .filter(|(_, fac)| fac.pole.support().is_subset(&supp))
                .map(|(i, _)| i)
                .collect();
            o.check(in_dom.len() == dom.factors().len(), || {
                format!("mediant domain for {f}")
            });
            if in_dom.is_empty() {
                continue;
            }
            for (ci, c) in curves.iter().enumerate() {
                restrictions += 1;
                let k = curve_exponent(&f, c).unwrap();
                let unscaled = memo.entry((in_dom.clone(), ci)).or_insert_with(|| {
                    library_calls += 1;
                    nearby_slopes(&curve_restriction(&dom, c).unwrap(), 1).unwrap()
                });
                let oracle: BTreeSet<Rat> = in_dom
                    .iter()
                    .map(|&i| Rat::new(m.factors()[i].pole.dot(c) as i64, a.dot(c) as i64))
                    .collect();
                let library: BTreeSet<Rat> = unscaled.iter().map(|s| s / Rat::from(k)).collect();
                o.check(library == oracle, || {
                    format!("restriction of {f} along {c}: {library:?} vs {oracle:?}")
                });
                for s in &oracle {
                    o.check(s <= &t.value, || {
                        format!(
                            "restricted slope {s} > threshold {} for {f} along {c}",
                            t.value
                        )
                    });
                }
            }
            // spot-check the scaling with a direct call along t^k
            let c = curves.choose(&mut rng).unwrap();
            let k = curve_exponent(&f, c).unwrap();
            let direct = nearby_slopes(&curve_restriction(&dom, c).unwrap(), k).unwrap();
            o.check(direct.iter().all(|s| s <= &t.value), || {
                format!("direct restriction of {f} along {c}")
            });
        }
    }
    o.note = format!(
        "{functions} functions, {restrictions} curve restrictions ({library_calls} distinct restricted modules)"
    );
    o
}

/// Recomputes the multiplicities of the newest exceptional component from
/// the step data and checks the recorded state against them.
fn check_step(o: &mut Outcome, before: &BlowupState, step: &BlowupStep, after: &BlowupState) {
    let new = after.components().last().unwrap();
    let a = before.a();
    let r = before.r();
    let deg_s: Rat = r.iter().sum();
    o.check(after.deg_s() == &deg_s, || "deg S changed".into());
    o.check(
        matches!(new.kind, ComponentKind::Exceptional { .. }),
        || format!("{} is not exceptional", new.id),
    );
    let originals = before
        .components()
        .iter()
        .filter(|c| matches!(c.kind, ComponentKind::Original { .. }));
    let exceptionals: Vec<_> = before.exceptionals().collect();
    let (vz, vs) = match step {
        BlowupStep::Center { center } => {
            let parts: Vec<_> = before
                .components()
                .iter()
                .filter(|c| center.contains(&c.id))
                .collect();
            let ray: Vec<u64> = (0..a.len())
                .map(|i| parts.iter().map(|c| c.ray.as_ref().unwrap()[i]).sum())
                .collect();
            o.check(new.ray.as_ref() == Some(&ray), || {
                format!("ray of {}", new.id)
            });
            let vz: u64 = ray.iter().zip(a).map(|(x, &y)| x * y as u64).sum();
            let vs: Rat = ray.iter().zip(r).map(|(&x, y)| Rat::from(x) * y).sum();
            let vz_sum: u64 = parts.iter().map(|c| c.vz).sum();
            let vs_sum: Rat = parts.iter().map(|c| c.vs.clone()).sum();
            o.check(vz == vz_sum && vs == vs_sum, || {
                format!("linearity at {}", new.id)
            });
            (vz, vs)
        }
        BlowupStep::Incidence {
            alpha,
            eps_s,
            eps_e,
        } => {
            let az: u64 = alpha
                .iter()
                .zip(a)
                .map(|(&x, &y)| x as u64 * y as u64)
                .sum();
            let b: u64 = eps_e
                .iter()
                .zip(&exceptionals)
                .map(|(&e, c)| e as u64 * c.vz)
                .sum();
            let rs: Rat = eps_s.iter().zip(r).map(|(&e, y)| Rat::from(e) * y).sum();
            let cs: Rat = eps_e
                .iter()
                .zip(&exceptionals)
                .map(|(&e, c)| Rat::from(e) * &c.vs)
                .sum();
            let ds_b = &deg_s * Rat::from(b);
            let sides = [
                &deg_s * Rat::from(az + b),
                &deg_s + &ds_b,
                &rs + &ds_b,
                &rs + &cs,
            ];
            let last = after.closing_checks().last().unwrap();
            o.check(last.sides == sides, || {
                format!("closing chain at {}", new.id)
            });
            o.check(sides.windows(2).all(|w| w[0] >= w[1]), || {
                format!("closing inequalities fail at {}: {sides:?}", new.id)
            });
            (az + b, rs + cs)
        }
    };
    o.check(new.vz == vz && new.vs == vs, || {
        format!("multiplicities of {}", new.id)
    });
    for c in originals.chain(exceptionals) {
        o.check(after.components().iter().any(|x| x == c), || {
            format!("{} changed", c.id)
        });
    }
    for c in after.components() {
        if c.vz > 0 {
            o.check(c.vs <= &deg_s * Rat::from(c.vz), || {
                format!("inequality fails at {}", c.id)
            });
        }
    }
}

fn criterion_7(seed: u64) -> Outcome {
    let mut o = Outcome::new();
    let mut rng = corpus::rng(seed);
    let mut steps = [0usize; 2];
    for i in 0..1000 {
        let mode = if i % 2 == 0 {
            Mode::Toric
        } else {
            Mode::Abstract
        };
        let mut state = corpus::blowup_start(&mut rng, 4, mode);
        let report = verify_inequality(&state);
        o.check(report.ok(), || {
            format!("initial state: {:?}", report.violations)
        });
        for _ in 0..rng.gen_range(1..=6) {
            let Some(step) = corpus::blowup_step(&mut rng, &state) else {
                break;
            };
            let next = match state.blow_up(&step) {
                Ok(s) => s,
                Err(e) => {
                    o.check(false, || format!("admissible step rejected: {e}"));
                    break;
                }
            };
            steps[i % 2] += 1;
            check_step(&mut o, &state, &step, &next);
            let report = verify_inequality(&next);
            o.check(report.ok(), || {
                format!("verify_inequality: {:?}", report.violations)
            });
            state = next;
        }
    }
    o.note = format!("{} toric and {} abstract steps", steps[0], steps[1]);
    o
}

/// `x^{m+1}∂ − (c·x^m − m)` annihilates `x^c·e^{x^{-m}}`.
fn rank_one(m: i64, c: &Rat) -> Vec<(u32, Laurent)> {
    let a0 = Laurent::monomial(m, -c).add(&Laurent::monomial(0, Rat::from(m)));
    vec![(1, Laurent::monomial(m + 1, Rat::one())), (0, a0)]
}

fn op(terms: &[(u32, i64, i64)]) -> DiffOperator {
    DiffOperator::new(
        terms
            .iter()
            .map(|&(i, k, c)| (i, Laurent::monomial(k, Rat::from(c)))),
    )
}

fn criterion_8() -> Outcome {
    let mut o = Outcome::new();
    let cs: Vec<Rat> = [
        (0, 1),
        (1, 2),
        (-1, 3),
        (5, 2),
        (-7, 4),
        (2, 1),
        (1, 5),
        (-3, 1),
        (11, 6),
        (2, 7),
    ]
    .iter()
    .map(|&(n, d)| Rat::new(n, d))
    .collect();
    let mut fixtures = 0;
    for m in 1..=10i64 {
        for c in &cs {
            fixtures += 1;
            let el = ElementaryModule::from_terms(
                1,
                [(-m, CycloRat::one())],
                RegularPart::new([c.clone()]),
            )
            .unwrap();
            let module = FormalModule::elementary(el);
            let ops = slopes_from_operator(&rank_one(m, c));
            o.check(ops.as_ref().ok() == Some(&module.slopes()), || {
                format!("rank one m = {m}, c = {c}: {ops:?}")
            });
            o.check(
                module.slopes() == BTreeMap::from([(Rat::from(m), 1)]),
                || format!("El slope m = {m}"),
            );
        }
    }
    let golden: Vec<(DiffOperator, FormalModule)> = vec![
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
    for (i, (operator, module)) in golden.iter().enumerate() {
        let got = operator_slopes(operator);
        o.check(got.as_ref().ok() == Some(&module.slopes()), || {
            format!("golden fixture {i}: {got:?}")
        });
    }
    o.note = format!("{fixtures} rank-one and {} golden fixtures", golden.len());
    o
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = app::run(
        std::iter::once("slopelab").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (code, out)
}

fn criterion_9(seed: u64) -> Outcome {
    let mut o = Outcome::new();
    let mut rng = corpus::rng(seed);
    for _ in 0..200 {
        let e = corpus::module_expr(&mut rng, 3);
        let printed = e.to_string();
        match parse_module(&printed) {
            Ok(parsed) => {
                o.check(parsed == e, || format!("parse∘print changed {printed}"));
                o.check(parsed.to_string() == printed, || {
                    format!("print∘parse∘print ≠ print for {printed}")
                });
                match eval(&parsed) {
                    Ok(m) => {
                        let text = m.to_string();
                        let again = parse_module(&text).map(|x| x.to_string());
                        o.check(again.as_deref() == Ok(text.as_str()), || {
                            format!("canonical {text} does not round-trip")
                        });
                        o.check(
                            parse_module(&text).ok().and_then(|x| eval(&x).ok()) == Some(m),
                            || format!("canonical {text} evaluates differently"),
                        );
                    }
                    Err(err) => o.check(false, || format!("{printed}: {err}")),
                }
            }
            Err(err) => o.check(false, || format!("{printed}: {err}")),
        }
    }
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("m.model");
    std::fs::write(
        &model,
        r#"{"dim": 2, "factors": [{"pole": [2, 3], "rank": 1}]}"#,
    )
    .unwrap();
    let script = dir.path().join("s.json");
    std::fs::write(
        &script,
        r#"{"dim": 3, "Z": {"a": [1, 2, 0]}, "S": {"r": ["1/2", 3, 1]}, "mode": "toric",
            "steps": [{"center": ["D1", "D2"]}, {"center": ["E1", "D2", "D3"]}]}"#,
    )
    .unwrap();
    let seed_text = seed.to_string();
    let (model, script) = (model.to_str().unwrap(), script.to_str().unwrap());
    let commands: Vec<Vec<&str>> = vec![
        vec![
            "--json",
            "slopes",
            "-e",
            "El(2, u^-3, rank=1) + Reg(rank=2, exp=[0, 1/2])",
        ],
        vec![
            "--json",
            "nearby",
            "-e",
            "El(3, u^-2 + zeta(3)*u^-1, rank=1)",
            "-p",
            "2",
            "--cert",
        ],
        vec!["--json", "bound", "-m", model, "-f", "x1*x2"],
        vec!["--json", "blowup", "-s", script, "--verify"],
        vec!["--json", "selftest", "--cases", "10", "--seed", &seed_text],
        vec!["selftest", "--cases", "10", "--seed", &seed_text],
    ];
    for args in &commands {
        let (c1, first) = run_cli(args);
        let (c2, second) = run_cli(args);
        o.check(c1 == 0 && c2 == 0, || {
            format!("{args:?} exited with {c1}, {c2}")
        });
        o.check(first == second && !first.is_empty(), || {
            format!("{args:?} output differs between runs")
        });
        if args[0] == "--json" {
            let v: serde_json::Value = serde_json::from_slice(&first).unwrap_or_default();
            o.check(v["schema"] == "1", || format!("{args:?} lacks schema 1"));
        }
    }
    o.note = format!("200 expressions, {} commands run twice", commands.len());
    o
}

fn main() {
    let seed = corpus::seed_from_env(DEFAULT_SEED);
    println!("acceptance sweeps, seed {seed}");
    let start = Instant::now();
    let corpus = corpus::module_corpus(seed, CORPUS);
    type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Criterion> = vec![
        (
            "witness twists give nonzero ψ",
            Box::new(|| criterion_1(&corpus)),
        ),
        (
            "bounded exhaustion of non-members",
            Box::new(|| criterion_2(&corpus, seed ^ 0x2)),
        ),
        (
            "dual preserves nearby slopes",
            Box::new(|| criterion_3(&corpus)),
        ),
        (
            "pushforward nearby-slope inclusion",
            Box::new(|| criterion_4(&corpus)),
        ),
        (
            "regular iff nearby slopes in {0}",
            Box::new(|| criterion_5(&corpus)),
        ),
        (
            "threshold, bound and curve restrictions",
            Box::new(|| criterion_6(seed ^ 0x6)),
        ),
        (
            "blow-up chains keep the key inequality",
            Box::new(|| criterion_7(seed ^ 0x7)),
        ),
        ("Newton polygon fixtures", Box::new(criterion_8)),
        (
            "expression round-trip and determinism",
            Box::new(|| criterion_9(seed ^ 0x9)),
        ),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        let status = if o.failures.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        println!(
            "criterion {}: {status} {name} [{}; {:.2}s]",
            i + 1,
            o.note,
            t.elapsed().as_secs_f64()
        );
        if !o.failures.is_empty() {
            failed += 1;
            for f in o.failures.iter().filter(|f| !f.is_empty()).take(5) {
                println!("    {f}");
            }
            println!("    ({} failing checks)", o.failures.len());
        }
    }
    println!(
        "{} of {} criteria passed in {:.2}s",
        criteria.len() - failed,
        criteria.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
