//! Subcommands, output rendering and exit codes.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use slopelab_core::blowup::{verify_inequality, BlowupScript, BlowupState, ScriptError};
use slopelab_core::elementary::{
    certify_nearby_slopes, nearby_members, ExhaustionBounds, FormalModule,
};
use slopelab_core::exact_algebra::{MultiIndex, Rat};
use slopelab_core::monomial::{
    curve_exponent, curve_restriction, highest_generic_slopes, lemma_vanishing, mediant_domain,
    nearby_slope_bound, vanishing_threshold, GoodModel, MonomialFunction, Verdict,
};

use crate::corpus::{seed_from_env, DEFAULT_SEED};
use crate::expr::{eval, parse_module};
use crate::selftest;

pub const SCHEMA: &str = "1";

/// Exit code for a successful run.
pub const EXIT_OK: i32 = 0;
/// Exit code for usage, input and parse errors.
pub const EXIT_USAGE: i32 = 1;
/// Exit code for a violated property or failed verification.
pub const EXIT_VIOLATION: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "slopelab",
    version,
    about = "Exact slope and nearby-slope calculus"
)]
struct Cli {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Slope multiset, rank and irregularity of a module expression.
    Slopes {
        #[arg(short = 'e', long = "expr")]
        expr: String,
    },
    /// Nearby slopes along x^P.
    Nearby {
        #[arg(short = 'e', long = "expr")]
        expr: String,
        #[arg(short = 'p', value_parser = clap::value_parser!(u32).range(1..))]
        p: u32,
        /// Print witness twists and the exhaustion bounds for non-members.
        #[arg(long)]
        cert: bool,
    },
    /// Nearby-slope bound, vanishing threshold and lemma verdicts for a monomial function.
    Bound {
        #[arg(short = 'm', long = "model")]
        model: PathBuf,
        #[arg(short = 'f', long = "function")]
        function: String,
        /// Largest curve exponent in the restriction spot checks.
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..=6))]
        curve_max: u32,
    },
    /// Replay a blow-up script.
    Blowup {
        #[arg(short = 's', long = "script")]
        script: PathBuf,
        /// Check the key inequality after every step.
        #[arg(long)]
        verify: bool,
    },
    /// Run the randomized property sweeps.
    Selftest {
        #[arg(long, default_value_t = 100)]
        cases: usize,
        /// Defaults to SLOPELAB_SEED, then to a fixed seed.
        #[arg(long)]
        seed: Option<u64>,
    },
}

struct Outcome {
    code: i32,
    json: Value,
    text: String,
}

struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message: message.into(),
    }
}

/// Runs the tool on `args` (program name first), writing to `out` and `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Slopes { expr } => slopes(expr),
        Command::Nearby { expr, p, cert } => nearby(expr, *p, *cert),
        Command::Bound {
            model,
            function,
            curve_max,
        } => bound(model, function, *curve_max),
        Command::Blowup { script, verify } => blowup(script, *verify),
        Command::Selftest { cases, seed } => Ok(self_test(
            *cases,
            seed.unwrap_or_else(|| seed_from_env(DEFAULT_SEED)),
        )),
    };
    match result {
        Ok(o) => {
            let written = if cli.json {
                let mut v = o.json;
                v["schema"] = json!(SCHEMA);
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&v).expect("serializable")
                )
            } else {
                write!(out, "{}", o.text)
            };
            if written.is_err() {
                return EXIT_USAGE;
            }
            o.code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            if cli.json {
                let v = json!({"schema": SCHEMA, "error": f.message, "exit": f.code});
                let _ = writeln!(
                    out,
                    "{}",
                    serde_json::to_string_pretty(&v).expect("serializable")
                );
            }
            f.code
        }
    }
}

fn module_arg(text: &str) -> Result<FormalModule, Failure> {
    let e = parse_module(text).map_err(|e| usage(format!("parse error at {e}")))?;
    eval(&e).map_err(|e| usage(format!("evaluation error at {e}")))
}

fn rats(set: impl IntoIterator<Item = Rat>) -> String {
    let parts: Vec<String> = set.into_iter().map(|r| r.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

fn slopes(text: &str) -> Result<Outcome, Failure> {
    let m = module_arg(text)?;
    let slopes = m.slopes();
    let list: Vec<Value> = slopes
        .iter()
        .map(|(s, k)| json!({"slope": s, "multiplicity": k}))
        .collect();
    let shown: Vec<String> = slopes.iter().map(|(s, k)| format!("{s}: {k}")).collect();
    let text = format!(
        "module: {m}\nrank: {}\nslopes: {{{}}}\nirregularity: {}\nregular: {}\n",
        m.rank(),
        shown.join(", "),
        m.irregularity(),
        m.is_regular()
    );
    Ok(Outcome {
        code: EXIT_OK,
        json: json!({
            "command": "slopes",
            "module": m.to_string(),
            "rank": m.rank(),
            "slopes": list,
            "irregularity": m.irregularity(),
            "regular": m.is_regular(),
        }),
        text,
    })
}

fn nearby(text: &str, p: u32, cert: bool) -> Result<Outcome, Failure> {
    let m = module_arg(text)?;
    let violation = |e: slopelab_core::elementary::CalcError| Failure {
        code: EXIT_VIOLATION,
        message: e.to_string(),
    };
    if !cert {
        let members = nearby_members(&m, p).map_err(violation)?;
        let slopes: Vec<Rat> = members.into_iter().map(|w| w.slope).collect();
        return Ok(Outcome {
            code: EXIT_OK,
            text: format!(
                "module: {m}\np: {p}\nnearby slopes: {}\n",
                rats(slopes.clone())
            ),
            json: json!({"command": "nearby", "module": m.to_string(), "p": p, "nearby_slopes": slopes}),
        });
    }
    let bounds = ExhaustionBounds::default();
    let c = certify_nearby_slopes(&m, p, bounds).map_err(violation)?;
    let mut text = format!("module: {m}\np: {p}\nnearby slopes: {}\n", rats(c.slopes()));
    for w in &c.members {
        text += &format!(
            "  member {}: twist {}, psi dim {}\n",
            w.slope, w.twist, w.psi_dim
        );
    }
    let tried: usize = c.excluded.iter().map(|x| x.twists_checked).sum();
    text += &format!(
        "  excluded {} slopes m/q with q <= {}, m <= {} ({tried} twists, all psi dim 0)\n",
        c.excluded.len(),
        bounds.max_ram,
        bounds.max_pole
    );
    Ok(Outcome {
        code: EXIT_OK,
        text,
        json: json!({
            "command": "nearby",
            "module": m.to_string(),
            "p": p,
            "nearby_slopes": c.slopes(),
            "certificate": c,
        }),
    })
}

fn verdict(v: Verdict) -> Value {
    match v {
        Verdict::Vanishes(l) => json!({"vanishes": true, "lemma": l.label()}),
        Verdict::Unknown => json!({"vanishes": false}),
    }
}

fn verdict_text(v: Verdict) -> String {
    match v {
        Verdict::Vanishes(l) => format!("vanishes ({})", l.label()),
        Verdict::Unknown => "unknown".into(),
    }
}

/// All curves `c` with entries in `1..=max`, in lexicographic order.
fn curves(dim: usize, max: u32) -> Vec<MultiIndex> {
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|v: Vec<u32>| {
                (1..=max).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out.into_iter().map(MultiIndex::new).collect()
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn bound(model: &Path, function: &str, curve_max: u32) -> Result<Outcome, Failure> {
    let m = GoodModel::from_json(&read(model)?)
        .map_err(|e| usage(format!("{}: {e}", model.display())))?;
    let f = MonomialFunction::parse(function, m.dim()).map_err(|e| usage(e.to_string()))?;
    let generic = highest_generic_slopes(&m);
    let bound = nearby_slope_bound(&m);
    let t = vanishing_threshold(&m, &f).map_err(|e| usage(e.to_string()))?;
    let mut violations = Vec::new();
    if t.applicable && t.value > bound {
        violations.push(format!("threshold {} exceeds bound {bound}", t.value));
    }

    let mut lemma_rows = Vec::new();
    let mut text = format!(
        "function: {f}\ngeneric slopes: [{}]\nbound: {bound}\nthreshold: {}{}\n",
        generic
            .r
            .iter()
            .map(|r| r.to_string())
            .collect::<Vec<_>>()
            .join(", "),
        t.value,
        if t.applicable {
            ""
        } else {
            " (outside the pole locus)"
        }
    );
    for (i, fac) in m.factors().iter().enumerate() {
        let plain = lemma_vanishing(&fac.pole, None, &f);
        let extra = lemma_vanishing(&fac.pole, Some(f.exponent()), &f);
        text += &format!(
            "  factor {} pole {}: {}; with extra pole {}: {}\n",
            i + 1,
            fac.pole,
            verdict_text(plain),
            f.exponent(),
            verdict_text(extra)
        );
        lemma_rows.push(json!({
            "factor": i + 1,
            "pole": fac.pole,
            "verdict": verdict(plain),
            "extra_pole_verdict": verdict(extra),
        }));
    }

    let dom = mediant_domain(&m, &f);
    let mut checked = 0usize;
    let mut max_seen: Option<Rat> = None;
    if !dom.factors().is_empty() {
        for c in curves(m.dim(), curve_max) {
            let k = curve_exponent(&f, &c).map_err(|e| usage(e.to_string()))?;
            let restricted = curve_restriction(&dom, &c).map_err(|e| usage(e.to_string()))?;
            let slopes =
                slopelab_core::elementary::nearby_slopes(&restricted, k).map_err(|e| Failure {
                    code: EXIT_VIOLATION,
                    message: e.to_string(),
                })?;
            checked += 1;
            for s in slopes {
                if s > t.value {
                    violations.push(format!(
                        "curve {c}: restricted nearby slope {s} exceeds threshold"
                    ));
                }
                if max_seen.as_ref().is_none_or(|x| &s > x) {
                    max_seen = Some(s);
                }
            }
        }
    }
    text += &format!(
        "curve checks: {checked} curves with entries <= {curve_max} on {} of {} factors, largest restricted slope {}\n",
        dom.factors().len(),
        m.factors().len(),
        max_seen.as_ref().map_or("none".into(), Rat::to_string)
    );
    for v in &violations {
        text += &format!("VIOLATION: {v}\n");
    }
    Ok(Outcome {
        code: if violations.is_empty() {
            EXIT_OK
        } else {
            EXIT_VIOLATION
        },
        text,
        json: json!({
            "command": "bound",
            "function": f.to_string(),
            "generic_slopes": generic.r,
            "bound": bound,
            "threshold": {"value": t.value, "applicable": t.applicable},
            "lemmas": lemma_rows,
            "curve_checks": {
                "curves": checked,
                "max_entry": curve_max,
                "factors_in_domain": dom.factors().len(),
                "max_restricted_slope": max_seen,
            },
            "violations": violations,
        }),
    })
}

fn component_table(state: &BlowupState, verify: bool) -> (String, Value) {
    let report = verify_inequality(state);
    let mut text = String::new();
    for row in &report.rows {
        let ray = row.ray.as_ref().map_or("-".into(), |r| {
            format!(
                "({})",
                r.iter().map(u64::to_string).collect::<Vec<_>>().join(", ")
            )
        });
        text += &format!(
            "  {:<4} {:<12} ray {:<12} vZ {:<3} vS {}",
            row.id, row.kind, ray, row.vz, row.vs
        );
        if verify && row.checked {
            text += &format!("  bound {} margin {}", row.bound, row.margin);
        }
        text.push('\n');
    }
    (
        text,
        serde_json::to_value(&report.rows).expect("serializable"),
    )
}

fn blowup(path: &Path, verify: bool) -> Result<Outcome, Failure> {
    let script = BlowupScript::from_json(&read(path)?)
        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let mut state = script
        .initial_state()
        .map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let mut violations = Vec::new();
    let mut steps = Vec::new();
    let mut check = |state: &BlowupState, step: usize, steps: &mut Vec<Value>| {
        let report = verify_inequality(state);
        for v in &report.violations {
            violations.push(format!("after step {step}: {v}"));
        }
        steps.push(json!({"step": step, "ok": report.ok(), "violations": report.violations}));
    };
    if verify {
        check(&state, 0, &mut steps);
    }
    for (i, step) in script.steps.iter().enumerate() {
        state = state.blow_up(step).map_err(|source| {
            usage(format!(
                "{}: {}",
                path.display(),
                ScriptError::Step { index: i, source }
            ))
        })?;
        if verify {
            check(&state, i + 1, &mut steps);
        }
    }
    let (table, rows) = component_table(&state, verify);
    let mut text = format!(
        "mode: {}\ndeg S: {}\nsteps: {}\ncomponents:\n{table}",
        state.mode().name(),
        state.deg_s(),
        state.steps()
    );
    text += &format!("maximal cones: {:?}\n", state.maximal_cones());
    let mut json = json!({
        "command": "blowup",
        "mode": state.mode().name(),
        "deg_s": state.deg_s(),
        "steps": state.steps(),
        "components": rows,
        "maximal_cones": state.maximal_cones(),
    });
    if verify {
        for c in state.closing_checks() {
            let sides: Vec<String> = c.sides.iter().map(Rat::to_string).collect();
            text += &format!("  step {} closing chain: {}\n", c.step, sides.join(" >= "));
        }
        if violations.is_empty() {
            text += "verified: v(S) <= deg S * v(Z) after every step\n";
        }
        for v in &violations {
            text += &format!("VIOLATION: {v}\n");
        }
        json["verification"] = json!({
            "per_step": steps,
            "closing": state.closing_checks(),
            "violations": violations,
        });
    }
    Ok(Outcome {
        code: if violations.is_empty() {
            EXIT_OK
        } else {
            EXIT_VIOLATION
        },
        text,
        json,
    })
}

fn self_test(cases: usize, seed: u64) -> Outcome {
    let report = selftest::run(cases, seed);
    let mut text = format!("seed {seed}, {cases} cases per suite\n");
    for s in &report.suites {
        text += &format!(
            "{:<16} {:>7} checks  {}\n",
            s.name,
            s.checks,
            if s.ok() { "ok" } else { "FAILED" }
        );
        for f in s.failures.iter().take(5) {
            text += &format!("    {f}\n");
        }
    }
    Outcome {
        code: if report.ok() { EXIT_OK } else { EXIT_VIOLATION },
        json: json!({"command": "selftest", "ok": report.ok(), "report": report}),
        text,
    }
}
