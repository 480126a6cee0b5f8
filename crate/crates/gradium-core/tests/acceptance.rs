//! Acceptance criteria 1-11. Prints one line per criterion and exits
//! non-zero when any fails.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use gradium::coeffect_eval::{run, top_env, RunOptions, Semantics, CW};
use gradium::coeffect_system::{co_check, co_infer_comp, elaborate};
use gradium::diag::step_budget;
use gradium::effect_eval::eval_comp;
use gradium::effect_system::{check_comp, infer_comp};
use gradium::env::Env;
use gradium::grading::{CoeffectAlgebra, EffectAlgebra, GradeVec};
use gradium::harness::{run_suite, GenConfig, Suite, SuiteReport};
use gradium::syntax::{parse_comp, parse_program, Comp, CompType, Context, Grades, Term, ValType};
use gradium::translate::{check_preservation, declared_dialect, parse_source, Dialect, SrcGrades};

type Verdict = Result<String, String>;

fn corpus() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn eff(src: &str) -> Comp {
    parse_comp(src, Grades::Effect(&EffectAlgebra::nat_cost()), &[]).unwrap()
}

fn co(src: &str, scope: &[&str]) -> Comp {
    let names: Vec<String> = scope.iter().map(|s| s.to_string()).collect();
    parse_comp(src, Grades::Coeffect(&CoeffectAlgebra::nat_usage()), &names).unwrap_or_else(|e| panic!("{src}: {e}"))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn suite(s: Suite, trials: usize) -> Result<SuiteReport, String> {
    let cfg = GenConfig { trials, ..GenConfig::new(s.default_algebra()) };
    let r = run_suite(s, &cfg)?;
    if let Some(f) = r.failures.first().or(r.defects.first()) {
        return Err(format!(
            "{} failures, {} defects; first at seed {}: {} on {}",
            r.failures.len(),
            r.defects.len(),
            f.seed,
            f.message,
            f.term
        ));
    }
    Ok(r)
}

fn tick_accounting() -> Verdict {
    let alg = EffectAlgebra::nat_cost();
    let ctx = Context::new();
    let m = eff("let x <- tick in tick");
    let (ty, e) = infer_comp(&alg, &ctx, &m).map_err(|e| e.to_string())?;
    ensure(ty == CompType::f(None, ValType::Unit) && e.raw() == 2, || format!("inferred {ty} ! {e}"))?;
    let (t, e) = eval_comp(&alg, &Env::new(), &m, step_budget()).map_err(|e| e.to_string())?;
    ensure(t.to_string() == "return ()" && e.raw() == 2, || format!("evaluated to {t} with effect {e}"))?;
    let pair = eff("<tick, let y <- tick in tick>");
    let (_, e) = infer_comp(&alg, &ctx, &pair).map_err(|e| e.to_string())?;
    ensure(e.raw() == 2, || format!("pair checks at {e}"))?;
    let fst = Comp::CFst(Box::new(pair));
    let (fty, stat) = infer_comp(&alg, &ctx, &fst).map_err(|e| e.to_string())?;
    check_comp(&alg, &ctx, &fst, &fty, alg.nat(2)).map_err(|e| e.to_string())?;
    let (_, dynamic) = eval_comp(&alg, &Env::new(), &fst, step_budget()).map_err(|e| e.to_string())?;
    ensure(dynamic.raw() == 1 && stat.raw() == 2, || format!("projection: runtime {dynamic}, static {stat}"))?;
    Ok("effect 2, return () at 2; projection runs at 1 <= 2".into())
}

fn subeffecting() -> Verdict {
    let r = suite(Suite::Subeff, 1000)?;
    let fams: Vec<&String> = r.notes.iter().filter(|n| n.contains("rejected")).collect();
    ensure(fams.len() >= 3, || format!("tightening rejected in only {} families", fams.len()))?;
    Ok(format!("{} terms; tightening rejected in {} families", r.passed, fams.len()))
}

fn effect_soundness() -> Verdict {
    let r = suite(Suite::EffSound, 1000)?;
    Ok(format!("{} closed F-terms within their static effect", r.passed))
}

fn determinism() -> Verdict {
    let r = suite(Suite::Determinism, 1000)?;
    Ok(format!("{} double runs agree", r.passed))
}

fn coeffect_golden() -> Verdict {
    let alg = CoeffectAlgebra::nat_usage();
    let ctx = Context::new().with("x", ValType::Unit);
    let (_, gv) = co_infer_comp(&alg, &ctx, &co("return^3 x", &["x"])).map_err(|e| e.to_string())?;
    ensure(gv == GradeVec(vec![alg.nat(3)]), || format!("return^3 x infers {gv}"))?;
    let empty = Context::new();
    let dup = Term::Comp(co("\\x^2. return^1 (x, x)", &[]));
    co_check(&alg, &empty, &dup, &GradeVec(vec![])).map_err(|e| format!("^2 rejected: {e}"))?;
    let under = Term::Comp(co("\\x^1. return^1 (x, x)", &[]));
    ensure(co_check(&alg, &empty, &under, &GradeVec(vec![])).is_err(), || "^1 accepted".into())?;
    ensure(alg.leq(alg.nat(3), alg.nat(2)) == Ok(true), || "3 <= 2 fails".into())?;
    Ok("[3]; ^2 accepted, ^1 rejected; 3 <= 2".into())
}

fn subcoeffecting() -> Verdict {
    let r = suite(Suite::Subcoeff, 1000)?;
    Ok(format!("{} weakenings accepted with identical terminals", r.passed))
}

fn coeffect_soundness() -> Verdict {
    let r = suite(Suite::CoSound, 1000)?;
    Ok(format!("{} runs without grade violations", r.passed))
}

fn resource_soundness() -> Verdict {
    let r = suite(Suite::ResSound, 1000)?;
    let alg = CoeffectAlgebra::nat_usage();
    let ctx = Context::new().with("x", ValType::Unit);
    // a junk x would be inspected if the pair were evaluated
    for src in ["return^0 x", "return^0 (x, (x, ()))"] {
        let el = elaborate(&alg, &ctx, &co(src, &["x"])).map_err(|e| e.to_string())?;
        let env = top_env(vec![CW::Junk]);
        let out = run(&alg, Semantics::Resource, &el.comp.gv, &env, &el.comp, RunOptions { usage: true, ..Default::default() })
            .map_err(|e| format!("{src}: {e}"))?;
        ensure(out.terminal.to_string() == "return^0 <junk>", || format!("{src} gave {}", out.terminal))?;
        ensure(out.usage.as_deref() == Some(&[0u64][..]), || format!("{src} used x"))?;
    }
    Ok(format!("{} junk-filled runs within their grades; return^0 V yields return^0 <junk>", r.passed))
}

fn preservation() -> Verdict {
    let ea = EffectAlgebra::nat_cost();
    let ca = CoeffectAlgebra::nat_usage();
    let mut files = 0;
    for entry in std::fs::read_dir(corpus()).map_err(|e| e.to_string())? {
        let p = entry.map_err(|e| e.to_string())?.path();
        if p.extension().and_then(|x| x.to_str()) != Some("lam") {
            continue;
        }
        let src = std::fs::read_to_string(&p).map_err(|e| e.to_string())?;
        let d = declared_dialect(&src).map_err(|e| e.to_string())?.ok_or("no dialect header")?;
        let g = if d.lang.is_effect() { SrcGrades::Effect(&ea) } else { SrcGrades::Coeffect(&ca) };
        let prog = parse_source(&src, d.lang, g).map_err(|e| format!("{}: {e}", p.display()))?;
        check_preservation(d, g, &prog.context, &prog.body).map_err(|e| format!("{}: {e}", p.display()))?;
        files += 1;
    }
    let mut total = 0;
    for d in Dialect::ALL {
        total += suite(Suite::Preserve(d), 1000).map_err(|e| format!("{d}: {e}"))?.passed;
    }
    Ok(format!("{files} corpus programs and {total} generated terms over 7 dialects"))
}

fn canonicality() -> Verdict {
    let r = suite(Suite::Canonical, 1000)?;
    Ok(format!("{} terms agree with derivation enumeration ({})", r.passed, r.notes.join("; ")))
}

fn load_co(file: &str) -> Result<(Context, Comp), String> {
    let src = std::fs::read_to_string(corpus().join(file)).map_err(|e| e.to_string())?;
    let p = parse_program(&src, Grades::Coeffect(&CoeffectAlgebra::nat_usage())).map_err(|e| format!("{file}: {e}"))?;
    Ok((p.context, p.body))
}

/// Type, grades and terminal (all slots hold `()`) under the general semantics.
fn judge(ctx: &Context, m: &Comp) -> Result<(String, String, String), String> {
    let alg = CoeffectAlgebra::nat_usage();
    let el = elaborate(&alg, ctx, m).map_err(|e| e.to_string())?;
    let env = top_env(vec![CW::Unit; ctx.len()]);
    let out = run(&alg, Semantics::General, &el.comp.gv, &env, &el.comp, RunOptions::default()).map_err(|e| e.to_string())?;
    Ok((el.ty.to_string(), el.comp.gv.to_string(), out.terminal.to_string()))
}

fn products() -> Verdict {
    let want = [
        ("prod_value.cbpv", "F^1 Unit", "[1]", "return^1 ()"),
        ("prod_with.cbpv", "F^1 Unit", "[1]", "return^1 ()"),
        ("prod_cpair.cbpv", "F^1 Unit", "[1]", "return^1 ()"),
        ("prod_tensor.cbpv", "F^1 Unit", "[1]", "return^1 ()"),
    ];
    for (f, ty, gv, t) in want {
        let (ctx, m) = load_co(f)?;
        let got = judge(&ctx, &m)?;
        ensure(got == (ty.into(), gv.into(), t.into()), || format!("{f}: {got:?}"))?;
    }
    // introduction forms on their own
    let ctx = Context::new().with("x", ValType::Unit);
    let intros = [
        ("return^1 (x, ())", "F^1 (Unit * Unit)", "[1]"),
        ("return^1 <x, ()>", "F^1 (Unit & Unit)", "[1]"),
        ("<return^1 x, return^2 x>", "F^1 Unit & F^2 Unit", "[2]"),
        ("(return^1 x, return^2 x)", "F^1 Unit * F^2 Unit", "[3]"),
    ];
    for (src, ty, gv) in intros {
        let (t, g, _) = judge(&ctx, &co(src, &["x"]))?;
        ensure((t.as_str(), g.as_str()) == (ty, gv), || format!("{src}: {t} at {g}"))?;
    }
    // F(U B1 * U B2) and B1 * B2 are inter-derivable, and both round trips
    // observe the same components
    let empty = Context::new();
    let (_, to) = load_co("iso_to.cbpv")?;
    let (_, from) = load_co("iso_from.cbpv")?;
    let (to_ty, _, _) = judge(&empty, &to)?;
    let (from_ty, _, _) = judge(&empty, &from)?;
    ensure(to_ty == "F^1 (U F^1 Unit * U F^2 Unit)", || format!("iso_to: {to_ty}"))?;
    ensure(from_ty == "F^1 Unit * F^2 Unit", || format!("iso_from: {from_ty}"))?;
    let tensor = "(return^1 (), return^2 ())";
    let there = format!("case^1 {tensor} of (a, b) -> return^1 (a, b)");
    let back = format!("let p <-^1 {there} in case^1 p of (a, b) -> (a!, b!)");
    let pair = "return^1 ({return^1 ()}, {return^2 ()})";
    let back2 = format!("let p <-^1 {pair} in case^1 p of (a, b) -> (a!, b!)");
    let there2 = format!("case^1 {back2} of (a, b) -> return^1 (a, b)");
    let obs = |m: &str, side: &str| format!("case^1 {m} of (a, b) -> {side}!");
    let (bt, _, _) = judge(&empty, &co(&back, &[]))?;
    let (tt, _, _) = judge(&empty, &co(&there2, &[]))?;
    ensure(bt == from_ty && tt == to_ty, || format!("round trips land at {bt} and {tt}"))?;
    for side in ["a", "b"] {
        let direct = judge(&empty, &co(&obs(tensor, side), &[]))?.2;
        let round = judge(&empty, &co(&obs(&back, side), &[]))?.2;
        ensure(direct == round, || format!("tensor round trip: {direct} vs {round}"))?;
        let unpack = |m: &str| format!("let p <-^1 {m} in case^1 p of (a, b) -> {side}!");
        let direct = judge(&empty, &co(&unpack(pair), &[]))?.2;
        let round = judge(&empty, &co(&unpack(&there2), &[]))?.2;
        ensure(direct == round, || format!("pair round trip: {direct} vs {round}"))?;
    }
    Ok("four products type and run; tensor iso holds both ways".into())
}

fn main() {
    let criteria: [(u32, &str, Duration, fn() -> Verdict); 11] = [
        (1, "tick accounting", Duration::from_secs(1), tick_accounting),
        (2, "subeffecting", Duration::from_secs(30), subeffecting),
        (3, "effect soundness", Duration::from_secs(60), effect_soundness),
        (4, "determinism", Duration::from_secs(60), determinism),
        (5, "coeffect golden values", Duration::from_secs(1), coeffect_golden),
        (6, "sub-coeffecting", Duration::from_secs(60), subcoeffecting),
        (7, "coeffect soundness", Duration::from_secs(60), coeffect_soundness),
        (8, "resource soundness", Duration::from_secs(60), resource_soundness),
        (9, "translation preservation", Duration::from_secs(120), preservation),
        (10, "canonicality", Duration::from_secs(300), canonicality),
        (11, "products", Duration::from_secs(5), products),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (n, name, limit, f) in criteria {
        if !filter.is_empty() && !filter.iter().any(|s| name.contains(s.as_str()) || *s == n.to_string()) {
            continue;
        }
        let start = Instant::now();
        let verdict = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let took = start.elapsed();
        let verdict = match verdict {
            Ok(d) if took > limit => Err(format!("{d}, but took {took:.2?} (limit {limit:?})")),
            v => v,
        };
        match verdict {
            Ok(d) => println!("criterion {n:>2} {name}: PASS ({took:.2?}) {d}"),
            Err(e) => {
                failed += 1;
                println!("criterion {n:>2} {name}: FAIL ({took:.2?}) {e}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
