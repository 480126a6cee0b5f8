//! The four subcommands. Each returns a report body or a diagnostic.

use std::path::Path;

use gradium::coeffect_eval::{ceval_value, run as co_run, top_env, RunOptions, Semantics, CW};
use gradium::coeffect_system::{co_check, elaborate, elaborate_value, EVal};
use gradium::diag::{step_budget, EvalError, TypeError};
use gradium::effect_eval::{eval_comp, eval_value};
use gradium::effect_system::{check_comp, check_value, infer_comp};
use gradium::env::Env;
use gradium::grading::{Algebra, CoeffectAlgebra, EffectAlgebra, GradeVec};
use gradium::harness::{gen_env, run_suite_with, Exec, GenConfig, SemanticEnv, Suite};
use gradium::syntax::{declared_mode, parse_program, parse_value, Context, Grades, Mode, ParseError, Program, Term};
use gradium::translate::{
    check_preservation, declared_dialect, parse_source, src_check, translate as tr, translate_context, Dialect,
    PreservationError, SrcGrades, SrcGrading, TargetGrading,
};

use crate::bindings::parse_bindings;
use crate::report::{
    Body, CheckReport, Counterexample, Diagnostic, Graded, Kind, RunReport, SoundnessReport, TranslateReport, Usage,
};
use crate::System;

/// A finished command. `failure` is set when the command ran to the end
/// but found a property violation or defect.
pub struct Outcome {
    pub body: Body,
    pub failure: Option<Kind>,
}

type CResult = Result<Outcome, Diagnostic>;

fn ok(body: Body) -> CResult {
    Ok(Outcome { body, failure: None })
}

fn parse_diag(e: ParseError) -> Diagnostic {
    Diagnostic {
        line: Some(e.line),
        col: Some(e.col),
        ..Diagnostic::new(Kind::Parse, Some("parse"), e.msg)
    }
}

fn type_diag(e: TypeError) -> Diagnostic {
    Diagnostic::new(Kind::Type, Some(e.rule), e.msg)
}

fn grade_diag(e: TypeError) -> Diagnostic {
    Diagnostic::new(Kind::Grade, Some(e.rule), e.msg)
}

/// On checked input only a refusal is the user's fault.
fn eval_diag(e: EvalError) -> Diagnostic {
    match &e {
        EvalError::Refused(m) => Diagnostic::usage(m.clone()),
        EvalError::Violation { rule, .. } | EvalError::Junk { rule } => {
            Diagnostic::new(Kind::Defect, Some(rule), e.to_string())
        }
        EvalError::Stuck(_) => Diagnostic::new(Kind::Defect, Some("stuck"), e.to_string()),
        EvalError::Budget(_) => Diagnostic::new(Kind::Defect, Some("budget"), e.to_string()),
    }
}

fn read(file: &Path) -> Result<String, Diagnostic> {
    std::fs::read_to_string(file).map_err(|e| Diagnostic::usage(format!("cannot read {}: {e}", file.display())))
}

fn effect_algebra(name: Option<&str>) -> Result<EffectAlgebra, Diagnostic> {
    EffectAlgebra::by_name(name.unwrap_or("nat-cost")).map_err(|e| Diagnostic::usage(e.to_string()))
}

fn coeffect_algebra(name: Option<&str>) -> Result<CoeffectAlgebra, Diagnostic> {
    CoeffectAlgebra::by_name(name.unwrap_or("nat-usage")).map_err(|e| Diagnostic::usage(e.to_string()))
}

fn system_for(system: Option<System>, src: &str) -> System {
    system.unwrap_or(match declared_mode(src) {
        Some(Mode::Coeffect) => System::Coeffect,
        _ => System::Effect,
    })
}

fn graded(ctx: &Context, gv: &GradeVec) -> Vec<Graded> {
    ctx.entries
        .iter()
        .zip(&gv.0)
        .map(|((n, _), g)| Graded { name: n.to_string(), grade: g.to_string() })
        .collect()
}

/// Reads a grade per context entry from `x=2,y=0`.
fn grade_list(alg: &CoeffectAlgebra, ctx: &Context, src: &str) -> Result<GradeVec, Diagnostic> {
    let bs = parse_bindings(src).map_err(Diagnostic::usage)?;
    let mut out = Vec::new();
    for (n, _) in &ctx.entries {
        let Some((_, g)) = bs.iter().find(|(k, _)| *k == n.0) else {
            return Err(Diagnostic::usage(format!("no grade given for `{n}`")));
        };
        out.push(alg.parse(g).map_err(|e| Diagnostic::usage(e.to_string()))?);
    }
    if let Some((k, _)) = bs.iter().find(|(k, _)| !ctx.entries.iter().any(|(n, _)| n.0 == *k)) {
        return Err(Diagnostic::usage(format!("`{k}` is not in the program's context")));
    }
    Ok(GradeVec(out))
}

fn env_bindings(ctx: &Context, src: Option<&str>) -> Result<Vec<Option<String>>, Diagnostic> {
    let bs = parse_bindings(src.unwrap_or("")).map_err(Diagnostic::usage)?;
    if let Some((k, _)) = bs.iter().find(|(k, _)| !ctx.entries.iter().any(|(n, _)| n.0 == *k)) {
        return Err(Diagnostic::usage(format!("`{k}` is not in the program's context")));
    }
    Ok(ctx
        .entries
        .iter()
        .map(|(n, _)| bs.iter().find(|(k, _)| *k == n.0).map(|(_, v)| v.clone()))
        .collect())
}

fn load(src: &str, grades: Grades<'_>) -> Result<Program, Diagnostic> {
    parse_program(src, grades).map_err(parse_diag)
}

pub fn check(
    file: &Path,
    system: Option<System>,
    algebra: Option<&str>,
    expect_effect: Option<&str>,
    expect_grades: Option<&str>,
) -> CResult {
    let src = read(file)?;
    match system_for(system, &src) {
        System::Effect => {
            if expect_grades.is_some() {
                return Err(Diagnostic::usage("--expect-grades needs --system coeffect"));
            }
            let alg = effect_algebra(algebra)?;
            let p = load(&src, Grades::Effect(&alg))?;
            let (ty, e) = infer_comp(&alg, &p.context, &p.body).map_err(type_diag)?;
            if let Some(b) = expect_effect {
                let bound = alg.parse(b).map_err(|e| Diagnostic::usage(e.to_string()))?;
                check_comp(&alg, &p.context, &p.body, &ty, bound).map_err(grade_diag)?;
            }
            ok(Body::Check(CheckReport {
                mode: "effect".into(),
                algebra: alg.name().into(),
                ty: ty.to_string(),
                effect: Some(e.to_string()),
                grades: None,
            }))
        }
        System::Coeffect | System::Resource => {
            if expect_effect.is_some() {
                return Err(Diagnostic::usage("--expect-effect needs --system effect"));
            }
            let alg = coeffect_algebra(algebra)?;
            let p = load(&src, Grades::Coeffect(&alg))?;
            let el = elaborate(&alg, &p.context, &p.body).map_err(type_diag)?;
            if let Some(g) = expect_grades {
                let gv = grade_list(&alg, &p.context, g)?;
                co_check(&alg, &p.context, &Term::Comp(p.body.clone()), &gv).map_err(grade_diag)?;
            }
            ok(Body::Check(CheckReport {
                mode: "coeffect".into(),
                algebra: alg.name().into(),
                ty: el.ty.to_string(),
                effect: None,
                grades: Some(graded(&p.context, &el.comp.gv)),
            }))
        }
    }
}

const JUNK: &str = "<junk>";

pub fn run(
    file: &Path,
    system: Option<System>,
    algebra: Option<&str>,
    env: Option<&str>,
    grades: Option<&str>,
    usage: bool,
) -> CResult {
    let src = read(file)?;
    match system_for(system, &src) {
        System::Effect => {
            if grades.is_some() || usage {
                return Err(Diagnostic::usage("--grades and --usage need --system coeffect or resource"));
            }
            run_effect(&src, algebra, env)
        }
        System::Coeffect => run_coeffect(&src, algebra, env, grades, usage, Semantics::General),
        System::Resource => run_coeffect(&src, algebra, env, grades, usage, Semantics::Resource),
    }
}

fn defaults(alg: Algebra, ctx: &Context) -> SemanticEnv {
    let cfg = GenConfig { max_depth: 0, ..GenConfig::new(alg) };
    gen_env(&cfg, ctx)
}

fn run_effect(src: &str, algebra: Option<&str>, env: Option<&str>) -> CResult {
    let alg = effect_algebra(algebra)?;
    let p = load(src, Grades::Effect(&alg))?;
    let (ty, stat) = infer_comp(&alg, &p.context, &p.body).map_err(type_diag)?;
    let given = env_bindings(&p.context, env)?;
    let SemanticEnv::Effect(mut vals) = defaults(Algebra::Effect(alg.clone()), &p.context) else {
        unreachable!("effect algebra yields an effect environment")
    };
    for (k, text) in given.iter().enumerate() {
        let Some(text) = text else { continue };
        let (name, a) = &p.context.entries[k];
        if text == JUNK {
            return Err(Diagnostic::new(Kind::Usage, Some("env-junk"), format!("`{name}`: junk needs --system resource")));
        }
        let v = parse_value(text, Grades::Effect(&alg), &[]).map_err(parse_diag)?;
        check_value(&alg, &Context::new(), &v, a)
            .map_err(|e| Diagnostic::new(Kind::Type, Some(e.rule), format!("value for `{name}`: {}", e.msg)))?;
        vals[k] = v;
    }
    let budget = step_budget();
    let ws = vals
        .iter()
        .map(|v| eval_value(&alg, &Env::new(), v, budget))
        .collect::<Result<Vec<_>, _>>()
        .map_err(eval_diag)?;
    let (t, e) = eval_comp(&alg, &Env::from_outer(ws), &p.body, budget).map_err(eval_diag)?;
    let within = alg.leq(e, stat).unwrap_or(false);
    let body = Body::Run(RunReport {
        mode: "effect".into(),
        algebra: alg.name().into(),
        ty: ty.to_string(),
        static_effect: Some(stat.to_string()),
        terminal: t.to_string(),
        effect: Some(e.to_string()),
        ..RunReport::default()
    });
    Ok(Outcome { body, failure: (!within).then_some(Kind::Defect) })
}

fn run_coeffect(
    src: &str,
    algebra: Option<&str>,
    env: Option<&str>,
    grades: Option<&str>,
    usage: bool,
    sem: Semantics,
) -> CResult {
    let alg = coeffect_algebra(algebra)?;
    let p = load(src, Grades::Coeffect(&alg))?;
    let el = elaborate(&alg, &p.context, &p.body).map_err(type_diag)?;
    let gv = match grades {
        Some(g) => {
            let gv = grade_list(&alg, &p.context, g)?;
            co_check(&alg, &p.context, &Term::Comp(p.body.clone()), &gv).map_err(grade_diag)?;
            gv
        }
        None => el.comp.gv.clone(),
    };
    let resource = sem == Semantics::Resource;
    let zero = |k: usize| gv.get(k).is_some_and(|g| alg.is_zero(g));
    let given = env_bindings(&p.context, env)?;
    let SemanticEnv::Coeffect(defaults) = defaults(Algebra::Coeffect(alg.clone()), &p.context) else {
        unreachable!("coeffect algebra yields a coeffect environment")
    };
    // None marks a junk slot
    let mut vals: Vec<Option<EVal>> = Vec::new();
    for (k, (name, a)) in p.context.entries.iter().enumerate() {
        match &given[k] {
            Some(t) if t == JUNK => {
                if !(resource && zero(k)) {
                    return Err(Diagnostic::new(
                        Kind::Usage,
                        Some("env-junk"),
                        format!("`{name}`: junk is only allowed in zero-graded slots under --system resource"),
                    ));
                }
                vals.push(None);
            }
            Some(t) => {
                let v = parse_value(t, Grades::Coeffect(&alg), &[]).map_err(parse_diag)?;
                let (b, ev) = elaborate_value(&alg, &Context::new(), &v)
                    .map_err(|e| Diagnostic::new(Kind::Type, Some(e.rule), format!("value for `{name}`: {}", e.msg)))?;
                if b != *a {
                    return Err(Diagnostic::new(
                        Kind::Type,
                        Some("env"),
                        format!("value for `{name}` has type {b}, expected {a}"),
                    ));
                }
                vals.push(Some(ev));
            }
            None if resource && zero(k) => vals.push(None),
            None => vals.push(Some(defaults[k].clone())),
        }
    }
    let budget = step_budget();
    let empty = GradeVec(Vec::new());
    let ws = vals
        .iter()
        .map(|v| match v {
            Some(ev) => ceval_value(&alg, &empty, &Env::new(), ev, budget),
            None => Ok(CW::Junk),
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(eval_diag)?;
    let out = co_run(&alg, sem, &gv, &top_env(ws), &el.comp, RunOptions { budget, usage }).map_err(eval_diag)?;
    let mut failure = None;
    let usage = out.usage.as_ref().map(|us| {
        p.context
            .entries
            .iter()
            .zip(us)
            .zip(&gv.0)
            .map(|(((n, _), &used), g)| {
                let within = used <= g.raw();
                if !within {
                    failure = Some(Kind::Defect);
                }
                Usage { name: n.to_string(), used, grade: g.to_string(), within }
            })
            .collect()
    });
    ok(Body::Run(RunReport {
        mode: "coeffect".into(),
        algebra: alg.name().into(),
        semantics: Some(if resource { "resource" } else { "general" }.into()),
        ty: el.ty.to_string(),
        grades: Some(graded(&p.context, &gv)),
        terminal: out.terminal.to_string(),
        steps: Some(out.steps),
        usage,
        ..RunReport::default()
    }))
    .map(|o| Outcome { failure, ..o })
}

fn show_context(ctx: &Context) -> String {
    ctx.entries.iter().map(|(n, t)| format!("{n} : {t}")).collect::<Vec<_>>().join(", ")
}

pub fn translate(file: &Path, dialect: Option<&str>, algebra: Option<&str>, check: bool) -> CResult {
    let src = read(file)?;
    let header = declared_dialect(&src).map_err(parse_diag)?;
    let flag = dialect.map(|d| d.parse::<Dialect>().map_err(Diagnostic::usage)).transpose()?;
    let d = match (flag, header) {
        (Some(f), Some(h)) if f != h => {
            return Err(Diagnostic::usage(format!("--dialect {f} contradicts the file's `-- dialect: {h}` header")))
        }
        (Some(d), _) | (None, Some(d)) => d,
        (None, None) => return Err(Diagnostic::usage("no dialect: pass --dialect or add a `-- dialect:` header")),
    };
    let ea;
    let ca;
    let grades = if d.lang.is_effect() {
        ea = effect_algebra(algebra)?;
        SrcGrades::Effect(&ea)
    } else {
        ca = coeffect_algebra(algebra)?;
        SrcGrades::Coeffect(&ca)
    };
    let alg_name = match grades {
        SrcGrades::Effect(a) => a.name(),
        SrcGrades::Coeffect(a) => a.name(),
    };
    let prog = parse_source(&src, d.lang, grades).map_err(parse_diag)?;
    let target_ctx = translate_context(d, grades, &prog.context);
    let names = target_ctx.names();
    let source_grading = |g: &SrcGrading| match g {
        SrcGrading::Effect(e) => format!("effect {e}"),
        SrcGrading::Pure => "pure".to_string(),
        SrcGrading::Vector(v) => format!("grades {v}"),
        SrcGrading::Linear => "linear".to_string(),
    };
    let report = if check {
        let p = check_preservation(d, grades, &prog.context, &prog.body).map_err(|e| match e {
            PreservationError::Source(e) => type_diag(e),
            PreservationError::Target(e) => Diagnostic::new(Kind::Defect, Some(e.rule), format!("translation rejected: {}", e.msg)),
            PreservationError::Shape(m) => Diagnostic::new(Kind::Defect, Some("preservation"), m),
        })?;
        TranslateReport {
            dialect: d.to_string(),
            algebra: alg_name.into(),
            source_type: p.source.ty.to_string(),
            source_grading: source_grading(&p.source.grading),
            target: gradium::syntax::show_comp(&p.target, &names),
            target_context: Some(show_context(&p.context)),
            target_type: Some(p.ty.to_string()),
            target_grading: Some(match &p.grading {
                TargetGrading::Effect(e) => format!("effect {e}"),
                TargetGrading::Vector { declared, .. } => format!("grades {declared}"),
            }),
            checked: true,
        }
    } else {
        let j = src_check(d, grades, &prog.context, &prog.body).map_err(type_diag)?;
        let target = tr(d, grades, &prog.context, &prog.body).map_err(|e| Diagnostic::new(Kind::Defect, Some(e.rule), e.msg))?;
        TranslateReport {
            dialect: d.to_string(),
            algebra: alg_name.into(),
            source_type: j.ty.to_string(),
            source_grading: source_grading(&j.grading),
            target: gradium::syntax::show_comp(&target, &names),
            checked: false,
            ..TranslateReport::default()
        }
    };
    ok(Body::Translate(report))
}

pub fn soundness(suite: &str, trials: usize, seed: u64, algebra: Option<&str>, depth: u32, sequential: bool) -> CResult {
    let s: Suite = suite.parse().map_err(Diagnostic::usage)?;
    let alg = match (algebra, s.default_algebra()) {
        (None, a) => a,
        // determinism runs under either kind of algebra
        (Some(n), _) if s == Suite::Determinism => match EffectAlgebra::by_name(n) {
            Ok(a) => Algebra::Effect(a),
            Err(_) => Algebra::Coeffect(coeffect_algebra(Some(n))?),
        },
        (Some(n), Algebra::Effect(_)) => Algebra::Effect(effect_algebra(Some(n))?),
        (Some(n), Algebra::Coeffect(_)) => Algebra::Coeffect(coeffect_algebra(Some(n))?),
    };
    let cfg = GenConfig { seed, trials, max_depth: depth, ..GenConfig::new(alg) };
    let exec = if sequential { Exec::Sequential } else { Exec::default_for_build() };
    let r = run_suite_with(s, &cfg, exec).map_err(Diagnostic::usage)?;
    let cx = |fs: &[gradium::harness::Failure]| -> Vec<Counterexample> {
        fs.iter()
            .map(|f| Counterexample { seed: f.seed, term: f.term.clone(), message: f.message.clone(), rule: f.rule.clone() })
            .collect()
    };
    let failure = if !r.defects.is_empty() {
        Some(Kind::Defect)
    } else if !r.failures.is_empty() {
        Some(Kind::Property)
    } else {
        None
    };
    let body = Body::Soundness(SoundnessReport {
        suite: r.suite.clone(),
        algebra: r.algebra.clone(),
        seed: r.seed,
        trials: r.trials,
        passed: r.passed,
        failures: cx(&r.failures),
        defects: cx(&r.defects),
        notes: r.notes.clone(),
    });
    Ok(Outcome { body, failure })
}
