//! The soundness property suites.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coeffect_eval::{run, RunOptions, Semantics};
use crate::coeffect_system::{co_check, elaborate};
use crate::diag::{step_budget, EvalError, TypeError};
use crate::effect_eval::{eval_comp, Terminal};
use crate::effect_system::{check_comp, infer_comp};
use crate::grading::{Algebra, CoeffectAlgebra, EffectAlgebra, GradeVec};
use crate::syntax::{show_comp, Comp, CompType, Context, Term};
use crate::translate::interp::eval_cbv;
use crate::translate::{check_preservation, Dialect, Lang, PreservationError, SrcGrades};

use super::oracle::{all_vectors, derivable, minimal_vectors, Enumerator};
use super::shrink::shrink;
use super::{gen_env, gen_shaped, GenConfig, SemanticEnv, Shape, SrcGen};

/// A named property suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Determinism,
    EffSound,
    Subeff,
    CoSound,
    ResSound,
    Subcoeff,
    Preserve(Dialect),
    Canonical,
}

impl Suite {
    pub fn all() -> Vec<Suite> {
        let mut v = vec![
            Suite::Determinism,
            Suite::EffSound,
            Suite::Subeff,
            Suite::CoSound,
            Suite::ResSound,
            Suite::Subcoeff,
        ];
        v.extend(Dialect::ALL.iter().map(|&d| Suite::Preserve(d)));
        v.push(Suite::Canonical);
        v
    }

    /// The algebra used when none is given.
    pub fn default_algebra(self) -> Algebra {
        match self {
            Suite::Determinism | Suite::EffSound | Suite::Subeff => Algebra::Effect(EffectAlgebra::nat_cost()),
            Suite::Preserve(d) if d.lang.is_effect() => Algebra::Effect(EffectAlgebra::nat_cost()),
            _ => Algebra::Coeffect(CoeffectAlgebra::nat_usage()),
        }
    }

    /// Rejects algebras the suite cannot run under.
    pub fn accepts(self, alg: &Algebra) -> Result<(), String> {
        let effect = matches!(alg, Algebra::Effect(_));
        let need = match self {
            Suite::Determinism => return Ok(()),
            Suite::EffSound | Suite::Subeff => Some(true),
            Suite::Preserve(d) => Some(d.lang.is_effect()),
            _ => Some(false),
        };
        if need.is_some_and(|n| n != effect) {
            let kind = if need == Some(true) { "an effect" } else { "a coeffect" };
            return Err(format!("suite {self} needs {kind} algebra"));
        }
        match (self, alg) {
            (Suite::ResSound, Algebra::Coeffect(a)) if !a.flags().all() => {
                Err(format!("suite {self} needs an algebra satisfying the resource axioms, not {}", a.name()))
            }
            (Suite::Canonical, Algebra::Coeffect(a)) if a.name() != "nat-usage" => {
                Err(format!("suite {self} compares against nat-usage derivations, not {}", a.name()))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Suite::Determinism => f.write_str("determinism"),
            Suite::EffSound => f.write_str("eff-sound"),
            Suite::Subeff => f.write_str("subeff"),
            Suite::CoSound => f.write_str("co-sound"),
            Suite::ResSound => f.write_str("res-sound"),
            Suite::Subcoeff => f.write_str("subcoeff"),
            Suite::Preserve(d) => write!(f, "preserve-{d}"),
            Suite::Canonical => f.write_str("canonical"),
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if let Some(d) = s.strip_prefix("preserve-") {
            return d.parse().map(Suite::Preserve);
        }
        Suite::all()
            .into_iter()
            .find(|x| x.to_string() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

/// One failing (or defective) trial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub seed: u64,
    /// The minimized term.
    pub term: String,
    pub message: String,
    pub rule: Option<String>,
}

/// The merged outcome of a suite, in seed order.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub algebra: String,
    pub seed: u64,
    pub trials: usize,
    pub passed: usize,
    pub failures: Vec<Failure>,
    pub defects: Vec<Failure>,
    pub notes: Vec<String>,
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.defects.is_empty()
    }
}

/// How trials are scheduled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Exec {
    pub fn default_for_build() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

fn map_trials<T: Send>(exec: Exec, n: usize, f: impl Fn(usize) -> T + Sync + Send) -> Vec<T> {
    #[cfg(feature = "parallel")]
    if exec == Exec::Parallel {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (0..n).map(f).collect()
}

#[derive(Clone, Debug)]
enum Outcome {
    Pass { family: Option<(String, bool)> },
    Fail(Failure),
    Defect(Failure),
}

fn pass() -> Outcome {
    Outcome::Pass { family: None }
}

fn failure(seed: u64, term: String, message: impl Into<String>, rule: Option<&str>) -> Failure {
    Failure { seed, term, message: message.into(), rule: rule.map(str::to_string) }
}

fn eval_rule(e: &EvalError) -> Option<&str> {
    match e {
        EvalError::Violation { rule, .. } | EvalError::Junk { rule } => Some(rule),
        _ => None,
    }
}

fn type_rule(e: &TypeError) -> Option<&str> {
    Some(e.rule)
}

/// Runs `suite` under `cfg` with the build's default scheduling.
pub fn run_suite(suite: Suite, cfg: &GenConfig) -> Result<SuiteReport, String> {
    run_suite_with(suite, cfg, Exec::default_for_build())
}

pub fn run_suite_with(suite: Suite, cfg: &GenConfig, exec: Exec) -> Result<SuiteReport, String> {
    suite.accepts(&cfg.algebra)?;
    let start = Instant::now();
    let mut notes = Vec::new();
    let outcomes: Vec<Outcome> = match suite {
        Suite::Preserve(d) => map_trials(exec, cfg.trials, |k| preserve_trial(d, &cfg.at_seed(seed_of(cfg, k)))),
        Suite::Canonical => {
            let Algebra::Coeffect(alg) = &cfg.algebra else { unreachable!() };
            let en = Enumerator::new(alg, 2, 1);
            notes.push(format!("{} enumerated terms and {} generated terms", en.len(), cfg.trials));
            let ctx = en.context();
            let mut out = map_trials(exec, en.len(), |i| canonical_prop(alg, &ctx, &en.get(i), i as u64));
            out.extend(map_trials(exec, cfg.trials, |k| canonical_trial(alg, &cfg.at_seed(seed_of(cfg, k)))));
            out
        }
        _ => map_trials(exec, cfg.trials, |k| cbpv_trial(suite, &cfg.at_seed(seed_of(cfg, k)))),
    };
    let mut report = SuiteReport {
        suite: suite.to_string(),
        algebra: match &cfg.algebra {
            Algebra::Effect(a) => a.name().to_string(),
            Algebra::Coeffect(a) => a.name().to_string(),
        },
        seed: cfg.seed,
        trials: outcomes.len(),
        passed: 0,
        failures: Vec::new(),
        defects: Vec::new(),
        notes,
        elapsed: Duration::ZERO,
    };
    let mut families: BTreeMap<String, bool> = BTreeMap::new();
    for o in outcomes {
        match o {
            Outcome::Pass { family } => {
                report.passed += 1;
                if let Some((name, rejected)) = family {
                    *families.entry(name).or_default() |= rejected;
                }
            }
            Outcome::Fail(f) => report.failures.push(f),
            Outcome::Defect(f) => report.defects.push(f),
        }
    }
    if suite == Suite::Subeff {
        for (name, rejected) in &families {
            if *rejected {
                report.notes.push(format!("family {name}: strict tightening rejected"));
            } else {
                report.failures.push(failure(cfg.seed, String::new(), format!("family {name}: no strict tightening was rejected"), None));
            }
        }
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

fn seed_of(cfg: &GenConfig, k: usize) -> u64 {
    cfg.seed.wrapping_add(k as u64)
}

// ---- CBPV suites ----

fn cbpv_trial(suite: Suite, cfg: &GenConfig) -> Outcome {
    let shape = match suite {
        Suite::EffSound => Shape { open: false, goal: None, returner: true },
        _ => Shape { open: true, ..Shape::default() },
    };
    let g = gen_shaped(cfg, &shape);
    let env = gen_env(cfg, &g.context);
    let prop = |m: &Comp| cbpv_prop(suite, cfg, &g.context, &env, m);
    match prop(&g.comp) {
        Outcome::Fail(f) => {
            let small = shrink(&g.comp, |c| matches!(prop(c), Outcome::Fail(_)));
            match prop(&small) {
                Outcome::Fail(f2) => Outcome::Fail(f2),
                _ => Outcome::Fail(f),
            }
        }
        other => other,
    }
}

fn cbpv_prop(suite: Suite, cfg: &GenConfig, ctx: &Context, env: &SemanticEnv, m: &Comp) -> Outcome {
    let term = show_comp(m, &ctx.names());
    let seed = cfg.seed;
    let fail = |msg: String, rule: Option<&str>| Outcome::Fail(failure(seed, term.clone(), msg, rule));
    let defect = |msg: String| Outcome::Defect(failure(seed, term.clone(), msg, None));
    let eval_failure = |e: EvalError| {
        if e.is_defect() {
            defect(e.to_string())
        } else {
            fail(e.to_string(), eval_rule(&e))
        }
    };
    match &cfg.algebra {
        Algebra::Effect(alg) => {
            let (ty, phi) = match infer_comp(alg, ctx, m) {
                Ok(j) => j,
                Err(e) => return fail(format!("does not check: {e}"), type_rule(&e)),
            };
            match suite {
                Suite::Determinism => {
                    let rho = match env.effect_env(alg) {
                        Ok(r) => r,
                        Err(e) => return eval_failure(e),
                    };
                    let a = eval_comp(alg, &rho, m, step_budget());
                    let b = eval_comp(alg, &rho, m, step_budget());
                    match (a, b) {
                        (Ok(a), Ok(b)) if a == b => pass(),
                        (Err(e), _) | (_, Err(e)) => eval_failure(e),
                        (Ok(a), Ok(b)) => fail(format!("runs differ: {} / {} vs {} / {}", a.0, a.1, b.0, b.1), None),
                    }
                }
                Suite::EffSound => {
                    let rho = match env.effect_env(alg) {
                        Ok(r) => r,
                        Err(e) => return eval_failure(e),
                    };
                    match eval_comp(alg, &rho, m, step_budget()) {
                        Ok((Terminal::Return(_), got)) => {
                            if alg.leq(got, phi).unwrap_or(false) {
                                pass()
                            } else {
                                fail(format!("runtime effect {got} exceeds static effect {phi}"), None)
                            }
                        }
                        Ok((t, _)) => defect(format!("returner evaluated to {t}")),
                        Err(e) => eval_failure(e),
                    }
                }
                Suite::Subeff => subeff_prop(alg, ctx, m, &ty, phi, seed, &term),
                _ => unreachable!("suite {suite} under an effect algebra"),
            }
        }
        Algebra::Coeffect(alg) => {
            let el = match elaborate(alg, ctx, m) {
                Ok(el) => el,
                Err(e) => return fail(format!("does not check: {e}"), type_rule(&e)),
            };
            let gamma = el.comp.gv.clone();
            let junk = (suite == Suite::ResSound).then_some(&gamma);
            let rho = match env.coeffect_env(alg, junk) {
                Ok(r) => r,
                Err(e) => return eval_failure(e),
            };
            let opts = RunOptions { budget: step_budget(), usage: false };
            match suite {
                Suite::Determinism => {
                    let a = run(alg, Semantics::General, &gamma, &rho, &el.comp, opts);
                    let b = run(alg, Semantics::General, &gamma, &rho, &el.comp, opts);
                    match (a, b) {
                        (Ok(a), Ok(b)) if a.terminal == b.terminal => pass(),
                        (Err(e), _) | (_, Err(e)) => eval_failure(e),
                        (Ok(a), Ok(b)) => fail(format!("runs differ: {} vs {}", a.terminal, b.terminal), None),
                    }
                }
                Suite::CoSound => match run(alg, Semantics::General, &gamma, &rho, &el.comp, opts) {
                    Ok(_) => pass(),
                    Err(e) => eval_failure(e),
                },
                Suite::ResSound => {
                    let opts = RunOptions { usage: alg.is_nat(), ..opts };
                    match run(alg, Semantics::Resource, &gamma, &rho, &el.comp, opts) {
                        Ok(r) => {
                            let over = r.usage.iter().flatten().zip(&gamma.0).position(|(&u, g)| u > g.raw());
                            match over {
                                None => pass(),
                                Some(k) => fail(
                                    format!("slot {k} used {} times, static grade {}", r.usage.as_ref().unwrap()[k], gamma.0[k]),
                                    None,
                                ),
                            }
                        }
                        Err(e) => eval_failure(e),
                    }
                }
                Suite::Subcoeff => subcoeff_prop(alg, ctx, m, &gamma, &rho, &el.comp, seed, &term),
                _ => unreachable!("suite {suite} under a coeffect algebra"),
            }
        }
    }
}

fn head(b: &CompType) -> &'static str {
    match b {
        CompType::F(..) => "F",
        CompType::Arrow(..) => "->",
        CompType::With(..) => "&",
        CompType::Tensor(..) => "*",
    }
}

fn subeff_prop(
    alg: &EffectAlgebra,
    ctx: &Context,
    m: &Comp,
    ty: &CompType,
    phi: crate::grading::Effect,
    seed: u64,
    term: &str,
) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5ab_e77);
    let n = phi.raw();
    let up: Vec<u64> = (0..=n + 4).filter(|&k| alg.leq(phi, alg.nat(k)).unwrap_or(false)).collect();
    for _ in 0..3 {
        let k = *up.choose(&mut rng).unwrap_or(&n);
        if let Err(e) = check_comp(alg, ctx, m, ty, alg.nat(k)) {
            return Outcome::Fail(failure(seed, term.to_string(), format!("weakening {phi} to {k} rejected: {e}"), type_rule(&e)));
        }
    }
    let mut rejected = false;
    for k in (0..=n + 2).filter(|&k| !alg.leq(phi, alg.nat(k)).unwrap_or(true)) {
        if check_comp(alg, ctx, m, ty, alg.nat(k)).is_ok() {
            return Outcome::Fail(failure(seed, term.to_string(), format!("tightening {phi} to {k} accepted"), None));
        }
        rejected = true;
    }
    Outcome::Pass { family: Some((head(ty).to_string(), rejected)) }
}

#[allow(clippy::too_many_arguments)]
fn subcoeff_prop<'a>(
    alg: &CoeffectAlgebra,
    ctx: &Context,
    m: &Comp,
    gamma: &GradeVec,
    rho: &crate::coeffect_eval::CEnv<'a>,
    el: &'a crate::coeffect_system::EComp,
    seed: u64,
    term: &str,
) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5c0_e77);
    let grades = alg.elements_upto(4);
    let weak = GradeVec(
        gamma
            .0
            .iter()
            .map(|&g| {
                let below: Vec<_> = grades.iter().copied().filter(|&h| alg.leq(h, g).unwrap_or(false)).collect();
                *below.choose(&mut rng).unwrap_or(&g)
            })
            .collect(),
    );
    let fail = |msg: String, rule: Option<&str>| Outcome::Fail(failure(seed, term.to_string(), msg, rule));
    if let Err(e) = co_check(alg, ctx, &Term::Comp(m.clone()), &weak) {
        return fail(format!("weakening {gamma} to {weak} rejected: {e}"), type_rule(&e));
    }
    let opts = RunOptions { budget: step_budget(), usage: false };
    let a = run(alg, Semantics::General, gamma, rho, el, opts);
    let b = run(alg, Semantics::General, &weak, rho, el, opts);
    match (a, b) {
        (Ok(a), Ok(b)) if a.terminal == b.terminal => pass(),
        (Ok(a), Ok(b)) => fail(format!("terminals differ under {weak}: {} vs {}", a.terminal, b.terminal), None),
        (Err(e), _) if e.is_defect() => Outcome::Defect(failure(seed, term.to_string(), e.to_string(), None)),
        (Err(e), _) => fail(format!("run at {gamma}: {e}"), eval_rule(&e)),
        (_, Err(e)) => fail(format!("run at weakened {weak}: {e}"), eval_rule(&e)),
    }
}

// ---- canonicality ----

fn canonical_trial(alg: &CoeffectAlgebra, cfg: &GenConfig) -> Outcome {
    let cfg = GenConfig { max_depth: cfg.max_depth.min(4), ..cfg.clone() };
    let g = gen_shaped(&cfg, &Shape { open: true, ..Shape::default() });
    let prop = |m: &Comp| canonical_prop(alg, &g.context, m, cfg.seed);
    match prop(&g.comp) {
        Outcome::Fail(f) => {
            let small = shrink(&g.comp, |c| matches!(prop(c), Outcome::Fail(_)));
            match prop(&small) {
                Outcome::Fail(f2) => Outcome::Fail(f2),
                _ => Outcome::Fail(f),
            }
        }
        other => other,
    }
}

fn canonical_prop(alg: &CoeffectAlgebra, ctx: &Context, m: &Comp, seed: u64) -> Outcome {
    let term = show_comp(m, &ctx.names());
    let minimal = match minimal_vectors(ctx, m) {
        Ok((_, a)) => a,
        Err(u) => return Outcome::Defect(failure(seed, term, format!("oracle cannot type the term: {}", u.0), None)),
    };
    let n = ctx.len();
    let declared = if n <= 3 {
        all_vectors(n, 3)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..64).map(|_| (0..n).map(|_| rng.gen_range(0..=3)).collect()).collect()
    };
    let t = Term::Comp(m.clone());
    for d in declared {
        let gv = GradeVec(d.iter().map(|&k| alg.nat(k)).collect());
        let checker = co_check(alg, ctx, &t, &gv);
        let oracle = derivable(&minimal, &d);
        if checker.is_ok() != oracle {
            let verdict = match &checker {
                Ok(()) => "checker accepts".to_string(),
                Err(e) => format!("checker rejects ({e})"),
            };
            let deriv = if oracle { "a derivation exists" } else { "no derivation exists" };
            return Outcome::Fail(failure(seed, term, format!("declared {gv}: {verdict} but {deriv}"), None));
        }
    }
    pass()
}

// ---- translations ----

fn preserve_trial(d: Dialect, cfg: &GenConfig) -> Outcome {
    let ea_default = EffectAlgebra::nat_cost();
    let ca_default = CoeffectAlgebra::nat_usage();
    let (ea, ca) = match &cfg.algebra {
        Algebra::Effect(a) => (a, &ca_default),
        Algebra::Coeffect(a) => (&ea_default, a),
    };
    let mut rng = cfg.rng();
    let pool = match &cfg.algebra {
        Algebra::Coeffect(a) => cfg.coeffect_pool(a),
        Algebra::Effect(_) => cfg.coeffect_pool(&ca_default),
    };
    let mut g = SrcGen::new(d, ea, ca, &mut rng, pool);
    let ctx = g.context(2);
    let goal = g.ty(2);
    let e = g.term(&ctx, &goal, cfg.max_depth);
    let grades = match d.lang {
        Lang::Effect | Lang::Monadic => SrcGrades::Effect(ea),
        _ => SrcGrades::Coeffect(ca),
    };
    let term = e.to_string();
    let seed = cfg.seed;
    let pre = match check_preservation(d, grades, &ctx, &e) {
        Ok(p) => p,
        Err(PreservationError::Source(err)) => {
            return Outcome::Defect(failure(seed, term, format!("generated source term is ill typed: {err}"), Some(err.rule)))
        }
        Err(PreservationError::Target(err)) => return Outcome::Fail(failure(seed, term, format!("translation rejected: {err}"), Some(err.rule))),
        Err(err) => return Outcome::Fail(failure(seed, term, err.to_string(), None)),
    };
    if d.lang == Lang::Effect && ctx.is_empty() && ea.name() == "nat-cost" {
        let fuel = step_budget();
        let src = eval_cbv(&e, fuel);
        let tgt = eval_comp(ea, &crate::env::Env::new(), &pre.target, fuel);
        match (src, tgt) {
            (Ok((_, n)), Ok((_, eff))) if n == eff.raw() => {}
            (Ok((_, n)), Ok((_, eff))) => {
                return Outcome::Fail(failure(seed, term, format!("source ticks {n}, translation ticks {eff}"), None))
            }
            (Err(err), _) => return Outcome::Defect(failure(seed, term, format!("source evaluation: {err}"), None)),
            (_, Err(err)) => return Outcome::Defect(failure(seed, term, format!("target evaluation: {err}"), None)),
        }
    }
    pass()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(alg: Algebra, trials: usize) -> GenConfig {
        GenConfig { trials, ..GenConfig::new(alg) }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::all() {
            assert_eq!(s.to_string().parse::<Suite>().unwrap(), s);
        }
        assert!("preserve-cbn-eff".parse::<Suite>().is_err());
    }

    #[test]
    fn effect_soundness_on_two_ticks() {
        let alg = EffectAlgebra::nat_cost();
        let m = crate::syntax::parse_comp("let x <- tick in tick", crate::syntax::Grades::Effect(&alg), &[]).unwrap();
        let c = GenConfig::new(Algebra::Effect(alg.clone()));
        let out = cbpv_prop(Suite::EffSound, &c, &Context::new(), &SemanticEnv::Effect(Vec::new()), &m);
        assert!(matches!(out, Outcome::Pass { .. }), "{out:?}");
        let (_, phi) = infer_comp(&alg, &Context::new(), &m).unwrap();
        let (_, got) = eval_comp(&alg, &crate::env::Env::new(), &m, 100).unwrap();
        assert_eq!((got.raw(), phi.raw()), (2, 2));
    }

    #[test]
    fn wrong_algebra_is_refused() {
        let c = cfg(Algebra::Effect(EffectAlgebra::nat_cost()), 1);
        assert!(run_suite(Suite::CoSound, &c).is_err());
        let c = cfg(Algebra::Coeffect(CoeffectAlgebra::nat_exact()), 1);
        assert!(run_suite(Suite::Canonical, &c).is_err());
    }

    #[test]
    fn small_runs_pass() {
        for s in [Suite::Determinism, Suite::EffSound, Suite::Subeff] {
            let r = run_suite(s, &cfg(s.default_algebra(), 40)).unwrap();
            assert!(r.ok(), "{s}: {:?} {:?}", r.failures.first(), r.defects.first());
        }
        for s in [Suite::CoSound, Suite::ResSound, Suite::Subcoeff, Suite::Determinism] {
            let r = run_suite(s, &cfg(Algebra::Coeffect(CoeffectAlgebra::nat_usage()), 40)).unwrap();
            assert!(r.ok(), "{s}: {:?} {:?}", r.failures.first(), r.defects.first());
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let c = cfg(Algebra::Effect(EffectAlgebra::nat_cost()), 30);
        let a = run_suite_with(Suite::EffSound, &c, Exec::Sequential).unwrap();
        let b = run_suite_with(Suite::EffSound, &c, Exec::Parallel).unwrap();
        assert_eq!((a.passed, a.failures, a.defects), (b.passed, b.failures, b.defects));
    }
}
