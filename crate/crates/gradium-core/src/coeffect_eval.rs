//! Derivation-directed evaluation of elaborated coeffect terms: the general
//! instrumented semantics and the resource-tracking semantics with junk.

use std::fmt;

use crate::coeffect_system::{EComp, ECompKind, EVal, EValKind};
use crate::diag::{EvalError, Fuel};
use crate::env::{slot_names, Env};
use crate::grading::{CoeffectAlgebra, Grade, GradeVec};
use crate::syntax::show_comp;

/// Closed values with graded closures and the junk value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CW<'a> {
    Unit,
    Pair(Box<CW<'a>>, Box<CW<'a>>),
    Inl(Box<CW<'a>>),
    Inr(Box<CW<'a>>),
    /// `clo(γ·ρ, {M})`.
    Thunk(GradeVec, CEnv<'a>, &'a EComp),
    /// `clo(γ·ρ, <V1, V2>)`; holds the pair node.
    With(GradeVec, CEnv<'a>, &'a EVal),
    Junk,
}

/// An environment entry; `top` records which top-level slot it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slot<'a> {
    pub w: CW<'a>,
    pub top: Option<usize>,
}

pub type CEnv<'a> = Env<Slot<'a>>;

/// Terminal computations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CTerminal<'a> {
    Return(Grade, CW<'a>),
    /// `clo(γ·ρ, λx^q.M)`; holds the λ node.
    Lam(GradeVec, CEnv<'a>, &'a EComp),
    /// `clo(γ·ρ, <M1, M2>)`; holds the pair node.
    CPair(GradeVec, CEnv<'a>, &'a EComp),
    /// A pair of thunk closures.
    Tensor(Box<CW<'a>>, Box<CW<'a>>),
}

fn show_closure(f: &mut fmt::Formatter<'_>, gv: &GradeVec, env: &CEnv<'_>, body: String) -> fmt::Result {
    write!(f, "clo({gv}·[")?;
    for (k, s) in env.to_outer().into_iter().enumerate() {
        if k > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{}", s.w)?;
    }
    write!(f, "], {body})")
}

impl fmt::Display for CW<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CW::Unit => f.write_str("()"),
            CW::Pair(a, b) => write!(f, "({a}, {b})"),
            CW::Inl(w) => write!(f, "inl {w}"),
            CW::Inr(w) => write!(f, "inr {w}"),
            CW::Junk => f.write_str("<junk>"),
            CW::Thunk(gv, env, m) => {
                let body = format!("{{{}}}", show_comp(&m.erase(), &slot_names(env.len())));
                show_closure(f, gv, env, body)
            }
            CW::With(gv, env, v) => {
                let body = crate::syntax::show_value(&v.erase(), &slot_names(env.len()));
                show_closure(f, gv, env, body)
            }
        }
    }
}

impl fmt::Display for CTerminal<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CTerminal::Return(q, w) => write!(f, "return^{q} {w}"),
            CTerminal::Lam(gv, env, m) | CTerminal::CPair(gv, env, m) => {
                let body = show_comp(&m.erase(), &slot_names(env.len()));
                show_closure(f, gv, env, body)
            }
            CTerminal::Tensor(a, b) => write!(f, "({a}, {b})"),
        }
    }
}

/// Which rule family to evaluate with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Semantics {
    /// Every subterm is evaluated.
    General,
    /// Zero-graded subterms are skipped and bound to junk.
    Resource,
}

/// Options for a run.
#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub budget: u64,
    /// Collect per-slot usage counts (nat algebras only).
    pub usage: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            budget: crate::diag::step_budget(),
            usage: false,
        }
    }
}

/// A completed run.
#[derive(Clone, Debug)]
pub struct Run<'a> {
    pub terminal: CTerminal<'a>,
    pub usage: Option<Vec<u64>>,
    pub steps: u64,
}

/// Per-slot scaled lookup counts of a run, when collected.
pub fn usage_of<'r>(run: &'r Run<'_>) -> Option<&'r [u64]> {
    run.usage.as_deref()
}

struct Eval<'e> {
    alg: &'e CoeffectAlgebra,
    sem: Semantics,
    fuel: Fuel,
    usage: Option<Vec<u64>>,
}

fn stuck(what: &str) -> EvalError {
    EvalError::Stuck(what.to_string())
}

impl Eval<'_> {
    fn rule(&self, general: &'static str, resource: &'static str) -> &'static str {
        match self.sem {
            Semantics::General => general,
            Semantics::Resource => resource,
        }
    }

    /// The side condition `gv ≤ need`.
    fn within(&self, rule: &'static str, gv: &GradeVec, need: &GradeVec) -> Result<(), EvalError> {
        match self.alg.vec_leq(gv, need) {
            Ok(true) => Ok(()),
            Ok(false) => Err(EvalError::violation(rule, format!("grades {gv} do not provide {need}"))),
            Err(e) => Err(EvalError::violation(rule, e.to_string())),
        }
    }

    fn zero_site(&self, q: Grade) -> bool {
        self.sem == Semantics::Resource && self.alg.is_zero(q)
    }

    fn scale(&self, mult: u64, q: Grade) -> u64 {
        mult.saturating_mul(q.raw())
    }

    fn mul(&self, a: Grade, b: Grade) -> Result<Grade, EvalError> {
        self.alg.mul(a, b).map_err(|e| EvalError::Stuck(e.to_string()))
    }

    fn junk(&self, rule: &'static str, w: &CW<'_>) -> Result<(), EvalError> {
        if *w == CW::Junk {
            Err(EvalError::Junk { rule })
        } else {
            Ok(())
        }
    }

    fn value<'a>(&mut self, gv: &GradeVec, env: &CEnv<'a>, v: &'a EVal, mult: u64) -> Result<CW<'a>, EvalError> {
        self.fuel.tick()?;
        match &v.kind {
            EValKind::Var(i, x) => {
                let rule = self.rule("eval-coeff-val-var", "eval-lin-val-var");
                self.within(rule, gv, &v.gv)?;
                let slot = env.get(*i).ok_or_else(|| stuck(&format!("unbound variable `{x}`")))?;
                self.junk(rule, &slot.w)?;
                if let (Some(k), Some(u)) = (slot.top, self.usage.as_mut()) {
                    u[k] = u[k].saturating_add(mult);
                }
                Ok(slot.w.clone())
            }
            EValKind::Unit => {
                self.within(self.rule("eval-coeff-val-unit", "eval-lin-val-unit"), gv, &v.gv)?;
                Ok(CW::Unit)
            }
            EValKind::Thunk(m) => {
                self.within(self.rule("eval-coeff-val-thunk", "eval-lin-val-thunk"), gv, &v.gv)?;
                Ok(CW::Thunk(m.gv.clone(), env.clone(), m))
            }
            EValKind::Pair(a, b) => {
                self.within(self.rule("eval-coeff-val-vpair", "eval-lin-val-vpair"), gv, &v.gv)?;
                let wa = self.value(&a.gv, env, a, mult)?;
                let wb = self.value(&b.gv, env, b, mult)?;
                Ok(CW::Pair(Box::new(wa), Box::new(wb)))
            }
            EValKind::Inl(w) => Ok(CW::Inl(Box::new(self.value(gv, env, w, mult)?))),
            EValKind::Inr(w) => Ok(CW::Inr(Box::new(self.value(gv, env, w, mult)?))),
            EValKind::Ann(w, _) => self.value(gv, env, w, mult),
            EValKind::With(..) => {
                self.within(self.rule("eval-coeff-val-vwith", "eval-lin-val-vwith"), gv, &v.gv)?;
                Ok(CW::With(v.gv.clone(), env.clone(), v))
            }
            EValKind::Fst(p) | EValKind::Snd(p) => {
                let first = matches!(v.kind, EValKind::Fst(_));
                let rule = match (first, self.sem) {
                    (true, Semantics::General) => "eval-coeff-val-vfst",
                    (false, Semantics::General) => "eval-coeff-val-vsnd",
                    (true, Semantics::Resource) => "eval-lin-val-vfst",
                    (false, Semantics::Resource) => "eval-lin-val-vsnd",
                };
                match self.value(gv, env, p, mult)? {
                    CW::With(g2, cenv, node) => match &node.kind {
                        EValKind::With(a, b) => {
                            let c = if first { a } else { b };
                            self.value(&g2, &cenv, c, mult)
                        }
                        _ => Err(stuck("malformed shared pair closure")),
                    },
                    CW::Junk => Err(EvalError::Junk { rule }),
                    _ => Err(stuck("projection from a non-pair value")),
                }
            }
        }
    }

    fn comp<'a>(&mut self, gv: &GradeVec, env: &CEnv<'a>, m: &'a EComp, mult: u64) -> Result<CTerminal<'a>, EvalError> {
        self.fuel.tick()?;
        match &m.kind {
            ECompKind::Lam(..) => {
                self.within(self.rule("eval-coeff-comp-abs", "eval-lin-comp-abs"), gv, &m.gv)?;
                Ok(CTerminal::Lam(m.gv.clone(), env.clone(), m))
            }
            ECompKind::CPair(..) => {
                self.within(self.rule("eval-coeff-comp-cpair", "eval-lin-comp-cpair"), gv, &m.gv)?;
                Ok(CTerminal::CPair(m.gv.clone(), env.clone(), m))
            }
            ECompKind::App(f, v, _) => {
                let zero = matches!(&f.kind, ECompKind::Lam(_, q, ..) if self.zero_site(*q));
                let rule = match (self.sem, zero) {
                    (Semantics::General, _) => "eval-coeff-comp-app-abs",
                    (Semantics::Resource, false) => "eval-lin-comp-app-abs",
                    (Semantics::Resource, true) => "eval-lin-comp-app-abs-zero",
                };
                self.within(rule, gv, &m.gv)?;
                let (g2, cenv, q, body) = match self.comp(&f.gv, env, f, mult)? {
                    CTerminal::Lam(g2, cenv, node) => match &node.kind {
                        ECompKind::Lam(_, q, _, body) => (g2, cenv, *q, body.as_ref()),
                        _ => return Err(stuck("malformed function closure")),
                    },
                    _ => return Err(stuck("application of a non-function")),
                };
                let w = if self.zero_site(q) {
                    CW::Junk
                } else {
                    self.value(&v.gv, env, v, self.scale(mult, q))?
                };
                self.comp(&g2.extend(&[q]), &cenv.push(Slot { w, top: None }), body, mult)
            }
            ECompKind::Force(v) => {
                let rule = self.rule("eval-coeff-comp-force", "eval-lin-comp-force");
                self.within(rule, gv, &m.gv)?;
                match self.value(&v.gv, env, v, mult)? {
                    CW::Thunk(g2, cenv, body) => self.comp(&g2, &cenv, body, mult),
                    CW::Junk => Err(EvalError::Junk { rule }),
                    _ => Err(stuck("force of a non-thunk")),
                }
            }
            ECompKind::Return(q, v) => {
                if self.zero_site(*q) {
                    self.within("eval-lin-comp-return-zero", gv, &m.gv)?;
                    return Ok(CTerminal::Return(*q, CW::Junk));
                }
                self.within(self.rule("eval-coeff-comp-return", "eval-lin-comp-return"), gv, &m.gv)?;
                let w = self.value(&v.gv, env, v, self.scale(mult, *q))?;
                Ok(CTerminal::Return(*q, w))
            }
            ECompKind::Let(_, q2, _, a, b) => {
                let (rest, _) = b.gv.split_last(1);
                if self.zero_site(*q2) {
                    self.within("eval-lin-comp-letin-ret-zero", gv, &m.gv)?;
                    let q = self.mul(self.alg.zero(), *q2)?;
                    let env2 = env.push(Slot { w: CW::Junk, top: None });
                    return self.comp(&rest.extend(&[q]), &env2, b, mult);
                }
                self.within(self.rule("eval-coeff-comp-letin-ret", "eval-lin-comp-letin-ret"), gv, &m.gv)?;
                match self.comp(&a.gv, env, a, self.scale(mult, *q2))? {
                    CTerminal::Return(q1, w) => {
                        let q = self.mul(q1, *q2)?;
                        self.comp(&rest.extend(&[q]), &env.push(Slot { w, top: None }), b, mult)
                    }
                    _ => Err(stuck("let of a non-returner")),
                }
            }
            ECompKind::Split(q, v, _, _, n) => {
                let (rest, _) = n.gv.split_last(2);
                let g2 = rest.extend(&[*q, *q]);
                if self.zero_site(*q) {
                    self.within("eval-lin-comp-split-zero", gv, &m.gv)?;
                    let junk = || Slot { w: CW::Junk, top: None };
                    return self.comp(&g2, &env.push(junk()).push(junk()), n, mult);
                }
                let rule = self.rule("eval-coeff-comp-split", "eval-lin-comp-split");
                self.within(rule, gv, &m.gv)?;
                match self.value(&v.gv, env, v, self.scale(mult, *q))? {
                    CW::Pair(a, b) => {
                        let env2 = env.push(Slot { w: *a, top: None }).push(Slot { w: *b, top: None });
                        self.comp(&g2, &env2, n, mult)
                    }
                    CW::Junk => Err(EvalError::Junk { rule }),
                    _ => Err(stuck("split of a non-pair")),
                }
            }
            ECompKind::Seq(v, n) => {
                let rule = self.rule("eval-coeff-comp-sequence", "eval-lin-comp-sequence");
                self.within(rule, gv, &m.gv)?;
                match self.value(&v.gv, env, v, mult)? {
                    CW::Unit => self.comp(&n.gv, env, n, mult),
                    CW::Junk => Err(EvalError::Junk { rule }),
                    _ => Err(stuck("sequence on a non-unit")),
                }
            }
            ECompKind::Case { q, scrut, shared, left, right } => {
                let rule = self.rule("eval-coeff-comp-case", "eval-lin-comp-case");
                self.within(rule, gv, &m.gv)?;
                if !self.alg.leq(*q, self.alg.one()).unwrap_or(false) {
                    return Err(EvalError::violation(rule, format!("case grade {q} must be at most 1")));
                }
                let g2 = shared.extend(&[*q]);
                match self.value(&scrut.gv, env, scrut, self.scale(mult, *q))? {
                    CW::Inl(w) => self.comp(&g2, &env.push(Slot { w: *w, top: None }), &left.1, mult),
                    CW::Inr(w) => self.comp(&g2, &env.push(Slot { w: *w, top: None }), &right.1, mult),
                    CW::Junk => Err(EvalError::Junk { rule }),
                    _ => Err(stuck("case of a non-sum")),
                }
            }
            ECompKind::CFst(p) | ECompKind::CSnd(p) => {
                let first = matches!(m.kind, ECompKind::CFst(_));
                let rule = match (first, self.sem) {
                    (true, Semantics::General) => "eval-coeff-comp-fst",
                    (false, Semantics::General) => "eval-coeff-comp-snd",
                    (true, Semantics::Resource) => "eval-lin-comp-fst",
                    (false, Semantics::Resource) => "eval-lin-comp-snd",
                };
                self.within(rule, gv, &m.gv)?;
                match self.comp(&p.gv, env, p, mult)? {
                    CTerminal::CPair(g2, cenv, node) => match &node.kind {
                        ECompKind::CPair(a, b) => self.comp(&g2, &cenv, if first { a } else { b }, mult),
                        _ => Err(stuck("malformed pair closure")),
                    },
                    _ => Err(stuck("projection from a non-pair")),
                }
            }
            ECompKind::Tensor(a, b) => {
                self.within(self.rule("eval-coeff-comp-ctensor", "eval-lin-comp-ctensor"), gv, &m.gv)?;
                Ok(CTerminal::Tensor(
                    Box::new(CW::Thunk(a.gv.clone(), env.clone(), a)),
                    Box::new(CW::Thunk(b.gv.clone(), env.clone(), b)),
                ))
            }
            ECompKind::TSplit(q, s, _, _, n) => {
                let rule = self.rule("eval-coeff-comp-csplit", "eval-lin-comp-csplit");
                self.within(rule, gv, &m.gv)?;
                let (rest, _) = n.gv.split_last(2);
                match self.comp(&s.gv, env, s, self.scale(mult, *q))? {
                    CTerminal::Tensor(a, b) => {
                        let env2 = env.push(Slot { w: *a, top: None }).push(Slot { w: *b, top: None });
                        self.comp(&rest.extend(&[*q, *q]), &env2, n, mult)
                    }
                    _ => Err(stuck("split of a non-product computation")),
                }
            }
        }
    }
}

/// Builds a top-level environment, tagging each slot with its position.
pub fn top_env(values: Vec<CW<'_>>) -> CEnv<'_> {
    Env::from_outer(values.into_iter().enumerate().map(|(k, w)| Slot { w, top: Some(k) }))
}

fn start<'e>(alg: &'e CoeffectAlgebra, sem: Semantics, n: usize, opts: RunOptions) -> Result<Eval<'e>, EvalError> {
    if sem == Semantics::Resource && !alg.flags().all() {
        return Err(EvalError::Refused(format!(
            "algebra {} does not satisfy the resource-tracking axioms",
            alg.name()
        )));
    }
    if opts.usage && !alg.is_nat() {
        return Err(EvalError::Refused(format!("usage accounting needs a nat algebra, not {}", alg.name())));
    }
    Ok(Eval {
        alg,
        sem,
        fuel: Fuel::new(opts.budget),
        usage: opts.usage.then(|| vec![0; n]),
    })
}

/// Evaluates a computation at the given grades.
pub fn run<'a>(
    alg: &CoeffectAlgebra,
    sem: Semantics,
    gv: &GradeVec,
    env: &CEnv<'a>,
    m: &'a EComp,
    opts: RunOptions,
) -> Result<Run<'a>, EvalError> {
    if gv.len() != env.len() || m.gv.len() != env.len() {
        return Err(stuck("grade vector and environment lengths differ"));
    }
    let mut ev = start(alg, sem, env.len(), opts)?;
    let terminal = ev.comp(gv, env, m, 1)?;
    Ok(Run {
        terminal,
        usage: ev.usage,
        steps: ev.fuel.used,
    })
}

pub fn ceval_comp<'a>(alg: &CoeffectAlgebra, gv: &GradeVec, env: &CEnv<'a>, m: &'a EComp, budget: u64) -> Result<CTerminal<'a>, EvalError> {
    run(alg, Semantics::General, gv, env, m, RunOptions { budget, usage: false }).map(|r| r.terminal)
}

pub fn leval_comp<'a>(alg: &CoeffectAlgebra, gv: &GradeVec, env: &CEnv<'a>, m: &'a EComp, budget: u64) -> Result<CTerminal<'a>, EvalError> {
    run(alg, Semantics::Resource, gv, env, m, RunOptions { budget, usage: false }).map(|r| r.terminal)
}

pub fn ceval_value<'a>(alg: &CoeffectAlgebra, gv: &GradeVec, env: &CEnv<'a>, v: &'a EVal, budget: u64) -> Result<CW<'a>, EvalError> {
    let mut ev = start(alg, Semantics::General, env.len(), RunOptions { budget, usage: false })?;
    ev.value(gv, env, v, 1)
}

pub fn leval_value<'a>(alg: &CoeffectAlgebra, gv: &GradeVec, env: &CEnv<'a>, v: &'a EVal, budget: u64) -> Result<CW<'a>, EvalError> {
    let mut ev = start(alg, Semantics::Resource, env.len(), RunOptions { budget, usage: false })?;
    ev.value(gv, env, v, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffect_system::{elaborate, elaborate_value};
    use crate::syntax::{parse_comp, parse_value, Context, Grades, ValType};

    const B: u64 = 10_000;

    fn nat() -> CoeffectAlgebra {
        CoeffectAlgebra::nat_usage()
    }

    fn gvec(xs: &[u64]) -> GradeVec {
        let a = nat();
        GradeVec(xs.iter().map(|&x| a.nat(x)).collect())
    }

    fn elab(src: &str, ctx: &Context) -> EComp {
        let a = nat();
        let m = parse_comp(src, Grades::Coeffect(&a), &ctx.names()).unwrap();
        elaborate(&a, ctx, &m).unwrap().comp
    }

    fn unit_ctx() -> Context {
        Context::new().with("x", ValType::Unit)
    }

    #[test]
    fn general_semantics() {
        let a = nat();
        let m = elab("(\\x^1. return^1 x) ()", &Context::new());
        assert_eq!(ceval_comp(&a, &gvec(&[]), &Env::new(), &m, B).unwrap().to_string(), "return^1 ()");
        let env = top_env(vec![CW::Unit]);
        let m = elab("return^2 x", &unit_ctx());
        assert_eq!(ceval_comp(&a, &gvec(&[2]), &env, &m, B).unwrap().to_string(), "return^2 ()");
        let m = elab("<return^1 x, return^1 ()>.2", &unit_ctx());
        assert_eq!(ceval_comp(&a, &gvec(&[1]), &env, &m, B).unwrap().to_string(), "return^1 ()");
    }

    #[test]
    fn value_rules() {
        let a = nat();
        let ctx = unit_ctx();
        let env = top_env(vec![CW::Unit]);
        let v = parse_value("x", Grades::Coeffect(&a), &ctx.names()).unwrap();
        let (_, ev) = elaborate_value(&a, &ctx, &v).unwrap();
        assert_eq!(ceval_value(&a, &gvec(&[1]), &env, &ev, B).unwrap(), CW::Unit);
        match ceval_value(&a, &gvec(&[0]), &env, &ev, B).unwrap_err() {
            EvalError::Violation { rule, .. } => assert_eq!(rule, "eval-coeff-val-var"),
            e => panic!("{e}"),
        }
        let v = parse_value("()", Grades::Coeffect(&a), &ctx.names()).unwrap();
        let (_, ev) = elaborate_value(&a, &ctx, &v).unwrap();
        assert_eq!(ceval_value(&a, &gvec(&[0]), &env, &ev, B).unwrap(), CW::Unit);
    }

    #[test]
    fn zero_rules_skip_values() {
        let a = nat();
        let m = elab("return^0 {return^1 ()}", &Context::new());
        assert_eq!(leval_comp(&a, &gvec(&[]), &Env::new(), &m, B).unwrap().to_string(), "return^0 <junk>");
        let m = elab("return^0 x", &unit_ctx());
        let t = leval_comp(&a, &gvec(&[0]), &top_env(vec![CW::Junk]), &m, B).unwrap();
        assert_eq!(t, CTerminal::Return(a.zero(), CW::Junk));
        let ctx = Context::new().with("x", ValType::u(None, crate::syntax::CompType::f(Some(a.one()), ValType::Unit)));
        let junk = top_env(vec![CW::Junk]);
        let m = elab("(\\y^0. return^1 ()) x", &ctx);
        assert_eq!(leval_comp(&a, &gvec(&[0]), &junk, &m, B).unwrap().to_string(), "return^1 ()");
        let m = elab("x!", &ctx);
        assert!(matches!(leval_comp(&a, &gvec(&[1]), &junk, &m, B), Err(EvalError::Junk { .. })));
    }

    #[test]
    fn usage_counts() {
        let a = nat();
        let ctx = unit_ctx();
        let env = top_env(vec![CW::Unit]);
        let opts = RunOptions { budget: B, usage: true };
        let m = elab("return^2 x", &ctx);
        let r = run(&a, Semantics::Resource, &gvec(&[2]), &env, &m, opts).unwrap();
        assert_eq!(usage_of(&r), Some(&[2][..]));
        let m = elab("let y <-^1 return^1 x in return^1 y", &ctx);
        let r = run(&a, Semantics::Resource, &gvec(&[1]), &env, &m, opts).unwrap();
        assert_eq!(usage_of(&r), Some(&[1][..]));
        let m = elab("return^0 x", &ctx);
        let r = run(&a, Semantics::Resource, &gvec(&[0]), &top_env(vec![CW::Junk]), &m, opts).unwrap();
        assert_eq!(usage_of(&r), Some(&[0][..]));
    }

    #[test]
    fn forced_thunks_charge_at_the_force_site() {
        let a = nat();
        let ctx = unit_ctx();
        let m = elab("let t <-^2 return^1 {return^1 x} in let u <-^1 t! in t!", &ctx);
        assert_eq!(m.gv.to_string(), "[2]");
        let opts = RunOptions { budget: B, usage: true };
        let r = run(&a, Semantics::Resource, &m.gv.clone(), &top_env(vec![CW::Unit]), &m, opts).unwrap();
        assert_eq!(usage_of(&r), Some(&[2][..]));
    }

    #[test]
    fn refuses_resource_mode_without_axioms() {
        let a = nat();
        let m = elab("return^1 ()", &Context::new());
        let opts = RunOptions { budget: B, usage: true };
        let zom = CoeffectAlgebra::zero_one_many();
        assert!(matches!(
            run(&zom, Semantics::General, &GradeVec::default(), &Env::new(), &m, opts),
            Err(EvalError::Refused(_))
        ));
        assert!(run(&a, Semantics::Resource, &GradeVec::default(), &Env::new(), &m, opts).is_ok());
    }
}
