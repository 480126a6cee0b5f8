//! Coeffect checking by canonical grade-vector inference, and elaboration
//! of every node with its inferred demand vector.

use crate::diag::{TResult, TypeError};
use crate::grading::{CoeffectAlgebra, Grade, GradeError, GradeVec};
use crate::syntax::{Comp, CompType, Context, Name, Term, ValType, Value};
use crate::unify::{Namer, Subst};

/// A value annotated with its demand vector over the local context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EVal {
    pub gv: GradeVec,
    pub kind: EValKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EValKind {
    Var(usize, Name),
    Unit,
    Thunk(Box<EComp>),
    Pair(Box<EVal>, Box<EVal>),
    Inl(Box<EVal>),
    Inr(Box<EVal>),
    With(Box<EVal>, Box<EVal>),
    Fst(Box<EVal>),
    Snd(Box<EVal>),
    Ann(Box<EVal>, ValType),
}

/// A computation annotated with its demand vector over the local context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EComp {
    pub gv: GradeVec,
    pub kind: ECompKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ECompKind {
    /// Binder name, grade, source annotation, body.
    Lam(Name, Grade, Option<ValType>, Box<EComp>),
    /// Head, argument, and the head's arrow grade.
    App(Box<EComp>, EVal, Grade),
    Force(EVal),
    Return(Grade, EVal),
    /// `let x <-^q2 M in N` where `M : F^q1 A`; holds `q2` then `q1`.
    Let(Name, Grade, Grade, Box<EComp>, Box<EComp>),
    Split(Grade, EVal, Name, Name, Box<EComp>),
    Seq(EVal, Box<EComp>),
    /// The shared vector is the join of both branches' outer demands.
    Case {
        q: Grade,
        scrut: EVal,
        shared: GradeVec,
        left: (Name, Box<EComp>),
        right: (Name, Box<EComp>),
    },
    CPair(Box<EComp>, Box<EComp>),
    CFst(Box<EComp>),
    CSnd(Box<EComp>),
    Tensor(Box<EComp>, Box<EComp>),
    TSplit(Grade, Box<EComp>, Name, Name, Box<EComp>),
}

impl EVal {
    /// Drops the annotations.
    pub fn erase(&self) -> Value {
        match &self.kind {
            EValKind::Var(i, n) => Value::Var(*i, n.clone()),
            EValKind::Unit => Value::Unit,
            EValKind::Thunk(m) => Value::thunk(m.erase()),
            EValKind::Pair(a, b) => Value::pair(a.erase(), b.erase()),
            EValKind::Inl(v) => Value::inl(v.erase()),
            EValKind::Inr(v) => Value::inr(v.erase()),
            EValKind::With(a, b) => Value::with(a.erase(), b.erase()),
            EValKind::Fst(v) => Value::Fst(Box::new(v.erase())),
            EValKind::Snd(v) => Value::Snd(Box::new(v.erase())),
            EValKind::Ann(v, t) => Value::ann(v.erase(), t.clone()),
        }
    }
}

impl EComp {
    pub fn erase(&self) -> Comp {
        let b = |m: &EComp| Box::new(m.erase());
        match &self.kind {
            ECompKind::Lam(x, q, t, m) => Comp::Lam(x.clone(), Some(*q), t.clone(), b(m)),
            ECompKind::App(m, v, _) => Comp::App(b(m), v.erase()),
            ECompKind::Force(v) => Comp::Force(v.erase()),
            ECompKind::Return(q, v) => Comp::Return(Some(*q), v.erase()),
            ECompKind::Let(x, q, _, m, n) => Comp::Let(x.clone(), Some(*q), b(m), b(n)),
            ECompKind::Split(q, v, x, y, n) => Comp::Split(Some(*q), v.erase(), x.clone(), y.clone(), b(n)),
            ECompKind::Seq(v, n) => Comp::Seq(v.erase(), b(n)),
            ECompKind::Case { q, scrut, left, right, .. } => Comp::Case(
                Some(*q),
                scrut.erase(),
                left.0.clone(),
                b(&left.1),
                right.0.clone(),
                b(&right.1),
            ),
            ECompKind::CPair(m, n) => Comp::CPair(b(m), b(n)),
            ECompKind::CFst(m) => Comp::CFst(b(m)),
            ECompKind::CSnd(m) => Comp::CSnd(b(m)),
            ECompKind::Tensor(m, n) => Comp::Tensor(b(m), b(n)),
            ECompKind::TSplit(q, m, x, y, n) => Comp::TSplit(Some(*q), b(m), x.clone(), y.clone(), b(n)),
        }
    }
}

/// The result of elaborating a computation.
#[derive(Clone, Debug)]
pub struct Elaborated {
    pub ty: CompType,
    pub comp: EComp,
}

struct Checker<'a> {
    alg: &'a CoeffectAlgebra,
    sub: Subst,
    env: Vec<ValType>,
}

fn need(rule: &'static str, g: Option<Grade>) -> TResult<Grade> {
    g.ok_or_else(|| TypeError::new(rule, "missing grade annotation"))
}

impl<'a> Checker<'a> {
    fn new(alg: &'a CoeffectAlgebra, ctx: &Context) -> Self {
        Self {
            alg,
            sub: Subst::new(),
            env: ctx.entries.iter().map(|(_, t)| t.clone()).collect(),
        }
    }

    fn n(&self) -> usize {
        self.env.len()
    }

    fn g<T>(&self, rule: &'static str, r: Result<T, GradeError>) -> TResult<T> {
        r.map_err(|e| TypeError::grade(rule, e))
    }

    fn add(&self, rule: &'static str, a: &GradeVec, b: &GradeVec) -> TResult<GradeVec> {
        self.g(rule, self.alg.vec_add(a, b))
    }

    fn scale(&self, rule: &'static str, q: Grade, a: &GradeVec) -> TResult<GradeVec> {
        self.g(rule, self.alg.vec_scale(q, a))
    }

    fn join(&self, rule: &'static str, a: &GradeVec, b: &GradeVec) -> TResult<GradeVec> {
        self.g(rule, self.alg.vec_join(a, b))
    }

    /// Requires `q ≤ d`, reporting a binder demand violation otherwise.
    fn bound(&self, rule: &'static str, what: &str, q: Grade, d: Grade) -> TResult<()> {
        if self.g(rule, self.alg.leq(q, d))? {
            Ok(())
        } else {
            Err(TypeError::new(rule, format!("{what} grade {q} does not satisfy demand {d}")))
        }
    }

    fn unify_val(&mut self, rule: &'static str, want: &ValType, got: &ValType) -> TResult<()> {
        self.sub.unify_val(want, got).map_err(|_| {
            TypeError::new(
                rule,
                format!("type mismatch: expected {}, found {}", self.sub.zonk_val(want), self.sub.zonk_val(got)),
            )
        })
    }

    fn unify_comp(&mut self, rule: &'static str, want: &CompType, got: &CompType) -> TResult<()> {
        self.sub.unify_comp(want, got).map_err(|_| {
            TypeError::new(
                rule,
                format!("type mismatch: expected {}, found {}", self.sub.zonk_comp(want), self.sub.zonk_comp(got)),
            )
        })
    }

    fn mismatch(&self, rule: &'static str, want: &str, got: &ValType) -> TypeError {
        TypeError::new(rule, format!("expected {want}, found {}", self.sub.zonk_val(got)))
    }

    fn under<T>(&mut self, tys: Vec<ValType>, f: impl FnOnce(&mut Self) -> TResult<T>) -> TResult<T> {
        let k = tys.len();
        self.env.extend(tys);
        let r = f(self);
        self.env.truncate(self.env.len() - k);
        r
    }

    fn value(&mut self, v: &Value) -> TResult<(ValType, EVal)> {
        let n = self.n();
        let mk = |gv, kind| EVal { gv, kind };
        match v {
            Value::Var(i, x) => {
                if *i >= n {
                    return Err(TypeError::new("coeff-var", format!("unbound variable `{x}`")));
                }
                let t = self.env[n - 1 - i].clone();
                Ok((t, mk(self.alg.unit_vec(n, n - 1 - i), EValKind::Var(*i, x.clone()))))
            }
            Value::Unit => Ok((ValType::Unit, mk(self.alg.zeros(n), EValKind::Unit))),
            Value::Thunk(m) => {
                let (b, em) = self.comp(m)?;
                Ok((ValType::u(None, b), mk(em.gv.clone(), EValKind::Thunk(Box::new(em)))))
            }
            Value::Pair(a, b) => {
                let (ta, ea) = self.value(a)?;
                let (tb, eb) = self.value(b)?;
                let gv = self.add("coeff-pair", &ea.gv, &eb.gv)?;
                Ok((ValType::prod(ta, tb), mk(gv, EValKind::Pair(Box::new(ea), Box::new(eb)))))
            }
            Value::Inl(_) => Err(TypeError::new("coeff-inl", "injection needs a type ascription `inl V : A + B`")),
            Value::Inr(_) => Err(TypeError::new("coeff-inr", "injection needs a type ascription `inr V : A + B`")),
            Value::Ann(w, t) => {
                let ew = self.check_value(w, t)?;
                Ok((t.clone(), mk(ew.gv.clone(), EValKind::Ann(Box::new(ew), t.clone()))))
            }
            Value::With(a, b) => {
                let (ta, ea) = self.value(a)?;
                let (tb, eb) = self.value(b)?;
                let gv = self.join("coeff-vwith", &ea.gv, &eb.gv)?;
                Ok((ValType::with(ta, tb), mk(gv, EValKind::With(Box::new(ea), Box::new(eb)))))
            }
            Value::Fst(p) | Value::Snd(p) => {
                let first = matches!(v, Value::Fst(_));
                let rule = if first { "coeff-vfst" } else { "coeff-vsnd" };
                let (t, ep) = self.value(p)?;
                let (a1, a2) = match self.sub.head(&t) {
                    ValType::With(a1, a2) => (*a1, *a2),
                    ValType::Meta(_) => {
                        let (a1, a2) = (self.sub.fresh(), self.sub.fresh());
                        self.unify_val(rule, &t, &ValType::with(a1.clone(), a2.clone()))?;
                        (a1, a2)
                    }
                    other => return Err(self.mismatch(rule, "a shared value product", &other)),
                };
                let gv = ep.gv.clone();
                let kind = if first { EValKind::Fst(Box::new(ep)) } else { EValKind::Snd(Box::new(ep)) };
                Ok((if first { a1 } else { a2 }, mk(gv, kind)))
            }
        }
    }

    fn check_value(&mut self, v: &Value, t: &ValType) -> TResult<EVal> {
        let head = self.sub.head(t);
        match (v, &head) {
            (Value::Inl(w), ValType::Sum(a, _)) | (Value::Inr(w), ValType::Sum(_, a)) => {
                let ew = self.check_value(w, a)?;
                let gv = ew.gv.clone();
                let kind = if matches!(v, Value::Inl(_)) { EValKind::Inl(Box::new(ew)) } else { EValKind::Inr(Box::new(ew)) };
                Ok(EVal { gv, kind })
            }
            (Value::Inl(_), _) => Err(self.mismatch("coeff-inl", "a sum type", t)),
            (Value::Inr(_), _) => Err(self.mismatch("coeff-inr", "a sum type", t)),
            (Value::Pair(a, b), ValType::Prod(ta, tb)) => {
                let ea = self.check_value(a, ta)?;
                let eb = self.check_value(b, tb)?;
                let gv = self.add("coeff-pair", &ea.gv, &eb.gv)?;
                Ok(EVal { gv, kind: EValKind::Pair(Box::new(ea), Box::new(eb)) })
            }
            (Value::With(a, b), ValType::With(ta, tb)) => {
                let ea = self.check_value(a, ta)?;
                let eb = self.check_value(b, tb)?;
                let gv = self.join("coeff-vwith", &ea.gv, &eb.gv)?;
                Ok(EVal { gv, kind: EValKind::With(Box::new(ea), Box::new(eb)) })
            }
            _ => {
                let (got, ev) = self.value(v)?;
                self.unify_val("coeff-ascribe", t, &got)?;
                Ok(ev)
            }
        }
    }

    fn comp(&mut self, m: &Comp) -> TResult<(CompType, EComp)> {
        let mk = |gv, kind| EComp { gv, kind };
        match m {
            Comp::Prim(p) => Err(TypeError::new("coeff-mode", format!("primitive `{p}` is effect-mode only"))),
            Comp::Lam(x, q, t, body) => {
                let q = need("coeff-abs", *q)?;
                let a = t.clone().unwrap_or_else(|| self.sub.fresh());
                let (b, eb) = self.under(vec![a.clone()], |c| c.comp(body))?;
                let (rest, d) = eb.gv.split_last(1);
                self.bound("coeff-abs", &format!("binder `{x}`"), q, d[0])?;
                Ok((CompType::arrow(Some(q), a, b), mk(rest, ECompKind::Lam(x.clone(), q, t.clone(), Box::new(eb)))))
            }
            Comp::App(f, v) => {
                let (tf, ef) = self.comp(f)?;
                let (q, a, b) = match tf {
                    CompType::Arrow(Some(q), a, b) => (q, a, b),
                    t => return Err(TypeError::new("coeff-app", format!("application head has type {t}, not a function"))),
                };
                let ev = self.check_value(v, &a)?;
                let scaled = self.scale("coeff-app", q, &ev.gv)?;
                let gv = self.add("coeff-app", &ef.gv, &scaled)?;
                Ok((*b, mk(gv, ECompKind::App(Box::new(ef), ev, q))))
            }
            Comp::Force(v) => {
                let (t, ev) = self.value(v)?;
                match self.sub.head(&t) {
                    ValType::U(None, b) => Ok((*b, mk(ev.gv.clone(), ECompKind::Force(ev)))),
                    ValType::Meta(_) => Err(TypeError::new("coeff-force", "forced variable needs a type annotation")),
                    other => Err(self.mismatch("coeff-force", "a thunk", &other)),
                }
            }
            Comp::Return(q, v) => {
                let q = need("coeff-ret", *q)?;
                let (a, ev) = self.value(v)?;
                let gv = self.scale("coeff-ret", q, &ev.gv)?;
                Ok((CompType::f(Some(q), a), mk(gv, ECompKind::Return(q, ev))))
            }
            Comp::Let(x, q2, a, b) => {
                let q2 = need("coeff-letin", *q2)?;
                let (ta, ea) = self.comp(a)?;
                let (q1, ty) = match ta {
                    CompType::F(Some(q1), ty) => (q1, *ty),
                    t => return Err(TypeError::new("coeff-letin", format!("bound computation has type {t}, not F A"))),
                };
                let (tb, eb) = self.under(vec![ty], |c| c.comp(b))?;
                let (rest, d) = eb.gv.split_last(1);
                let q = self.g("coeff-letin", self.alg.mul(q1, q2))?;
                self.bound("coeff-letin", &format!("binder `{x}`"), q, d[0])?;
                let scaled = self.scale("coeff-letin", q2, &ea.gv)?;
                let gv = self.add("coeff-letin", &scaled, &rest)?;
                Ok((tb, mk(gv, ECompKind::Let(x.clone(), q2, q1, Box::new(ea), Box::new(eb)))))
            }
            Comp::Split(q, v, x, y, n) => {
                let q = need("coeff-split", *q)?;
                let (t, ev) = self.value(v)?;
                let (a1, a2) = match self.sub.head(&t) {
                    ValType::Prod(a1, a2) => (*a1, *a2),
                    ValType::Meta(_) => {
                        let (a1, a2) = (self.sub.fresh(), self.sub.fresh());
                        self.unify_val("coeff-split", &t, &ValType::prod(a1.clone(), a2.clone()))?;
                        (a1, a2)
                    }
                    other => return Err(self.mismatch("coeff-split", "a product", &other)),
                };
                let (tn, en) = self.under(vec![a1, a2], |c| c.comp(n))?;
                let (rest, d) = en.gv.split_last(2);
                self.bound("coeff-split", &format!("binder `{x}`"), q, d[0])?;
                self.bound("coeff-split", &format!("binder `{y}`"), q, d[1])?;
                let scaled = self.scale("coeff-split", q, &ev.gv)?;
                let gv = self.add("coeff-split", &scaled, &rest)?;
                Ok((tn, mk(gv, ECompKind::Split(q, ev, x.clone(), y.clone(), Box::new(en)))))
            }
            Comp::Seq(v, n) => {
                let ev = self.check_value(v, &ValType::Unit).map_err(|e| TypeError::new("coeff-sequence", e.msg))?;
                let (tn, en) = self.comp(n)?;
                let gv = self.add("coeff-sequence", &ev.gv, &en.gv)?;
                Ok((tn, mk(gv, ECompKind::Seq(ev, Box::new(en)))))
            }
            Comp::Case(q, v, x, l, y, r) => {
                let q = need("coeff-case", *q)?;
                if !self.g("coeff-case", self.alg.leq(q, self.alg.one()))? {
                    return Err(TypeError::new("coeff-case", format!("case grade {q} must be at most 1")));
                }
                let (t, ev) = self.value(v)?;
                let (a1, a2) = match self.sub.head(&t) {
                    ValType::Sum(a1, a2) => (*a1, *a2),
                    ValType::Meta(_) => {
                        let (a1, a2) = (self.sub.fresh(), self.sub.fresh());
                        self.unify_val("coeff-case", &t, &ValType::sum(a1.clone(), a2.clone()))?;
                        (a1, a2)
                    }
                    other => return Err(self.mismatch("coeff-case", "a sum", &other)),
                };
                let (tl, el) = self.under(vec![a1], |c| c.comp(l))?;
                let (tr, er) = self.under(vec![a2], |c| c.comp(r))?;
                self.unify_comp("coeff-case", &tl, &tr)?;
                let (rl, dl) = el.gv.split_last(1);
                let (rr, dr) = er.gv.split_last(1);
                self.bound("coeff-case", &format!("binder `{x}`"), q, dl[0])?;
                self.bound("coeff-case", &format!("binder `{y}`"), q, dr[0])?;
                let shared = self.join("coeff-case", &rl, &rr)?;
                let scaled = self.scale("coeff-case", q, &ev.gv)?;
                let gv = self.add("coeff-case", &scaled, &shared)?;
                let kind = ECompKind::Case {
                    q,
                    scrut: ev,
                    shared,
                    left: (x.clone(), Box::new(el)),
                    right: (y.clone(), Box::new(er)),
                };
                Ok((tl, mk(gv, kind)))
            }
            Comp::CPair(a, b) => {
                let (ta, ea) = self.comp(a)?;
                let (tb, eb) = self.comp(b)?;
                let gv = self.join("coeff-cpair", &ea.gv, &eb.gv)?;
                Ok((CompType::with(ta, tb), mk(gv, ECompKind::CPair(Box::new(ea), Box::new(eb)))))
            }
            Comp::CFst(p) | Comp::CSnd(p) => {
                let first = matches!(m, Comp::CFst(_));
                let rule = if first { "coeff-fst" } else { "coeff-snd" };
                let (t, ep) = self.comp(p)?;
                let (b1, b2) = match t {
                    CompType::With(b1, b2) => (*b1, *b2),
                    t => return Err(TypeError::new(rule, format!("projection from {t}, not a computation pair"))),
                };
                let gv = ep.gv.clone();
                let kind = if first { ECompKind::CFst(Box::new(ep)) } else { ECompKind::CSnd(Box::new(ep)) };
                Ok((if first { b1 } else { b2 }, mk(gv, kind)))
            }
            Comp::Tensor(a, b) => {
                let (ta, ea) = self.comp(a)?;
                let (tb, eb) = self.comp(b)?;
                let gv = self.add("coeff-ctensor", &ea.gv, &eb.gv)?;
                Ok((CompType::tensor(ta, tb), mk(gv, ECompKind::Tensor(Box::new(ea), Box::new(eb)))))
            }
            Comp::TSplit(q, s, x, y, n) => {
                let q = need("coeff-csplit", *q)?;
                if !self.g("coeff-csplit", self.alg.leq(q, self.alg.one()))? {
                    return Err(TypeError::new("coeff-csplit", format!("split grade {q} must be at most 1")));
                }
                let (ts, es) = self.comp(s)?;
                let (b1, b2) = match ts {
                    CompType::Tensor(b1, b2) => (*b1, *b2),
                    t => return Err(TypeError::new("coeff-csplit", format!("expected a computation product, found {t}"))),
                };
                let tys = vec![ValType::u(None, b1), ValType::u(None, b2)];
                let (tn, en) = self.under(tys, |c| c.comp(n))?;
                let (rest, d) = en.gv.split_last(2);
                self.bound("coeff-csplit", &format!("binder `{x}`"), q, d[0])?;
                self.bound("coeff-csplit", &format!("binder `{y}`"), q, d[1])?;
                let scaled = self.scale("coeff-csplit", q, &es.gv)?;
                let gv = self.add("coeff-csplit", &scaled, &rest)?;
                Ok((tn, mk(gv, ECompKind::TSplit(q, Box::new(es), x.clone(), y.clone(), Box::new(en)))))
            }
        }
    }
}

/// Infers a value's type and canonical demand vector.
pub fn co_infer_value(alg: &CoeffectAlgebra, ctx: &Context, v: &Value) -> TResult<(ValType, GradeVec)> {
    let (t, ev) = elaborate_value(alg, ctx, v)?;
    Ok((t, ev.gv))
}

/// Infers a computation's type and canonical demand vector.
pub fn co_infer_comp(alg: &CoeffectAlgebra, ctx: &Context, m: &Comp) -> TResult<(CompType, GradeVec)> {
    let e = elaborate(alg, ctx, m)?;
    Ok((e.ty, e.comp.gv))
}

/// Accepts a declared vector iff it lies below the inferred one.
pub fn co_check(alg: &CoeffectAlgebra, ctx: &Context, t: &Term, declared: &GradeVec) -> TResult<()> {
    let inferred = match t {
        Term::Value(v) => co_infer_value(alg, ctx, v)?.1,
        Term::Comp(m) => co_infer_comp(alg, ctx, m)?.1,
    };
    let ok = alg.vec_leq(declared, &inferred).map_err(|e| TypeError::grade("coeff-sub", e))?;
    if ok {
        Ok(())
    } else {
        Err(TypeError::new(
            "coeff-sub",
            format!("declared grades {declared} exceed what the term allows, {inferred}"),
        ))
    }
}

/// Checks a computation against a type as well as inferring its vector.
pub fn co_check_type(alg: &CoeffectAlgebra, ctx: &Context, m: &Comp, b: &CompType) -> TResult<GradeVec> {
    let mut c = Checker::new(alg, ctx);
    let (t, em) = c.comp(m)?;
    c.unify_comp("coeff-check", b, &t)?;
    Ok(em.gv)
}

pub fn elaborate(alg: &CoeffectAlgebra, ctx: &Context, m: &Comp) -> TResult<Elaborated> {
    let mut c = Checker::new(alg, ctx);
    let (t, em) = c.comp(m)?;
    Ok(Elaborated {
        ty: Namer::new().comp(&c.sub.zonk_comp(&t)),
        comp: em,
    })
}

pub fn elaborate_value(alg: &CoeffectAlgebra, ctx: &Context, v: &Value) -> TResult<(ValType, EVal)> {
    let mut c = Checker::new(alg, ctx);
    let (t, ev) = c.value(v)?;
    Ok((Namer::new().val(&c.sub.zonk_val(&t)), ev))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_comp, parse_value, Grades};

    fn nat() -> CoeffectAlgebra {
        CoeffectAlgebra::nat_usage()
    }

    fn ctx_x() -> Context {
        Context::new().with("x", ValType::Base("A".into()))
    }

    fn comp(src: &str, ctx: &Context) -> Comp {
        parse_comp(src, Grades::Coeffect(&nat()), &ctx.names()).unwrap()
    }

    fn infer(src: &str, ctx: &Context) -> TResult<(CompType, GradeVec)> {
        co_infer_comp(&nat(), ctx, &comp(src, ctx))
    }

    fn infer_v(src: &str) -> (String, String) {
        let ctx = ctx_x();
        let v = parse_value(src, Grades::Coeffect(&nat()), &ctx.names()).unwrap();
        let (t, g) = co_infer_value(&nat(), &ctx, &v).unwrap();
        (t.to_string(), g.to_string())
    }

    #[test]
    fn value_vectors() {
        assert_eq!(infer_v("x"), ("A".into(), "[1]".into()));
        assert_eq!(infer_v("(x, x)"), ("A * A".into(), "[2]".into()));
        assert_eq!(infer_v("<x, ()>"), ("A & Unit".into(), "[1]".into()));
        assert_eq!(infer_v("()"), ("Unit".into(), "[0]".into()));
    }

    #[test]
    fn return_scales() {
        let (t, g) = infer("return^3 x", &ctx_x()).unwrap();
        assert_eq!((t.to_string(), g.to_string()), ("F^3 A".into(), "[3]".into()));
    }

    #[test]
    fn binder_bounds() {
        let (t, g) = infer("\\x^2. return^1 (x, x)", &Context::new()).unwrap();
        assert_eq!(t.to_string(), "A ->^2 F^1 (A * A)");
        assert!(g.is_empty());
        assert_eq!(infer("\\x^1. return^1 (x, x)", &Context::new()).unwrap_err().rule, "coeff-abs");
        assert!(infer("\\x^3. return^1 (x, x)", &Context::new()).is_ok());
    }

    #[test]
    fn declared_vectors() {
        let a = nat();
        let ctx = ctx_x();
        let m = Term::Comp(comp("return^1 x", &ctx));
        assert!(co_check(&a, &ctx, &m, &GradeVec(vec![a.nat(5)])).is_ok());
        assert!(co_check(&a, &ctx, &m, &GradeVec(vec![a.nat(1)])).is_ok());
        assert_eq!(co_check(&a, &ctx, &m, &GradeVec(vec![a.nat(0)])).unwrap_err().rule, "coeff-sub");
    }

    #[test]
    fn let_and_case() {
        let ctx = Context::new().with("y", ValType::Unit);
        assert_eq!(infer("let x <-^2 return^1 y in return^1 (x, x)", &ctx).unwrap().1.to_string(), "[2]");
        assert_eq!(infer("let x <-^1 return^1 y in return^1 (x, x)", &ctx).unwrap_err().rule, "coeff-letin");
        let ctx = Context::new().with("s", ValType::sum(ValType::Unit, ValType::Unit)).with("y", ValType::Unit);
        let (_, g) = infer("case^1 s of inl a -> return^1 (a, y) | inr b -> return^1 (b, ())", &ctx).unwrap();
        assert_eq!(g.to_string(), "[1, 1]");
        assert_eq!(infer("case^0 s of inl a -> return^1 a | inr b -> return^1 b", &ctx).unwrap_err().rule, "coeff-case");
    }

    #[test]
    fn products() {
        let ctx = Context::new().with("u", ValType::u(None, CompType::f(Some(nat().one()), ValType::Unit)));
        assert_eq!(infer("<u!, return^1 ()>", &ctx).unwrap().1.to_string(), "[1]");
        assert_eq!(infer("(u!, u!)", &ctx).unwrap().1.to_string(), "[2]");
        let (t, g) = infer("case^1 (u!, return^0 ()) of (a, b) -> a!", &ctx).unwrap();
        assert_eq!((t.to_string(), g.to_string()), ("F^1 Unit".into(), "[1]".into()));
        let tick = Comp::tick();
        assert_eq!(co_infer_comp(&nat(), &ctx, &tick).unwrap_err().rule, "coeff-mode");
    }

    #[test]
    fn elaboration_erases_back() {
        let ctx = ctx_x();
        let m = comp("let z <-^1 (\\y^2. return^1 (y, y)) x in case^1 z of (a, b) -> return^1 <a, b>.1", &ctx);
        let e = elaborate(&nat(), &ctx, &m).unwrap();
        assert_eq!(e.comp.erase(), m);
        let again = elaborate(&nat(), &ctx, &e.comp.erase()).unwrap();
        assert_eq!(again.comp, e.comp);
        assert_eq!(e.comp.gv.to_string(), "[2]");
    }
}
