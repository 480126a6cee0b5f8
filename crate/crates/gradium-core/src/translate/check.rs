//! Type checkers for the four source calculi.

use super::parse::SrcGrades;
use super::source::{Latent, STerm, SType};
use super::{Dialect, Lang, SContext, Strategy};
use crate::diag::{TResult, TypeError};
use crate::grading::{CoeffectAlgebra, Effect, EffectAlgebra, GradeVec};

/// The grading a source judgement carries besides its type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SrcGrading {
    /// Effect of a CBV-effect term.
    Effect(Effect),
    /// Monadic terms are pure; effects live in `T^φ`.
    Pure,
    /// Canonical demand vector of a graded-coeffect term.
    Vector(GradeVec),
    /// Comonadic terms use every assumption exactly once.
    Linear,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SrcJudgement {
    pub ty: SType,
    pub grading: SrcGrading,
}

fn err(rule: &'static str, msg: impl Into<String>) -> TypeError {
    TypeError::new(rule, msg)
}

/// Rejects types the dialect does not have.
pub fn check_type(d: Dialect, t: &SType) -> TResult<()> {
    let bad = |what: &str| Err(err("src-type", format!("{what} is not a type of the {d} dialect")));
    match t {
        SType::Unit => Ok(()),
        SType::Fun(l, a, b) => {
            let ok = matches!(
                (d.lang, l),
                (Lang::Effect, Latent::Eff(_))
                    | (Lang::Monadic, Latent::Plain)
                    | (Lang::Coeffect, Latent::Co(_))
                    | (Lang::Comonadic, Latent::Linear)
            );
            if !ok {
                return bad(&format!("the arrow `{l}`"));
            }
            check_type(d, a)?;
            check_type(d, b)
        }
        SType::Tensor(a, b) => {
            if !d.has_tensor() {
                return bad("`*`");
            }
            check_type(d, a)?;
            check_type(d, b)
        }
        SType::With(a, b) => {
            if !d.has_with() {
                return bad("`&`");
            }
            check_type(d, a)?;
            check_type(d, b)
        }
        SType::Sum(a, b) => {
            if d.lang == Lang::Comonadic {
                return bad("`+`");
            }
            check_type(d, a)?;
            check_type(d, b)
        }
        SType::Monad(_, a) => {
            if d.lang != Lang::Monadic {
                return bad("`T`");
            }
            check_type(d, a)
        }
        SType::Boxed(_, a) => {
            if !matches!(d.lang, Lang::Coeffect | Lang::Comonadic) {
                return bad("`Box`");
            }
            check_type(d, a)
        }
    }
}

fn mismatch(rule: &'static str, want: &SType, got: &SType) -> TypeError {
    err(rule, format!("type mismatch: expected {want}, found {got}"))
}

fn lookup<'c>(ctx: &'c [(String, SType)], x: &str) -> Option<(usize, &'c SType)> {
    ctx.iter().enumerate().rev().find(|(_, (n, _))| n == x).map(|(k, (_, t))| (k, t))
}

fn tensor_of(rule: &'static str, t: SType) -> TResult<(SType, SType)> {
    match t {
        SType::Tensor(a, b) => Ok((*a, *b)),
        t => Err(err(rule, format!("expected a pair, found {t}"))),
    }
}

fn with_of(rule: &'static str, t: SType) -> TResult<(SType, SType)> {
    match t {
        SType::With(a, b) => Ok((*a, *b)),
        t => Err(err(rule, format!("expected a shared pair, found {t}"))),
    }
}

fn sum_of(rule: &'static str, t: &SType) -> TResult<(SType, SType)> {
    match t {
        SType::Sum(a, b) => Ok(((**a).clone(), (**b).clone())),
        t => Err(err(rule, format!("expected a sum, found {t}"))),
    }
}

fn expect_unit(rule: &'static str, t: &SType) -> TResult<()> {
    if *t == SType::Unit {
        Ok(())
    } else {
        Err(mismatch(rule, &SType::Unit, t))
    }
}

fn construct(d: Dialect, rule: &'static str, ok: bool, what: &str) -> TResult<()> {
    if ok {
        Ok(())
    } else {
        Err(err(rule, format!("{what} is not part of the {d} dialect")))
    }
}

// ---- (a) CBV with effects ----

struct Eff<'a> {
    d: Dialect,
    alg: &'a EffectAlgebra,
    ctx: Vec<(String, SType)>,
}

impl Eff<'_> {
    fn comb(&self, rule: &'static str, a: Effect, b: Effect) -> TResult<Effect> {
        self.alg.combine(a, b).map_err(|e| TypeError::grade(rule, e))
    }

    fn under<T>(&mut self, xs: Vec<(String, SType)>, f: impl FnOnce(&mut Self) -> TResult<T>) -> TResult<T> {
        let k = xs.len();
        self.ctx.extend(xs);
        let r = f(self);
        self.ctx.truncate(self.ctx.len() - k);
        r
    }

    fn go(&mut self, e: &STerm) -> TResult<(SType, Effect)> {
        let bot = self.alg.unit();
        match e {
            STerm::Var(x) => match lookup(&self.ctx, x) {
                Some((_, t)) => Ok((t.clone(), bot)),
                None => Err(err("lam-eff-var", format!("unbound variable `{x}`"))),
            },
            STerm::Unit => Ok((SType::Unit, bot)),
            STerm::Tick => {
                let e = self.alg.prim("tick").ok_or_else(|| err("lam-eff-tick", "the algebra has no `tick`"))?;
                Ok((SType::Unit, e))
            }
            STerm::Lam(x, _, t, body) => {
                check_type(self.d, t)?;
                let (b, phi) = self.under(vec![(x.clone(), t.clone())], |c| c.go(body))?;
                Ok((SType::fun(Latent::Eff(phi), t.clone(), b), bot))
            }
            STerm::App(f, a) => {
                let (tf, e1) = self.go(f)?;
                let (ta, e2) = self.go(a)?;
                let (phi, dom, cod) = match tf {
                    SType::Fun(Latent::Eff(phi), dom, cod) => (phi, *dom, *cod),
                    t => return Err(err("lam-eff-app", format!("application of a non-function of type {t}"))),
                };
                if ta != dom {
                    return Err(mismatch("lam-eff-app", &dom, &ta));
                }
                let e = self.comb("lam-eff-app", e1, e2)?;
                Ok((cod, self.comb("lam-eff-app", e, phi)?))
            }
            STerm::Seq(a, b) => {
                let (ta, e1) = self.go(a)?;
                expect_unit("lam-eff-sequence", &ta)?;
                let (tb, e2) = self.go(b)?;
                Ok((tb, self.comb("lam-eff-sequence", e1, e2)?))
            }
            STerm::Pair(a, b) => {
                let (ta, e1) = self.go(a)?;
                let (tb, e2) = self.go(b)?;
                Ok((SType::tensor(ta, tb), self.comb("lam-eff-pair", e1, e2)?))
            }
            STerm::Split(_, x, y, s, body) => {
                let (ts, e1) = self.go(s)?;
                let (a, b) = tensor_of("lam-eff-split", ts)?;
                let (tb, e2) = self.under(vec![(x.clone(), a), (y.clone(), b)], |c| c.go(body))?;
                Ok((tb, self.comb("lam-eff-split", e1, e2)?))
            }
            STerm::Inl(t, v) | STerm::Inr(t, v) => {
                let left = matches!(e, STerm::Inl(..));
                let rule = if left { "lam-eff-inl" } else { "lam-eff-inr" };
                check_type(self.d, t)?;
                let (a, b) = sum_of(rule, t)?;
                let (tv, phi) = self.go(v)?;
                let want = if left { a } else { b };
                if tv != want {
                    return Err(mismatch(rule, &want, &tv));
                }
                Ok((t.clone(), phi))
            }
            STerm::Case(_, s, x, l, y, r) => {
                let (ts, e0) = self.go(s)?;
                let (a, b) = sum_of("lam-eff-case", &ts)?;
                let (tl, e1) = self.under(vec![(x.clone(), a)], |c| c.go(l))?;
                let (tr, e2) = self.under(vec![(y.clone(), b)], |c| c.go(r))?;
                if tl != tr {
                    return Err(mismatch("lam-eff-case", &tl, &tr));
                }
                let j = self.alg.join(e1, e2).map_err(|e| TypeError::grade("lam-eff-case", e))?;
                Ok((tl, self.comb("lam-eff-case", e0, j)?))
            }
            other => Err(err("lam-eff", format!("`{other}` is not part of the {} dialect", self.d))),
        }
    }
}

// ---- (b) graded monad ----

struct Mon<'a> {
    d: Dialect,
    alg: &'a EffectAlgebra,
    ctx: Vec<(String, SType)>,
}

impl Mon<'_> {
    fn under<T>(&mut self, xs: Vec<(String, SType)>, f: impl FnOnce(&mut Self) -> TResult<T>) -> TResult<T> {
        let k = xs.len();
        self.ctx.extend(xs);
        let r = f(self);
        self.ctx.truncate(self.ctx.len() - k);
        r
    }

    fn go(&mut self, e: &STerm) -> TResult<SType> {
        let d = self.d;
        match e {
            STerm::Var(x) => match lookup(&self.ctx, x) {
                Some((_, t)) => Ok(t.clone()),
                None => Err(err("lam-mon-var", format!("unbound variable `{x}`"))),
            },
            STerm::Unit => Ok(SType::Unit),
            STerm::Tick => {
                let e = self.alg.prim("tick").ok_or_else(|| err("lam-mon-tick", "the algebra has no `tick`"))?;
                Ok(SType::monad(e, SType::Unit))
            }
            STerm::Lam(x, _, t, body) => {
                check_type(d, t)?;
                let b = self.under(vec![(x.clone(), t.clone())], |c| c.go(body))?;
                Ok(SType::fun(Latent::Plain, t.clone(), b))
            }
            STerm::App(f, a) => {
                let tf = self.go(f)?;
                let ta = self.go(a)?;
                match tf {
                    SType::Fun(Latent::Plain, dom, cod) => {
                        if ta != *dom {
                            return Err(mismatch("lam-mon-app", &dom, &ta));
                        }
                        Ok(*cod)
                    }
                    t => Err(err("lam-mon-app", format!("application of a non-function of type {t}"))),
                }
            }
            STerm::Seq(a, b) => {
                expect_unit("lam-mon-sequence", &self.go(a)?)?;
                self.go(b)
            }
            STerm::Pair(a, b) => {
                construct(d, "lam-mon-pair", d.has_tensor(), "`(e, e)`")?;
                Ok(SType::tensor(self.go(a)?, self.go(b)?))
            }
            STerm::Split(_, x, y, s, body) => {
                construct(d, "lam-mon-split", d.has_tensor(), "`let (x, y)`")?;
                let (a, b) = tensor_of("lam-mon-split", self.go(s)?)?;
                self.under(vec![(x.clone(), a), (y.clone(), b)], |c| c.go(body))
            }
            STerm::WPair(a, b) => {
                construct(d, "lam-mon-with", d.has_with(), "`<e, e>`")?;
                Ok(SType::with(self.go(a)?, self.go(b)?))
            }
            STerm::Fst(p) | STerm::Snd(p) => {
                let first = matches!(e, STerm::Fst(_));
                let rule = if first { "lam-mon-fst" } else { "lam-mon-snd" };
                construct(d, rule, d.has_with(), "projection")?;
                let (a, b) = with_of(rule, self.go(p)?)?;
                Ok(if first { a } else { b })
            }
            STerm::Inl(t, v) | STerm::Inr(t, v) => {
                let left = matches!(e, STerm::Inl(..));
                let rule = if left { "lam-mon-inl" } else { "lam-mon-inr" };
                check_type(d, t)?;
                let (a, b) = sum_of(rule, t)?;
                let tv = self.go(v)?;
                let want = if left { a } else { b };
                if tv != want {
                    return Err(mismatch(rule, &want, &tv));
                }
                Ok(t.clone())
            }
            STerm::Case(_, s, x, l, y, r) => {
                let (a, b) = sum_of("lam-mon-case", &self.go(s)?)?;
                let tl = self.under(vec![(x.clone(), a)], |c| c.go(l))?;
                let tr = self.under(vec![(y.clone(), b)], |c| c.go(r))?;
                if tl != tr {
                    return Err(mismatch("lam-mon-case", &tl, &tr));
                }
                Ok(tl)
            }
            STerm::Return(v) => Ok(SType::monad(self.alg.unit(), self.go(v)?)),
            STerm::Bind(x, s, body) => {
                let (phi1, a) = match self.go(s)? {
                    SType::Monad(p, a) => (p, *a),
                    t => return Err(err("lam-mon-bind", format!("bind of a non-monadic {t}"))),
                };
                let (phi2, b) = match self.under(vec![(x.clone(), a)], |c| c.go(body))? {
                    SType::Monad(p, b) => (p, *b),
                    t => return Err(err("lam-mon-bind", format!("bind body has non-monadic type {t}"))),
                };
                let phi = self.alg.combine(phi1, phi2).map_err(|e| TypeError::grade("lam-mon-bind", e))?;
                Ok(SType::monad(phi, b))
            }
            other => Err(err("lam-mon", format!("`{other}` is not part of the {d} dialect"))),
        }
    }
}

// ---- (c) graded coeffects ----

struct Co<'a> {
    d: Dialect,
    alg: &'a CoeffectAlgebra,
    ctx: Vec<(String, SType)>,
}

impl Co<'_> {
    fn n(&self) -> usize {
        self.ctx.len()
    }

    fn g<T>(&self, rule: &'static str, r: Result<T, crate::grading::GradeError>) -> TResult<T> {
        r.map_err(|e| TypeError::grade(rule, e))
    }

    fn bound(&self, rule: &'static str, x: &str, q: crate::grading::Grade, demand: crate::grading::Grade) -> TResult<()> {
        if self.g(rule, self.alg.leq(q, demand))? {
            Ok(())
        } else {
            Err(err(rule, format!("binder `{x}` grade {q} does not satisfy demand {demand}")))
        }
    }

    fn under<T>(&mut self, xs: Vec<(String, SType)>, f: impl FnOnce(&mut Self) -> TResult<T>) -> TResult<T> {
        let k = xs.len();
        self.ctx.extend(xs);
        let r = f(self);
        self.ctx.truncate(self.ctx.len() - k);
        r
    }

    fn go(&mut self, e: &STerm) -> TResult<(SType, GradeVec)> {
        let d = self.d;
        let alg = self.alg;
        match e {
            STerm::Var(x) => match lookup(&self.ctx, x) {
                Some((k, t)) => Ok((t.clone(), alg.unit_vec(self.n(), k))),
                None => Err(err("lam-coeff-var", format!("unbound variable `{x}`"))),
            },
            STerm::Unit => Ok((SType::Unit, alg.zeros(self.n()))),
            STerm::Lam(x, q, t, body) => {
                let q = q.ok_or_else(|| err("lam-coeff-abs", "missing grade annotation"))?;
                check_type(d, t)?;
                let (b, g) = self.under(vec![(x.clone(), t.clone())], |c| c.go(body))?;
                let (rest, dm) = g.split_last(1);
                self.bound("lam-coeff-abs", x, q, dm[0])?;
                Ok((SType::fun(Latent::Co(q), t.clone(), b), rest))
            }
            STerm::App(f, a) => {
                let (tf, g1) = self.go(f)?;
                let (ta, g2) = self.go(a)?;
                let (q, dom, cod) = match tf {
                    SType::Fun(Latent::Co(q), dom, cod) => (q, *dom, *cod),
                    t => return Err(err("lam-coeff-app", format!("application of a non-function of type {t}"))),
                };
                if ta != dom {
                    return Err(mismatch("lam-coeff-app", &dom, &ta));
                }
                let s = self.g("lam-coeff-app", alg.vec_scale(q, &g2))?;
                Ok((cod, self.g("lam-coeff-app", alg.vec_add(&g1, &s))?))
            }
            STerm::Seq(a, b) => {
                let (ta, g1) = self.go(a)?;
                expect_unit("lam-coeff-sequence", &ta)?;
                let (tb, g2) = self.go(b)?;
                Ok((tb, self.g("lam-coeff-sequence", alg.vec_add(&g1, &g2))?))
            }
            STerm::Pair(a, b) => {
                construct(d, "lam-coeff-pair", d.has_tensor(), "`(e, e)`")?;
                let (ta, g1) = self.go(a)?;
                let (tb, g2) = self.go(b)?;
                Ok((SType::tensor(ta, tb), self.g("lam-coeff-pair", alg.vec_add(&g1, &g2))?))
            }
            STerm::Split(q, x, y, s, body) => {
                construct(d, "lam-coeff-split", d.has_tensor(), "`let (x, y)`")?;
                let q = q.ok_or_else(|| err("lam-coeff-split", "missing grade annotation"))?;
                let (ts, g1) = self.go(s)?;
                let (a, b) = tensor_of("lam-coeff-split", ts)?;
                let (tb, g2) = self.under(vec![(x.clone(), a), (y.clone(), b)], |c| c.go(body))?;
                let (rest, dm) = g2.split_last(2);
                self.bound("lam-coeff-split", x, q, dm[0])?;
                self.bound("lam-coeff-split", y, q, dm[1])?;
                let s = self.g("lam-coeff-split", alg.vec_scale(q, &g1))?;
                Ok((tb, self.g("lam-coeff-split", alg.vec_add(&s, &rest))?))
            }
            STerm::WPair(a, b) => {
                construct(d, "lam-coeff-with", d.has_with(), "`<e, e>`")?;
                let (ta, g1) = self.go(a)?;
                let (tb, g2) = self.go(b)?;
                Ok((SType::with(ta, tb), self.g("lam-coeff-with", alg.vec_join(&g1, &g2))?))
            }
            STerm::Fst(p) | STerm::Snd(p) => {
                let first = matches!(e, STerm::Fst(_));
                let rule = if first { "lam-coeff-fst" } else { "lam-coeff-snd" };
                construct(d, rule, d.has_with(), "projection")?;
                let (tp, g) = self.go(p)?;
                let (a, b) = with_of(rule, tp)?;
                Ok((if first { a } else { b }, g))
            }
            STerm::Inl(t, v) | STerm::Inr(t, v) => {
                let left = matches!(e, STerm::Inl(..));
                let rule = if left { "lam-coeff-inl" } else { "lam-coeff-inr" };
                check_type(d, t)?;
                let (a, b) = sum_of(rule, t)?;
                let (tv, g) = self.go(v)?;
                let want = if left { a } else { b };
                if tv != want {
                    return Err(mismatch(rule, &want, &tv));
                }
                Ok((t.clone(), g))
            }
            STerm::Case(q, s, x, l, y, r) => {
                let q = q.ok_or_else(|| err("lam-coeff-case", "missing grade annotation"))?;
                if !self.g("lam-coeff-case", alg.leq(q, alg.one()))? {
                    return Err(err("lam-coeff-case", format!("case grade {q} must be at most 1")));
                }
                let (ts, g1) = self.go(s)?;
                let (a, b) = sum_of("lam-coeff-case", &ts)?;
                let (tl, gl) = self.under(vec![(x.clone(), a)], |c| c.go(l))?;
                let (tr, gr) = self.under(vec![(y.clone(), b)], |c| c.go(r))?;
                if tl != tr {
                    return Err(mismatch("lam-coeff-case", &tl, &tr));
                }
                let (rl, dl) = gl.split_last(1);
                let (rr, dr) = gr.split_last(1);
                self.bound("lam-coeff-case", x, q, dl[0])?;
                self.bound("lam-coeff-case", y, q, dr[0])?;
                let shared = self.g("lam-coeff-case", alg.vec_join(&rl, &rr))?;
                let s = self.g("lam-coeff-case", alg.vec_scale(q, &g1))?;
                Ok((tl, self.g("lam-coeff-case", alg.vec_add(&s, &shared))?))
            }
            STerm::BoxI(q, v) => {
                let (t, g) = self.go(v)?;
                Ok((SType::boxed(*q, t), self.g("lam-coeff-box", alg.vec_scale(*q, &g))?))
            }
            STerm::Unbox(q2, x, s, body) => {
                let (ts, g1) = self.go(s)?;
                let (q1, a) = match ts {
                    SType::Boxed(q1, a) => (q1, *a),
                    t => return Err(err("lam-coeff-unbox", format!("unbox of a non-box {t}"))),
                };
                let (tb, g2) = self.under(vec![(x.clone(), a)], |c| c.go(body))?;
                let (rest, dm) = g2.split_last(1);
                let q = self.g("lam-coeff-unbox", alg.mul(q1, *q2))?;
                self.bound("lam-coeff-unbox", x, q, dm[0])?;
                let s = self.g("lam-coeff-unbox", alg.vec_scale(*q2, &g1))?;
                Ok((tb, self.g("lam-coeff-unbox", alg.vec_add(&s, &rest))?))
            }
            other => Err(err("lam-coeff", format!("`{other}` is not part of the {d} dialect"))),
        }
    }
}

// ---- (d) comonadic linear ----

struct Slot {
    name: String,
    ty: SType,
    used: bool,
}

struct Lin<'a> {
    d: Dialect,
    alg: &'a CoeffectAlgebra,
    slots: Vec<Slot>,
    /// Slots below this index are out of reach (inside an `extend` body).
    floor: usize,
}

impl Lin<'_> {
    fn leq(&self, rule: &'static str, a: crate::grading::Grade, b: crate::grading::Grade) -> TResult<bool> {
        self.alg.leq(a, b).map_err(|e| TypeError::grade(rule, e))
    }

    /// Checks `body` with fresh linear binders, each of which must be used.
    fn under(&mut self, rule: &'static str, xs: Vec<(String, SType)>, body: &STerm) -> TResult<SType> {
        let base = self.slots.len();
        self.slots.extend(xs.into_iter().map(|(name, ty)| Slot { name, ty, used: false }));
        let r = self.go(body);
        let unused = self.slots[base..].iter().find(|s| !s.used).map(|s| s.name.clone());
        self.slots.truncate(base);
        let t = r?;
        match unused {
            Some(x) => Err(err(rule, format!("linear variable `{x}` is never used"))),
            None => Ok(t),
        }
    }

    fn boxed(&mut self, rule: &'static str, e: &STerm) -> TResult<(crate::grading::Grade, SType)> {
        match self.go(e)? {
            SType::Boxed(q, a) => Ok((q, *a)),
            t => Err(err(rule, format!("expected a box, found {t}"))),
        }
    }

    fn go(&mut self, e: &STerm) -> TResult<SType> {
        let d = self.d;
        match e {
            STerm::Var(x) => {
                let k = self.slots.iter().rposition(|s| s.name == *x);
                match k {
                    Some(k) if k >= self.floor => {
                        let s = &mut self.slots[k];
                        if s.used {
                            return Err(err("lam-com-var", format!("linear variable `{x}` used more than once")));
                        }
                        s.used = true;
                        Ok(s.ty.clone())
                    }
                    Some(_) => Err(err("lam-com-extend", format!("`{x}` is not bound by the enclosing extend"))),
                    None => Err(err("lam-com-var", format!("unbound variable `{x}`"))),
                }
            }
            STerm::Unit => Ok(SType::Unit),
            STerm::Lam(x, _, t, body) => {
                check_type(d, t)?;
                let b = self.under("lam-com-abs", vec![(x.clone(), t.clone())], body)?;
                Ok(SType::fun(Latent::Linear, t.clone(), b))
            }
            STerm::App(f, a) => {
                let tf = self.go(f)?;
                let ta = self.go(a)?;
                match tf {
                    SType::Fun(Latent::Linear, dom, cod) => {
                        if ta != *dom {
                            return Err(mismatch("lam-com-app", &dom, &ta));
                        }
                        Ok(*cod)
                    }
                    t => Err(err("lam-com-app", format!("application of a non-function of type {t}"))),
                }
            }
            STerm::Seq(a, b) => {
                expect_unit("lam-com-sequence", &self.go(a)?)?;
                self.go(b)
            }
            STerm::Extract(v) => {
                let (q, a) = self.boxed("lam-com-extract", v)?;
                if !self.leq("lam-com-extract", q, self.alg.one())? {
                    return Err(err("lam-com-extract", format!("extract needs grade at most 1, found {q}")));
                }
                Ok(a)
            }
            STerm::Extend(q, bs, body) => {
                let mut inner = Vec::new();
                for b in bs {
                    let (q1, a) = self.boxed("lam-com-extend", &b.rhs)?;
                    let need = self.alg.mul(*q, b.grade).map_err(|e| TypeError::grade("lam-com-extend", e))?;
                    if !self.leq("lam-com-extend", q1, need)? {
                        return Err(err(
                            "lam-com-extend",
                            format!("binder `{}` supplies grade {q1}, which does not cover {q}·{} = {need}", b.name, b.grade),
                        ));
                    }
                    inner.push((b.name.clone(), SType::boxed(b.grade, a)));
                }
                let floor = std::mem::replace(&mut self.floor, self.slots.len());
                let r = self.under("lam-com-extend", inner, body);
                self.floor = floor;
                Ok(SType::boxed(*q, r?))
            }
            STerm::Divide(x, q1, y, q2, s, body) => {
                let (q, a) = self.boxed("lam-com-divide", s)?;
                let sum = self.alg.add(*q1, *q2).map_err(|e| TypeError::grade("lam-com-divide", e))?;
                if !self.leq("lam-com-divide", q, sum)? {
                    return Err(err("lam-com-divide", format!("grade {q} does not cover {q1} + {q2}")));
                }
                let xs = vec![(x.clone(), SType::boxed(*q1, a.clone())), (y.clone(), SType::boxed(*q2, a))];
                self.under("lam-com-divide", xs, body)
            }
            STerm::Discard(s, body) => {
                let (q, _) = self.boxed("lam-com-discard", s)?;
                if !self.leq("lam-com-discard", q, self.alg.zero())? {
                    return Err(err("lam-com-discard", format!("only grade-0 boxes can be discarded, found {q}")));
                }
                self.go(body)
            }
            other => Err(err("lam-com", format!("`{other}` is not part of the {d} dialect"))),
        }
    }
}

/// Type-checks a source term in a dialect.
pub fn src_check(d: Dialect, alg: SrcGrades<'_>, ctx: &SContext, e: &STerm) -> TResult<SrcJudgement> {
    for (_, t) in ctx {
        check_type(d, t)?;
    }
    let ctx = ctx.clone();
    match (d.lang, alg) {
        (Lang::Effect, SrcGrades::Effect(alg)) => {
            let (ty, phi) = Eff { d, alg, ctx }.go(e)?;
            Ok(SrcJudgement {
                ty,
                grading: SrcGrading::Effect(phi),
            })
        }
        (Lang::Monadic, SrcGrades::Effect(alg)) => {
            let ty = Mon { d, alg, ctx }.go(e)?;
            Ok(SrcJudgement {
                ty,
                grading: SrcGrading::Pure,
            })
        }
        (Lang::Coeffect, SrcGrades::Coeffect(alg)) => {
            let (ty, g) = Co { d, alg, ctx }.go(e)?;
            Ok(SrcJudgement {
                ty,
                grading: SrcGrading::Vector(g),
            })
        }
        (Lang::Comonadic, SrcGrades::Coeffect(alg)) => {
            let slots = ctx.into_iter().map(|(name, ty)| Slot { name, ty, used: false }).collect();
            let mut c = Lin { d, alg, slots, floor: 0 };
            let ty = c.go(e)?;
            if let Some(s) = c.slots.iter().find(|s| !s.used) {
                return Err(err("lam-com-var", format!("linear assumption `{}` is never used", s.name)));
            }
            Ok(SrcJudgement {
                ty,
                grading: SrcGrading::Linear,
            })
        }
        _ => Err(err("src-algebra", format!("the {d} dialect needs {} algebra", d.lang.algebra_kind()))),
    }
}

/// Synthesizes a type without enforcing linearity of the ambient context.
/// Used by translations that need the type of a subterm.
pub(crate) fn synth(d: Dialect, alg: SrcGrades<'_>, ctx: &SContext, e: &STerm) -> TResult<SType> {
    let ctx = ctx.clone();
    match (d.lang, alg) {
        (Lang::Comonadic, SrcGrades::Coeffect(alg)) => {
            let slots = ctx.into_iter().map(|(name, ty)| Slot { name, ty, used: false }).collect();
            Lin { d, alg, slots, floor: 0 }.go(e)
        }
        _ => src_check(d, alg, &ctx, e).map(|j| j.ty),
    }
}

impl Dialect {
    pub fn has_tensor(self) -> bool {
        self.strategy == Strategy::Cbv && self.lang != Lang::Comonadic
    }

    pub fn has_with(self) -> bool {
        self.strategy == Strategy::Cbn && matches!(self.lang, Lang::Monadic | Lang::Coeffect)
    }
}
