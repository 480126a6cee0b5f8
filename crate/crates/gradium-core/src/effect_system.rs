//! Type-and-effect checking for effect-mode programs with minimal-effect
//! synthesis.

use crate::diag::{TResult, TypeError};
use crate::grading::{Effect, EffectAlgebra};
use crate::syntax::{Comp, CompType, Context, ValType, Value};
use crate::unify::{Namer, Subst};

struct Checker<'a> {
    alg: &'a EffectAlgebra,
    sub: Subst,
    /// Value types in scope, outermost first.
    env: Vec<ValType>,
}

fn mismatch(rule: &'static str, want: &str, got: &ValType) -> TypeError {
    TypeError::new(rule, format!("expected {want}, found {got}"))
}

impl<'a> Checker<'a> {
    fn new(alg: &'a EffectAlgebra, ctx: &Context) -> Self {
        Self {
            alg,
            sub: Subst::new(),
            env: ctx.entries.iter().map(|(_, t)| t.clone()).collect(),
        }
    }

    fn combine(&self, a: Effect, b: Effect, rule: &'static str) -> TResult<Effect> {
        self.alg.combine(a, b).map_err(|e| TypeError::grade(rule, e))
    }

    fn show(&self, t: &ValType) -> ValType {
        self.sub.zonk_val(t)
    }

    fn unify_val(&mut self, rule: &'static str, want: &ValType, got: &ValType) -> TResult<()> {
        self.sub.unify_val(want, got).map_err(|_| {
            TypeError::new(rule, format!("type mismatch: expected {}, found {}", self.show(want), self.show(got)))
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

    fn lookup(&self, i: usize) -> TResult<ValType> {
        if i < self.env.len() {
            Ok(self.env[self.env.len() - 1 - i].clone())
        } else {
            Err(TypeError::new("eff-var", format!("unbound variable index {i}")))
        }
    }

    fn value(&mut self, v: &Value) -> TResult<ValType> {
        match v {
            Value::Var(i, _) => self.lookup(*i),
            Value::Unit => Ok(ValType::Unit),
            Value::Thunk(m) => {
                let (b, e) = self.comp(m)?;
                Ok(ValType::u(Some(e), b))
            }
            Value::Pair(a, b) => {
                let a = self.value(a)?;
                Ok(ValType::prod(a, self.value(b)?))
            }
            Value::Inl(_) => Err(TypeError::new("eff-inl", "injection needs a type ascription `inl V : A + B`")),
            Value::Inr(_) => Err(TypeError::new("eff-inr", "injection needs a type ascription `inr V : A + B`")),
            Value::Ann(v, t) => {
                self.check_value(v, t)?;
                Ok(t.clone())
            }
            Value::With(..) | Value::Fst(_) | Value::Snd(_) => {
                Err(TypeError::new("eff-mode", "shared value products are coeffect-mode only"))
            }
        }
    }

    fn check_value(&mut self, v: &Value, t: &ValType) -> TResult<()> {
        let head = self.sub.head(t);
        match (v, &head) {
            (Value::Inl(w), ValType::Sum(a, _)) => self.check_value(w, a),
            (Value::Inr(w), ValType::Sum(_, b)) => self.check_value(w, b),
            (Value::Inl(_), _) => Err(mismatch("eff-inl", "a sum type", &self.show(t))),
            (Value::Inr(_), _) => Err(mismatch("eff-inr", "a sum type", &self.show(t))),
            (Value::Pair(a, b), ValType::Prod(ta, tb)) => {
                self.check_value(a, ta)?;
                self.check_value(b, tb)
            }
            (Value::Thunk(m), ValType::U(Some(bound), b)) => {
                let (got, e) = self.comp(m)?;
                self.unify_comp("eff-thunk", b, &got)?;
                if !self.alg.leq(e, *bound).map_err(|e| TypeError::grade("eff-thunk", e))? {
                    return Err(TypeError::new(
                        "eff-thunk",
                        format!("thunk body has effect {e}, exceeding its annotation {bound}"),
                    ));
                }
                Ok(())
            }
            _ => {
                let got = self.value(v)?;
                self.unify_val("eff-ascribe", t, &got)
            }
        }
    }

    fn comp(&mut self, m: &Comp) -> TResult<(CompType, Effect)> {
        match m {
            Comp::Prim(p) => match self.alg.prim(p) {
                Some(e) => Ok((CompType::f(None, ValType::Unit), e)),
                None => Err(TypeError::new("eff-tick", format!("unknown primitive `{p}`"))),
            },
            Comp::Lam(_, _, t, body) => {
                let a = match t {
                    Some(t) => t.clone(),
                    None => self.sub.fresh(),
                };
                self.env.push(a.clone());
                let r = self.comp(body);
                self.env.pop();
                let (b, e) = r?;
                Ok((CompType::arrow(None, a, b), e))
            }
            Comp::App(f, v) => {
                let (t, e) = self.comp(f)?;
                match t {
                    CompType::Arrow(_, a, b) => {
                        self.check_value(v, &a)?;
                        Ok((*b, e))
                    }
                    t => Err(TypeError::new("eff-app", format!("application head has type {t}, not a function"))),
                }
            }
            Comp::Force(v) => {
                let t = self.value(v)?;
                match self.sub.head(&t) {
                    ValType::U(Some(e), b) => Ok((*b, e)),
                    ValType::Meta(_) => Err(TypeError::new("eff-force", "forced variable needs a type annotation")),
                    t => Err(mismatch("eff-force", "a thunk", &self.show(&t))),
                }
            }
            Comp::Return(_, v) => {
                let a = self.value(v)?;
                Ok((CompType::f(None, a), self.alg.unit()))
            }
            Comp::Let(_, _, m, n) => {
                let (t, e1) = self.comp(m)?;
                let a = match t {
                    CompType::F(_, a) => *a,
                    t => return Err(TypeError::new("eff-letin", format!("bound computation has type {t}, not F A"))),
                };
                self.env.push(a);
                let r = self.comp(n);
                self.env.pop();
                let (b, e2) = r?;
                Ok((b, self.combine(e1, e2, "eff-letin")?))
            }
            Comp::Split(_, v, _, _, n) => {
                let t = self.value(v)?;
                let (a1, a2) = match self.sub.head(&t) {
                    ValType::Prod(a1, a2) => (*a1, *a2),
                    ValType::Meta(_) => {
                        let (a1, a2) = (self.sub.fresh(), self.sub.fresh());
                        self.unify_val("eff-split", &t, &ValType::prod(a1.clone(), a2.clone()))?;
                        (a1, a2)
                    }
                    t => return Err(mismatch("eff-split", "a product", &self.show(&t))),
                };
                self.env.push(a1);
                self.env.push(a2);
                let r = self.comp(n);
                self.env.truncate(self.env.len() - 2);
                r
            }
            Comp::Seq(v, n) => {
                self.check_value(v, &ValType::Unit)
                    .map_err(|e| TypeError::new("eff-sequence", e.msg))?;
                self.comp(n)
            }
            Comp::Case(_, v, _, l, _, r) => {
                let t = self.value(v)?;
                let (a1, a2) = match self.sub.head(&t) {
                    ValType::Sum(a1, a2) => (*a1, *a2),
                    ValType::Meta(_) => {
                        let (a1, a2) = (self.sub.fresh(), self.sub.fresh());
                        self.unify_val("eff-case", &t, &ValType::sum(a1.clone(), a2.clone()))?;
                        (a1, a2)
                    }
                    t => return Err(mismatch("eff-case", "a sum", &self.show(&t))),
                };
                let (b1, e1) = self.under(a1, l)?;
                let (b2, e2) = self.under(a2, r)?;
                self.unify_comp("eff-case", &b1, &b2)?;
                let e = self.alg.join(e1, e2).map_err(|e| TypeError::grade("eff-case", e))?;
                Ok((b1, e))
            }
            Comp::CPair(a, b) => {
                let (t1, e1) = self.comp(a)?;
                let (t2, e2) = self.comp(b)?;
                let e = self.alg.join(e1, e2).map_err(|e| TypeError::grade("eff-cpair", e))?;
                Ok((CompType::with(t1, t2), e))
            }
            Comp::CFst(p) | Comp::CSnd(p) => {
                let first = matches!(m, Comp::CFst(_));
                let rule = if first { "eff-fst" } else { "eff-snd" };
                let (t, e) = self.comp(p)?;
                match t {
                    CompType::With(b1, b2) => Ok((if first { *b1 } else { *b2 }, e)),
                    t => Err(TypeError::new(rule, format!("projection from {t}, not a computation pair"))),
                }
            }
            Comp::Tensor(..) | Comp::TSplit(..) => {
                Err(TypeError::new("eff-mode", "computation products are coeffect-mode only"))
            }
        }
    }

    fn under(&mut self, a: ValType, m: &Comp) -> TResult<(CompType, Effect)> {
        self.env.push(a);
        let r = self.comp(m);
        self.env.pop();
        r
    }
}

/// Synthesizes the type of a value.
pub fn infer_value(alg: &EffectAlgebra, ctx: &Context, v: &Value) -> TResult<ValType> {
    let mut c = Checker::new(alg, ctx);
    let t = c.value(v)?;
    Ok(Namer::new().val(&c.sub.zonk_val(&t)))
}

/// Synthesizes the type and least effect of a computation.
pub fn infer_comp(alg: &EffectAlgebra, ctx: &Context, m: &Comp) -> TResult<(CompType, Effect)> {
    let mut c = Checker::new(alg, ctx);
    let (t, e) = c.comp(m)?;
    Ok((Namer::new().comp(&c.sub.zonk_comp(&t)), e))
}

/// Checks `m` against a type and an effect bound; returns the least effect.
pub fn check_comp(alg: &EffectAlgebra, ctx: &Context, m: &Comp, b: &CompType, bound: Effect) -> TResult<Effect> {
    let mut c = Checker::new(alg, ctx);
    let (t, e) = c.comp(m)?;
    c.unify_comp("eff-check", b, &t)?;
    if !alg.leq(e, bound).map_err(|err| TypeError::grade("eff-sub", err))? {
        return Err(TypeError::new("eff-sub", format!("effect {e} exceeds bound {bound}")));
    }
    Ok(e)
}

/// Checks a value against a type.
pub fn check_value(alg: &EffectAlgebra, ctx: &Context, v: &Value, t: &ValType) -> TResult<()> {
    Checker::new(alg, ctx).check_value(v, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_comp, parse_value, Grades};

    fn alg() -> EffectAlgebra {
        EffectAlgebra::nat_cost()
    }

    fn infer(src: &str) -> TResult<(CompType, Effect)> {
        let a = alg();
        let m = parse_comp(src, Grades::Effect(&a), &[]).unwrap();
        infer_comp(&a, &Context::new(), &m)
    }

    #[test]
    fn two_ticks() {
        let (t, e) = infer("let x <- tick in tick").unwrap();
        assert_eq!((t.to_string(), e.raw()), ("F Unit".into(), 2));
        let a = alg();
        let m = parse_comp("let x <- tick in tick", Grades::Effect(&a), &[]).unwrap();
        let fu = CompType::f(None, ValType::Unit);
        let ctx = Context::new();
        assert!(check_comp(&a, &ctx, &m, &fu, a.nat(2)).is_ok());
        assert!(check_comp(&a, &ctx, &m, &fu, a.nat(7)).is_ok());
        assert_eq!(check_comp(&a, &ctx, &m, &fu, a.nat(1)).unwrap_err().rule, "eff-sub");
    }

    #[test]
    fn computation_pair_joins() {
        let (t, e) = infer("<tick, let y <- tick in tick>").unwrap();
        assert_eq!((t.to_string(), e.raw()), ("F Unit & F Unit".into(), 2));
        assert_eq!(infer("<tick, let y <- tick in tick>.1").unwrap().1.raw(), 2);
        assert_eq!(infer("return ()").unwrap().1.raw(), 0);
    }

    #[test]
    fn thunks() {
        let a = alg();
        let ctx = Context::new();
        let v = parse_value("{tick}", Grades::Effect(&a), &[]).unwrap();
        assert_eq!(infer_value(&a, &ctx, &v).unwrap().to_string(), "U^1 F Unit");
        let v = parse_value("({tick} : U^0 F Unit)", Grades::Effect(&a), &[]).unwrap();
        assert_eq!(infer_value(&a, &ctx, &v).unwrap_err().rule, "eff-thunk");
        let v = parse_value("({tick} : U^3 F Unit)", Grades::Effect(&a), &[]).unwrap();
        assert_eq!(infer_value(&a, &ctx, &v).unwrap().to_string(), "U^3 F Unit");
    }

    #[test]
    fn lambda_effects_flow_out() {
        let (t, e) = infer("\\x. let y <- tick in return x").unwrap();
        assert_eq!((t.to_string(), e.raw()), ("A -> F A".into(), 1));
        let (t, e) = infer("(\\x : U^1 F Unit. x!) {tick}").unwrap();
        assert_eq!((t.to_string(), e.raw()), ("F Unit".into(), 1));
    }

    #[test]
    fn errors_name_rules() {
        assert_eq!(infer("\\x. x!").unwrap_err().rule, "eff-force");
        assert_eq!(infer("return inl ()").unwrap_err().rule, "eff-inl");
        assert_eq!(infer("(return ()) ()").unwrap_err().rule, "eff-app");
        assert_eq!(infer("let x <- \\y. tick in tick").unwrap_err().rule, "eff-letin");
        assert_eq!(infer("(); tick").unwrap().1.raw(), 1);
        assert_eq!(infer("((), ()); tick").unwrap_err().rule, "eff-sequence");
    }

    #[test]
    fn case_joins_or_fails() {
        let src = "case inl () : Unit + Unit of inl a -> tick | inr b -> return b";
        assert_eq!(infer(src).unwrap().1.raw(), 1);
        let ex = EffectAlgebra::nat_exact();
        let m = parse_comp(src, Grades::Effect(&ex), &[]).unwrap();
        assert_eq!(infer_comp(&ex, &Context::new(), &m).unwrap_err().rule, "eff-case");
    }

    #[test]
    fn split_refines_unknown_binders() {
        let (t, _) = infer("\\p. case p of (a, b) -> return (b, a)").unwrap();
        assert_eq!(t.to_string(), "A * A1 -> F (A1 * A)");
    }
}
