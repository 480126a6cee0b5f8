//! The seven translations and the preservation check.

use thiserror::Error;

use super::check::{src_check, synth, SrcGrading, SrcJudgement};
use super::parse::SrcGrades;
use super::source::{Latent, STerm, SType};
use super::{Dialect, Lang, SContext, Strategy};
use crate::coeffect_system::{co_check, co_infer_comp};
use crate::diag::{TResult, TypeError};
use crate::effect_system::{check_comp, infer_comp};
use crate::grading::{Effect, Grade, GradeVec};
use crate::syntax::{Comp, CompType, Context, Name, Term, ValType, Value};

enum Key {
    Src(String),
    Gen(u32),
}

struct Entry {
    key: Key,
    name: String,
    sty: Option<SType>,
}

struct Tr<'a> {
    d: Dialect,
    alg: SrcGrades<'a>,
    scope: Vec<Entry>,
    next: u32,
}

fn defect(msg: impl Into<String>) -> TypeError {
    TypeError::new("translate", msg)
}

fn thunk(m: Comp) -> Value {
    Value::Thunk(Box::new(m))
}

fn force(v: Value) -> Comp {
    Comp::Force(v)
}

impl<'a> Tr<'a> {
    fn new(d: Dialect, alg: SrcGrades<'a>, ctx: &SContext) -> Self {
        let scope = ctx
            .iter()
            .map(|(x, t)| Entry {
                key: Key::Src(x.clone()),
                name: x.clone(),
                sty: Some(t.clone()),
            })
            .collect();
        Tr { d, alg, scope, next: 0 }
    }

    fn needs_types(&self) -> bool {
        self.d.lang == Lang::Coeffect && self.d.strategy == Strategy::Cbv
    }

    /// Grade on returners and lets that the tables leave at one.
    fn one(&self) -> Option<Grade> {
        match self.alg {
            SrcGrades::Coeffect(a) => Some(a.one()),
            SrcGrades::Effect(_) => None,
        }
    }

    /// Annotation on thunk types that carry no latent effect.
    fn pure_u(&self) -> Option<Effect> {
        match self.alg {
            SrcGrades::Effect(a) => Some(a.unit()),
            SrcGrades::Coeffect(_) => None,
        }
    }

    fn latent_grade(&self, l: Latent) -> Option<Grade> {
        match l {
            Latent::Co(q) => Some(q),
            Latent::Linear => self.one(),
            Latent::Eff(_) | Latent::Plain => None,
        }
    }

    fn latent_effect(&self, l: Latent) -> Option<Effect> {
        match l {
            Latent::Eff(e) => Some(e),
            _ => self.pure_u(),
        }
    }

    // ---- types ----

    fn ty_v(&self, t: &SType) -> ValType {
        match t {
            SType::Unit => ValType::Unit,
            SType::Fun(l, a, b) => ValType::u(
                self.latent_effect(*l),
                CompType::arrow(self.latent_grade(*l), self.ty_v(a), CompType::f(self.one(), self.ty_v(b))),
            ),
            SType::Tensor(a, b) => ValType::prod(self.ty_v(a), self.ty_v(b)),
            SType::With(a, b) => ValType::with(self.ty_v(a), self.ty_v(b)),
            SType::Sum(a, b) => ValType::sum(self.ty_v(a), self.ty_v(b)),
            SType::Monad(e, a) => ValType::u(Some(*e), CompType::f(None, self.ty_v(a))),
            SType::Boxed(q, a) => match self.d.lang {
                Lang::Comonadic => ValType::u(
                    None,
                    CompType::f(Some(*q), ValType::u(None, CompType::f(self.one(), self.ty_v(a)))),
                ),
                _ => ValType::u(None, CompType::f(Some(*q), self.ty_v(a))),
            },
        }
    }

    fn ty_n(&self, t: &SType) -> CompType {
        let u = |c: CompType| ValType::u(self.pure_u(), c);
        match t {
            SType::Unit => CompType::f(self.one(), ValType::Unit),
            SType::Fun(l, a, b) => CompType::arrow(self.latent_grade(*l), u(self.ty_n(a)), self.ty_n(b)),
            SType::With(a, b) => CompType::with(self.ty_n(a), self.ty_n(b)),
            SType::Tensor(a, b) => CompType::tensor(self.ty_n(a), self.ty_n(b)),
            SType::Sum(a, b) => CompType::f(self.one(), ValType::sum(u(self.ty_n(a)), u(self.ty_n(b)))),
            SType::Monad(e, a) => {
                CompType::f(None, ValType::u(Some(*e), CompType::f(None, u(self.ty_n(a)))))
            }
            SType::Boxed(q, a) => CompType::f(Some(*q), u(self.ty_n(a))),
        }
    }

    /// Type of a context entry.
    fn ty_ctx(&self, t: &SType) -> ValType {
        match self.d.strategy {
            Strategy::Cbv => self.ty_v(t),
            Strategy::Cbn => ValType::u(self.pure_u(), self.ty_n(t)),
        }
    }

    /// The computation type the preservation lemma assigns to a term of `t`.
    fn ty_target(&self, t: &SType) -> CompType {
        match self.d.strategy {
            Strategy::Cbv => CompType::f(self.one(), self.ty_v(t)),
            Strategy::Cbn => self.ty_n(t),
        }
    }

    // ---- scope ----

    fn src_var(&self, x: &str) -> TResult<Value> {
        self.scope
            .iter()
            .rev()
            .position(|e| matches!(&e.key, Key::Src(n) if n == x))
            .map(|i| Value::Var(i, Name::new(x)))
            .ok_or_else(|| defect(format!("unbound source variable `{x}`")))
    }

    fn gen(&self, id: u32) -> Value {
        let i = self
            .scope
            .iter()
            .rev()
            .position(|e| matches!(e.key, Key::Gen(k) if k == id))
            .expect("generated binder in scope");
        let n = self.scope.len() - 1 - i;
        Value::Var(i, Name::new(self.scope[n].name.clone()))
    }

    fn src_ctx(&self) -> SContext {
        self.scope
            .iter()
            .filter_map(|e| match &e.key {
                Key::Src(x) => Some((x.clone(), e.sty.clone().unwrap_or(SType::Unit))),
                Key::Gen(_) => None,
            })
            .collect()
    }

    fn synth(&self, e: &STerm) -> TResult<SType> {
        synth(self.d, self.alg, &self.src_ctx(), e).map_err(|e| defect(format!("lost source type: {e}")))
    }

    fn with_entry<T>(&mut self, e: Entry, f: impl FnOnce(&mut Self) -> TResult<T>) -> TResult<T> {
        self.scope.push(e);
        let r = f(self);
        self.scope.pop();
        r
    }

    /// `x <-^q m in k(x)` with a fresh, unnamed-in-source `x`.
    fn let_gen(
        &mut self,
        hint: &str,
        q: Option<Grade>,
        m: Comp,
        k: impl FnOnce(&mut Self, u32) -> TResult<Comp>,
    ) -> TResult<Comp> {
        let id = self.next;
        self.next += 1;
        let entry = Entry {
            key: Key::Gen(id),
            name: hint.to_string(),
            sty: None,
        };
        let body = self.with_entry(entry, |s| k(s, id))?;
        Ok(Comp::Let(Name::new(hint), q, Box::new(m), Box::new(body)))
    }

    fn under_src<T>(&mut self, x: &str, sty: Option<SType>, f: impl FnOnce(&mut Self) -> TResult<T>) -> TResult<T> {
        let entry = Entry {
            key: Key::Src(x.to_string()),
            name: x.to_string(),
            sty,
        };
        self.with_entry(entry, f)
    }

    /// `x ⤳ m in k(x)`: `x' <-^1 m in x <-^1 x'! in k(x)`.
    fn unwrap(&mut self, hint: &str, m: Comp, k: impl FnOnce(&mut Self, u32) -> TResult<Comp>) -> TResult<Comp> {
        let one = self.one();
        self.let_gen(&format!("{hint}0"), one, m, |s, outer| {
            let f = force(s.gen(outer));
            s.let_gen(hint, one, f, k)
        })
    }

    /// `return_1 {return_q v}`.
    fn rebox(&self, q: Grade, v: Value) -> Comp {
        Comp::Return(self.one(), thunk(Comp::Return(Some(q), v)))
    }

    fn component_types(&self, e: &STerm) -> TResult<(Option<SType>, Option<SType>)> {
        if !self.needs_types() {
            return Ok((None, None));
        }
        match self.synth(e)? {
            SType::Tensor(a, b) | SType::Sum(a, b) => Ok((Some(*a), Some(*b))),
            SType::Boxed(_, a) => Ok((Some(*a), None)),
            t => Err(defect(format!("unexpected scrutinee type {t}"))),
        }
    }

    fn unsupported(&self, e: &STerm) -> TypeError {
        defect(format!("`{e}` has no {} translation", self.d))
    }

    // ---- call-by-value ----

    fn cbv(&mut self, e: &STerm) -> TResult<Comp> {
        let one = self.one();
        let lang = self.d.lang;
        match e {
            STerm::Var(x) => Ok(Comp::Return(one, self.src_var(x)?)),
            STerm::Unit => Ok(Comp::Return(one, Value::Unit)),
            STerm::Tick => match lang {
                Lang::Effect => Ok(Comp::tick()),
                _ => {
                    let m = self.let_gen("x", None, Comp::tick(), |s, x| Ok(Comp::Return(None, s.gen(x))))?;
                    Ok(Comp::Return(None, thunk(m)))
                }
            },
            STerm::Lam(x, q, t, body) => {
                let q = match lang {
                    Lang::Coeffect => *q,
                    _ => self.one(),
                };
                let a = self.ty_v(t);
                let b = self.under_src(x, Some(t.clone()), |s| s.cbv(body))?;
                Ok(Comp::Return(one, thunk(Comp::Lam(Name::new(x.clone()), q, Some(a), Box::new(b)))))
            }
            STerm::App(f, a) => {
                let q = match lang {
                    Lang::Coeffect => match self.synth(f)? {
                        SType::Fun(Latent::Co(q), ..) => Some(q),
                        t => return Err(defect(format!("application head has type {t}"))),
                    },
                    _ => one,
                };
                let m1 = self.cbv(f)?;
                self.let_gen("f", one, m1, |s, xf| {
                    let m2 = s.cbv(a)?;
                    s.let_gen("a", q, m2, |s, xa| Ok(Comp::app(force(s.gen(xf)), s.gen(xa))))
                })
            }
            STerm::Seq(a, b) => {
                let m1 = self.cbv(a)?;
                self.let_gen("u", one, m1, |s, u| {
                    let v = s.gen(u);
                    Ok(Comp::seq(v, s.cbv(b)?))
                })
            }
            STerm::Pair(a, b) => {
                let m1 = self.cbv(a)?;
                self.let_gen("x", one, m1, |s, x1| {
                    let m2 = s.cbv(b)?;
                    s.let_gen("y", one, m2, |s, x2| Ok(Comp::Return(one, Value::pair(s.gen(x1), s.gen(x2)))))
                })
            }
            STerm::Split(q, x, y, p, body) => {
                let (ta, tb) = self.component_types(p)?;
                let m = self.cbv(p)?;
                self.let_gen("p", *q, m, |s, pv| {
                    let v = s.gen(pv);
                    let n = s.under_src(x, ta, |s| s.under_src(y, tb, |s| s.cbv(body)))?;
                    Ok(Comp::split(*q, v, x, y, n))
                })
            }
            STerm::Inl(t, v) | STerm::Inr(t, v) => {
                let left = matches!(e, STerm::Inl(..));
                let ty = self.ty_v(t);
                let m = self.cbv(v)?;
                self.let_gen("x", one, m, |s, x| {
                    let w = s.gen(x);
                    let inj = if left { Value::inl(w) } else { Value::inr(w) };
                    Ok(Comp::Return(one, Value::ann(inj, ty)))
                })
            }
            STerm::Case(q, sc, x, l, y, r) => {
                let (ta, tb) = self.component_types(sc)?;
                let m = self.cbv(sc)?;
                let q = if lang == Lang::Coeffect { *q } else { None };
                self.let_gen("s", q, m, |s, sv| {
                    let v = s.gen(sv);
                    let ml = s.under_src(x, ta, |s| s.cbv(l))?;
                    let mr = s.under_src(y, tb, |s| s.cbv(r))?;
                    Ok(Comp::case(q, v, x, ml, y, mr))
                })
            }
            STerm::Return(v) => Ok(Comp::Return(None, thunk(self.cbv(v)?))),
            STerm::Bind(x, m1, body) => {
                let m = self.cbv(m1)?;
                self.let_gen("m", None, m, |s, y| {
                    let inner = force(s.gen(y));
                    let rest = s.under_src(x, None, |s| {
                        let n = s.cbv(body)?;
                        s.let_gen("n", None, n, |s, z| Ok(force(s.gen(z))))
                    })?;
                    Ok(Comp::Return(None, thunk(Comp::let_(x, None, inner, rest))))
                })
            }
            STerm::BoxI(q, v) => {
                let m = self.cbv(v)?;
                let inner = self.let_gen("x", Some(*q), m, |s, x| Ok(Comp::Return(Some(*q), s.gen(x))))?;
                Ok(Comp::Return(one, thunk(inner)))
            }
            STerm::Unbox(q, x, m1, body) => {
                let (ta, _) = self.component_types(m1)?;
                let m = self.cbv(m1)?;
                self.let_gen("b", Some(*q), m, |s, y| {
                    let inner = force(s.gen(y));
                    let n = s.under_src(x, ta, |s| s.cbv(body))?;
                    Ok(Comp::let_(x, Some(*q), inner, n))
                })
            }
            STerm::Extract(v) => {
                let m = self.cbv(v)?;
                self.unwrap("x", m, |s, x| Ok(force(s.gen(x))))
            }
            STerm::Extend(q, bs, body) => self.extend_cbv(*q, bs, 0, Vec::new(), body),
            STerm::Divide(x, q1, y, q2, m1, body) => {
                let m = self.cbv(m1)?;
                self.unwrap("z", m, |s, z| s.divide_rest(z, (x, *q1), (y, *q2), body))
            }
            STerm::Discard(m1, body) => {
                let m = self.cbv(m1)?;
                self.unwrap("z", m, |s, _| s.cbv(body))
            }
            STerm::WPair(..) | STerm::Fst(_) | STerm::Snd(_) => Err(self.unsupported(e)),
        }
    }

    fn extend_cbv(&mut self, q: Grade, bs: &[super::ExtBind], i: usize, gens: Vec<u32>, body: &STerm) -> TResult<Comp> {
        if i < bs.len() {
            let m = self.cbv(&bs[i].rhs)?;
            return self.unwrap(&format!("{}'", bs[i].name), m, |s, g| {
                let mut gens = gens;
                gens.push(g);
                s.extend_cbv(q, bs, i + 1, gens, body)
            });
        }
        let inner = self.extend_lets(bs, 0, &gens, body)?;
        Ok(Comp::Return(self.one(), thunk(Comp::Return(Some(q), thunk(inner)))))
    }

    /// `x_j <-^1 return_1 {return_{q_j} x'_j} in ...` then the body.
    fn extend_lets(&mut self, bs: &[super::ExtBind], j: usize, gens: &[u32], body: &STerm) -> TResult<Comp> {
        if j == bs.len() {
            return self.tr(body);
        }
        let m = self.rebox(bs[j].grade, self.gen(gens[j]));
        let n = self.under_src(&bs[j].name, None, |s| s.extend_lets(bs, j + 1, gens, body))?;
        Ok(Comp::let_(&bs[j].name, self.one(), m, n))
    }

    fn divide_rest(&mut self, z: u32, (x, q1): (&str, Grade), (y, q2): (&str, Grade), body: &STerm) -> TResult<Comp> {
        let one = self.one();
        let m1 = self.rebox(q1, self.gen(z));
        let n = self.under_src(x, None, |s| {
            let m2 = s.rebox(q2, s.gen(z));
            let n = s.under_src(y, None, |s| s.tr(body))?;
            Ok(Comp::let_(y, one, m2, n))
        })?;
        Ok(Comp::let_(x, one, m1, n))
    }

    // ---- call-by-name ----

    fn cbn(&mut self, e: &STerm) -> TResult<Comp> {
        let one = self.one();
        let lang = self.d.lang;
        match e {
            STerm::Var(x) => Ok(force(self.src_var(x)?)),
            STerm::Unit => Ok(Comp::Return(one, Value::Unit)),
            STerm::Tick => {
                let m = self.let_gen("x", None, Comp::tick(), |s, x| {
                    Ok(Comp::Return(None, thunk(Comp::Return(None, s.gen(x)))))
                })?;
                Ok(Comp::Return(None, thunk(m)))
            }
            STerm::Lam(x, q, t, body) => {
                let q = match lang {
                    Lang::Coeffect => *q,
                    _ => one,
                };
                let a = ValType::u(self.pure_u(), self.ty_n(t));
                let b = self.under_src(x, Some(t.clone()), |s| s.cbn(body))?;
                Ok(Comp::Lam(Name::new(x.clone()), q, Some(a), Box::new(b)))
            }
            STerm::App(f, a) => {
                let m1 = self.cbn(f)?;
                let m2 = self.cbn(a)?;
                Ok(Comp::app(m1, thunk(m2)))
            }
            STerm::Seq(a, b) => {
                let m1 = self.cbn(a)?;
                self.let_gen("u", one, m1, |s, u| {
                    let v = s.gen(u);
                    Ok(Comp::seq(v, s.cbn(b)?))
                })
            }
            STerm::WPair(a, b) => Ok(Comp::cpair(self.cbn(a)?, self.cbn(b)?)),
            STerm::Fst(p) => Ok(Comp::CFst(Box::new(self.cbn(p)?))),
            STerm::Snd(p) => Ok(Comp::CSnd(Box::new(self.cbn(p)?))),
            STerm::Inl(t, v) | STerm::Inr(t, v) => {
                let ty = match t {
                    SType::Sum(a, b) => ValType::sum(
                        ValType::u(self.pure_u(), self.ty_n(a)),
                        ValType::u(self.pure_u(), self.ty_n(b)),
                    ),
                    t => return Err(defect(format!("injection ascribed {t}"))),
                };
                let w = thunk(self.cbn(v)?);
                let inj = if matches!(e, STerm::Inl(..)) { Value::inl(w) } else { Value::inr(w) };
                Ok(Comp::Return(one, Value::ann(inj, ty)))
            }
            STerm::Case(q, sc, x, l, y, r) => {
                let q = if lang == Lang::Coeffect { *q } else { None };
                let m = self.cbn(sc)?;
                self.let_gen("s", q, m, |s, sv| {
                    let v = s.gen(sv);
                    let ml = s.under_src(x, None, |s| s.cbn(l))?;
                    let mr = s.under_src(y, None, |s| s.cbn(r))?;
                    Ok(Comp::case(q, v, x, ml, y, mr))
                })
            }
            STerm::Return(v) => Ok(Comp::Return(None, thunk(Comp::Return(None, thunk(self.cbn(v)?))))),
            STerm::Bind(x, m1, body) => {
                let m = self.cbn(m1)?;
                let bound = self.let_gen("y", None, m, |s, y| Ok(force(s.gen(y))))?;
                let rest = self.under_src(x, None, |s| {
                    let n = s.cbn(body)?;
                    s.let_gen("z", None, n, |s, z| Ok(force(s.gen(z))))
                })?;
                Ok(Comp::Return(None, thunk(Comp::let_(x, None, bound, rest))))
            }
            STerm::BoxI(q, v) => Ok(Comp::Return(Some(*q), thunk(self.cbn(v)?))),
            STerm::Unbox(q, x, m1, body) => {
                let m = self.cbn(m1)?;
                let n = self.under_src(x, None, |s| s.cbn(body))?;
                Ok(Comp::let_(x, Some(*q), m, n))
            }
            STerm::Extract(v) => {
                let m = self.cbn(v)?;
                self.let_gen("x", one, m, |s, x| Ok(force(s.gen(x))))
            }
            STerm::Extend(q, bs, body) => self.extend_cbn(*q, bs, 0, Vec::new(), body),
            STerm::Divide(x, q1, y, q2, m1, body) => {
                let m = self.cbn(m1)?;
                self.let_gen("z", one, m, |s, z| s.divide_rest(z, (x, *q1), (y, *q2), body))
            }
            STerm::Discard(m1, body) => {
                let m = self.cbn(m1)?;
                self.let_gen("z", one, m, |s, _| s.cbn(body))
            }
            STerm::Pair(..) | STerm::Split(..) => Err(self.unsupported(e)),
        }
    }

    fn extend_cbn(&mut self, q: Grade, bs: &[super::ExtBind], i: usize, gens: Vec<u32>, body: &STerm) -> TResult<Comp> {
        if i < bs.len() {
            let m = self.cbn(&bs[i].rhs)?;
            let one = self.one();
            return self.let_gen(&format!("{}'", bs[i].name), one, m, |s, g| {
                let mut gens = gens;
                gens.push(g);
                s.extend_cbn(q, bs, i + 1, gens, body)
            });
        }
        let inner = self.extend_lets(bs, 0, &gens, body)?;
        Ok(Comp::Return(Some(q), thunk(inner)))
    }

    fn tr(&mut self, e: &STerm) -> TResult<Comp> {
        match self.d.strategy {
            Strategy::Cbv => self.cbv(e),
            Strategy::Cbn => self.cbn(e),
        }
    }
}

/// Translates a source term, well typed in `ctx`, to CBPV.
pub fn translate(d: Dialect, alg: SrcGrades<'_>, ctx: &SContext, e: &STerm) -> TResult<Comp> {
    Tr::new(d, alg, ctx).tr(e)
}

/// Translates a source type to the CBPV computation type its terms land at.
pub fn translate_type(d: Dialect, alg: SrcGrades<'_>, t: &SType) -> CompType {
    Tr::new(d, alg, &Vec::new()).ty_target(t)
}

pub fn translate_context(d: Dialect, alg: SrcGrades<'_>, ctx: &SContext) -> Context {
    let tr = Tr::new(d, alg, &Vec::new());
    let mut out = Context::new();
    for (x, t) in ctx {
        out.push(Name::new(x.clone()), tr.ty_ctx(t));
    }
    out
}

/// How the target judgement is graded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TargetGrading {
    Effect(Effect),
    /// The vector the lemma demands, and the canonical one the checker found.
    Vector { declared: GradeVec, inferred: GradeVec },
}

/// A translated term together with the judgement it was checked at.
#[derive(Clone, Debug)]
pub struct Preserved {
    pub source: SrcJudgement,
    pub target: Comp,
    pub context: Context,
    pub ty: CompType,
    pub grading: TargetGrading,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum PreservationError {
    /// The source term is ill typed.
    #[error("{0}")]
    Source(TypeError),
    /// The translation is rejected by the CBPV checker.
    #[error("translation rejected: {0}")]
    Target(TypeError),
    /// The translation checks, but not at the expected judgement.
    #[error("translation lands at the wrong judgement: {0}")]
    Shape(String),
}

impl PreservationError {
    pub fn is_defect(&self) -> bool {
        !matches!(self, PreservationError::Source(_))
    }
}

/// Translates `e` and checks the result at exactly the judgement the
/// dialect's preservation lemma promises.
pub fn check_preservation(d: Dialect, alg: SrcGrades<'_>, ctx: &SContext, e: &STerm) -> Result<Preserved, PreservationError> {
    let source = src_check(d, alg, ctx, e).map_err(PreservationError::Source)?;
    let target = translate(d, alg, ctx, e).map_err(PreservationError::Target)?;
    let context = translate_context(d, alg, ctx);
    let want = translate_type(d, alg, &source.ty);
    let grading = match alg {
        SrcGrades::Effect(ea) => {
            let phi = match &source.grading {
                SrcGrading::Effect(phi) => *phi,
                _ => ea.unit(),
            };
            let (ty, got) = infer_comp(ea, &context, &target).map_err(PreservationError::Target)?;
            if ty != want {
                return Err(PreservationError::Shape(format!("type {ty}, expected {want}")));
            }
            if got != phi {
                return Err(PreservationError::Shape(format!("effect {got}, expected {phi}")));
            }
            check_comp(ea, &context, &target, &want, phi).map_err(PreservationError::Target)?;
            TargetGrading::Effect(got)
        }
        SrcGrades::Coeffect(ca) => {
            let declared = match &source.grading {
                SrcGrading::Vector(g) => g.clone(),
                _ => GradeVec(vec![ca.one(); ctx.len()]),
            };
            let (ty, inferred) = co_infer_comp(ca, &context, &target).map_err(PreservationError::Target)?;
            if ty != want {
                return Err(PreservationError::Shape(format!("type {ty}, expected {want}")));
            }
            co_check(ca, &context, &Term::Comp(target.clone()), &declared).map_err(PreservationError::Target)?;
            TargetGrading::Vector { declared, inferred }
        }
    };
    Ok(Preserved {
        source,
        target,
        context,
        ty: want,
        grading,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::{CoeffectAlgebra, EffectAlgebra};
    use crate::syntax::show_comp;
    use crate::translate::{parse_scontext, parse_term};

    fn run(d: &str, ctx: &str, src: &str) -> Result<Preserved, PreservationError> {
        let d: Dialect = d.parse().unwrap();
        let ea = EffectAlgebra::nat_cost();
        let ca = CoeffectAlgebra::nat_usage();
        let alg = if d.lang.is_effect() { SrcGrades::Effect(&ea) } else { SrcGrades::Coeffect(&ca) };
        let ctx = parse_scontext(ctx, d.lang, alg).unwrap();
        let e = parse_term(src, d.lang, alg).unwrap();
        check_preservation(d, alg, &ctx, &e)
    }

    fn shown(p: &Preserved) -> String {
        show_comp(&p.target, &p.context.names())
    }

    #[test]
    fn tick_translates_to_tick() {
        let p = run("cbv-eff", "", "tick").unwrap();
        assert_eq!(shown(&p), "tick");
        assert_eq!(p.grading, TargetGrading::Effect(EffectAlgebra::nat_cost().nat(1)));
        assert_eq!(p.ty.to_string(), "F Unit");
    }

    #[test]
    fn box_and_unbox_tables() {
        let p = run("cbn-co", "x : Unit", "box^3 x").unwrap();
        assert_eq!(shown(&p), "return^3 {x!}");
        let p = run("cbv-co", "b : Box^2 Unit", "unbox^3 x = b in x").unwrap();
        assert_eq!(shown(&p), "let b1 <-^3 return^1 b in let x <-^3 b1! in return^1 x");
        assert_eq!(p.ty.to_string(), "F^1 Unit");
    }

    #[test]
    fn monadic_targets_are_pure() {
        for d in ["cbn-mon", "cbv-mon"] {
            let p = run(d, "", "bind x = tick in bind y = tick in return x").unwrap();
            assert_eq!(p.grading, TargetGrading::Effect(EffectAlgebra::nat_cost().unit()), "{d}");
        }
    }

    #[test]
    fn comonadic_divide() {
        for d in ["cbn-comonad", "cbv-comonad"] {
            let p = run(d, "x : Box^2 Unit", "divide a^1, b^1 = x in extract a; extract b").unwrap();
            assert_eq!(p.source.ty, SType::Unit, "{d}");
        }
    }
}

#[cfg(test)]
mod corpus_tests {
    use super::*;
    use crate::grading::{CoeffectAlgebra, EffectAlgebra};
    use crate::translate::{parse_scontext, parse_term};

    fn ok(d: &str, ctx: &str, src: &str) {
        let d: Dialect = d.parse().unwrap();
        let ea = EffectAlgebra::nat_cost();
        let ca = CoeffectAlgebra::nat_usage();
        let alg = if d.lang.is_effect() { SrcGrades::Effect(&ea) } else { SrcGrades::Coeffect(&ca) };
        let ctx = parse_scontext(ctx, d.lang, alg).unwrap();
        let e = parse_term(src, d.lang, alg).unwrap_or_else(|e| panic!("{d}: {src}: {e}"));
        if let Err(err) = check_preservation(d, alg, &ctx, &e) {
            panic!("{d}: {src}: {err}");
        }
    }

    #[test]
    fn effect_terms() {
        for src in [
            "tick; tick",
            "(\\x : Unit. tick; x) ()",
            "(\\f : Unit ->^2 Unit. f (); f ()) (\\u : Unit. tick; tick)",
            "let (a, b) = (tick, ()) in a; b",
            "case inl () : Unit + Unit of inl x -> tick | inr y -> y",
            "(tick, (\\x : Unit. x))",
        ] {
            ok("cbv-eff", "", src);
        }
        ok("cbv-eff", "f : Unit ->^3 Unit", "f (); f ()");
    }

    #[test]
    fn monadic_terms() {
        for d in ["cbn-mon", "cbv-mon"] {
            for src in [
                "tick",
                "bind x = tick in tick",
                "return ()",
                "(\\x : T^1 Unit. bind u = x in bind v = x in return v) tick",
                "case inr () : Unit + Unit of inl a -> tick | inr b -> bind u = tick in return b",
            ] {
                ok(d, "", src);
            }
        }
        ok("cbn-mon", "p : Unit & T^2 Unit", "<p.2, p.1>.1");
        ok("cbv-mon", "p : Unit * T^2 Unit", "let (a, b) = p in b");
    }

    #[test]
    fn coeffect_terms() {
        for d in ["cbn-co", "cbv-co"] {
            ok(d, "x : Unit", "box^3 x");
            ok(d, "b : Box^2 Unit", "unbox^3 y = b in y; y");
            ok(d, "x : Unit", "(\\y^2 : Unit. y; y) x");
            ok(d, "x : Unit, z : Unit", "case^1 inl x : Unit + Unit of inl a -> a; z | inr c -> c");
            ok(d, "x : Unit", "()");
        }
        ok("cbn-co", "x : Unit", "<x, x>.2");
        ok("cbv-co", "x : Unit, y : Unit", "let^2 (a, b) = (x, y) in a; b; a; b");
    }

    #[test]
    fn comonadic_terms() {
        for d in ["cbn-comonad", "cbv-comonad"] {
            ok(d, "x : Box^2 Unit", "divide a^1, b^1 = x in extract a; extract b");
            ok(d, "x : Box^0 Unit", "discard _ = x in ()");
            ok(d, "x : Box^1 Unit", "extract x");
            ok(d, "x : Box^6 Unit", "extend^2 y^3 = x in extract y");
            ok(d, "x : Box^4 Unit, z : Box^2 Unit", "extend^2 y^2 = x, w^1 = z in divide a^1, b^1 = y in extract a; extract b; extract w");
            ok(d, "", "(\\x : Unit. x) ()");
        }
    }
}
