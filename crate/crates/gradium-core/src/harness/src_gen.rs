//! Type-directed generators for the source calculi.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::grading::{CoeffectAlgebra, EffectAlgebra, Grade};
use crate::translate::{src_check, Dialect, ExtBind, Lang, Latent, SContext, SType, STerm, SrcGrades, SrcGrading};

#[derive(Clone, Debug)]
struct Var {
    name: String,
    ty: SType,
    usable: bool,
}

/// Generates well-typed source terms for one dialect.
pub struct SrcGen<'a, R> {
    pub d: Dialect,
    pub ea: &'a EffectAlgebra,
    pub ca: &'a CoeffectAlgebra,
    pub rng: &'a mut R,
    pub pool: Vec<Grade>,
    fresh: usize,
}

impl<'a, R: Rng> SrcGen<'a, R> {
    pub fn new(d: Dialect, ea: &'a EffectAlgebra, ca: &'a CoeffectAlgebra, rng: &'a mut R, pool: Vec<Grade>) -> Self {
        Self { d, ea, ca, rng, pool, fresh: 0 }
    }

    pub fn grades(&self) -> SrcGrades<'a> {
        if self.d.lang.is_effect() {
            SrcGrades::Effect(self.ea)
        } else {
            SrcGrades::Coeffect(self.ca)
        }
    }

    fn name(&mut self) -> String {
        self.fresh += 1;
        format!("v{}", self.fresh)
    }

    fn grade(&mut self) -> Grade {
        *self.pool.choose(self.rng).unwrap_or(&self.ca.one())
    }

    fn leq(&self, a: Grade, b: Grade) -> bool {
        self.ca.leq(a, b).unwrap_or(false)
    }

    fn below(&mut self, n: u64) -> u64 {
        let ea = self.ea;
        let ks: Vec<u64> = (0..=n).filter(|&k| ea.leq(ea.nat(k), ea.nat(n)).unwrap_or(false)).collect();
        *ks.choose(self.rng).unwrap_or(&n)
    }

    // ---- types ----

    pub fn ty(&mut self, depth: u32) -> SType {
        if depth == 0 {
            return SType::Unit;
        }
        let d = depth - 1;
        let lang = self.d.lang;
        match self.rng.gen_range(0..7) {
            0 | 1 => SType::Unit,
            2 | 3 => {
                let l = match lang {
                    Lang::Effect => Latent::Eff(self.ea.nat(self.rng.gen_range(0..3))),
                    Lang::Monadic => Latent::Plain,
                    Lang::Coeffect => Latent::Co(self.grade()),
                    Lang::Comonadic => Latent::Linear,
                };
                let dom = if lang == Lang::Comonadic { self.lin_domain(d) } else { self.ty(d) };
                SType::fun(l, dom, self.ty(d))
            }
            4 => match lang {
                Lang::Comonadic => SType::boxed(self.grade(), self.ty(d)),
                _ if self.d.has_tensor() => SType::tensor(self.ty(d), self.ty(d)),
                _ => SType::with(self.ty(d), self.ty(d)),
            },
            5 => match lang {
                Lang::Comonadic => SType::Unit,
                _ => SType::sum(self.ty(d), self.ty(d)),
            },
            _ => match lang {
                Lang::Monadic => SType::monad(self.ea.nat(self.rng.gen_range(0..3)), self.ty(d)),
                Lang::Coeffect | Lang::Comonadic => SType::boxed(self.grade(), self.ty(d)),
                Lang::Effect => SType::Unit,
            },
        }
    }

    /// Linear function domains are restricted to types with closed inhabitants
    /// that can also be consumed.
    fn lin_domain(&mut self, depth: u32) -> SType {
        if depth > 0 && self.rng.gen_bool(0.5) {
            SType::boxed(self.grade(), self.lin_domain(depth - 1))
        } else {
            SType::Unit
        }
    }

    /// A random context for the dialect.
    pub fn context(&mut self, max: usize) -> SContext {
        let n = self.rng.gen_range(0..=max);
        (0..n)
            .map(|_| {
                let t = if self.d.lang == Lang::Comonadic { self.lin_domain(2) } else { self.ty(2) };
                (self.name(), t)
            })
            .collect()
    }

    /// Generates a term of `goal` in `ctx`, retrying until the dialect's
    /// checker accepts it. Falls back to the canonical inhabitant.
    pub fn term(&mut self, ctx: &SContext, goal: &SType, depth: u32) -> STerm {
        let vars: Vec<Var> = ctx.iter().map(|(n, t)| Var { name: n.clone(), ty: t.clone(), usable: true }).collect();
        for _ in 0..8 {
            let e = match self.d.lang {
                Lang::Effect => {
                    let n = self.rng.gen_range(0..3);
                    self.eff(&vars, goal, n, depth)
                }
                Lang::Monadic => self.mon(&vars, goal, depth),
                Lang::Coeffect => self.co(&vars, goal, depth),
                Lang::Comonadic => self.lin(&vars, goal, depth),
            };
            if src_check(self.d, self.grades(), ctx, &e).is_ok() {
                return e;
            }
        }
        let e = match self.d.lang {
            Lang::Comonadic => {
                let base = self.closed(goal);
                self.consume_all(&vars, base)
            }
            _ => self.base(goal),
        };
        e
    }

    fn pick_var(&mut self, vars: &[Var], t: &SType) -> Option<String> {
        let c: Vec<&Var> = vars.iter().filter(|v| v.usable && v.ty == *t).collect();
        c.choose(self.rng).map(|v| v.name.clone())
    }

    fn with_vars(vars: &[Var], more: &[(String, SType)], usable: bool) -> Vec<Var> {
        let mut v = vars.to_vec();
        v.extend(more.iter().map(|(n, t)| Var { name: n.clone(), ty: t.clone(), usable }));
        v
    }

    fn inj(&mut self, goal: &SType, a: &SType, b: &SType, mut gen: impl FnMut(&mut Self, &SType) -> STerm) -> STerm {
        if self.rng.gen_bool(0.5) {
            STerm::Inl(goal.clone(), Box::new(gen(self, a)))
        } else {
            STerm::Inr(goal.clone(), Box::new(gen(self, b)))
        }
    }

    /// The canonical closed inhabitant (not for the linear dialect).
    fn base(&mut self, t: &SType) -> STerm {
        match t {
            SType::Unit => STerm::Unit,
            SType::Fun(l, a, b) => {
                let x = self.name();
                let q = match l {
                    Latent::Co(q) => Some(*q),
                    _ => None,
                };
                let body = match l {
                    Latent::Eff(e) => {
                        let body = self.base(b);
                        Self::ticks(e.raw(), body)
                    }
                    _ => self.base(b),
                };
                STerm::lam(&x, q, (**a).clone(), body)
            }
            SType::Tensor(a, b) => STerm::pair(self.base(a), self.base(b)),
            SType::With(a, b) => STerm::wpair(self.base(a), self.base(b)),
            SType::Sum(a, _) => STerm::Inl(t.clone(), Box::new(self.base(a))),
            SType::Monad(e, a) => {
                let mut m = STerm::ret(self.base(a));
                for _ in 0..e.raw() {
                    let x = self.name();
                    m = STerm::bind(&x, STerm::Tick, m);
                }
                m
            }
            SType::Boxed(q, a) => STerm::boxi(*q, self.base(a)),
        }
    }

    fn ticks(n: u64, then: STerm) -> STerm {
        (0..n).fold(then, |e, _| STerm::seq(STerm::Tick, e))
    }

    // ---- (a) effects, generated at an exact effect ----

    fn eff(&mut self, vars: &[Var], goal: &SType, n: u64, depth: u32) -> STerm {
        if depth == 0 {
            let v = if n == 0 { self.pick_var(vars, goal) } else { None };
            return v.map(|x| STerm::var(&x)).unwrap_or_else(|| {
                let b = self.base(goal);
                Self::ticks(n, b)
            });
        }
        let d = depth - 1;
        match self.rng.gen_range(0..10) {
            0..=3 => match goal {
                _ if n == 0 && self.rng.gen_bool(0.3) => match self.pick_var(vars, goal) {
                    Some(x) => STerm::var(&x),
                    None => self.eff(vars, goal, n, d),
                },
                SType::Unit if n == 1 => STerm::Tick,
                SType::Fun(Latent::Eff(phi), a, b) if n == 0 => {
                    let x = self.name();
                    let inner = Self::with_vars(vars, &[(x.clone(), (**a).clone())], true);
                    let body = self.eff(&inner, b, phi.raw(), d);
                    STerm::lam(&x, None, (**a).clone(), body)
                }
                SType::Tensor(a, b) => {
                    let n1 = self.rng.gen_range(0..=n);
                    STerm::pair(self.eff(vars, a, n1, d), self.eff(vars, b, n - n1, d))
                }
                SType::Sum(a, b) => {
                    let (a, b) = ((**a).clone(), (**b).clone());
                    self.inj(goal, &a, &b, |s, t| s.eff(vars, t, n, d))
                }
                _ => {
                    let n1 = self.rng.gen_range(0..=n);
                    STerm::seq(self.eff(vars, &SType::Unit, n1, d), self.eff(vars, goal, n - n1, d))
                }
            },
            4 | 5 => {
                let phi = self.rng.gen_range(0..=n);
                let rest = n - phi;
                let n1 = self.rng.gen_range(0..=rest);
                let a = self.ty(1);
                let f = self.eff(vars, &SType::fun(Latent::Eff(self.ea.nat(phi)), a.clone(), goal.clone()), n1, d);
                STerm::app(f, self.eff(vars, &a, rest - n1, d))
            }
            6 => {
                let n1 = self.rng.gen_range(0..=n);
                STerm::seq(self.eff(vars, &SType::Unit, n1, d), self.eff(vars, goal, n - n1, d))
            }
            7 => {
                let (a, b) = (self.ty(1), self.ty(1));
                let n1 = self.rng.gen_range(0..=n);
                let (x, y) = (self.name(), self.name());
                let s = self.eff(vars, &SType::tensor(a.clone(), b.clone()), n1, d);
                let inner = Self::with_vars(vars, &[(x.clone(), a), (y.clone(), b)], true);
                let body = self.eff(&inner, goal, n - n1, d);
                STerm::split(None, &x, &y, s, body)
            }
            _ => {
                let (a, b) = (self.ty(1), self.ty(1));
                let n0 = self.rng.gen_range(0..=n);
                let k = self.below(n - n0);
                let (nl, nr) = if self.rng.gen_bool(0.5) { (n - n0, k) } else { (k, n - n0) };
                let (x, y) = (self.name(), self.name());
                let s = self.eff(vars, &SType::sum(a.clone(), b.clone()), n0, d);
                let l = self.eff(&Self::with_vars(vars, &[(x.clone(), a)], true), goal, nl, d);
                let r = self.eff(&Self::with_vars(vars, &[(y.clone(), b)], true), goal, nr, d);
                STerm::case(None, s, &x, l, &y, r)
            }
        }
    }

    // ---- (b) graded monad ----

    fn mon(&mut self, vars: &[Var], goal: &SType, depth: u32) -> STerm {
        if let Some(x) = self.pick_var(vars, goal) {
            if depth == 0 || self.rng.gen_bool(0.2) {
                return STerm::var(&x);
            }
        }
        if depth == 0 {
            return self.base(goal);
        }
        let d = depth - 1;
        match self.rng.gen_range(0..10) {
            0..=3 => match goal {
                SType::Unit => STerm::Unit,
                SType::Fun(_, a, b) => {
                    let x = self.name();
                    let inner = Self::with_vars(vars, &[(x.clone(), (**a).clone())], true);
                    STerm::lam(&x, None, (**a).clone(), self.mon(&inner, b, d))
                }
                SType::Tensor(a, b) => STerm::pair(self.mon(vars, a, d), self.mon(vars, b, d)),
                SType::With(a, b) => STerm::wpair(self.mon(vars, a, d), self.mon(vars, b, d)),
                SType::Sum(a, b) => {
                    let (a, b) = ((**a).clone(), (**b).clone());
                    self.inj(goal, &a, &b, |s, t| s.mon(vars, t, d))
                }
                SType::Monad(e, a) => {
                    let n = e.raw();
                    if n == 0 {
                        STerm::ret(self.mon(vars, a, d))
                    } else if n == 1 && **a == SType::Unit && self.rng.gen_bool(0.5) {
                        STerm::Tick
                    } else {
                        let n1 = self.rng.gen_range(0..=n);
                        let b = self.ty(1);
                        let x = self.name();
                        let m = self.mon(vars, &SType::monad(self.ea.nat(n1), b.clone()), d);
                        let inner = Self::with_vars(vars, &[(x.clone(), b)], true);
                        let rest = SType::monad(self.ea.nat(n - n1), (**a).clone());
                        STerm::bind(&x, m, self.mon(&inner, &rest, d))
                    }
                }
                SType::Boxed(..) => self.base(goal),
            },
            4 | 5 => {
                let a = self.ty(1);
                let f = self.mon(vars, &SType::fun(Latent::Plain, a.clone(), goal.clone()), d);
                STerm::app(f, self.mon(vars, &a, d))
            }
            6 => STerm::seq(self.mon(vars, &SType::Unit, d), self.mon(vars, goal, d)),
            7 => {
                let other = self.ty(1);
                if self.d.has_with() {
                    if self.rng.gen_bool(0.5) {
                        STerm::Fst(Box::new(self.mon(vars, &SType::with(goal.clone(), other), d)))
                    } else {
                        STerm::Snd(Box::new(self.mon(vars, &SType::with(other, goal.clone()), d)))
                    }
                } else {
                    let (x, y) = (self.name(), self.name());
                    let s = self.mon(vars, &SType::tensor(goal.clone(), other.clone()), d);
                    let inner = Self::with_vars(vars, &[(x.clone(), goal.clone()), (y.clone(), other)], true);
                    STerm::split(None, &x, &y, s, self.mon(&inner, goal, d))
                }
            }
            _ => {
                let (a, b) = (self.ty(1), self.ty(1));
                let (x, y) = (self.name(), self.name());
                let s = self.mon(vars, &SType::sum(a.clone(), b.clone()), d);
                let l = self.mon(&Self::with_vars(vars, &[(x.clone(), a)], true), goal, d);
                let r = self.mon(&Self::with_vars(vars, &[(y.clone(), b)], true), goal, d);
                STerm::case(None, s, &x, l, &y, r)
            }
        }
    }

    // ---- (c) graded coeffects ----

    fn co_ctx(vars: &[Var]) -> SContext {
        vars.iter().map(|v| (v.name.clone(), v.ty.clone())).collect()
    }

    /// Demands a term makes on the last `k` variables.
    fn co_demands(&self, vars: &[Var], e: &STerm, k: usize) -> Option<Vec<Grade>> {
        match src_check(self.d, SrcGrades::Coeffect(self.ca), &Self::co_ctx(vars), e).ok()?.grading {
            SrcGrading::Vector(g) => Some(g.split_last(k).1),
            _ => None,
        }
    }

    /// Generates a body under binders and a pool grade admitted by `ok`.
    fn co_body(
        &mut self,
        vars: &[Var],
        bs: &[(String, SType)],
        goal: &SType,
        d: u32,
        ok: &dyn Fn(&Self, Grade, &[Grade]) -> bool,
    ) -> Option<(STerm, Grade)> {
        for usable in [true, false] {
            let inner = Self::with_vars(vars, bs, usable);
            let body = self.co(&inner, goal, d);
            if let Some(dm) = self.co_demands(&inner, &body, bs.len()) {
                let fits: Vec<Grade> = self.pool.iter().copied().filter(|&q| ok(self, q, &dm)).collect();
                if let Some(&q) = fits.choose(self.rng) {
                    return Some((body, q));
                }
            }
        }
        None
    }

    fn co(&mut self, vars: &[Var], goal: &SType, depth: u32) -> STerm {
        if let Some(x) = self.pick_var(vars, goal) {
            if depth == 0 || self.rng.gen_bool(0.25) {
                return STerm::var(&x);
            }
        }
        if depth == 0 {
            return self.base(goal);
        }
        let d = depth - 1;
        let one = self.ca.one();
        match self.rng.gen_range(0..11) {
            0..=3 => match goal {
                SType::Unit => STerm::Unit,
                SType::Fun(Latent::Co(q), a, b) => {
                    let q = *q;
                    let x = self.name();
                    let ok = move |s: &Self, _: Grade, dm: &[Grade]| s.leq(q, dm[0]);
                    match self.co_body(vars, &[(x.clone(), (**a).clone())], b, d, &ok) {
                        Some((body, _)) => STerm::lam(&x, Some(q), (**a).clone(), body),
                        None => self.base(goal),
                    }
                }
                SType::Tensor(a, b) => STerm::pair(self.co(vars, a, d), self.co(vars, b, d)),
                SType::With(a, b) => STerm::wpair(self.co(vars, a, d), self.co(vars, b, d)),
                SType::Sum(a, b) => {
                    let (a, b) = ((**a).clone(), (**b).clone());
                    self.inj(goal, &a, &b, |s, t| s.co(vars, t, d))
                }
                SType::Boxed(q, a) => STerm::boxi(*q, self.co(vars, a, d)),
                _ => self.base(goal),
            },
            4 => {
                let a = self.ty(1);
                let q = self.grade();
                let f = self.co(vars, &SType::fun(Latent::Co(q), a.clone(), goal.clone()), d);
                STerm::app(f, self.co(vars, &a, d))
            }
            5 => STerm::seq(self.co(vars, &SType::Unit, d), self.co(vars, goal, d)),
            6 | 7 => {
                let a = self.ty(1);
                let x = self.name();
                let pairs: Vec<(Grade, Grade)> =
                    self.pool.iter().flat_map(|&p| self.pool.iter().map(move |&r| (p, r))).collect();
                let ca = self.ca;
                let ok = move |s: &Self, q2: Grade, dm: &[Grade]| {
                    pairs.iter().any(|&(q1, r)| r == q2 && s.leq(ca.mul(q1, q2).unwrap_or(q1), dm[0]))
                };
                match self.co_body(vars, &[(x.clone(), a.clone())], goal, d, &ok) {
                    Some((body, q2)) => {
                        let dm = self.co_demands(&Self::with_vars(vars, &[(x.clone(), a.clone())], true), &body, 1);
                        let q1s: Vec<Grade> = self
                            .pool
                            .iter()
                            .copied()
                            .filter(|&q1| dm.as_ref().is_some_and(|dm| self.leq(ca.mul(q1, q2).unwrap_or(q1), dm[0])))
                            .collect();
                        let q1 = q1s.choose(self.rng).copied().unwrap_or(one);
                        let s = self.co(vars, &SType::boxed(q1, a), d);
                        STerm::unbox(q2, &x, s, body)
                    }
                    None => self.base(goal),
                }
            }
            8 => {
                let (a, b) = (self.ty(1), self.ty(1));
                let (x, y) = (self.name(), self.name());
                let sx = Self::with_vars(vars, &[(x.clone(), a.clone())], true);
                let sy = Self::with_vars(vars, &[(y.clone(), b.clone())], true);
                let ok1 = move |s: &Self, q: Grade, dm: &[Grade]| s.leq(q, one) && s.leq(q, dm[0]);
                let l = self.co_body(vars, &[(x.clone(), a.clone())], goal, d, &ok1);
                let r = self.co_body(vars, &[(y.clone(), b.clone())], goal, d, &ok1);
                let (Some((l, _)), Some((r, _))) = (l, r) else {
                    return self.base(goal);
                };
                let (dl, dr) = (self.co_demands(&sx, &l, 1), self.co_demands(&sy, &r, 1));
                let fits: Vec<Grade> = match (dl, dr) {
                    (Some(dl), Some(dr)) => self
                        .pool
                        .iter()
                        .copied()
                        .filter(|&q| self.leq(q, one) && self.leq(q, dl[0]) && self.leq(q, dr[0]))
                        .collect(),
                    _ => Vec::new(),
                };
                match fits.choose(self.rng) {
                    Some(&q) => {
                        let s = self.co(vars, &SType::sum(a, b), d);
                        STerm::case(Some(q), s, &x, l, &y, r)
                    }
                    None => self.base(goal),
                }
            }
            _ => {
                let other = self.ty(1);
                if self.d.has_with() {
                    if self.rng.gen_bool(0.5) {
                        STerm::Fst(Box::new(self.co(vars, &SType::with(goal.clone(), other), d)))
                    } else {
                        STerm::Snd(Box::new(self.co(vars, &SType::with(other, goal.clone()), d)))
                    }
                } else {
                    let (x, y) = (self.name(), self.name());
                    let bs = [(x.clone(), goal.clone()), (y.clone(), other.clone())];
                    let ok = |s: &Self, q: Grade, dm: &[Grade]| s.leq(q, dm[0]) && s.leq(q, dm[1]);
                    match self.co_body(vars, &bs, goal, d, &ok) {
                        Some((body, q)) => {
                            let s = self.co(vars, &SType::tensor(goal.clone(), other), d);
                            STerm::split(Some(q), &x, &y, s, body)
                        }
                        None => self.base(goal),
                    }
                }
            }
        }
    }

    // ---- (d) linear with a graded comonad ----

    /// A closed inhabitant of a linear type.
    fn closed(&mut self, t: &SType) -> STerm {
        match t {
            SType::Fun(_, a, b) => {
                let x = self.name();
                let body = self.closed(b);
                let body = self.consume(STerm::var(&x), a, body);
                STerm::lam(&x, None, (**a).clone(), body)
            }
            SType::Boxed(q, a) => STerm::Extend(*q, Vec::new(), Box::new(self.closed(a))),
            _ => STerm::Unit,
        }
    }

    /// Uses up `e : t` and continues with `then`.
    fn consume(&mut self, e: STerm, t: &SType, then: STerm) -> STerm {
        match t {
            SType::Boxed(..) => STerm::discard(e, then),
            SType::Fun(_, a, b) => {
                let arg = self.closed(a);
                self.consume(STerm::app(e, arg), b, then)
            }
            _ => STerm::seq(e, then),
        }
    }

    fn consume_all(&mut self, vars: &[Var], then: STerm) -> STerm {
        vars.iter().rev().fold(then, |acc, v| {
            let t = v.ty.clone();
            self.consume(STerm::var(&v.name), &t, acc)
        })
    }

    fn split_vars(&mut self, vars: &[Var]) -> (Vec<Var>, Vec<Var>) {
        let (mut l, mut r) = (Vec::new(), Vec::new());
        for v in vars {
            if self.rng.gen_bool(0.5) {
                l.push(v.clone());
            } else {
                r.push(v.clone());
            }
        }
        (l, r)
    }

    /// A term of `goal` using every variable in `vars` exactly once.
    fn lin(&mut self, vars: &[Var], goal: &SType, depth: u32) -> STerm {
        if depth == 0 {
            if let Some(k) = vars.iter().position(|v| v.ty == *goal) {
                let rest: Vec<Var> = vars.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, v)| v.clone()).collect();
                return self.consume_all(&rest, STerm::var(&vars[k].name));
            }
            let base = self.closed(goal);
            return self.consume_all(vars, base);
        }
        let d = depth - 1;
        match self.rng.gen_range(0..9) {
            0 | 1 => match goal {
                SType::Fun(_, a, b) => {
                    let x = self.name();
                    let inner = Self::with_vars(vars, &[(x.clone(), (**a).clone())], true);
                    STerm::lam(&x, None, (**a).clone(), self.lin(&inner, b, d))
                }
                SType::Boxed(q, a) => self.lin_extend(vars, *q, a, d),
                _ => {
                    let (l, r) = self.split_vars(vars);
                    STerm::seq(self.lin(&l, &SType::Unit, d), self.lin(&r, goal, d))
                }
            },
            2 => {
                let a = self.lin_domain(1);
                let (l, r) = self.split_vars(vars);
                let f = self.lin(&l, &SType::fun(Latent::Linear, a.clone(), goal.clone()), d);
                STerm::app(f, self.lin(&r, &a, d))
            }
            3 => {
                let (l, r) = self.split_vars(vars);
                STerm::seq(self.lin(&l, &SType::Unit, d), self.lin(&r, goal, d))
            }
            4 | 5 => {
                let q = if self.rng.gen_bool(0.5) { one_of(self.ca, 1) } else { one_of(self.ca, 2) };
                let q = if self.leq(q, self.ca.one()) { q } else { self.ca.one() };
                STerm::extract(self.lin(vars, &SType::boxed(q, goal.clone()), d))
            }
            6 | 7 => {
                let boxes: Vec<usize> = (0..vars.len()).filter(|&k| matches!(vars[k].ty, SType::Boxed(..))).collect();
                let Some(&k) = boxes.choose(self.rng) else {
                    return self.lin(vars, goal, d);
                };
                let (q, a) = match &vars[k].ty {
                    SType::Boxed(q, a) => (*q, (**a).clone()),
                    _ => unreachable!(),
                };
                let splits: Vec<(Grade, Grade)> = self
                    .pool
                    .iter()
                    .flat_map(|&p| self.pool.iter().map(move |&r| (p, r)))
                    .filter(|&(p, r)| self.ca.add(p, r).is_ok_and(|s| self.leq(q, s)))
                    .collect();
                let Some(&(q1, q2)) = splits.choose(self.rng) else {
                    return self.lin(vars, goal, d);
                };
                let (x, y) = (self.name(), self.name());
                let mut rest: Vec<Var> = vars.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, v)| v.clone()).collect();
                rest.push(Var { name: x.clone(), ty: SType::boxed(q1, a.clone()), usable: true });
                rest.push(Var { name: y.clone(), ty: SType::boxed(q2, a), usable: true });
                let body = self.lin(&rest, goal, d);
                STerm::divide(&x, q1, &y, q2, STerm::var(&vars[k].name), body)
            }
            _ => {
                if let Some(k) = vars.iter().position(|v| v.ty == *goal) {
                    let rest: Vec<Var> = vars.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, v)| v.clone()).collect();
                    self.consume_all(&rest, STerm::var(&vars[k].name))
                } else {
                    self.lin(vars, goal, d)
                }
            }
        }
    }

    /// `extend^q` over some of the boxed variables; the rest are consumed
    /// outside.
    fn lin_extend(&mut self, vars: &[Var], q: Grade, a: &SType, d: u32) -> STerm {
        let mut binders = Vec::new();
        let mut inner = Vec::new();
        let mut outside = Vec::new();
        for v in vars {
            let SType::Boxed(q1, t) = &v.ty else {
                outside.push(v.clone());
                continue;
            };
            let fits: Vec<Grade> = self
                .pool
                .iter()
                .copied()
                .filter(|&g| self.ca.mul(q, g).is_ok_and(|need| self.leq(*q1, need)))
                .collect();
            match fits.choose(self.rng) {
                Some(&g) if self.rng.gen_bool(0.7) => {
                    let x = self.name();
                    binders.push(ExtBind { name: x.clone(), grade: g, rhs: STerm::var(&v.name) });
                    inner.push(Var { name: x, ty: SType::boxed(g, (**t).clone()), usable: true });
                }
                _ => outside.push(v.clone()),
            }
        }
        let body = self.lin(&inner, a, d);
        let e = STerm::Extend(q, binders, Box::new(body));
        self.consume_all(&outside, e)
    }
}

fn one_of(ca: &CoeffectAlgebra, n: u64) -> Grade {
    ca.nat(n)
}
