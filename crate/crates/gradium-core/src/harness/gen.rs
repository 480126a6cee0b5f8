//! Type-directed generators for well-typed CBPV terms.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::coeffect_system::co_infer_comp;
use crate::grading::{CoeffectAlgebra, EffectAlgebra, Grade};
use crate::syntax::{Comp, CompType, Context, Name, ValType, Value};

fn var(scope_len: usize, k: usize) -> Value {
    Value::Var(scope_len - 1 - k, Name::new(format!("x{k}")))
}

fn binder(scope_len: usize) -> String {
    format!("x{scope_len}")
}

/// With probability `p`, a scope type satisfying `pred`.
fn scoped<'t, R: Rng>(rng: &mut R, tys: impl Iterator<Item = &'t ValType>, p: f64, pred: impl Fn(&ValType) -> bool) -> Option<ValType> {
    let c: Vec<&ValType> = tys.filter(|t| pred(t)).collect();
    if c.is_empty() || !rng.gen_bool(p) {
        return None;
    }
    c.choose(rng).map(|t| (*t).clone())
}

fn is_sum(t: &ValType) -> bool {
    matches!(t, ValType::Sum(..))
}

fn is_prod(t: &ValType) -> bool {
    matches!(t, ValType::Prod(..))
}

/// Effect-mode generator. Every computation it builds for a goal `(B, n)`
/// infers exactly type `B` and effect `n`.
pub struct EffGen<'a, R> {
    pub alg: &'a EffectAlgebra,
    pub rng: &'a mut R,
    pub max_depth: u32,
}

impl<'a, R: Rng> EffGen<'a, R> {
    pub fn new(alg: &'a EffectAlgebra, rng: &'a mut R, max_depth: u32) -> Self {
        Self { alg, rng, max_depth }
    }

    fn eff(&self, n: u64) -> crate::grading::Effect {
        self.alg.nat(n)
    }

    /// A random element `k` with `k ≤ n` in the algebra's order.
    fn below(&mut self, n: u64) -> u64 {
        let alg = self.alg;
        let ks: Vec<u64> = (0..=n).filter(|&k| alg.leq(alg.nat(k), alg.nat(n)).unwrap_or(false)).collect();
        *ks.choose(self.rng).unwrap_or(&n)
    }

    pub fn val_type(&mut self, depth: u32) -> ValType {
        if depth == 0 {
            return ValType::Unit;
        }
        match self.rng.gen_range(0..6) {
            0 | 1 => ValType::Unit,
            2 => ValType::prod(self.val_type(depth - 1), self.val_type(depth - 1)),
            3 => ValType::sum(self.val_type(depth - 1), self.val_type(depth - 1)),
            _ => {
                let n = self.rng.gen_range(0..3);
                ValType::u(Some(self.eff(n)), self.comp_type(depth - 1))
            }
        }
    }

    pub fn comp_type(&mut self, depth: u32) -> CompType {
        if depth == 0 {
            return CompType::f(None, ValType::Unit);
        }
        match self.rng.gen_range(0..6) {
            0..=2 => CompType::f(None, self.val_type(depth - 1)),
            3 | 4 => CompType::arrow(None, self.val_type(depth - 1), self.comp_type(depth - 1)),
            _ => CompType::with(self.comp_type(depth - 1), self.comp_type(depth - 1)),
        }
    }

    /// The canonical closed inhabitant of `a`.
    pub fn base_value(&mut self, a: &ValType) -> Value {
        match a {
            ValType::Unit | ValType::Base(_) | ValType::Meta(_) => Value::Unit,
            ValType::Prod(x, y) => Value::pair(self.base_value(x), self.base_value(y)),
            ValType::Sum(x, _) => Value::ann(Value::inl(self.base_value(x)), a.clone()),
            ValType::With(x, y) => Value::with(self.base_value(x), self.base_value(y)),
            ValType::U(e, b) => {
                let n = e.map(|e| e.raw()).unwrap_or(0);
                Value::ann(Value::thunk(self.base(&[], b, n)), a.clone())
            }
        }
    }

    /// A computation of `b` at effect `n` built without eliminations.
    pub fn base(&mut self, scope: &[ValType], b: &CompType, n: u64) -> Comp {
        match b {
            CompType::F(_, a) => {
                let mut m = Comp::Return(None, self.base_value(a));
                for k in 0..n {
                    m = Comp::let_(&binder(scope.len() + (n - 1 - k) as usize), None, Comp::tick(), m.shift(1, 0));
                }
                m
            }
            CompType::Arrow(_, a, c) => {
                let mut inner = scope.to_vec();
                inner.push((**a).clone());
                Comp::Lam(Name::new(binder(scope.len())), None, Some((**a).clone()), Box::new(self.base(&inner, c, n)))
            }
            CompType::With(x, y) | CompType::Tensor(x, y) => Comp::cpair(self.base(scope, x, n), self.base(scope, y, n)),
        }
    }

    pub fn value(&mut self, scope: &[ValType], a: &ValType, depth: u32) -> Value {
        let vars: Vec<usize> = (0..scope.len()).filter(|&k| scope[k] == *a).collect();
        if !vars.is_empty() && self.rng.gen_bool(0.5) {
            let k = *vars.choose(self.rng).unwrap();
            return var(scope.len(), k);
        }
        match a {
            ValType::Prod(x, y) => Value::pair(self.value(scope, x, depth), self.value(scope, y, depth)),
            ValType::Sum(x, y) => {
                let w = if self.rng.gen_bool(0.5) {
                    Value::inl(self.value(scope, x, depth))
                } else {
                    Value::inr(self.value(scope, y, depth))
                };
                Value::ann(w, a.clone())
            }
            ValType::U(e, b) => {
                let n = e.map(|e| e.raw()).unwrap_or(0);
                let k = self.below(n);
                let m = self.comp(scope, b, k, depth.saturating_sub(1));
                if k == n && self.rng.gen_bool(0.3) {
                    Value::thunk(m)
                } else {
                    Value::ann(Value::thunk(m), a.clone())
                }
            }
            _ => self.base_value(a),
        }
    }

    /// A computation of type `b` whose inferred effect is exactly `n`.
    pub fn comp(&mut self, scope: &[ValType], b: &CompType, n: u64, depth: u32) -> Comp {
        if depth == 0 {
            return self.base(scope, b, n);
        }
        let d = depth - 1;
        let len = scope.len();
        let push = |extra: &[ValType]| {
            let mut s = scope.to_vec();
            s.extend_from_slice(extra);
            s
        };
        match self.rng.gen_range(0..12) {
            // introduction forms
            0..=3 => match b {
                CompType::F(_, a) => {
                    if n == 0 {
                        Comp::Return(None, self.value(scope, a, d))
                    } else if n == 1 && **a == ValType::Unit && self.rng.gen_bool(0.7) {
                        Comp::tick()
                    } else {
                        self.comp(scope, b, n, d)
                    }
                }
                CompType::Arrow(_, a, c) => {
                    let body = self.comp(&push(&[(**a).clone()]), c, n, d);
                    Comp::Lam(Name::new(binder(len)), None, Some((**a).clone()), Box::new(body))
                }
                CompType::With(x, y) | CompType::Tensor(x, y) => {
                    let k = self.below(n);
                    let (nx, ny) = if self.rng.gen_bool(0.5) { (n, k) } else { (k, n) };
                    Comp::cpair(self.comp(scope, x, nx, d), self.comp(scope, y, ny, d))
                }
            },
            4 | 5 => {
                let n1 = self.rng.gen_range(0..=n);
                let a = scoped(self.rng, scope.iter(), 0.4, |_| true).unwrap_or_else(|| self.val_type(2));
                let m = self.comp(scope, &CompType::f(None, a.clone()), n1, d);
                let body = self.comp(&push(&[a]), b, n - n1, d);
                Comp::let_(&binder(len), None, m, body)
            }
            6 => Comp::seq(self.value(scope, &ValType::Unit, d), self.comp(scope, b, n, d)),
            7 => {
                let a = scoped(self.rng, scope.iter(), 0.4, |_| true).unwrap_or_else(|| self.val_type(2));
                let f = self.comp(scope, &CompType::arrow(None, a.clone(), b.clone()), n, d);
                Comp::app(f, self.value(scope, &a, d))
            }
            8 => {
                let u = ValType::u(Some(self.eff(n)), b.clone());
                Comp::Force(self.value(scope, &u, d))
            }
            9 => {
                let (x, y) = match scoped(self.rng, scope.iter(), 0.6, is_sum) {
                    Some(ValType::Sum(x, y)) => (*x, *y),
                    _ => (self.val_type(1), self.val_type(1)),
                };
                let s = self.value(scope, &ValType::sum(x.clone(), y.clone()), d);
                let k = self.below(n);
                let (nl, nr) = if self.rng.gen_bool(0.5) { (n, k) } else { (k, n) };
                let l = self.comp(&push(&[x]), b, nl, d);
                let r = self.comp(&push(&[y]), b, nr, d);
                Comp::case(None, s, &binder(len), l, &binder(len), r)
            }
            10 => {
                let (x, y) = match scoped(self.rng, scope.iter(), 0.6, is_prod) {
                    Some(ValType::Prod(x, y)) => (*x, *y),
                    _ => (self.val_type(1), self.val_type(1)),
                };
                let p = self.value(scope, &ValType::prod(x.clone(), y.clone()), d);
                let body = self.comp(&push(&[x, y]), b, n, d);
                Comp::split(None, p, &binder(len), &binder(len + 1), body)
            }
            _ => {
                let other = self.comp_type(1);
                let k = self.below(n);
                if self.rng.gen_bool(0.5) {
                    let p = Comp::cpair(self.comp(scope, b, n, d), self.comp(scope, &other, k, d));
                    Comp::CFst(Box::new(p))
                } else {
                    let p = Comp::cpair(self.comp(scope, &other, k, d), self.comp(scope, b, n, d));
                    Comp::CSnd(Box::new(p))
                }
            }
        }
    }
}

/// One entry of a coeffect generation scope.
#[derive(Clone, Debug)]
struct Entry {
    ty: ValType,
    usable: bool,
}

/// Coeffect-mode generator. Binder grades are chosen after the body is
/// built, from the body's inferred demand; when no grade in the pool fits,
/// the body is rebuilt without access to the binder.
pub struct CoGen<'a, R> {
    pub alg: &'a CoeffectAlgebra,
    pub rng: &'a mut R,
    pub pool: Vec<Grade>,
    pub max_depth: u32,
}

impl<'a, R: Rng> CoGen<'a, R> {
    pub fn new(alg: &'a CoeffectAlgebra, rng: &'a mut R, pool: Vec<Grade>, max_depth: u32) -> Self {
        Self { alg, rng, pool, max_depth }
    }

    fn grade(&mut self) -> Grade {
        *self.pool.choose(self.rng).unwrap_or(&self.alg.one())
    }

    fn leq(&self, a: Grade, b: Grade) -> bool {
        self.alg.leq(a, b).unwrap_or(false)
    }

    /// A binder grade for goal arrows. The canonical inhabitant ignores its
    /// argument, so the grade must admit zero uses.
    fn arrow_grade(&mut self) -> Grade {
        let zero = self.alg.zero();
        let fits: Vec<Grade> = self.pool.iter().copied().filter(|&q| self.leq(q, zero)).collect();
        *fits.choose(self.rng).unwrap_or(&zero)
    }

    fn mul(&self, a: Grade, b: Grade) -> Grade {
        self.alg.mul(a, b).unwrap_or(a)
    }

    pub fn val_type(&mut self, depth: u32) -> ValType {
        if depth == 0 {
            return ValType::Unit;
        }
        match self.rng.gen_range(0..7) {
            0 | 1 => ValType::Unit,
            2 => ValType::prod(self.val_type(depth - 1), self.val_type(depth - 1)),
            3 => ValType::sum(self.val_type(depth - 1), self.val_type(depth - 1)),
            4 => ValType::with(self.val_type(depth - 1), self.val_type(depth - 1)),
            _ => ValType::u(None, self.comp_type(depth - 1)),
        }
    }

    pub fn comp_type(&mut self, depth: u32) -> CompType {
        if depth == 0 {
            return CompType::f(Some(self.grade()), ValType::Unit);
        }
        match self.rng.gen_range(0..8) {
            0..=3 => CompType::f(Some(self.grade()), self.val_type(depth - 1)),
            4 | 5 => CompType::arrow(Some(self.arrow_grade()), self.val_type(depth - 1), self.comp_type(depth - 1)),
            6 => CompType::with(self.comp_type(depth - 1), self.comp_type(depth - 1)),
            _ => CompType::tensor(self.comp_type(depth - 1), self.comp_type(depth - 1)),
        }
    }

    fn context(scope: &[Entry]) -> Context {
        let mut c = Context::new();
        for (k, e) in scope.iter().enumerate() {
            c.push(Name::new(format!("x{k}")), e.ty.clone());
        }
        c
    }

    /// Demands the body makes on the last `k` entries of its scope.
    fn demands(&self, scope: &[Entry], body: &Comp, k: usize) -> Option<Vec<Grade>> {
        let (_, gv) = co_infer_comp(self.alg, &Self::context(scope), body).ok()?;
        Some(gv.split_last(k).1)
    }

    fn extend(scope: &[Entry], tys: &[ValType], usable: bool) -> Vec<Entry> {
        let mut s = scope.to_vec();
        s.extend(tys.iter().map(|t| Entry { ty: t.clone(), usable }));
        s
    }

    /// Builds a body under fresh binders and picks a grade `q` from the pool
    /// that each binder demand admits, subject to `ok(q)`.
    fn graded_body(
        &mut self,
        scope: &[Entry],
        tys: &[ValType],
        goal: &CompType,
        d: u32,
        ok: &dyn Fn(&Self, Grade, &[Grade]) -> bool,
    ) -> (Comp, Option<Grade>) {
        for usable in [true, false] {
            let inner = Self::extend(scope, tys, usable);
            let body = self.comp_in(&inner, goal, d);
            if let Some(dm) = self.demands(&inner, &body, tys.len()) {
                let fits: Vec<Grade> = self.pool.iter().copied().filter(|&q| ok(self, q, &dm)).collect();
                if let Some(&q) = fits.choose(self.rng) {
                    return (body, Some(q));
                }
            }
        }
        let inner = Self::extend(scope, tys, false);
        (self.base_in(&inner, goal), None)
    }

    pub fn base_value(&mut self, a: &ValType) -> Value {
        match a {
            ValType::Unit | ValType::Base(_) | ValType::Meta(_) => Value::Unit,
            ValType::Prod(x, y) => Value::pair(self.base_value(x), self.base_value(y)),
            ValType::Sum(x, _) => Value::ann(Value::inl(self.base_value(x)), a.clone()),
            ValType::With(x, y) => Value::with(self.base_value(x), self.base_value(y)),
            ValType::U(_, b) => Value::thunk(self.base_in(&[], b)),
        }
    }

    fn base_in(&mut self, scope: &[Entry], b: &CompType) -> Comp {
        match b {
            CompType::F(q, a) => Comp::Return(*q, self.base_value(a)),
            CompType::Arrow(q, a, c) => {
                let inner = Self::extend(scope, &[(**a).clone()], false);
                let body = self.base_in(&inner, c);
                Comp::Lam(Name::new(binder(scope.len())), *q, Some((**a).clone()), Box::new(body))
            }
            CompType::With(x, y) => Comp::cpair(self.base_in(scope, x), self.base_in(scope, y)),
            CompType::Tensor(x, y) => Comp::tensor(self.base_in(scope, x), self.base_in(scope, y)),
        }
    }

    fn value_in(&mut self, scope: &[Entry], a: &ValType, d: u32) -> Value {
        let vars: Vec<usize> = (0..scope.len()).filter(|&k| scope[k].usable && scope[k].ty == *a).collect();
        if !vars.is_empty() && self.rng.gen_bool(0.6) {
            let k = *vars.choose(self.rng).unwrap();
            return var(scope.len(), k);
        }
        let projs: Vec<(usize, bool)> = (0..scope.len())
            .filter(|&k| scope[k].usable)
            .filter_map(|k| match &scope[k].ty {
                ValType::With(x, _) if **x == *a => Some((k, true)),
                ValType::With(_, y) if **y == *a => Some((k, false)),
                _ => None,
            })
            .collect();
        if !projs.is_empty() && self.rng.gen_bool(0.3) {
            let (k, first) = *projs.choose(self.rng).unwrap();
            let v = Box::new(var(scope.len(), k));
            return if first { Value::Fst(v) } else { Value::Snd(v) };
        }
        match a {
            ValType::Prod(x, y) => Value::pair(self.value_in(scope, x, d), self.value_in(scope, y, d)),
            ValType::With(x, y) => Value::with(self.value_in(scope, x, d), self.value_in(scope, y, d)),
            ValType::Sum(x, y) => {
                let w = if self.rng.gen_bool(0.5) {
                    Value::inl(self.value_in(scope, x, d))
                } else {
                    Value::inr(self.value_in(scope, y, d))
                };
                Value::ann(w, a.clone())
            }
            ValType::U(_, b) => Value::thunk(self.comp_in(scope, b, d.saturating_sub(1))),
            _ => Value::Unit,
        }
    }

    pub fn value(&mut self, scope: &[ValType], a: &ValType, depth: u32) -> Value {
        let s = Self::extend(&[], scope, true);
        self.value_in(&s, a, depth)
    }

    pub fn comp(&mut self, scope: &[ValType], b: &CompType, depth: u32) -> Comp {
        let s = Self::extend(&[], scope, true);
        self.comp_in(&s, b, depth)
    }

    fn comp_in(&mut self, scope: &[Entry], b: &CompType, depth: u32) -> Comp {
        if depth == 0 {
            return match b {
                CompType::F(q, a) => Comp::Return(*q, self.value_in(scope, a, 0)),
                _ => self.base_in(scope, b),
            };
        }
        let d = depth - 1;
        let len = scope.len();
        let x = binder(len);
        match self.rng.gen_range(0..13) {
            0..=3 => match b {
                CompType::F(q, a) => Comp::Return(*q, self.value_in(scope, a, d)),
                CompType::Arrow(q, a, c) => {
                    let q = q.unwrap_or(self.alg.one());
                    let ok = move |s: &Self, _: Grade, dm: &[Grade]| s.leq(q, dm[0]);
                    let (body, _) = self.graded_body(scope, &[(**a).clone()], c, d, &ok);
                    Comp::Lam(Name::new(x), Some(q), Some((**a).clone()), Box::new(body))
                }
                CompType::With(l, r) => Comp::cpair(self.comp_in(scope, l, d), self.comp_in(scope, r, d)),
                CompType::Tensor(l, r) => Comp::tensor(self.comp_in(scope, l, d), self.comp_in(scope, r, d)),
            },
            4 | 5 => {
                let a = scoped(self.rng, scope.iter().filter(|e| e.usable).map(|e| &e.ty), 0.4, |_| true).unwrap_or_else(|| self.val_type(2));
                let pairs: Vec<(Grade, Grade)> =
                    self.pool.iter().flat_map(|&p| self.pool.iter().map(move |&r| (p, r))).collect();
                let inner = Self::extend(scope, &[a.clone()], true);
                let mut body = self.comp_in(&inner, b, d);
                let fits = |s: &Self, body: &Comp, inner: &[Entry]| -> Vec<(Grade, Grade)> {
                    match s.demands(inner, body, 1) {
                        Some(dm) => pairs.iter().copied().filter(|&(q1, q2)| s.leq(s.mul(q1, q2), dm[0])).collect(),
                        None => Vec::new(),
                    }
                };
                let mut ok = fits(self, &body, &inner);
                if ok.is_empty() {
                    let masked = Self::extend(scope, &[a.clone()], false);
                    body = self.comp_in(&masked, b, d);
                    ok = fits(self, &body, &masked);
                }
                match ok.choose(self.rng) {
                    Some(&(q1, q2)) => {
                        let m = self.comp_in(scope, &CompType::f(Some(q1), a), d);
                        Comp::let_(&x, Some(q2), m, body)
                    }
                    None => self.base_in(scope, b),
                }
            }
            6 => Comp::seq(self.value_in(scope, &ValType::Unit, d), self.comp_in(scope, b, d)),
            7 => {
                let a = scoped(self.rng, scope.iter().filter(|e| e.usable).map(|e| &e.ty), 0.4, |_| true).unwrap_or_else(|| self.val_type(2));
                let q = self.grade();
                let f = self.comp_in(scope, &CompType::arrow(Some(q), a.clone(), b.clone()), d);
                Comp::app(f, self.value_in(scope, &a, d))
            }
            8 => Comp::Force(self.value_in(scope, &ValType::u(None, b.clone()), d)),
            9 => {
                let (l, r) = match scoped(self.rng, scope.iter().filter(|e| e.usable).map(|e| &e.ty), 0.6, is_sum) {
                    Some(ValType::Sum(l, r)) => (*l, *r),
                    _ => (self.val_type(1), self.val_type(1)),
                };
                let s = self.value_in(scope, &ValType::sum(l.clone(), r.clone()), d);
                let one = self.alg.one();
                let ok1 = move |s: &Self, q: Grade, dm: &[Grade]| s.leq(q, one) && s.leq(q, dm[0]);
                let (lb, _) = self.graded_body(scope, &[l.clone()], b, d, &ok1);
                let (rb, _) = self.graded_body(scope, &[r.clone()], b, d, &ok1);
                match self.case_grade(scope, (l, r), &lb, &rb) {
                    Some(q) => Comp::case(Some(q), s, &x, lb, &x, rb),
                    None => self.base_in(scope, b),
                }
            }
            10 => {
                let (l, r) = match scoped(self.rng, scope.iter().filter(|e| e.usable).map(|e| &e.ty), 0.6, is_prod) {
                    Some(ValType::Prod(l, r)) => (*l, *r),
                    _ => (self.val_type(1), self.val_type(1)),
                };
                let p = self.value_in(scope, &ValType::prod(l.clone(), r.clone()), d);
                let ok = |s: &Self, q: Grade, dm: &[Grade]| s.leq(q, dm[0]) && s.leq(q, dm[1]);
                let (body, q) = self.graded_body(scope, &[l, r], b, d, &ok);
                match q {
                    Some(q) => Comp::split(Some(q), p, &x, &binder(len + 1), body),
                    None => self.base_in(scope, b),
                }
            }
            11 => {
                let (l, r) = (self.comp_type(1), self.comp_type(1));
                let m = self.comp_in(scope, &CompType::tensor(l.clone(), r.clone()), d);
                let one = self.alg.one();
                let ok = move |s: &Self, q: Grade, dm: &[Grade]| s.leq(q, one) && s.leq(q, dm[0]) && s.leq(q, dm[1]);
                let tys = [ValType::u(None, l), ValType::u(None, r)];
                let (body, q) = self.graded_body(scope, &tys, b, d, &ok);
                match q {
                    Some(q) => Comp::tsplit(Some(q), m, &x, &binder(len + 1), body),
                    None => self.base_in(scope, b),
                }
            }
            _ => {
                let other = self.comp_type(1);
                if self.rng.gen_bool(0.5) {
                    Comp::CFst(Box::new(Comp::cpair(self.comp_in(scope, b, d), self.comp_in(scope, &other, d))))
                } else {
                    Comp::CSnd(Box::new(Comp::cpair(self.comp_in(scope, &other, d), self.comp_in(scope, b, d))))
                }
            }
        }
    }

    /// A case grade admitted by both branches' binder demands.
    fn case_grade(&mut self, scope: &[Entry], (x, y): (ValType, ValType), l: &Comp, r: &Comp) -> Option<Grade> {
        let one = self.alg.one();
        let dl = self.demands(&Self::extend(scope, &[x], true), l, 1)?;
        let dr = self.demands(&Self::extend(scope, &[y], true), r, 1)?;
        let fits: Vec<Grade> = self
            .pool
            .iter()
            .copied()
            .filter(|&q| self.leq(q, one) && self.leq(q, dl[0]) && self.leq(q, dr[0]))
            .collect();
        fits.choose(self.rng).copied()
    }
}
