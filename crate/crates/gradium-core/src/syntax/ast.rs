use std::fmt;

use crate::grading::{Effect, Grade};

/// A binder or variable name kept only for printing.
///
/// All `Name`s compare equal, so derived equality on terms is
/// α-equivalence over the positional representation.
#[derive(Clone, Debug, Default, Eq, PartialOrd, Ord)]
pub struct Name(pub String);

impl PartialEq for Name {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl std::hash::Hash for Name {
    fn hash<H: std::hash::Hasher>(&self, _: &mut H) {}
}

impl Name {
    pub fn new(s: impl Into<String>) -> Self {
        Name(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name(s.to_string())
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Which grading discipline a program is written for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Effect,
    Coeffect,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Effect => "effect",
            Mode::Coeffect => "coeffect",
        })
    }
}

/// Value types.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ValType {
    Unit,
    /// An opaque base type, inhabited only by context variables.
    Base(String),
    /// A type still to be solved during inference.
    Meta(u32),
    /// `U^φ B` in effect mode, `U B` in coeffect mode.
    U(Option<Effect>, Box<CompType>),
    Prod(Box<ValType>, Box<ValType>),
    Sum(Box<ValType>, Box<ValType>),
    /// Shared value product `A & A`.
    With(Box<ValType>, Box<ValType>),
}

/// Computation types.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CompType {
    /// `A ->^q B` in coeffect mode, `A -> B` in effect mode.
    Arrow(Option<Grade>, Box<ValType>, Box<CompType>),
    /// `F^q A` in coeffect mode, `F A` in effect mode.
    F(Option<Grade>, Box<ValType>),
    With(Box<CompType>, Box<CompType>),
    /// Disjoint computation product `B * B`.
    Tensor(Box<CompType>, Box<CompType>),
}

impl ValType {
    pub fn u(e: Option<Effect>, b: CompType) -> Self {
        ValType::U(e, Box::new(b))
    }

    pub fn prod(a: ValType, b: ValType) -> Self {
        ValType::Prod(Box::new(a), Box::new(b))
    }

    pub fn sum(a: ValType, b: ValType) -> Self {
        ValType::Sum(Box::new(a), Box::new(b))
    }

    pub fn with(a: ValType, b: ValType) -> Self {
        ValType::With(Box::new(a), Box::new(b))
    }

    pub fn has_meta(&self) -> bool {
        match self {
            ValType::Meta(_) => true,
            ValType::Unit | ValType::Base(_) => false,
            ValType::U(_, b) => b.has_meta(),
            ValType::Prod(a, b) | ValType::Sum(a, b) | ValType::With(a, b) => {
                a.has_meta() || b.has_meta()
            }
        }
    }
}

impl CompType {
    pub fn arrow(q: Option<Grade>, a: ValType, b: CompType) -> Self {
        CompType::Arrow(q, Box::new(a), Box::new(b))
    }

    pub fn f(q: Option<Grade>, a: ValType) -> Self {
        CompType::F(q, Box::new(a))
    }

    pub fn with(a: CompType, b: CompType) -> Self {
        CompType::With(Box::new(a), Box::new(b))
    }

    pub fn tensor(a: CompType, b: CompType) -> Self {
        CompType::Tensor(Box::new(a), Box::new(b))
    }

    pub fn has_meta(&self) -> bool {
        match self {
            CompType::Arrow(_, a, b) => a.has_meta() || b.has_meta(),
            CompType::F(_, a) => a.has_meta(),
            CompType::With(a, b) | CompType::Tensor(a, b) => a.has_meta() || b.has_meta(),
        }
    }
}

/// Value terms. Variables are de Bruijn indices; the name is a hint.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Var(usize, Name),
    Unit,
    Thunk(Box<Comp>),
    Pair(Box<Value>, Box<Value>),
    Inl(Box<Value>),
    Inr(Box<Value>),
    /// Shared value pair `<V, V>`.
    With(Box<Value>, Box<Value>),
    Fst(Box<Value>),
    Snd(Box<Value>),
    /// Type ascription `(V : A)`.
    Ann(Box<Value>, ValType),
}

/// Computation terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Comp {
    /// `\x^q. M`, with an optional binder type.
    Lam(Name, Option<Grade>, Option<ValType>, Box<Comp>),
    App(Box<Comp>, Value),
    Force(Value),
    Return(Option<Grade>, Value),
    Let(Name, Option<Grade>, Box<Comp>, Box<Comp>),
    /// `case^q V of (x, y) -> M`.
    Split(Option<Grade>, Value, Name, Name, Box<Comp>),
    Seq(Value, Box<Comp>),
    /// `case^q V of inl x -> M | inr y -> N`.
    Case(Option<Grade>, Value, Name, Box<Comp>, Name, Box<Comp>),
    /// `<M, N>`.
    CPair(Box<Comp>, Box<Comp>),
    CFst(Box<Comp>),
    CSnd(Box<Comp>),
    /// `(M, N)`, a disjoint computation product.
    Tensor(Box<Comp>, Box<Comp>),
    /// `case^q M of (x, y) -> N` over a computation product.
    TSplit(Option<Grade>, Box<Comp>, Name, Name, Box<Comp>),
    /// A primitive operation such as `tick`.
    Prim(String),
}

/// Either syntactic class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Value(Value),
    Comp(Comp),
}

/// A typing context: an ordered telescope of named value types.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Context {
    pub entries: Vec<(Name, ValType)>,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, name: impl Into<Name>, ty: ValType) {
        self.entries.push((name.into(), ty));
    }

    pub fn with(mut self, name: &str, ty: ValType) -> Self {
        self.push(Name::new(name), ty);
        self
    }

    /// Type of de Bruijn index `i`.
    pub fn lookup(&self, i: usize) -> Option<&ValType> {
        self.entries.len().checked_sub(i + 1).map(|k| &self.entries[k].1)
    }

    /// Position in `entries` of de Bruijn index `i`.
    pub fn level(&self, i: usize) -> Option<usize> {
        self.entries.len().checked_sub(i + 1)
    }

    pub fn names(&self) -> Vec<String> {
        self.entries.iter().map(|(n, _)| n.0.clone()).collect()
    }
}

impl From<String> for Name {
    fn from(s: String) -> Self {
        Name(s)
    }
}

/// A parsed `.cbpv` program.
#[derive(Clone, Debug)]
pub struct Program {
    pub mode: Mode,
    pub context: Context,
    pub body: Comp,
}

impl Value {
    pub fn var(i: usize, name: &str) -> Self {
        Value::Var(i, Name::new(name))
    }

    pub fn thunk(m: Comp) -> Self {
        Value::Thunk(Box::new(m))
    }

    pub fn pair(a: Value, b: Value) -> Self {
        Value::Pair(Box::new(a), Box::new(b))
    }

    pub fn inl(v: Value) -> Self {
        Value::Inl(Box::new(v))
    }

    pub fn inr(v: Value) -> Self {
        Value::Inr(Box::new(v))
    }

    pub fn with(a: Value, b: Value) -> Self {
        Value::With(Box::new(a), Box::new(b))
    }

    pub fn ann(v: Value, a: ValType) -> Self {
        Value::Ann(Box::new(v), a)
    }

    /// Shifts free indices at or above `cutoff` by `by`.
    pub fn shift(&self, by: usize, cutoff: usize) -> Value {
        match self {
            Value::Var(i, n) if *i >= cutoff => Value::Var(i + by, n.clone()),
            Value::Var(..) | Value::Unit => self.clone(),
            Value::Thunk(m) => Value::thunk(m.shift(by, cutoff)),
            Value::Pair(a, b) => Value::pair(a.shift(by, cutoff), b.shift(by, cutoff)),
            Value::Inl(v) => Value::inl(v.shift(by, cutoff)),
            Value::Inr(v) => Value::inr(v.shift(by, cutoff)),
            Value::With(a, b) => Value::with(a.shift(by, cutoff), b.shift(by, cutoff)),
            Value::Fst(v) => Value::Fst(Box::new(v.shift(by, cutoff))),
            Value::Snd(v) => Value::Snd(Box::new(v.shift(by, cutoff))),
            Value::Ann(v, t) => Value::ann(v.shift(by, cutoff), t.clone()),
        }
    }

    /// Largest free index plus one, or zero when closed.
    pub fn free_bound(&self) -> usize {
        match self {
            Value::Var(i, _) => i + 1,
            Value::Unit => 0,
            Value::Thunk(m) => m.free_bound(),
            Value::Pair(a, b) | Value::With(a, b) => a.free_bound().max(b.free_bound()),
            Value::Inl(v) | Value::Inr(v) | Value::Fst(v) | Value::Snd(v) | Value::Ann(v, _) => {
                v.free_bound()
            }
        }
    }

    pub fn size(&self) -> usize {
        1 + match self {
            Value::Var(..) | Value::Unit => 0,
            Value::Thunk(m) => m.size(),
            Value::Pair(a, b) | Value::With(a, b) => a.size() + b.size(),
            Value::Inl(v) | Value::Inr(v) | Value::Fst(v) | Value::Snd(v) | Value::Ann(v, _) => {
                v.size()
            }
        }
    }
}

impl Comp {
    pub fn lam(x: &str, q: Option<Grade>, m: Comp) -> Self {
        Comp::Lam(Name::new(x), q, None, Box::new(m))
    }

    pub fn app(m: Comp, v: Value) -> Self {
        Comp::App(Box::new(m), v)
    }

    pub fn ret(q: Option<Grade>, v: Value) -> Self {
        Comp::Return(q, v)
    }

    pub fn let_(x: &str, q: Option<Grade>, m: Comp, n: Comp) -> Self {
        Comp::Let(Name::new(x), q, Box::new(m), Box::new(n))
    }

    pub fn seq(v: Value, m: Comp) -> Self {
        Comp::Seq(v, Box::new(m))
    }

    pub fn split(q: Option<Grade>, v: Value, x: &str, y: &str, m: Comp) -> Self {
        Comp::Split(q, v, Name::new(x), Name::new(y), Box::new(m))
    }

    pub fn case(q: Option<Grade>, v: Value, x: &str, l: Comp, y: &str, r: Comp) -> Self {
        Comp::Case(q, v, Name::new(x), Box::new(l), Name::new(y), Box::new(r))
    }

    pub fn cpair(a: Comp, b: Comp) -> Self {
        Comp::CPair(Box::new(a), Box::new(b))
    }

    pub fn tensor(a: Comp, b: Comp) -> Self {
        Comp::Tensor(Box::new(a), Box::new(b))
    }

    pub fn tsplit(q: Option<Grade>, m: Comp, x: &str, y: &str, n: Comp) -> Self {
        Comp::TSplit(q, Box::new(m), Name::new(x), Name::new(y), Box::new(n))
    }

    pub fn tick() -> Self {
        Comp::Prim("tick".to_string())
    }

    pub fn shift(&self, by: usize, c: usize) -> Comp {
        let b = |m: &Comp, k: usize| Box::new(m.shift(by, c + k));
        match self {
            Comp::Lam(x, q, t, m) => Comp::Lam(x.clone(), *q, t.clone(), b(m, 1)),
            Comp::App(m, v) => Comp::App(b(m, 0), v.shift(by, c)),
            Comp::Force(v) => Comp::Force(v.shift(by, c)),
            Comp::Return(q, v) => Comp::Return(*q, v.shift(by, c)),
            Comp::Let(x, q, m, n) => Comp::Let(x.clone(), *q, b(m, 0), b(n, 1)),
            Comp::Split(q, v, x, y, m) => {
                Comp::Split(*q, v.shift(by, c), x.clone(), y.clone(), b(m, 2))
            }
            Comp::Seq(v, m) => Comp::Seq(v.shift(by, c), b(m, 0)),
            Comp::Case(q, v, x, l, y, r) => {
                Comp::Case(*q, v.shift(by, c), x.clone(), b(l, 1), y.clone(), b(r, 1))
            }
            Comp::CPair(l, r) => Comp::CPair(b(l, 0), b(r, 0)),
            Comp::CFst(m) => Comp::CFst(b(m, 0)),
            Comp::CSnd(m) => Comp::CSnd(b(m, 0)),
            Comp::Tensor(l, r) => Comp::Tensor(b(l, 0), b(r, 0)),
            Comp::TSplit(q, m, x, y, n) => Comp::TSplit(*q, b(m, 0), x.clone(), y.clone(), b(n, 2)),
            Comp::Prim(p) => Comp::Prim(p.clone()),
        }
    }

    pub fn free_bound(&self) -> usize {
        let under = |m: &Comp, k: usize| m.free_bound().saturating_sub(k);
        match self {
            Comp::Lam(_, _, _, m) => under(m, 1),
            Comp::App(m, v) => m.free_bound().max(v.free_bound()),
            Comp::Force(v) | Comp::Return(_, v) => v.free_bound(),
            Comp::Let(_, _, m, n) => m.free_bound().max(under(n, 1)),
            Comp::Split(_, v, _, _, m) => v.free_bound().max(under(m, 2)),
            Comp::Seq(v, m) => v.free_bound().max(m.free_bound()),
            Comp::Case(_, v, _, l, _, r) => v.free_bound().max(under(l, 1)).max(under(r, 1)),
            Comp::CPair(l, r) | Comp::Tensor(l, r) => l.free_bound().max(r.free_bound()),
            Comp::CFst(m) | Comp::CSnd(m) => m.free_bound(),
            Comp::TSplit(_, m, _, _, n) => m.free_bound().max(under(n, 2)),
            Comp::Prim(_) => 0,
        }
    }

    pub fn size(&self) -> usize {
        1 + match self {
            Comp::Lam(_, _, _, m) | Comp::CFst(m) | Comp::CSnd(m) => m.size(),
            Comp::App(m, v) | Comp::Seq(v, m) => m.size() + v.size(),
            Comp::Force(v) | Comp::Return(_, v) => v.size(),
            Comp::Let(_, _, m, n)
            | Comp::CPair(m, n)
            | Comp::Tensor(m, n)
            | Comp::TSplit(_, m, _, _, n) => m.size() + n.size(),
            Comp::Split(_, v, _, _, m) => v.size() + m.size(),
            Comp::Case(_, v, _, l, _, r) => v.size() + l.size() + r.size(),
            Comp::Prim(_) => 0,
        }
    }
}

/// Equality up to renaming of bound variables.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    a == b
}
