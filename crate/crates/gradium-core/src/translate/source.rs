//! Abstract syntax of the four source λ-calculi and their printer.

use std::fmt;

use crate::grading::{Effect, Grade};

/// The annotation an arrow carries in each calculus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Latent {
    /// Unannotated arrow of the monadic calculus.
    Plain,
    /// Latent effect, `τ ->^φ τ`.
    Eff(Effect),
    /// Demand on the argument, `τ ->^q τ`.
    Co(Grade),
    /// Linear arrow, `τ -o τ`.
    Linear,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SType {
    Unit,
    Fun(Latent, Box<SType>, Box<SType>),
    Tensor(Box<SType>, Box<SType>),
    With(Box<SType>, Box<SType>),
    Sum(Box<SType>, Box<SType>),
    /// Graded monad `T^φ τ`.
    Monad(Effect, Box<SType>),
    /// Graded comonad `Box^q τ`.
    Boxed(Grade, Box<SType>),
}

impl SType {
    pub fn fun(l: Latent, a: SType, b: SType) -> Self {
        SType::Fun(l, Box::new(a), Box::new(b))
    }

    pub fn tensor(a: SType, b: SType) -> Self {
        SType::Tensor(Box::new(a), Box::new(b))
    }

    pub fn with(a: SType, b: SType) -> Self {
        SType::With(Box::new(a), Box::new(b))
    }

    pub fn sum(a: SType, b: SType) -> Self {
        SType::Sum(Box::new(a), Box::new(b))
    }

    pub fn monad(e: Effect, a: SType) -> Self {
        SType::Monad(e, Box::new(a))
    }

    pub fn boxed(q: Grade, a: SType) -> Self {
        SType::Boxed(q, Box::new(a))
    }
}

/// A source binder in `extend`: `x^q = e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtBind {
    pub name: String,
    pub grade: Grade,
    pub rhs: STerm,
}

/// Source terms. Variables are named; shadowing resolves to the innermost
/// binder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum STerm {
    Var(String),
    Unit,
    Tick,
    Lam(String, Option<Grade>, SType, Box<STerm>),
    App(Box<STerm>, Box<STerm>),
    Seq(Box<STerm>, Box<STerm>),
    Pair(Box<STerm>, Box<STerm>),
    /// `let^q (x, y) = e1 in e2`.
    Split(Option<Grade>, String, String, Box<STerm>, Box<STerm>),
    WPair(Box<STerm>, Box<STerm>),
    Fst(Box<STerm>),
    Snd(Box<STerm>),
    /// Injection with the whole sum type ascribed.
    Inl(SType, Box<STerm>),
    Inr(SType, Box<STerm>),
    Case(Option<Grade>, Box<STerm>, String, Box<STerm>, String, Box<STerm>),
    Return(Box<STerm>),
    Bind(String, Box<STerm>, Box<STerm>),
    BoxI(Grade, Box<STerm>),
    Unbox(Grade, String, Box<STerm>, Box<STerm>),
    Extract(Box<STerm>),
    Extend(Grade, Vec<ExtBind>, Box<STerm>),
    Divide(String, Grade, String, Grade, Box<STerm>, Box<STerm>),
    Discard(Box<STerm>, Box<STerm>),
}

fn b(e: STerm) -> Box<STerm> {
    Box::new(e)
}

impl STerm {
    pub fn var(x: &str) -> Self {
        STerm::Var(x.to_string())
    }

    pub fn lam(x: &str, q: Option<Grade>, t: SType, body: STerm) -> Self {
        STerm::Lam(x.to_string(), q, t, b(body))
    }

    pub fn app(f: STerm, a: STerm) -> Self {
        STerm::App(b(f), b(a))
    }

    pub fn seq(a: STerm, c: STerm) -> Self {
        STerm::Seq(b(a), b(c))
    }

    pub fn pair(a: STerm, c: STerm) -> Self {
        STerm::Pair(b(a), b(c))
    }

    pub fn split(q: Option<Grade>, x: &str, y: &str, e: STerm, body: STerm) -> Self {
        STerm::Split(q, x.to_string(), y.to_string(), b(e), b(body))
    }

    pub fn wpair(a: STerm, c: STerm) -> Self {
        STerm::WPair(b(a), b(c))
    }

    pub fn case(q: Option<Grade>, e: STerm, x: &str, l: STerm, y: &str, r: STerm) -> Self {
        STerm::Case(q, b(e), x.to_string(), b(l), y.to_string(), b(r))
    }

    pub fn ret(e: STerm) -> Self {
        STerm::Return(b(e))
    }

    pub fn bind(x: &str, e: STerm, body: STerm) -> Self {
        STerm::Bind(x.to_string(), b(e), b(body))
    }

    pub fn boxi(q: Grade, e: STerm) -> Self {
        STerm::BoxI(q, b(e))
    }

    pub fn unbox(q: Grade, x: &str, e: STerm, body: STerm) -> Self {
        STerm::Unbox(q, x.to_string(), b(e), b(body))
    }

    pub fn extract(e: STerm) -> Self {
        STerm::Extract(b(e))
    }

    pub fn divide(x: &str, q1: Grade, y: &str, q2: Grade, e: STerm, body: STerm) -> Self {
        STerm::Divide(x.to_string(), q1, y.to_string(), q2, b(e), b(body))
    }

    pub fn discard(e: STerm, body: STerm) -> Self {
        STerm::Discard(b(e), b(body))
    }

    /// Number of syntax nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Immediate subterms, left to right.
    pub fn children(&self) -> Vec<&STerm> {
        match self {
            STerm::Var(_) | STerm::Unit | STerm::Tick => vec![],
            STerm::Lam(.., e)
            | STerm::Fst(e)
            | STerm::Snd(e)
            | STerm::Inl(_, e)
            | STerm::Inr(_, e)
            | STerm::Return(e)
            | STerm::BoxI(_, e)
            | STerm::Extract(e) => vec![e],
            STerm::App(a, c)
            | STerm::Seq(a, c)
            | STerm::Pair(a, c)
            | STerm::WPair(a, c)
            | STerm::Split(_, _, _, a, c)
            | STerm::Bind(_, a, c)
            | STerm::Unbox(_, _, a, c)
            | STerm::Divide(_, _, _, _, a, c)
            | STerm::Discard(a, c) => vec![a, c],
            STerm::Case(_, s, _, l, _, r) => vec![s, l, r],
            STerm::Extend(_, bs, body) => bs.iter().map(|x| &x.rhs).chain([&**body]).collect(),
        }
    }
}

// ---- printing ----

impl fmt::Display for Latent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Latent::Plain => f.write_str("->"),
            Latent::Eff(e) => write!(f, "->^{e}"),
            Latent::Co(q) => write!(f, "->^{q}"),
            Latent::Linear => f.write_str("-o"),
        }
    }
}

struct TSum<'a>(&'a SType);
struct TProd<'a>(&'a SType);
struct TAtom<'a>(&'a SType);

impl fmt::Display for SType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SType::Fun(l, a, c) => write!(f, "{} {l} {c}", TSum(a)),
            t => write!(f, "{}", TSum(t)),
        }
    }
}

impl fmt::Display for TSum<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            SType::Sum(a, c) => write!(f, "{} + {}", TSum(a), TProd(c)),
            t => write!(f, "{}", TProd(t)),
        }
    }
}

impl fmt::Display for TProd<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            SType::Tensor(a, c) => write!(f, "{} * {}", TProd(a), TAtom(c)),
            SType::With(a, c) => write!(f, "{} & {}", TProd(a), TAtom(c)),
            t => write!(f, "{}", TAtom(t)),
        }
    }
}

impl fmt::Display for TAtom<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            SType::Unit => f.write_str("Unit"),
            SType::Monad(e, a) => write!(f, "T^{e} {}", TAtom(a)),
            SType::Boxed(q, a) => write!(f, "Box^{q} {}", TAtom(a)),
            t => write!(f, "({t})"),
        }
    }
}

/// Syntactic level of a term: 0 binds loosest.
fn level(e: &STerm) -> u8 {
    match e {
        STerm::Var(_)
        | STerm::Unit
        | STerm::Tick
        | STerm::Pair(..)
        | STerm::WPair(..)
        | STerm::Fst(_)
        | STerm::Snd(_) => 2,
        STerm::App(..) | STerm::Return(_) | STerm::BoxI(..) | STerm::Extract(_) => 1,
        _ => 0,
    }
}

struct At<'a>(&'a STerm, u8);

impl fmt::Display for At<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if level(self.0) < self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

fn grade_opt(f: &mut fmt::Formatter<'_>, q: &Option<Grade>) -> fmt::Result {
    match q {
        Some(q) => write!(f, "^{q}"),
        None => Ok(()),
    }
}

impl fmt::Display for STerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            STerm::Var(x) => f.write_str(x),
            STerm::Unit => f.write_str("()"),
            STerm::Tick => f.write_str("tick"),
            STerm::Lam(x, q, t, body) => {
                write!(f, "\\{x}")?;
                grade_opt(f, q)?;
                write!(f, " : {t}. {body}")
            }
            STerm::App(a, c) => write!(f, "{} {}", At(a, 1), At(c, 2)),
            STerm::Seq(a, c) => write!(f, "{}; {c}", At(a, 1)),
            STerm::Pair(a, c) => write!(f, "({a}, {c})"),
            STerm::Split(q, x, y, e, body) => {
                f.write_str("let")?;
                grade_opt(f, q)?;
                write!(f, " ({x}, {y}) = {e} in {body}")
            }
            STerm::WPair(a, c) => write!(f, "<{a}, {c}>"),
            STerm::Fst(e) => write!(f, "{}.1", At(e, 2)),
            STerm::Snd(e) => write!(f, "{}.2", At(e, 2)),
            STerm::Inl(t, e) => write!(f, "inl {} : {t}", At(e, 1)),
            STerm::Inr(t, e) => write!(f, "inr {} : {t}", At(e, 1)),
            STerm::Case(q, s, x, l, y, r) => {
                f.write_str("case")?;
                grade_opt(f, q)?;
                write!(f, " {} of inl {x} -> {} | inr {y} -> {r}", At(s, 1), At(l, 1))
            }
            STerm::Return(e) => write!(f, "return {}", At(e, 2)),
            STerm::Bind(x, e, body) => write!(f, "bind {x} = {e} in {body}"),
            STerm::BoxI(q, e) => write!(f, "box^{q} {}", At(e, 2)),
            STerm::Unbox(q, x, e, body) => write!(f, "unbox^{q} {x} = {e} in {body}"),
            STerm::Extract(e) => write!(f, "extract {}", At(e, 2)),
            STerm::Extend(q, bs, body) => {
                write!(f, "extend^{q}")?;
                for (k, x) in bs.iter().enumerate() {
                    f.write_str(if k > 0 { ", " } else { " " })?;
                    write!(f, "{}^{} = {}", x.name, x.grade, x.rhs)?;
                }
                write!(f, " in {body}")
            }
            STerm::Divide(x, q1, y, q2, e, body) => write!(f, "divide {x}^{q1}, {y}^{q2} = {e} in {body}"),
            STerm::Discard(e, body) => write!(f, "discard _ = {e} in {body}"),
        }
    }
}
