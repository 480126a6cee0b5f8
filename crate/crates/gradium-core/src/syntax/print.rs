use std::fmt::{self, Write};

use super::ast::*;

const RESERVED: &[&str] = &["return", "let", "in", "case", "of", "inl", "inr", "U", "F", "Unit"];

impl fmt::Display for ValType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValType::Sum(a, b) => write!(f, "{a} + {}", Prod(b)),
            t => write!(f, "{}", Prod(t)),
        }
    }
}

struct Prod<'a>(&'a ValType);
struct VAtom<'a>(&'a ValType);
struct CAtom<'a>(&'a CompType);

impl fmt::Display for Prod<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            ValType::Prod(a, b) => write!(f, "{} * {}", Prod(a), VAtom(b)),
            ValType::With(a, b) => write!(f, "{} & {}", Prod(a), VAtom(b)),
            t => write!(f, "{}", VAtom(t)),
        }
    }
}

impl fmt::Display for VAtom<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            ValType::Unit => f.write_str("Unit"),
            ValType::Base(s) => f.write_str(s),
            ValType::Meta(n) => write!(f, "?{n}"),
            ValType::U(e, b) => {
                f.write_str("U")?;
                if let Some(e) = e {
                    write!(f, "^{e}")?;
                }
                write!(f, " {}", CAtom(b))
            }
            t => write!(f, "({t})"),
        }
    }
}

impl fmt::Display for CompType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompType::Arrow(q, a, b) => {
                write!(f, "{a} ->")?;
                if let Some(q) = q {
                    write!(f, "^{q}")?;
                }
                write!(f, " {b}")
            }
            CompType::With(a, b) => write!(f, "{} & {}", CProd(a), CAtom(b)),
            CompType::Tensor(a, b) => write!(f, "{} * {}", CProd(a), CAtom(b)),
            t => write!(f, "{}", CAtom(t)),
        }
    }
}

struct CProd<'a>(&'a CompType);

impl fmt::Display for CProd<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            CompType::With(..) | CompType::Tensor(..) => write!(f, "{}", self.0),
            t => write!(f, "{}", CAtom(t)),
        }
    }
}

impl fmt::Display for CAtom<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            CompType::F(q, a) => {
                f.write_str("F")?;
                if let Some(q) = q {
                    write!(f, "^{q}")?;
                }
                write!(f, " {}", VAtom(a))
            }
            t => write!(f, "({t})"),
        }
    }
}

/// Renders terms with binder names made unique against everything in
/// scope, so the output parses back to the same term.
pub struct Printer {
    scope: Vec<String>,
    out: String,
}

impl Printer {
    pub fn new(scope: &[String]) -> Self {
        Self {
            scope: scope.to_vec(),
            out: String::new(),
        }
    }

    fn fresh(&self, hint: &str) -> String {
        let base: String = {
            let b = hint.trim_end_matches(|c: char| c.is_ascii_digit());
            if b.is_empty() || !b.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') {
                "x".into()
            } else {
                b.into()
            }
        };
        let taken = |s: &str| self.scope.iter().any(|n| n == s) || RESERVED.contains(&s) || s == "tick" || s == "w";
        if !taken(hint) && !hint.is_empty() && hint.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_') {
            return hint.to_string();
        }
        (1..).map(|k| format!("{base}{k}")).find(|s| !taken(s)).unwrap()
    }

    fn bind(&mut self, hint: &Name) -> String {
        let x = self.fresh(hint.as_str());
        self.scope.push(x.clone());
        x
    }

    fn var(&self, i: usize, hint: &Name) -> String {
        if i < self.scope.len() {
            self.scope[self.scope.len() - 1 - i].clone()
        } else {
            format!("{}#{}", hint, i - self.scope.len())
        }
    }

    fn ann<T: fmt::Display>(&mut self, q: &Option<T>) {
        if let Some(q) = q {
            let _ = write!(self.out, "^{q}");
        }
    }

    pub fn value(&mut self, v: &Value) {
        match v {
            Value::Inl(w) | Value::Inr(w) => {
                self.out.push_str(if matches!(v, Value::Inl(_)) { "inl " } else { "inr " });
                self.value_postfix(w);
            }
            Value::Ann(w, t) if matches!(**w, Value::Inl(_) | Value::Inr(_)) => {
                self.value(w);
                let _ = write!(self.out, " : {t}");
            }
            _ => self.value_postfix(v),
        }
    }

    fn value_postfix(&mut self, v: &Value) {
        match v {
            Value::Fst(w) | Value::Snd(w) => {
                self.value_postfix(w);
                self.out.push_str(if matches!(v, Value::Fst(_)) { ".1" } else { ".2" });
            }
            _ => self.value_atom(v),
        }
    }

    fn value_atom(&mut self, v: &Value) {
        match v {
            Value::Var(i, n) => {
                let s = self.var(*i, n);
                self.out.push_str(&s);
            }
            Value::Unit => self.out.push_str("()"),
            Value::Thunk(m) => {
                self.out.push('{');
                self.comp(m);
                self.out.push('}');
            }
            Value::Pair(a, b) => {
                self.out.push('(');
                self.value(a);
                self.out.push_str(", ");
                self.value(b);
                self.out.push(')');
            }
            Value::With(a, b) => {
                self.out.push('<');
                self.value(a);
                self.out.push_str(", ");
                self.value(b);
                self.out.push('>');
            }
            Value::Ann(w, t) => {
                self.out.push('(');
                self.value(w);
                let _ = write!(self.out, " : {t})");
            }
            Value::Fst(_) | Value::Snd(_) => self.value_postfix(v),
            Value::Inl(_) | Value::Inr(_) => {
                self.out.push('(');
                self.value(v);
                self.out.push(')');
            }
        }
    }

    pub fn comp(&mut self, m: &Comp) {
        match m {
            Comp::Lam(x, q, t, body) => {
                let n = self.fresh(x.as_str());
                let _ = write!(self.out, "\\{n}");
                self.ann(q);
                if let Some(t) = t {
                    let _ = write!(self.out, " : {t}");
                }
                self.out.push_str(". ");
                self.scope.push(n);
                self.comp(body);
                self.scope.pop();
            }
            Comp::Let(x, q, a, b) => {
                let n = self.fresh(x.as_str());
                let _ = write!(self.out, "let {n} <-");
                self.ann(q);
                self.out.push(' ');
                self.comp(a);
                self.out.push_str(" in ");
                self.scope.push(n);
                self.comp(b);
                self.scope.pop();
            }
            Comp::Seq(v, b) => {
                self.value(v);
                self.out.push_str("; ");
                self.comp(b);
            }
            Comp::Split(q, v, x, y, b) => {
                self.out.push_str("case");
                self.ann(q);
                self.out.push(' ');
                self.value(v);
                self.split_alt(x, y, b);
            }
            Comp::TSplit(q, s, x, y, b) => {
                self.out.push_str("case");
                self.ann(q);
                self.out.push(' ');
                self.comp_app(s);
                self.split_alt(x, y, b);
            }
            Comp::Case(q, v, x, l, y, r) => {
                self.out.push_str("case");
                self.ann(q);
                self.out.push(' ');
                self.value(v);
                let a = self.bind(x);
                let _ = write!(self.out, " of inl {a} -> ");
                self.comp(l);
                self.scope.pop();
                let b = self.bind(y);
                let _ = write!(self.out, " | inr {b} -> ");
                self.comp(r);
                self.scope.pop();
            }
            Comp::Return(q, v) => {
                self.out.push_str("return");
                self.ann(q);
                self.out.push(' ');
                self.value(v);
            }
            _ => self.comp_app(m),
        }
    }

    fn split_alt(&mut self, x: &Name, y: &Name, body: &Comp) {
        let a = self.bind(x);
        let b = self.bind(y);
        let _ = write!(self.out, " of ({a}, {b}) -> ");
        self.comp(body);
        self.scope.truncate(self.scope.len() - 2);
    }

    fn comp_app(&mut self, m: &Comp) {
        match m {
            Comp::App(h, v) => {
                self.comp_app(h);
                self.out.push(' ');
                self.value_postfix_arg(v);
            }
            Comp::CFst(h) | Comp::CSnd(h) => {
                self.comp_app(h);
                self.out.push_str(if matches!(m, Comp::CFst(_)) { ".1" } else { ".2" });
            }
            _ => self.comp_atom(m),
        }
    }

    fn value_postfix_arg(&mut self, v: &Value) {
        match v {
            Value::Inl(_) | Value::Inr(_) => self.value_atom(v),
            Value::Ann(w, _) if matches!(**w, Value::Inl(_) | Value::Inr(_)) => {
                self.out.push('(');
                self.value(v);
                self.out.push(')');
            }
            _ => self.value_postfix(v),
        }
    }

    fn comp_atom(&mut self, m: &Comp) {
        match m {
            Comp::Force(v) => {
                self.value_postfix_arg(v);
                self.out.push('!');
            }
            Comp::Prim(p) => self.out.push_str(p),
            Comp::CPair(a, b) => {
                self.out.push('<');
                self.comp(a);
                self.out.push_str(", ");
                self.comp(b);
                self.out.push('>');
            }
            Comp::Tensor(a, b) => {
                self.out.push('(');
                self.comp(a);
                self.out.push_str(", ");
                self.comp(b);
                self.out.push(')');
            }
            _ => {
                self.out.push('(');
                self.comp(m);
                self.out.push(')');
            }
        }
    }

    pub fn finish(self) -> String {
        self.out
    }
}

/// Prints a computation whose free indices refer to `scope` (innermost last).
pub fn show_comp(m: &Comp, scope: &[String]) -> String {
    let mut p = Printer::new(scope);
    p.comp(m);
    p.finish()
}

pub fn show_value(v: &Value, scope: &[String]) -> String {
    let mut p = Printer::new(scope);
    p.value(v);
    p.finish()
}

impl fmt::Display for Comp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&show_comp(self, &[]))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&show_value(self, &[]))
    }
}
