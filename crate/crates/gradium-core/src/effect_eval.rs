//! Big-step environment semantics with exact effect accounting.

use std::fmt;

use crate::diag::{EvalError, Fuel};
use crate::env::{slot_names, Env};
use crate::grading::{Effect, EffectAlgebra};
use crate::syntax::{show_comp, Comp, Value};

/// Closed values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Closed<'a> {
    Unit,
    Pair(Box<Closed<'a>>, Box<Closed<'a>>),
    Inl(Box<Closed<'a>>),
    Inr(Box<Closed<'a>>),
    /// `clo(ρ, {M})`.
    Thunk(Env<Closed<'a>>, &'a Comp),
}

pub type EEnv<'a> = Env<Closed<'a>>;

/// Terminal computations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Terminal<'a> {
    Return(Closed<'a>),
    /// `clo(ρ, λx.M)`; holds the λ node.
    Lam(EEnv<'a>, &'a Comp),
    /// `clo(ρ, <M1, M2>)`; holds the pair node.
    CPair(EEnv<'a>, &'a Comp),
}

fn show_env(f: &mut fmt::Formatter<'_>, env: &EEnv<'_>) -> fmt::Result {
    f.write_str("[")?;
    for (k, w) in env.to_outer().into_iter().enumerate() {
        if k > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{w}")?;
    }
    f.write_str("]")
}

impl fmt::Display for Closed<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Closed::Unit => f.write_str("()"),
            Closed::Pair(a, b) => write!(f, "({a}, {b})"),
            Closed::Inl(w) => write!(f, "inl {w}"),
            Closed::Inr(w) => write!(f, "inr {w}"),
            Closed::Thunk(env, m) => {
                f.write_str("clo(")?;
                show_env(f, env)?;
                write!(f, ", {{{}}})", show_comp(m, &slot_names(env.len())))
            }
        }
    }
}

impl fmt::Display for Terminal<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Terminal::Return(w) => write!(f, "return {w}"),
            Terminal::Lam(env, m) | Terminal::CPair(env, m) => {
                f.write_str("clo(")?;
                show_env(f, env)?;
                write!(f, ", {})", show_comp(m, &slot_names(env.len())))
            }
        }
    }
}

struct Eval<'e> {
    alg: &'e EffectAlgebra,
    fuel: Fuel,
    acc: Effect,
}

fn stuck(what: &str) -> EvalError {
    EvalError::Stuck(what.to_string())
}

impl Eval<'_> {
    fn value<'a>(&mut self, env: &EEnv<'a>, v: &'a Value) -> Result<Closed<'a>, EvalError> {
        self.fuel.tick()?;
        Ok(match v {
            Value::Var(i, n) => env.get(*i).cloned().ok_or_else(|| stuck(&format!("unbound variable `{n}`")))?,
            Value::Unit => Closed::Unit,
            Value::Thunk(m) => Closed::Thunk(env.clone(), m),
            Value::Pair(a, b) => Closed::Pair(Box::new(self.value(env, a)?), Box::new(self.value(env, b)?)),
            Value::Inl(w) => Closed::Inl(Box::new(self.value(env, w)?)),
            Value::Inr(w) => Closed::Inr(Box::new(self.value(env, w)?)),
            Value::Ann(w, _) => self.value(env, w)?,
            Value::With(..) | Value::Fst(_) | Value::Snd(_) => return Err(stuck("shared product in effect mode")),
        })
    }

    fn comp<'a>(&mut self, env: &EEnv<'a>, m: &'a Comp) -> Result<Terminal<'a>, EvalError> {
        self.fuel.tick()?;
        match m {
            Comp::Prim(p) => {
                let e = self.alg.prim(p).ok_or_else(|| stuck(&format!("unknown primitive `{p}`")))?;
                self.acc = self.alg.combine(self.acc, e).map_err(|e| EvalError::Stuck(e.to_string()))?;
                Ok(Terminal::Return(Closed::Unit))
            }
            Comp::Lam(..) => Ok(Terminal::Lam(env.clone(), m)),
            Comp::CPair(..) => Ok(Terminal::CPair(env.clone(), m)),
            Comp::App(f, v) => match self.comp(env, f)? {
                Terminal::Lam(cenv, Comp::Lam(_, _, _, body)) => {
                    let w = self.value(env, v)?;
                    self.comp(&cenv.push(w), body)
                }
                _ => Err(stuck("application of a non-function")),
            },
            Comp::Force(v) => match self.value(env, v)? {
                Closed::Thunk(cenv, body) => self.comp(&cenv, body),
                _ => Err(stuck("force of a non-thunk")),
            },
            Comp::Return(_, v) => Ok(Terminal::Return(self.value(env, v)?)),
            Comp::Let(_, _, a, b) => match self.comp(env, a)? {
                Terminal::Return(w) => self.comp(&env.push(w), b),
                _ => Err(stuck("let of a non-returner")),
            },
            Comp::Split(_, v, _, _, n) => match self.value(env, v)? {
                Closed::Pair(a, b) => self.comp(&env.push(*a).push(*b), n),
                _ => Err(stuck("split of a non-pair")),
            },
            Comp::Seq(v, n) => match self.value(env, v)? {
                Closed::Unit => self.comp(env, n),
                _ => Err(stuck("sequence on a non-unit")),
            },
            Comp::Case(_, v, _, l, _, r) => match self.value(env, v)? {
                Closed::Inl(w) => self.comp(&env.push(*w), l),
                Closed::Inr(w) => self.comp(&env.push(*w), r),
                _ => Err(stuck("case of a non-sum")),
            },
            Comp::CFst(p) | Comp::CSnd(p) => match self.comp(env, p)? {
                Terminal::CPair(cenv, Comp::CPair(a, b)) => {
                    self.comp(&cenv, if matches!(m, Comp::CFst(_)) { a } else { b })
                }
                _ => Err(stuck("projection from a non-pair")),
            },
            Comp::Tensor(..) | Comp::TSplit(..) => Err(stuck("computation product in effect mode")),
        }
    }
}

/// Closes a value under an environment.
pub fn eval_value<'a>(alg: &EffectAlgebra, env: &EEnv<'a>, v: &'a Value, budget: u64) -> Result<Closed<'a>, EvalError> {
    let mut ev = Eval {
        alg,
        fuel: Fuel::new(budget),
        acc: alg.unit(),
    };
    ev.value(env, v)
}

/// Runs a computation to a terminal, returning the accumulated effect.
pub fn eval_comp<'a>(
    alg: &EffectAlgebra,
    env: &EEnv<'a>,
    m: &'a Comp,
    budget: u64,
) -> Result<(Terminal<'a>, Effect), EvalError> {
    let mut ev = Eval {
        alg,
        fuel: Fuel::new(budget),
        acc: alg.unit(),
    };
    let t = ev.comp(env, m)?;
    Ok((t, ev.acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diag::DEFAULT_STEP_BUDGET;
    use crate::syntax::{parse_comp, parse_value, Grades};

    fn run(src: &str) -> (String, u64) {
        let a = EffectAlgebra::nat_cost();
        let m = parse_comp(src, Grades::Effect(&a), &[]).unwrap();
        let (t, e) = eval_comp(&a, &Env::new(), &m, DEFAULT_STEP_BUDGET).unwrap();
        (t.to_string(), e.raw())
    }

    #[test]
    fn counts_ticks() {
        assert_eq!(run("let x <- tick in tick"), ("return ()".into(), 2));
        assert_eq!(run("<tick, let y <- tick in tick>.1"), ("return ()".into(), 1));
        assert_eq!(run("<tick, let y <- tick in tick>.2"), ("return ()".into(), 2));
        assert_eq!(run("return ()"), ("return ()".into(), 0));
    }

    #[test]
    fn closes_values() {
        let a = EffectAlgebra::nat_cost();
        let env = Env::from_outer([Closed::Unit]);
        let scope = ["x".to_string()];
        let v = parse_value("x", Grades::Effect(&a), &scope).unwrap();
        assert_eq!(eval_value(&a, &env, &v, 100).unwrap(), Closed::Unit);
        let v = parse_value("(x, ())", Grades::Effect(&a), &scope).unwrap();
        assert_eq!(eval_value(&a, &env, &v, 100).unwrap().to_string(), "((), ())");
        let v = parse_value("{tick}", Grades::Effect(&a), &[]).unwrap();
        assert_eq!(eval_value(&a, &Env::new(), &v, 100).unwrap().to_string(), "clo([], {tick})");
    }

    #[test]
    fn closures_and_budget() {
        assert_eq!(run("\\x. tick").0, "clo([], \\x. tick)");
        assert_eq!(run("(\\x. \\y. return x) ()").0, "clo([()], \\y. return x0)");
        let a = EffectAlgebra::nat_cost();
        let m = parse_comp("let x <- tick in tick", Grades::Effect(&a), &[]).unwrap();
        assert_eq!(eval_comp(&a, &Env::new(), &m, 2).unwrap_err(), EvalError::Budget(2));
        let m = parse_comp("(); return ()", Grades::Effect(&a), &[]).unwrap();
        assert!(eval_comp(&a, &Env::new(), &m, 100).is_ok());
    }
}
