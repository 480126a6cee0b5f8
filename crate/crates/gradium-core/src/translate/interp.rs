//! A direct call-by-value evaluator for source terms, counting ticks.

use std::fmt;
use std::rc::Rc;

use super::source::STerm;

#[derive(Clone, Debug)]
pub enum SVal {
    Unit,
    Closure(Rc<(String, STerm)>, Env),
    Pair(Box<SVal>, Box<SVal>),
    Inl(Box<SVal>),
    Inr(Box<SVal>),
}

pub type Env = Vec<(String, SVal)>;

impl SVal {
    /// Structural equality on first-order values; `None` if either side holds a function.
    pub fn ground_eq(&self, other: &SVal) -> Option<bool> {
        match (self, other) {
            (SVal::Unit, SVal::Unit) => Some(true),
            (SVal::Pair(a, b), SVal::Pair(c, d)) => Some(a.ground_eq(c)? && b.ground_eq(d)?),
            (SVal::Inl(a), SVal::Inl(b)) | (SVal::Inr(a), SVal::Inr(b)) => a.ground_eq(b),
            (SVal::Closure(..), _) | (_, SVal::Closure(..)) => None,
            _ => Some(false),
        }
    }
}

impl fmt::Display for SVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SVal::Unit => f.write_str("()"),
            SVal::Closure(..) => f.write_str("<fun>"),
            SVal::Pair(a, b) => write!(f, "({a}, {b})"),
            SVal::Inl(v) => write!(f, "inl {v}"),
            SVal::Inr(v) => write!(f, "inr {v}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("stuck at `{0}`")]
    Stuck(String),
    #[error("out of fuel")]
    Fuel,
}

struct Ev {
    ticks: u64,
    fuel: u64,
}

impl Ev {
    fn eval(&mut self, env: &Env, e: &STerm) -> Result<SVal, EvalError> {
        if self.fuel == 0 {
            return Err(EvalError::Fuel);
        }
        self.fuel -= 1;
        let stuck = || EvalError::Stuck(e.to_string());
        match e {
            STerm::Var(x) => env.iter().rev().find(|(y, _)| y == x).map(|(_, v)| v.clone()).ok_or_else(stuck),
            STerm::Unit => Ok(SVal::Unit),
            STerm::Tick => {
                self.ticks += 1;
                Ok(SVal::Unit)
            }
            STerm::Lam(x, _, _, body) => Ok(SVal::Closure(Rc::new((x.clone(), (**body).clone())), env.clone())),
            STerm::App(f, a) => {
                let fv = self.eval(env, f)?;
                let av = self.eval(env, a)?;
                match fv {
                    SVal::Closure(c, mut cenv) => {
                        cenv.push((c.0.clone(), av));
                        self.eval(&cenv, &c.1)
                    }
                    _ => Err(stuck()),
                }
            }
            STerm::Seq(a, b) => match self.eval(env, a)? {
                SVal::Unit => self.eval(env, b),
                _ => Err(stuck()),
            },
            STerm::Pair(a, b) => {
                let x = self.eval(env, a)?;
                let y = self.eval(env, b)?;
                Ok(SVal::Pair(Box::new(x), Box::new(y)))
            }
            STerm::Split(_, x, y, p, body) => match self.eval(env, p)? {
                SVal::Pair(a, b) => {
                    let mut env = env.clone();
                    env.push((x.clone(), *a));
                    env.push((y.clone(), *b));
                    self.eval(&env, body)
                }
                _ => Err(stuck()),
            },
            STerm::Inl(_, v) => Ok(SVal::Inl(Box::new(self.eval(env, v)?))),
            STerm::Inr(_, v) => Ok(SVal::Inr(Box::new(self.eval(env, v)?))),
            STerm::Case(_, s, x, l, y, r) => {
                let (name, v, branch) = match self.eval(env, s)? {
                    SVal::Inl(v) => (x, v, l),
                    SVal::Inr(v) => (y, v, r),
                    _ => return Err(stuck()),
                };
                let mut env = env.clone();
                env.push((name.clone(), *v));
                self.eval(&env, branch)
            }
            _ => Err(stuck()),
        }
    }
}

/// Evaluates a closed effect-calculus term, returning its value and tick count.
pub fn eval_cbv(e: &STerm, fuel: u64) -> Result<(SVal, u64), EvalError> {
    let mut ev = Ev { ticks: 0, fuel };
    let v = ev.eval(&Vec::new(), e)?;
    Ok((v, ev.ticks))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_ticks_left_to_right() {
        let e = STerm::seq(STerm::Tick, STerm::pair(STerm::Tick, STerm::Tick));
        let (v, n) = eval_cbv(&e, 100).unwrap();
        assert_eq!(n, 3);
        assert_eq!(v.to_string(), "((), ())");
    }
}
