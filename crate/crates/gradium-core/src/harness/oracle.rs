//! Brute-force derivability for the relational coeffect rules over
//! nat-usage, and an exhaustive enumerator of small coeffect terms.
//!
//! For every node the oracle computes the set of numerically minimal
//! vectors γ for which a derivation of `γ ⊢ node` exists. Derivable vectors
//! are closed upwards (more permitted uses), so a declared vector is
//! derivable iff it dominates some minimal one.

use crate::grading::{CoeffectAlgebra, Grade};
use crate::syntax::{Comp, CompType, Context, Name, ValType, Value};

type Vector = Vec<u64>;

/// Numerically minimal derivable vectors.
pub type Antichain = Vec<Vector>;

fn dominated(a: &Vector, b: &Vector) -> bool {
    a.iter().zip(b).all(|(x, y)| x >= y)
}

fn minimize(mut vs: Vec<Vector>) -> Antichain {
    vs.sort();
    vs.dedup();
    let mut out: Antichain = Vec::new();
    for v in vs {
        if !out.iter().any(|m| dominated(&v, m)) {
            out.retain(|m| !dominated(m, &v));
            out.push(v);
        }
    }
    out
}

fn add(a: &Vector, b: &Vector) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn scale(q: u64, a: &Vector) -> Vector {
    a.iter().map(|x| q * x).collect()
}

fn pointwise_max(a: &Vector, b: &Vector) -> Vector {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn sums(a: &Antichain, b: &Antichain) -> Antichain {
    minimize(a.iter().flat_map(|x| b.iter().map(move |y| add(x, y))).collect())
}

fn maxes(a: &Antichain, b: &Antichain) -> Antichain {
    minimize(a.iter().flat_map(|x| b.iter().map(move |y| pointwise_max(x, y))).collect())
}

/// Premise vectors `(γ, q, …, q)` restricted to the outer γ.
fn project(a: &Antichain, outer: usize, q: u64) -> Antichain {
    minimize(a.iter().filter(|m| m[outer..].iter().all(|&g| g <= q)).map(|m| m[..outer].to_vec()).collect())
}

/// Why the oracle gave up on a term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Unsupported(pub String);

type OResult<T> = Result<T, Unsupported>;

fn no<T>(what: &str) -> OResult<T> {
    Err(Unsupported(what.to_string()))
}

/// The derivability oracle. Types are synthesized from annotations.
pub struct Oracle {
    tys: Vec<ValType>,
}

fn g(q: &Option<Grade>) -> OResult<u64> {
    match q {
        Some(q) => Ok(q.raw()),
        None => no("missing grade annotation"),
    }
}

impl Oracle {
    pub fn new(ctx: &Context) -> Self {
        Self { tys: ctx.entries.iter().map(|(_, t)| t.clone()).collect() }
    }

    fn n(&self) -> usize {
        self.tys.len()
    }

    fn under<T>(&mut self, extra: &[ValType], f: impl FnOnce(&mut Self) -> OResult<T>) -> OResult<T> {
        self.tys.extend_from_slice(extra);
        let r = f(self);
        self.tys.truncate(self.tys.len() - extra.len());
        r
    }

    pub fn value(&mut self, v: &Value) -> OResult<(ValType, Antichain)> {
        let n = self.n();
        match v {
            Value::Var(i, _) => {
                let k = n.checked_sub(i + 1).ok_or_else(|| Unsupported("unbound variable".into()))?;
                let mut e = vec![0; n];
                e[k] = 1;
                Ok((self.tys[k].clone(), vec![e]))
            }
            Value::Unit => Ok((ValType::Unit, vec![vec![0; n]])),
            Value::Thunk(m) => {
                let (b, a) = self.comp(m)?;
                Ok((ValType::u(None, b), a))
            }
            Value::Pair(x, y) => {
                let (tx, ax) = self.value(x)?;
                let (ty, ay) = self.value(y)?;
                Ok((ValType::prod(tx, ty), sums(&ax, &ay)))
            }
            Value::With(x, y) => {
                let (tx, ax) = self.value(x)?;
                let (ty, ay) = self.value(y)?;
                Ok((ValType::with(tx, ty), maxes(&ax, &ay)))
            }
            Value::Fst(p) | Value::Snd(p) => match self.value(p)? {
                (ValType::With(l, r), a) => Ok((if matches!(v, Value::Fst(_)) { *l } else { *r }, a)),
                _ => no("projection from a non-pair"),
            },
            Value::Ann(inner, t) => match (&**inner, t) {
                (Value::Inl(w), ValType::Sum(l, _)) | (Value::Inr(w), ValType::Sum(_, l)) => {
                    let (tw, a) = self.value(w)?;
                    if tw != **l {
                        return no("injection payload mismatch");
                    }
                    Ok((t.clone(), a))
                }
                _ => {
                    let (tw, a) = self.value(inner)?;
                    if tw != *t {
                        return no("ascription mismatch");
                    }
                    Ok((tw, a))
                }
            },
            Value::Inl(_) | Value::Inr(_) => no("unascribed injection"),
        }
    }

    pub fn comp(&mut self, m: &Comp) -> OResult<(CompType, Antichain)> {
        let n = self.n();
        match m {
            Comp::Lam(_, q, Some(a), body) => {
                let q0 = g(q)?;
                let (b, ab) = self.under(&[a.clone()], |o| o.comp(body))?;
                Ok((CompType::arrow(*q, a.clone(), b), project(&ab, n, q0)))
            }
            Comp::Lam(..) => no("unannotated binder"),
            Comp::App(f, v) => {
                let (tf, af) = self.comp(f)?;
                let CompType::Arrow(q, a, b) = tf else { return no("application of a non-function") };
                let (tv, av) = self.value(v)?;
                if tv != *a {
                    return no("argument mismatch");
                }
                let q = g(&q)?;
                let scaled: Antichain = minimize(av.iter().map(|x| scale(q, x)).collect());
                Ok((*b, sums(&af, &scaled)))
            }
            Comp::Force(v) => match self.value(v)? {
                (ValType::U(_, b), a) => Ok((*b, a)),
                _ => no("force of a non-thunk"),
            },
            Comp::Return(q, v) => {
                let q0 = g(q)?;
                let (t, a) = self.value(v)?;
                Ok((CompType::f(*q, t), minimize(a.iter().map(|x| scale(q0, x)).collect())))
            }
            Comp::Let(_, q2, m1, body) => {
                let q2 = g(q2)?;
                let (tm, am) = self.comp(m1)?;
                let CompType::F(q1, a) = tm else { return no("let of a non-returner") };
                let q1 = g(&q1)?;
                let (b, ab) = self.under(&[*a], |o| o.comp(body))?;
                let inner = project(&ab, n, q1 * q2);
                let scaled: Antichain = minimize(am.iter().map(|x| scale(q2, x)).collect());
                Ok((b, sums(&scaled, &inner)))
            }
            Comp::Seq(v, body) => {
                let (tv, av) = self.value(v)?;
                if tv != ValType::Unit {
                    return no("sequencing a non-unit");
                }
                let (b, ab) = self.comp(body)?;
                Ok((b, sums(&av, &ab)))
            }
            Comp::Split(q, v, _, _, body) => {
                let q = g(q)?;
                let (tv, av) = self.value(v)?;
                let ValType::Prod(x, y) = tv else { return no("split of a non-pair") };
                let (b, ab) = self.under(&[*x, *y], |o| o.comp(body))?;
                let scaled: Antichain = minimize(av.iter().map(|x| scale(q, x)).collect());
                Ok((b, sums(&scaled, &project(&ab, n, q))))
            }
            Comp::Case(q, v, _, l, _, r) => {
                let q = g(q)?;
                let (tv, av) = self.value(v)?;
                let ValType::Sum(x, y) = tv else { return no("case of a non-sum") };
                let (bl, al) = self.under(&[*x], |o| o.comp(l))?;
                let (br, ar) = self.under(&[*y], |o| o.comp(r))?;
                if bl != br {
                    return no("branch mismatch");
                }
                if q < 1 {
                    return Ok((bl, Vec::new()));
                }
                let shared = maxes(&project(&al, n, q), &project(&ar, n, q));
                let scaled: Antichain = minimize(av.iter().map(|x| scale(q, x)).collect());
                Ok((bl, sums(&scaled, &shared)))
            }
            Comp::CPair(a, b) => {
                let (ta, aa) = self.comp(a)?;
                let (tb, ab) = self.comp(b)?;
                Ok((CompType::with(ta, tb), maxes(&aa, &ab)))
            }
            Comp::CFst(p) | Comp::CSnd(p) => match self.comp(p)? {
                (CompType::With(l, r), a) => Ok((if matches!(m, Comp::CFst(_)) { *l } else { *r }, a)),
                _ => no("projection from a non-pair"),
            },
            Comp::Tensor(a, b) => {
                let (ta, aa) = self.comp(a)?;
                let (tb, ab) = self.comp(b)?;
                Ok((CompType::tensor(ta, tb), sums(&aa, &ab)))
            }
            Comp::TSplit(q, m1, _, _, body) => {
                let q = g(q)?;
                let (tm, am) = self.comp(m1)?;
                let CompType::Tensor(x, y) = tm else { return no("split of a non-product") };
                let extra = [ValType::u(None, *x), ValType::u(None, *y)];
                let (b, ab) = self.under(&extra, |o| o.comp(body))?;
                if q < 1 {
                    return Ok((b, Vec::new()));
                }
                let scaled: Antichain = minimize(am.iter().map(|x| scale(q, x)).collect());
                Ok((b, sums(&scaled, &project(&ab, n, q))))
            }
            Comp::Prim(_) => no("primitive in coeffect mode"),
        }
    }
}

/// Minimal derivable vectors of `m` in `ctx`.
pub fn minimal_vectors(ctx: &Context, m: &Comp) -> Result<(CompType, Antichain), Unsupported> {
    Oracle::new(ctx).comp(m)
}

/// Whether some derivation concludes with the declared vector.
pub fn derivable(minimal: &Antichain, declared: &[u64]) -> bool {
    minimal.iter().any(|m| dominated(&declared.to_vec(), m))
}

/// Every vector over `0..=max` of length `n`.
pub fn all_vectors(n: usize, max: u64) -> Vec<Vec<u64>> {
    (0..n).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter().flat_map(|v| (0..=max).map(move |g| [v.clone(), vec![g]].concat())).collect()
    })
}

/// Exhaustive enumeration of a small coeffect grammar over `x : Unit`:
/// `return^q v`, `let y <-^q M in N`, `v; N` and `(λz^q:Unit. N) v`,
/// with grades in `{0, 1, 2}` and `v` a variable or `()`.
///
/// Terms are indexed so that batches can be checked in parallel without
/// materializing the top level.
pub struct Enumerator {
    grades: Vec<Grade>,
    depth: u32,
    ctx: usize,
    lower: Vec<Vec<Comp>>,
}

impl Enumerator {
    /// Terms with at most `depth` nested computation constructors above a
    /// `return`, in a context of `ctx` unit variables.
    pub fn new(alg: &CoeffectAlgebra, depth: u32, ctx: usize) -> Self {
        let grades = (0..=2).map(|n| alg.nat(n)).collect();
        let mut e = Self { grades, depth, ctx, lower: Vec::new() };
        if depth > 0 {
            // lower[k] = all terms of depth < self.depth in context ctx + k
            e.lower = (0..=1).map(|k| e.all(depth - 1, ctx + k)).collect();
        }
        e
    }

    fn values(&self, n: usize) -> Vec<Value> {
        let mut vs = vec![Value::Unit];
        vs.extend((0..n).map(|i| Value::Var(i, Name::new(format!("x{}", n - 1 - i)))));
        vs
    }

    fn returns(&self, n: usize) -> Vec<Comp> {
        let mut out = Vec::new();
        for q in &self.grades {
            for v in self.values(n) {
                out.push(Comp::Return(Some(*q), v));
            }
        }
        out
    }

    fn all(&self, depth: u32, n: usize) -> Vec<Comp> {
        let mut out = self.returns(n);
        if depth == 0 {
            return out;
        }
        let here = self.all(depth - 1, n);
        let under = self.all(depth - 1, n + 1);
        let y = format!("x{n}");
        for q in &self.grades {
            for m in &here {
                for body in &under {
                    out.push(Comp::let_(&y, Some(*q), m.clone(), body.clone()));
                }
            }
        }
        for v in self.values(n) {
            for body in &here {
                out.push(Comp::seq(v.clone(), body.clone()));
            }
        }
        for q in &self.grades {
            for body in &under {
                for v in self.values(n) {
                    out.push(Comp::app(Comp::Lam(Name::new(&y), Some(*q), Some(ValType::Unit), Box::new(body.clone())), v));
                }
            }
        }
        out
    }

    fn blocks(&self) -> [usize; 4] {
        let n = self.ctx;
        let nv = n + 1;
        let ng = self.grades.len();
        if self.depth == 0 {
            return [ng * nv, 0, 0, 0];
        }
        let (here, under) = (self.lower[0].len(), self.lower[1].len());
        [ng * nv, ng * here * under, nv * here, ng * under * nv]
    }

    pub fn len(&self) -> usize {
        self.blocks().iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The context the terms live in.
    pub fn context(&self) -> Context {
        let mut c = Context::new();
        for k in 0..self.ctx {
            c.push(Name::new(format!("x{k}")), ValType::Unit);
        }
        c
    }

    /// The `i`-th term.
    pub fn get(&self, mut i: usize) -> Comp {
        let n = self.ctx;
        let vs = self.values(n);
        let nv = vs.len();
        let b = self.blocks();
        if i < b[0] {
            return Comp::Return(Some(self.grades[i / nv]), vs[i % nv].clone());
        }
        i -= b[0];
        let y = format!("x{n}");
        let (here, under) = (&self.lower[0], &self.lower[1]);
        if i < b[1] {
            let (q, rest) = (i / (here.len() * under.len()), i % (here.len() * under.len()));
            let (m, body) = (rest / under.len(), rest % under.len());
            return Comp::let_(&y, Some(self.grades[q]), here[m].clone(), under[body].clone());
        }
        i -= b[1];
        if i < b[2] {
            return Comp::seq(vs[i / here.len()].clone(), here[i % here.len()].clone());
        }
        i -= b[2];
        let (q, rest) = (i / (under.len() * nv), i % (under.len() * nv));
        let (body, v) = (rest / nv, rest % nv);
        Comp::app(
            Comp::Lam(Name::new(&y), Some(self.grades[q]), Some(ValType::Unit), Box::new(under[body].clone())),
            vs[v].clone(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_comp, Grades};

    fn alg() -> CoeffectAlgebra {
        CoeffectAlgebra::nat_usage()
    }

    fn min_of(ctx: &Context, src: &str) -> Antichain {
        let a = alg();
        let m = parse_comp(src, Grades::Coeffect(&a), &ctx.names()).unwrap();
        minimal_vectors(ctx, &m).unwrap().1
    }

    #[test]
    fn antichain_minimizes() {
        assert_eq!(minimize(vec![vec![1, 2], vec![1, 1], vec![2, 0], vec![3, 0]]), vec![vec![1, 1], vec![2, 0]]);
    }

    #[test]
    fn hand_computed_minima() {
        let ctx = Context::new().with("x", ValType::Unit);
        assert_eq!(min_of(&ctx, "return^3 x"), vec![vec![3]]);
        assert_eq!(min_of(&ctx, "return^0 x"), vec![vec![0]]);
        assert_eq!(min_of(&ctx, "let y <-^2 return^1 x in return^1 (y, y)"), vec![vec![2]]);
        // the binder needs 2 uses but may only get 1
        assert_eq!(min_of(&ctx, "(\\z^1:Unit. return^1 (z, z)) x"), Vec::<Vector>::new());
    }

    #[test]
    fn enumerator_indexes_every_term() {
        let e = Enumerator::new(&alg(), 1, 1);
        let full = e.all(1, 1);
        assert_eq!(e.len(), full.len());
        for (i, m) in full.iter().enumerate() {
            assert_eq!(&e.get(i), m);
        }
    }

    #[test]
    fn vectors_enumerate() {
        assert_eq!(all_vectors(2, 1), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }
}
