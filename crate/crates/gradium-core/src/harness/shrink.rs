//! Greedy counterexample shrinking over subterms.

use crate::syntax::{Comp, Value};

fn down_v(v: &Value, k: usize, c: usize) -> Option<Value> {
    Some(match v {
        Value::Var(i, n) if *i >= c + k => Value::Var(i - k, n.clone()),
        Value::Var(i, _) if *i >= c => return None,
        Value::Var(..) | Value::Unit => v.clone(),
        Value::Thunk(m) => Value::thunk(down(m, k, c)?),
        Value::Pair(a, b) => Value::pair(down_v(a, k, c)?, down_v(b, k, c)?),
        Value::With(a, b) => Value::with(down_v(a, k, c)?, down_v(b, k, c)?),
        Value::Inl(w) => Value::inl(down_v(w, k, c)?),
        Value::Inr(w) => Value::inr(down_v(w, k, c)?),
        Value::Fst(w) => Value::Fst(Box::new(down_v(w, k, c)?)),
        Value::Snd(w) => Value::Snd(Box::new(down_v(w, k, c)?)),
        Value::Ann(w, t) => Value::ann(down_v(w, k, c)?, t.clone()),
    })
}

/// Removes `k` binders at cutoff `c`, failing if any of them is used.
fn down(m: &Comp, k: usize, c: usize) -> Option<Comp> {
    let b = |n: &Comp, j: usize| down(n, k, c + j).map(Box::new);
    Some(match m {
        Comp::Lam(x, q, t, n) => Comp::Lam(x.clone(), *q, t.clone(), b(n, 1)?),
        Comp::App(n, v) => Comp::App(b(n, 0)?, down_v(v, k, c)?),
        Comp::Force(v) => Comp::Force(down_v(v, k, c)?),
        Comp::Return(q, v) => Comp::Return(*q, down_v(v, k, c)?),
        Comp::Let(x, q, n1, n2) => Comp::Let(x.clone(), *q, b(n1, 0)?, b(n2, 1)?),
        Comp::Split(q, v, x, y, n) => Comp::Split(*q, down_v(v, k, c)?, x.clone(), y.clone(), b(n, 2)?),
        Comp::Seq(v, n) => Comp::Seq(down_v(v, k, c)?, b(n, 0)?),
        Comp::Case(q, v, x, l, y, r) => Comp::Case(*q, down_v(v, k, c)?, x.clone(), b(l, 1)?, y.clone(), b(r, 1)?),
        Comp::CPair(l, r) => Comp::CPair(b(l, 0)?, b(r, 0)?),
        Comp::Tensor(l, r) => Comp::Tensor(b(l, 0)?, b(r, 0)?),
        Comp::CFst(n) => Comp::CFst(b(n, 0)?),
        Comp::CSnd(n) => Comp::CSnd(b(n, 0)?),
        Comp::TSplit(q, n1, x, y, n2) => Comp::TSplit(*q, b(n1, 0)?, x.clone(), y.clone(), b(n2, 2)?),
        Comp::Prim(p) => Comp::Prim(p.clone()),
    })
}

/// `m` with its `k` innermost binders removed, when it does not use them.
pub fn strengthen(m: &Comp, k: usize) -> Option<Comp> {
    down(m, k, 0)
}

/// Direct computation children with the number of binders each sits under.
fn children(m: &Comp) -> Vec<(&Comp, usize)> {
    match m {
        Comp::Lam(_, _, _, n) => vec![(n, 1)],
        Comp::App(n, _) | Comp::Seq(_, n) | Comp::CFst(n) | Comp::CSnd(n) => vec![(n, 0)],
        Comp::Let(_, _, a, b) => vec![(a, 0), (b, 1)],
        Comp::Split(_, _, _, _, n) => vec![(n, 2)],
        Comp::Case(_, _, _, l, _, r) => vec![(l, 1), (r, 1)],
        Comp::CPair(a, b) | Comp::Tensor(a, b) => vec![(a, 0), (b, 0)],
        Comp::TSplit(_, a, _, _, b) => vec![(a, 0), (b, 2)],
        Comp::Force(_) | Comp::Return(..) | Comp::Prim(_) => Vec::new(),
    }
}

/// All subterms that make sense in the outer scope, outermost first.
fn subterms(m: &Comp) -> Vec<Comp> {
    let mut out = Vec::new();
    let mut stack: Vec<(&Comp, usize)> = children(m);
    while let Some((n, k)) = stack.pop() {
        if let Some(s) = strengthen(n, k) {
            out.push(s);
        }
        stack.extend(children(n).into_iter().map(|(c, j)| (c, k + j)));
    }
    out
}

/// `m` with one direct child replaced by one of that child's own children.
fn hoists(m: &Comp) -> Vec<Comp> {
    let mut out = Vec::new();
    let kids = children(m);
    for (slot, (child, _)) in kids.iter().enumerate() {
        for (grand, j) in children(child) {
            let Some(g) = strengthen(grand, j) else { continue };
            out.push(replace_child(m, slot, g));
        }
    }
    out
}

fn replace_child(m: &Comp, slot: usize, c: Comp) -> Comp {
    let c = Box::new(c);
    let mut m = m.clone();
    match (&mut m, slot) {
        (Comp::Lam(_, _, _, n), 0)
        | (Comp::App(n, _), 0)
        | (Comp::Seq(_, n), 0)
        | (Comp::CFst(n), 0)
        | (Comp::CSnd(n), 0)
        | (Comp::Let(_, _, n, _), 0)
        | (Comp::Let(_, _, _, n), 1)
        | (Comp::Split(_, _, _, _, n), 0)
        | (Comp::Case(_, _, _, n, _, _), 0)
        | (Comp::Case(_, _, _, _, _, n), 1)
        | (Comp::CPair(n, _), 0)
        | (Comp::CPair(_, n), 1)
        | (Comp::Tensor(n, _), 0)
        | (Comp::Tensor(_, n), 1)
        | (Comp::TSplit(_, n, _, _, _), 0)
        | (Comp::TSplit(_, _, _, _, n), 1) => *n = c,
        _ => {}
    }
    m
}

/// Shrinks `m` while `fails` keeps holding. The result always fails.
pub fn shrink(m: &Comp, mut fails: impl FnMut(&Comp) -> bool) -> Comp {
    let mut cur = m.clone();
    'outer: loop {
        let mut cands: Vec<Comp> = subterms(&cur);
        cands.extend(hoists(&cur));
        cands.sort_by_key(|c| c.size());
        for c in cands {
            if c.size() < cur.size() && fails(&c) {
                cur = c;
                continue 'outer;
            }
        }
        return cur;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::CoeffectAlgebra;
    use crate::syntax::{parse_comp, show_comp, Grades};

    fn p(src: &str, scope: &[&str]) -> Comp {
        let alg = CoeffectAlgebra::nat_usage();
        let names: Vec<String> = scope.iter().map(|s| s.to_string()).collect();
        parse_comp(src, Grades::Coeffect(&alg), &names).unwrap()
    }

    #[test]
    fn strengthen_drops_unused_binders() {
        let m = p("let y <-^1 return^1 x in return^1 x", &["x"]);
        let Comp::Let(_, _, _, body) = &m else { panic!() };
        assert_eq!(show_comp(&strengthen(body, 1).unwrap(), &["x".into()]), "return^1 x");
        let m = p("let y <-^1 return^1 x in return^1 y", &["x"]);
        let Comp::Let(_, _, _, body) = &m else { panic!() };
        assert!(strengthen(body, 1).is_none());
    }

    #[test]
    fn shrinking_preserves_the_predicate() {
        let m = p("let y <-^1 return^1 () in x; let z <-^1 return^1 x in return^2 x", &["x"]);
        let fails = |c: &Comp| matches!(c, Comp::Return(Some(q), _) if q.raw() == 2) || show_comp(c, &["x".into()]).contains("return^2");
        let s = shrink(&m, fails);
        assert!(fails(&s));
        assert_eq!(show_comp(&s, &["x".into()]), "return^2 x");
    }
}
