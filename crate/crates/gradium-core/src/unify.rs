//! First-order unification over value and computation types, used for
//! unannotated λ binders. Only value types carry metavariables.

use crate::syntax::{CompType, ValType};

#[derive(Clone, Debug, Default)]
pub struct Subst {
    metas: Vec<Option<ValType>>,
}

impl Subst {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fresh(&mut self) -> ValType {
        self.metas.push(None);
        ValType::Meta(self.metas.len() as u32 - 1)
    }

    /// Follows solved metavariables at the head only.
    pub fn head(&self, t: &ValType) -> ValType {
        let mut t = t.clone();
        while let ValType::Meta(m) = t {
            match &self.metas[m as usize] {
                Some(s) => t = s.clone(),
                None => break,
            }
        }
        t
    }

    pub fn zonk_val(&self, t: &ValType) -> ValType {
        match self.head(t) {
            ValType::U(e, b) => ValType::u(e, self.zonk_comp(&b)),
            ValType::Prod(a, b) => ValType::prod(self.zonk_val(&a), self.zonk_val(&b)),
            ValType::Sum(a, b) => ValType::sum(self.zonk_val(&a), self.zonk_val(&b)),
            ValType::With(a, b) => ValType::with(self.zonk_val(&a), self.zonk_val(&b)),
            t => t,
        }
    }

    pub fn zonk_comp(&self, t: &CompType) -> CompType {
        match t {
            CompType::Arrow(q, a, b) => CompType::arrow(*q, self.zonk_val(a), self.zonk_comp(b)),
            CompType::F(q, a) => CompType::f(*q, self.zonk_val(a)),
            CompType::With(a, b) => CompType::with(self.zonk_comp(a), self.zonk_comp(b)),
            CompType::Tensor(a, b) => CompType::tensor(self.zonk_comp(a), self.zonk_comp(b)),
        }
    }

    fn occurs(&self, m: u32, t: &ValType) -> bool {
        match self.head(t) {
            ValType::Meta(n) => n == m,
            ValType::U(_, b) => self.occurs_comp(m, &b),
            ValType::Prod(a, b) | ValType::Sum(a, b) | ValType::With(a, b) => self.occurs(m, &a) || self.occurs(m, &b),
            ValType::Unit | ValType::Base(_) => false,
        }
    }

    fn occurs_comp(&self, m: u32, t: &CompType) -> bool {
        match t {
            CompType::Arrow(_, a, b) => self.occurs(m, a) || self.occurs_comp(m, b),
            CompType::F(_, a) => self.occurs(m, a),
            CompType::With(a, b) | CompType::Tensor(a, b) => self.occurs_comp(m, a) || self.occurs_comp(m, b),
        }
    }

    /// Makes two value types equal, or reports that they differ.
    pub fn unify_val(&mut self, a: &ValType, b: &ValType) -> Result<(), ()> {
        let (a, b) = (self.head(a), self.head(b));
        match (&a, &b) {
            (ValType::Meta(m), ValType::Meta(n)) if m == n => Ok(()),
            (ValType::Meta(m), t) | (t, ValType::Meta(m)) => {
                if self.occurs(*m, t) {
                    return Err(());
                }
                self.metas[*m as usize] = Some(t.clone());
                Ok(())
            }
            (ValType::Unit, ValType::Unit) => Ok(()),
            (ValType::Base(x), ValType::Base(y)) if x == y => Ok(()),
            (ValType::U(e1, b1), ValType::U(e2, b2)) if e1 == e2 => self.unify_comp(b1, b2),
            (ValType::Prod(a1, a2), ValType::Prod(b1, b2))
            | (ValType::Sum(a1, a2), ValType::Sum(b1, b2))
            | (ValType::With(a1, a2), ValType::With(b1, b2)) => {
                self.unify_val(a1, b1)?;
                self.unify_val(a2, b2)
            }
            _ => Err(()),
        }
    }

    pub fn unify_comp(&mut self, a: &CompType, b: &CompType) -> Result<(), ()> {
        match (a, b) {
            (CompType::Arrow(q1, a1, b1), CompType::Arrow(q2, a2, b2)) if q1 == q2 => {
                self.unify_val(a1, a2)?;
                self.unify_comp(b1, b2)
            }
            (CompType::F(q1, a1), CompType::F(q2, a2)) if q1 == q2 => self.unify_val(a1, a2),
            (CompType::With(a1, a2), CompType::With(b1, b2)) | (CompType::Tensor(a1, a2), CompType::Tensor(b1, b2)) => {
                self.unify_comp(a1, b1)?;
                self.unify_comp(a2, b2)
            }
            _ => Err(()),
        }
    }
}

/// Replaces leftover metavariables with opaque base types `A`, `A1`, ...
/// in order of first appearance.
pub struct Namer {
    seen: Vec<u32>,
}

impl Namer {
    pub fn new() -> Self {
        Self { seen: Vec::new() }
    }

    fn name(&mut self, m: u32) -> ValType {
        let k = match self.seen.iter().position(|&n| n == m) {
            Some(k) => k,
            None => {
                self.seen.push(m);
                self.seen.len() - 1
            }
        };
        ValType::Base(if k == 0 { "A".into() } else { format!("A{k}") })
    }

    pub fn val(&mut self, t: &ValType) -> ValType {
        match t {
            ValType::Meta(m) => self.name(*m),
            ValType::U(e, b) => ValType::u(*e, self.comp(b)),
            ValType::Prod(a, b) => {
                let a = self.val(a);
                ValType::prod(a, self.val(b))
            }
            ValType::Sum(a, b) => {
                let a = self.val(a);
                ValType::sum(a, self.val(b))
            }
            ValType::With(a, b) => {
                let a = self.val(a);
                ValType::with(a, self.val(b))
            }
            t => t.clone(),
        }
    }

    pub fn comp(&mut self, t: &CompType) -> CompType {
        match t {
            CompType::Arrow(q, a, b) => {
                let a = self.val(a);
                CompType::arrow(*q, a, self.comp(b))
            }
            CompType::F(q, a) => CompType::f(*q, self.val(a)),
            CompType::With(a, b) => {
                let a = self.comp(a);
                CompType::with(a, self.comp(b))
            }
            CompType::Tensor(a, b) => {
                let a = self.comp(a);
                CompType::tensor(a, self.comp(b))
            }
        }
    }
}

impl Default for Namer {
    fn default() -> Self {
        Self::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_and_names() {
        let mut s = Subst::new();
        let a = s.fresh();
        let b = s.fresh();
        s.unify_val(&a, &ValType::prod(b.clone(), ValType::Unit)).unwrap();
        let t = s.zonk_val(&ValType::prod(a, b));
        assert_eq!(Namer::new().val(&t).to_string(), "A * Unit * A");
    }

    #[test]
    fn occurs_check() {
        let mut s = Subst::new();
        let a = s.fresh();
        assert!(s.unify_val(&a, &ValType::prod(a.clone(), ValType::Unit)).is_err());
    }
}
