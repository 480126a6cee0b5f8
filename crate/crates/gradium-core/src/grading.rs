//! Grading algebras: preordered effect monoids, preordered coeffect
//! semirings, and grade-vector arithmetic.
//!
//! Algebras are runtime values. Every [`Effect`] and [`Grade`] carries the
//! tag of the algebra that produced it, and every binary operation checks
//! that tag before touching the payload.

use std::collections::BTreeMap;
use std::fmt;

use rand::Rng;
use thiserror::Error;

/// Identifies the algebra an element belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AlgebraTag {
    NatCost,
    NatExactEffect,
    NatUsage,
    NatExactCoeffect,
    ZeroOneMany,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GradeError {
    #[error("algebra mismatch: expected {expected:?}, found {found:?}")]
    AlgebraMismatch {
        expected: AlgebraTag,
        found: AlgebraTag,
    },
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),
    #[error("no join for {0} and {1}")]
    NoJoin(String, String),
    #[error("grade vector length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("`{literal}` is not a literal of algebra {algebra}")]
    BadLiteral { literal: String, algebra: String },
    #[error("unknown algebra `{0}`")]
    UnknownAlgebra(String),
}

pub type Result<T> = std::result::Result<T, GradeError>;

/// An element of an effect monoid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Effect {
    tag: AlgebraTag,
    raw: u64,
}

impl Effect {
    pub fn tag(self) -> AlgebraTag {
        self.tag
    }

    /// Numeric payload; both shipped effect monoids are carried by ℕ.
    pub fn raw(self) -> u64 {
        self.raw
    }
}

impl fmt::Display for Effect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.raw)
    }
}

/// An element of a coeffect semiring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Grade {
    tag: AlgebraTag,
    raw: u64,
}

/// Payload used for ω in the zero-one-many semiring.
const OMEGA: u64 = 2;

impl Grade {
    pub fn tag(self) -> AlgebraTag {
        self.tag
    }

    pub fn raw(self) -> u64 {
        self.raw
    }
}

impl fmt::Display for Grade {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.tag == AlgebraTag::ZeroOneMany && self.raw == OMEGA {
            f.write_str("w")
        } else {
            write!(f, "{}", self.raw)
        }
    }
}

type BinOp = fn(u64, u64) -> Option<u64>;
type Rel = fn(u64, u64) -> bool;

fn nat_add(a: u64, b: u64) -> Option<u64> {
    a.checked_add(b)
}

fn nat_mul(a: u64, b: u64) -> Option<u64> {
    a.checked_mul(b)
}

fn nat_le(a: u64, b: u64) -> bool {
    a <= b
}

fn nat_ge(a: u64, b: u64) -> bool {
    a >= b
}

fn eq_rel(a: u64, b: u64) -> bool {
    a == b
}

fn max_join(a: u64, b: u64) -> Option<u64> {
    Some(a.max(b))
}

fn eq_join(a: u64, b: u64) -> Option<u64> {
    (a == b).then_some(a)
}

fn zom_add(a: u64, b: u64) -> Option<u64> {
    Some(match (a, b) {
        (0, x) | (x, 0) => x,
        _ => OMEGA,
    })
}

fn zom_mul(a: u64, b: u64) -> Option<u64> {
    Some(match (a, b) {
        (0, _) | (_, 0) => 0,
        (1, x) | (x, 1) => x,
        _ => OMEGA,
    })
}

fn zom_le(a: u64, b: u64) -> bool {
    a == b || a == OMEGA
}

fn zom_join(a: u64, b: u64) -> Option<u64> {
    Some(if a == b { a } else { OMEGA })
}

fn parse_nat(s: &str) -> Option<u64> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn parse_zom(s: &str) -> Option<u64> {
    match s {
        "0" => Some(0),
        "1" => Some(1),
        "w" | "ω" => Some(OMEGA),
        _ => None,
    }
}

/// A preordered monoid of effects together with its primitive-operation
/// signature.
#[derive(Clone, Debug)]
pub struct EffectAlgebra {
    name: &'static str,
    tag: AlgebraTag,
    combine: BinOp,
    leq: Rel,
    join: BinOp,
    prims: BTreeMap<String, u64>,
}

impl EffectAlgebra {
    /// ℕ under addition with the usual order; `tick` costs one tock.
    pub fn nat_cost() -> Self {
        Self {
            name: "nat-cost",
            tag: AlgebraTag::NatCost,
            combine: nat_add,
            leq: nat_le,
            join: max_join,
            prims: BTreeMap::from([("tick".to_string(), 1)]),
        }
    }

    /// ℕ under addition with the discrete order.
    pub fn nat_exact() -> Self {
        Self {
            name: "nat-exact",
            tag: AlgebraTag::NatExactEffect,
            combine: nat_add,
            leq: eq_rel,
            join: eq_join,
            prims: BTreeMap::from([("tick".to_string(), 1)]),
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "nat-cost" => Ok(Self::nat_cost()),
            "nat-exact" | "discrete-nat" => Ok(Self::nat_exact()),
            other => Err(GradeError::UnknownAlgebra(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn tag(&self) -> AlgebraTag {
        self.tag
    }

    fn mk(&self, raw: u64) -> Effect {
        Effect { tag: self.tag, raw }
    }

    fn own(&self, e: Effect) -> Result<u64> {
        if e.tag == self.tag {
            Ok(e.raw)
        } else {
            Err(GradeError::AlgebraMismatch {
                expected: self.tag,
                found: e.tag,
            })
        }
    }

    /// ⊥, the monoid unit.
    pub fn unit(&self) -> Effect {
        self.mk(0)
    }

    /// The element denoted by a natural-number literal.
    pub fn nat(&self, n: u64) -> Effect {
        self.mk(n)
    }

    pub fn combine(&self, a: Effect, b: Effect) -> Result<Effect> {
        let r = (self.combine)(self.own(a)?, self.own(b)?).ok_or(GradeError::Overflow("combine"))?;
        Ok(self.mk(r))
    }

    pub fn leq(&self, a: Effect, b: Effect) -> Result<bool> {
        Ok((self.leq)(self.own(a)?, self.own(b)?))
    }

    /// Least upper bound, when the order has one for this pair.
    pub fn join(&self, a: Effect, b: Effect) -> Result<Effect> {
        let (x, y) = (self.own(a)?, self.own(b)?);
        (self.join)(x, y)
            .map(|r| self.mk(r))
            .ok_or_else(|| GradeError::NoJoin(a.to_string(), b.to_string()))
    }

    pub fn prim(&self, name: &str) -> Option<Effect> {
        self.prims.get(name).map(|&r| self.mk(r))
    }

    pub fn prim_names(&self) -> impl Iterator<Item = &str> {
        self.prims.keys().map(String::as_str)
    }

    /// Extend the primitive-operation signature.
    pub fn with_prim(mut self, name: &str, cost: u64) -> Self {
        self.prims.insert(name.to_string(), cost);
        self
    }

    pub fn parse(&self, s: &str) -> Result<Effect> {
        parse_nat(s).map(|r| self.mk(r)).ok_or_else(|| GradeError::BadLiteral {
            literal: s.to_string(),
            algebra: self.name.to_string(),
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Effect {
        self.mk(rng.gen_range(0..=12))
    }
}

/// The three extra axioms needed by the resource-tracking semantics.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ResourceFlags {
    pub nontrivial: bool,
    pub zero_sum_free: bool,
    pub no_zero_divisors: bool,
}

impl ResourceFlags {
    pub fn all(self) -> bool {
        self.nontrivial && self.zero_sum_free && self.no_zero_divisors
    }
}

#[derive(Clone, Copy, Debug)]
enum Carrier {
    Nat,
    Finite(&'static [u64]),
}

/// A preordered semiring of coeffects.
#[derive(Clone, Debug)]
pub struct CoeffectAlgebra {
    name: &'static str,
    tag: AlgebraTag,
    carrier: Carrier,
    add: BinOp,
    mul: BinOp,
    leq: Rel,
    join: BinOp,
    parse: fn(&str) -> Option<u64>,
    flags: ResourceFlags,
}

impl CoeffectAlgebra {
    /// ℕ counting uses; `a ≤ b` iff `a ≥ b` numerically.
    pub fn nat_usage() -> Self {
        Self {
            name: "nat-usage",
            tag: AlgebraTag::NatUsage,
            carrier: Carrier::Nat,
            add: nat_add,
            mul: nat_mul,
            leq: nat_ge,
            join: max_join,
            parse: parse_nat,
            flags: ResourceFlags {
                nontrivial: true,
                zero_sum_free: true,
                no_zero_divisors: true,
            },
        }
    }

    /// ℕ with the discrete order: grades are exact use counts.
    pub fn nat_exact() -> Self {
        Self {
            name: "nat-exact",
            tag: AlgebraTag::NatExactCoeffect,
            carrier: Carrier::Nat,
            add: nat_add,
            mul: nat_mul,
            leq: eq_rel,
            join: eq_join,
            parse: parse_nat,
            flags: ResourceFlags {
                nontrivial: true,
                zero_sum_free: true,
                no_zero_divisors: true,
            },
        }
    }

    /// {0, 1, ω} with saturating arithmetic; ω sits below both 0 and 1.
    pub fn zero_one_many() -> Self {
        Self {
            name: "zero-one-many",
            tag: AlgebraTag::ZeroOneMany,
            carrier: Carrier::Finite(&[0, 1, OMEGA]),
            add: zom_add,
            mul: zom_mul,
            leq: zom_le,
            join: zom_join,
            parse: parse_zom,
            flags: ResourceFlags {
                nontrivial: true,
                zero_sum_free: true,
                no_zero_divisors: true,
            },
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "nat-usage" => Ok(Self::nat_usage()),
            "nat-exact" => Ok(Self::nat_exact()),
            "zero-one-many" => Ok(Self::zero_one_many()),
            other => Err(GradeError::UnknownAlgebra(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn tag(&self) -> AlgebraTag {
        self.tag
    }

    pub fn flags(&self) -> ResourceFlags {
        self.flags
    }

    /// True for algebras whose carrier is ℕ, where usage accounting applies.
    pub fn is_nat(&self) -> bool {
        matches!(self.carrier, Carrier::Nat)
    }

    fn mk(&self, raw: u64) -> Grade {
        Grade { tag: self.tag, raw }
    }

    fn own(&self, g: Grade) -> Result<u64> {
        if g.tag == self.tag {
            Ok(g.raw)
        } else {
            Err(GradeError::AlgebraMismatch {
                expected: self.tag,
                found: g.tag,
            })
        }
    }

    pub fn zero(&self) -> Grade {
        self.mk(0)
    }

    pub fn one(&self) -> Grade {
        self.mk(1)
    }

    /// The element denoted by a natural-number literal; saturates to ω in
    /// finite carriers.
    pub fn nat(&self, n: u64) -> Grade {
        match self.carrier {
            Carrier::Nat => self.mk(n),
            Carrier::Finite(_) => self.mk(n.min(OMEGA)),
        }
    }

    pub fn add(&self, a: Grade, b: Grade) -> Result<Grade> {
        let r = (self.add)(self.own(a)?, self.own(b)?).ok_or(GradeError::Overflow("add"))?;
        Ok(self.mk(r))
    }

    pub fn mul(&self, a: Grade, b: Grade) -> Result<Grade> {
        let r = (self.mul)(self.own(a)?, self.own(b)?).ok_or(GradeError::Overflow("mul"))?;
        Ok(self.mk(r))
    }

    pub fn leq(&self, a: Grade, b: Grade) -> Result<bool> {
        Ok((self.leq)(self.own(a)?, self.own(b)?))
    }

    /// The least restrictive grade below both arguments, when one exists.
    pub fn join(&self, a: Grade, b: Grade) -> Result<Grade> {
        let (x, y) = (self.own(a)?, self.own(b)?);
        (self.join)(x, y)
            .map(|r| self.mk(r))
            .ok_or_else(|| GradeError::NoJoin(a.to_string(), b.to_string()))
    }

    pub fn parse(&self, s: &str) -> Result<Grade> {
        (self.parse)(s).map(|r| self.mk(r)).ok_or_else(|| GradeError::BadLiteral {
            literal: s.to_string(),
            algebra: self.name.to_string(),
        })
    }

    pub fn is_zero(&self, g: Grade) -> bool {
        g.tag == self.tag && g.raw == 0
    }

    /// Draws an element, biased towards small naturals.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Grade {
        match self.carrier {
            Carrier::Nat => self.mk(rng.gen_range(0..=12)),
            Carrier::Finite(xs) => self.mk(xs[rng.gen_range(0..xs.len())]),
        }
    }

    /// All elements whose payload is at most `bound`.
    pub fn elements_upto(&self, bound: u64) -> Vec<Grade> {
        match self.carrier {
            Carrier::Nat => (0..=bound).map(|r| self.mk(r)).collect(),
            Carrier::Finite(xs) => xs.iter().map(|&r| self.mk(r)).collect(),
        }
    }

    pub fn zeros(&self, n: usize) -> GradeVec {
        GradeVec(vec![self.zero(); n])
    }

    /// The vector with `1` at `i` and `0` elsewhere.
    pub fn unit_vec(&self, n: usize, i: usize) -> GradeVec {
        let mut v = self.zeros(n);
        v.0[i] = self.one();
        v
    }

    pub fn vec_add(&self, a: &GradeVec, b: &GradeVec) -> Result<GradeVec> {
        self.zip(a, b, |x, y| self.add(x, y))
    }

    pub fn vec_scale(&self, q: Grade, a: &GradeVec) -> Result<GradeVec> {
        a.0.iter().map(|&x| self.mul(q, x)).collect::<Result<_>>().map(GradeVec)
    }

    pub fn vec_join(&self, a: &GradeVec, b: &GradeVec) -> Result<GradeVec> {
        self.zip(a, b, |x, y| self.join(x, y))
    }

    pub fn vec_leq(&self, a: &GradeVec, b: &GradeVec) -> Result<bool> {
        if a.len() != b.len() {
            return Err(GradeError::LengthMismatch(a.len(), b.len()));
        }
        for (&x, &y) in a.0.iter().zip(&b.0) {
            if !self.leq(x, y)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn zip(
        &self,
        a: &GradeVec,
        b: &GradeVec,
        f: impl Fn(Grade, Grade) -> Result<Grade>,
    ) -> Result<GradeVec> {
        if a.len() != b.len() {
            return Err(GradeError::LengthMismatch(a.len(), b.len()));
        }
        a.0.iter().zip(&b.0).map(|(&x, &y)| f(x, y)).collect::<Result<_>>().map(GradeVec)
    }
}

/// A grade per context entry, positionally aligned.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GradeVec(pub Vec<Grade>);

impl GradeVec {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<Grade> {
        self.0.get(i).copied()
    }

    /// Appends entries, extending the vector into a larger scope.
    pub fn extend(&self, more: &[Grade]) -> GradeVec {
        let mut v = self.0.clone();
        v.extend_from_slice(more);
        GradeVec(v)
    }

    /// Splits off the last `k` entries.
    pub fn split_last(&self, k: usize) -> (GradeVec, Vec<Grade>) {
        let n = self.0.len() - k;
        (GradeVec(self.0[..n].to_vec()), self.0[n..].to_vec())
    }
}

impl fmt::Display for GradeVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str("]")
    }
}

/// Either kind of algebra, as selected on the command line.
#[derive(Clone, Debug)]
pub enum Algebra {
    Effect(EffectAlgebra),
    Coeffect(CoeffectAlgebra),
}

/// Randomized law checks over sampled elements.
pub mod laws {
    use super::*;

    #[derive(Clone, Debug, Error, PartialEq, Eq)]
    #[error("{algebra}: {law} fails at {witness}")]
    pub struct LawViolation {
        pub algebra: String,
        pub law: &'static str,
        pub witness: String,
    }

    fn fail(algebra: &str, law: &'static str, witness: String) -> LawViolation {
        LawViolation {
            algebra: algebra.to_string(),
            law,
            witness,
        }
    }

    /// Checks monoid and preorder laws on `trials` sampled triples.
    pub fn check_effect<R: Rng + ?Sized>(
        alg: &EffectAlgebra,
        rng: &mut R,
        trials: usize,
    ) -> std::result::Result<(), LawViolation> {
        let n = alg.name();
        let c = |a, b| alg.combine(a, b).expect("sampled elements combine");
        let le = |a, b| alg.leq(a, b).expect("same algebra");
        for _ in 0..trials {
            let (a, b, d) = (alg.sample(rng), alg.sample(rng), alg.sample(rng));
            let w = format!("({a}, {b}, {d})");
            if c(c(a, b), d) != c(a, c(b, d)) {
                return Err(fail(n, "associativity", w));
            }
            if c(alg.unit(), a) != a || c(a, alg.unit()) != a {
                return Err(fail(n, "identity", w));
            }
            if !le(a, a) {
                return Err(fail(n, "reflexivity", w));
            }
            if le(a, b) && le(b, d) && !le(a, d) {
                return Err(fail(n, "transitivity", w));
            }
            if le(a, b) && !(le(c(a, d), c(b, d)) && le(c(d, a), c(d, b))) {
                return Err(fail(n, "monotonicity", w));
            }
            if let Ok(j) = alg.join(a, b) {
                if !(le(a, j) && le(b, j)) {
                    return Err(fail(n, "join is an upper bound", w));
                }
                if le(a, d) && le(b, d) && !le(j, d) {
                    return Err(fail(n, "join is least", w));
                }
            }
        }
        Ok(())
    }

    /// Checks semiring and preorder laws on `trials` sampled triples.
    pub fn check_coeffect<R: Rng + ?Sized>(
        alg: &CoeffectAlgebra,
        rng: &mut R,
        trials: usize,
    ) -> std::result::Result<(), LawViolation> {
        let n = alg.name();
        let add = |a, b| alg.add(a, b).expect("sampled elements add");
        let mul = |a, b| alg.mul(a, b).expect("sampled elements multiply");
        let le = |a, b| alg.leq(a, b).expect("same algebra");
        let (zero, one) = (alg.zero(), alg.one());
        for _ in 0..trials {
            let (a, b, c) = (alg.sample(rng), alg.sample(rng), alg.sample(rng));
            let w = format!("({a}, {b}, {c})");
            let checks: [(&'static str, bool); 10] = [
                ("additive associativity", add(add(a, b), c) == add(a, add(b, c))),
                ("additive commutativity", add(a, b) == add(b, a)),
                ("additive identity", add(zero, a) == a),
                ("multiplicative associativity", mul(mul(a, b), c) == mul(a, mul(b, c))),
                ("multiplicative identity", mul(one, a) == a && mul(a, one) == a),
                ("left distributivity", mul(a, add(b, c)) == add(mul(a, b), mul(a, c))),
                ("right distributivity", mul(add(a, b), c) == add(mul(a, c), mul(b, c))),
                ("annihilation", mul(zero, a) == zero && mul(a, zero) == zero),
                ("reflexivity", le(a, a)),
                ("transitivity", !(le(a, b) && le(b, c)) || le(a, c)),
            ];
            for (law, ok) in checks {
                if !ok {
                    return Err(fail(n, law, w));
                }
            }
            if le(a, b) {
                let mono = le(add(a, c), add(b, c))
                    && le(mul(a, c), mul(b, c))
                    && le(mul(c, a), mul(c, b));
                if !mono {
                    return Err(fail(n, "monotonicity", w));
                }
            }
            if let Ok(j) = alg.join(a, b) {
                if !(le(j, a) && le(j, b)) {
                    return Err(fail(n, "join is below both", w));
                }
                if le(c, a) && le(c, b) && !le(c, j) {
                    return Err(fail(n, "join is greatest", w));
                }
            }
        }
        Ok(())
    }

    /// Recomputes the resource flags by exhaustive search over small
    /// elements.
    pub fn derive_flags(alg: &CoeffectAlgebra) -> ResourceFlags {
        let xs = alg.elements_upto(16);
        let zero = alg.zero();
        let add = |a, b| alg.add(a, b).expect("small elements add");
        let mul = |a, b| alg.mul(a, b).expect("small elements multiply");
        let le = |a, b| alg.leq(a, b).expect("same algebra");
        let pairs = || xs.iter().flat_map(|&a| xs.iter().map(move |&b| (a, b)));
        ResourceFlags {
            nontrivial: alg.one() != zero,
            zero_sum_free: pairs().all(|(a, b)| !le(zero, add(a, b)) || (a == zero && b == zero)),
            no_zero_divisors: pairs().all(|(a, b)| mul(a, b) != zero || a == zero || b == zero),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn nat_cost_order_and_combine() {
        let a = EffectAlgebra::nat_cost();
        assert!(a.leq(a.nat(0), a.nat(1)).unwrap());
        assert!(a.leq(a.nat(5), a.nat(5)).unwrap());
        assert_eq!(a.combine(a.nat(1), a.nat(1)).unwrap(), a.nat(2));
        assert_eq!(a.combine(a.unit(), a.nat(7)).unwrap(), a.nat(7));
        assert_eq!(a.prim("tick"), Some(a.nat(1)));
    }

    #[test]
    fn discrete_order_is_equality() {
        let a = EffectAlgebra::nat_exact();
        assert!(!a.leq(a.nat(1), a.nat(2)).unwrap());
        assert!(a.join(a.nat(1), a.nat(2)).is_err());
        assert_eq!(a.join(a.nat(3), a.nat(3)).unwrap(), a.nat(3));
    }

    #[test]
    fn mixing_algebras_is_an_error() {
        let a = EffectAlgebra::nat_cost();
        let b = EffectAlgebra::nat_exact();
        assert!(matches!(a.combine(a.nat(1), b.nat(1)), Err(GradeError::AlgebraMismatch { .. })));
        let u = CoeffectAlgebra::nat_usage();
        let z = CoeffectAlgebra::zero_one_many();
        assert!(u.add(u.one(), z.one()).is_err());
    }

    #[test]
    fn vector_arithmetic() {
        let a = CoeffectAlgebra::nat_usage();
        let v = |xs: &[u64]| GradeVec(xs.iter().map(|&x| a.nat(x)).collect());
        assert_eq!(a.vec_add(&v(&[1, 0]), &v(&[1, 2])).unwrap(), v(&[2, 2]));
        assert_eq!(a.vec_add(&v(&[4, 1]), &a.zeros(2)).unwrap(), v(&[4, 1]));
        assert_eq!(a.vec_scale(a.nat(3), &v(&[1, 2])).unwrap(), v(&[3, 6]));
        assert_eq!(a.vec_scale(a.zero(), &v(&[1, 2])).unwrap(), a.zeros(2));
        assert_eq!(a.vec_scale(a.one(), &v(&[1, 2])).unwrap(), v(&[1, 2]));
        assert!(a.vec_leq(&v(&[3]), &v(&[2])).unwrap());
        assert!(a.vec_leq(&v(&[2, 5]), &v(&[2, 5])).unwrap());
        assert!(!a.vec_leq(&v(&[1, 3]), &v(&[2, 2])).unwrap());
        assert!(a.vec_add(&v(&[1]), &v(&[1, 2])).is_err());
    }

    #[test]
    fn zero_one_many_saturates() {
        let z = CoeffectAlgebra::zero_one_many();
        let one = GradeVec(vec![z.one()]);
        let sum = z.vec_add(&one, &one).unwrap();
        assert_eq!(sum.to_string(), "[w]");
        assert_eq!(z.parse("w").unwrap(), z.nat(2));
        assert!(z.leq(z.nat(2), z.one()).unwrap());
        assert!(z.leq(z.nat(2), z.zero()).unwrap());
        assert!(!z.leq(z.one(), z.zero()).unwrap());
        assert!(!z.leq(z.zero(), z.one()).unwrap());
        assert_eq!(z.join(z.one(), z.zero()).unwrap(), z.nat(2));
    }

    #[test]
    fn usage_join_is_numeric_max() {
        let a = CoeffectAlgebra::nat_usage();
        assert_eq!(a.join(a.one(), a.zero()).unwrap(), a.one());
        let e = CoeffectAlgebra::nat_exact();
        assert!(e.join(e.one(), e.zero()).is_err());
    }

    #[test]
    fn literals() {
        let a = CoeffectAlgebra::nat_usage();
        assert_eq!(a.parse("12").unwrap(), a.nat(12));
        assert!(a.parse("w").is_err());
        assert!(a.parse("-1").is_err());
        assert!(EffectAlgebra::nat_cost().parse("x").is_err());
    }

    #[test]
    fn laws_hold_for_builtins() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for e in [EffectAlgebra::nat_cost(), EffectAlgebra::nat_exact()] {
            laws::check_effect(&e, &mut rng, 10_000).unwrap();
        }
        for c in [
            CoeffectAlgebra::nat_usage(),
            CoeffectAlgebra::nat_exact(),
            CoeffectAlgebra::zero_one_many(),
        ] {
            laws::check_coeffect(&c, &mut rng, 10_000).unwrap();
            assert_eq!(laws::derive_flags(&c), c.flags(), "{}", c.name());
        }
    }
}
