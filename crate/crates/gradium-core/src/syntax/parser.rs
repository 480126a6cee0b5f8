use super::ast::*;
use super::lexer::{directives, lex, ParseError, Spanned, Tok};
use crate::grading::{Effect, Grade, GradeError};

/// The grade literals a parse accepts, which also fixes the mode.
#[derive(Clone, Copy, Debug)]
pub enum Grades<'a> {
    Effect(&'a crate::grading::EffectAlgebra),
    Coeffect(&'a crate::grading::CoeffectAlgebra),
}

impl Grades<'_> {
    pub fn mode(&self) -> Mode {
        match self {
            Grades::Effect(_) => Mode::Effect,
            Grades::Coeffect(_) => Mode::Coeffect,
        }
    }
}

const KEYWORDS: &[&str] = &["return", "let", "in", "case", "of", "inl", "inr"];

/// Token cursor with backtracking, shared by the CBPV and source parsers.
pub(crate) struct Cursor {
    toks: Vec<Spanned>,
    pub pos: usize,
    furthest: Option<ParseError>,
}

impl Cursor {
    pub fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Self {
            toks: lex(src)?,
            pos: 0,
            furthest: None,
        })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    pub fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn err(&mut self, msg: impl Into<String>) -> ParseError {
        let s = &self.toks[self.pos];
        let e = ParseError::new(s.line, s.col, msg);
        let further = match &self.furthest {
            Some(f) => (e.line, e.col) > (f.line, f.col),
            None => true,
        };
        if further {
            self.furthest = Some(e.clone());
        }
        e
    }

    /// The error that got furthest into the input, for reporting after
    /// every alternative failed.
    pub fn best(&self, e: ParseError) -> ParseError {
        match &self.furthest {
            Some(f) if (f.line, f.col) > (e.line, e.col) => f.clone(),
            _ => e,
        }
    }

    pub fn at(&self, t: &Tok) -> bool {
        self.peek() == t
    }

    pub fn at_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    pub fn eat(&mut self, t: &Tok) -> bool {
        if self.at(t) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn eat_kw(&mut self, kw: &str) -> bool {
        if self.at_kw(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, t: &Tok) -> Result<(), ParseError> {
        if self.eat(t) {
            Ok(())
        } else {
            let found = self.peek().clone();
            Err(self.err(format!("expected {t}, found {found}")))
        }
    }

    pub fn expect_kw(&mut self, kw: &str) -> Result<(), ParseError> {
        if self.eat_kw(kw) {
            Ok(())
        } else {
            let found = self.peek().clone();
            Err(self.err(format!("expected `{kw}`, found {found}")))
        }
    }

    pub fn ident(&mut self, reserved: &[&str]) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if !reserved.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            other => Err(self.err(format!("expected identifier, found {other}"))),
        }
    }

    /// A grade literal following `^`.
    pub fn literal(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Num(s) | Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => Err(self.err(format!("expected grade literal, found {other}"))),
        }
    }

    pub fn finish(&mut self) -> Result<(), ParseError> {
        if self.at(&Tok::Eof) {
            Ok(())
        } else {
            let found = self.peek().clone();
            let e = self.err(format!("unexpected {found}"));
            Err(self.best(e))
        }
    }
}

pub(crate) struct Parser<'a> {
    pub cur: Cursor,
    grades: Grades<'a>,
    scope: Vec<String>,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    pub fn new(src: &str, grades: Grades<'a>) -> PResult<Self> {
        Ok(Self {
            cur: Cursor::new(src)?,
            grades,
            scope: Vec::new(),
        })
    }

    fn mode(&self) -> Mode {
        self.grades.mode()
    }

    fn save(&self) -> (usize, usize) {
        (self.cur.pos, self.scope.len())
    }

    fn restore(&mut self, s: (usize, usize)) {
        self.cur.pos = s.0;
        self.scope.truncate(s.1);
    }

    fn grade_err(&mut self, e: GradeError) -> ParseError {
        self.cur.err(e.to_string())
    }

    /// Optional `^lit`, validated against the mode.
    fn annotation(&mut self, what: &str) -> PResult<Option<String>> {
        if self.cur.eat(&Tok::Caret) {
            let lit = self.cur.literal()?;
            Ok(Some(lit))
        } else {
            let _ = what;
            Ok(None)
        }
    }

    fn grade_ann(&mut self, what: &str) -> PResult<Option<Grade>> {
        let lit = self.annotation(what)?;
        match (self.grades, lit) {
            (Grades::Coeffect(alg), Some(l)) => alg.parse(&l).map(Some).map_err(|e| self.grade_err(e)),
            (Grades::Coeffect(_), None) => Err(self.cur.err(format!("missing grade annotation on {what} in coeffect mode"))),
            (Grades::Effect(_), Some(_)) => Err(self.cur.err(format!("grade annotation illegal in effect mode ({what})"))),
            (Grades::Effect(_), None) => Ok(None),
        }
    }

    fn effect_ann(&mut self, what: &str) -> PResult<Option<Effect>> {
        let lit = self.annotation(what)?;
        match (self.grades, lit) {
            (Grades::Effect(alg), Some(l)) => alg.parse(&l).map(Some).map_err(|e| self.grade_err(e)),
            (Grades::Effect(_), None) => Err(self.cur.err(format!("missing effect annotation on {what} in effect mode"))),
            (Grades::Coeffect(_), Some(_)) => Err(self.cur.err(format!("effect annotation illegal in coeffect mode ({what})"))),
            (Grades::Coeffect(_), None) => Ok(None),
        }
    }

    fn binder(&mut self) -> PResult<String> {
        self.cur.ident(KEYWORDS)
    }

    fn resolve(&mut self, x: &str) -> PResult<usize> {
        match self.scope.iter().rev().position(|n| n == x) {
            Some(i) => Ok(i),
            None => Err(self.cur.err(format!("unbound variable `{x}`"))),
        }
    }

    // ---- types ----

    pub fn comp_type(&mut self) -> PResult<CompType> {
        let s = self.save();
        if let Ok(a) = self.val_type() {
            if self.cur.eat(&Tok::RArrow) {
                let q = self.grade_ann("arrow")?;
                let b = self.comp_type()?;
                return Ok(CompType::arrow(q, a, b));
            }
        }
        self.restore(s);
        let mut t = self.comp_type_atom()?;
        loop {
            if self.cur.eat(&Tok::Amp) {
                t = CompType::with(t, self.comp_type_atom()?);
            } else if self.cur.eat(&Tok::Star) {
                t = CompType::tensor(t, self.comp_type_atom()?);
            } else {
                return Ok(t);
            }
        }
    }

    fn comp_type_atom(&mut self) -> PResult<CompType> {
        if self.cur.eat_kw("F") {
            let q = self.grade_ann("F")?;
            let a = self.val_type_atom()?;
            return Ok(CompType::f(q, a));
        }
        if self.cur.eat(&Tok::LParen) {
            let t = self.comp_type()?;
            self.cur.expect(&Tok::RParen)?;
            return Ok(t);
        }
        let found = self.cur.peek().clone();
        Err(self.cur.err(format!("expected computation type, found {found}")))
    }

    pub fn val_type(&mut self) -> PResult<ValType> {
        let mut t = self.val_type_prod()?;
        while self.cur.eat(&Tok::Plus) {
            t = ValType::sum(t, self.val_type_prod()?);
        }
        Ok(t)
    }

    fn val_type_prod(&mut self) -> PResult<ValType> {
        let mut t = self.val_type_atom()?;
        loop {
            if self.cur.eat(&Tok::Star) {
                t = ValType::prod(t, self.val_type_atom()?);
            } else if self.cur.eat(&Tok::Amp) {
                t = ValType::with(t, self.val_type_atom()?);
            } else {
                return Ok(t);
            }
        }
    }

    fn val_type_atom(&mut self) -> PResult<ValType> {
        match self.cur.peek().clone() {
            Tok::Ident(s) if s == "Unit" => {
                self.cur.bump();
                Ok(ValType::Unit)
            }
            Tok::Ident(s) if s == "U" => {
                self.cur.bump();
                let e = self.effect_ann("U")?;
                let b = self.comp_type_atom()?;
                Ok(ValType::u(e, b))
            }
            Tok::Ident(s) if s != "F" && s.starts_with(|c: char| c.is_ascii_uppercase()) => {
                self.cur.bump();
                Ok(ValType::Base(s))
            }
            Tok::LParen => {
                self.cur.bump();
                let t = self.val_type()?;
                self.cur.expect(&Tok::RParen)?;
                Ok(t)
            }
            other => Err(self.cur.err(format!("expected value type, found {other}"))),
        }
    }

    // ---- values ----

    pub fn value(&mut self) -> PResult<Value> {
        for (kw, inj) in [("inl", Value::inl as fn(Value) -> Value), ("inr", Value::inr)] {
            if self.cur.eat_kw(kw) {
                let v = inj(self.value_postfix()?);
                if self.cur.eat(&Tok::Colon) {
                    let t = self.val_type()?;
                    return Ok(Value::ann(v, t));
                }
                return Ok(v);
            }
        }
        self.value_postfix()
    }

    fn value_postfix(&mut self) -> PResult<Value> {
        let mut v = self.value_atom()?;
        while self.cur.at(&Tok::Dot) && matches!(self.cur.peek_at(1), Tok::Num(n) if n == "1" || n == "2") {
            self.cur.bump();
            let Tok::Num(n) = self.cur.bump() else { unreachable!() };
            if self.mode() == Mode::Effect {
                return Err(self.cur.err("shared-product projection is coeffect-mode only"));
            }
            v = if n == "1" { Value::Fst(Box::new(v)) } else { Value::Snd(Box::new(v)) };
        }
        Ok(v)
    }

    fn value_atom(&mut self) -> PResult<Value> {
        match self.cur.peek().clone() {
            Tok::Ident(s) if s == "inl" || s == "inr" => {
                self.cur.bump();
                let v = self.value_postfix()?;
                Ok(if s == "inl" { Value::inl(v) } else { Value::inr(v) })
            }
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                if !self.scope.contains(&s) && self.is_prim(&s) {
                    return Err(self.cur.err(format!("primitive `{s}` is not a value")));
                }
                self.cur.bump();
                let i = self.resolve(&s)?;
                Ok(Value::Var(i, Name::new(s)))
            }
            Tok::LParen => {
                self.cur.bump();
                if self.cur.eat(&Tok::RParen) {
                    return Ok(Value::Unit);
                }
                let a = self.value()?;
                if self.cur.eat(&Tok::Comma) {
                    let b = self.value()?;
                    self.cur.expect(&Tok::RParen)?;
                    return Ok(Value::pair(a, b));
                }
                if self.cur.eat(&Tok::Colon) {
                    let t = self.val_type()?;
                    self.cur.expect(&Tok::RParen)?;
                    return Ok(match a {
                        Value::Ann(v, _) => Value::ann(*v, t),
                        v => Value::ann(v, t),
                    });
                }
                self.cur.expect(&Tok::RParen)?;
                Ok(a)
            }
            Tok::LBrace => {
                self.cur.bump();
                let m = self.comp()?;
                self.cur.expect(&Tok::RBrace)?;
                Ok(Value::thunk(m))
            }
            Tok::LAngle => {
                if self.mode() == Mode::Effect {
                    return Err(self.cur.err("shared value products are coeffect-mode only"));
                }
                self.cur.bump();
                let a = self.value()?;
                self.cur.expect(&Tok::Comma)?;
                let b = self.value()?;
                self.cur.expect(&Tok::RAngle)?;
                Ok(Value::with(a, b))
            }
            other => Err(self.cur.err(format!("expected value, found {other}"))),
        }
    }

    fn is_prim(&self, s: &str) -> bool {
        match self.grades {
            Grades::Effect(alg) => alg.prim(s).is_some(),
            Grades::Coeffect(_) => s == "tick",
        }
    }

    // ---- computations ----

    pub fn comp(&mut self) -> PResult<Comp> {
        if self.cur.eat(&Tok::Backslash) {
            let x = self.binder()?;
            let q = self.grade_ann("lambda binder")?;
            let t = if self.cur.eat(&Tok::Colon) { Some(self.val_type()?) } else { None };
            self.cur.expect(&Tok::Dot)?;
            self.scope.push(x.clone());
            let m = self.comp();
            self.scope.pop();
            return Ok(Comp::Lam(Name::new(x), q, t, Box::new(m?)));
        }
        if self.cur.eat_kw("let") {
            let x = self.binder()?;
            self.cur.expect(&Tok::LArrow)?;
            let q = self.grade_ann("let")?;
            let m = self.comp()?;
            self.cur.expect_kw("in")?;
            self.scope.push(x.clone());
            let n = self.comp();
            self.scope.pop();
            return Ok(Comp::Let(Name::new(x), q, Box::new(m), Box::new(n?)));
        }
        if self.cur.eat_kw("case") {
            return self.case();
        }
        let s = self.save();
        if let Ok(v) = self.value() {
            if self.cur.eat(&Tok::Semi) {
                let m = self.comp()?;
                return Ok(Comp::seq(v, m));
            }
        }
        self.restore(s);
        self.app()
    }

    fn case(&mut self) -> PResult<Comp> {
        let q = self.grade_ann("case")?;
        let s = self.save();
        let scrut = match self.value() {
            Ok(v) if self.cur.at_kw("of") => Ok(v),
            _ => {
                self.restore(s);
                Err(self.comp()?)
            }
        };
        self.cur.expect_kw("of")?;
        if self.cur.eat(&Tok::LParen) {
            let x = self.binder()?;
            self.cur.expect(&Tok::Comma)?;
            let y = self.binder()?;
            self.cur.expect(&Tok::RParen)?;
            self.cur.expect(&Tok::RArrow)?;
            self.scope.push(x.clone());
            self.scope.push(y.clone());
            let n = self.comp();
            self.scope.truncate(self.scope.len() - 2);
            let n = Box::new(n?);
            let (x, y) = (Name::new(x), Name::new(y));
            return Ok(match scrut {
                Ok(v) => Comp::Split(q, v, x, y, n),
                Err(m) => {
                    if self.mode() == Mode::Effect {
                        return Err(self.cur.err("computation products are coeffect-mode only"));
                    }
                    Comp::TSplit(q, Box::new(m), x, y, n)
                }
            });
        }
        let v = match scrut {
            Ok(v) => v,
            Err(_) => return Err(self.cur.err("sum case needs a value scrutinee")),
        };
        self.cur.expect_kw("inl")?;
        let x = self.binder()?;
        self.cur.expect(&Tok::RArrow)?;
        self.scope.push(x.clone());
        let l = self.comp();
        self.scope.pop();
        let l = l?;
        self.cur.expect(&Tok::Bar)?;
        self.cur.expect_kw("inr")?;
        let y = self.binder()?;
        self.cur.expect(&Tok::RArrow)?;
        self.scope.push(y.clone());
        let r = self.comp();
        self.scope.pop();
        Ok(Comp::Case(q, v, Name::new(x), Box::new(l), Name::new(y), Box::new(r?)))
    }

    fn app(&mut self) -> PResult<Comp> {
        let mut m = self.comp_atom()?;
        loop {
            if self.cur.at(&Tok::Dot) && matches!(self.cur.peek_at(1), Tok::Num(n) if n == "1" || n == "2") {
                self.cur.bump();
                let Tok::Num(n) = self.cur.bump() else { unreachable!() };
                m = if n == "1" { Comp::CFst(Box::new(m)) } else { Comp::CSnd(Box::new(m)) };
                continue;
            }
            let s = self.save();
            match self.value_postfix() {
                Ok(v) if !self.cur.at(&Tok::Bang) => m = Comp::app(m, v),
                _ => {
                    self.restore(s);
                    return Ok(m);
                }
            }
        }
    }

    fn comp_atom(&mut self) -> PResult<Comp> {
        match self.cur.peek().clone() {
            Tok::Ident(s) if s == "return" => {
                self.cur.bump();
                let q = self.grade_ann("return")?;
                let v = self.value()?;
                return Ok(Comp::Return(q, v));
            }
            Tok::Ident(s) if !self.scope.contains(&s) && self.is_prim(&s) => {
                if self.mode() == Mode::Coeffect {
                    return Err(self.cur.err(format!("primitive `{s}` is effect-mode only")));
                }
                self.cur.bump();
                return Ok(Comp::Prim(s));
            }
            Tok::Backslash => return self.comp().map(|m| m),
            Tok::Ident(s) if s == "let" || s == "case" => return self.comp(),
            Tok::LParen => {
                let s = self.save();
                self.cur.bump();
                if let Ok(a) = self.comp() {
                    if self.cur.eat(&Tok::RParen) {
                        return Ok(a);
                    }
                    if self.cur.eat(&Tok::Comma) {
                        if let Ok(b) = self.comp() {
                            if self.cur.eat(&Tok::RParen) {
                                if self.mode() == Mode::Effect {
                                    return Err(self.cur.err("computation products are coeffect-mode only"));
                                }
                                return Ok(Comp::tensor(a, b));
                            }
                        }
                    }
                }
                self.restore(s);
            }
            Tok::LAngle => {
                let s = self.save();
                self.cur.bump();
                if let Ok(a) = self.comp() {
                    if self.cur.eat(&Tok::Comma) {
                        if let Ok(b) = self.comp() {
                            if self.cur.eat(&Tok::RAngle) {
                                return Ok(Comp::cpair(a, b));
                            }
                        }
                    }
                }
                self.restore(s);
            }
            _ => {}
        }
        let v = self.value_postfix()?;
        if self.cur.eat(&Tok::Bang) {
            return Ok(Comp::Force(v));
        }
        let found = self.cur.peek().clone();
        Err(self.cur.err(format!("expected computation, found value followed by {found}")))
    }

    fn context(&mut self) -> PResult<Context> {
        let mut ctx = Context::new();
        if self.cur.at(&Tok::Eof) {
            return Ok(ctx);
        }
        loop {
            let x = self.binder()?;
            self.cur.expect(&Tok::Colon)?;
            let t = self.val_type()?;
            ctx.push(Name::new(x), t);
            if !self.cur.eat(&Tok::Comma) {
                return Ok(ctx);
            }
        }
    }
}

fn whole<T>(src: &str, grades: Grades<'_>, scope: &[String], f: impl FnOnce(&mut Parser<'_>) -> PResult<T>) -> PResult<T> {
    let mut p = Parser::new(src, grades)?;
    p.scope = scope.to_vec();
    let r = f(&mut p).map_err(|e| p.cur.best(e))?;
    p.cur.finish()?;
    Ok(r)
}

/// Parses a computation under the given in-scope names (innermost last).
pub fn parse_comp(src: &str, grades: Grades<'_>, scope: &[String]) -> PResult<Comp> {
    whole(src, grades, scope, |p| p.comp())
}

pub fn parse_value(src: &str, grades: Grades<'_>, scope: &[String]) -> PResult<Value> {
    whole(src, grades, scope, |p| p.value())
}

pub fn parse_val_type(src: &str, grades: Grades<'_>) -> PResult<ValType> {
    whole(src, grades, &[], |p| p.val_type())
}

pub fn parse_comp_type(src: &str, grades: Grades<'_>) -> PResult<CompType> {
    whole(src, grades, &[], |p| p.comp_type())
}

/// Parses `x : A, y : B`.
pub fn parse_context(src: &str, grades: Grades<'_>) -> PResult<Context> {
    whole(src, grades, &[], |p| p.context())
}

/// Parses a `.cbpv` program: optional `-- mode:` and `-- context:` header
/// lines followed by one computation.
pub fn parse_program(src: &str, grades: Grades<'_>) -> PResult<Program> {
    let mut context = Context::new();
    for (k, v) in directives(src) {
        match k.as_str() {
            "mode" => {
                let want = grades.mode().to_string();
                if v != want {
                    return Err(ParseError::new(1, 1, format!("file declares mode `{v}` but {want} mode was requested")));
                }
            }
            "context" => context = parse_context(&v, grades)?,
            _ => {}
        }
    }
    let scope = context.names();
    let body = parse_comp(src, grades, &scope)?;
    Ok(Program {
        mode: grades.mode(),
        context,
        body,
    })
}

/// Reads the `-- mode:` header, if any.
pub fn declared_mode(src: &str) -> Option<Mode> {
    directives(src).into_iter().find(|(k, _)| k == "mode").and_then(|(_, v)| match v.as_str() {
        "effect" => Some(Mode::Effect),
        "coeffect" => Some(Mode::Coeffect),
        _ => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grading::{CoeffectAlgebra, EffectAlgebra};
    use crate::syntax::print::show_comp;

    fn eff(src: &str) -> Comp {
        let alg = EffectAlgebra::nat_cost();
        parse_comp(src, Grades::Effect(&alg), &[]).unwrap()
    }

    fn co(src: &str, scope: &[&str]) -> Comp {
        let alg = CoeffectAlgebra::nat_usage();
        let scope: Vec<String> = scope.iter().map(|s| s.to_string()).collect();
        parse_comp(src, Grades::Coeffect(&alg), &scope).unwrap()
    }

    fn co_err(src: &str) -> ParseError {
        let alg = CoeffectAlgebra::nat_usage();
        parse_comp(src, Grades::Coeffect(&alg), &["x".into()]).unwrap_err()
    }

    #[test]
    fn let_of_ticks() {
        assert_eq!(eff("let x <- tick in tick"), Comp::let_("x", None, Comp::tick(), Comp::tick()));
    }

    #[test]
    fn lambda_and_pair() {
        let alg = CoeffectAlgebra::nat_usage();
        let two = Some(alg.nat(2));
        let one = Some(alg.nat(1));
        let want = Comp::lam("x", two, Comp::ret(one, Value::pair(Value::var(0, "x"), Value::var(0, "x"))));
        assert_eq!(co("\\x^2. return^1 (x, x)", &[]), want);
    }

    #[test]
    fn forms_nest() {
        let m = co("case^1 x of inl a -> return^1 a | inr b -> {return^1 b}!", &["x"]);
        assert!(matches!(m, Comp::Case(..)));
        let m = co("case^1 (x!, x!) of (a, b) -> a!", &["x"]);
        assert!(matches!(m, Comp::TSplit(..)));
        let m = co("case^1 x of (a, b) -> a!", &["x"]);
        assert!(matches!(m, Comp::Split(..)));
        let m = co("<return^1 x, return^1 ()>.2", &["x"]);
        assert!(matches!(m, Comp::CSnd(_)));
        let m = co("x; (\\y^0. return^0 ()) ()", &["x"]);
        assert!(matches!(m, Comp::Seq(..)));
        let m = co("return^1 <x, ()>.1", &["x"]);
        assert!(matches!(m, Comp::Return(_, Value::Fst(_))));
    }

    #[test]
    fn ascriptions() {
        let m = co("return^1 inl () : Unit + Unit", &[]);
        assert!(matches!(m, Comp::Return(_, Value::Ann(..))));
        let m = co("\\x^1 : U F^1 Unit. x!", &[]);
        assert!(matches!(m, Comp::Lam(_, _, Some(ValType::U(..)), _)));
    }

    #[test]
    fn mode_errors() {
        assert!(co_err("return x").msg.contains("missing grade"));
        assert!(co_err("tick").msg.contains("effect-mode"));
        let alg = EffectAlgebra::nat_cost();
        assert!(parse_comp("return^1 ()", Grades::Effect(&alg), &[]).is_err());
        assert!(co_err("return^1 y").msg.contains("unbound"));
    }

    #[test]
    fn types() {
        let alg = EffectAlgebra::nat_cost();
        let t = parse_val_type("U^2 (Unit -> F (Unit * Unit + Unit))", Grades::Effect(&alg)).unwrap();
        assert_eq!(t.to_string(), "U^2 (Unit -> F (Unit * Unit + Unit))");
        let c = CoeffectAlgebra::nat_usage();
        let t = parse_comp_type("A ->^2 F^1 (A * A)", Grades::Coeffect(&c)).unwrap();
        assert_eq!(t.to_string(), "A ->^2 F^1 (A * A)");
        let t = parse_comp_type("F^1 Unit & (F^1 Unit * F^2 Unit)", Grades::Coeffect(&c)).unwrap();
        assert_eq!(parse_comp_type(&t.to_string(), Grades::Coeffect(&c)).unwrap(), t);
    }

    #[test]
    fn program_headers() {
        let c = CoeffectAlgebra::nat_usage();
        let p = parse_program("-- mode: coeffect\n-- context: x : Unit, y : U F^1 Unit\nreturn^2 x", Grades::Coeffect(&c)).unwrap();
        assert_eq!(p.context.len(), 2);
        assert_eq!(p.body, Comp::ret(Some(c.nat(2)), Value::var(1, "x")));
        assert!(parse_program("-- mode: effect\ntick", Grades::Coeffect(&c)).is_err());
    }

    #[test]
    fn print_round_trips() {
        let srcs = [
            "let x <- tick in let x <- tick in (\\y. return y) x",
            "{tick}!",
            "(\\x. \\y. return (x, y)) () {tick}",
            "case inl () : Unit + Unit of inl a -> tick | inr b -> return b",
            "let p <- return ((), ()) in case p of (a, b) -> a; return b",
        ];
        let alg = EffectAlgebra::nat_cost();
        for s in srcs {
            let m = parse_comp(s, Grades::Effect(&alg), &[]).unwrap();
            let out = show_comp(&m, &[]);
            assert_eq!(parse_comp(&out, Grades::Effect(&alg), &[]).unwrap(), m, "{out}");
        }
        let c = CoeffectAlgebra::zero_one_many();
        let srcs = [
            "\\x^w. return^1 (x, x)",
            "case^1 (x!, return^0 ()) of (a, b) -> a!",
            "<return^1 x, (return^1 ()).1>.2",
            "let z <-^0 x! in return^1 <z, ()>.2",
        ];
        for s in srcs {
            let m = parse_comp(s, Grades::Coeffect(&c), &["x".into()]).unwrap();
            let out = show_comp(&m, &["x".into()]);
            assert_eq!(parse_comp(&out, Grades::Coeffect(&c), &["x".into()]).unwrap(), m, "{out}");
        }
    }

    #[test]
    fn shadowed_names_print_fresh() {
        let m = eff("\\x. \\x. return x");
        assert_eq!(show_comp(&m, &[]), "\\x. \\x1. return x1");
    }
}
