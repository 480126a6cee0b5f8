//! Parser for `.lam` source programs.

use super::source::{ExtBind, Latent, STerm, SType};
use super::{Dialect, Lang, SContext};
use crate::grading::{CoeffectAlgebra, Effect, EffectAlgebra, Grade};
use crate::syntax::lexer::{directives, ParseError, Tok};
use crate::syntax::parser::Cursor;

const KEYWORDS: &[&str] = &[
    "let", "in", "case", "of", "inl", "inr", "return", "bind", "box", "unbox", "extract", "extend", "divide",
    "discard", "tick", "Unit", "T", "Box",
];

/// The grading algebra a source dialect draws its annotations from.
#[derive(Clone, Copy, Debug)]
pub enum SrcGrades<'a> {
    Effect(&'a EffectAlgebra),
    Coeffect(&'a CoeffectAlgebra),
}

type PResult<T> = Result<T, ParseError>;

struct SrcParser<'a> {
    cur: Cursor,
    lang: Lang,
    grades: SrcGrades<'a>,
}

impl SrcParser<'_> {
    fn effect(&mut self) -> PResult<Effect> {
        self.cur.expect(&Tok::Caret)?;
        let lit = self.cur.literal()?;
        match self.grades {
            SrcGrades::Effect(a) => a.parse(&lit).map_err(|e| self.cur.err(e.to_string())),
            SrcGrades::Coeffect(_) => Err(self.cur.err("effect annotation in a coeffect dialect")),
        }
    }

    fn grade(&mut self) -> PResult<Grade> {
        self.cur.expect(&Tok::Caret)?;
        let lit = self.cur.literal()?;
        match self.grades {
            SrcGrades::Coeffect(a) => a.parse(&lit).map_err(|e| self.cur.err(e.to_string())),
            SrcGrades::Effect(_) => Err(self.cur.err("grade annotation in an effect dialect")),
        }
    }

    fn name(&mut self) -> PResult<String> {
        self.cur.ident(KEYWORDS)
    }

    fn dialect_err(&mut self, what: &str) -> ParseError {
        let lang = self.lang;
        self.cur.err(format!("{what} is not part of the {lang} calculus"))
    }

    // ---- types ----

    fn ty(&mut self) -> PResult<SType> {
        let a = self.ty_sum()?;
        if self.cur.eat(&Tok::RArrow) {
            let l = match self.lang {
                Lang::Effect => Latent::Eff(self.effect()?),
                Lang::Coeffect => Latent::Co(self.grade()?),
                Lang::Monadic => Latent::Plain,
                Lang::Comonadic => return Err(self.dialect_err("`->`")),
            };
            return Ok(SType::fun(l, a, self.ty()?));
        }
        if self.cur.eat(&Tok::Lollipop) {
            if self.lang != Lang::Comonadic {
                return Err(self.dialect_err("`-o`"));
            }
            return Ok(SType::fun(Latent::Linear, a, self.ty()?));
        }
        Ok(a)
    }

    fn ty_sum(&mut self) -> PResult<SType> {
        let mut t = self.ty_prod()?;
        while self.cur.eat(&Tok::Plus) {
            t = SType::sum(t, self.ty_prod()?);
        }
        Ok(t)
    }

    fn ty_prod(&mut self) -> PResult<SType> {
        let mut t = self.ty_atom()?;
        loop {
            if self.cur.eat(&Tok::Star) {
                t = SType::tensor(t, self.ty_atom()?);
            } else if self.cur.eat(&Tok::Amp) {
                t = SType::with(t, self.ty_atom()?);
            } else {
                return Ok(t);
            }
        }
    }

    fn ty_atom(&mut self) -> PResult<SType> {
        if self.cur.eat_kw("Unit") {
            return Ok(SType::Unit);
        }
        if self.cur.eat_kw("T") {
            let e = self.effect()?;
            return Ok(SType::monad(e, self.ty_atom()?));
        }
        if self.cur.eat_kw("Box") {
            let q = self.grade()?;
            return Ok(SType::boxed(q, self.ty_atom()?));
        }
        if self.cur.eat(&Tok::LParen) {
            let t = self.ty()?;
            self.cur.expect(&Tok::RParen)?;
            return Ok(t);
        }
        let found = self.cur.peek().clone();
        Err(self.cur.err(format!("expected a type, found {found}")))
    }

    // ---- terms ----

    fn split_grade(&mut self) -> PResult<Option<Grade>> {
        if self.lang == Lang::Coeffect {
            Ok(Some(self.grade()?))
        } else {
            Ok(None)
        }
    }

    fn expr(&mut self) -> PResult<STerm> {
        if self.cur.eat(&Tok::Backslash) {
            let x = self.name()?;
            let q = if self.lang == Lang::Coeffect { Some(self.grade()?) } else { None };
            self.cur.expect(&Tok::Colon)?;
            let t = self.ty()?;
            self.cur.expect(&Tok::Dot)?;
            return Ok(STerm::lam(&x, q, t, self.expr()?));
        }
        if self.cur.eat_kw("let") {
            let q = self.split_grade()?;
            self.cur.expect(&Tok::LParen)?;
            let x = self.name()?;
            self.cur.expect(&Tok::Comma)?;
            let y = self.name()?;
            self.cur.expect(&Tok::RParen)?;
            self.cur.expect(&Tok::Eq)?;
            let e = self.expr()?;
            self.cur.expect_kw("in")?;
            return Ok(STerm::split(q, &x, &y, e, self.expr()?));
        }
        if self.cur.eat_kw("case") {
            let q = self.split_grade()?;
            let s = self.expr()?;
            self.cur.expect_kw("of")?;
            self.cur.expect_kw("inl")?;
            let x = self.name()?;
            self.cur.expect(&Tok::RArrow)?;
            let l = self.expr()?;
            self.cur.expect(&Tok::Bar)?;
            self.cur.expect_kw("inr")?;
            let y = self.name()?;
            self.cur.expect(&Tok::RArrow)?;
            return Ok(STerm::case(q, s, &x, l, &y, self.expr()?));
        }
        if self.cur.at_kw("bind") {
            if self.lang != Lang::Monadic {
                return Err(self.dialect_err("`bind`"));
            }
            self.cur.bump();
            let x = self.name()?;
            self.cur.expect(&Tok::Eq)?;
            let e = self.expr()?;
            self.cur.expect_kw("in")?;
            return Ok(STerm::bind(&x, e, self.expr()?));
        }
        if self.cur.at_kw("unbox") {
            if self.lang != Lang::Coeffect {
                return Err(self.dialect_err("`unbox`"));
            }
            self.cur.bump();
            let q = self.grade()?;
            let x = self.name()?;
            self.cur.expect(&Tok::Eq)?;
            let e = self.expr()?;
            self.cur.expect_kw("in")?;
            return Ok(STerm::unbox(q, &x, e, self.expr()?));
        }
        for kw in ["extend", "divide", "discard"] {
            if self.cur.at_kw(kw) && self.lang != Lang::Comonadic {
                return Err(self.dialect_err(&format!("`{kw}`")));
            }
        }
        if self.cur.eat_kw("extend") {
            let q = self.grade()?;
            let mut bs = Vec::new();
            while !self.cur.at_kw("in") {
                let name = self.name()?;
                let grade = self.grade()?;
                self.cur.expect(&Tok::Eq)?;
                let rhs = self.expr()?;
                bs.push(ExtBind { name, grade, rhs });
                if !self.cur.eat(&Tok::Comma) {
                    break;
                }
                if self.cur.at_kw("in") {
                    return Err(self.cur.err("expected a binder after `,`"));
                }
            }
            self.cur.expect_kw("in")?;
            return Ok(STerm::Extend(q, bs, Box::new(self.expr()?)));
        }
        if self.cur.eat_kw("divide") {
            let x = self.name()?;
            let q1 = self.grade()?;
            self.cur.expect(&Tok::Comma)?;
            let y = self.name()?;
            let q2 = self.grade()?;
            self.cur.expect(&Tok::Eq)?;
            let e = self.expr()?;
            self.cur.expect_kw("in")?;
            return Ok(STerm::divide(&x, q1, &y, q2, e, self.expr()?));
        }
        if self.cur.eat_kw("discard") {
            match self.cur.peek().clone() {
                Tok::Ident(s) if s == "_" => {
                    self.cur.bump();
                }
                other => return Err(self.cur.err(format!("expected `_`, found {other}"))),
            }
            self.cur.expect(&Tok::Eq)?;
            let e = self.expr()?;
            self.cur.expect_kw("in")?;
            return Ok(STerm::discard(e, self.expr()?));
        }
        for (kw, left) in [("inl", true), ("inr", false)] {
            if self.cur.eat_kw(kw) {
                let e = self.app()?;
                self.cur.expect(&Tok::Colon)?;
                let t = self.ty()?;
                let e = Box::new(e);
                return Ok(if left { STerm::Inl(t, e) } else { STerm::Inr(t, e) });
            }
        }
        let a = self.app()?;
        if self.cur.eat(&Tok::Semi) {
            return Ok(STerm::seq(a, self.expr()?));
        }
        Ok(a)
    }

    fn starts_item(&self) -> bool {
        match self.cur.peek() {
            Tok::Ident(s) => {
                !KEYWORDS.contains(&s.as_str()) || matches!(s.as_str(), "tick" | "return" | "box" | "extract")
            }
            Tok::LParen | Tok::LAngle => true,
            _ => false,
        }
    }

    fn app(&mut self) -> PResult<STerm> {
        let mut e = self.item()?;
        while self.starts_item() {
            let a = self.item()?;
            e = STerm::app(e, a);
        }
        Ok(e)
    }

    fn item(&mut self) -> PResult<STerm> {
        if self.cur.at_kw("return") {
            if self.lang != Lang::Monadic {
                return Err(self.dialect_err("`return`"));
            }
            self.cur.bump();
            return Ok(STerm::ret(self.postfix()?));
        }
        if self.cur.at_kw("box") {
            if self.lang != Lang::Coeffect {
                return Err(self.dialect_err("`box`"));
            }
            self.cur.bump();
            let q = self.grade()?;
            return Ok(STerm::boxi(q, self.postfix()?));
        }
        if self.cur.at_kw("extract") {
            if self.lang != Lang::Comonadic {
                return Err(self.dialect_err("`extract`"));
            }
            self.cur.bump();
            return Ok(STerm::extract(self.postfix()?));
        }
        self.postfix()
    }

    fn postfix(&mut self) -> PResult<STerm> {
        let mut e = self.atom()?;
        while self.cur.at(&Tok::Dot) {
            match self.cur.peek_at(1).clone() {
                Tok::Num(n) if n == "1" || n == "2" => {
                    self.cur.bump();
                    self.cur.bump();
                    e = if n == "1" { STerm::Fst(Box::new(e)) } else { STerm::Snd(Box::new(e)) };
                }
                _ => break,
            }
        }
        Ok(e)
    }

    fn atom(&mut self) -> PResult<STerm> {
        if self.cur.at_kw("tick") {
            if !matches!(self.lang, Lang::Effect | Lang::Monadic) {
                return Err(self.dialect_err("`tick`"));
            }
            self.cur.bump();
            return Ok(STerm::Tick);
        }
        if self.cur.eat(&Tok::LParen) {
            if self.cur.eat(&Tok::RParen) {
                return Ok(STerm::Unit);
            }
            let a = self.expr()?;
            if self.cur.eat(&Tok::Comma) {
                let c = self.expr()?;
                self.cur.expect(&Tok::RParen)?;
                return Ok(STerm::pair(a, c));
            }
            self.cur.expect(&Tok::RParen)?;
            return Ok(a);
        }
        if self.cur.eat(&Tok::LAngle) {
            let a = self.expr()?;
            self.cur.expect(&Tok::Comma)?;
            let c = self.expr()?;
            self.cur.expect(&Tok::RAngle)?;
            return Ok(STerm::wpair(a, c));
        }
        let x = self.name()?;
        Ok(STerm::Var(x))
    }

    fn context(&mut self) -> PResult<SContext> {
        let mut ctx = Vec::new();
        if self.cur.at(&Tok::Eof) {
            return Ok(ctx);
        }
        loop {
            let x = self.name()?;
            self.cur.expect(&Tok::Colon)?;
            ctx.push((x, self.ty()?));
            if !self.cur.eat(&Tok::Comma) {
                return Ok(ctx);
            }
        }
    }
}

fn whole<T>(src: &str, lang: Lang, grades: SrcGrades<'_>, f: impl FnOnce(&mut SrcParser<'_>) -> PResult<T>) -> PResult<T> {
    let mut p = SrcParser {
        cur: Cursor::new(src)?,
        lang,
        grades,
    };
    let r = f(&mut p).map_err(|e| p.cur.best(e))?;
    p.cur.finish()?;
    Ok(r)
}

pub fn parse_term(src: &str, lang: Lang, grades: SrcGrades<'_>) -> PResult<STerm> {
    whole(src, lang, grades, |p| p.expr())
}

pub fn parse_type(src: &str, lang: Lang, grades: SrcGrades<'_>) -> PResult<SType> {
    whole(src, lang, grades, |p| p.ty())
}

pub fn parse_scontext(src: &str, lang: Lang, grades: SrcGrades<'_>) -> PResult<SContext> {
    whole(src, lang, grades, |p| p.context())
}

/// A parsed `.lam` file.
#[derive(Clone, Debug)]
pub struct SourceProgram {
    pub dialect: Option<Dialect>,
    pub context: SContext,
    pub body: STerm,
}

/// Reads the `-- dialect:` header without parsing the body.
pub fn declared_dialect(src: &str) -> Result<Option<Dialect>, ParseError> {
    match directives(src).into_iter().find(|(k, _)| k == "dialect") {
        Some((_, v)) => v.parse().map(Some).map_err(|e: String| ParseError::new(1, 1, e)),
        None => Ok(None),
    }
}

/// Parses a `.lam` program for the given calculus, honouring an optional
/// `-- context:` header.
pub fn parse_source(src: &str, lang: Lang, grades: SrcGrades<'_>) -> PResult<SourceProgram> {
    let dialect = declared_dialect(src)?;
    if let Some(d) = dialect {
        if d.lang != lang {
            return Err(ParseError::new(1, 1, format!("file declares dialect `{d}`, which is not a {lang} dialect")));
        }
    }
    let mut context = Vec::new();
    if let Some((_, v)) = directives(src).into_iter().find(|(k, _)| k == "context") {
        context = parse_scontext(&v, lang, grades)?;
    }
    let body = parse_term(src, lang, grades)?;
    Ok(SourceProgram { dialect, context, body })
}
