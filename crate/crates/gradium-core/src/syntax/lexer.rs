use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Num(String),
    Backslash,
    Dot,
    Caret,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LAngle,
    RAngle,
    Comma,
    Semi,
    Bang,
    Colon,
    LArrow,
    RArrow,
    Lollipop,
    Bar,
    Star,
    Amp,
    Plus,
    Eq,
    Junk,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(s) | Tok::Num(s) => return write!(f, "`{s}`"),
            Tok::Backslash => "`\\`",
            Tok::Dot => "`.`",
            Tok::Caret => "`^`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::LBrace => "`{`",
            Tok::RBrace => "`}`",
            Tok::LAngle => "`<`",
            Tok::RAngle => "`>`",
            Tok::Comma => "`,`",
            Tok::Semi => "`;`",
            Tok::Bang => "`!`",
            Tok::Colon => "`:`",
            Tok::LArrow => "`<-`",
            Tok::RArrow => "`->`",
            Tok::Lollipop => "`-o`",
            Tok::Bar => "`|`",
            Tok::Star => "`*`",
            Tok::Amp => "`&`",
            Tok::Plus => "`+`",
            Tok::Eq => "`=`",
            Tok::Junk => "`<junk>`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spanned {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, msg: impl Into<String>) -> Self {
        Self {
            line,
            col,
            msg: msg.into(),
        }
    }
}

/// Splits source text into tokens. `--` starts a comment running to the end
/// of the line.
pub fn lex(src: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let adv = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            adv(1, &mut i, &mut col);
            continue;
        }
        let next = chars.get(i + 1).copied();
        if c == '-' && next == Some('-') {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let rest: String = chars[i..chars.len().min(i + 6)].iter().collect();
        let (tok, n) = if rest.starts_with("<junk>") {
            (Tok::Junk, 6)
        } else if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_' || chars[j] == '\'') {
                j += 1;
            }
            (Tok::Ident(chars[i..j].iter().collect()), j - i)
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            (Tok::Num(chars[i..j].iter().collect()), j - i)
        } else {
            match (c, next) {
                ('<', Some('-')) => (Tok::LArrow, 2),
                ('-', Some('>')) => (Tok::RArrow, 2),
                ('-', Some('o')) => (Tok::Lollipop, 2),
                ('\\', _) | ('λ', _) => (Tok::Backslash, 1),
                ('ω', _) => (Tok::Ident("w".into()), 1),
                ('.', _) => (Tok::Dot, 1),
                ('^', _) => (Tok::Caret, 1),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                ('{', _) => (Tok::LBrace, 1),
                ('}', _) => (Tok::RBrace, 1),
                ('<', _) => (Tok::LAngle, 1),
                ('>', _) => (Tok::RAngle, 1),
                (',', _) => (Tok::Comma, 1),
                (';', _) => (Tok::Semi, 1),
                ('!', _) => (Tok::Bang, 1),
                (':', _) => (Tok::Colon, 1),
                ('|', _) => (Tok::Bar, 1),
                ('*', _) | ('×', _) => (Tok::Star, 1),
                ('&', _) => (Tok::Amp, 1),
                ('+', _) => (Tok::Plus, 1),
                ('=', _) => (Tok::Eq, 1),
                _ => return Err(ParseError::new(l0, c0, format!("unexpected character `{c}`"))),
            }
        };
        out.push(Spanned { tok, line: l0, col: c0 });
        adv(n, &mut i, &mut col);
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

/// Reads `-- key: value` directives from the leading comment block.
pub fn directives(src: &str) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for line in src.lines() {
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let Some(body) = t.strip_prefix("--") else { break };
        if let Some((k, v)) = body.split_once(':') {
            let k = k.trim();
            if !k.is_empty() && k.chars().all(|c| c.is_ascii_alphanumeric() || c == '-') {
                out.push((k.to_string(), v.trim().to_string()));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexes_arrows_and_comments() {
        let toks: Vec<Tok> = lex("let x <-^2 tick in -- note\n x.1 -> <junk>")
            .unwrap()
            .into_iter()
            .map(|s| s.tok)
            .collect();
        assert_eq!(
            toks,
            vec![
                Tok::Ident("let".into()),
                Tok::Ident("x".into()),
                Tok::LArrow,
                Tok::Caret,
                Tok::Num("2".into()),
                Tok::Ident("tick".into()),
                Tok::Ident("in".into()),
                Tok::Ident("x".into()),
                Tok::Dot,
                Tok::Num("1".into()),
                Tok::RArrow,
                Tok::Junk,
                Tok::Eof
            ]
        );
    }

    #[test]
    fn reads_header_directives() {
        let d = directives("-- mode: coeffect\n-- context: x : Unit\n\nreturn^1 x\n-- mode: effect");
        assert_eq!(d, vec![("mode".into(), "coeffect".into()), ("context".into(), "x : Unit".into())]);
    }

    #[test]
    fn reports_position() {
        let e = lex("tick\n  #").unwrap_err();
        assert_eq!((e.line, e.col), (2, 3));
    }
}
