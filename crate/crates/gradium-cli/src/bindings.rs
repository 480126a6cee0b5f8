//! `name=value` lists given on the command line.

/// Splits `x=(), y=(a, b)` at top-level commas.
fn split_top(src: &str) -> Vec<&str> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            _ if src[i..].starts_with("<junk>") => i += 5,
            b'<' if bytes.get(i + 1) == Some(&b'-') => i += 1,
            b'-' if matches!(bytes.get(i + 1), Some(b'>') | Some(b'o')) => i += 1,
            b'(' | b'{' | b'[' | b'<' => depth += 1,
            b')' | b'}' | b']' | b'>' => depth -= 1,
            b',' if depth == 0 => {
                out.push(&src[start..i]);
                start = i + 1;
            }
            _ => {}
        }
        i += 1;
    }
    out.push(&src[start..]);
    out
}

/// Parses a binding list into `(name, text)` pairs in order.
pub fn parse_bindings(src: &str) -> Result<Vec<(String, String)>, String> {
    if src.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out: Vec<(String, String)> = Vec::new();
    for part in split_top(src) {
        let Some((k, v)) = part.split_once('=') else {
            return Err(format!("expected `name=value`, found `{}`", part.trim()));
        };
        let k = k.trim();
        if k.is_empty() || !k.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'') {
            return Err(format!("`{k}` is not a variable name"));
        }
        if out.iter().any(|(n, _)| n == k) {
            return Err(format!("`{k}` is bound twice"));
        }
        out.push((k.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(src: &str) -> Vec<(String, String)> {
        parse_bindings(src).unwrap()
    }

    #[test]
    fn simple() {
        assert_eq!(names("x=2,y=0"), [("x".into(), "2".into()), ("y".into(), "0".into())]);
    }

    #[test]
    fn nested_commas_and_arrows() {
        let got = names("x=((), ()), y=<junk>, z={\\a^1 : Unit -> F Unit. return^1 a}");
        assert_eq!(got.len(), 3);
        assert_eq!(got[0].1, "((), ())");
        assert_eq!(got[1].1, "<junk>");
        assert_eq!(got[2].0, "z");
    }

    #[test]
    fn with_pairs_nest() {
        assert_eq!(names("p=<(), ()>").len(), 1);
    }

    #[test]
    fn rejects_duplicates_and_garbage() {
        assert!(parse_bindings("x=1,x=2").is_err());
        assert!(parse_bindings("x").is_err());
        assert!(parse_bindings("=1").is_err());
    }
}
