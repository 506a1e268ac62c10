//! Factor grammar:
//!
//! ```text
//! factor := kind '(' args? ')'
//! args := arg (',' arg)*
//! arg  := [name '='] number
//! ```
//!
//! Whitespace is allowed between tokens. Error offsets are 1-based character
//! positions, so an unexpected end of `exp(c=2` is reported at 8.

use super::{FactorFn, FactorKind};
use crate::error::{GeomError, ParseError};

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    _src: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str) -> Self {
        Self {
            chars: src.chars().collect(),
            pos: 0,
            _src: src,
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn err(&self, expected: &str) -> ParseError {
        ParseError::new(self.pos + 1, expected)
    }

    fn expect(&mut self, c: char, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(what))
        }
    }

    fn ident(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self
            .chars
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_')
        {
            if self.pos == start && self.chars[self.pos].is_ascii_digit() {
                break;
            }
            self.pos += 1;
        }
        (self.pos > start).then(|| self.chars[start..self.pos].iter().collect())
    }

    fn number(&mut self) -> Result<f64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let at = |p: usize| self.chars.get(p).copied();
        let mut p = self.pos;
        if matches!(at(p), Some('+' | '-')) {
            p += 1;
        }
        let digits_from = p;
        while at(p).is_some_and(|c| c.is_ascii_digit() || c == '.') {
            p += 1;
        }
        if p == digits_from {
            return Err(self.err("number"));
        }
        if matches!(at(p), Some('e' | 'E')) {
            let mut q = p + 1;
            if matches!(at(q), Some('+' | '-')) {
                q += 1;
            }
            let exp_from = q;
            while at(q).is_some_and(|c| c.is_ascii_digit()) {
                q += 1;
            }
            if q > exp_from {
                p = q;
            }
        }
        let text: String = self.chars[start..p].iter().collect();
        match text.parse::<f64>() {
            Ok(v) => {
                self.pos = p;
                Ok(v)
            }
            Err(_) => Err(self.err("number")),
        }
    }
}

/// Parse a factor expression such as `exp(c=2,d=0.5)` or `poly(1,0,2)`.
pub fn parse_factor(text: &str) -> Result<FactorFn, GeomError> {
    let mut cur = Cursor::new(text);
    let kind_at = {
        cur.skip_ws();
        cur.pos
    };
    let name = cur.ident().ok_or_else(|| cur.err("factor kind"))?;
    let kind = FactorKind::from_name(&name.to_ascii_lowercase())
        .ok_or_else(|| ParseError::new(kind_at + 1, "factor kind"))?;
    cur.expect('(', "'('")?;

    let names = kind.param_names();
    let mut slots: Vec<Option<f64>> = vec![None; names.len()];
    let mut positional: Vec<f64> = Vec::new();
    let mut seen_named = false;

    if cur.peek() != Some(')') {
        loop {
            let arg_at = {
                cur.skip_ws();
                cur.pos
            };
            let save = cur.pos;
            let named = match cur.ident() {
                Some(id) if cur.peek() == Some('=') => {
                    cur.pos += 1;
                    Some(id)
                }
                _ => {
                    cur.pos = save;
                    None
                }
            };
            let value = cur.number()?;
            match named {
                Some(id) => {
                    let i = names.iter().position(|n| *n == id).ok_or_else(|| {
                        ParseError::new(arg_at + 1, format!("parameter of {}", kind.name()))
                    })?;
                    if slots[i].is_some() {
                        return Err(
                            ParseError::new(arg_at + 1, format!("no repeat of `{id}`")).into()
                        );
                    }
                    slots[i] = Some(value);
                    seen_named = true;
                }
                None if seen_named => {
                    return Err(
                        ParseError::new(arg_at + 1, "named argument after a named one").into(),
                    );
                }
                None if kind == FactorKind::Poly => positional.push(value),
                None => {
                    let i = positional.len();
                    if i >= slots.len() {
                        return Err(ParseError::new(arg_at + 1, "')'").into());
                    }
                    slots[i] = Some(value);
                    positional.push(value);
                }
            }
            match cur.peek() {
                Some(',') => cur.pos += 1,
                Some(')') => break,
                _ => return Err(cur.err("',' or ')'").into()),
            }
        }
    }
    cur.expect(')', "')'")?;
    if cur.peek().is_some() {
        return Err(cur.err("end of input").into());
    }

    let params = if kind == FactorKind::Poly {
        positional
    } else {
        let mut params = Vec::with_capacity(names.len());
        for (slot, name) in slots.iter().zip(names) {
            match slot.or_else(|| kind.default_param(name)) {
                Some(v) => params.push(v),
                None => {
                    return Err(ParseError::new(cur.pos + 1, format!("value for `{name}`")).into())
                }
            }
        }
        params
    };
    FactorFn::new(kind, params)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_arguments() {
        let f = parse_factor("exp(c=2,d=0.5)").unwrap();
        assert_eq!(f.kind, FactorKind::Exp);
        assert_eq!(f.params, vec![2.0, 0.5]);
    }

    #[test]
    fn power_family() {
        let f = parse_factor("powerfam(m=2,n=1,l=0)").unwrap();
        assert_eq!(f.kind, FactorKind::PowerFam);
        assert_eq!(f.params, vec![2.0, 1.0, 0.0]);
    }

    #[test]
    fn unclosed_argument_list() {
        match parse_factor("exp(c=2") {
            Err(GeomError::Parse(e)) => assert_eq!(e.offset, 8),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn positional_and_defaults() {
        assert_eq!(parse_factor("pow(2)").unwrap(), FactorFn::pow(2.0));
        assert_eq!(
            parse_factor(" exp( 1 , 1 ) ").unwrap(),
            FactorFn::exp(1.0, 1.0)
        );
        assert_eq!(
            parse_factor("poly(1,0,2)").unwrap().params,
            vec![1.0, 0.0, 2.0]
        );
        assert_eq!(
            parse_factor("sin(a=2)").unwrap().params,
            vec![2.0, 1.0, 0.0]
        );
        assert_eq!(
            parse_factor("exp(d=-1e-1, c=3)").unwrap().params,
            vec![3.0, -0.1]
        );
    }

    #[test]
    fn rejections() {
        for bad in [
            "",
            "foo(1)",
            "exp",
            "exp(1,",
            "exp(c=1,c=2)",
            "exp(q=1,d=1)",
            "exp(1)",
            "exp(1,2,3)",
            "exp(1,2)x",
            "poly()",
        ] {
            assert!(parse_factor(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn unknown_kind_points_at_the_name() {
        match parse_factor("  bogus(1)") {
            Err(GeomError::Parse(e)) => assert_eq!(e.offset, 3),
            other => panic!("{other:?}"),
        }
    }
}
