//! Byte cursor shared by the set and function parsers.

use num_bigint::BigInt;

use crate::error::ParseError;
use crate::exact::{ExtendedReal, Scalar};

pub(crate) struct Cursor<'a> {
    pub src: &'a str,
    pub pos: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str) -> Self {
        Cursor { src, pos: 0 }
    }

    pub fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub fn skip_ws(&mut self) {
        while let Some(c) = self.rest().chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    pub fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    /// Peek without skipping whitespace.
    pub fn peek_raw(&self) -> Option<char> {
        self.rest().chars().next()
    }

    pub fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub fn eat_str(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected {c:?}")))
        }
    }

    pub fn error(&mut self, msg: impl Into<String>) -> ParseError {
        self.skip_ws();
        let found = match self.peek_raw() {
            Some(c) => format!(", found {c:?}"),
            None => ", found end of input".to_string(),
        };
        ParseError::syntax(self.pos, format!("{}{}", msg.into(), found))
    }

    /// Identifier `[A-Za-z_][A-Za-z0-9_]*` without consuming it.
    pub fn peek_ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let rest = self.rest();
        let mut end = 0;
        for (i, c) in rest.char_indices() {
            let ok = if i == 0 { c.is_ascii_alphabetic() || c == '_' } else { c.is_ascii_alphanumeric() || c == '_' };
            if !ok {
                break;
            }
            end = i + c.len_utf8();
        }
        (end > 0).then(|| &rest[..end])
    }

    pub fn ident(&mut self) -> Option<(usize, &'a str)> {
        let id = self.peek_ident()?;
        let start = self.pos;
        self.pos += id.len();
        Some((start, id))
    }

    fn digits(&mut self) -> &'a str {
        let rest = self.rest();
        let end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        self.pos += end;
        &rest[..end]
    }

    /// Unsigned number: digits with optional fraction and exponent, or
    /// `p/q` written without spaces.
    pub fn unsigned_number(&mut self) -> Result<Scalar, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let int_part = self.digits();
        let mut frac = "";
        if self.peek_raw() == Some('.') {
            self.pos += 1;
            frac = self.digits();
        }
        if int_part.is_empty() && frac.is_empty() {
            self.pos = start;
            return Err(self.error("expected a number"));
        }
        // exponent only when followed by a digit or sign+digit
        let r = self.rest();
        if r.starts_with(['e', 'E']) {
            let tail = &r[1..];
            let tail = tail.strip_prefix(['+', '-']).unwrap_or(tail);
            if tail.starts_with(|c: char| c.is_ascii_digit()) {
                self.pos += r.len() - tail.len();
                self.digits();
            }
        }
        let text = &self.src[start..self.pos];
        let mut value = Scalar::parse(text).map_err(|_| ParseError::syntax(start, format!("bad number {text:?}")))?;
        if frac.is_empty() && !text.contains(['e', 'E']) {
            let r = self.rest();
            if r.starts_with('/') && r[1..].starts_with(|c: char| c.is_ascii_digit()) {
                self.pos += 1;
                let dstart = self.pos;
                let d = self.digits();
                let d: BigInt = d.parse().map_err(|_| ParseError::syntax(dstart, "bad denominator"))?;
                value = Scalar::from_parts(value.numer().clone(), d)
                    .map_err(|_| ParseError::syntax(dstart, "zero denominator"))?;
            }
        }
        Ok(value)
    }

    pub fn signed_number(&mut self) -> Result<Scalar, ParseError> {
        let neg = self.eat('-');
        if !neg {
            self.eat('+');
        }
        let v = self.unsigned_number()?;
        Ok(if neg { -v } else { v })
    }

    /// Number or `inf` / `-inf`.
    pub fn extended(&mut self) -> Result<ExtendedReal, ParseError> {
        let save = self.pos;
        let neg = self.eat('-');
        if !neg {
            self.eat('+');
        }
        if self.peek_ident() == Some("inf") {
            self.ident();
            return Ok(if neg { ExtendedReal::NegInf } else { ExtendedReal::PosInf });
        }
        self.pos = save;
        self.signed_number().map(ExtendedReal::Finite)
    }

    pub fn unsigned_int(&mut self) -> Result<u64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let d = self.digits();
        if d.is_empty() {
            return Err(self.error("expected an integer"));
        }
        d.parse().map_err(|_| ParseError::syntax(start, "integer too large"))
    }
}
