use crate::dsl::ast::{Atom, Exponent, Expr};
use crate::error::{ParseError, ParseErrorKind};
use crate::sets::parse_set;
use crate::text::Cursor;

struct Parser<'a> {
    cur: Cursor<'a>,
    var: &'a str,
    allow_var_exponent: bool,
}

/// Parse an expression in the variable `var`. `allow_var_exponent` enables
/// `(-1)^n` style exponents.
pub fn parse_expr(src: &str, var: &str, allow_var_exponent: bool) -> Result<Expr, ParseError> {
    let mut p = Parser { cur: Cursor::new(src), var, allow_var_exponent };
    if p.cur.at_end() {
        return Err(ParseError::syntax(0, "empty expression"));
    }
    let e = p.expr()?;
    if !p.cur.at_end() {
        return Err(p.cur.error("unexpected trailing input"));
    }
    Ok(e)
}

impl<'a> Parser<'a> {
    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.cur.eat('+') {
                acc = Expr::add(acc, self.term()?);
            } else if self.peek_minus_operator() {
                self.cur.eat('-');
                acc = Expr::sub(acc, self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn peek_minus_operator(&mut self) -> bool {
        // "->" belongs to piecewise syntax
        self.cur.peek() == Some('-') && !self.cur.rest().starts_with("->")
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.cur.eat('*') {
                acc = Expr::mul(acc, self.unary()?);
            } else if self.cur.eat('/') {
                acc = Expr::div(acc, self.unary()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek_minus_operator() {
            self.cur.eat('-');
            return Ok(Expr::neg(self.unary()?));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.base()?;
        if !self.cur.eat('^') {
            return Ok(base);
        }
        if self.allow_var_exponent && self.cur.peek_ident() == Some(self.var) {
            self.cur.ident();
            return Ok(Expr::Pow(Box::new(base), Exponent::Var));
        }
        let neg = self.cur.eat('-');
        let start = self.cur.pos;
        let k = self.cur.unsigned_int()?;
        let k = i32::try_from(k).map_err(|_| ParseError::syntax(start, "exponent too large"))?;
        Ok(Expr::pow(base, if neg { -k } else { k }))
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        match self.cur.peek() {
            None => Err(self.cur.error("expected an expression")),
            Some(c) if c.is_ascii_digit() || c == '.' => Ok(Expr::Const(self.cur.unsigned_number()?)),
            Some('(') => {
                self.cur.eat('(');
                let e = self.expr()?;
                self.cur.expect(')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let (start, id) = self.cur.ident().expect("peeked letter");
                if id == self.var {
                    return Ok(Expr::Var);
                }
                if id == "piecewise" {
                    return self.piecewise();
                }
                let Some(atom) = Atom::from_name(id) else {
                    return Err(ParseError { offset: start, kind: ParseErrorKind::UnknownIdentifier(id.to_string()) });
                };
                self.cur.expect('(')?;
                let mut args = vec![self.expr()?];
                while self.cur.eat(',') {
                    args.push(self.expr()?);
                }
                self.cur.expect(')')?;
                if args.len() != 1 {
                    return Err(ParseError {
                        offset: start,
                        kind: ParseErrorKind::Arity { name: id.to_string(), expected: 1, found: args.len() },
                    });
                }
                Ok(Expr::func(atom, args.pop().expect("one arg")))
            }
            Some(_) => Err(self.cur.error("expected an expression")),
        }
    }

    fn piecewise(&mut self) -> Result<Expr, ParseError> {
        self.cur.expect('{')?;
        let mut branches: Vec<(crate::sets::IntervalSet, Expr)> = Vec::new();
        let mut default = None;
        loop {
            if self.cur.eat('}') {
                break;
            }
            if self.cur.peek_ident() == Some("else") {
                self.cur.ident();
                if !self.cur.eat_str("->") {
                    return Err(self.cur.error("expected '->'"));
                }
                default = Some(Box::new(self.expr()?));
                self.cur.eat(';');
                self.cur.expect('}')?;
                break;
            }
            let gstart = {
                self.cur.skip_ws();
                self.cur.pos
            };
            let guard = parse_set(&mut self.cur)?;
            if guard.is_empty() {
                return Err(ParseError { offset: gstart, kind: ParseErrorKind::EmptyGuard });
            }
            if branches.iter().any(|(g, _)| !g.intersection(&guard).is_empty()) {
                return Err(ParseError { offset: gstart, kind: ParseErrorKind::GuardOverlap });
            }
            if !self.cur.eat_str("->") {
                return Err(self.cur.error("expected '->'"));
            }
            let e = self.expr()?;
            branches.push((guard, e));
            if !self.cur.eat(';') {
                self.cur.expect('}')?;
                break;
            }
        }
        if branches.is_empty() {
            return Err(self.cur.error("piecewise needs at least one guarded branch"));
        }
        Ok(Expr::Piecewise { branches, default })
    }
}
