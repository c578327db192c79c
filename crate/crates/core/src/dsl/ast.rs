use std::fmt;

use crate::exact::Scalar;
use crate::sets::IntervalSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    Sin,
    Cos,
    Abs,
    IndicatorQ,
    Thomae,
}

impl Atom {
    pub fn name(self) -> &'static str {
        match self {
            Atom::Sin => "sin",
            Atom::Cos => "cos",
            Atom::Abs => "abs",
            Atom::IndicatorQ => "indicatorQ",
            Atom::Thomae => "thomae",
        }
    }

    pub fn from_name(s: &str) -> Option<Atom> {
        Some(match s {
            "sin" => Atom::Sin,
            "cos" => Atom::Cos,
            "abs" => Atom::Abs,
            "indicatorQ" => Atom::IndicatorQ,
            "thomae" => Atom::Thomae,
            _ => return None,
        })
    }

    /// Atoms whose value depends on the rationality tag of the argument.
    pub fn is_arithmetic(self) -> bool {
        matches!(self, Atom::IndicatorQ | Atom::Thomae)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Exponent {
    Int(i32),
    /// The sequence index, only in sequence formulas.
    Var,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    /// Nonnegative literal; negatives are written with `Neg`.
    Const(Scalar),
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Exponent),
    Func(Atom, Box<Expr>),
    Piecewise { branches: Vec<(IntervalSet, Expr)>, default: Option<Box<Expr>> },
}

impl Expr {
    pub fn constant(c: Scalar) -> Expr {
        if c.is_negative() {
            Expr::Neg(Box::new(Expr::Const(-c)))
        } else {
            Expr::Const(c)
        }
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Div(Box::new(a), Box::new(b))
    }

    pub fn func(f: Atom, a: Expr) -> Expr {
        Expr::Func(f, Box::new(a))
    }

    pub fn pow(a: Expr, k: i32) -> Expr {
        Expr::Pow(Box::new(a), Exponent::Int(k))
    }

    pub fn neg(a: Expr) -> Expr {
        Expr::Neg(Box::new(a))
    }

    /// Replace the variable with another expression.
    pub fn substitute(&self, with: &Expr) -> Expr {
        let s = |e: &Expr| Box::new(e.substitute(with));
        match self {
            Expr::Const(c) => Expr::Const(c.clone()),
            Expr::Var => with.clone(),
            Expr::Neg(a) => Expr::Neg(s(a)),
            Expr::Add(a, b) => Expr::Add(s(a), s(b)),
            Expr::Sub(a, b) => Expr::Sub(s(a), s(b)),
            Expr::Mul(a, b) => Expr::Mul(s(a), s(b)),
            Expr::Div(a, b) => Expr::Div(s(a), s(b)),
            Expr::Pow(a, e) => Expr::Pow(s(a), e.clone()),
            Expr::Func(f, a) => Expr::Func(*f, s(a)),
            Expr::Piecewise { .. } => {
                // guards refer to the variable, so only substitution of the
                // variable itself is meaningful
                if *with == Expr::Var {
                    self.clone()
                } else {
                    panic!("piecewise expressions cannot be composed")
                }
            }
        }
    }

    pub fn uses_atom(&self, pred: &dyn Fn(Atom) -> bool) -> bool {
        match self {
            Expr::Const(_) | Expr::Var => false,
            Expr::Neg(a) | Expr::Pow(a, _) => a.uses_atom(pred),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.uses_atom(pred) || b.uses_atom(pred)
            }
            Expr::Func(f, a) => pred(*f) || a.uses_atom(pred),
            Expr::Piecewise { branches, default } => {
                branches.iter().any(|(_, e)| e.uses_atom(pred)) || default.as_ref().is_some_and(|d| d.uses_atom(pred))
            }
        }
    }

    pub fn has_piecewise(&self) -> bool {
        match self {
            Expr::Const(_) | Expr::Var => false,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Func(_, a) => a.has_piecewise(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => a.has_piecewise() || b.has_piecewise(),
            Expr::Piecewise { .. } => true,
        }
    }

    /// Guards of top-level piecewise nodes, used to split intervals.
    pub fn guard_breakpoints(&self, out: &mut Vec<Scalar>) {
        match self {
            Expr::Const(_) | Expr::Var => {}
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Func(_, a) => a.guard_breakpoints(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.guard_breakpoints(out);
                b.guard_breakpoints(out);
            }
            Expr::Piecewise { branches, default } => {
                for (g, e) in branches {
                    for p in g.pieces() {
                        out.extend(p.lo.as_finite().cloned());
                        out.extend(p.hi.as_finite().cloned());
                    }
                    e.guard_breakpoints(out);
                }
                if let Some(d) = default {
                    d.guard_breakpoints(out);
                }
            }
        }
    }

    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Const(c) if !c.is_integer() => 4,
            _ => 5,
        }
    }

    fn write_prec(&self, f: &mut fmt::Formatter<'_>, min: u8, var: &str) -> fmt::Result {
        if self.prec() < min {
            write!(f, "(")?;
            self.write_prec(f, 0, var)?;
            return write!(f, ")");
        }
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var => write!(f, "{var}"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                a.write_prec(f, 3, var)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                a.write_prec(f, 1, var)?;
                write!(f, "{}", if matches!(self, Expr::Add(..)) { " + " } else { " - " })?;
                b.write_prec(f, 2, var)
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.write_prec(f, 2, var)?;
                write!(f, "{}", if matches!(self, Expr::Mul(..)) { " * " } else { " / " })?;
                b.write_prec(f, 3, var)
            }
            Expr::Pow(a, e) => {
                a.write_prec(f, 5, var)?;
                match e {
                    Exponent::Int(k) => write!(f, "^{k}"),
                    Exponent::Var => write!(f, "^{var}"),
                }
            }
            Expr::Func(g, a) => {
                write!(f, "{}(", g.name())?;
                a.write_prec(f, 0, var)?;
                write!(f, ")")
            }
            Expr::Piecewise { branches, default } => {
                write!(f, "piecewise{{ ")?;
                for (g, e) in branches {
                    write!(f, "{g} -> ")?;
                    e.write_prec(f, 0, var)?;
                    write!(f, "; ")?;
                }
                if let Some(d) = default {
                    write!(f, "else -> ")?;
                    d.write_prec(f, 0, var)?;
                    write!(f, " ")?;
                }
                write!(f, "}}")
            }
        }
    }

    pub fn display_with<'a>(&'a self, var: &'a str) -> impl fmt::Display + 'a {
        struct D<'a>(&'a Expr, &'a str);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.write_prec(f, 0, self.1)
            }
        }
        D(self, var)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(f, 0, "x")
    }
}
