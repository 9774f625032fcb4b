//! One-variable expression language in `t`: tokenizer, parser, evaluator,
//! printer and symbolic differentiator.

mod diff;
mod lexer;
mod parser;

use std::fmt;

use thiserror::Error;

pub use diff::{diff, simplify};
pub use lexer::{tokenize, Token, TokenKind};
pub use parser::parse;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("unexpected character '{found}' at offset {offset}")]
    Lex { offset: usize, found: char },

    #[error("parse error at offset {offset}: expected {expected}")]
    Parse { offset: usize, expected: String },

    #[error("exponent at offset {offset} depends on t; only constant exponents are supported")]
    NonConstantExponent { offset: usize },

    #[error("unknown function `{name}` at offset {offset}")]
    UnknownFunction { name: String, offset: usize },

    #[error("unknown variable `{name}` at offset {offset}; the only variable is `t`")]
    UnknownVariable { name: String, offset: usize },

    #[error("{0}")]
    Domain(String),
}

impl ExprError {
    /// Source offset for lexing and parsing errors.
    pub fn offset(&self) -> Option<usize> {
        match self {
            ExprError::Lex { offset, .. }
            | ExprError::Parse { offset, .. }
            | ExprError::NonConstantExponent { offset }
            | ExprError::UnknownFunction { offset, .. }
            | ExprError::UnknownVariable { offset, .. } => Some(*offset),
            ExprError::Domain(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Ln,
    Sin,
    Cos,
    Sqrt,
}

impl Func {
    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "exp" => Func::Exp,
            "ln" => Func::Ln,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "sqrt" => Func::Sqrt,
            _ => return None,
        })
    }

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Ln => "ln",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sqrt => "sqrt",
        }
    }

    fn apply(self, x: f64) -> Result<f64, ExprError> {
        match self {
            Func::Exp => Ok(x.exp()),
            Func::Ln if x > 0.0 => Ok(x.ln()),
            Func::Sqrt if x > 0.0 => Ok(x.sqrt()),
            Func::Ln | Func::Sqrt => Err(ExprError::Domain(format!(
                "{} of non-positive argument {x}",
                self.name()
            ))),
            Func::Sin => Ok(x.sin()),
            Func::Cos => Ok(x.cos()),
        }
    }
}

/// Expression tree in the single variable `t`. Powers carry a constant
/// exponent.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, f64),
    Neg(Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn var() -> Expr {
        Expr::Var
    }

    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    pub fn powf(self, exponent: f64) -> Expr {
        Expr::Pow(Box::new(self), exponent)
    }

    pub fn call(func: Func, arg: Expr) -> Expr {
        Expr::Call(func, Box::new(arg))
    }

    pub fn exp(self) -> Expr {
        Expr::call(Func::Exp, self)
    }

    pub fn ln(self) -> Expr {
        Expr::call(Func::Ln, self)
    }

    pub fn sin(self) -> Expr {
        Expr::call(Func::Sin, self)
    }

    pub fn cos(self) -> Expr {
        Expr::call(Func::Cos, self)
    }

    pub fn sqrt(self) -> Expr {
        Expr::call(Func::Sqrt, self)
    }

    /// Evaluate at `t`. Fails outside the domain: `ln`/`sqrt` of a
    /// non-positive value, division by zero, a non-integer power of a
    /// non-positive base, or a non-finite result.
    pub fn eval(&self, t: f64) -> Result<f64, ExprError> {
        let value = match self {
            Expr::Const(c) => *c,
            Expr::Var => t,
            Expr::Add(a, b) => a.eval(t)? + b.eval(t)?,
            Expr::Sub(a, b) => a.eval(t)? - b.eval(t)?,
            Expr::Mul(a, b) => a.eval(t)? * b.eval(t)?,
            Expr::Div(a, b) => {
                let num = a.eval(t)?;
                let den = b.eval(t)?;
                if den == 0.0 {
                    return Err(ExprError::Domain(format!("division by zero at t = {t}")));
                }
                num / den
            }
            Expr::Pow(base, exponent) => pow_checked(base.eval(t)?, *exponent)?,
            Expr::Neg(a) => -a.eval(t)?,
            Expr::Call(func, a) => func.apply(a.eval(t)?)?,
        };
        if value.is_finite() {
            Ok(value)
        } else {
            Err(ExprError::Domain(format!("non-finite value at t = {t}")))
        }
    }

    pub fn contains_var(&self) -> bool {
        match self {
            Expr::Const(_) => false,
            Expr::Var => true,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.contains_var() || b.contains_var()
            }
            Expr::Pow(a, _) | Expr::Neg(a) | Expr::Call(_, a) => a.contains_var(),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var => 1,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                1 + a.node_count() + b.node_count()
            }
            Expr::Pow(a, _) | Expr::Neg(a) | Expr::Call(_, a) => 1 + a.node_count(),
        }
    }

    pub fn as_const(&self) -> Option<f64> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    /// Replace every occurrence of `t` by `inner`, giving `self ∘ inner`.
    pub fn substitute(&self, inner: &Expr) -> Expr {
        let sub = |e: &Expr| Box::new(e.substitute(inner));
        match self {
            Expr::Const(c) => Expr::Const(*c),
            Expr::Var => inner.clone(),
            Expr::Add(a, b) => Expr::Add(sub(a), sub(b)),
            Expr::Sub(a, b) => Expr::Sub(sub(a), sub(b)),
            Expr::Mul(a, b) => Expr::Mul(sub(a), sub(b)),
            Expr::Div(a, b) => Expr::Div(sub(a), sub(b)),
            Expr::Pow(a, c) => Expr::Pow(sub(a), *c),
            Expr::Neg(a) => Expr::Neg(sub(a)),
            Expr::Call(func, a) => Expr::Call(*func, sub(a)),
        }
    }

    pub fn diff(&self) -> Expr {
        diff(self)
    }

    pub fn simplify(&self) -> Expr {
        simplify(self)
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Const(c) if *c < 0.0 || (*c == 0.0 && c.is_sign_negative()) => 3,
            Expr::Pow(..) => 4,
            Expr::Const(_) | Expr::Var | Expr::Call(..) => 5,
        }
    }
}

pub(crate) fn pow_checked(base: f64, exponent: f64) -> Result<f64, ExprError> {
    if exponent.fract() == 0.0 {
        if base == 0.0 && exponent < 0.0 {
            return Err(ExprError::Domain("zero raised to a negative power".into()));
        }
    } else if base <= 0.0 {
        return Err(ExprError::Domain(format!(
            "non-integer power {exponent} of non-positive base {base}"
        )));
    }
    Ok(base.powf(exponent))
}

fn fmt_number(f: &mut fmt::Formatter<'_>, c: f64) -> fmt::Result {
    let a = c.abs();
    if a == 0.0 || (1e-5..1e15).contains(&a) {
        write!(f, "{c}")
    } else {
        write!(f, "{c:e}")
    }
}

fn fmt_child(f: &mut fmt::Formatter<'_>, child: &Expr, min_prec: u8) -> fmt::Result {
    if child.precedence() < min_prec {
        write!(f, "({child})")
    } else {
        write!(f, "{child}")
    }
}

/// Prints in the grammar accepted by [`parse`], so printing and re-parsing
/// gives an expression with the same value.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => {
                if self.precedence() == 3 {
                    write!(f, "-")?;
                    fmt_number(f, -c)
                } else {
                    fmt_number(f, *c)
                }
            }
            Expr::Var => write!(f, "t"),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                let (op, prec) = match self {
                    Expr::Add(..) => ("+", 1),
                    Expr::Sub(..) => ("-", 1),
                    Expr::Mul(..) => ("*", 2),
                    _ => ("/", 2),
                };
                fmt_child(f, a, prec)?;
                write!(f, " {op} ")?;
                // right operands are always grouped so the printed tree parses back identically
                fmt_child(f, b, prec + 1)
            }
            Expr::Pow(base, exponent) => {
                fmt_child(f, base, 5)?;
                if *exponent < 0.0 {
                    write!(f, "^(")?;
                    fmt_number(f, *exponent)?;
                    write!(f, ")")
                } else {
                    write!(f, "^")?;
                    fmt_number(f, *exponent)
                }
            }
            Expr::Neg(a) => {
                write!(f, "-")?;
                fmt_child(f, a, 4)
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

macro_rules! binary_op {
    ($trait:ident, $method:ident, $variant:ident) => {
        impl std::ops::$trait for Expr {
            type Output = Expr;
            fn $method(self, rhs: Expr) -> Expr {
                Expr::$variant(Box::new(self), Box::new(rhs))
            }
        }
    };
}

binary_op!(Add, add, Add);
binary_op!(Sub, sub, Sub);
binary_op!(Mul, mul, Mul);
binary_op!(Div, div, Div);

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

impl From<f64> for Expr {
    fn from(c: f64) -> Expr {
        Expr::Const(c)
    }
}

impl std::str::FromStr for Expr {
    type Err = ExprError;
    fn from_str(s: &str) -> Result<Expr, ExprError> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_examples() {
        let e = parse("t^2 + exp(t)").unwrap();
        assert!((e.eval(1.0).unwrap() - 3.718_281_828_459_045).abs() < 1e-15);
        assert_eq!(parse("sin(t)").unwrap().eval(0.0).unwrap(), 0.0);
        assert!(matches!(parse("ln(t)").unwrap().eval(0.0), Err(ExprError::Domain(_))));
    }

    #[test]
    fn eval_domain() {
        assert!(parse("1/t").unwrap().eval(0.0).is_err());
        assert!(parse("sqrt(t)").unwrap().eval(0.0).is_err());
        assert!(parse("t^0.5").unwrap().eval(-1.0).is_err());
        assert!(parse("t^0.5").unwrap().eval(0.0).is_err());
        assert_eq!(parse("t^3").unwrap().eval(-2.0).unwrap(), -8.0);
        assert!(parse("t^(-2)").unwrap().eval(0.0).is_err());
        assert!(parse("exp(t)").unwrap().eval(1000.0).is_err());
    }

    #[test]
    fn substitution_composes() {
        let outer = parse("sin(t) + t^2").unwrap();
        let inner = parse("exp(t)").unwrap();
        let c = outer.substitute(&inner);
        let x = 0.3f64;
        assert_eq!(c.eval(x).unwrap(), x.exp().sin() + x.exp().powf(2.0));
    }

    #[test]
    fn display_round_trips() {
        for src in [
            "t^2 + exp(t)",
            "-(t + 1)^2",
            "2 - (3 - t)",
            "1 / (t / 2)",
            "t^(-1.5) * sqrt(t)",
            "-2.5e-7 * t + 3e20",
            "(-t)^3",
            "ln(cos(t) + 2) / -t",
        ] {
            let e = parse(src).unwrap();
            let printed = e.to_string();
            let back = parse(&printed).unwrap();
            assert_eq!(back, e, "{src} printed as {printed}");
        }
    }
}
