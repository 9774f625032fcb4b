//! Recursive-descent parser.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := atom ('^' factor)? | '-' factor
//! atom   := number | 't' | func '(' expr ')' | '(' expr ')'
//! func   := exp | ln | sin | cos | sqrt
//! ```
//!
//! The exponent of `^` must not mention `t`; it is folded to a number.
//! Nesting deeper than [`MAX_DEPTH`] is rejected rather than risking the stack.

use super::lexer::{tokenize, Token, TokenKind};
use super::{Expr, ExprError, Func};

pub const MAX_DEPTH: usize = 200;

pub fn parse(source: &str) -> Result<Expr, ExprError> {
    let tokens = tokenize(source)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        depth: 0,
    };
    let expr = parser.expr()?;
    let tok = parser.peek();
    if tok.kind != TokenKind::End {
        return Err(parser.error_at(tok.offset, "operator or end of input"));
    }
    Ok(expr)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    depth: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        if tok.kind != TokenKind::End {
            self.pos += 1;
        }
        tok
    }

    fn error_at(&self, offset: usize, expected: &str) -> ExprError {
        ExprError::Parse {
            offset,
            expected: expected.to_string(),
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().kind {
                TokenKind::Op('+') => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                TokenKind::Op('-') => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.factor()?;
        loop {
            match self.peek().kind {
                TokenKind::Op('*') => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.factor()?));
                }
                TokenKind::Op('/') => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.factor()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, ExprError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.error_at(self.peek().offset, "shallower nesting"));
        }
        let result = self.factor_inner();
        self.depth -= 1;
        result
    }

    fn factor_inner(&mut self) -> Result<Expr, ExprError> {
        if self.peek().kind == TokenKind::Op('-') {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.factor()?)));
        }
        let base = self.atom()?;
        if self.peek().kind != TokenKind::Op('^') {
            return Ok(base);
        }
        self.bump();
        let offset = self.peek().offset;
        let exponent = self.factor()?;
        if exponent.contains_var() {
            return Err(ExprError::NonConstantExponent { offset });
        }
        match exponent.eval(0.0) {
            Ok(value) => Ok(Expr::Pow(Box::new(base), value)),
            Err(_) => Err(self.error_at(offset, "finite constant exponent")),
        }
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        let tok = self.bump();
        match tok.kind {
            TokenKind::Number(v) => Ok(Expr::Const(v)),
            TokenKind::LParen => {
                let inner = self.expr()?;
                self.expect_rparen()?;
                Ok(inner)
            }
            TokenKind::Ident => {
                let is_call = self.peek().kind == TokenKind::LParen;
                if !is_call {
                    return match tok.lexeme.as_str() {
                        "t" => Ok(Expr::Var),
                        name if Func::from_name(name).is_some() => {
                            Err(self.error_at(self.peek().offset, "'(' after function name"))
                        }
                        name => Err(ExprError::UnknownVariable {
                            name: name.to_string(),
                            offset: tok.offset,
                        }),
                    };
                }
                let func = Func::from_name(&tok.lexeme).ok_or_else(|| ExprError::UnknownFunction {
                    name: tok.lexeme.clone(),
                    offset: tok.offset,
                })?;
                self.bump();
                let arg = self.expr()?;
                self.expect_rparen()?;
                Ok(Expr::Call(func, Box::new(arg)))
            }
            TokenKind::End => Err(self.error_at(tok.offset, "expression")),
            _ => Err(self.error_at(tok.offset, "number, 't', function or '('")),
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ExprError> {
        let tok = self.peek();
        if tok.kind == TokenKind::RParen {
            self.bump();
            Ok(())
        } else {
            Err(self.error_at(tok.offset, "')'"))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structure() {
        let e = parse("t^2 + exp(t)").unwrap();
        assert_eq!(
            e,
            Expr::Add(
                Box::new(Expr::Pow(Box::new(Expr::Var), 2.0)),
                Box::new(Expr::Call(Func::Exp, Box::new(Expr::Var)))
            )
        );
    }

    #[test]
    fn non_constant_exponent() {
        assert_eq!(parse("t^t"), Err(ExprError::NonConstantExponent { offset: 2 }));
        assert!(matches!(
            parse("2^(1+t)"),
            Err(ExprError::NonConstantExponent { .. })
        ));
    }

    #[test]
    fn evaluates() {
        assert_eq!(parse("2*t^3 - 1").unwrap().eval(2.0).unwrap(), 15.0);
    }

    #[test]
    fn precedence() {
        // unary minus binds looser than ^
        assert_eq!(parse("-t^2").unwrap().eval(3.0).unwrap(), -9.0);
        // ^ is right associative
        assert_eq!(parse("2^3^2").unwrap().eval(0.0).unwrap(), 512.0);
        assert_eq!(parse("t^-1").unwrap().eval(4.0).unwrap(), 0.25);
        assert_eq!(parse("1 - 2 - 3").unwrap().eval(0.0).unwrap(), -4.0);
        assert_eq!(parse("8 / 4 / 2").unwrap().eval(0.0).unwrap(), 1.0);
        assert_eq!(parse("2 * -t").unwrap().eval(3.0).unwrap(), -6.0);
        assert_eq!(parse("t^(1/2)").unwrap(), Expr::Pow(Box::new(Expr::Var), 0.5));
    }

    #[test]
    fn names() {
        assert!(matches!(
            parse("tan(t)"),
            Err(ExprError::UnknownFunction { offset: 0, .. })
        ));
        assert!(matches!(
            parse("t + x"),
            Err(ExprError::UnknownVariable { offset: 4, .. })
        ));
        assert!(matches!(parse("exp + 1"), Err(ExprError::Parse { offset: 4, .. })));
    }

    #[test]
    fn error_positions() {
        assert_eq!(
            parse("(t + 1"),
            Err(ExprError::Parse {
                offset: 6,
                expected: "')'".into()
            })
        );
        assert!(matches!(parse("t + 1)"), Err(ExprError::Parse { offset: 5, .. })));
        assert!(matches!(parse(""), Err(ExprError::Parse { offset: 0, .. })));
        assert!(matches!(parse("2 t"), Err(ExprError::Parse { offset: 2, .. })));
        assert!(matches!(parse("t^ln(-1)"), Err(ExprError::Parse { offset: 2, .. })));
    }

    #[test]
    fn deep_nesting_is_an_error() {
        let deep = format!("{}t{}", "(".repeat(5000), ")".repeat(5000));
        assert!(matches!(parse(&deep), Err(ExprError::Parse { .. })));
        let minus = format!("{}t", "-".repeat(5000));
        assert!(parse(&minus).is_err());
        let ok = format!("{}t{}", "(".repeat(50), ")".repeat(50));
        assert_eq!(parse(&ok).unwrap(), Expr::Var);
    }
}
