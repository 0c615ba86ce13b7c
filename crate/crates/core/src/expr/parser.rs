use super::lexer::{Token, TokenKind};
use super::{BinaryOp, Constant, Expr, ExprError, Function};

/// Recursive-descent parser over a token slice.
///
/// ```text
/// expr    := term (('+' | '-') term)*
/// term    := unary (('*' | '/') unary)*
/// unary   := '-' unary | power
/// power   := primary ('^' unary)?
/// primary := number | constant | 'x' | function '(' expr ')' | '(' expr ')'
/// ```
pub fn parse(tokens: &[Token]) -> Result<Expr, ExprError> {
    let mut p = Parser { tokens, pos: 0 };
    if tokens.is_empty() {
        return Err(ExprError::UnexpectedEnd);
    }
    let node = p.expr()?;
    if let Some(tok) = p.peek() {
        return Err(ExprError::TrailingInput {
            offset: tok.position,
            found: tok.lexeme.clone(),
        });
    }
    Ok(node)
}

struct Parser<'a> {
    tokens: &'a [Token],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<&'a Token> {
        let tok = self.tokens.get(self.pos);
        if tok.is_some() {
            self.pos += 1;
        }
        tok
    }

    fn peek_op(&self, ops: &[&str]) -> Option<&'a str> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Operator && ops.contains(&t.lexeme.as_str()) => {
                Some(t.lexeme.as_str())
            }
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        while let Some(op) = self.peek_op(&["+", "-"]) {
            self.pos += 1;
            let rhs = self.term()?;
            let op = if op == "+" { BinaryOp::Add } else { BinaryOp::Sub };
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.peek_op(&["*", "/"]) {
            self.pos += 1;
            let rhs = self.unary()?;
            let op = if op == "*" { BinaryOp::Mul } else { BinaryOp::Div };
            lhs = Expr::binary(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.peek_op(&["-"]).is_some() {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.primary()?;
        if self.peek_op(&["^"]).is_some() {
            self.pos += 1;
            let exponent = self.unary()?;
            return Ok(Expr::binary(BinaryOp::Pow, base, exponent));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr, ExprError> {
        let tok = self.next().ok_or(ExprError::UnexpectedEnd)?;
        match tok.kind {
            TokenKind::Number => tok
                .lexeme
                .parse::<f64>()
                .map(Expr::Literal)
                .map_err(|_| ExprError::MalformedNumber {
                    offset: tok.position,
                }),
            TokenKind::Identifier => match tok.lexeme.as_str() {
                "x" => Ok(Expr::Var),
                "pi" => Ok(Expr::Const(Constant::Pi)),
                "e" => Ok(Expr::Const(Constant::E)),
                "i" => Ok(Expr::Const(Constant::I)),
                name => {
                    let func = Function::from_name(name).ok_or_else(|| {
                        ExprError::UnknownIdentifier {
                            offset: tok.position,
                            name: name.to_string(),
                        }
                    })?;
                    self.expect_paren("(")?;
                    let arg = self.expr()?;
                    self.expect_paren(")")?;
                    Ok(Expr::Call(func, Box::new(arg)))
                }
            },
            TokenKind::Paren if tok.lexeme == "(" => {
                let inner = self.expr()?;
                self.expect_paren(")")?;
                Ok(inner)
            }
            _ => Err(unexpected(tok)),
        }
    }

    fn expect_paren(&mut self, which: &str) -> Result<(), ExprError> {
        match self.next() {
            Some(t) if t.kind == TokenKind::Paren && t.lexeme == which => Ok(()),
            Some(t) => Err(unexpected(t)),
            None if which == ")" => Err(ExprError::UnbalancedParen),
            None => Err(ExprError::UnexpectedEnd),
        }
    }
}

fn unexpected(tok: &Token) -> ExprError {
    ExprError::UnexpectedToken {
        offset: tok.position,
        found: tok.lexeme.clone(),
    }
}
