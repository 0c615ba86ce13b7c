//! Expression language for derivands.
//!
//! Grammar (EBNF), whitespace insignificant:
//!
//! ```text
//! expr     = term , { ("+" | "-") , term } ;
//! term     = unary , { ("*" | "/") , unary } ;
//! unary    = "-" , unary | power ;
//! power    = primary , [ "^" , unary ] ;            (* right-associative *)
//! primary  = number | "x" | "pi" | "e" | "i"
//!          | function , "(" , expr , ")"
//!          | "(" , expr , ")" ;
//! function = "sin" | "cos" | "tan" | "asin" | "acos" | "atan"
//!          | "exp" | "ln" | "sqrt" | "abs" ;
//! number   = digits , [ "." , digits ] , [ ("e" | "E") , [ "+" | "-" ] , digits ]
//!          | "." , digits , ... ;
//! ```
//!
//! `^` binds tighter than unary minus, so `-x^2` is `-(x^2)`. Evaluation is
//! over the complex numbers with principal branches; purely real inputs that
//! stay real produce an exactly zero imaginary part.

mod lexer;
mod parser;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

pub use lexer::{tokenize, Token, TokenKind};
pub use parser::parse;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("invalid character '{found}' at offset {offset}")]
    InvalidCharacter { offset: usize, found: char },
    #[error("malformed number literal at offset {offset}")]
    MalformedNumber { offset: usize },
    #[error("unexpected token '{found}' at offset {offset}")]
    UnexpectedToken { offset: usize, found: String },
    #[error("unknown identifier '{name}' at offset {offset}")]
    UnknownIdentifier { offset: usize, name: String },
    #[error("unbalanced parentheses")]
    UnbalancedParen,
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("trailing input '{found}' at offset {offset}")]
    TrailingInput { offset: usize, found: String },
    #[error("division by zero at x = {x}")]
    DivisionByZero { x: Complex64 },
    #[error("{what} undefined at x = {x}")]
    Domain { x: Complex64, what: &'static str },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constant {
    Pi,
    E,
    I,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinaryOp {
    fn symbol(self) -> char {
        match self {
            BinaryOp::Add => '+',
            BinaryOp::Sub => '-',
            BinaryOp::Mul => '*',
            BinaryOp::Div => '/',
            BinaryOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Function {
    Sin,
    Cos,
    Tan,
    Asin,
    Acos,
    Atan,
    Exp,
    Ln,
    Sqrt,
    Abs,
}

impl Function {
    pub const ALL: [Function; 10] = [
        Function::Sin,
        Function::Cos,
        Function::Tan,
        Function::Asin,
        Function::Acos,
        Function::Atan,
        Function::Exp,
        Function::Ln,
        Function::Sqrt,
        Function::Abs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Function::Sin => "sin",
            Function::Cos => "cos",
            Function::Tan => "tan",
            Function::Asin => "asin",
            Function::Acos => "acos",
            Function::Atan => "atan",
            Function::Exp => "exp",
            Function::Ln => "ln",
            Function::Sqrt => "sqrt",
            Function::Abs => "abs",
        }
    }

    pub fn from_name(name: &str) -> Option<Function> {
        Function::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Expression tree. Only nonnegative literals come out of the parser;
/// negation is always an explicit [`Expr::Neg`] node.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Literal(f64),
    Const(Constant),
    Var,
    Neg(Box<Expr>),
    Binary(BinaryOp, Box<Expr>, Box<Expr>),
    Call(Function, Box<Expr>),
}

impl Expr {
    pub fn binary(op: BinaryOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    /// Tokenizes and parses `input`.
    pub fn parse_str(input: &str) -> Result<Expr, ExprError> {
        parse(&tokenize(input)?)
    }

    pub fn eval(&self, x: Complex64) -> Result<Complex64, ExprError> {
        match self {
            Expr::Literal(v) => Ok(Complex64::new(*v, 0.0)),
            Expr::Const(Constant::Pi) => Ok(Complex64::new(std::f64::consts::PI, 0.0)),
            Expr::Const(Constant::E) => Ok(Complex64::new(std::f64::consts::E, 0.0)),
            Expr::Const(Constant::I) => Ok(Complex64::i()),
            Expr::Var => Ok(x),
            Expr::Neg(c) => Ok(-c.eval(x)?),
            Expr::Binary(op, l, r) => {
                let a = l.eval(x)?;
                let b = r.eval(x)?;
                match op {
                    BinaryOp::Add => Ok(a + b),
                    BinaryOp::Sub => Ok(a - b),
                    BinaryOp::Mul => Ok(mul(a, b)),
                    BinaryOp::Div => div(a, b, x),
                    BinaryOp::Pow => pow(a, b, x),
                }
            }
            Expr::Call(f, c) => call(*f, c.eval(x)?, x),
        }
    }

    pub fn eval_real(&self, x: f64) -> Result<Complex64, ExprError> {
        self.eval(Complex64::new(x, 0.0))
    }

    /// Fully parenthesized rendering; re-parses to a structurally equal tree.
    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Literal(v) => write!(f, "{v}"),
            Expr::Const(Constant::Pi) => f.write_str("pi"),
            Expr::Const(Constant::E) => f.write_str("e"),
            Expr::Const(Constant::I) => f.write_str("i"),
            Expr::Var => f.write_str("x"),
            Expr::Neg(c) => write!(f, "(-{c})"),
            Expr::Binary(op, l, r) => write!(f, "({l}{}{r})", op.symbol()),
            Expr::Call(func, c) => write!(f, "{}({c})", func.name()),
        }
    }
}

impl FromStr for Expr {
    type Err = ExprError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Expr::parse_str(s)
    }
}

fn is_real(z: Complex64) -> bool {
    z.im == 0.0
}

fn real(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

fn mul(a: Complex64, b: Complex64) -> Complex64 {
    if is_real(a) && is_real(b) {
        real(a.re * b.re)
    } else {
        a * b
    }
}

fn div(a: Complex64, b: Complex64, x: Complex64) -> Result<Complex64, ExprError> {
    if b.re == 0.0 && b.im == 0.0 {
        return Err(ExprError::DivisionByZero { x });
    }
    if is_real(a) && is_real(b) {
        Ok(real(a.re / b.re))
    } else {
        Ok(a / b)
    }
}

fn pow(base: Complex64, exp: Complex64, x: Complex64) -> Result<Complex64, ExprError> {
    let exp_is_int = is_real(exp) && exp.re.fract() == 0.0;
    if is_real(base) && is_real(exp) && (base.re > 0.0 || exp_is_int) {
        if base.re == 0.0 && exp.re < 0.0 {
            return Err(ExprError::DivisionByZero { x });
        }
        return Ok(real(base.re.powf(exp.re)));
    }
    if base.re == 0.0 && base.im == 0.0 {
        return if exp.re > 0.0 {
            Ok(Complex64::new(0.0, 0.0))
        } else {
            Err(ExprError::DivisionByZero { x })
        };
    }
    if exp_is_int && exp.re.abs() <= 64.0 {
        return Ok(base.powi(exp.re as i32));
    }
    Ok((exp * base.ln()).exp())
}

fn call(f: Function, z: Complex64, x: Complex64) -> Result<Complex64, ExprError> {
    let r = is_real(z);
    let v = z.re;
    Ok(match f {
        Function::Sin if r => real(v.sin()),
        Function::Sin => z.sin(),
        Function::Cos if r => real(v.cos()),
        Function::Cos => z.cos(),
        Function::Tan if r => real(v.tan()),
        Function::Tan => z.tan(),
        Function::Asin if r && v.abs() <= 1.0 => real(v.asin()),
        Function::Asin => z.asin(),
        Function::Acos if r && v.abs() <= 1.0 => real(v.acos()),
        Function::Acos => z.acos(),
        Function::Atan if r => real(v.atan()),
        Function::Atan => z.atan(),
        Function::Exp if r => real(v.exp()),
        Function::Exp => z.exp(),
        Function::Ln => {
            if z.re == 0.0 && z.im == 0.0 {
                return Err(ExprError::Domain { x, what: "ln" });
            }
            if r && v > 0.0 {
                real(v.ln())
            } else {
                z.ln()
            }
        }
        Function::Sqrt if r && v >= 0.0 => real(v.sqrt()),
        Function::Sqrt => z.sqrt(),
        Function::Abs => real(z.norm()),
    })
}
