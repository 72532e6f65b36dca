//! Parser, evaluator and symbolic differentiator for user-supplied
//! functions of `x` and `y`.
//!
//! Grammar, lowest precedence first:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?            // right-associative
//! atom   := number | 'x' | 'y' | 'pi' | 'e'
//!         | func '(' expr ')' | '(' expr ')'
//! func   := 'sin' | 'cos' | 'exp' | 'log' | 'sqrt' | 'abs'
//! ```
//!
//! Unary minus binds looser than `^`, so `-x^2` is `-(x^2)`; `2^3^2` is
//! `2^(3^2)`. Numbers are plain decimal literals.
//!
//! Evaluation surfaces domain errors (log of non-positive, division by
//! zero, `0^negative`, square root of a negative) and never masks a
//! non-finite result. Differentiation supports everything except `abs` and
//! non-constant exponents; `abs` stays parseable so rules can be run on
//! kink functions whose mixed-partial bound the caller certifies manually.

use std::sync::Arc;

use crate::domain::BivariateFn;
use crate::error::{Error, Result};

/// The two admitted variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
    Abs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

/// Parsed abstract syntax of an expression in `x` and `y`.
#[derive(Debug, Clone, PartialEq)]
pub enum ExprNode {
    Constant(f64),
    Variable(Var),
    Unary(UnaryOp, Box<ExprNode>),
    Binary(BinaryOp, Box<ExprNode>, Box<ExprNode>),
}

// ---------------------------------------------------------------------------
// lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(v) => format!("number '{v}'"),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                toks.push((Tok::Plus, i));
                i += 1;
            }
            b'-' => {
                toks.push((Tok::Minus, i));
                i += 1;
            }
            b'*' => {
                toks.push((Tok::Star, i));
                i += 1;
            }
            b'/' => {
                toks.push((Tok::Slash, i));
                i += 1;
            }
            b'^' => {
                toks.push((Tok::Caret, i));
                i += 1;
            }
            b'(' => {
                toks.push((Tok::LParen, i));
                i += 1;
            }
            b')' => {
                toks.push((Tok::RParen, i));
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| Error::Parse {
                    offset: start,
                    expected: "a decimal literal".into(),
                    found: format!("'{text}'"),
                })?;
                toks.push((Tok::Num(value), start));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                toks.push((Tok::Ident(src[start..i].to_string()), start));
            }
            _ => {
                return Err(Error::Parse {
                    offset: i,
                    expected: "a digit, identifier, operator or parenthesis".into(),
                    found: format!("'{}'", &src[i..i + utf8_len(b)]),
                });
            }
        }
    }
    toks.push((Tok::Eof, src.len()));
    Ok(toks)
}

fn utf8_len(first_byte: u8) -> usize {
    match first_byte {
        0x00..=0x7f => 1,
        0xc0..=0xdf => 2,
        0xe0..=0xef => 3,
        _ => 4,
    }
}

// ---------------------------------------------------------------------------
// parser
// ---------------------------------------------------------------------------

const ATOM_EXPECTED: &str = "a number, 'x', 'y', 'pi', 'e', a function name, '(' or '-'";

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &(Tok, usize) {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err_here(&self, expected: &str) -> Error {
        let (tok, offset) = self.peek();
        Error::Parse {
            offset: *offset,
            expected: expected.into(),
            found: tok.describe(),
        }
    }

    fn expr(&mut self) -> Result<ExprNode> {
        let mut node = self.term()?;
        loop {
            match self.peek().0 {
                Tok::Plus => {
                    self.bump();
                    node = ExprNode::Binary(BinaryOp::Add, node.into(), self.term()?.into());
                }
                Tok::Minus => {
                    self.bump();
                    node = ExprNode::Binary(BinaryOp::Sub, node.into(), self.term()?.into());
                }
                _ => return Ok(node),
            }
        }
    }

    fn term(&mut self) -> Result<ExprNode> {
        let mut node = self.unary()?;
        loop {
            match self.peek().0 {
                Tok::Star => {
                    self.bump();
                    node = ExprNode::Binary(BinaryOp::Mul, node.into(), self.unary()?.into());
                }
                Tok::Slash => {
                    self.bump();
                    node = ExprNode::Binary(BinaryOp::Div, node.into(), self.unary()?.into());
                }
                _ => return Ok(node),
            }
        }
    }

    fn unary(&mut self) -> Result<ExprNode> {
        if matches!(self.peek().0, Tok::Minus) {
            self.bump();
            return Ok(ExprNode::Unary(UnaryOp::Neg, self.unary()?.into()));
        }
        self.power()
    }

    fn power(&mut self) -> Result<ExprNode> {
        let base = self.atom()?;
        if matches!(self.peek().0, Tok::Caret) {
            self.bump();
            // right-associative; the exponent may carry its own unary minus
            let exponent = self.unary()?;
            return Ok(ExprNode::Binary(
                BinaryOp::Pow,
                base.into(),
                exponent.into(),
            ));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ExprNode> {
        match self.peek().0.clone() {
            Tok::Num(v) => {
                self.bump();
                Ok(ExprNode::Constant(v))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if !matches!(self.peek().0, Tok::RParen) {
                    return Err(self.err_here("')'"));
                }
                self.bump();
                Ok(inner)
            }
            Tok::Ident(name) => {
                let (_, _offset) = self.bump();
                match name.as_str() {
                    "x" => Ok(ExprNode::Variable(Var::X)),
                    "y" => Ok(ExprNode::Variable(Var::Y)),
                    "pi" => Ok(ExprNode::Constant(std::f64::consts::PI)),
                    "e" => Ok(ExprNode::Constant(std::f64::consts::E)),
                    "sin" | "cos" | "exp" | "log" | "sqrt" | "abs" => {
                        if !matches!(self.peek().0, Tok::LParen) {
                            return Err(self.err_here(&format!("'(' after '{name}'")));
                        }
                        self.bump();
                        let arg = self.expr()?;
                        if !matches!(self.peek().0, Tok::RParen) {
                            return Err(self.err_here("')'"));
                        }
                        self.bump();
                        let op = match name.as_str() {
                            "sin" => UnaryOp::Sin,
                            "cos" => UnaryOp::Cos,
                            "exp" => UnaryOp::Exp,
                            "log" => UnaryOp::Log,
                            "sqrt" => UnaryOp::Sqrt,
                            _ => UnaryOp::Abs,
                        };
                        Ok(ExprNode::Unary(op, arg.into()))
                    }
                    _ => Err(Error::Parse {
                        offset: _offset,
                        expected:
                            "'x', 'y', 'pi', 'e' or a function name (sin, cos, exp, log, sqrt, abs)"
                                .into(),
                        found: format!("'{name}'"),
                    }),
                }
            }
            _ => Err(self.err_here(ATOM_EXPECTED)),
        }
    }
}

/// Parses expression text into an [`ExprNode`].
pub fn parse(text: &str) -> Result<ExprNode> {
    if text.trim().is_empty() {
        return Err(Error::Parse {
            offset: 0,
            expected: ATOM_EXPECTED.into(),
            found: "end of input".into(),
        });
    }
    let mut parser = Parser {
        toks: tokenize(text)?,
        pos: 0,
    };
    let node = parser.expr()?;
    if !matches!(parser.peek().0, Tok::Eof) {
        return Err(parser.err_here("an operator or end of input"));
    }
    Ok(node)
}

// ---------------------------------------------------------------------------
// evaluation
// ---------------------------------------------------------------------------

impl ExprNode {
    /// Evaluates the expression at `(x, y)` with standard real semantics.
    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        let v = match self {
            ExprNode::Constant(c) => *c,
            ExprNode::Variable(Var::X) => x,
            ExprNode::Variable(Var::Y) => y,
            ExprNode::Unary(op, u) => {
                let uv = u.eval(x, y)?;
                match op {
                    UnaryOp::Neg => -uv,
                    UnaryOp::Sin => uv.sin(),
                    UnaryOp::Cos => uv.cos(),
                    UnaryOp::Exp => uv.exp(),
                    UnaryOp::Log => {
                        if uv <= 0.0 {
                            return Err(Error::EvalDomain {
                                reason: format!("log of non-positive value {uv}"),
                            });
                        }
                        uv.ln()
                    }
                    UnaryOp::Sqrt => {
                        if uv < 0.0 {
                            return Err(Error::EvalDomain {
                                reason: format!("square root of negative value {uv}"),
                            });
                        }
                        uv.sqrt()
                    }
                    UnaryOp::Abs => uv.abs(),
                }
            }
            ExprNode::Binary(op, l, r) => {
                let lv = l.eval(x, y)?;
                let rv = r.eval(x, y)?;
                match op {
                    BinaryOp::Add => lv + rv,
                    BinaryOp::Sub => lv - rv,
                    BinaryOp::Mul => lv * rv,
                    BinaryOp::Div => {
                        if rv == 0.0 {
                            return Err(Error::EvalDomain {
                                reason: "division by zero".into(),
                            });
                        }
                        lv / rv
                    }
                    BinaryOp::Pow => eval_pow(lv, rv)?,
                }
            }
        };
        if !v.is_finite() {
            return Err(Error::EvalDomain {
                reason: format!("non-finite result {v}"),
            });
        }
        Ok(v)
    }

    /// True when the subtree references neither variable.
    pub fn is_constant(&self) -> bool {
        match self {
            ExprNode::Constant(_) => true,
            ExprNode::Variable(_) => false,
            ExprNode::Unary(_, u) => u.is_constant(),
            ExprNode::Binary(_, l, r) => l.is_constant() && r.is_constant(),
        }
    }

    /// Symbolic partial derivative with respect to `var`, lightly
    /// simplified (zero/one and constant folding only).
    pub fn differentiate(&self, var: Var) -> Result<ExprNode> {
        Ok(match self {
            ExprNode::Constant(_) => ExprNode::Constant(0.0),
            ExprNode::Variable(v) => ExprNode::Constant(if *v == var { 1.0 } else { 0.0 }),
            ExprNode::Unary(op, u) => {
                let du = u.differentiate(var)?;
                match op {
                    UnaryOp::Neg => neg(du),
                    UnaryOp::Sin => mul(ExprNode::Unary(UnaryOp::Cos, u.clone()), du),
                    UnaryOp::Cos => neg(mul(ExprNode::Unary(UnaryOp::Sin, u.clone()), du)),
                    UnaryOp::Exp => mul(ExprNode::Unary(UnaryOp::Exp, u.clone()), du),
                    UnaryOp::Log => div(du, (**u).clone()),
                    UnaryOp::Sqrt => div(
                        du,
                        mul(
                            ExprNode::Constant(2.0),
                            ExprNode::Unary(UnaryOp::Sqrt, u.clone()),
                        ),
                    ),
                    UnaryOp::Abs => {
                        return Err(Error::UnsupportedDerivative {
                            reason: "abs(...) is not differentiable; supply a certified \
                                     sup-norm instead"
                                .into(),
                        })
                    }
                }
            }
            ExprNode::Binary(op, l, r) => {
                match op {
                    BinaryOp::Add => add(l.differentiate(var)?, r.differentiate(var)?),
                    BinaryOp::Sub => sub(l.differentiate(var)?, r.differentiate(var)?),
                    BinaryOp::Mul => {
                        let dl = l.differentiate(var)?;
                        let dr = r.differentiate(var)?;
                        add(mul(dl, (**r).clone()), mul((**l).clone(), dr))
                    }
                    BinaryOp::Div => {
                        let dl = l.differentiate(var)?;
                        let dr = r.differentiate(var)?;
                        div(
                            sub(mul(dl, (**r).clone()), mul((**l).clone(), dr)),
                            mul((**r).clone(), (**r).clone()),
                        )
                    }
                    BinaryOp::Pow => {
                        if !r.is_constant() {
                            return Err(Error::UnsupportedDerivative {
                                reason: "exponent must be a constant expression".into(),
                            });
                        }
                        let k = r.eval(0.0, 0.0)?;
                        if k == 0.0 {
                            // u^0 is constant (0^0 taken as 1)
                            ExprNode::Constant(0.0)
                        } else {
                            let du = l.differentiate(var)?;
                            mul(
                                mul(
                                    ExprNode::Constant(k),
                                    pow((**l).clone(), ExprNode::Constant(k - 1.0)),
                                ),
                                du,
                            )
                        }
                    }
                }
            }
        })
    }

    /// `∂²/∂x∂y` of the expression.
    pub fn mixed_partial(&self) -> Result<ExprNode> {
        self.differentiate(Var::X)?.differentiate(Var::Y)
    }

    /// Packages the expression as a [`BivariateFn`] (`x` is the first
    /// argument). The analytic mixed partial is attached when
    /// differentiation succeeds.
    pub fn to_bivariate(&self, name: impl Into<String>) -> BivariateFn {
        let body = Arc::new(self.clone());
        let f = BivariateFn::new_fallible(name, move |t, s| body.eval(t, s));
        match self.mixed_partial() {
            Ok(mp) => {
                let mp = Arc::new(mp);
                f.with_fallible_mixed_partial(move |t, s| mp.eval(t, s))
            }
            Err(_) => f,
        }
    }
}

fn eval_pow(base: f64, exponent: f64) -> Result<f64> {
    let is_integer = exponent.fract() == 0.0 && exponent.abs() <= i32::MAX as f64;
    if base == 0.0 && exponent < 0.0 {
        return Err(Error::EvalDomain {
            reason: "zero raised to a negative power".into(),
        });
    }
    if base < 0.0 && !is_integer {
        return Err(Error::EvalDomain {
            reason: format!("negative base {base} raised to non-integer power {exponent}"),
        });
    }
    if is_integer {
        Ok(base.powi(exponent as i32))
    } else {
        Ok(base.powf(exponent))
    }
}

// ---------------------------------------------------------------------------
// folding constructors used by the differentiator
// ---------------------------------------------------------------------------

fn as_constant(node: &ExprNode) -> Option<f64> {
    match node {
        ExprNode::Constant(c) => Some(*c),
        _ => None,
    }
}

fn is_zero(node: &ExprNode) -> bool {
    as_constant(node) == Some(0.0)
}

fn is_one(node: &ExprNode) -> bool {
    as_constant(node) == Some(1.0)
}

fn add(l: ExprNode, r: ExprNode) -> ExprNode {
    if is_zero(&l) {
        return r;
    }
    if is_zero(&r) {
        return l;
    }
    if let (Some(a), Some(b)) = (as_constant(&l), as_constant(&r)) {
        let v = a + b;
        if v.is_finite() {
            return ExprNode::Constant(v);
        }
    }
    ExprNode::Binary(BinaryOp::Add, l.into(), r.into())
}

fn sub(l: ExprNode, r: ExprNode) -> ExprNode {
    if is_zero(&r) {
        return l;
    }
    if let (Some(a), Some(b)) = (as_constant(&l), as_constant(&r)) {
        let v = a - b;
        if v.is_finite() {
            return ExprNode::Constant(v);
        }
    }
    if is_zero(&l) {
        return neg(r);
    }
    ExprNode::Binary(BinaryOp::Sub, l.into(), r.into())
}

fn mul(l: ExprNode, r: ExprNode) -> ExprNode {
    if is_zero(&l) || is_zero(&r) {
        return ExprNode::Constant(0.0);
    }
    if is_one(&l) {
        return r;
    }
    if is_one(&r) {
        return l;
    }
    if let (Some(a), Some(b)) = (as_constant(&l), as_constant(&r)) {
        let v = a * b;
        if v.is_finite() {
            return ExprNode::Constant(v);
        }
    }
    ExprNode::Binary(BinaryOp::Mul, l.into(), r.into())
}

fn div(l: ExprNode, r: ExprNode) -> ExprNode {
    if is_one(&r) {
        return l;
    }
    if let Some(b) = as_constant(&r) {
        if b != 0.0 {
            if is_zero(&l) {
                return ExprNode::Constant(0.0);
            }
            if let Some(a) = as_constant(&l) {
                let v = a / b;
                if v.is_finite() {
                    return ExprNode::Constant(v);
                }
            }
        }
    }
    ExprNode::Binary(BinaryOp::Div, l.into(), r.into())
}

fn pow(l: ExprNode, r: ExprNode) -> ExprNode {
    if let Some(k) = as_constant(&r) {
        if k == 1.0 {
            return l;
        }
        if k == 0.0 {
            return ExprNode::Constant(1.0);
        }
        if let Some(b) = as_constant(&l) {
            if let Ok(v) = eval_pow(b, k) {
                if v.is_finite() {
                    return ExprNode::Constant(v);
                }
            }
        }
    }
    ExprNode::Binary(BinaryOp::Pow, l.into(), r.into())
}

fn neg(u: ExprNode) -> ExprNode {
    if let Some(c) = as_constant(&u) {
        return ExprNode::Constant(-c);
    }
    if let ExprNode::Unary(UnaryOp::Neg, inner) = u {
        return *inner;
    }
    ExprNode::Unary(UnaryOp::Neg, u.into())
}
