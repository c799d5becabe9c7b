//! Scalar fields over the coordinates `X1, X2, X3`.
//!
//! An [`Expr`] is a small immutable expression tree. It can be parsed from
//! text, evaluated at a [`Point`], and differentiated exactly with respect to
//! any coordinate. [`fd_partial`] gives a central-difference estimate of the
//! same partial derivative and is used as an oracle for [`Expr::diff`].
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' integer)?
//! primary := number | 'X1' | 'X2' | 'X3' | func '(' expr ')' | '(' expr ')'
//! func    := 'sin' | 'cos' | 'exp' | 'log'
//! ```

use std::fmt;

use crate::error::{GeomError, Result};

/// A point `p(X1, X2, X3)` of the coordinate neighbourhood.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Point(pub [f64; 3]);

impl Point {
    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        Point([x1, x2, x3])
    }

    pub fn coords(&self) -> [f64; 3] {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// `self + t * e_axis`.
    pub fn shifted(&self, axis: Axis, t: f64) -> Point {
        let mut c = self.0;
        c[axis.index()] += t;
        Point(c)
    }
}

impl From<[f64; 3]> for Point {
    fn from(c: [f64; 3]) -> Self {
        Point(c)
    }
}

/// Coordinate axis `X1`, `X2` or `X3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X1,
    X2,
    X3,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X1, Axis::X2, Axis::X3];

    /// Zero-based index.
    pub fn index(self) -> usize {
        match self {
            Axis::X1 => 0,
            Axis::X2 => 1,
            Axis::X3 => 2,
        }
    }

    pub fn from_index(i: usize) -> Axis {
        Axis::ALL[i]
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X{}", self.index() + 1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(Axis),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Exp(Box<Expr>),
    Log(Box<Expr>),
}

// Smart constructors. They only fold the trivial 0/1 cases so that
// derivative trees stay readable; no general simplification happens.
#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn constant(c: f64) -> Expr {
        Expr::Const(c)
    }

    pub fn var(axis: Axis) -> Expr {
        Expr::Var(axis)
    }

    fn is_const(&self, c: f64) -> bool {
        matches!(self, Expr::Const(v) if *v == c)
    }

    pub fn neg(e: Expr) -> Expr {
        match e {
            Expr::Const(c) => Expr::Const(-c),
            Expr::Neg(inner) => *inner,
            e => Expr::Neg(Box::new(e)),
        }
    }

    pub fn add(l: Expr, r: Expr) -> Expr {
        if l.is_const(0.0) {
            r
        } else if r.is_const(0.0) {
            l
        } else {
            Expr::Add(Box::new(l), Box::new(r))
        }
    }

    pub fn sub(l: Expr, r: Expr) -> Expr {
        if r.is_const(0.0) {
            l
        } else if l.is_const(0.0) {
            Expr::neg(r)
        } else {
            Expr::Sub(Box::new(l), Box::new(r))
        }
    }

    pub fn mul(l: Expr, r: Expr) -> Expr {
        if l.is_const(0.0) || r.is_const(0.0) {
            Expr::Const(0.0)
        } else if l.is_const(1.0) {
            r
        } else if r.is_const(1.0) {
            l
        } else {
            Expr::Mul(Box::new(l), Box::new(r))
        }
    }

    pub fn div(l: Expr, r: Expr) -> Expr {
        if r.is_const(1.0) {
            l
        } else {
            Expr::Div(Box::new(l), Box::new(r))
        }
    }

    pub fn pow(base: Expr, n: u32) -> Expr {
        match n {
            0 => Expr::Const(1.0),
            1 => base,
            n => Expr::Pow(Box::new(base), n),
        }
    }

    pub fn sin(e: Expr) -> Expr {
        Expr::Sin(Box::new(e))
    }

    pub fn cos(e: Expr) -> Expr {
        Expr::Cos(Box::new(e))
    }

    pub fn exp(e: Expr) -> Expr {
        Expr::Exp(Box::new(e))
    }

    pub fn log(e: Expr) -> Expr {
        Expr::Log(Box::new(e))
    }

    /// Parse an expression from text.
    pub fn parse(text: &str) -> Result<Expr> {
        Parser::new(text)?.parse_all()
    }

    /// Evaluate at a point.
    ///
    /// Division by zero, the logarithm of a non-positive number and
    /// non-finite intermediate results are reported as
    /// [`GeomError::EvalDomain`].
    pub fn eval(&self, p: &Point) -> Result<f64> {
        let v = match self {
            Expr::Const(c) => *c,
            Expr::Var(a) => p.0[a.index()],
            Expr::Neg(e) => -e.eval(p)?,
            Expr::Add(l, r) => l.eval(p)? + r.eval(p)?,
            Expr::Sub(l, r) => l.eval(p)? - r.eval(p)?,
            Expr::Mul(l, r) => l.eval(p)? * r.eval(p)?,
            Expr::Div(l, r) => {
                let den = r.eval(p)?;
                if den == 0.0 {
                    return Err(GeomError::EvalDomain(format!("division by zero in `{self}`")));
                }
                l.eval(p)? / den
            }
            Expr::Pow(b, n) => b.eval(p)?.powi(*n as i32),
            Expr::Sin(e) => e.eval(p)?.sin(),
            Expr::Cos(e) => e.eval(p)?.cos(),
            Expr::Exp(e) => e.eval(p)?.exp(),
            Expr::Log(e) => {
                let v = e.eval(p)?;
                if v <= 0.0 {
                    return Err(GeomError::EvalDomain(format!(
                        "log of non-positive value {v} in `{self}`"
                    )));
                }
                v.ln()
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(GeomError::EvalDomain(format!("non-finite value in `{self}`")))
        }
    }

    /// Exact symbolic partial derivative with respect to `axis`.
    pub fn diff(&self, axis: Axis) -> Expr {
        match self {
            Expr::Const(_) => Expr::Const(0.0),
            Expr::Var(a) => Expr::Const(if *a == axis { 1.0 } else { 0.0 }),
            Expr::Neg(e) => Expr::neg(e.diff(axis)),
            Expr::Add(l, r) => Expr::add(l.diff(axis), r.diff(axis)),
            Expr::Sub(l, r) => Expr::sub(l.diff(axis), r.diff(axis)),
            Expr::Mul(l, r) => Expr::add(
                Expr::mul(l.diff(axis), (**r).clone()),
                Expr::mul((**l).clone(), r.diff(axis)),
            ),
            Expr::Div(l, r) => Expr::div(
                Expr::sub(
                    Expr::mul(l.diff(axis), (**r).clone()),
                    Expr::mul((**l).clone(), r.diff(axis)),
                ),
                Expr::pow((**r).clone(), 2),
            ),
            Expr::Pow(_, 0) => Expr::Const(0.0),
            Expr::Pow(b, n) => Expr::mul(
                Expr::mul(Expr::Const(*n as f64), Expr::pow((**b).clone(), n - 1)),
                b.diff(axis),
            ),
            Expr::Sin(e) => Expr::mul(Expr::cos((**e).clone()), e.diff(axis)),
            Expr::Cos(e) => Expr::neg(Expr::mul(Expr::sin((**e).clone()), e.diff(axis))),
            Expr::Exp(e) => Expr::mul(Expr::exp((**e).clone()), e.diff(axis)),
            Expr::Log(e) => Expr::div(e.diff(axis), (**e).clone()),
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) => 1,
            Expr::Neg(e) | Expr::Pow(e, _) | Expr::Sin(e) | Expr::Cos(e) | Expr::Exp(e) | Expr::Log(e) => 1 + e.size(),
            Expr::Add(l, r) | Expr::Sub(l, r) | Expr::Mul(l, r) | Expr::Div(l, r) => 1 + l.size() + r.size(),
        }
    }

    /// True when the expression contains no coordinate variable.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Const(_) => true,
            Expr::Var(_) => false,
            Expr::Neg(e) | Expr::Pow(e, _) | Expr::Sin(e) | Expr::Cos(e) | Expr::Exp(e) | Expr::Log(e) => {
                e.is_constant()
            }
            Expr::Add(l, r) | Expr::Sub(l, r) | Expr::Mul(l, r) | Expr::Div(l, r) => l.is_constant() && r.is_constant(),
        }
    }
}

/// Central difference `(e(p + h e_i) - e(p - h e_i)) / 2h`.
pub fn fd_partial(e: &Expr, p: &Point, axis: Axis, h: f64) -> Result<f64> {
    let fwd = e.eval(&p.shifted(axis, h))?;
    let bwd = e.eval(&p.shifted(axis, -h))?;
    Ok((fwd - bwd) / (2.0 * h))
}

/// Default central-difference step for first partials.
pub const FD_STEP: f64 = 1e-5;

// Printing is fully parenthesised so that the output always parses back to
// an equal-valued tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => {
                if *c < 0.0 || (*c == 0.0 && c.is_sign_negative()) {
                    write!(f, "(-{})", -c)
                } else {
                    write!(f, "{c}")
                }
            }
            Expr::Var(a) => write!(f, "{a}"),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Add(l, r) => write!(f, "({l} + {r})"),
            Expr::Sub(l, r) => write!(f, "({l} - {r})"),
            Expr::Mul(l, r) => write!(f, "({l} * {r})"),
            Expr::Div(l, r) => write!(f, "({l} / {r})"),
            Expr::Pow(b, n) => write!(f, "({b}^{n})"),
            Expr::Sin(e) => write!(f, "sin({e})"),
            Expr::Cos(e) => write!(f, "cos({e})"),
            Expr::Exp(e) => write!(f, "exp({e})"),
            Expr::Log(e) => write!(f, "log({e})"),
        }
    }
}

impl std::str::FromStr for Expr {
    type Err = GeomError;

    fn from_str(s: &str) -> Result<Self> {
        Expr::parse(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64, String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(_, s) | Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                // optional exponent
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let s = &text[start..i];
                let v: f64 = s.parse().map_err(|_| GeomError::Syntax {
                    pos: start,
                    msg: format!("malformed number `{s}`"),
                })?;
                out.push((start, Tok::Num(v, s.to_string())));
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
                continue;
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(GeomError::Syntax {
                    pos: start,
                    msg: format!("unexpected character `{ch}`"),
                });
            }
        };
        out.push((start, tok));
        i += 1;
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        Ok(Parser {
            toks: tokenize(text)?,
            at: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, wanted: &str) -> GeomError {
        GeomError::Syntax {
            pos: self.pos(),
            msg: format!("expected {wanted}, found {}", self.peek()),
        }
    }

    fn parse_all(mut self) -> Result<Expr> {
        let e = self.expr()?;
        if *self.peek() != Tok::End {
            return Err(self.unexpected("operator or end of input"));
        }
        Ok(e)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let pos = self.pos();
        match self.bump() {
            Tok::Num(v, _) if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 => {
                Ok(Expr::Pow(Box::new(base), v as u32))
            }
            Tok::Num(_, s) => Err(GeomError::Syntax {
                pos,
                msg: format!("exponent must be a non-negative integer, found `{s}`"),
            }),
            other => Err(GeomError::Syntax {
                pos,
                msg: format!("expected integer exponent, found {other}"),
            }),
        }
    }

    fn primary(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Num(v, _) => {
                self.bump();
                Ok(Expr::Const(v))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect_close(pos)?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "X1" => Ok(Expr::Var(Axis::X1)),
                    "X2" => Ok(Expr::Var(Axis::X2)),
                    "X3" => Ok(Expr::Var(Axis::X3)),
                    "sin" | "cos" | "exp" | "log" => {
                        if *self.peek() != Tok::LParen {
                            return Err(self.unexpected(&format!("`(` after `{name}`")));
                        }
                        let open = self.pos();
                        self.bump();
                        let arg = Box::new(self.expr()?);
                        self.expect_close(open)?;
                        Ok(match name.as_str() {
                            "sin" => Expr::Sin(arg),
                            "cos" => Expr::Cos(arg),
                            "exp" => Expr::Exp(arg),
                            _ => Expr::Log(arg),
                        })
                    }
                    _ => Err(GeomError::UnknownIdentifier { pos, name }),
                }
            }
            _ => Err(self.unexpected("number, variable, function or `(`")),
        }
    }

    fn expect_close(&mut self, open: usize) -> Result<()> {
        match self.peek() {
            Tok::RParen => {
                self.bump();
                Ok(())
            }
            Tok::End => Err(GeomError::Syntax {
                pos: open,
                msg: "unclosed parenthesis".into(),
            }),
            _ => Err(self.unexpected("`)`")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x1: f64, x2: f64, x3: f64) -> Point {
        Point::new(x1, x2, x3)
    }

    #[test]
    fn parses_and_evaluates_linear_fields() {
        let a = Expr::parse("2*X1").unwrap();
        assert_eq!(a.eval(&p(1.0, -1.0, -0.5)).unwrap(), 2.0);
        let b = Expr::parse("2*X1 + X2 + X3").unwrap();
        assert_eq!(b.eval(&p(1.0, -1.0, -0.5)).unwrap(), 0.5);
        assert_eq!(b.eval(&p(2.0, -0.5, -0.5)).unwrap(), 3.0);
    }

    #[test]
    fn eval_basics() {
        assert_eq!(Expr::parse("X1*X2").unwrap().eval(&p(3.0, 4.0, 0.0)).unwrap(), 12.0);
        assert_eq!(Expr::parse("7").unwrap().eval(&p(-3.0, 1e3, 2.0)).unwrap(), 7.0);
    }

    #[test]
    fn zeroth_power_has_zero_derivative() {
        let e = Expr::parse("(X1 + X2)^0").unwrap();
        assert_eq!(e.eval(&p(1.0, 2.0, 3.0)).unwrap(), 1.0);
        assert_eq!(e.diff(Axis::X1).eval(&p(1.0, 2.0, 3.0)).unwrap(), 0.0);
    }

    #[test]
    fn unclosed_parenthesis_is_reported_at_the_open() {
        match Expr::parse("2*X1 + (X2") {
            Err(GeomError::Syntax { pos, msg }) => {
                assert_eq!(pos, 7);
                assert!(msg.contains("unclosed"), "{msg}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_identifier() {
        assert!(matches!(
            Expr::parse("X1 + Y"),
            Err(GeomError::UnknownIdentifier { pos: 5, .. })
        ));
        assert!(matches!(
            Expr::parse("tan(X1)"),
            Err(GeomError::UnknownIdentifier { .. })
        ));
    }

    #[test]
    fn syntax_errors() {
        for bad in ["", "X1 +", "X1 ^ 2.5", "X1 ^ -1", "X1 X2", "3 $ 4", "sin X1", ")"] {
            assert!(matches!(Expr::parse(bad), Err(GeomError::Syntax { .. })), "{bad}");
        }
    }

    #[test]
    fn precedence() {
        let e = Expr::parse("-X1^2 + 2*3 - 4/2/2").unwrap();
        assert_eq!(e.eval(&p(3.0, 0.0, 0.0)).unwrap(), -9.0 + 6.0 - 1.0);
        let e = Expr::parse("1e-3 * 2.5E2").unwrap();
        assert!((e.eval(&p(0.0, 0.0, 0.0)).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn domain_errors() {
        let origin = p(0.0, 0.0, 0.0);
        assert!(matches!(
            Expr::parse("1/X1").unwrap().eval(&origin),
            Err(GeomError::EvalDomain(_))
        ));
        assert!(matches!(
            Expr::parse("log(X1)").unwrap().eval(&origin),
            Err(GeomError::EvalDomain(_))
        ));
        assert!(matches!(
            Expr::parse("log(X1 - 1)").unwrap().eval(&p(0.5, 0.0, 0.0)),
            Err(GeomError::EvalDomain(_))
        ));
        assert!(Expr::parse("log(X1)").unwrap().eval(&p(1.0, 0.0, 0.0)).is_ok());
    }

    #[test]
    fn diff_examples() {
        let e = Expr::parse("2*X1 + X2 + X3").unwrap();
        let d = e.diff(Axis::X1);
        assert!(d.is_constant());
        assert_eq!(d.eval(&p(9.0, 8.0, 7.0)).unwrap(), 2.0);

        for ax in Axis::ALL {
            assert_eq!(Expr::Const(4.2).diff(ax), Expr::Const(0.0));
        }

        let sq = Expr::parse("X1*X1").unwrap();
        assert_eq!(sq.diff(Axis::X1).eval(&p(3.0, 0.0, 0.0)).unwrap(), 6.0);
    }

    #[test]
    fn fd_partial_examples() {
        let lin = Expr::parse("2*X1").unwrap();
        assert!((fd_partial(&lin, &p(1.0, 0.0, 0.0), Axis::X1, 1e-5).unwrap() - 2.0).abs() <= 1e-9);

        let sq = Expr::parse("X1*X1").unwrap();
        let at = p(3.0, 0.0, 0.0);
        let exact = sq.diff(Axis::X1).eval(&at).unwrap();
        assert!((fd_partial(&sq, &at, Axis::X1, 1e-5).unwrap() - exact).abs() <= 1e-8);

        let s = Expr::parse("sin(X1)").unwrap();
        let at = p(0.7, 0.0, 0.0);
        let exact = s.diff(Axis::X1).eval(&at).unwrap();
        assert_eq!(exact, 0.7f64.cos());
        assert!((fd_partial(&s, &at, Axis::X1, 1e-5).unwrap() - exact).abs() <= 1e-8);
    }

    #[test]
    fn derivative_of_each_function() {
        let at = p(0.3, 1.7, 0.9);
        for (text, expected) in [
            ("cos(X2)", -(1.7f64).sin()),
            ("exp(2*X2)", 2.0 * (3.4f64).exp()),
            ("log(X2)", 1.0 / 1.7),
            ("X2^3", 3.0 * 1.7 * 1.7),
            ("1/X2", -1.0 / (1.7 * 1.7)),
            ("-X2", -1.0),
            ("X1 - X2", -1.0),
        ] {
            let d = Expr::parse(text).unwrap().diff(Axis::X2).eval(&at).unwrap();
            assert!((d - expected).abs() < 1e-12, "{text}: {d} vs {expected}");
        }
    }

    #[test]
    fn display_round_trips() {
        let e = Expr::parse("-(X2 + X3) * sin(X1)^2 / exp(-1.5) - log(2 + X3)").unwrap();
        let back = Expr::parse(&e.to_string()).unwrap();
        assert_eq!(e, back);
        let neg = Expr::mul(Expr::Const(-0.25), Expr::var(Axis::X3));
        assert_eq!(
            Expr::parse(&neg.to_string()).unwrap().eval(&p(0.0, 0.0, 4.0)).unwrap(),
            -1.0
        );
    }
}
