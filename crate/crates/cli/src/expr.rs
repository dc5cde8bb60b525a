//! Time-function expressions.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := ('+' | '-') unary | power
//! power := atom ('^' unary)?
//! atom  := number | 'i' | 'pi' | 'π' | 't' | func '(' expr ')' | '(' expr ')'
//! func  := 'sin' | 'cos' | 'exp'
//! ```
//!
//! Values are complex; `^` with an integer exponent uses repeated
//! multiplication.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use wickwave::TimeFn;

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    /// Character offset (0-based) of the offending token.
    pub pos: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "column {}: {}", self.pos + 1, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Func {
    Sin,
    Cos,
    Exp,
}

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Num(Complex64),
    T,
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

impl Node {
    fn eval(&self, t: f64) -> Complex64 {
        match self {
            Node::Num(v) => *v,
            Node::T => Complex64::new(t, 0.0),
            Node::Neg(a) => -a.eval(t),
            Node::Add(a, b) => a.eval(t) + b.eval(t),
            Node::Sub(a, b) => a.eval(t) - b.eval(t),
            Node::Mul(a, b) => a.eval(t) * b.eval(t),
            Node::Div(a, b) => a.eval(t) / b.eval(t),
            Node::Pow(a, b) => {
                let base = a.eval(t);
                let e = b.eval(t);
                if e.im == 0.0 && e.re.fract() == 0.0 && e.re.abs() <= 64.0 {
                    base.powi(e.re as i32)
                } else if base.im == 0.0 && base.re >= 0.0 && e.im == 0.0 {
                    Complex64::new(base.re.powf(e.re), 0.0)
                } else {
                    base.powc(e)
                }
            }
            Node::Call(f, a) => {
                let v = a.eval(t);
                match f {
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                    Func::Exp => v.exp(),
                }
            }
        }
    }

    fn uses_t(&self) -> bool {
        match self {
            Node::Num(_) => false,
            Node::T => true,
            Node::Neg(a) | Node::Call(_, a) => a.uses_t(),
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) | Node::Pow(a, b) => {
                a.uses_t() || b.uses_t()
            }
        }
    }
}

/// A parsed expression in `t`.
#[derive(Debug, Clone)]
pub struct Expr {
    source: String,
    root: Arc<Node>,
    uses_i: bool,
}

impl Expr {
    pub fn parse(source: &str) -> Result<Self, ParseError> {
        let tokens = lex(source)?;
        let mut p = Parser { tokens, at: 0, uses_i: false };
        let root = p.expr()?;
        if let Some(tok) = p.peek() {
            return Err(ParseError { pos: tok.pos, message: format!("unexpected {}", tok.kind) });
        }
        Ok(Self { source: source.to_string(), root: Arc::new(root), uses_i: p.uses_i })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        self.root.eval(t)
    }

    pub fn is_constant(&self) -> bool {
        !self.root.uses_t()
    }

    /// True if the imaginary unit appears anywhere in the expression.
    pub fn uses_imaginary_unit(&self) -> bool {
        self.uses_i
    }

    pub fn to_time_fn(&self) -> TimeFn {
        if self.is_constant() {
            return TimeFn::constant(self.eval(0.0));
        }
        let root = Arc::clone(&self.root);
        TimeFn::new(move |t| root.eval(t))
    }

    /// Real-valued handle; expressions using `i` are rejected.
    pub fn to_real_time_fn(&self) -> Result<TimeFn<f64>, ParseError> {
        if self.uses_i {
            return Err(ParseError {
                pos: self.source.find('i').unwrap_or(0),
                message: "imaginary unit in a real-valued coefficient".into(),
            });
        }
        if self.is_constant() {
            return Ok(TimeFn::constant(self.eval(0.0).re));
        }
        let root = Arc::clone(&self.root);
        Ok(TimeFn::new(move |t| root.eval(t).re))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Num(v) => write!(f, "number {v}"),
            Kind::Ident(s) => write!(f, "'{s}'"),
            Kind::Op(c) => write!(f, "'{c}'"),
            Kind::LParen => write!(f, "'('"),
            Kind::RParen => write!(f, "')'"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: Kind,
    pos: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            // exponent part: e or E followed by optional sign and digits
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text: String = chars[start..i].iter().collect();
            let v = text
                .parse::<f64>()
                .map_err(|_| ParseError { pos, message: format!("malformed number '{text}'") })?;
            out.push(Token { kind: Kind::Num(v), pos });
        } else if c.is_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_alphanumeric() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Token { kind: Kind::Ident(text), pos });
        } else {
            let kind = match c {
                '+' | '-' | '*' | '/' | '^' => Kind::Op(c),
                '×' => Kind::Op('*'),
                '−' => Kind::Op('-'),
                '(' => Kind::LParen,
                ')' => Kind::RParen,
                _ => return Err(ParseError { pos, message: format!("unexpected character '{c}'") }),
            };
            out.push(Token { kind, pos });
            i += 1;
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    at: usize,
    uses_i: bool,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at)
    }

    fn end_pos(&self) -> usize {
        self.tokens.last().map(|t| t.pos + 1).unwrap_or(0)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.at).cloned();
        self.at += 1;
        t
    }

    fn eat_op(&mut self, ops: &[char]) -> Option<char> {
        match self.peek() {
            Some(Token { kind: Kind::Op(c), .. }) if ops.contains(c) => {
                let c = *c;
                self.at += 1;
                Some(c)
            }
            _ => None,
        }
    }

    fn expr(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.term()?;
        while let Some(op) = self.eat_op(&['+', '-']) {
            let rhs = self.term()?;
            lhs = if op == '+' {
                Node::Add(Box::new(lhs), Box::new(rhs))
            } else {
                Node::Sub(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.eat_op(&['*', '/']) {
            let rhs = self.unary()?;
            lhs = if op == '*' {
                Node::Mul(Box::new(lhs), Box::new(rhs))
            } else {
                Node::Div(Box::new(lhs), Box::new(rhs))
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node, ParseError> {
        match self.eat_op(&['+', '-']) {
            Some('-') => Ok(Node::Neg(Box::new(self.unary()?))),
            Some(_) => self.unary(),
            None => self.power(),
        }
    }

    fn power(&mut self) -> Result<Node, ParseError> {
        let base = self.atom()?;
        if self.eat_op(&['^']).is_some() {
            let e = self.unary()?;
            return Ok(Node::Pow(Box::new(base), Box::new(e)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node, ParseError> {
        let end = self.end_pos();
        let Some(tok) = self.next() else {
            return Err(ParseError { pos: end, message: "unexpected end of expression".into() });
        };
        match tok.kind {
            Kind::Num(v) => Ok(Node::Num(Complex64::new(v, 0.0))),
            Kind::LParen => {
                let inner = self.expr()?;
                self.close(tok.pos)?;
                Ok(inner)
            }
            Kind::Ident(name) => match name.as_str() {
                "t" => Ok(Node::T),
                "i" => {
                    self.uses_i = true;
                    Ok(Node::Num(Complex64::new(0.0, 1.0)))
                }
                "pi" | "π" => Ok(Node::Num(Complex64::new(std::f64::consts::PI, 0.0))),
                "sin" | "cos" | "exp" => {
                    let f = match name.as_str() {
                        "sin" => Func::Sin,
                        "cos" => Func::Cos,
                        _ => Func::Exp,
                    };
                    match self.next() {
                        Some(Token { kind: Kind::LParen, pos }) => {
                            let arg = self.expr()?;
                            self.close(pos)?;
                            Ok(Node::Call(f, Box::new(arg)))
                        }
                        Some(other) => Err(ParseError {
                            pos: other.pos,
                            message: format!("expected '(' after {name}"),
                        }),
                        None => Err(ParseError { pos: end, message: format!("expected '(' after {name}") }),
                    }
                }
                _ => Err(ParseError { pos: tok.pos, message: format!("unknown name '{name}'") }),
            },
            other => Err(ParseError { pos: tok.pos, message: format!("unexpected {other}") }),
        }
    }

    fn close(&mut self, open: usize) -> Result<(), ParseError> {
        match self.next() {
            Some(Token { kind: Kind::RParen, .. }) => Ok(()),
            Some(tok) => Err(ParseError { pos: tok.pos, message: format!("expected ')', found {}", tok.kind) }),
            None => Err(ParseError { pos: open, message: "unclosed '('".into() }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str, t: f64) -> Complex64 {
        Expr::parse(s).unwrap().eval(t)
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(ev("1 + 2*3", 0.0).re, 7.0);
        assert_eq!(ev("2^3^2", 0.0).re, 512.0);
        assert_eq!(ev("-2^2", 0.0).re, -4.0);
        assert_eq!(ev("8/4/2", 0.0).re, 1.0);
        assert_eq!(ev("1e-2*t", 3.0).re, 0.03);
    }

    #[test]
    fn complex_values() {
        let v = ev("-1.5*i*cos(0.2*t)", 0.0);
        assert_eq!(v, Complex64::new(0.0, -1.5));
        assert_eq!(ev("i^2", 0.0), Complex64::new(-1.0, 0.0));
        assert!(Expr::parse("i").unwrap().to_real_time_fn().is_err());
    }

    #[test]
    fn errors_carry_positions() {
        let e = Expr::parse("sin(t").unwrap_err();
        assert_eq!(e.pos, 3);
        let e = Expr::parse("2 * foo").unwrap_err();
        assert_eq!(e.pos, 4);
        assert!(Expr::parse("").is_err());
        assert!(Expr::parse("1 2").is_err());
        assert!(Expr::parse("log(t)").is_err());
    }
}
