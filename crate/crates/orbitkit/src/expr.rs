//! Text parser for coefficient and symbol expressions.
//!
//! Grammar (whitespace-insensitive):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := atom ('^' integer)?
//! atom   := '(' expr ')' | '-' factor | integer | 'i' | identifier
//! ```
//!
//! The same grammar serves both plain scalars (identifiers are formal
//! parameters) and polynomial symbols (identifiers from a declared variable
//! list become polynomial variables, the rest stay parameters).

use std::fmt;

use crate::poly::MultiPoly;
use crate::scalar::ScalarExpr;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at offset {}: {}", self.offset, self.msg)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq)]
enum Ast {
    Int(i64),
    ImaginaryUnit,
    Ident(String),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, u32),
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && (self.src[self.pos] as char).is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src.get(self.pos).map(|b| *b as char)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError {
            offset: self.pos,
            msg: msg.into(),
        }
    }
}

fn parse_expr(lx: &mut Lexer) -> Result<Ast, ParseError> {
    let mut lhs = parse_term(lx)?;
    while let Some(c) = lx.peek() {
        match c {
            '+' => {
                lx.bump();
                lhs = Ast::Add(Box::new(lhs), Box::new(parse_term(lx)?));
            }
            '-' => {
                lx.bump();
                lhs = Ast::Sub(Box::new(lhs), Box::new(parse_term(lx)?));
            }
            _ => break,
        }
    }
    Ok(lhs)
}

fn parse_term(lx: &mut Lexer) -> Result<Ast, ParseError> {
    let mut lhs = parse_factor(lx)?;
    while let Some(c) = lx.peek() {
        match c {
            '*' => {
                lx.bump();
                lhs = Ast::Mul(Box::new(lhs), Box::new(parse_factor(lx)?));
            }
            '/' => {
                lx.bump();
                lhs = Ast::Div(Box::new(lhs), Box::new(parse_factor(lx)?));
            }
            _ => break,
        }
    }
    Ok(lhs)
}

fn parse_factor(lx: &mut Lexer) -> Result<Ast, ParseError> {
    let base = parse_atom(lx)?;
    if lx.peek() == Some('^') {
        lx.bump();
        let mut digits = String::new();
        while let Some(c) = lx.peek() {
            if c.is_ascii_digit() {
                digits.push(c);
                lx.bump();
            } else {
                break;
            }
        }
        if digits.is_empty() {
            return Err(lx.err("expected integer exponent after '^'"));
        }
        let e: u32 = digits
            .parse()
            .map_err(|_| lx.err("exponent out of range"))?;
        return Ok(Ast::Pow(Box::new(base), e));
    }
    Ok(base)
}

fn parse_atom(lx: &mut Lexer) -> Result<Ast, ParseError> {
    match lx.peek() {
        None => Err(lx.err("unexpected end of input")),
        Some('(') => {
            lx.bump();
            let inner = parse_expr(lx)?;
            if lx.bump() != Some(')') {
                return Err(lx.err("expected ')'"));
            }
            Ok(inner)
        }
        Some('-') => {
            lx.bump();
            Ok(Ast::Neg(Box::new(parse_factor(lx)?)))
        }
        Some(c) if c.is_ascii_digit() => {
            let mut digits = String::new();
            while let Some(c) = lx.peek() {
                if c.is_ascii_digit() {
                    digits.push(c);
                    lx.bump();
                } else {
                    break;
                }
            }
            digits
                .parse()
                .map(Ast::Int)
                .map_err(|_| lx.err("integer literal out of range"))
        }
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {
            let mut name = String::new();
            while let Some(c) = lx.peek() {
                if c.is_ascii_alphanumeric() || c == '_' || c == '\'' {
                    name.push(c);
                    lx.bump();
                } else {
                    break;
                }
            }
            if name == "i" {
                Ok(Ast::ImaginaryUnit)
            } else {
                Ok(Ast::Ident(name))
            }
        }
        Some(c) => Err(lx.err(format!("unexpected character '{c}'"))),
    }
}

fn parse_ast(src: &str) -> Result<Ast, ParseError> {
    let mut lx = Lexer::new(src);
    let ast = parse_expr(&mut lx)?;
    if lx.peek().is_some() {
        return Err(lx.err("trailing input"));
    }
    Ok(ast)
}

fn eval_scalar(ast: &Ast) -> Result<ScalarExpr, ParseError> {
    Ok(match ast {
        Ast::Int(n) => ScalarExpr::from_int(*n),
        Ast::ImaginaryUnit => ScalarExpr::i(),
        Ast::Ident(name) => ScalarExpr::param(name),
        Ast::Neg(a) => -&eval_scalar(a)?,
        Ast::Add(a, b) => &eval_scalar(a)? + &eval_scalar(b)?,
        Ast::Sub(a, b) => &eval_scalar(a)? - &eval_scalar(b)?,
        Ast::Mul(a, b) => &eval_scalar(a)? * &eval_scalar(b)?,
        Ast::Div(a, b) => {
            let d = eval_scalar(b)?;
            if d.is_zero() {
                return Err(ParseError {
                    offset: 0,
                    msg: "division by zero".into(),
                });
            }
            &eval_scalar(a)? / &d
        }
        Ast::Pow(a, e) => eval_scalar(a)?.pow(*e),
    })
}

fn eval_poly(ast: &Ast, vars: &[String]) -> Result<MultiPoly, ParseError> {
    Ok(match ast {
        Ast::Int(n) => MultiPoly::constant(vars.to_vec(), ScalarExpr::from_int(*n)),
        Ast::ImaginaryUnit => MultiPoly::constant(vars.to_vec(), ScalarExpr::i()),
        Ast::Ident(name) => match vars.iter().position(|v| v == name) {
            Some(k) => MultiPoly::var(vars.to_vec(), k),
            None => MultiPoly::constant(vars.to_vec(), ScalarExpr::param(name)),
        },
        Ast::Neg(a) => -&eval_poly(a, vars)?,
        Ast::Add(a, b) => &eval_poly(a, vars)? + &eval_poly(b, vars)?,
        Ast::Sub(a, b) => &eval_poly(a, vars)? - &eval_poly(b, vars)?,
        Ast::Mul(a, b) => &eval_poly(a, vars)? * &eval_poly(b, vars)?,
        Ast::Div(a, b) => {
            let d = eval_poly(b, vars)?;
            match d.constant_value() {
                Some(c) if !c.is_zero() => eval_poly(a, vars)?.scale(&c.inv()),
                _ => {
                    return Err(ParseError {
                        offset: 0,
                        msg: "division by a non-constant or zero expression".into(),
                    })
                }
            }
        }
        Ast::Pow(a, e) => {
            let base = eval_poly(a, vars)?;
            let mut out = MultiPoly::constant(vars.to_vec(), ScalarExpr::one());
            for _ in 0..*e {
                out = &out * &base;
            }
            out
        }
    })
}

/// Parse a scalar expression; identifiers become formal parameters.
pub fn parse_scalar(src: &str) -> Result<ScalarExpr, ParseError> {
    eval_scalar(&parse_ast(src)?)
}

/// Parse a polynomial in the declared variables; other identifiers become
/// formal parameters of the coefficients.
pub fn parse_poly(src: &str, vars: &[String]) -> Result<MultiPoly, ParseError> {
    eval_poly(&parse_ast(src)?, vars)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_round_trip() {
        for s in ["1/2", "s+t", "(s+t)^2", "-i*a", "a^2*b - 1/2"] {
            let v = parse_scalar(s).unwrap();
            let again = parse_scalar(&v.to_string()).unwrap();
            assert_eq!(v, again, "round trip failed for {s}");
        }
    }

    #[test]
    fn poly_parsing_with_declared_vars() {
        let vars = vec!["y2".to_string(), "y3".to_string(), "y4".to_string()];
        let p = parse_poly("y2*y4 - 1/2*y3^2", &vars).unwrap();
        assert_eq!(p.to_string(), "y2*y4 - 1/2*y3^2");
    }

    #[test]
    fn reports_errors() {
        assert!(parse_scalar("1 +").is_err());
        assert!(parse_scalar("(a").is_err());
        assert!(parse_scalar("a^x").is_err());
        assert!(parse_scalar("1/0").is_err());
    }
}
