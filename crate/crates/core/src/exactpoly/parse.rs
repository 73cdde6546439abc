use alloc::string::{String, ToString};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::polynomial::{variables, Polynomial, Variables};

/// Failure to read an arithmetic expression. Positions are byte offsets.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown symbol `{name}` at {pos}")]
    UnknownSymbol { pos: usize, name: String },
    #[error("negative exponent at {pos}")]
    NegativeExponent { pos: usize },
    #[error("division by a non-constant expression at {pos}")]
    NonConstantDivisor { pos: usize },
    #[error("division by zero at {pos}")]
    DivisionByZero { pos: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
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

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i];
        let start = i;
        let tok = match ch {
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
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("ascii digits");
                out.push((start, Tok::Num(n)));
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
                let c = text[start..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax {
                    pos: start,
                    message: alloc::format!("unexpected character `{c}`"),
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
    vars: Variables,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn syntax(&self, message: &str) -> ParseError {
        ParseError::Syntax {
            pos: self.pos(),
            message: message.to_string(),
        }
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    acc = &acc * &self.unary()?;
                }
                Tok::Slash => {
                    let pos = self.bump().0;
                    let rhs = self.unary()?;
                    let k = rhs
                        .constant_value()
                        .ok_or(ParseError::NonConstantDivisor { pos })?;
                    if k.is_zero() {
                        return Err(ParseError::DivisionByZero { pos });
                    }
                    acc = acc.scale(&k.recip());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial, ParseError> {
        match self.peek() {
            Tok::Minus => {
                self.bump();
                Ok(-&self.unary()?)
            }
            Tok::Plus => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let exp = self.exponent()?;
        Ok(base.pow(exp))
    }

    fn exponent(&mut self) -> Result<u32, ParseError> {
        match self.peek().clone() {
            Tok::Minus => Err(ParseError::NegativeExponent { pos: self.pos() }),
            Tok::Num(n) => {
                let pos = self.bump().0;
                u32::try_from(&n).map_err(|_| ParseError::Syntax {
                    pos,
                    message: "exponent too large".to_string(),
                })
            }
            Tok::LParen => {
                self.bump();
                let e = self.exponent()?;
                match self.bump() {
                    (_, Tok::RParen) => Ok(e),
                    (pos, _) => Err(ParseError::Syntax {
                        pos,
                        message: "expected `)`".to_string(),
                    }),
                }
            }
            _ => Err(self.syntax("expected a nonnegative integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        let (pos, tok) = self.bump();
        match tok {
            Tok::Num(n) => Ok(Polynomial::constant(
                self.vars.clone(),
                BigRational::from_integer(n),
            )),
            Tok::Ident(name) => match self.vars.iter().position(|v| *v == name) {
                Some(i) => Ok(Polynomial::var(self.vars.clone(), i)),
                None => Err(ParseError::UnknownSymbol { pos, name }),
            },
            Tok::LParen => {
                let inner = self.expr()?;
                match self.bump() {
                    (_, Tok::RParen) => Ok(inner),
                    (pos, _) => Err(ParseError::Syntax {
                        pos,
                        message: "expected `)`".to_string(),
                    }),
                }
            }
            Tok::End => Err(ParseError::Syntax {
                pos,
                message: "unexpected end of input".to_string(),
            }),
            _ => Err(ParseError::Syntax {
                pos,
                message: "expected a number, symbol or `(`".to_string(),
            }),
        }
    }
}

/// Parses and expands an arithmetic expression over the given variables.
///
/// Accepts integer literals, `+ - * /`, `^` with nonnegative integer exponents
/// and parentheses. Division is only allowed by nonzero constants, which is
/// how rational literals such as `1/2*x` are written.
pub fn parse_expression(text: &str, variables_: &[&str]) -> Result<Polynomial, ParseError> {
    parse_with(text, variables(variables_))
}

/// Like [`parse_expression`] but reuses an existing variable list.
pub fn parse_with(text: &str, vars: Variables) -> Result<Polynomial, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, vars };
    let out = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.syntax("unexpected trailing input"));
    }
    Ok(out)
}
