//! Tokenizer and polynomial-expression parser shared by the algebra and
//! module file formats.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::word::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl std::fmt::Display for Pos {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: Pos, msg: String },
    #[error("unknown generator `{name}` at {pos}")]
    UnknownGenerator { name: String, pos: Pos },
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("generator `{0}` must have positive degree")]
    NonPositiveDegree(String),
    #[error("too many generators (at most 255)")]
    TooManyGenerators,
    #[error("relation {index} is not homogeneous")]
    Inhomogeneous { index: usize },
    #[error("relation {index} has degree {degree}; relations must have degree at least 2")]
    LowDegree { index: usize, degree: u32 },
    #[error("{0}")]
    Field(#[from] crate::field::FieldError),
    #[error("module relation {column}: {msg}")]
    Module { column: usize, msg: String },
    #[error("only the deglex monomial order is supported (got `{0}`)")]
    UnsupportedOrder(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(BigInt),
    Colon,
    Semi,
    Comma,
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    Eof,
}

pub(crate) struct Lexer {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Lexer {
    pub fn new(src: &str) -> Result<Self, ParseError> {
        let mut toks = Vec::new();
        for (li, line) in src.lines().enumerate() {
            let line = match line.find('#') {
                Some(i) => &line[..i],
                None => line,
            };
            let chars: Vec<char> = line.chars().collect();
            let mut i = 0;
            while i < chars.len() {
                let c = chars[i];
                let pos = Pos {
                    line: li + 1,
                    col: i + 1,
                };
                if c.is_whitespace() {
                    i += 1;
                    continue;
                }
                if c.is_ascii_alphabetic() || c == '_' {
                    let start = i;
                    while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                        i += 1;
                    }
                    toks.push((Tok::Ident(chars[start..i].iter().collect()), pos));
                    continue;
                }
                if c.is_ascii_digit() {
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let s: String = chars[start..i].iter().collect();
                    toks.push((Tok::Int(s.parse().unwrap()), pos));
                    continue;
                }
                let t = match c {
                    ':' => Tok::Colon,
                    ';' => Tok::Semi,
                    ',' => Tok::Comma,
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '^' => Tok::Caret,
                    '/' => Tok::Slash,
                    _ => {
                        return Err(ParseError::Syntax {
                            pos,
                            msg: format!("unexpected character `{c}`"),
                        })
                    }
                };
                toks.push((t, pos));
                i += 1;
            }
        }
        let end = Pos {
            line: src.lines().count().max(1),
            col: 1,
        };
        toks.push((Tok::Eof, end));
        Ok(Lexer { toks, at: 0 })
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    pub fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    pub fn next(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    pub fn error<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    pub fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, t: &Tok, what: &str) -> Result<(), ParseError> {
        if self.eat(t) {
            Ok(())
        } else {
            self.error(format!("expected {what}"))
        }
    }

    pub fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            _ => self.error(format!("expected {what}")),
        }
    }

    pub fn integer(&mut self, what: &str) -> Result<BigInt, ParseError> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.next();
                Ok(n)
            }
            _ => self.error(format!("expected {what}")),
        }
    }

    pub fn at_keyword(&self, kws: &[&str]) -> bool {
        matches!(self.peek(), Tok::Ident(s) if kws.contains(&s.as_str()))
    }
}

/// Parsed but not yet normalized polynomial terms.
pub(crate) type RawTerms = Vec<(Word, BigRational)>;

/// poly := ['-'] term (('+'|'-') term)*
/// term := factor ('*' factor)*, factor := integer ['/' integer] | name ['^' exponent]
pub(crate) fn parse_poly(
    lx: &mut Lexer,
    names: &HashMap<String, usize>,
) -> Result<RawTerms, ParseError> {
    let mut terms = Vec::new();
    let mut sign = BigRational::one();
    if lx.eat(&Tok::Minus) {
        sign = -sign;
    } else {
        lx.eat(&Tok::Plus);
    }
    loop {
        let (w, c) = parse_term(lx, names)?;
        terms.push((w, c * &sign));
        if lx.eat(&Tok::Plus) {
            sign = BigRational::one();
        } else if lx.eat(&Tok::Minus) {
            sign = -BigRational::one();
        } else {
            break;
        }
    }
    Ok(terms)
}

fn parse_term(
    lx: &mut Lexer,
    names: &HashMap<String, usize>,
) -> Result<(Word, BigRational), ParseError> {
    let mut coef = BigRational::one();
    let mut letters: Vec<usize> = Vec::new();
    loop {
        match lx.peek().clone() {
            Tok::Int(n) => {
                lx.next();
                let mut q = BigRational::from_integer(n);
                if lx.eat(&Tok::Slash) {
                    let d = lx.integer("denominator")?;
                    if d.is_zero() {
                        return lx.error("zero denominator");
                    }
                    q /= BigRational::from_integer(d);
                }
                coef *= q;
            }
            Tok::Ident(name) => {
                let pos = lx.pos();
                lx.next();
                let g = *names.get(&name).ok_or(ParseError::UnknownGenerator {
                    name: name.clone(),
                    pos,
                })?;
                let mut e = 1usize;
                if lx.eat(&Tok::Caret) {
                    let n = lx.integer("exponent")?;
                    e = usize::try_from(n).map_err(|_| ParseError::Syntax {
                        pos,
                        msg: "exponent too large".into(),
                    })?;
                    if e > 64 {
                        return Err(ParseError::Syntax {
                            pos,
                            msg: "exponent too large".into(),
                        });
                    }
                }
                letters.extend(std::iter::repeat_n(g, e));
            }
            _ => return lx.error("expected coefficient or generator"),
        }
        if !lx.eat(&Tok::Star) {
            break;
        }
    }
    Ok((Word::from_letters(&letters), coef))
}

/// Parses a single polynomial expression (no trailing separator).
pub fn parse_poly_str(
    src: &str,
    names: &HashMap<String, usize>,
) -> Result<Vec<(Word, BigRational)>, ParseError> {
    let mut lx = Lexer::new(src)?;
    if lx.peek() == &Tok::Eof {
        return lx.error("empty polynomial");
    }
    let t = parse_poly(&mut lx, names)?;
    if lx.peek() != &Tok::Eof {
        return lx.error("trailing input after polynomial");
    }
    Ok(t)
}
