use std::fmt;
use std::sync::Arc;

use crate::polyfield::{Poly, PolyRing, PrimeField};

/// A 1-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Int(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Eq,
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
            Tok::Int(s) => write!(f, "integer `{s}`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Minus => f.write_str("`-`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBracket => f.write_str("`[`"),
            Tok::RBracket => f.write_str("`]`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Eq => f.write_str("`=`"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyntaxError {
    pub pos: Pos,
    pub message: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.message)
    }
}

pub(crate) fn tokenize(src: &str) -> Result<Vec<(Tok, Pos)>, SyntaxError> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, col };
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
            }
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                s.push(d);
                chars.next();
                col += 1;
            }
            out.push((Tok::Int(s), pos));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if !(d.is_alphanumeric() || d == '_') {
                    break;
                }
                s.push(d);
                chars.next();
                col += 1;
            }
            out.push((Tok::Ident(s), pos));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            ',' => Tok::Comma,
            ';' => Tok::Semi,
            '=' => Tok::Eq,
            other => {
                return Err(SyntaxError {
                    pos,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        chars.next();
        col += 1;
        out.push((tok, pos));
    }
    out.push((Tok::End, Pos { line, col }));
    Ok(out)
}

/// Failure while reading a polynomial: syntax, or a name not in `vars`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum ExprError {
    Syntax(SyntaxError),
    UnknownVariable(String, Pos),
}

impl From<SyntaxError> for ExprError {
    fn from(e: SyntaxError) -> Self {
        ExprError::Syntax(e)
    }
}

pub(crate) struct Cursor<'t> {
    toks: &'t [(Tok, Pos)],
    at: usize,
}

impl<'t> Cursor<'t> {
    pub(crate) fn new(toks: &'t [(Tok, Pos)]) -> Self {
        Cursor { toks, at: 0 }
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    pub(crate) fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    pub(crate) fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    pub(crate) fn error(&self, expected: &str) -> SyntaxError {
        SyntaxError {
            pos: self.pos(),
            message: format!("expected {expected}, found {}", self.peek()),
        }
    }

    pub(crate) fn expect(&mut self, tok: Tok, expected: &str) -> Result<Pos, SyntaxError> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            Err(self.error(expected))
        }
    }

    pub(crate) fn ident(&mut self, expected: &str) -> Result<(String, Pos), SyntaxError> {
        match self.peek() {
            Tok::Ident(_) => match self.bump() {
                (Tok::Ident(s), p) => Ok((s, p)),
                _ => unreachable!(),
            },
            _ => Err(self.error(expected)),
        }
    }

    pub(crate) fn int(&mut self, expected: &str) -> Result<(String, Pos), SyntaxError> {
        match self.peek() {
            Tok::Int(_) => match self.bump() {
                (Tok::Int(s), p) => Ok((s, p)),
                _ => unreachable!(),
            },
            _ => Err(self.error(expected)),
        }
    }
}

/// Recursive-descent reader for `+ - * ^` expressions with parentheses.
pub(crate) struct ExprParser<'a> {
    pub ring: &'a Arc<PolyRing>,
    pub names: &'a [String],
}

impl ExprParser<'_> {
    fn field(&self) -> PrimeField {
        self.ring.field()
    }

    pub(crate) fn expr(&self, cur: &mut Cursor<'_>) -> Result<Poly, ExprError> {
        let mut acc = self.term(cur)?;
        loop {
            match cur.peek() {
                Tok::Plus => {
                    cur.bump();
                    acc = &acc + &self.term(cur)?;
                }
                Tok::Minus => {
                    cur.bump();
                    acc = &acc - &self.term(cur)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&self, cur: &mut Cursor<'_>) -> Result<Poly, ExprError> {
        let mut acc = self.unary(cur)?;
        while *cur.peek() == Tok::Star {
            cur.bump();
            acc = &acc * &self.unary(cur)?;
        }
        Ok(acc)
    }

    fn unary(&self, cur: &mut Cursor<'_>) -> Result<Poly, ExprError> {
        match cur.peek() {
            Tok::Minus => {
                cur.bump();
                Ok(-&self.unary(cur)?)
            }
            Tok::Plus => {
                cur.bump();
                self.unary(cur)
            }
            _ => self.power(cur),
        }
    }

    fn power(&self, cur: &mut Cursor<'_>) -> Result<Poly, ExprError> {
        let base = self.atom(cur)?;
        if *cur.peek() != Tok::Caret {
            return Ok(base);
        }
        cur.bump();
        let (digits, pos) = cur.int("a non-negative integer exponent")?;
        let exp: u32 = digits.parse().map_err(|_| SyntaxError {
            pos,
            message: format!("exponent `{digits}` is too large"),
        })?;
        Ok(base.pow(exp as u64))
    }

    fn atom(&self, cur: &mut Cursor<'_>) -> Result<Poly, ExprError> {
        match cur.peek().clone() {
            Tok::Int(digits) => {
                cur.bump();
                let p = self.field().characteristic();
                let v = digits.bytes().fold(0u64, |acc, d| (acc * 10 + (d - b'0') as u64) % p);
                Ok(Poly::constant(self.ring, v as i64))
            }
            Tok::Ident(name) => {
                let pos = cur.pos();
                cur.bump();
                match self.names.iter().position(|n| *n == name) {
                    Some(i) => Ok(Poly::var(self.ring, i)),
                    None => Err(ExprError::UnknownVariable(name, pos)),
                }
            }
            Tok::LParen => {
                cur.bump();
                let inner = self.expr(cur)?;
                cur.expect(Tok::RParen, "`)`")?;
                Ok(inner)
            }
            _ => Err(cur.error("a number, a variable or `(`").into()),
        }
    }

    /// `[` poly (`,` poly)* `]`, or `[]`. Returns each polynomial with the
    /// position where it starts.
    pub(crate) fn list(&self, cur: &mut Cursor<'_>) -> Result<Vec<(Poly, Pos)>, ExprError> {
        cur.expect(Tok::LBracket, "`[`")?;
        let mut out = Vec::new();
        if *cur.peek() == Tok::RBracket {
            cur.bump();
            return Ok(out);
        }
        loop {
            let pos = cur.pos();
            out.push((self.expr(cur)?, pos));
            match cur.peek() {
                Tok::Comma => {
                    cur.bump();
                }
                Tok::RBracket => {
                    cur.bump();
                    return Ok(out);
                }
                _ => return Err(cur.error("`,` or `]`").into()),
            }
        }
    }

    /// Comma-separated polynomials without brackets, up to end of input.
    pub(crate) fn bare_list(&self, cur: &mut Cursor<'_>) -> Result<Vec<(Poly, Pos)>, ExprError> {
        let mut out = Vec::new();
        loop {
            let pos = cur.pos();
            out.push((self.expr(cur)?, pos));
            match cur.peek() {
                Tok::Comma => {
                    cur.bump();
                }
                Tok::End => return Ok(out),
                _ => return Err(cur.error("`,` or end of input").into()),
            }
        }
    }
}
