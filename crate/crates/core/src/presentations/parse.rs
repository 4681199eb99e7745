//! Recursive-descent parser for presentations and words.
//!
//! ```text
//! presentation := '<' [ident {',' ident}] '|' [relation {',' relation}] '>'
//! relation     := word ['=' word]          (u = v is stored as u v^-1)
//! word         := {factor ['*']}
//! factor       := primary ['^' signed-int]
//! primary      := ident | '1' | '(' word ')' | '[' word ',' word ']'
//! ```
//!
//! `[u, v]` expands to `u⁻¹ v⁻¹ u v`.

use thiserror::Error;

use super::{FinitePresentation, PresentationError};
use crate::words::{Generator, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    declared: Option<&'a [Generator]>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, declared: Option<&'a [Generator]>) -> Self {
        Self { src, pos: 0, declared }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, PresentationError> {
        Err(ParseError { position: self.pos, message: message.into() }.into())
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek_raw() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek_raw(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.peek_raw()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), PresentationError> {
        if self.eat(c) {
            Ok(())
        } else {
            match self.peek() {
                Some(found) => self.err(format!("expected `{c}`, found `{found}`")),
                None => self.err(format!("expected `{c}`, found end of input")),
            }
        }
    }

    fn ident(&mut self) -> Result<String, PresentationError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek_raw() {
            Some(c) if c.is_ascii_alphabetic() => {}
            Some(c) => return self.err(format!("expected identifier, found `{c}`")),
            None => return self.err("expected identifier, found end of input"),
        }
        while let Some(c) = self.peek_raw() {
            if c.is_ascii_alphanumeric() || c == '_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(self.src[start..self.pos].to_string())
    }

    fn signed_int(&mut self) -> Result<i64, PresentationError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek_raw(), Some('-' | '+')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while matches!(self.peek_raw(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits {
            self.pos = start;
            return self.err("expected integer exponent");
        }
        let text = &self.src[start..self.pos];
        match text.parse() {
            Ok(v) => Ok(v),
            Err(_) => {
                self.pos = start;
                self.err(format!("exponent `{text}` out of range"))
            }
        }
    }

    fn generator(&mut self) -> Result<Generator, PresentationError> {
        let start = self.pos;
        let name = self.ident()?;
        let g = Generator::new(&name);
        if let Some(decl) = self.declared {
            if !decl.contains(&g) {
                self.pos = start;
                self.skip_ws();
                return Err(PresentationError::UndeclaredGenerator(name));
            }
        }
        Ok(g)
    }

    fn primary(&mut self) -> Result<Word, PresentationError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(')')?;
                Ok(w)
            }
            Some('[') => {
                self.pos += 1;
                let u = self.word()?;
                self.expect(',')?;
                let v = self.word()?;
                self.expect(']')?;
                Ok(Word::commutator(&u, &v))
            }
            Some('1') => {
                self.pos += 1;
                Ok(Word::identity())
            }
            _ => Ok(self.generator()?.word()),
        }
    }

    fn factor(&mut self) -> Result<Word, PresentationError> {
        let base = self.primary()?;
        if self.eat('^') {
            let k = self.signed_int()?;
            Ok(base.pow(k))
        } else {
            Ok(base)
        }
    }

    fn word(&mut self) -> Result<Word, PresentationError> {
        let mut acc = Word::identity();
        loop {
            match self.peek() {
                None | Some(',' | '|' | '>' | ']' | ')' | '=') => return Ok(acc),
                Some('*') => {
                    self.pos += 1;
                }
                Some(_) => {
                    let f = self.factor()?;
                    acc = acc.concat(&f);
                }
            }
        }
    }

    fn relation(&mut self) -> Result<Word, PresentationError> {
        let lhs = self.word()?;
        if self.eat('=') {
            let rhs = self.word()?;
            Ok(lhs.concat(&rhs.inverse()))
        } else {
            Ok(lhs)
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }
}

/// Parses the `<generators | relators>` grammar.
pub fn parse_presentation(text: &str) -> Result<FinitePresentation, PresentationError> {
    let mut p = Parser::new(text, None);
    p.expect('<')?;
    let mut generators = Vec::new();
    if p.peek() != Some('|') {
        loop {
            generators.push(Generator::new(&p.ident()?));
            if !p.eat(',') {
                break;
            }
        }
    }
    p.expect('|')?;
    for (i, g) in generators.iter().enumerate() {
        if generators[..i].contains(g) {
            return Err(PresentationError::DuplicateGenerator(g.to_string()));
        }
    }
    let mut relators = Vec::new();
    {
        let mut rp = Parser { src: p.src, pos: p.pos, declared: Some(&generators) };
        if rp.peek() != Some('>') {
            loop {
                relators.push(rp.relation()?);
                if !rp.eat(',') {
                    break;
                }
            }
        }
        rp.expect('>')?;
        if !rp.at_end() {
            return rp.err("trailing input after `>`");
        }
    }
    FinitePresentation::new(generators, relators)
}

/// Parses a single word. When `declared` is given, every generator must be
/// one of them.
pub fn parse_word(text: &str, declared: Option<&[Generator]>) -> Result<Word, PresentationError> {
    let mut p = Parser::new(text, declared);
    let w = p.relation()?;
    if !p.at_end() {
        return p.err("unexpected character in word");
    }
    Ok(w)
}
