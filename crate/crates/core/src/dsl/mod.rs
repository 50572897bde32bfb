//! Text syntax for terms.
//!
//! A term file is a sequence of items: `alphabet "ab"` (word files only),
//! `let name = term`, and bare terms, the last of which is the result.
//! `#` starts a comment. Natural-number terms:
//!
//! ```text
//! z | s | coin | i2p | proj n m | det name
//! comp f (g1, ..., gn) | primrec f g | mu f
//! ```
//!
//! Word terms:
//!
//! ```text
//! eps | cons 'a' | rcons 'a' | proj n m | det name | comp f (g1, ..., gn)
//! case base ('a' -> t, ...) | rec base ('a' -> t, ...)
//! simrec i [base1, ...] [(j, 'a') -> t, ...]
//! ```
//!
//! Operands of `comp`, `primrec`, `mu`, `case` and `rec` are a keyword, a
//! bound name, or a parenthesized term. `det` names that are not plain
//! identifiers are written as strings.

mod lex;
mod nat;
mod print;
mod word;

use thiserror::Error;

pub use nat::{parse_nat, parse_nat_with};
pub use print::{print_nat, print_word, print_word_file};
pub use word::parse_word;

use crate::nat::NatTerm;
use crate::word::{Alphabet, WordTerm};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{line}:{col}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: Vec<String>,
    pub found: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, col: usize, expected: Vec<String>, found: String) -> Self {
        ParseError {
            line,
            col,
            expected,
            found,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermFile {
    Nat(NatTerm),
    Word { alphabet: Alphabet, term: WordTerm },
}

/// Parses a file as a word term if it declares an alphabet, else as a
/// natural-number term.
pub fn parse_term_file(src: &str) -> Result<TermFile, ParseError> {
    let toks = lex::lex(src)?;
    let declares = toks.iter().any(|t| t.tok == lex::Tok::Ident("alphabet".into()));
    if declares {
        let (alphabet, term) = parse_word(src)?;
        Ok(TermFile::Word { alphabet, term })
    } else {
        parse_nat(src).map(TermFile::Nat)
    }
}

/// Token cursor shared by both grammars.
pub(crate) struct Cursor {
    toks: Vec<lex::Spanned>,
    at: usize,
}

impl Cursor {
    pub(crate) fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Cursor {
            toks: lex::lex(src)?,
            at: 0,
        })
    }

    pub(crate) fn peek(&self) -> &lex::Tok {
        &self.toks[self.at].tok
    }

    pub(crate) fn pos(&self) -> (usize, usize) {
        let t = &self.toks[self.at];
        (t.line, t.col)
    }

    pub(crate) fn bump(&mut self) -> lex::Tok {
        let t = self.toks[self.at].tok.clone();
        if t != lex::Tok::Eof {
            self.at += 1;
        }
        t
    }

    pub(crate) fn fail<T>(&self, expected: &[&str]) -> Result<T, ParseError> {
        let (line, col) = self.pos();
        Err(ParseError::new(
            line,
            col,
            expected.iter().map(|s| s.to_string()).collect(),
            self.peek().describe(),
        ))
    }

    /// An error at an earlier position.
    pub(crate) fn fail_at<T>(&self, (line, col): (usize, usize), expected: &str, found: String) -> Result<T, ParseError> {
        Err(ParseError::new(line, col, vec![expected.to_string()], found))
    }

    pub(crate) fn eat(&mut self, p: &str) -> bool {
        if matches!(self.peek(), lex::Tok::Punct(q) if *q == p) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, p: &str) -> Result<(), ParseError> {
        if self.eat(p) {
            Ok(())
        } else {
            self.fail(&[&format!("`{p}`")])
        }
    }

    pub(crate) fn int(&mut self) -> Result<u64, ParseError> {
        match self.peek() {
            lex::Tok::Int(n) => {
                let n = *n;
                self.at += 1;
                Ok(n)
            }
            _ => self.fail(&["a number"]),
        }
    }

    pub(crate) fn symbol(&mut self) -> Result<char, ParseError> {
        match self.peek() {
            lex::Tok::Char(c) => {
                let c = *c;
                self.at += 1;
                Ok(c)
            }
            _ => self.fail(&["a quoted symbol like 'a'"]),
        }
    }

    /// An identifier or a string.
    pub(crate) fn name(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            lex::Tok::Ident(s) | lex::Tok::Str(s) => {
                self.at += 1;
                Ok(s)
            }
            _ => self.fail(&["a name"]),
        }
    }

    pub(crate) fn at_eof(&self) -> bool {
        *self.peek() == lex::Tok::Eof
    }

    pub(crate) fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), lex::Tok::Ident(s) if s == kw)
    }
}

pub(crate) trait HasCursor {
    fn cursor(&mut self) -> &mut Cursor;
}

/// Comma-separated items up to `close`; the opener is already consumed.
pub(crate) fn list<P: HasCursor, T>(
    p: &mut P,
    close: &str,
    mut item: impl FnMut(&mut P) -> Result<T, ParseError>,
) -> Result<Vec<T>, ParseError> {
    let mut out = Vec::new();
    if p.cursor().eat(close) {
        return Ok(out);
    }
    loop {
        out.push(item(p)?);
        if p.cursor().eat(close) {
            return Ok(out);
        }
        if !p.cursor().eat(",") {
            return p.cursor().fail(&["`,`", &format!("`{close}`")]);
        }
    }
}
