use std::collections::BTreeMap;

use super::lex::Tok;
use super::{list, Cursor, HasCursor, ParseError};
use crate::nat::{stdlib, NatLib, NatTerm};

const KEYWORDS: [&str; 11] = ["z", "s", "coin", "i2p", "proj", "comp", "primrec", "mu", "det", "let", "alphabet"];

/// Parses a natural-number term file. Names not bound by `let` and `det`
/// functions are looked up in the standard library.
pub fn parse_nat(src: &str) -> Result<NatTerm, ParseError> {
    parse_nat_with(src, &stdlib())
}

pub fn parse_nat_with(src: &str, lib: &NatLib) -> Result<NatTerm, ParseError> {
    let mut p = NatParser {
        c: Cursor::new(src)?,
        env: BTreeMap::new(),
        lib,
    };
    let mut main = None;
    while !p.c.at_eof() {
        if p.c.is_kw("let") {
            p.c.bump();
            let at = p.c.pos();
            let name = match p.c.bump() {
                Tok::Ident(n) if !KEYWORDS.contains(&n.as_str()) => n,
                t => return p.c.fail_at(at, "a name to bind", t.describe()),
            };
            p.c.expect("=")?;
            let t = p.checked()?;
            p.env.insert(name, t);
        } else if p.c.is_kw("alphabet") {
            return p.c.fail(&["a term (alphabets belong to word files)"]);
        } else {
            main = Some(p.checked()?);
        }
        p.c.eat(";");
    }
    match main {
        Some(t) => Ok(t),
        None => p.c.fail(&["a term"]),
    }
}

struct NatParser<'a> {
    c: Cursor,
    env: BTreeMap<String, NatTerm>,
    lib: &'a NatLib,
}

impl HasCursor for NatParser<'_> {
    fn cursor(&mut self) -> &mut Cursor {
        &mut self.c
    }
}

impl NatParser<'_> {
    /// A term whose arities are consistent.
    fn checked(&mut self) -> Result<NatTerm, ParseError> {
        let at = self.c.pos();
        let t = self.term()?;
        match t.arity() {
            Ok(_) => Ok(t),
            Err(e) => self.c.fail_at(at, "a term with consistent arities", e.to_string()),
        }
    }

    fn term(&mut self) -> Result<NatTerm, ParseError> {
        let at = self.c.pos();
        let kw = match self.c.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return self.atom(),
        };
        match kw.as_str() {
            "proj" => {
                self.c.bump();
                let (n, m) = (self.c.int()?, self.c.int()?);
                if n == 0 || m == 0 || m > n {
                    return self.c.fail_at(at, "`proj n m` with 1 ≤ m ≤ n", format!("proj {n} {m}"));
                }
                Ok(NatTerm::Proj(n as usize, m as usize))
            }
            "comp" => {
                self.c.bump();
                let f = self.atom()?;
                self.c.expect("(")?;
                let gs = list(self, ")", |p| p.term())?;
                Ok(NatTerm::comp(f, gs))
            }
            "primrec" => {
                self.c.bump();
                let f = self.atom()?;
                let g = self.atom()?;
                Ok(NatTerm::primrec(f, g))
            }
            "mu" => {
                self.c.bump();
                Ok(NatTerm::mu(self.atom()?))
            }
            "det" => {
                self.c.bump();
                let at = self.c.pos();
                let name = self.c.name()?;
                match self.lib.det(&name) {
                    Ok(f) => Ok(NatTerm::Det(f)),
                    Err(_) => self.c.fail_at(at, "a known deterministic function", format!("`{name}`")),
                }
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<NatTerm, ParseError> {
        let at = self.c.pos();
        match self.c.peek().clone() {
            Tok::Punct("(") => {
                self.c.bump();
                let t = self.term()?;
                self.c.expect(")")?;
                Ok(t)
            }
            Tok::Ident(s) => {
                let t = match s.as_str() {
                    "z" => NatTerm::Zero,
                    "s" => NatTerm::Succ,
                    "coin" => NatTerm::Coin,
                    "i2p" => NatTerm::I2p,
                    k if KEYWORDS.contains(&k) => {
                        return self.c.fail(&["an operand (parenthesize compound terms)"]);
                    }
                    name => match self.env.get(name).cloned().or_else(|| self.lib.term(name).ok()) {
                        Some(t) => t,
                        None => return self.c.fail_at(at, "a bound name", format!("unbound `{name}`")),
                    },
                };
                self.c.bump();
                Ok(t)
            }
            _ => self.c.fail(&["a term"]),
        }
    }
}
