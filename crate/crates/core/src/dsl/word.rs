use std::collections::BTreeMap;

use super::lex::Tok;
use super::{list, Cursor, HasCursor, ParseError};
use crate::word::{builtin_word_det, Alphabet, WordTerm};

const KEYWORDS: [&str; 11] = ["eps", "cons", "rcons", "proj", "comp", "case", "rec", "simrec", "det", "let", "alphabet"];

/// Parses a word term file. The `alphabet` line must come before any term.
pub fn parse_word(src: &str) -> Result<(Alphabet, WordTerm), ParseError> {
    let mut p = WordParser {
        c: Cursor::new(src)?,
        env: BTreeMap::new(),
        sigma: None,
    };
    let mut main = None;
    while !p.c.at_eof() {
        if p.c.is_kw("alphabet") {
            p.c.bump();
            let at = p.c.pos();
            if p.sigma.is_some() {
                return p.c.fail_at(at, "a single alphabet line", "a second one".into());
            }
            let s = match p.c.bump() {
                Tok::Str(s) => s,
                t => return p.c.fail_at(at, "the alphabet as a string like \"ab\"", t.describe()),
            };
            match Alphabet::parse(&s) {
                Ok(a) => p.sigma = Some(a),
                Err(e) => return p.c.fail_at(at, "a valid alphabet", e.to_string()),
            }
        } else if p.sigma.is_none() {
            return p.c.fail(&["`alphabet \"...\"` before the first term"]);
        } else if p.c.is_kw("let") {
            p.c.bump();
            let at = p.c.pos();
            let name = match p.c.bump() {
                Tok::Ident(n) if !KEYWORDS.contains(&n.as_str()) => n,
                t => return p.c.fail_at(at, "a name to bind", t.describe()),
            };
            p.c.expect("=")?;
            let t = p.checked()?;
            p.env.insert(name, t);
        } else {
            main = Some(p.checked()?);
        }
        p.c.eat(";");
    }
    match (p.sigma, main) {
        (Some(s), Some(t)) => Ok((s, t)),
        _ => p.c.fail(&["a term"]),
    }
}

struct WordParser {
    c: Cursor,
    env: BTreeMap<String, WordTerm>,
    sigma: Option<Alphabet>,
}

impl HasCursor for WordParser {
    fn cursor(&mut self) -> &mut Cursor {
        &mut self.c
    }
}

impl WordParser {
    fn sigma(&self) -> &Alphabet {
        self.sigma.as_ref().expect("alphabet read before terms")
    }

    fn checked(&mut self) -> Result<WordTerm, ParseError> {
        let at = self.c.pos();
        let t = self.term()?;
        match t.validate(self.sigma()) {
            Ok(_) => Ok(t),
            Err(e) => self.c.fail_at(at, "a well-formed term", e.to_string()),
        }
    }

    fn letter(&mut self) -> Result<char, ParseError> {
        let at = self.c.pos();
        let a = self.c.symbol()?;
        if !self.sigma().contains(a) {
            return self.c.fail_at(at, "a symbol of the alphabet", format!("'{a}'"));
        }
        Ok(a)
    }

    /// `('a' -> t, ...)` covering the alphabet exactly.
    fn branches(&mut self, at: (usize, usize)) -> Result<BTreeMap<char, WordTerm>, ParseError> {
        self.c.expect("(")?;
        let arms = list(self, ")", |p| {
            let a = p.letter()?;
            p.c.expect("->")?;
            Ok((a, p.term()?))
        })?;
        let n = arms.len();
        let map: BTreeMap<char, WordTerm> = arms.into_iter().collect();
        if map.len() != n || map.len() != self.sigma().len() {
            return self.c.fail_at(at, "one branch per symbol of the alphabet", format!("{n} branches"));
        }
        Ok(map)
    }

    fn term(&mut self) -> Result<WordTerm, ParseError> {
        let at = self.c.pos();
        let kw = match self.c.peek() {
            Tok::Ident(s) => s.clone(),
            _ => return self.atom(),
        };
        match kw.as_str() {
            "cons" | "rcons" => {
                self.c.bump();
                let a = self.letter()?;
                Ok(if kw == "cons" { WordTerm::Cons(a) } else { WordTerm::RandCons(a) })
            }
            "proj" => {
                self.c.bump();
                let (n, m) = (self.c.int()?, self.c.int()?);
                if n == 0 || m == 0 || m > n {
                    return self.c.fail_at(at, "`proj n m` with 1 ≤ m ≤ n", format!("proj {n} {m}"));
                }
                Ok(WordTerm::Proj(n as usize, m as usize))
            }
            "comp" => {
                self.c.bump();
                let f = self.atom()?;
                self.c.expect("(")?;
                let gs = list(self, ")", |p| p.term())?;
                Ok(WordTerm::comp(f, gs))
            }
            "case" | "rec" => {
                self.c.bump();
                let base = self.atom()?;
                let arms = self.branches(at)?;
                Ok(if kw == "case" {
                    WordTerm::Case(Box::new(base), arms)
                } else {
                    WordTerm::Rec(Box::new(base), arms)
                })
            }
            "simrec" => {
                self.c.bump();
                self.simrec(at)
            }
            "det" => {
                self.c.bump();
                let at = self.c.pos();
                let name = self.c.name()?;
                match builtin_word_det(&name) {
                    Some(f) => Ok(WordTerm::Det(f)),
                    None => self.c.fail_at(at, "a known deterministic function", format!("`{name}`")),
                }
            }
            _ => self.atom(),
        }
    }

    fn simrec(&mut self, at: (usize, usize)) -> Result<WordTerm, ParseError> {
        let index = self.c.int()? as usize;
        self.c.expect("[")?;
        let bases = list(self, "]", |p| p.term())?;
        self.c.expect("[")?;
        let steps = list(self, "]", |p| {
            p.c.expect("(")?;
            let j = p.c.int()? as usize;
            p.c.expect(",")?;
            let a = p.letter()?;
            p.c.expect(")")?;
            p.c.expect("->")?;
            Ok(((j, a), p.term()?))
        })?;
        let k = bases.len();
        if index == 0 || index > k {
            return self.c.fail_at(at, "a component index within the bases", format!("index {index} of {k}"));
        }
        let n = steps.len();
        let steps: BTreeMap<(usize, char), WordTerm> = steps.into_iter().collect();
        let sigma = self.sigma().clone();
        let covers = (1..=k).all(|j| sigma.symbols().iter().all(|a| steps.contains_key(&(j, *a))));
        if steps.len() != n || !covers || n != k * sigma.len() {
            return self.c.fail_at(at, "one step per component and symbol", format!("{n} steps"));
        }
        Ok(WordTerm::SimRec { index, bases, steps })
    }

    fn atom(&mut self) -> Result<WordTerm, ParseError> {
        let at = self.c.pos();
        match self.c.peek().clone() {
            Tok::Punct("(") => {
                self.c.bump();
                let t = self.term()?;
                self.c.expect(")")?;
                Ok(t)
            }
            Tok::Ident(s) if s == "eps" => {
                self.c.bump();
                Ok(WordTerm::Eps)
            }
            Tok::Ident(s) if KEYWORDS.contains(&s.as_str()) => {
                self.c.fail(&["an operand (parenthesize compound terms)"])
            }
            Tok::Ident(name) => match self.env.get(&name).cloned() {
                Some(t) => {
                    self.c.bump();
                    Ok(t)
                }
                None => self.c.fail_at(at, "a bound name", format!("unbound `{name}`")),
            },
            _ => self.c.fail(&["a term"]),
        }
    }
}
