use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dist::Word;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PtmError {
    #[error("invalid machine: {0}")]
    Spec(String),
    #[error("machine json: {0}")]
    Json(String),
    #[error("configuration in final state {0} cannot step")]
    FinalConfiguration(String),
    #[error("input symbol {0:?} is not a non-blank tape symbol")]
    InputSymbol(char),
    #[error("node {0} lies beyond the explored depth {1}")]
    NodeNotExplored(String, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Move {
    L,
    R,
    S,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Transition {
    pub state: usize,
    pub write: char,
    pub head: Move,
}

/// A single-tape machine with two transition tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PtmSpec {
    pub alphabet: Vec<char>,
    pub blank: char,
    pub states: Vec<String>,
    pub initial: usize,
    pub finals: BTreeSet<usize>,
    /// `delta[b][(state, symbol)]`.
    pub delta: [BTreeMap<(usize, char), Transition>; 2],
}

/// `⟨left, head, right, state⟩` with far blanks stripped from both sides.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub left: String,
    pub head: char,
    pub right: String,
    pub state: usize,
}

impl Configuration {
    fn normalize(mut self, blank: char) -> Self {
        let l = self.left.trim_start_matches(blank).len();
        self.left.drain(..self.left.len() - l);
        let r = self.right.trim_end_matches(blank).len();
        self.right.truncate(r);
        self
    }

    /// The tape left of the head, which is what a halted machine outputs.
    pub fn output(&self) -> Word {
        Word::new(self.left.clone())
    }
}

#[derive(Serialize, Deserialize)]
struct MachineFile {
    alphabet: String,
    blank: char,
    states: Vec<String>,
    initial: String,
    #[serde(rename = "final")]
    finals: Vec<String>,
    delta0: BTreeMap<String, String>,
    delta1: BTreeMap<String, String>,
}

impl PtmSpec {
    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn state_name(&self, q: usize) -> &str {
        &self.states[q]
    }

    pub fn is_final(&self, q: usize) -> bool {
        self.finals.contains(&q)
    }

    /// Symbols an input word may use.
    pub fn input_symbols(&self) -> impl Iterator<Item = char> + '_ {
        self.alphabet.iter().copied().filter(move |&c| c != self.blank)
    }

    /// δ₀ and δ₁ must be defined on every non-final state and every symbol.
    pub fn validate(&self) -> Result<(), PtmError> {
        let bad = |m: String| Err(PtmError::Spec(m));
        if !self.alphabet.contains(&self.blank) {
            return bad(format!("blank {:?} is not in the alphabet", self.blank));
        }
        if self.initial >= self.states.len() {
            return bad("initial state out of range".into());
        }
        for (b, table) in self.delta.iter().enumerate() {
            for q in (0..self.states.len()).filter(|q| !self.is_final(*q)) {
                for &a in &self.alphabet {
                    match table.get(&(q, a)) {
                        None => return bad(format!("delta{b} undefined on ({},{a})", self.states[q])),
                        Some(t) if !self.alphabet.contains(&t.write) => {
                            return bad(format!("delta{b} writes {:?} outside the alphabet", t.write))
                        }
                        Some(_) => {}
                    }
                }
            }
            if let Some(((q, _), _)) = table.iter().find(|((q, _), _)| self.is_final(*q)) {
                return bad(format!("delta{b} has a transition out of final state {}", self.states[*q]));
            }
        }
        Ok(())
    }

    pub fn initial_config(&self, input: &Word) -> Result<Configuration, PtmError> {
        if let Some(c) = input.chars().find(|c| *c == self.blank || !self.alphabet.contains(c)) {
            return Err(PtmError::InputSymbol(c));
        }
        let mut cs = input.chars();
        let head = cs.next().unwrap_or(self.blank);
        Ok(Configuration {
            left: String::new(),
            head,
            right: cs.collect(),
            state: self.initial,
        }
        .normalize(self.blank))
    }

    pub fn step(&self, c: &Configuration, bit: bool) -> Result<Configuration, PtmError> {
        let t = self.delta[bit as usize]
            .get(&(c.state, c.head))
            .ok_or_else(|| PtmError::FinalConfiguration(self.states[c.state].clone()))?;
        let mut n = c.clone();
        n.state = t.state;
        n.head = t.write;
        match t.head {
            Move::S => {}
            Move::R => {
                n.left.push(n.head);
                let mut rest = n.right.chars();
                n.head = rest.next().unwrap_or(self.blank);
                n.right = rest.collect();
            }
            Move::L => {
                n.right.insert(0, n.head);
                n.head = n.left.pop().unwrap_or(self.blank);
            }
        }
        Ok(n.normalize(self.blank))
    }

    pub fn is_final_config(&self, c: &Configuration) -> bool {
        self.is_final(c.state)
    }

    pub fn show_config(&self, c: &Configuration) -> String {
        format!("⟨{}, {}, {}, {}⟩", c.left, c.head, c.right, self.states[c.state])
    }

    /// Reads the JSON machine format. Transition keys are `"state,symbol"`
    /// and values `"state,symbol,move"`. A key symbol `*` covers every symbol
    /// without its own entry; a written `*` keeps the symbol read.
    pub fn from_json(s: &str) -> Result<Self, PtmError> {
        let f: MachineFile = serde_json::from_str(s).map_err(|e| PtmError::Json(e.to_string()))?;
        let spec_err = |m: String| PtmError::Spec(m);
        let alphabet: Vec<char> = f.alphabet.chars().collect();
        let uniq: BTreeSet<char> = alphabet.iter().copied().collect();
        if uniq.len() != alphabet.len() || alphabet.contains(&'*') || alphabet.contains(&',') {
            return Err(spec_err("alphabet symbols must be distinct and not '*' or ','".into()));
        }
        let index = |n: &str| {
            f.states
                .iter()
                .position(|s| s == n)
                .ok_or_else(|| spec_err(format!("unknown state {n}")))
        };
        let initial = index(&f.initial)?;
        let finals = f.finals.iter().map(|n| index(n)).collect::<Result<_, _>>()?;
        let mut delta = [BTreeMap::new(), BTreeMap::new()];
        for (b, table) in [&f.delta0, &f.delta1].into_iter().enumerate() {
            let mut wild = Vec::new();
            for (k, v) in table {
                let (q, a) = k.split_once(',').ok_or_else(|| spec_err(format!("bad key {k:?}")))?;
                let q = index(q.trim())?;
                let a = single(a.trim()).ok_or_else(|| spec_err(format!("bad symbol in {k:?}")))?;
                let parts: Vec<&str> = v.split(',').map(str::trim).collect();
                let [p, w, m] = parts[..] else {
                    return Err(spec_err(format!("bad transition {v:?}")));
                };
                let w = single(w).ok_or_else(|| spec_err(format!("bad symbol in {v:?}")))?;
                let head = match m {
                    "L" => Move::L,
                    "R" => Move::R,
                    "S" => Move::S,
                    _ => return Err(spec_err(format!("bad move in {v:?}"))),
                };
                let tr = (index(p)?, w, head);
                if a == '*' {
                    wild.push((q, tr));
                } else {
                    delta[b].insert((q, a), resolve(tr, a));
                }
            }
            for (q, tr) in wild {
                for &a in &alphabet {
                    delta[b].entry((q, a)).or_insert_with(|| resolve(tr, a));
                }
            }
        }
        let spec = PtmSpec {
            alphabet,
            blank: f.blank,
            states: f.states,
            initial,
            finals,
            delta,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Writes every transition out explicitly.
    pub fn to_json(&self) -> String {
        let table = |b: usize| {
            self.delta[b]
                .iter()
                .map(|((q, a), t)| {
                    let m = match t.head {
                        Move::L => "L",
                        Move::R => "R",
                        Move::S => "S",
                    };
                    (format!("{},{a}", self.states[*q]), format!("{},{},{m}", self.states[t.state], t.write))
                })
                .collect()
        };
        let f = MachineFile {
            alphabet: self.alphabet.iter().collect(),
            blank: self.blank,
            states: self.states.clone(),
            initial: self.states[self.initial].clone(),
            finals: self.finals.iter().map(|q| self.states[*q].clone()).collect(),
            delta0: table(0),
            delta1: table(1),
        };
        serde_json::to_string_pretty(&f).expect("machine serializes")
    }
}

fn single(s: &str) -> Option<char> {
    let mut cs = s.chars();
    let c = cs.next()?;
    cs.next().is_none().then_some(c)
}

fn resolve((state, w, head): (usize, char, Move), read: char) -> Transition {
    Transition {
        state,
        write: if w == '*' { read } else { w },
        head,
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
