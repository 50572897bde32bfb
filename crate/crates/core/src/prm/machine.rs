use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PrmError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid program: {0}")]
    Spec(String),
    #[error("configuration at pc {0} is final")]
    FinalConfiguration(usize),
    #[error("{got} inputs for {registers} registers")]
    TooManyInputs { got: usize, registers: usize },
    #[error("input symbol {0:?} is outside the alphabet")]
    InputSymbol(char),
    #[error("register r{0} does not exist")]
    Register(usize),
}

/// Registers are 0-based; instruction indices are 1-based and `len + 1` is
/// the halting index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instr {
    /// `dst := src`.
    Eps { src: usize, dst: usize },
    /// `dst := a·src`.
    Cons { a: char, src: usize, dst: usize },
    /// `dst := w` when `src = a·w`.
    Pred { a: char, src: usize, dst: usize },
    /// On `src = a·w`: `src := w` and go to `targets[index of a]`; on ε fall
    /// through.
    Jump { src: usize, targets: Vec<usize> },
    /// Go to `target` or fall through, each with probability ½.
    JumpRand { target: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrmSpec {
    pub alphabet: Vec<char>,
    pub registers: usize,
    pub program: Vec<Instr>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrmConfig {
    pub regs: Vec<String>,
    /// 1-based.
    pub pc: usize,
}

impl PrmSpec {
    pub fn halt_index(&self) -> usize {
        self.program.len() + 1
    }

    pub fn is_final(&self, c: &PrmConfig) -> bool {
        c.pc == self.halt_index()
    }

    pub fn validate(&self) -> Result<(), PrmError> {
        let bad = |i: usize, m: String| Err(PrmError::Spec(format!("instruction {}: {m}", i + 1)));
        let halt = self.halt_index();
        for (i, ins) in self.program.iter().enumerate() {
            let (regs, targets, sym): (Vec<usize>, Vec<usize>, Option<char>) = match ins {
                Instr::Eps { src, dst } => (vec![*src, *dst], vec![], None),
                Instr::Cons { a, src, dst } | Instr::Pred { a, src, dst } => (vec![*src, *dst], vec![], Some(*a)),
                Instr::Jump { src, targets } => {
                    if targets.len() != self.alphabet.len() {
                        return bad(i, format!("jump needs {} targets", self.alphabet.len()));
                    }
                    (vec![*src], targets.clone(), None)
                }
                Instr::JumpRand { target } => (vec![], vec![*target], None),
            };
            if let Some(r) = regs.iter().find(|r| **r >= self.registers) {
                return bad(i, format!("register r{r} out of range"));
            }
            if let Some(t) = targets.iter().find(|t| **t == 0 || **t > halt) {
                return bad(i, format!("target {t} out of range 1..={halt}"));
            }
            if let Some(a) = sym.filter(|a| !self.alphabet.contains(a)) {
                return bad(i, format!("symbol {a:?} outside the alphabet"));
            }
        }
        Ok(())
    }

    /// Inputs fill the first registers; the rest start empty.
    pub fn initial(&self, inputs: &[String]) -> Result<PrmConfig, PrmError> {
        if inputs.len() > self.registers {
            return Err(PrmError::TooManyInputs {
                got: inputs.len(),
                registers: self.registers,
            });
        }
        if let Some(c) = inputs.iter().flat_map(|w| w.chars()).find(|c| !self.alphabet.contains(c)) {
            return Err(PrmError::InputSymbol(c));
        }
        let mut regs = inputs.to_vec();
        regs.resize(self.registers, String::new());
        Ok(PrmConfig { regs, pc: 1 })
    }

    /// The two successors of `c` under coin 0 and coin 1. They coincide
    /// except at `jrand`, where coin 0 jumps.
    pub fn successors(&self, c: &PrmConfig) -> Result<[PrmConfig; 2], PrmError> {
        let ins = self
            .program
            .get(c.pc.wrapping_sub(1))
            .ok_or(PrmError::FinalConfiguration(c.pc))?;
        let mut n = c.clone();
        n.pc += 1;
        match ins {
            Instr::Eps { src, dst } => n.regs[*dst] = c.regs[*src].clone(),
            Instr::Cons { a, src, dst } => {
                let mut w = String::with_capacity(c.regs[*src].len() + a.len_utf8());
                w.push(*a);
                w.push_str(&c.regs[*src]);
                n.regs[*dst] = w;
            }
            Instr::Pred { a, src, dst } => {
                let s = &c.regs[*src];
                n.regs[*dst] = s.strip_prefix(*a).unwrap_or(s).to_string();
            }
            Instr::Jump { src, targets } => {
                let s = &c.regs[*src];
                if let Some(a) = s.chars().next() {
                    let k = self.alphabet.iter().position(|b| *b == a).expect("register outside alphabet");
                    n.regs[*src] = s[a.len_utf8()..].to_string();
                    n.pc = targets[k];
                }
            }
            Instr::JumpRand { target } => {
                let mut j = n.clone();
                j.pc = *target;
                return Ok([j, n]);
            }
        }
        Ok([n.clone(), n])
    }

    /// One step as a distribution.
    pub fn step(&self, c: &PrmConfig) -> Result<crate::dist::PseudoDistribution<PrmConfig, crate::Prob>, PrmError> {
        let [a, b] = self.successors(c)?;
        let mut d = crate::dist::PseudoDistribution::empty();
        let h = <crate::Prob as crate::num::Weight>::half();
        d.add_mass(a, h.clone());
        d.add_mass(b, h);
        Ok(d)
    }

    /// Parses the line format: an `alphabet SYMBOLS` header, an optional
    /// `registers N` header, then one instruction per line. `#` starts a
    /// comment.
    pub fn parse(text: &str) -> Result<Self, PrmError> {
        let mut alphabet: Option<Vec<char>> = None;
        let mut registers: Option<usize> = None;
        let mut lines = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| PrmError::Parse { line: i + 1, msg };
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks[0] {
                "alphabet" if toks.len() == 2 => alphabet = Some(toks[1].chars().collect()),
                "registers" if toks.len() == 2 => {
                    registers = Some(toks[1].parse().map_err(|_| err(format!("bad count {:?}", toks[1])))?)
                }
                "alphabet" | "registers" => return Err(err(format!("expected one argument to {}", toks[0]))),
                _ => lines.push((i + 1, toks)),
            }
        }
        let alphabet = alphabet.ok_or(PrmError::Parse {
            line: 1,
            msg: "missing `alphabet` line".into(),
        })?;
        let mut program = Vec::new();
        for (line, toks) in lines {
            program.push(parse_instr(&toks).map_err(|msg| PrmError::Parse { line, msg })?);
        }
        let used = program.iter().flat_map(regs_of).max().map_or(0, |r| r + 1);
        let spec = PrmSpec {
            alphabet,
            registers: registers.unwrap_or(used).max(used),
            program,
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn regs_of(i: &Instr) -> Vec<usize> {
    match i {
        Instr::Eps { src, dst } | Instr::Cons { src, dst, .. } | Instr::Pred { src, dst, .. } => vec![*src, *dst],
        Instr::Jump { src, .. } => vec![*src],
        Instr::JumpRand { .. } => vec![],
    }
}

fn reg(t: &str) -> Result<usize, String> {
    t.strip_prefix('r')
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| format!("expected a register like r0, got {t:?}"))
}

fn sym(t: &str) -> Result<char, String> {
    let mut cs = t.chars();
    match (cs.next(), cs.next()) {
        (Some(c), None) => Ok(c),
        _ => Err(format!("expected one symbol, got {t:?}")),
    }
}

fn index(t: &str) -> Result<usize, String> {
    t.parse().map_err(|_| format!("expected an instruction index, got {t:?}"))
}

fn parse_instr(toks: &[&str]) -> Result<Instr, String> {
    Ok(match toks {
        ["eps", s, d] => Instr::Eps { src: reg(s)?, dst: reg(d)? },
        ["cons", a, s, d] => Instr::Cons {
            a: sym(a)?,
            src: reg(s)?,
            dst: reg(d)?,
        },
        ["pred", a, s, d] => Instr::Pred {
            a: sym(a)?,
            src: reg(s)?,
            dst: reg(d)?,
        },
        ["jump", s, "->", ts @ ..] => Instr::Jump {
            src: reg(s)?,
            targets: ts.iter().map(|t| index(t)).collect::<Result<_, _>>()?,
        },
        ["jrand", t] => Instr::JumpRand { target: index(t)? },
        _ => return Err(format!("unknown instruction {:?}", toks.join(" "))),
    })
}

impl fmt::Display for Instr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instr::Eps { src, dst } => write!(f, "eps r{src} r{dst}"),
            Instr::Cons { a, src, dst } => write!(f, "cons {a} r{src} r{dst}"),
            Instr::Pred { a, src, dst } => write!(f, "pred {a} r{src} r{dst}"),
            Instr::Jump { src, targets } => {
                write!(f, "jump r{src} ->")?;
                targets.iter().try_for_each(|t| write!(f, " {t}"))
            }
            Instr::JumpRand { target } => write!(f, "jrand {target}"),
        }
    }
}

impl fmt::Display for PrmSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "alphabet {}", self.alphabet.iter().collect::<String>())?;
        writeln!(f, "registers {}", self.registers)?;
        for (i, ins) in self.program.iter().enumerate() {
            writeln!(f, "{ins}  # {}", i + 1)?;
        }
        Ok(())
    }
}
