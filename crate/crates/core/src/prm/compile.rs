//! Compiling tiered word terms to register machines.
//!
//! Inputs sit in `r0..r(k-1)`. Every subterm writes its value into a
//! register of its own and never touches its arguments: composition
//! evaluates each argument into a fresh block, case analysis pops a copy of
//! the scrutinee, and recursion first reverses the recurrence argument so
//! the step functions run from the last symbol to the first.

use thiserror::Error;

use super::machine::{Instr, PrmError, PrmSpec};
use super::run::eval_prm;
use crate::dist::{PseudoDistribution, Word};
use crate::num::Weight;
use crate::tiering::{infer, TierOptions, TierVerdict};
use crate::word::{is_tag, tag, Alphabet, WordError, WordTerm, TAG_COUNT};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompileError {
    #[error("term is not tiered: {0}")]
    NotTiered(String),
    #[error("cannot compile {0}")]
    Unsupported(String),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// A compiled term: run on its arguments in the first `arity` registers
/// and read `output`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompiledTerm {
    pub program: PrmSpec,
    pub arity: usize,
    pub output: usize,
}

impl CompiledTerm {
    /// Output distribution of the runs halting within `depth` steps.
    pub fn eval<W: Weight>(&self, args: &[Word], depth: usize) -> Result<PseudoDistribution<Word, W>, PrmError> {
        if args.len() != self.arity {
            return Err(PrmError::Spec(format!("{} arguments for arity {}", args.len(), self.arity)));
        }
        let regs: Vec<String> = args.iter().map(|w| w.as_str().to_string()).collect();
        eval_prm(&self.program, &regs, depth, self.output)
    }
}

type Label = usize;

#[derive(Debug, Clone)]
enum Op {
    Eps(usize, usize),
    Cons(char, usize, usize),
    Jump(usize, Vec<Label>),
    JumpRand(Label),
}

struct Gen {
    /// The machine's alphabet: the term's plus any tuple tags.
    sigma: Vec<char>,
    /// Symbols the term's case and recursion branches cover.
    plain: Vec<char>,
    /// Shared endless loop for symbols no branch covers.
    stuck: Option<Label>,
    code: Vec<Op>,
    labels: Vec<Option<usize>>,
    registers: usize,
    /// Never written, so always ε.
    zero: usize,
    /// ε between uses; a symbol pushed and popped by `goto`.
    scratch: usize,
}

impl Gen {
    fn fresh(&mut self) -> usize {
        self.registers += 1;
        self.registers - 1
    }

    fn label(&mut self) -> Label {
        self.labels.push(None);
        self.labels.len() - 1
    }

    fn place(&mut self, l: Label) {
        self.labels[l] = Some(self.code.len() + 1);
    }

    fn goto(&mut self, l: Label) {
        let n = self.sigma.len();
        self.code.push(Op::Cons(self.sigma[0], self.scratch, self.scratch));
        self.code.push(Op::Jump(self.scratch, vec![l; n]));
    }

    fn copy(&mut self, src: usize, dst: usize) {
        self.code.push(Op::Eps(src, dst));
    }

    fn clear(&mut self, r: usize) {
        self.code.push(Op::Eps(self.zero, r));
    }

    fn stuck(&mut self) -> Label {
        match self.stuck {
            Some(l) => l,
            None => {
                let l = self.label();
                self.stuck = Some(l);
                l
            }
        }
    }

    /// One jump label per symbol: a fresh one for symbols in `syms`, the
    /// endless loop for the others.
    fn arms(&mut self, syms: &[char]) -> (Vec<Label>, Vec<(char, Label)>) {
        let mut fresh = Vec::new();
        let mut all = Vec::new();
        for c in self.sigma.clone() {
            if syms.contains(&c) {
                let l = self.label();
                fresh.push((c, l));
                all.push(l);
            } else {
                all.push(self.stuck());
            }
        }
        (all, fresh)
    }

    /// Loops over the symbols of `r` from the left, consuming it.
    fn each(
        &mut self,
        r: usize,
        syms: &[char],
        mut body: impl FnMut(&mut Self, char) -> Result<(), CompileError>,
    ) -> Result<(), CompileError> {
        let (top, end) = (self.label(), self.label());
        self.place(top);
        let (all, arms) = self.arms(syms);
        self.code.push(Op::Jump(r, all));
        self.goto(end);
        for (c, l) in arms {
            self.place(l);
            body(self, c)?;
            self.goto(top);
        }
        self.place(end);
        Ok(())
    }

    /// `dst := reverse(src)`, leaving `src` alone.
    fn reverse(&mut self, src: usize, dst: usize) -> Result<(), CompileError> {
        let t = self.fresh();
        self.copy(src, t);
        self.clear(dst);
        let sigma = self.sigma.clone();
        self.each(t, &sigma, |g, c| {
            g.code.push(Op::Cons(c, dst, dst));
            Ok(())
        })
    }

    /// An endless loop.
    fn diverge(&mut self) {
        let l = self.label();
        self.place(l);
        self.goto(l);
    }
}

impl Gen {
    fn term(&mut self, t: &WordTerm, ins: &[usize], dst: usize) -> Result<(), CompileError> {
        match t {
            WordTerm::Eps => self.clear(dst),
            WordTerm::Cons(a) => self.code.push(Op::Cons(*a, ins[0], dst)),
            WordTerm::RandCons(a) => {
                let end = self.label();
                self.copy(ins[0], dst);
                self.code.push(Op::JumpRand(end));
                self.code.push(Op::Cons(*a, dst, dst));
                self.place(end);
            }
            WordTerm::Proj(_, m) => self.copy(ins[m - 1], dst),
            WordTerm::Comp(f, gs) => {
                let mut args = Vec::with_capacity(gs.len());
                for g in gs {
                    let r = self.fresh();
                    self.term(g, ins, r)?;
                    args.push(r);
                }
                self.term(f, &args, dst)?;
            }
            WordTerm::Case(base, branches) => {
                let (t, end) = (self.fresh(), self.label());
                self.copy(ins[0], t);
                let plain = self.plain.clone();
                let (all, arms) = self.arms(&plain);
                self.code.push(Op::Jump(t, all));
                self.term(base, &ins[1..], dst)?;
                self.goto(end);
                let mut args = ins.to_vec();
                args[0] = t;
                for (c, l) in arms {
                    self.place(l);
                    self.term(&branches[&c], &args, dst)?;
                    self.goto(end);
                }
                self.place(end);
            }
            WordTerm::Rec(base, steps) => {
                self.recursion(&[base.as_ref()], |_, c| &steps[&c], 1, ins, dst)?;
            }
            WordTerm::SimRec { index, bases, steps } => {
                let bases: Vec<&WordTerm> = bases.iter().collect();
                self.recursion(&bases, |j, c| &steps[&(j, c)], *index, ins, dst)?;
            }
            WordTerm::Det(f) => self.det(f.name(), ins, dst)?,
        }
        Ok(())
    }

    /// Components start at their bases; each symbol of the recurrence
    /// argument, last first, updates all of them from the same tuple.
    fn recursion<'t>(
        &mut self,
        bases: &[&'t WordTerm],
        step: impl Fn(usize, char) -> &'t WordTerm,
        index: usize,
        ins: &[usize],
        dst: usize,
    ) -> Result<(), CompileError> {
        let k = bases.len();
        let (rev, suffix) = (self.fresh(), self.fresh());
        let acc: Vec<usize> = (0..k).map(|_| self.fresh()).collect();
        let next: Vec<usize> = (0..k).map(|_| self.fresh()).collect();
        self.reverse(ins[0], rev)?;
        for (b, r) in bases.iter().zip(&acc) {
            self.term(b, &ins[1..], *r)?;
        }
        self.clear(suffix);
        let mut args = acc.clone();
        args.push(suffix);
        args.extend_from_slice(&ins[1..]);
        let plain = self.plain.clone();
        self.each(rev, &plain, |g, c| {
            for (j, r) in next.iter().enumerate() {
                g.term(step(j + 1, c), &args, *r)?;
            }
            for (n, a) in next.iter().zip(&acc) {
                g.copy(*n, *a);
            }
            g.code.push(Op::Cons(c, suffix, suffix));
            Ok(())
        })?;
        self.copy(acc[index - 1], dst);
        Ok(())
    }
}

impl Gen {
    /// Native code for the tuple coding functions.
    fn det(&mut self, name: &str, ins: &[usize], dst: usize) -> Result<(), CompileError> {
        let unsupported = || CompileError::Unsupported(format!("deterministic function {name}"));
        if let Some(rest) = name.strip_prefix("untuple") {
            let (n, j) = rest.split_once('_').ok_or_else(unsupported)?;
            let n: usize = n.parse().map_err(|_| unsupported())?;
            let j: usize = j.parse().map_err(|_| unsupported())?;
            if !(1..=TAG_COUNT).contains(&n) || !(1..=n).contains(&j) {
                return Err(unsupported());
            }
            return self.untuple(n, j, ins[0], dst);
        }
        let n: usize = name.strip_prefix("tuple").and_then(|n| n.parse().ok()).ok_or_else(unsupported)?;
        if !(1..=TAG_COUNT).contains(&n) || !(1..=n).all(|j| self.sigma.contains(&tag(j))) {
            return Err(unsupported());
        }
        let (out, rev) = (self.fresh(), self.fresh());
        self.clear(out);
        for j in (1..=n).rev() {
            self.reverse(ins[j - 1], rev)?;
            let sigma = self.sigma.clone();
            self.each(rev, &sigma, |g, c| {
                g.code.push(Op::Cons(c, out, out));
                g.code.push(Op::Cons(tag(j), out, out));
                Ok(())
            })?;
        }
        self.code.push(Op::Cons(tag(1), out, out));
        self.code.push(Op::Cons(tag(1), out, out));
        self.copy(out, dst);
        Ok(())
    }

    /// Reads the header, then (tag, symbol) pairs with non-decreasing tags
    /// up to `n`, keeping the symbols tagged `j`. Malformed codes diverge.
    fn untuple(&mut self, n: usize, j: usize, src: usize, dst: usize) -> Result<(), CompileError> {
        let (t, kept) = (self.fresh(), self.fresh());
        let sigma = self.sigma.clone();
        let (fail, done) = (self.label(), self.label());
        // after the last tag read was l
        let after: Vec<Label> = (0..=n).map(|_| self.label()).collect();
        // a symbol tagged k comes next
        let symbol: Vec<Label> = (0..=n).map(|_| self.label()).collect();
        self.copy(src, t);
        self.clear(kept);
        for _ in 0..2 {
            let next = self.label();
            let ts = sigma.iter().map(|c| if *c == tag(1) { next } else { fail }).collect();
            self.code.push(Op::Jump(t, ts));
            self.goto(fail);
            self.place(next);
        }
        self.goto(after[1]);
        for l in 1..=n {
            self.place(after[l]);
            let ts = sigma
                .iter()
                .map(|c| match (1..=n).find(|k| tag(*k) == *c) {
                    Some(k) if k >= l => symbol[k],
                    _ => fail,
                })
                .collect();
            self.code.push(Op::Jump(t, ts));
            self.goto(done);
            self.place(symbol[l]);
            let keeps: Vec<(char, Label)> = sigma.iter().map(|c| (*c, self.label())).collect();
            let ts = keeps
                .iter()
                .map(|(c, k)| match (is_tag(*c), l == j) {
                    (true, _) => fail,
                    (false, true) => *k,
                    (false, false) => after[l],
                })
                .collect();
            self.code.push(Op::Jump(t, ts));
            self.goto(fail);
            if l == j {
                for (c, k) in keeps.into_iter().filter(|(c, _)| !is_tag(*c)) {
                    self.place(k);
                    self.code.push(Op::Cons(c, kept, kept));
                    self.goto(after[l]);
                }
            }
        }
        self.place(fail);
        self.diverge();
        self.place(done);
        self.reverse(kept, dst)
    }
}

/// Compiles `t` at its smallest arity after checking that it is tiered.
pub fn compile_word_term(t: &WordTerm, alphabet: &Alphabet, opts: TierOptions) -> Result<CompiledTerm, CompileError> {
    let arity = t.validate(alphabet)?.min();
    if let TierVerdict::Untypable { explanation, .. } = infer(t, alphabet, opts)? {
        return Err(CompileError::NotTiered(explanation));
    }
    let plain = alphabet.symbols().to_vec();
    if plain.is_empty() {
        return Err(CompileError::Unsupported("an empty alphabet".into()));
    }
    let mut sigma = plain.clone();
    for j in 1..=tuple_width(t) {
        if !sigma.contains(&tag(j)) {
            sigma.push(tag(j));
        }
    }
    let mut g = Gen {
        sigma,
        plain,
        stuck: None,
        code: Vec::new(),
        labels: Vec::new(),
        registers: arity + 3,
        zero: arity,
        scratch: arity + 1,
    };
    let output = arity + 2;
    let ins: Vec<usize> = (0..arity).collect();
    g.term(t, &ins, output)?;
    if let Some(l) = g.stuck {
        let end = g.label();
        g.goto(end);
        g.place(l);
        g.diverge();
        g.place(end);
    }
    let at = |l: &Label| g.labels[*l].expect("jump to a placed label");
    let program = g
        .code
        .iter()
        .map(|op| match op {
            Op::Eps(src, dst) => Instr::Eps { src: *src, dst: *dst },
            Op::Cons(a, src, dst) => Instr::Cons { a: *a, src: *src, dst: *dst },
            Op::Jump(src, ls) => Instr::Jump {
                src: *src,
                targets: ls.iter().map(at).collect(),
            },
            Op::JumpRand(l) => Instr::JumpRand { target: at(l) },
        })
        .collect();
    Ok(CompiledTerm {
        program: PrmSpec {
            alphabet: g.sigma.clone(),
            registers: g.registers,
            program,
        },
        arity,
        output,
    })
}

/// The widest tuple coded or decoded anywhere in `t`.
fn tuple_width(t: &WordTerm) -> usize {
    let width = |name: &str| -> usize {
        let n = name.strip_prefix("untuple").map(|r| r.split('_').next().unwrap_or("")).or(name.strip_prefix("tuple"));
        n.and_then(|n| n.parse().ok()).filter(|n| (1..=TAG_COUNT).contains(n)).unwrap_or(0)
    };
    match t {
        WordTerm::Det(f) => width(f.name()),
        WordTerm::Comp(f, gs) => gs.iter().map(tuple_width).fold(tuple_width(f), usize::max),
        WordTerm::Rec(b, s) | WordTerm::Case(b, s) => s.values().map(tuple_width).fold(tuple_width(b), usize::max),
        WordTerm::SimRec { bases, steps, .. } => bases.iter().chain(steps.values()).map(tuple_width).max().unwrap_or(0),
        _ => 0,
    }
}
