//! Simulating a PTM on a three-register machine.
//!
//! A configuration `⟨w, a, v, q⟩` is held as `r0 = wʳ`, `r1 = a`, `r2 = v`
//! with the state in the program counter. The head symbol is either still
//! in `r1` ("full" blocks, which dispatch on it with a `jump`) or already
//! popped and known from the program counter ("known" blocks). A state
//! whose transitions do not depend on the head symbol runs directly in
//! full mode. Moving pops the new head off `r2` or `r0` straight into the
//! next known block, with the blank case placed as the fall-through, and
//! blocks that only forward control are skipped.

use std::collections::{BTreeMap, BTreeSet};

use super::machine::{Instr, PrmSpec};
use crate::dist::Word;
use crate::ptm::{Move, PtmSpec, Transition};

const LEFT: usize = 0;
const HEAD: usize = 1;
const RIGHT: usize = 2;

/// A transition with the parts that cannot affect the output dropped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Eff {
    /// Halt. A left move still pops the left tape.
    Final { left: bool, write: Option<char> },
    Go { write: char, head: Move, state: usize },
}

fn eff(spec: &PtmSpec, t: &Transition) -> Eff {
    if spec.is_final(t.state) {
        Eff::Final {
            left: t.head == Move::L,
            write: (t.head == Move::R).then_some(t.write),
        }
    } else {
        Eff::Go {
            write: t.write,
            head: t.head,
            state: t.state,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Uniform {
    Const(Eff),
    /// Stay, keep the symbol, go to a dispatching state.
    Keep(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Block {
    Full(usize),
    /// State, head symbol, and whether the right tape is known empty.
    Known(usize, char, bool),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Target {
    Halt,
    Next,
    Addr(usize),
    Block(Block),
}

#[derive(Debug, Clone)]
enum Ins {
    Cons(char, usize),
    Jump(usize, Vec<Target>),
    JumpRand(Target),
}

struct Reducer<'a> {
    spec: &'a PtmSpec,
    /// Per non-final state, its head-independent transitions if any.
    uniform: BTreeMap<usize, [Uniform; 2]>,
    code: Vec<Ins>,
    addr: BTreeMap<Block, usize>,
    wanted: BTreeSet<Block>,
    /// Blocks being emitted right now.
    open: Vec<Block>,
}

/// Past this many instructions, fall-throughs jump instead of inlining.
const INLINE_LIMIT: usize = 4096;

impl<'a> Reducer<'a> {
    fn new(spec: &'a PtmSpec) -> Self {
        let mut uniform = BTreeMap::new();
        let mut dispatching = BTreeSet::new();
        for q in (0..spec.states.len()).filter(|q| !spec.is_final(*q)) {
            let kinds = [0, 1].map(|b| uniform_kind(spec, q, b));
            let [Some(k0), Some(k1)] = kinds else {
                dispatching.insert(q);
                continue;
            };
            if dispatching.contains(&q) {
                continue;
            }
            let keeps: Vec<usize> = [k0, k1]
                .iter()
                .filter_map(|k| match k {
                    Uniform::Keep(p) => Some(*p),
                    Uniform::Const(_) => None,
                })
                .collect();
            // A kept symbol is dispatched on by the target state.
            if keeps.iter().any(|p| *p == q || uniform.contains_key(p)) {
                dispatching.insert(q);
            } else {
                dispatching.extend(keeps);
                uniform.insert(q, [k0, k1]);
            }
        }
        Reducer {
            spec,
            uniform,
            code: Vec::new(),
            addr: BTreeMap::new(),
            wanted: BTreeSet::new(),
            open: Vec::new(),
        }
    }

    fn here(&self) -> usize {
        self.code.len() + 1
    }

    fn known(&self, q: usize, a: char) -> [Eff; 2] {
        [0, 1].map(|b| eff(self.spec, &self.spec.delta[b][&(q, a)]))
    }

    /// Where control really ends up when entering `b` in known mode.
    fn resolve(&self, mut b: Block) -> Target {
        let mut seen = BTreeSet::new();
        while let Block::Known(q, a, e) = b {
            if self.spec.is_final(q) {
                return Target::Halt;
            }
            if !seen.insert(b) {
                break;
            }
            match self.known(q, a) {
                [x, y] if x != y => break,
                [Eff::Final { left: false, write: None }, _] => return Target::Halt,
                [Eff::Go { write, head: Move::S, state }, _] => b = Block::Known(state, write, e),
                _ => break,
            }
        }
        Target::Block(b)
    }

    fn target(&mut self, b: Block) -> Target {
        let t = self.resolve(b);
        if let Target::Block(k) = t {
            self.wanted.insert(k);
        }
        t
    }

    fn goto(&mut self, t: Target) {
        let n = self.spec.alphabet.len();
        self.code.push(Ins::Cons(self.spec.blank, HEAD));
        self.code.push(Ins::Jump(HEAD, vec![t; n]));
    }

    /// Emits a copy of `b` here, or a jump to it.
    fn fall_into(&mut self, b: Block) {
        let t = self.resolve(b);
        match t {
            Target::Block(k)
                if !self.open.contains(&k) && self.looping(k).is_none() && self.code.len() < INLINE_LIMIT =>
            {
                self.emit(k)
            }
            t => {
                if let Target::Block(k) = t {
                    self.wanted.insert(k);
                }
                self.goto(t)
            }
        }
    }

    /// A coin branch of `b` that returns to `b` through straight-line code,
    /// with that code and the other branch.
    fn looping(&self, b: Block) -> Option<(Vec<Ins>, Eff)> {
        let Block::Known(q, a, e) = b else { return None };
        let [k0, k1] = self.known(q, a);
        if k0 == k1 {
            return None;
        }
        let body = |k: Eff| match k {
            Eff::Go { write, head: Move::S, state } => Some((vec![], Block::Known(state, write, e))),
            Eff::Go { write, head: Move::R, state } if e => {
                Some((vec![Ins::Cons(write, LEFT)], Block::Known(state, self.spec.blank, true)))
            }
            _ => None,
        };
        [(k0, k1), (k1, k0)].into_iter().find_map(|(k, other)| {
            let (code, next) = body(k)?;
            (self.resolve(next) == Target::Block(b)).then_some((code, other))
        })
    }

    fn emit(&mut self, b: Block) {
        if let Some((body, other)) = self.looping(b) {
            // body; b: jrand body; other
            let start = self.here();
            self.code.extend(body);
            let here = self.here();
            self.addr.entry(b).or_insert(here);
            self.open.push(b);
            self.code.push(Ins::JumpRand(Target::Addr(start)));
            let Block::Known(_, _, e) = b else { unreachable!() };
            self.transition(Uniform::Const(other), Some(e));
            self.open.pop();
            return;
        }
        let here = self.here();
        self.addr.entry(b).or_insert(here);
        self.open.push(b);
        match b {
            Block::Full(q) if self.spec.is_final(q) => self.goto(Target::Halt),
            Block::Full(q) => match self.uniform.get(&q).copied() {
                Some(kinds) => self.branch(kinds, None),
                None => self.dispatch(q),
            },
            Block::Known(q, a, e) => {
                let effs = self.known(q, a).map(Uniform::Const);
                self.branch(effs, Some(e))
            }
        }
        self.open.pop();
    }

    fn dispatch(&mut self, q: usize) {
        let ts = self
            .spec
            .alphabet
            .clone()
            .into_iter()
            .map(|a| self.target(Block::Known(q, a, false)))
            .collect();
        self.code.push(Ins::Jump(HEAD, ts));
    }

    /// `head` is `None` in full mode, else whether the right tape is empty.
    fn branch(&mut self, [k0, k1]: [Uniform; 2], head: Option<bool>) {
        if k0 == k1 {
            return self.transition(k0, head);
        }
        // A branch that only forwards control is reached by the coin jump itself.
        let direct = |k: Uniform, me: &Self| match (k, head) {
            (Uniform::Const(Eff::Final { left: false, write: None }), _) => Some(Target::Halt),
            (Uniform::Const(Eff::Go { write, head: Move::S, state }), Some(e)) => {
                Some(me.resolve(Block::Known(state, write, e)))
            }
            _ => None,
        };
        let (jumped, rest) = match (direct(k0, self), direct(k1, self)) {
            (Some(t), _) => (t, k1),
            (None, Some(t)) => (t, k0),
            (None, None) => {
                let at = self.code.len();
                self.code.push(Ins::JumpRand(Target::Next));
                self.transition(k1, head);
                let l = self.here();
                self.code[at] = Ins::JumpRand(Target::Addr(l));
                self.transition(k0, head);
                return;
            }
        };
        if let Target::Block(k) = jumped {
            self.wanted.insert(k);
        }
        self.code.push(Ins::JumpRand(jumped));
        self.transition(rest, head);
    }

    fn transition(&mut self, k: Uniform, head: Option<bool>) {
        let n = self.spec.alphabet.len();
        let full = head.is_none();
        match k {
            Uniform::Keep(q) => self.dispatch(q),
            Uniform::Const(Eff::Final { left, write }) => {
                if let Some(w) = write {
                    self.code.push(Ins::Cons(w, LEFT));
                }
                if left {
                    self.code.push(Ins::Jump(LEFT, vec![Target::Halt; n]));
                }
                if full {
                    self.code.push(Ins::Jump(HEAD, vec![Target::Halt; n]));
                } else {
                    self.goto(Target::Halt);
                }
            }
            Uniform::Const(Eff::Go { write, head: Move::S, state }) => match head {
                None => {
                    let t = self.target(Block::Known(state, write, false));
                    self.code.push(Ins::Jump(HEAD, vec![t; n]));
                }
                Some(e) => self.fall_into(Block::Known(state, write, e)),
            },
            Uniform::Const(Eff::Go { write, head: Move::R, state }) if head == Some(true) => {
                self.code.push(Ins::Cons(write, LEFT));
                self.fall_into(Block::Known(state, self.spec.blank, true));
            }
            Uniform::Const(Eff::Go { write, head: m, state }) => {
                let (push, pop) = if m == Move::R { (LEFT, RIGHT) } else { (RIGHT, LEFT) };
                self.code.push(Ins::Cons(write, push));
                if full {
                    self.code.push(Ins::Jump(HEAD, vec![Target::Next; n]));
                }
                let ts = self
                    .spec
                    .alphabet
                    .clone()
                    .into_iter()
                    .map(|c| self.target(Block::Known(state, c, false)))
                    .collect();
                self.code.push(Ins::Jump(pop, ts));
                // Falling through means the popped side was empty.
                self.fall_into(Block::Known(state, self.spec.blank, m == Move::R));
            }
        }
    }
}

fn uniform_kind(spec: &PtmSpec, q: usize, b: usize) -> Option<Uniform> {
    let ts: Vec<(char, Eff)> = spec.alphabet.iter().map(|a| (*a, eff(spec, &spec.delta[b][&(q, *a)]))).collect();
    if ts.iter().all(|(_, e)| *e == ts[0].1) {
        return Some(Uniform::Const(ts[0].1));
    }
    match ts[0].1 {
        Eff::Go { head: Move::S, state, .. }
            if ts.iter().all(|(a, e)| *e == Eff::Go { write: *a, head: Move::S, state }) =>
        {
            Some(Uniform::Keep(state))
        }
        _ => None,
    }
}

/// Three-register machine computing the same output distribution as
/// `spec`, read from register 0 through [`decode_left`].
pub fn ptm_to_prm(spec: &PtmSpec) -> PrmSpec {
    let mut r = Reducer::new(spec);
    if !spec.is_final(spec.initial) {
        r.emit(Block::Full(spec.initial));
        while let Some(b) = r.wanted.iter().copied().find(|b| !r.addr.contains_key(b)) {
            r.emit(b);
        }
    }
    let halt = r.code.len() + 1;
    let resolve = |i: usize, t: &Target| match t {
        Target::Halt => halt,
        Target::Next => i + 2,
        Target::Addr(a) => *a,
        Target::Block(b) => r.addr[b],
    };
    let program = r
        .code
        .iter()
        .enumerate()
        .map(|(i, ins)| match ins {
            Ins::Cons(a, reg) => Instr::Cons {
                a: *a,
                src: *reg,
                dst: *reg,
            },
            Ins::Jump(src, ts) => Instr::Jump {
                src: *src,
                targets: ts.iter().map(|t| resolve(i, t)).collect(),
            },
            Ins::JumpRand(t) => Instr::JumpRand { target: resolve(i, t) },
        })
        .collect();
    PrmSpec {
        alphabet: spec.alphabet.clone(),
        registers: 3,
        program,
    }
}

/// Registers `[ε, a, v]` for the input `a·v`.
pub fn encode_input(spec: &PtmSpec, input: &Word) -> Vec<String> {
    let mut cs = input.chars();
    let head = cs.next().unwrap_or(spec.blank);
    vec![String::new(), head.to_string(), cs.collect()]
}

/// The left tape held reversed in register 0, far blanks stripped.
pub fn decode_left(spec: &PtmSpec, r0: &Word) -> Word {
    let s: String = r0.chars().rev().collect();
    Word::new(s.trim_start_matches(spec.blank).to_string())
}

/// The fewest PRM steps whose truncated output, decoded, equals the PTM's
/// output at `ptm_depth`. That is the longest simulated halting run, and
/// `None` means no PRM depth up to `max_depth` matches exactly.
pub fn aligned_depth(
    ptm: &PtmSpec,
    prm: &PrmSpec,
    input: &Word,
    ptm_depth: usize,
    max_depth: usize,
) -> Result<Option<usize>, crate::ptm::PtmError> {
    let want: crate::WordDist = crate::ptm::eval_ptm(ptm, input, ptm_depth)?;
    let regs = encode_input(ptm, input);
    for d in 0..=max_depth {
        let got: crate::WordDist = super::eval_prm(prm, &regs, d, 0)
            .map_err(|e| crate::ptm::PtmError::Spec(e.to_string()))?;
        let got = got.map_keys(|w| decode_left(ptm, w));
        if got == want {
            return Ok(Some(d));
        }
        if !got.leq(&want) {
            return Ok(None);
        }
    }
    Ok(None)
}
