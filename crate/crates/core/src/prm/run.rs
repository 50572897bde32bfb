use std::collections::HashSet;

use serde::Serialize;

use super::machine::{PrmConfig, PrmError, PrmSpec};
use crate::dist::{PseudoDistribution, Word};
use crate::num::Weight;
use crate::oracle::{enumerate, CoinStream, NeedBit, OracleError, Run};
use crate::WordDist;

/// Output distribution of the runs reaching the halting index within
/// `depth` steps, read from register `out`.
pub fn eval_prm<W: Weight>(
    spec: &PrmSpec,
    inputs: &[String],
    depth: usize,
    out: usize,
) -> Result<PseudoDistribution<Word, W>, PrmError> {
    if out >= spec.registers {
        return Err(PrmError::Register(out));
    }
    let mut frontier = vec![(spec.initial(inputs)?, W::one())];
    let mut dist = PseudoDistribution::empty();
    for level in 0..=depth {
        if frontier.is_empty() {
            break;
        }
        let mut next: Vec<(PrmConfig, W)> = Vec::new();
        for (c, w) in frontier {
            if spec.is_final(&c) {
                dist.add_mass(Word::new(c.regs[out].clone()), w);
            } else if level < depth {
                let [a, b] = spec.successors(&c)?;
                if a == b {
                    next.push((a, w));
                } else {
                    next.push((a, w.clone() * W::half()));
                    next.push((b, w * W::half()));
                }
            }
        }
        next.sort_by(|x, y| x.0.cmp(&y.0));
        frontier = Vec::with_capacity(next.len());
        for (c, w) in next {
            match frontier.last_mut() {
                Some((last, acc)) if *last == c => *acc = acc.clone() + w,
                _ => frontier.push((c, w)),
            }
        }
    }
    Ok(dist)
}

/// One run from `start`, reading a coin per step whatever the instruction.
pub fn run_prm(
    spec: &PrmSpec,
    start: &PrmConfig,
    out: usize,
    s: &mut CoinStream<'_>,
) -> Result<Result<Run<Word>, NeedBit>, PrmError> {
    let mut c = start.clone();
    loop {
        if spec.is_final(&c) {
            return Ok(Ok(Run::Value(Word::new(c.regs[out].clone()))));
        }
        let bit = match s.flip() {
            Ok(b) => b,
            Err(NeedBit) => return Ok(Err(NeedBit)),
        };
        let [a, b] = spec.successors(&c)?;
        c = if bit { b } else { a };
    }
}

/// Runs the program reading one coin per step, whatever the instruction.
pub fn oracle_prm(spec: &PrmSpec, inputs: &[String], depth: usize, out: usize) -> Result<WordDist, PrmError> {
    if out >= spec.registers {
        return Err(PrmError::Register(out));
    }
    let start = spec.initial(inputs)?;
    enumerate(depth, true, |s| run_prm(spec, &start, out, s).map_err(Fail::Machine)).map_err(|e| match e {
        Fail::Machine(m) => m,
        Fail::Oracle(o) => PrmError::Spec(o.to_string()),
    })
}

enum Fail {
    Machine(PrmError),
    Oracle(OracleError),
}

impl From<OracleError> for Fail {
    fn from(e: OracleError) -> Self {
        Fail::Oracle(e)
    }
}

/// Halting times of every run up to a depth.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepProfile {
    pub depth: usize,
    /// Longest run that halted within the depth.
    pub max_halting: Option<usize>,
    /// Every run halted within the depth.
    pub all_halt: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "steps", rename_all = "lowercase")]
pub enum StepBound {
    Halts(usize),
    /// Some run is still going after this many steps.
    Unbounded(usize),
}

/// Explores the reachable configurations level by level. Two runs in the
/// same configuration behave alike, so duplicates are merged.
pub fn step_profile(spec: &PrmSpec, inputs: &[String], depth: usize) -> Result<StepProfile, PrmError> {
    let mut frontier = HashSet::from([spec.initial(inputs)?]);
    let mut max_halting = None;
    for level in 0..=depth {
        let mut next = HashSet::new();
        for c in &frontier {
            if spec.is_final(c) {
                max_halting = Some(level);
            } else if level < depth {
                next.extend(spec.successors(c)?);
            }
        }
        if frontier.iter().all(|c| spec.is_final(c)) {
            return Ok(StepProfile {
                depth,
                max_halting,
                all_halt: true,
            });
        }
        frontier = next;
    }
    Ok(StepProfile {
        depth,
        max_halting,
        all_halt: false,
    })
}

/// The longest run, if every run halts within `depth` steps.
pub fn max_steps(spec: &PrmSpec, inputs: &[String], depth: usize) -> Result<StepBound, PrmError> {
    let p = step_profile(spec, inputs, depth)?;
    Ok(match (p.all_halt, p.max_halting) {
        (true, Some(n)) => StepBound::Halts(n),
        _ => StepBound::Unbounded(depth),
    })
}
