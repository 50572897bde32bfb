//! Comparing an evaluator against an oracle: exact equality against
//! coin-path enumeration, or binomial bounds against seeded sampling.

use std::collections::BTreeMap;

use rand_chacha::ChaCha8Rng;
use rand_core::{Rng, SeedableRng};
use serde::Serialize;

use crate::dist::{Key, PseudoDistribution};
use crate::num::Weight;
use crate::oracle::{CoinStream, NeedBit, Run};
use crate::Prob;

/// Label used for the undefined outcome in witnesses.
pub const UNDEFINED: &str = "⊥";

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verdict {
    ExactMatch,
    /// Every outcome's frequency within `sigmas` binomial standard
    /// deviations; `epsilon` is the largest deviation seen.
    WithinTolerance { epsilon: f64, sigmas: f64 },
    Mismatch { witness: String, expected: String, got: String },
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        !matches!(self, Verdict::Mismatch { .. })
    }
}

/// Exact comparison; the witness is the first differing key in canonical
/// order, or the undefined outcome.
pub fn compare_exact<K: Key>(subject: &PseudoDistribution<K>, oracle: &PseudoDistribution<K>) -> Verdict {
    let keys: std::collections::BTreeSet<&K> = subject.keys().chain(oracle.keys()).collect();
    for k in keys {
        let (got, want) = (subject.get(k), oracle.get(k));
        if got != want {
            return Verdict::Mismatch {
                witness: k.encode(),
                expected: crate::num::format_ratio(&want),
                got: crate::num::format_ratio(&got),
            };
        }
    }
    if subject.deficit() != oracle.deficit() {
        return Verdict::Mismatch {
            witness: UNDEFINED.into(),
            expected: crate::num::format_ratio(&oracle.deficit()),
            got: crate::num::format_ratio(&subject.deficit()),
        };
    }
    Verdict::ExactMatch
}

/// Outcome counts of repeated runs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tally<K: Ord> {
    pub draws: u64,
    pub counts: BTreeMap<K, u64>,
    /// Runs that were undefined or wanted more than the bit budget.
    pub undefined: u64,
}

/// Runs `run` `draws` times, each on its own `max_bits` fair bits from
/// ChaCha8 seeded with `seed`.
pub fn monte_carlo<K: Ord, E>(
    draws: u64,
    seed: u64,
    max_bits: usize,
    mut run: impl FnMut(&mut CoinStream<'_>) -> Result<Result<Run<K>, NeedBit>, E>,
) -> Result<Tally<K>, E> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bits = vec![false; max_bits];
    let mut tally = Tally {
        draws,
        counts: BTreeMap::new(),
        undefined: 0,
    };
    for _ in 0..draws {
        for chunk in bits.chunks_mut(64) {
            let x = rng.next_u64();
            for (i, b) in chunk.iter_mut().enumerate() {
                *b = x >> i & 1 == 1;
            }
        }
        match run(&mut CoinStream::new(&bits))? {
            Ok(Run::Value(k)) => *tally.counts.entry(k).or_insert(0) += 1,
            Ok(Run::Undefined) | Err(NeedBit) => tally.undefined += 1,
        }
    }
    Ok(tally)
}

/// Checks every outcome, the undefined one included, against
/// `|freq − p| ≤ sigmas · √(p(1−p)/n)`. An outcome of mass 0 must never be
/// drawn.
pub fn compare_sampled<K: Key>(exact: &PseudoDistribution<K, Prob>, tally: &Tally<K>, sigmas: f64) -> Verdict {
    let n = tally.draws.max(1) as f64;
    let mut rows: Vec<(String, f64, u64)> = Vec::new();
    let keys: std::collections::BTreeSet<&K> = exact.keys().chain(tally.counts.keys()).collect();
    for k in keys {
        rows.push((k.encode(), exact.get(k).to_f64(), tally.counts.get(k).copied().unwrap_or(0)));
    }
    rows.push((UNDEFINED.into(), exact.deficit().to_f64(), tally.undefined));
    let mut epsilon: f64 = 0.0;
    for (key, p, count) in rows {
        let freq = count as f64 / n;
        let dev = (freq - p).abs();
        let bound = sigmas * (p * (1.0 - p) / n).sqrt();
        if dev > bound {
            return Verdict::Mismatch {
                witness: key,
                expected: format!("{p}"),
                got: format!("{freq}"),
            };
        }
        epsilon = epsilon.max(dev);
    }
    Verdict::WithinTolerance { epsilon, sigmas }
}
