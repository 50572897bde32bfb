//! Compiling a machine into a probabilistic recursive term.
//!
//! The term is `SP ⊙ (id, μ(I2P ⊙ PT¹))`: the minimization walks node
//! indices and stops at node `y` with the conditional probability `PT⁰(y)`,
//! so node `y` is selected with probability `PT(y)` exactly when it is a
//! leaf. `SP` then reads the output off the selected leaf.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_traits::ToPrimitive;

use super::machine::PtmSpec;
use super::tree::{ComputationTree, NodeId};
use crate::dist::Word;
use crate::nat::pairing::pair;
use crate::nat::{DetFn, NatTerm};

/// Length-then-lexicographic code of `w` over `symbols` (bijective base
/// `|symbols|`), or `None` if `w` leaves the alphabet or the code overflows.
pub fn word_code(w: &Word, symbols: &[char]) -> Option<u64> {
    let b = symbols.len() as u64;
    w.chars().try_fold(0u64, |acc, c| {
        let d = symbols.iter().position(|s| *s == c)? as u64 + 1;
        acc.checked_mul(b)?.checked_add(d)
    })
}

/// Inverse of [`word_code`].
pub fn code_word(mut n: u64, symbols: &[char]) -> Word {
    let b = symbols.len() as u64;
    let mut out = Vec::new();
    while n > 0 {
        let d = (n - 1) % b;
        out.push(symbols[d as usize]);
        n = (n - 1) / b;
    }
    Word::new(out.into_iter().rev().collect::<String>())
}

impl PtmSpec {
    /// Inputs are coded over the non-blank symbols.
    pub fn input_code(&self, w: &Word) -> Option<u64> {
        word_code(w, &self.input_symbols().collect::<Vec<_>>())
    }

    pub fn input_word(&self, n: u64) -> Word {
        code_word(n, &self.input_symbols().collect::<Vec<_>>())
    }

    /// Outputs may contain blanks, so they are coded over the full alphabet.
    pub fn output_code(&self, w: &Word) -> Option<u64> {
        word_code(w, &self.alphabet)
    }

    pub fn output_word(&self, n: u64) -> Word {
        code_word(n, &self.alphabet)
    }
}

/// Trees per input, grown on demand and shared by the generated functions.
struct Trees {
    spec: PtmSpec,
    cache: Mutex<HashMap<u64, Arc<ComputationTree>>>,
}

impl Trees {
    fn get(&self, x: u64, depth: usize) -> Option<Arc<ComputationTree>> {
        let mut cache = self.cache.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(t) = cache.get(&x).filter(|t| t.depth >= depth) {
            return Some(t.clone());
        }
        let t = Arc::new(ComputationTree::build(&self.spec, &self.spec.input_word(x), depth).ok()?);
        cache.insert(x, t.clone());
        Some(t)
    }
}

fn node(y: u64) -> Option<NodeId> {
    (y < u64::MAX >> 1).then(|| NodeId::from_index(y))
}

/// `PT¹(x, y)` as the Cantor code of its numerator and denominator.
pub fn pt1_fn(name: &str, spec: &PtmSpec) -> DetFn {
    let trees = Arc::new(Trees {
        spec: spec.clone(),
        cache: Mutex::new(HashMap::new()),
    });
    DetFn::new(format!("PT1[{name}]"), 2, move |a| {
        let id = node(a[1])?;
        let q = trees.get(a[0], id.depth())?.pt1(id).ok()?;
        pair(q.numer().to_u64()?, q.denom().to_u64()?)
    })
}

/// `SP(x, y)`: the output code at leaf `y`, undefined elsewhere.
pub fn sp_fn(name: &str, spec: &PtmSpec) -> DetFn {
    let trees = Arc::new(Trees {
        spec: spec.clone(),
        cache: Mutex::new(HashMap::new()),
    });
    DetFn::new(format!("SP[{name}]"), 2, move |a| {
        let id = node(a[1])?;
        let t = trees.get(a[0], id.depth())?;
        let n = t.node(id).filter(|n| n.leaf)?;
        trees.spec.output_code(&n.config.output())
    })
}

/// `μ(I2P ⊙ PT¹)`: the node-selection distribution `CF`.
pub fn cf_term(name: &str, spec: &PtmSpec) -> NatTerm {
    NatTerm::mu(NatTerm::comp(
        NatTerm::I2p,
        vec![NatTerm::comp(
            NatTerm::Det(pt1_fn(name, spec)),
            vec![NatTerm::proj(2, 1), NatTerm::proj(2, 2)],
        )],
    ))
}

/// `SP ⊙ (id, CF)`. On input code `x` it yields output codes.
pub fn compile_to_term(name: &str, spec: &PtmSpec) -> NatTerm {
    NatTerm::comp(
        NatTerm::Det(sp_fn(name, spec)),
        vec![NatTerm::proj(1, 1), cf_term(name, spec)],
    )
}

/// Smallest μ bound that enumerates every node of depth at most `d`.
pub fn mu_bound_for_depth(d: usize) -> u64 {
    (1u64 << (d + 1)) - 1
}
