//! Computation trees and the probability functions defined on them.
//!
//! Nodes are addressed by binary strings: ε at the root, `b·0` and `b·1` for
//! the children of `b`. They are enumerated top-down and left to right,
//! which is the bijection `n ↔ binary(n+1)` with the leading 1 removed.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use super::machine::{Configuration, PtmError, PtmSpec};
use crate::dist::{PseudoDistribution, Word};
use crate::num::Weight;
use crate::oracle::{enumerate, CoinStream, NeedBit, OracleError, Run};
use crate::{NatDist, Prob, WordDist};

/// A node address: the last `depth` bits of `bits`, most significant first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId {
    depth: u32,
    bits: u64,
}

impl NodeId {
    pub const ROOT: NodeId = NodeId { depth: 0, bits: 0 };

    pub fn depth(&self) -> usize {
        self.depth as usize
    }

    pub fn child(&self, bit: bool) -> NodeId {
        assert!(self.depth < 63, "node too deep");
        NodeId {
            depth: self.depth + 1,
            bits: self.bits << 1 | bit as u64,
        }
    }

    pub fn parent(&self) -> Option<NodeId> {
        (self.depth > 0).then(|| NodeId {
            depth: self.depth - 1,
            bits: self.bits >> 1,
        })
    }

    /// Bits from the root down.
    pub fn path(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.depth).rev().map(move |i| self.bits >> i & 1 == 1)
    }

    /// Position in the enumeration order.
    pub fn index(&self) -> u64 {
        (1u64 << self.depth) - 1 + self.bits
    }

    pub fn from_index(n: u64) -> NodeId {
        let m = n + 1;
        let depth = 63 - m.leading_zeros();
        NodeId {
            depth,
            bits: m - (1 << depth),
        }
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.depth == 0 {
            return f.write_str("ε");
        }
        for b in self.path() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for NodeId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut id = NodeId::ROOT;
        if s == "ε" || s.is_empty() {
            return Ok(id);
        }
        for c in s.chars() {
            if id.depth >= 63 {
                return Err(format!("node id {s:?} is too long"));
            }
            id = match c {
                '0' => id.child(false),
                '1' => id.child(true),
                _ => return Err(format!("node id {s:?} is not a binary string")),
            };
        }
        Ok(id)
    }
}

/// `1/2^{|id|}`.
pub fn pt_prob(id: NodeId) -> Prob {
    Prob::dyadic(id.depth)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub id: NodeId,
    pub config: Configuration,
    pub leaf: bool,
}

/// The nodes of a computation tree down to a fixed depth, in enumeration
/// order, with the conditional halting probabilities of every node.
#[derive(Debug, Clone)]
pub struct ComputationTree {
    pub depth: usize,
    pub nodes: Vec<TreeNode>,
    pt0: Vec<Prob>,
    pt1: Vec<Prob>,
}

impl ComputationTree {
    pub fn build(spec: &PtmSpec, input: &Word, depth: usize) -> Result<Self, PtmError> {
        let root = spec.initial_config(input)?;
        let mut nodes = vec![TreeNode {
            id: NodeId::ROOT,
            leaf: spec.is_final_config(&root),
            config: root,
        }];
        let mut level = 0..1;
        for _ in 0..depth {
            let start = nodes.len();
            for i in level.clone() {
                if nodes[i].leaf {
                    continue;
                }
                for bit in [false, true] {
                    let config = spec.step(&nodes[i].config, bit)?;
                    nodes.push(TreeNode {
                        id: nodes[i].id.child(bit),
                        leaf: spec.is_final_config(&config),
                        config,
                    });
                }
            }
            level = start..nodes.len();
        }
        // PT¹(y) = 1 − PT⁰(y) at leaves, PT⁰(y) = PT(y) / Π_{k<y} PT¹(k).
        let mut before = Prob::one();
        let (mut pt0, mut pt1) = (Vec::with_capacity(nodes.len()), Vec::with_capacity(nodes.len()));
        for n in &nodes {
            if n.leaf {
                let p0 = pt_prob(n.id) / &before;
                let p1 = Prob::one() - &p0;
                before *= &p1;
                pt0.push(p0);
                pt1.push(p1);
            } else {
                pt0.push(Prob::zero());
                pt1.push(Prob::one());
            }
        }
        Ok(ComputationTree { depth, nodes, pt0, pt1 })
    }

    pub fn node(&self, id: NodeId) -> Option<&TreeNode> {
        self.position(id).map(|i| &self.nodes[i])
    }

    fn position(&self, id: NodeId) -> Option<usize> {
        self.nodes.binary_search_by_key(&id.index(), |n| n.id.index()).ok()
    }

    pub fn leaves(&self) -> impl Iterator<Item = &TreeNode> {
        self.nodes.iter().filter(|n| n.leaf)
    }

    fn explored(&self, id: NodeId) -> Result<Option<usize>, PtmError> {
        if id.depth() > self.depth {
            return Err(PtmError::NodeNotExplored(id.to_string(), self.depth));
        }
        Ok(self.position(id))
    }

    /// Probability of halting at `id`, given no earlier node halted. Nodes
    /// below a leaf are not in the tree and count as non-leaves.
    pub fn pt0(&self, id: NodeId) -> Result<Prob, PtmError> {
        Ok(self.explored(id)?.map_or_else(Prob::zero, |i| self.pt0[i].clone()))
    }

    pub fn pt1(&self, id: NodeId) -> Result<Prob, PtmError> {
        Ok(self.explored(id)?.map_or_else(Prob::one, |i| self.pt1[i].clone()))
    }

    /// `{0 ↦ PT⁰, 1 ↦ PT¹}`.
    pub fn ptc(&self, id: NodeId) -> Result<NatDist, PtmError> {
        let mut d = NatDist::empty();
        d.add_mass(0, self.pt0(id)?);
        d.add_mass(1, self.pt1(id)?);
        Ok(d)
    }

    /// Sum of `PT` over every node labelled `c`, leaf or not.
    pub fn config_prob(&self, c: &Configuration) -> Prob {
        sum_pt(self.nodes.iter().filter(|n| &n.config == c))
    }

    /// Sum of `PT` over the leaves labelled `c`.
    pub fn config_prob_leaves(&self, c: &Configuration) -> Prob {
        sum_pt(self.leaves().filter(|n| &n.config == c))
    }

    /// Mass `PT(id)` on the enumeration index of every leaf.
    pub fn cf(&self) -> NatDist {
        let mut d = NatDist::empty();
        for n in self.leaves() {
            d.add_mass(n.id.index(), pt_prob(n.id));
        }
        d
    }

    /// Output distribution of the leaves.
    pub fn outputs<W: Weight>(&self) -> PseudoDistribution<Word, W> {
        let mut d = PseudoDistribution::empty();
        for n in self.leaves() {
            d.add_mass(n.config.output(), W::dyadic(n.id.depth));
        }
        d
    }
}

fn sum_pt<'a>(ns: impl Iterator<Item = &'a TreeNode>) -> Prob {
    ns.fold(Prob::zero(), |acc, n| acc + pt_prob(n.id))
}

/// Output distribution of the machine's halting runs of at most `depth`
/// steps: the truncated fixpoint.
pub fn eval_ptm<W: Weight>(
    spec: &PtmSpec,
    input: &Word,
    depth: usize,
) -> Result<PseudoDistribution<Word, W>, PtmError> {
    let mut frontier = vec![(spec.initial_config(input)?, W::one())];
    let mut out = PseudoDistribution::empty();
    for level in 0..=depth {
        let mut next = Vec::new();
        for (c, w) in frontier {
            if spec.is_final_config(&c) {
                out.add_mass(c.output(), w);
            } else if level < depth {
                for bit in [false, true] {
                    next.push((spec.step(&c, bit)?, w.clone() * W::half()));
                }
            }
        }
        frontier = merge(next);
    }
    Ok(out)
}

fn merge<W: Weight>(mut v: Vec<(Configuration, W)>) -> Vec<(Configuration, W)> {
    v.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out: Vec<(Configuration, W)> = Vec::with_capacity(v.len());
    for (c, w) in v {
        match out.last_mut() {
            Some((last, acc)) if *last == c => *acc = acc.clone() + w,
            _ => out.push((c, w)),
        }
    }
    out
}

/// One run of the machine from `start`, reading a coin per step.
pub fn run_ptm(spec: &PtmSpec, start: &Configuration, s: &mut CoinStream<'_>) -> Result<Result<Run<Word>, NeedBit>, PtmError> {
    let mut c = start.clone();
    loop {
        if spec.is_final_config(&c) {
            return Ok(Ok(Run::Value(c.output())));
        }
        let bit = match s.flip() {
            Ok(b) => b,
            Err(NeedBit) => return Ok(Err(NeedBit)),
        };
        c = spec.step(&c, bit)?;
    }
}

/// Runs the machine as a deterministic program reading one coin per step;
/// paths still running after `depth` steps are undefined.
pub fn oracle_ptm(spec: &PtmSpec, input: &Word, depth: usize) -> Result<WordDist, PtmError> {
    let start = spec.initial_config(input)?;
    enumerate(depth, true, |s| run_ptm(spec, &start, s).map_err(PtmOracleError::Machine)).map_err(
        |e: PtmOracleError| match e {
            PtmOracleError::Machine(m) => m,
            PtmOracleError::Oracle(o) => PtmError::Spec(o.to_string()),
        },
    )
}

enum PtmOracleError {
    Machine(PtmError),
    Oracle(OracleError),
}

impl From<OracleError> for PtmOracleError {
    fn from(e: OracleError) -> Self {
        PtmOracleError::Oracle(e)
    }
}

/// Halting times of the machine's runs up to `depth` steps.
pub fn step_profile(spec: &PtmSpec, input: &Word, depth: usize) -> Result<crate::prm::StepProfile, PtmError> {
    let mut frontier = std::collections::BTreeSet::from([spec.initial_config(input)?]);
    let mut max_halting = None;
    for level in 0..=depth {
        let mut next = std::collections::BTreeSet::new();
        for c in &frontier {
            if spec.is_final_config(c) {
                max_halting = Some(level);
            } else if level < depth {
                next.insert(spec.step(c, false)?);
                next.insert(spec.step(c, true)?);
            }
        }
        if frontier.iter().all(|c| spec.is_final_config(c)) {
            return Ok(crate::prm::StepProfile {
                depth,
                max_halting,
                all_halt: true,
            });
        }
        frontier = next;
    }
    Ok(crate::prm::StepProfile {
        depth,
        max_halting,
        all_halt: false,
    })
}
