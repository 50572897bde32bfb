//! Probabilistic recursion theory: exact pseudodistributions, probabilistic
//! function algebras over naturals and words, tier checking, probabilistic
//! Turing machines and probabilistic register machines.

pub mod check;
pub mod dist;
pub mod dsl;
pub mod fixtures;
pub mod nat;
pub mod num;
pub mod oracle;
pub mod prm;
pub mod ptm;
pub mod tiering;
pub mod word;

pub use dist::{AnyDist, DistError, Key, KeySpace, PseudoDistribution, Sample, Word};
pub use nat::{eval_nat, EvalBudget, NatTerm};
pub use num::Weight;
pub use word::{eval_word, Alphabet, WordTerm};

/// Exact probability.
pub type Prob = num_rational::BigRational;
/// Exact pseudodistribution over naturals.
pub type NatDist = PseudoDistribution<u64, Prob>;
/// Exact pseudodistribution over words.
pub type WordDist = PseudoDistribution<Word, Prob>;
/// Approximate pseudodistribution over naturals.
pub type NatDistF64 = PseudoDistribution<u64, f64>;
/// Approximate pseudodistribution over words.
pub type WordDistF64 = PseudoDistribution<Word, f64>;
