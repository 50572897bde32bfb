//! Probabilistic Turing machines: two transition tables, each applied with
//! probability ½ per step.

mod compile;
mod machine;
mod tree;

pub use compile::{code_word, compile_to_term, cf_term, mu_bound_for_depth, pt1_fn, sp_fn, word_code};
pub use machine::{Configuration, Move, PtmError, PtmSpec, Transition};
pub use tree::{eval_ptm, oracle_ptm, pt_prob, run_ptm, step_profile, ComputationTree, NodeId, TreeNode};
