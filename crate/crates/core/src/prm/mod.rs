//! Probabilistic register machines over words.

mod compile;
mod fit;
mod machine;
mod reduce;
mod run;

pub use compile::{compile_word_term, CompileError, CompiledTerm};
pub use fit::{fit_power, growth_report, size_inputs, GrowthReport, PowerFit};
pub use machine::{Instr, PrmConfig, PrmError, PrmSpec};
pub use reduce::{aligned_depth, decode_left, encode_input, ptm_to_prm};
pub use run::{eval_prm, max_steps, oracle_prm, run_prm, step_profile, StepBound, StepProfile};

#[cfg(test)]
mod tests;
