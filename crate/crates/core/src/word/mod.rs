//! Probabilistic functions over a word algebra.

mod couple;
mod eval;
pub mod library;
mod term;

pub use couple::{
    builtin_word_det, couple_encode, couple_first, couple_second, couple_term, decode_term, decode_tuple,
    encode_tuple, tupled_expand, tuple_fn, untuple_fn,
};
pub use eval::{eval_simrec, eval_simrec_joint, eval_word, oracle_word, run_word};
pub use term::{is_tag, tag, Alphabet, Arity, DetWordFn, WordError, WordTerm, TAG_COUNT};
