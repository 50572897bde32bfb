//! Probabilistic recursive functions over ℕ.

mod eval;
pub mod pairing;
pub mod stdlib;
mod stream;
mod term;

pub use eval::{deficit_bound, eval_nat, EvalBudget, EvalError};
pub use stdlib::{i2p, i2p_term, stdlib, LibError, NatLib};
pub use stream::{oracle_nat, run_nat};
pub use term::{ArityError, DetFn, NatTerm};
