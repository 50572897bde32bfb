//! Coin-stream semantics for [`NatTerm`]: every `Coin` node reads one bit,
//! subterms are run left to right on the same stream.

use super::term::NatTerm;
use crate::oracle::{enumerate, CoinStream, NeedBit, OracleError, Run};
use crate::NatDist;

type Step = Result<Result<Run<u64>, NeedBit>, OracleError>;

/// Runs `t` on `x` against one coin prefix. `Mu` tries candidates
/// `0..mu_bound` in order; reaching the bound is undefined.
pub fn run_nat(t: &NatTerm, x: &[u64], mu_bound: u64, s: &mut CoinStream<'_>) -> Step {
    Ok(Ok(match t {
        NatTerm::Zero => Run::Value(0),
        NatTerm::Succ => match x[0].checked_add(1) {
            Some(y) => Run::Value(y),
            None => Run::Undefined,
        },
        NatTerm::Proj(_, m) => Run::Value(x[m - 1]),
        NatTerm::Coin => match s.flip() {
            Err(e) => return Ok(Err(e)),
            Ok(false) => Run::Value(x[0]),
            Ok(true) => match x[0].checked_add(1) {
                Some(y) => Run::Value(y),
                None => Run::Undefined,
            },
        },
        NatTerm::Det(f) => match f.apply(x) {
            Some(y) => Run::Value(y),
            None => Run::Undefined,
        },
        NatTerm::I2p => return Err(OracleError::Unsupported("i2p".into())),
        NatTerm::Comp(f, gs) => {
            let mut zs = Vec::with_capacity(gs.len());
            for g in gs {
                match run_nat(g, x, mu_bound, s)? {
                    Ok(Run::Value(z)) => zs.push(z),
                    other => return Ok(other),
                }
            }
            return run_nat(f, &zs, mu_bound, s);
        }
        NatTerm::PrimRec(f, g) => {
            let (xs, y) = x.split_at(x.len() - 1);
            let mut cur = match run_nat(f, xs, mu_bound, s)? {
                Ok(Run::Value(v)) => v,
                other => return Ok(other),
            };
            let mut buf = xs.to_vec();
            buf.extend([0, 0]);
            let n = buf.len();
            for i in 0..y[0] {
                buf[n - 2] = i;
                buf[n - 1] = cur;
                cur = match run_nat(g, &buf, mu_bound, s)? {
                    Ok(Run::Value(v)) => v,
                    other => return Ok(other),
                };
            }
            Run::Value(cur)
        }
        NatTerm::Mu(body) => {
            let mut buf = x.to_vec();
            buf.push(0);
            let n = buf.len();
            for y in 0..mu_bound {
                buf[n - 1] = y;
                match run_nat(body, &buf, mu_bound, s)? {
                    Ok(Run::Value(0)) => return Ok(Ok(Run::Value(y))),
                    Ok(Run::Value(_)) => {}
                    other => return Ok(other),
                }
            }
            Run::Undefined
        }
    }))
}

/// Exhaustive coin-stream distribution of `t` on `x`.
pub fn oracle_nat(t: &NatTerm, x: &[u64], mu_bound: u64, max_bits: usize) -> Result<NatDist, OracleError> {
    enumerate(max_bits, false, |s| run_nat(t, x, mu_bound, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nat::{eval_nat, stdlib, EvalBudget};

    #[test]
    fn agrees_on_worked_examples() {
        for (t, args) in [
            (stdlib::h(), vec![3]),
            (stdlib::f_shift(), vec![2]),
            (stdlib::f_rand(), vec![5]),
            (stdlib::h_coin(), vec![0]),
            (NatTerm::Coin, vec![1]),
        ] {
            let exact: NatDist = eval_nat(&t, &args, &EvalBudget::with_mu_bound(6)).unwrap();
            assert_eq!(oracle_nat(&t, &args, 6, 20).unwrap(), exact, "{t:?}");
        }
    }

    #[test]
    fn i2p_is_rejected() {
        assert!(matches!(
            oracle_nat(&NatTerm::I2p, &[1], 4, 4),
            Err(OracleError::Unsupported(_))
        ));
    }
}
