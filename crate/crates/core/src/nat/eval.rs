use num_bigint::BigInt;
use thiserror::Error;

use super::pairing::unpair;
use super::term::{ArityError, NatTerm};
use crate::dist::PseudoDistribution;
use crate::num::Weight;

/// Limits for the computable approximation of a term's semantics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalBudget {
    /// Each `Mu` node enumerates candidates `0..mu_bound`; later candidates
    /// become deficit.
    pub mu_bound: u64,
    /// Largest recursion argument a `PrimRec` node will unfold.
    pub rec_unroll_cap: u64,
}

impl Default for EvalBudget {
    fn default() -> Self {
        EvalBudget {
            mu_bound: 32,
            rec_unroll_cap: 1 << 16,
        }
    }
}

impl EvalBudget {
    pub fn with_mu_bound(mu_bound: u64) -> Self {
        EvalBudget {
            mu_bound,
            ..Default::default()
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error(transparent)]
    Arity(#[from] ArityError),
    #[error("expected {expected} arguments, got {got}")]
    ArgCount { expected: usize, got: usize },
    #[error("primitive recursion on {got} exceeds the unroll cap {cap}")]
    RecursionCap { cap: u64, got: u64 },
}

/// Evaluates `t` on `args` under budget `b`.
///
/// The result is a lower approximation of the term's distribution, exact when
/// no `Mu` node is truncated. `Mu f` at `x` assigns `y < mu_bound` the mass
/// `f(x,y)(0) · Π_{z<y} Σ_{k>0} f(x,z)(k)`.
pub fn eval_nat<W: Weight>(
    t: &NatTerm,
    args: &[u64],
    b: &EvalBudget,
) -> Result<PseudoDistribution<u64, W>, EvalError> {
    let expected = t.arity()?;
    if expected != args.len() {
        return Err(EvalError::ArgCount {
            expected,
            got: args.len(),
        });
    }
    eval(t, args, b)
}

/// `1 − mass(eval_nat(t, args, b))`.
pub fn deficit_bound<W: Weight>(t: &NatTerm, args: &[u64], b: &EvalBudget) -> Result<W, EvalError> {
    Ok(eval_nat::<W>(t, args, b)?.deficit())
}

fn eval<W: Weight>(
    t: &NatTerm,
    x: &[u64],
    b: &EvalBudget,
) -> Result<PseudoDistribution<u64, W>, EvalError> {
    Ok(match t {
        NatTerm::Zero => PseudoDistribution::point(0),
        NatTerm::Succ => match x[0].checked_add(1) {
            Some(y) => PseudoDistribution::point(y),
            None => PseudoDistribution::empty(),
        },
        NatTerm::Proj(_, m) => PseudoDistribution::point(x[m - 1]),
        NatTerm::Coin => {
            let mut d = PseudoDistribution::empty();
            d.add_mass(x[0], W::half());
            if let Some(y) = x[0].checked_add(1) {
                d.add_mass(y, W::half());
            }
            d
        }
        NatTerm::Det(f) => match f.apply(x) {
            Some(y) => PseudoDistribution::point(y),
            None => PseudoDistribution::empty(),
        },
        NatTerm::I2p => {
            let (num, den) = unpair(x[0]);
            let mut d = PseudoDistribution::empty();
            if den != 0 && num <= den {
                let q = W::from_ratio(&BigInt::from(num), &BigInt::from(den));
                d.add_mass(0, W::one() - q.clone());
                d.add_mass(1, q);
            }
            d
        }
        NatTerm::Comp(f, gs) => {
            let inner = gs
                .iter()
                .map(|g| eval::<W>(g, x, b))
                .collect::<Result<Vec<_>, _>>()?;
            let mut out = PseudoDistribution::empty();
            let mut zs = Vec::with_capacity(inner.len());
            product(f, &inner, &mut zs, W::one(), b, &mut out)?;
            out
        }
        NatTerm::PrimRec(f, g) => {
            let (xs, y) = x.split_at(x.len() - 1);
            let y = y[0];
            if y > b.rec_unroll_cap {
                return Err(EvalError::RecursionCap {
                    cap: b.rec_unroll_cap,
                    got: y,
                });
            }
            let mut cur = eval::<W>(f, xs, b)?;
            let mut buf = xs.to_vec();
            buf.extend([0, 0]);
            let n = buf.len();
            for i in 0..y {
                buf[n - 2] = i;
                cur = cur.try_bind(|z| {
                    buf[n - 1] = *z;
                    eval::<W>(g, &buf, b)
                })?;
            }
            cur
        }
        NatTerm::Mu(body) => {
            let mut buf = x.to_vec();
            buf.push(0);
            let n = buf.len();
            let mut out = PseudoDistribution::empty();
            let mut survive = W::one();
            for y in 0..b.mu_bound {
                buf[n - 1] = y;
                let d = eval::<W>(body, &buf, b)?;
                let at_zero = d.get(&0);
                let positive = d.mass() - at_zero.clone();
                out.add_mass(y, survive.clone() * at_zero);
                survive = survive * positive;
                if survive.is_zero() {
                    break;
                }
            }
            out
        }
    })
}

/// Sums `w · Π Dᵢ(zᵢ) · f(z⃗)` over the product support of `inner`.
fn product<W: Weight>(
    f: &NatTerm,
    inner: &[PseudoDistribution<u64, W>],
    zs: &mut Vec<u64>,
    w: W,
    b: &EvalBudget,
    out: &mut PseudoDistribution<u64, W>,
) -> Result<(), EvalError> {
    if zs.len() == inner.len() {
        for (y, p) in eval::<W>(f, zs, b)?.iter() {
            out.add_mass(*y, w.clone() * p.clone());
        }
        return Ok(());
    }
    for (z, p) in inner[zs.len()].iter() {
        zs.push(*z);
        product(f, inner, zs, w.clone() * p.clone(), b, out)?;
        zs.pop();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::ratio;
    use crate::{NatDist, Prob};
    use num_traits::{One, Zero};

    fn ev(t: &NatTerm, args: &[u64], mu: u64) -> NatDist {
        eval_nat(t, args, &EvalBudget::with_mu_bound(mu)).unwrap()
    }

    fn dist(pairs: &[(u64, i64, i64)]) -> NatDist {
        NatDist::from_entries(pairs.iter().map(|&(k, n, d)| (k, ratio(n, d)))).unwrap()
    }

    fn literal_h() -> NatTerm {
        NatTerm::mu(NatTerm::comp(NatTerm::Coin, vec![NatTerm::proj(2, 1)]))
    }

    #[test]
    fn coin_and_rand() {
        assert_eq!(ev(&NatTerm::Coin, &[3], 1), dist(&[(3, 1, 2), (4, 1, 2)]));
        let rand = NatTerm::comp(NatTerm::Coin, vec![NatTerm::Zero]);
        assert_eq!(ev(&rand, &[9], 1), dist(&[(0, 1, 2), (1, 1, 2)]));
    }

    #[test]
    fn literal_h_at_zero() {
        let d = ev(&literal_h(), &[0], 4);
        assert_eq!(d, dist(&[(0, 1, 2), (1, 1, 4), (2, 1, 8), (3, 1, 16)]));
        assert_eq!(d.deficit(), ratio(1, 16));
        // Coin(x) never yields 0 for x > 0
        assert_eq!(ev(&literal_h(), &[3], 4), NatDist::empty());
    }

    #[test]
    fn deficit_bounds() {
        let b = EvalBudget::with_mu_bound(4);
        assert_eq!(deficit_bound::<Prob>(&NatTerm::Coin, &[0], &b).unwrap(), Prob::zero());
        assert_eq!(deficit_bound::<Prob>(&literal_h(), &[0], &b).unwrap(), ratio(1, 16));
        let always_one = NatTerm::mu(NatTerm::comp(NatTerm::Succ, vec![NatTerm::Zero.clone_arity(2)]));
        assert_eq!(deficit_bound::<Prob>(&always_one, &[0], &b).unwrap(), Prob::one());
    }

    #[test]
    fn arg_count_checked() {
        let r = eval_nat::<Prob>(&NatTerm::Coin, &[1, 2], &EvalBudget::default());
        assert_eq!(r, Err(EvalError::ArgCount { expected: 1, got: 2 }));
    }

    #[test]
    fn primrec_cap() {
        let add = NatTerm::primrec(
            NatTerm::proj(1, 1),
            NatTerm::comp(NatTerm::Succ, vec![NatTerm::proj(3, 3)]),
        );
        let b = EvalBudget {
            mu_bound: 1,
            rec_unroll_cap: 5,
        };
        assert_eq!(eval_nat::<Prob>(&add, &[1, 5], &b).unwrap(), NatDist::point(6));
        assert!(matches!(
            eval_nat::<Prob>(&add, &[1, 6], &b),
            Err(EvalError::RecursionCap { .. })
        ));
    }

    #[test]
    fn float_evaluation_agrees() {
        let d: PseudoDistribution<u64, f64> =
            eval_nat(&literal_h(), &[0], &EvalBudget::with_mu_bound(10)).unwrap();
        for y in 0..10u64 {
            assert!((d.get(&y) - 0.5f64.powi(y as i32 + 1)).abs() < 1e-15);
        }
    }

    impl NatTerm {
        /// `self ⊙ Πⁿ₁`: lifts a unary term to arity `n`.
        fn clone_arity(&self, n: usize) -> NatTerm {
            NatTerm::comp(self.clone(), vec![NatTerm::proj(n, 1)])
        }
    }
}
