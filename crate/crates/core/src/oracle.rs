//! Coin-path enumeration: an evaluation strategy independent of the
//! distribution-valued interpreters, used to cross-check them.
//!
//! A subject is run as an ordinary deterministic program that pulls fair bits
//! from a [`CoinStream`]. [`enumerate`] explores every bit string the program
//! can consume, weighting each completed run by `2^{-bits consumed}`.

use thiserror::Error;

use crate::dist::PseudoDistribution;
use crate::num::Weight;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("a run needed more than {0} coin flips")]
    TooManyBits(usize),
    #[error("unsupported by the coin-stream oracle: {0}")]
    Unsupported(String),
    #[error("{0}")]
    Subject(String),
}

/// Signal that the current prefix is exhausted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NeedBit;

/// A finite prefix of fair coin flips.
#[derive(Debug)]
pub struct CoinStream<'a> {
    bits: &'a [bool],
    pos: usize,
}

impl<'a> CoinStream<'a> {
    pub fn new(bits: &'a [bool]) -> Self {
        CoinStream { bits, pos: 0 }
    }

    pub fn flip(&mut self) -> Result<bool, NeedBit> {
        let b = *self.bits.get(self.pos).ok_or(NeedBit)?;
        self.pos += 1;
        Ok(b)
    }

    pub fn consumed(&self) -> usize {
        self.pos
    }
}

/// Outcome of one run against a coin prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Run<K> {
    /// Returned a value.
    Value(K),
    /// Undefined on this path (divergent, truncated, or partial).
    Undefined,
}

/// Enumerates all coin prefixes the subject consumes, up to `max_bits`.
///
/// `run` must be deterministic in the bits it reads. Runs asking for more
/// than `max_bits` flips are an error unless `truncate` is set, in which case
/// they count as undefined.
pub fn enumerate<K, W, E>(
    max_bits: usize,
    truncate: bool,
    mut run: impl FnMut(&mut CoinStream<'_>) -> Result<Result<Run<K>, NeedBit>, E>,
) -> Result<PseudoDistribution<K, W>, E>
where
    K: Ord + Clone,
    W: Weight,
    E: From<OracleError>,
{
    let mut out = PseudoDistribution::empty();
    let mut stack: Vec<Vec<bool>> = vec![Vec::new()];
    while let Some(prefix) = stack.pop() {
        let mut s = CoinStream::new(&prefix);
        match run(&mut s)? {
            Ok(Run::Value(k)) => {
                debug_assert_eq!(s.consumed(), prefix.len());
                out.add_mass(k, W::dyadic(prefix.len() as u32));
            }
            Ok(Run::Undefined) => {}
            Err(NeedBit) => {
                if prefix.len() >= max_bits {
                    if truncate {
                        continue;
                    }
                    return Err(OracleError::TooManyBits(max_bits).into());
                }
                for b in [true, false] {
                    let mut p = prefix.clone();
                    p.push(b);
                    stack.push(p);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::ratio;
    use crate::NatDist;

    #[test]
    fn two_flips_sum() {
        let d: NatDist = enumerate(8, false, |s| {
            Ok::<_, OracleError>((|| {
                let a = s.flip()? as u64;
                let b = s.flip()? as u64;
                Ok(Run::Value(a + b))
            })())
        })
        .unwrap();
        assert_eq!(
            d,
            NatDist::from_entries([(0, ratio(1, 4)), (1, ratio(1, 2)), (2, ratio(1, 4))]).unwrap()
        );
    }

    #[test]
    fn geometric_truncation() {
        let geo = |s: &mut CoinStream<'_>| -> Result<Result<Run<u64>, NeedBit>, OracleError> {
            Ok((|| {
                let mut n = 0;
                while !s.flip()? {
                    n += 1;
                }
                Ok(Run::Value(n))
            })())
        };
        let d: NatDist = enumerate(3, true, geo).unwrap();
        assert_eq!(d.mass(), ratio(7, 8));
        assert_eq!(
            enumerate::<u64, crate::Prob, _>(3, false, geo),
            Err(OracleError::TooManyBits(3))
        );
    }
}
