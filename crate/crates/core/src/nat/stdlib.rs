use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use super::pairing::{binary_digit, pair, unpair};
use super::term::{DetFn, NatTerm};
use crate::NatDist;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LibError {
    #[error("unknown name {0:?}")]
    UnknownName(String),
    #[error("{0} is not a probability")]
    OutOfRange(String),
}

/// Named terms and deterministic functions available to the DSL.
#[derive(Debug, Clone, Default)]
pub struct NatLib {
    terms: BTreeMap<String, NatTerm>,
    dets: BTreeMap<String, DetFn>,
}

impl NatLib {
    pub fn term(&self, name: &str) -> Result<NatTerm, LibError> {
        self.terms
            .get(name)
            .cloned()
            .ok_or_else(|| LibError::UnknownName(name.to_string()))
    }

    pub fn det(&self, name: &str) -> Result<DetFn, LibError> {
        self.dets
            .get(name)
            .cloned()
            .ok_or_else(|| LibError::UnknownName(name.to_string()))
    }

    pub fn insert_term(&mut self, name: impl Into<String>, t: NatTerm) {
        self.terms.insert(name.into(), t);
    }

    pub fn insert_det(&mut self, f: DetFn) {
        self.dets.insert(f.name().to_string(), f);
    }

    pub fn term_names(&self) -> impl Iterator<Item = &str> {
        self.terms.keys().map(String::as_str)
    }

    pub fn det_names(&self) -> impl Iterator<Item = &str> {
        self.dets.keys().map(String::as_str)
    }
}

pub fn id() -> NatTerm {
    NatTerm::proj(1, 1)
}

/// `rand = r ⊙ z`: a fair bit, independent of the input.
pub fn rand() -> NatTerm {
    NatTerm::comp(NatTerm::Coin, vec![NatTerm::Zero])
}

/// `add(x, 0) = x`, `add(x, y+1) = s(add(x, y))`.
pub fn add() -> NatTerm {
    NatTerm::primrec(id(), NatTerm::comp(NatTerm::Succ, vec![NatTerm::proj(3, 3)]))
}

/// `h = μ(rand ⊙ Π²₁)`, with `h(x)(y) = 1/2^{y+1}`.
pub fn h() -> NatTerm {
    NatTerm::mu(NatTerm::comp(rand(), vec![NatTerm::proj(2, 1)]))
}

/// `μ(r ⊙ Π²₁)`; agrees with [`h`] only at `x = 0`.
pub fn h_coin() -> NatTerm {
    NatTerm::mu(NatTerm::comp(NatTerm::Coin, vec![NatTerm::proj(2, 1)]))
}

/// `add ⊙ (h, id)`: `y ↦ 1/2^{y−x+1}` for `y ≥ x`.
pub fn f_shift() -> NatTerm {
    NatTerm::comp(add(), vec![h(), id()])
}

/// `add ⊙ (id, rand)`: `{x ↦ ½, x+1 ↦ ½}`.
pub fn f_rand() -> NatTerm {
    NatTerm::comp(add(), vec![id(), rand()])
}

pub fn pair_fn() -> DetFn {
    DetFn::new("pair", 2, |a| pair(a[0], a[1]))
}

pub fn unpair_left_fn() -> DetFn {
    DetFn::new("unpairLeft", 1, |a| Some(unpair(a[0]).0))
}

pub fn unpair_right_fn() -> DetFn {
    DetFn::new("unpairRight", 1, |a| Some(unpair(a[0]).1))
}

/// `b(q, i) = c^q_i` where `q` is the Cantor code of `(num, den)`.
pub fn binary_digit_fn() -> DetFn {
    DetFn::new("binaryDigit", 2, |a| {
        let (num, den) = unpair(a[0]);
        binary_digit(num, den, a[1])
    })
}

/// The constructed rational-to-coin term `b ⊙ (id, h)`.
pub fn i2p_term() -> NatTerm {
    NatTerm::comp(NatTerm::Det(binary_digit_fn()), vec![id(), h()])
}

/// Cantor code of a probability `q = num/den` in lowest terms.
pub fn encode_prob(q: &BigRational) -> Result<u64, LibError> {
    let bad = || LibError::OutOfRange(q.to_string());
    if q.is_negative() || *q > BigRational::one() {
        return Err(bad());
    }
    let num = q.numer().to_u64().ok_or_else(bad)?;
    let den = q.denom().to_u64().ok_or_else(bad)?;
    pair(num, den).ok_or_else(bad)
}

/// `{1 ↦ q, 0 ↦ 1 − q}`.
pub fn i2p(q: &BigRational) -> Result<NatDist, LibError> {
    if q.is_negative() || *q > BigRational::one() {
        return Err(LibError::OutOfRange(q.to_string()));
    }
    let mut d = NatDist::empty();
    d.add_mass(0, BigRational::one() - q);
    if !q.is_zero() {
        d.add_mass(1, q.clone());
    }
    Ok(d)
}

/// The standard library: `zero`, `succ`, `coin`, `id`, `rand`, `add`, `h`,
/// `h_coin`, `f_shift`, `f_rand`, `pair`, `unpairLeft`, `unpairRight`,
/// `binaryDigit`, `i2p`, `i2p_term`.
pub fn stdlib() -> NatLib {
    let mut lib = NatLib::default();
    for f in [pair_fn(), unpair_left_fn(), unpair_right_fn(), binary_digit_fn()] {
        lib.insert_term(f.name().to_string(), NatTerm::Det(f.clone()));
        lib.insert_det(f);
    }
    lib.insert_term("zero", NatTerm::Zero);
    lib.insert_term("succ", NatTerm::Succ);
    lib.insert_term("coin", NatTerm::Coin);
    lib.insert_term("id", id());
    lib.insert_term("rand", rand());
    lib.insert_term("add", add());
    lib.insert_term("h", h());
    lib.insert_term("h_coin", h_coin());
    lib.insert_term("f_shift", f_shift());
    lib.insert_term("f_rand", f_rand());
    lib.insert_term("i2p", NatTerm::I2p);
    lib.insert_term("i2p_term", i2p_term());
    lib
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nat::{eval_nat, EvalBudget};
    use crate::num::ratio;

    fn ev(t: &NatTerm, args: &[u64]) -> NatDist {
        eval_nat(t, args, &EvalBudget::with_mu_bound(12)).unwrap()
    }

    #[test]
    fn deterministic_entries() {
        let lib = stdlib();
        assert_eq!(ev(&lib.term("add").unwrap(), &[2, 3]), NatDist::point(5));
        assert_eq!(ev(&lib.term("pair").unwrap(), &[0, 0]), NatDist::point(0));
        assert_eq!(ev(&lib.term("id").unwrap(), &[7]), NatDist::point(7));
        assert_eq!(ev(&lib.term("unpairRight").unwrap(), &[pair(4, 9).unwrap()]), NatDist::point(9));
        assert!(matches!(lib.term("nope"), Err(LibError::UnknownName(_))));
    }

    #[test]
    fn f_rand_is_a_coin() {
        let d = ev(&f_rand(), &[4]);
        assert_eq!(d, NatDist::from_entries([(4, ratio(1, 2)), (5, ratio(1, 2))]).unwrap());
    }

    #[test]
    fn i2p_direct() {
        assert_eq!(
            i2p(&ratio(1, 2)).unwrap(),
            NatDist::from_entries([(0, ratio(1, 2)), (1, ratio(1, 2))]).unwrap()
        );
        assert_eq!(i2p(&ratio(0, 1)).unwrap(), NatDist::point(0));
        assert_eq!(i2p(&ratio(1, 1)).unwrap(), NatDist::point(1));
        assert!(i2p(&ratio(3, 2)).is_err());
        assert!(encode_prob(&ratio(-1, 2)).is_err());
    }

    #[test]
    fn primitive_i2p_matches_direct() {
        for (n, d) in [(0, 1), (1, 3), (2, 7), (1, 1)] {
            let q = ratio(n, d);
            assert_eq!(ev(&NatTerm::I2p, &[encode_prob(&q).unwrap()]), i2p(&q).unwrap());
        }
    }
}
