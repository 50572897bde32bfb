//! Pseudodistributions over a countable key space.
//!
//! A [`PseudoDistribution`] is a finite map from keys to strictly positive
//! masses summing to at most one. The missing mass (the *deficit*) stands for
//! divergence; there is no explicit bottom key.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand_core::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::num::{format_ratio, parse_ratio, Weight};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DistError {
    #[error("total mass would exceed 1 ({0})")]
    MassOverflow(String),
    #[error("key spaces differ: {0} vs {1}")]
    KeySpaceMismatch(KeySpace, KeySpace),
    #[error("negative mass {0}")]
    NegativeMass(String),
    #[error("malformed distribution json: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KeySpace {
    Nat,
    Word,
}

impl fmt::Display for KeySpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KeySpace::Nat => "nat",
            KeySpace::Word => "word",
        })
    }
}

/// Keys that can appear in a serialized distribution. The `Ord` instance is
/// the canonical key order used for iteration, sampling and JSON output.
pub trait Key: Ord + Clone + fmt::Debug + Send + Sync + 'static {
    const SPACE: KeySpace;
    fn encode(&self) -> String;
    fn decode(s: &str) -> Option<Self>;
}

impl Key for u64 {
    const SPACE: KeySpace = KeySpace::Nat;

    fn encode(&self) -> String {
        self.to_string()
    }

    fn decode(s: &str) -> Option<Self> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        s.parse().ok()
    }
}

/// A word over some alphabet. Ordered by length first, then
/// lexicographically by code point.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(String);

impl Word {
    pub fn new(s: impl Into<String>) -> Self {
        Word(s.into())
    }

    pub fn empty() -> Self {
        Word(String::new())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.chars().count()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<char> {
        self.0.chars().next()
    }

    /// Splits `a·w` into `(a, w)`.
    pub fn split_first(&self) -> Option<(char, Word)> {
        let mut it = self.0.chars();
        let a = it.next()?;
        Some((a, Word(it.as_str().to_string())))
    }

    /// `a·self`.
    pub fn cons(&self, a: char) -> Word {
        let mut s = String::with_capacity(self.0.len() + a.len_utf8());
        s.push(a);
        s.push_str(&self.0);
        Word(s)
    }

    pub fn chars(&self) -> std::str::Chars<'_> {
        self.0.chars()
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl From<&str> for Word {
    fn from(s: &str) -> Self {
        Word(s.to_string())
    }
}

impl From<String> for Word {
    fn from(s: String) -> Self {
        Word(s)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.chars().cmp(other.0.chars()))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Key for Word {
    const SPACE: KeySpace = KeySpace::Word;

    fn encode(&self) -> String {
        self.0.clone()
    }

    fn decode(s: &str) -> Option<Self> {
        Some(Word(s.to_string()))
    }
}

/// Outcome of drawing from a pseudodistribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sample<K> {
    Value(K),
    Diverged,
}

/// Finite-support pseudodistribution. Zero masses are never stored, so two
/// distributions are equal exactly when their maps are equal.
#[derive(Clone, PartialEq)]
pub struct PseudoDistribution<K: Ord, W = BigRational> {
    entries: BTreeMap<K, W>,
}

impl<K: Ord + fmt::Debug, W: fmt::Display> fmt::Debug for PseudoDistribution<K, W> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, w)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k:?}↦{w}")?;
        }
        f.write_str("}")
    }
}

impl<K: Ord + Clone, W: Weight> Default for PseudoDistribution<K, W> {
    fn default() -> Self {
        Self::empty()
    }
}

impl<K: Ord + Clone, W: Weight> PseudoDistribution<K, W> {
    pub fn empty() -> Self {
        PseudoDistribution {
            entries: BTreeMap::new(),
        }
    }

    /// Dirac mass on `k`.
    pub fn point(k: K) -> Self {
        let mut entries = BTreeMap::new();
        entries.insert(k, W::one());
        PseudoDistribution { entries }
    }

    /// Builds from `(key, mass)` pairs, summing duplicates and dropping zeros.
    pub fn from_entries(pairs: impl IntoIterator<Item = (K, W)>) -> Result<Self, DistError> {
        let mut d = Self::empty();
        for (k, w) in pairs {
            if w.is_negative() {
                return Err(DistError::NegativeMass(w.to_string()));
            }
            d.add_mass(k, w);
        }
        d.check_mass()?;
        Ok(d)
    }

    fn check_mass(&self) -> Result<(), DistError> {
        let m = self.mass();
        if m.exceeds_one() {
            Err(DistError::MassOverflow(m.to_string()))
        } else {
            Ok(())
        }
    }

    /// Adds `w` to the mass at `k`. Callers are responsible for the total.
    pub(crate) fn add_mass(&mut self, k: K, w: W) {
        if w.is_zero() {
            return;
        }
        match self.entries.get_mut(&k) {
            Some(cur) => {
                let next = cur.clone() + w;
                if next.is_zero() {
                    self.entries.remove(&k);
                } else {
                    *cur = next;
                }
            }
            None => {
                self.entries.insert(k, w);
            }
        }
    }

    pub fn get(&self, k: &K) -> W {
        self.entries.get(k).cloned().unwrap_or_else(W::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &W)> {
        self.entries.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.entries.keys()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn mass(&self) -> W {
        self.entries.values().fold(W::zero(), |acc, w| acc + w.clone())
    }

    /// `1 - mass`: the probability of divergence.
    pub fn deficit(&self) -> W {
        W::one() - self.mass()
    }

    /// Pointwise weighted sum `Σ wᵢ·Dᵢ`.
    pub fn scale_add<'a>(
        pairs: impl IntoIterator<Item = (W, &'a PseudoDistribution<K, W>)>,
    ) -> Result<Self, DistError>
    where
        K: 'a,
        W: 'a,
    {
        let mut out = Self::empty();
        for (weight, d) in pairs {
            if weight.is_negative() {
                return Err(DistError::NegativeMass(weight.to_string()));
            }
            if weight.is_zero() {
                continue;
            }
            for (k, w) in d.iter() {
                out.add_mass(k.clone(), weight.clone() * w.clone());
            }
        }
        out.check_mass()?;
        Ok(out)
    }

    /// Scales every mass by `w`. `w` must lie in `[0, 1]`.
    pub fn scale(&self, w: &W) -> Self {
        let mut out = Self::empty();
        for (k, m) in self.iter() {
            out.add_mass(k.clone(), w.clone() * m.clone());
        }
        out
    }

    /// Kleisli extension: `result(y) = Σ_z self(z)·f(z)(y)`.
    pub fn bind<K2: Ord + Clone>(
        &self,
        mut f: impl FnMut(&K) -> PseudoDistribution<K2, W>,
    ) -> PseudoDistribution<K2, W> {
        let mut out = PseudoDistribution::empty();
        for (z, p) in self.iter() {
            for (y, q) in f(z).iter() {
                out.add_mass(y.clone(), p.clone() * q.clone());
            }
        }
        debug_assert!(!out.mass().exceeds_one());
        out
    }

    /// Fallible variant of [`bind`](Self::bind).
    pub fn try_bind<K2: Ord + Clone, E>(
        &self,
        mut f: impl FnMut(&K) -> Result<PseudoDistribution<K2, W>, E>,
    ) -> Result<PseudoDistribution<K2, W>, E> {
        let mut out = PseudoDistribution::empty();
        for (z, p) in self.iter() {
            for (y, q) in f(z)?.iter() {
                out.add_mass(y.clone(), p.clone() * q.clone());
            }
        }
        Ok(out)
    }

    /// Image under a key map.
    pub fn map_keys<K2: Ord + Clone>(&self, mut f: impl FnMut(&K) -> K2) -> PseudoDistribution<K2, W> {
        let mut out = PseudoDistribution::empty();
        for (k, w) in self.iter() {
            out.add_mass(f(k), w.clone());
        }
        out
    }

    /// Image under a partial key map; unmapped keys become deficit.
    pub fn filter_map_keys<K2: Ord + Clone>(
        &self,
        mut f: impl FnMut(&K) -> Option<K2>,
    ) -> PseudoDistribution<K2, W> {
        let mut out = PseudoDistribution::empty();
        for (k, w) in self.iter() {
            if let Some(k2) = f(k) {
                out.add_mass(k2, w.clone());
            }
        }
        out
    }

    pub fn equal_exact(&self, other: &Self) -> bool {
        self == other
    }

    /// Pointwise `self ≤ other`.
    pub fn leq(&self, other: &Self) -> bool {
        self.iter().all(|(k, w)| *w <= other.get(k))
    }

    /// Total-variation distance extended to pseudodistributions:
    ///
    /// `½ Σ_k |D1(k) − D2(k)| + ½ |deficit(D1) − deficit(D2)|`
    ///
    /// This is the ordinary total-variation distance after adding an explicit
    /// divergence outcome carrying the deficit, so it is a metric on all
    /// pseudodistributions and reduces to the usual one when both masses are 1.
    pub fn tv_distance(&self, other: &Self) -> W {
        let mut sum = W::zero();
        for (k, w) in self.iter() {
            sum = sum + w.abs_diff(&other.get(k));
        }
        for (k, w) in other.iter() {
            if !self.entries.contains_key(k) {
                sum = sum + w.clone();
            }
        }
        sum = sum + self.deficit().abs_diff(&other.deficit());
        sum * W::half()
    }

    /// Draws one outcome by inverse CDF over the canonical key order.
    ///
    /// The uniform variate is `u = x / 2^64` where `x` is the first output of
    /// ChaCha8 seeded with `seed`; the result is `Diverged` when `u` falls
    /// past the total mass.
    pub fn sample(&self, seed: u64) -> Sample<K> {
        let x = ChaCha8Rng::seed_from_u64(seed).next_u64();
        let u = W::from_ratio(&BigInt::from(x), &(BigInt::one() << 64));
        let mut cumulative = W::zero();
        for (k, w) in self.iter() {
            cumulative = cumulative + w.clone();
            if u < cumulative {
                return Sample::Value(k.clone());
            }
        }
        Sample::Diverged
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct EntryJson {
    key: String,
    p: String,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DistJson {
    keyspace: KeySpace,
    entries: Vec<EntryJson>,
    deficit: String,
}

impl<K: Key> PseudoDistribution<K, BigRational> {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(self.to_json_struct()).expect("distribution json is infallible")
    }

    fn to_json_struct(&self) -> DistJson {
        DistJson {
            keyspace: K::SPACE,
            entries: self
                .iter()
                .map(|(k, p)| EntryJson {
                    key: k.encode(),
                    p: format_ratio(p),
                })
                .collect(),
            deficit: format_ratio(&self.deficit()),
        }
    }

    /// Compact JSON in the interchange schema.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_struct()).expect("distribution json is infallible")
    }

    pub fn from_json(s: &str) -> Result<Self, DistError> {
        let raw: DistJson = serde_json::from_str(s).map_err(|e| DistError::Json(e.to_string()))?;
        Self::from_json_struct(raw)
    }

    pub fn from_json_value(v: &serde_json::Value) -> Result<Self, DistError> {
        let raw: DistJson =
            serde_json::from_value(v.clone()).map_err(|e| DistError::Json(e.to_string()))?;
        Self::from_json_struct(raw)
    }

    fn from_json_struct(raw: DistJson) -> Result<Self, DistError> {
        if raw.keyspace != K::SPACE {
            return Err(DistError::KeySpaceMismatch(K::SPACE, raw.keyspace));
        }
        let mut d = Self::empty();
        let mut prev: Option<K> = None;
        for e in raw.entries {
            let k = K::decode(&e.key).ok_or_else(|| DistError::Json(format!("bad key {:?}", e.key)))?;
            if prev.as_ref().is_some_and(|p| *p >= k) {
                return Err(DistError::Json("entries not in canonical key order".into()));
            }
            let p = parse_ratio(&e.p).ok_or_else(|| DistError::Json(format!("bad rational {:?}", e.p)))?;
            if p <= BigRational::zero() {
                return Err(DistError::Json(format!("non-positive mass {}", e.p)));
            }
            d.entries.insert(k.clone(), p);
            prev = Some(k);
        }
        d.check_mass()?;
        let deficit =
            parse_ratio(&raw.deficit).ok_or_else(|| DistError::Json(format!("bad deficit {:?}", raw.deficit)))?;
        if deficit != d.deficit() {
            return Err(DistError::Json(format!(
                "deficit {} disagrees with entries (expected {})",
                raw.deficit,
                format_ratio(&d.deficit())
            )));
        }
        Ok(d)
    }
}

/// A distribution whose key space is only known at run time (CLI, files).
#[derive(Debug, Clone, PartialEq)]
pub enum AnyDist {
    Nat(PseudoDistribution<u64>),
    Word(PseudoDistribution<Word>),
}

impl AnyDist {
    pub fn key_space(&self) -> KeySpace {
        match self {
            AnyDist::Nat(_) => KeySpace::Nat,
            AnyDist::Word(_) => KeySpace::Word,
        }
    }

    pub fn from_json(s: &str) -> Result<Self, DistError> {
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| DistError::Json(e.to_string()))?;
        match v.get("keyspace").and_then(|k| k.as_str()) {
            Some("nat") => Ok(AnyDist::Nat(PseudoDistribution::from_json_value(&v)?)),
            Some("word") => Ok(AnyDist::Word(PseudoDistribution::from_json_value(&v)?)),
            _ => Err(DistError::Json("missing or unknown keyspace".into())),
        }
    }

    pub fn to_json(&self) -> String {
        match self {
            AnyDist::Nat(d) => d.to_json(),
            AnyDist::Word(d) => d.to_json(),
        }
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        match self {
            AnyDist::Nat(d) => d.to_json_value(),
            AnyDist::Word(d) => d.to_json_value(),
        }
    }

    pub fn mass(&self) -> BigRational {
        match self {
            AnyDist::Nat(d) => d.mass(),
            AnyDist::Word(d) => d.mass(),
        }
    }

    pub fn tv_distance(&self, other: &AnyDist) -> Result<BigRational, DistError> {
        match (self, other) {
            (AnyDist::Nat(a), AnyDist::Nat(b)) => Ok(a.tv_distance(b)),
            (AnyDist::Word(a), AnyDist::Word(b)) => Ok(a.tv_distance(b)),
            (a, b) => Err(DistError::KeySpaceMismatch(a.key_space(), b.key_space())),
        }
    }

    pub fn equal_exact(&self, other: &AnyDist) -> Result<bool, DistError> {
        match (self, other) {
            (AnyDist::Nat(a), AnyDist::Nat(b)) => Ok(a == b),
            (AnyDist::Word(a), AnyDist::Word(b)) => Ok(a == b),
            (a, b) => Err(DistError::KeySpaceMismatch(a.key_space(), b.key_space())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::ratio;
    use crate::Prob;

    type D = PseudoDistribution<u64>;

    fn d(pairs: &[(u64, i64, i64)]) -> D {
        D::from_entries(pairs.iter().map(|&(k, n, m)| (k, ratio(n, m)))).unwrap()
    }

    #[test]
    fn point_masses() {
        assert_eq!(D::point(0).get(&0), Prob::one());
        let w = PseudoDistribution::<Word>::point(Word::from("ab"));
        assert_eq!(w.get(&Word::from("ab")), Prob::one());
        assert_eq!(D::point(7).mass(), Prob::one());
    }

    #[test]
    fn mass_examples() {
        assert_eq!(d(&[(0, 1, 2), (1, 1, 2)]).mass(), Prob::one());
        assert_eq!(D::empty().mass(), Prob::zero());
        // 1/2 + 1/4 + 1/8 summed by hand
        assert_eq!(d(&[(0, 1, 2), (1, 1, 4), (2, 1, 8)]).mass(), ratio(7, 8));
    }

    #[test]
    fn scale_add_examples() {
        let fair = D::scale_add([(ratio(1, 2), &D::point(0)), (ratio(1, 2), &D::point(1))]).unwrap();
        assert_eq!(fair, d(&[(0, 1, 2), (1, 1, 2)]));
        let x = d(&[(3, 1, 3), (9, 2, 3)]);
        assert_eq!(D::scale_add([(Prob::one(), &x)]).unwrap(), x);
        let half = d(&[(0, 1, 2)]);
        assert_eq!(
            D::scale_add([(ratio(1, 2), &half), (ratio(1, 2), &half)]).unwrap(),
            half
        );
        let same = D::scale_add([(ratio(1, 2), &D::point(4)), (ratio(1, 2), &D::point(4))]).unwrap();
        assert_eq!(same, D::point(4));
        assert_eq!(same.len(), 1);
    }

    #[test]
    fn scale_add_overflow() {
        let err = D::scale_add([(Prob::one(), &D::point(0)), (ratio(1, 2), &D::point(1))]);
        assert!(matches!(err, Err(DistError::MassOverflow(_))));
    }

    #[test]
    fn bind_coin_example() {
        let coin = |z: &u64| d(&[(*z, 1, 2), (*z + 1, 1, 2)]);
        let start = d(&[(3, 1, 2), (4, 1, 2)]);
        // outcomes: 3,3 / 3,4 / 4,4 / 4,5 each 1/4
        assert_eq!(start.bind(coin), d(&[(3, 1, 4), (4, 1, 2), (5, 1, 4)]));
        assert_eq!(D::point(3).bind(coin), coin(&3));
        assert_eq!(start.bind(|z| D::point(*z)), start);
    }

    #[test]
    fn tv_examples() {
        let x = d(&[(0, 1, 3), (2, 1, 3)]);
        assert_eq!(x.tv_distance(&x), Prob::zero());
        assert_eq!(D::point(0).tv_distance(&D::point(1)), Prob::one());
        // deficit term: {0↦1/2} vs {0↦1}: ½·½ + ½·½
        assert_eq!(d(&[(0, 1, 2)]).tv_distance(&D::point(0)), ratio(1, 2));
        assert!(x.equal_exact(&x));
        assert!(!x.equal_exact(&D::point(0)));
    }

    #[test]
    fn zero_entries_are_dropped() {
        let x = D::from_entries([(1, Prob::zero()), (2, ratio(1, 2))]).unwrap();
        assert_eq!(x.len(), 1);
        assert!(matches!(
            D::from_entries([(1, ratio(-1, 2))]),
            Err(DistError::NegativeMass(_))
        ));
    }

    #[test]
    fn sampling_edges() {
        for seed in 0..50 {
            assert_eq!(D::point(5).sample(seed), Sample::Value(5));
            assert_eq!(D::empty().sample(seed), Sample::Diverged);
        }
    }

    #[test]
    fn sampling_frequency() {
        let fair = d(&[(0, 1, 2), (1, 1, 2)]);
        let n = 100_000u64;
        let hits = (0..n).filter(|&s| fair.sample(s) == Sample::Value(0)).count() as f64;
        let sigma = (0.25 / n as f64).sqrt();
        assert!((hits / n as f64 - 0.5).abs() <= 3.0 * sigma, "freq {}", hits / n as f64);
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let x = d(&[(0, 1, 2), (1, 1, 4), (10, 1, 8)]);
        let s = x.to_json();
        assert_eq!(
            s,
            r#"{"keyspace":"nat","entries":[{"key":"0","p":"1/2"},{"key":"1","p":"1/4"},{"key":"10","p":"1/8"}],"deficit":"1/8"}"#
        );
        assert_eq!(D::from_json(&s).unwrap(), x);
        assert_eq!(D::from_json(&s).unwrap().to_json(), s);
        let w = PseudoDistribution::<Word>::from_entries([
            (Word::from("b"), ratio(1, 2)),
            (Word::from(""), ratio(1, 2)),
        ])
        .unwrap();
        let s = w.to_json();
        assert!(s.starts_with(r#"{"keyspace":"word","entries":[{"key":"","p":"1/2"}"#));
        assert_eq!(AnyDist::from_json(&s).unwrap(), AnyDist::Word(w));
    }

    #[test]
    fn json_rejects_inconsistent_input() {
        let bad_deficit = r#"{"keyspace":"nat","entries":[{"key":"0","p":"1/2"}],"deficit":"0/1"}"#;
        assert!(D::from_json(bad_deficit).is_err());
        let unsorted = r#"{"keyspace":"nat","entries":[{"key":"2","p":"1/4"},{"key":"1","p":"1/4"}],"deficit":"1/2"}"#;
        assert!(D::from_json(unsorted).is_err());
        let word = r#"{"keyspace":"word","entries":[],"deficit":"1/1"}"#;
        assert!(matches!(D::from_json(word), Err(DistError::KeySpaceMismatch(..))));
    }

    #[test]
    fn any_dist_mismatch() {
        let a = AnyDist::Nat(D::point(0));
        let b = AnyDist::Word(PseudoDistribution::point(Word::empty()));
        assert!(matches!(a.tv_distance(&b), Err(DistError::KeySpaceMismatch(..))));
    }

    #[test]
    fn word_order_is_length_then_lex() {
        let mut v: Vec<Word> = ["ba", "b", "", "ab", "a", "aaa"].iter().map(|s| Word::from(*s)).collect();
        v.sort();
        let s: Vec<&str> = v.iter().map(|w| w.as_str()).collect();
        assert_eq!(s, ["", "a", "b", "ab", "ba", "aaa"]);
    }

    #[test]
    fn float_weights_work() {
        let x = PseudoDistribution::<u64, f64>::from_entries([(0, 0.5), (1, 0.25)]).unwrap();
        assert!((x.deficit() - 0.25).abs() < 1e-12);
        let y = x.bind(|k| PseudoDistribution::point(k + 1));
        assert_eq!(y.get(&2), 0.25);
    }
}
