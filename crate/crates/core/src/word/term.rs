use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::dist::Word;

/// First reserved tag character; tags `①`, `②`, … mark tuple components.
pub const TAG_BASE: u32 = 0x2460;
/// Number of reserved tag characters.
pub const TAG_COUNT: usize = 20;

/// The `j`-th tuple tag (1-based).
pub fn tag(j: usize) -> char {
    assert!((1..=TAG_COUNT).contains(&j), "tag index {j} out of range");
    char::from_u32(TAG_BASE + j as u32 - 1).expect("tag range is valid")
}

pub fn is_tag(c: char) -> bool {
    (TAG_BASE..TAG_BASE + TAG_COUNT as u32).contains(&(c as u32))
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("arity mismatch at {path}: {detail}")]
    ArityMismatch { path: String, detail: String },
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("simrec index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("malformed encoded tuple: {0}")]
    Decode(String),
}

/// A nonempty ordered set of symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self, WordError> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.is_empty() {
            return Err(WordError::AlphabetMismatch("empty alphabet".into()));
        }
        for (i, c) in symbols.iter().enumerate() {
            if symbols[..i].contains(c) {
                return Err(WordError::AlphabetMismatch(format!("duplicate symbol {c:?}")));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// Alphabet from the characters of `s`, in order.
    pub fn parse(s: &str) -> Result<Self, WordError> {
        Self::new(s.chars())
    }

    /// `self` plus the first `n` tuple tags.
    pub fn with_tags(&self, n: usize) -> Result<Self, WordError> {
        if self.symbols.iter().any(|c| is_tag(*c)) {
            return Err(WordError::AlphabetMismatch("alphabet already uses tag symbols".into()));
        }
        Self::new(self.symbols.iter().copied().chain((1..=n).map(tag)))
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn contains(&self, c: char) -> bool {
        self.symbols.contains(&c)
    }

    pub fn index_of(&self, c: char) -> Option<usize> {
        self.symbols.iter().position(|&x| x == c)
    }

    pub fn check_word(&self, w: &Word) -> Result<(), WordError> {
        match w.chars().find(|c| !self.contains(*c)) {
            Some(c) => Err(WordError::AlphabetMismatch(format!(
                "symbol {c:?} of {:?} not in alphabet",
                w.as_str()
            ))),
            None => Ok(()),
        }
    }

    /// All words of length exactly `n`, in canonical order.
    pub fn words_of_len(&self, n: usize) -> Vec<Word> {
        let mut out = vec![String::new()];
        for _ in 0..n {
            out = out
                .iter()
                .flat_map(|p| self.symbols.iter().map(move |c| format!("{p}{c}")))
                .collect();
        }
        let mut ws: Vec<Word> = out.into_iter().map(Word::from).collect();
        ws.sort();
        ws
    }

    /// All words of length at most `n`, in canonical order.
    pub fn words_up_to(&self, n: usize) -> Vec<Word> {
        (0..=n).flat_map(|k| self.words_of_len(k)).collect()
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.symbols {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

type DetWordImpl = dyn Fn(&[Word]) -> Option<Word> + Send + Sync;

/// A native deterministic word function with a declared tier signature.
///
/// The signature `(args, result)` is a template: the function may be used at
/// any uniform shift of it.
#[derive(Clone)]
pub struct DetWordFn {
    name: Arc<str>,
    arg_tiers: Vec<u32>,
    result_tier: u32,
    f: Arc<DetWordImpl>,
}

impl DetWordFn {
    pub fn new(
        name: impl Into<Arc<str>>,
        arg_tiers: Vec<u32>,
        result_tier: u32,
        f: impl Fn(&[Word]) -> Option<Word> + Send + Sync + 'static,
    ) -> Self {
        DetWordFn {
            name: name.into(),
            arg_tiers,
            result_tier,
            f: Arc::new(f),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arg_tiers.len()
    }

    pub fn signature(&self) -> (&[u32], u32) {
        (&self.arg_tiers, self.result_tier)
    }

    pub fn apply(&self, args: &[Word]) -> Option<Word> {
        (self.f)(args)
    }
}

impl fmt::Debug for DetWordFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "det {}/{}", self.name, self.arity())
    }
}

impl PartialEq for DetWordFn {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.arg_tiers == other.arg_tiers && self.result_tier == other.result_tier
    }
}

impl Eq for DetWordFn {}

/// A term of the word algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WordTerm {
    /// The empty word, at any arity.
    Eps,
    Cons(char),
    /// `r_a(v) = {a·v ↦ ½, v ↦ ½}`.
    RandCons(char),
    /// `Πⁿ_m`, 1-based.
    Proj(usize, usize),
    Comp(Box<WordTerm>, Vec<WordTerm>),
    /// Recursion on notation: `f(ε, v⃗) = g_ε(v⃗)`,
    /// `f(a·w, v⃗) = g_a(f(w, v⃗), w, v⃗)`.
    Rec(Box<WordTerm>, BTreeMap<char, WordTerm>),
    /// `h(ε, y⃗) = g_ε(y⃗)`, `h(a·w, y⃗) = g_a(w, y⃗)`.
    Case(Box<WordTerm>, BTreeMap<char, WordTerm>),
    /// Component `index` (1-based) of a simultaneous recursion with
    /// `bases.len()` components; steps are keyed by (component, symbol).
    SimRec {
        index: usize,
        bases: Vec<WordTerm>,
        steps: BTreeMap<(usize, char), WordTerm>,
    },
    Det(DetWordFn),
}

/// Arity of a word term. `Eps` and terms built only from it accept any
/// number of arguments above a minimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arity {
    Exactly(usize),
    AtLeast(usize),
}

impl Arity {
    pub fn admits(self, n: usize) -> bool {
        match self {
            Arity::Exactly(k) => k == n,
            Arity::AtLeast(k) => n >= k,
        }
    }

    /// The smallest admissible arity.
    pub fn min(self) -> usize {
        match self {
            Arity::Exactly(k) | Arity::AtLeast(k) => k,
        }
    }

    fn unify(self, other: Arity) -> Option<Arity> {
        use Arity::*;
        match (self, other) {
            (Exactly(a), Exactly(b)) => (a == b).then_some(Exactly(a)),
            (Exactly(a), AtLeast(b)) | (AtLeast(b), Exactly(a)) => (a >= b).then_some(Exactly(a)),
            (AtLeast(a), AtLeast(b)) => Some(AtLeast(a.max(b))),
        }
    }

    /// Arity `self − k`, failing if `self` cannot have `k` arguments.
    fn drop(self, k: usize) -> Option<Arity> {
        match self {
            Arity::Exactly(a) => a.checked_sub(k).map(Arity::Exactly),
            Arity::AtLeast(a) => Some(Arity::AtLeast(a.saturating_sub(k))),
        }
    }

    fn add(self, k: usize) -> Arity {
        match self {
            Arity::Exactly(a) => Arity::Exactly(a + k),
            Arity::AtLeast(a) => Arity::AtLeast(a + k),
        }
    }
}

impl fmt::Display for Arity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arity::Exactly(k) => write!(f, "{k}"),
            Arity::AtLeast(k) => write!(f, "≥{k}"),
        }
    }
}

impl WordTerm {
    pub fn proj(n: usize, m: usize) -> WordTerm {
        WordTerm::Proj(n, m)
    }

    pub fn comp(f: WordTerm, gs: Vec<WordTerm>) -> WordTerm {
        WordTerm::Comp(Box::new(f), gs)
    }

    pub fn rec(base: WordTerm, steps: impl IntoIterator<Item = (char, WordTerm)>) -> WordTerm {
        WordTerm::Rec(Box::new(base), steps.into_iter().collect())
    }

    pub fn case(base: WordTerm, branches: impl IntoIterator<Item = (char, WordTerm)>) -> WordTerm {
        WordTerm::Case(Box::new(base), branches.into_iter().collect())
    }

    /// Checks arities and that every `Rec`/`Case`/`SimRec` covers `alphabet`
    /// exactly, returning the term's arity.
    pub fn validate(&self, alphabet: &Alphabet) -> Result<Arity, WordError> {
        self.check(alphabet, &mut vec!["root".into()])
    }

    fn check(&self, sigma: &Alphabet, path: &mut Vec<String>) -> Result<Arity, WordError> {
        let fail = |path: &Vec<String>, detail: String| WordError::ArityMismatch {
            path: path.join("/"),
            detail,
        };
        let symbol = |c: char| {
            if sigma.contains(c) {
                Ok(())
            } else {
                Err(WordError::AlphabetMismatch(format!("symbol {c:?} not in alphabet {sigma}")))
            }
        };
        let covers = |keys: Vec<char>, what: &str| {
            let mut sorted = keys.clone();
            sorted.sort();
            let mut want = sigma.symbols().to_vec();
            want.sort();
            if sorted == want {
                Ok(())
            } else {
                Err(WordError::AlphabetMismatch(format!(
                    "{what} covers {:?}, alphabet is {:?}",
                    keys.iter().collect::<String>(),
                    sigma.to_string()
                )))
            }
        };
        match self {
            WordTerm::Eps => Ok(Arity::AtLeast(0)),
            WordTerm::Cons(c) | WordTerm::RandCons(c) => {
                symbol(*c)?;
                Ok(Arity::Exactly(1))
            }
            WordTerm::Proj(n, m) => {
                if *n == 0 || *m == 0 || m > n {
                    Err(fail(path, format!("projection proj {n} {m} needs 1 ≤ m ≤ n")))
                } else {
                    Ok(Arity::Exactly(*n))
                }
            }
            WordTerm::Det(d) => Ok(Arity::Exactly(d.arity())),
            WordTerm::Comp(f, gs) => {
                if gs.is_empty() {
                    return Err(fail(path, "composition with no inner functions".into()));
                }
                path.push("comp.f".into());
                let fa = f.check(sigma, path)?;
                path.pop();
                if !fa.admits(gs.len()) {
                    return Err(fail(
                        path,
                        format!("outer function has arity {fa} but {} inner functions", gs.len()),
                    ));
                }
                let mut k = Arity::AtLeast(0);
                for (i, g) in gs.iter().enumerate() {
                    path.push(format!("comp.g{}", i + 1));
                    let ga = g.check(sigma, path)?;
                    path.pop();
                    k = k
                        .unify(ga)
                        .ok_or_else(|| fail(path, format!("inner function {} has arity {ga}, others {k}", i + 1)))?;
                }
                Ok(k)
            }
            WordTerm::Rec(base, steps) | WordTerm::Case(base, steps) => {
                let (what, extra) = match self {
                    WordTerm::Rec(..) => ("rec", 2),
                    _ => ("case", 1),
                };
                covers(steps.keys().copied().collect(), what)?;
                path.push(format!("{what}.base"));
                let mut k = base.check(sigma, path)?;
                path.pop();
                for (c, g) in steps {
                    path.push(format!("{what}.{c}"));
                    let ga = g.check(sigma, path)?;
                    let shifted = ga
                        .drop(extra)
                        .ok_or_else(|| fail(path, format!("branch needs at least {extra} arguments")))?;
                    path.pop();
                    k = k.unify(shifted).ok_or_else(|| {
                        fail(path, format!("branch {c:?} has arity {ga}, base implies {}", k.add(extra)))
                    })?;
                }
                Ok(k.add(1))
            }
            WordTerm::SimRec { index, bases, steps } => {
                let n = bases.len();
                if *index == 0 || *index > n {
                    return Err(WordError::IndexOutOfRange { index: *index, n });
                }
                let mut k = Arity::AtLeast(0);
                for (j, b) in bases.iter().enumerate() {
                    path.push(format!("simrec.base{}", j + 1));
                    let ba = b.check(sigma, path)?;
                    path.pop();
                    k = k.unify(ba).ok_or_else(|| fail(path, format!("base {} has arity {ba}", j + 1)))?;
                }
                for j in 1..=n {
                    let keys = steps.keys().filter(|(i, _)| *i == j).map(|(_, c)| *c).collect();
                    covers(keys, &format!("simrec component {j}"))?;
                }
                if let Some((j, _)) = steps.keys().find(|(j, _)| *j == 0 || *j > n) {
                    return Err(WordError::IndexOutOfRange { index: *j, n });
                }
                for ((j, c), g) in steps {
                    path.push(format!("simrec.{j}.{c}"));
                    let ga = g.check(sigma, path)?;
                    let shifted = ga
                        .drop(n + 1)
                        .ok_or_else(|| fail(path, format!("step needs at least {} arguments", n + 1)))?;
                    path.pop();
                    k = k
                        .unify(shifted)
                        .ok_or_else(|| fail(path, format!("step ({j},{c:?}) has arity {ga}")))?;
                }
                Ok(k.add(1))
            }
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        1 + match self {
            WordTerm::Comp(f, gs) => f.size() + gs.iter().map(WordTerm::size).sum::<usize>(),
            WordTerm::Rec(b, s) | WordTerm::Case(b, s) => b.size() + s.values().map(WordTerm::size).sum::<usize>(),
            WordTerm::SimRec { bases, steps, .. } => {
                bases.iter().map(WordTerm::size).sum::<usize>() + steps.values().map(WordTerm::size).sum::<usize>()
            }
            _ => 0,
        }
    }

    /// True when the term contains a `SimRec` node.
    pub fn has_simrec(&self) -> bool {
        match self {
            WordTerm::SimRec { .. } => true,
            WordTerm::Comp(f, gs) => f.has_simrec() || gs.iter().any(WordTerm::has_simrec),
            WordTerm::Rec(b, s) | WordTerm::Case(b, s) => b.has_simrec() || s.values().any(WordTerm::has_simrec),
            _ => false,
        }
    }

    /// True when the term contains a native `Det` node.
    pub fn has_det(&self) -> bool {
        match self {
            WordTerm::Det(_) => true,
            WordTerm::Comp(f, gs) => f.has_det() || gs.iter().any(WordTerm::has_det),
            WordTerm::Rec(b, s) | WordTerm::Case(b, s) => b.has_det() || s.values().any(WordTerm::has_det),
            WordTerm::SimRec { bases, steps, .. } => {
                bases.iter().any(WordTerm::has_det) || steps.values().any(WordTerm::has_det)
            }
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::parse("ab").unwrap()
    }

    #[test]
    fn alphabet_rules() {
        assert!(Alphabet::parse("").is_err());
        assert!(Alphabet::parse("aa").is_err());
        let x = ab().with_tags(2).unwrap();
        assert_eq!(x.symbols(), &['a', 'b', '①', '②']);
        assert!(x.with_tags(1).is_err());
        let ws: Vec<String> = ab().words_up_to(2).into_iter().map(Word::into_string).collect();
        assert_eq!(ws, ["", "a", "b", "aa", "ab", "ba", "bb"]);
    }

    #[test]
    fn arities() {
        let s = ab();
        assert_eq!(WordTerm::Eps.validate(&s), Ok(Arity::AtLeast(0)));
        assert_eq!(WordTerm::Cons('a').validate(&s), Ok(Arity::Exactly(1)));
        let copy = WordTerm::rec(
            WordTerm::Eps,
            [
                ('a', WordTerm::comp(WordTerm::Cons('a'), vec![WordTerm::proj(2, 1)])),
                ('b', WordTerm::comp(WordTerm::Cons('b'), vec![WordTerm::proj(2, 1)])),
            ],
        );
        assert_eq!(copy.validate(&s), Ok(Arity::Exactly(1)));
        let eps_rec = WordTerm::rec(WordTerm::Eps, [('a', WordTerm::Eps), ('b', WordTerm::Eps)]);
        assert_eq!(eps_rec.validate(&s), Ok(Arity::AtLeast(1)));
    }

    #[test]
    fn coverage_and_symbols() {
        let s = ab();
        let partial = WordTerm::case(WordTerm::Eps, [('a', WordTerm::proj(1, 1))]);
        assert!(matches!(partial.validate(&s), Err(WordError::AlphabetMismatch(_))));
        assert!(matches!(WordTerm::Cons('z').validate(&s), Err(WordError::AlphabetMismatch(_))));
        let bad = WordTerm::SimRec {
            index: 3,
            bases: vec![WordTerm::Eps],
            steps: BTreeMap::new(),
        };
        assert!(matches!(bad.validate(&s), Err(WordError::IndexOutOfRange { .. })));
    }

    #[test]
    fn mismatch_paths() {
        let s = ab();
        let bad = WordTerm::comp(
            WordTerm::Cons('a'),
            vec![WordTerm::proj(2, 1), WordTerm::proj(2, 2)],
        );
        let Err(WordError::ArityMismatch { path, .. }) = bad.validate(&s) else {
            panic!()
        };
        assert_eq!(path, "root");
    }
}
