//! Coding tuples of words as single words.
//!
//! `tuple(w₁, …, wₙ) = ①① · (j_c c)…` where every symbol `c` of component
//! `j` is written as the pair `ⓙ c`, components in order. The header keeps
//! the length at `2Σ|wⱼ| + 2`, and a symbol's component is read off the tag
//! that precedes it.

use super::term::{is_tag, tag, Alphabet, DetWordFn, WordError, WordTerm, TAG_COUNT};
use crate::dist::Word;

pub fn encode_tuple(parts: &[Word]) -> Word {
    assert!(parts.len() <= TAG_COUNT, "at most {TAG_COUNT} components");
    let mut s = String::new();
    s.push(tag(1));
    s.push(tag(1));
    for (j, p) in parts.iter().enumerate() {
        for c in p.chars() {
            s.push(tag(j + 1));
            s.push(c);
        }
    }
    Word::from(s)
}

pub fn decode_tuple(t: &Word, n: usize) -> Result<Vec<Word>, WordError> {
    let err = |m: &str| WordError::Decode(format!("{m} in {:?}", t.as_str()));
    let chars: Vec<char> = t.chars().collect();
    if chars.len() < 2 || chars[0] != tag(1) || chars[1] != tag(1) || chars.len() % 2 != 0 {
        return Err(err("missing header"));
    }
    let mut parts = vec![String::new(); n];
    let mut last = 1;
    for pair in chars[2..].chunks(2) {
        let (tg, c) = (pair[0], pair[1]);
        if !is_tag(tg) || is_tag(c) {
            return Err(err("expected tag followed by a symbol"));
        }
        let j = (tg as u32 - tag(1) as u32) as usize + 1;
        if j > n || j < last {
            return Err(err("component tags out of order"));
        }
        last = j;
        parts[j - 1].push(c);
    }
    Ok(parts.into_iter().map(Word::from).collect())
}

fn check_m(m: u32) -> Result<(), WordError> {
    if m == 0 {
        Err(WordError::Decode("couple size parameter m must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// `couple_m(u, v)`. The result satisfies `2|u|+2|v|+2 ≤ |t|^m` for all
/// `m ≥ 1`.
pub fn couple_encode(u: &Word, v: &Word, m: u32) -> Result<Word, WordError> {
    check_m(m)?;
    Ok(encode_tuple(&[u.clone(), v.clone()]))
}

pub fn couple_first(t: &Word, m: u32) -> Result<Word, WordError> {
    check_m(m)?;
    Ok(decode_tuple(t, 2)?.swap_remove(0))
}

pub fn couple_second(t: &Word, m: u32) -> Result<Word, WordError> {
    check_m(m)?;
    Ok(decode_tuple(t, 2)?.swap_remove(1))
}

/// Native `tupleₙ`, typed `W_k^n → W_k`.
pub fn tuple_fn(n: usize) -> DetWordFn {
    DetWordFn::new(format!("tuple{n}"), vec![0; n], 0, |ws| Some(encode_tuple(ws)))
}

/// Native projection `untupleₙ_ⱼ` (1-based), typed `W_k → W_k`.
pub fn untuple_fn(n: usize, j: usize) -> DetWordFn {
    DetWordFn::new(format!("untuple{n}_{j}"), vec![0], 0, move |ws| {
        decode_tuple(&ws[0], n).ok().map(|mut p| p.swap_remove(j - 1))
    })
}

/// Resolves the names produced by [`tuple_fn`] and [`untuple_fn`].
pub fn builtin_word_det(name: &str) -> Option<DetWordFn> {
    if let Some(rest) = name.strip_prefix("untuple") {
        let (n, j) = rest.split_once('_')?;
        let (n, j): (usize, usize) = (n.parse().ok()?, j.parse().ok()?);
        let ok = (1..=TAG_COUNT).contains(&n) && (1..=n).contains(&j);
        return ok.then(|| untuple_fn(n, j));
    }
    let n: usize = name.strip_prefix("tuple")?.parse().ok()?;
    (1..=TAG_COUNT).contains(&n).then(|| tuple_fn(n))
}

fn cons_on(c: char, t: WordTerm) -> WordTerm {
    WordTerm::comp(WordTerm::Cons(c), vec![t])
}

/// Genuine word term for `couple`, over `sigma` extended with two tags.
/// Types at `W_1 × W_1 → W_0`.
pub fn couple_term(sigma: &Alphabet) -> WordTerm {
    let (t1, t2) = (tag(1), tag(2));
    let tag_v = WordTerm::rec(
        WordTerm::Eps,
        sigma
            .symbols()
            .iter()
            .map(|&c| (c, cons_on(t2, cons_on(c, WordTerm::proj(2, 1)))))
            .chain([(t1, WordTerm::proj(2, 1)), (t2, WordTerm::proj(2, 1))]),
    );
    let tag_u_onto = WordTerm::rec(
        WordTerm::proj(1, 1),
        sigma
            .symbols()
            .iter()
            .map(|&c| (c, cons_on(t1, cons_on(c, WordTerm::proj(3, 1)))))
            .chain([(t1, WordTerm::proj(3, 1)), (t2, WordTerm::proj(3, 1))]),
    );
    cons_on(
        t1,
        cons_on(
            t1,
            WordTerm::comp(
                tag_u_onto,
                vec![WordTerm::proj(2, 1), WordTerm::comp(tag_v, vec![WordTerm::proj(2, 2)])],
            ),
        ),
    )
}

/// Genuine decoder for component `j ∈ {1, 2}`; types at `W_1 → W_0`.
///
/// Reading right to left, a tag `ⓙ` followed by a plain symbol `c` prepends
/// `c` to the result; everything else leaves it alone.
pub fn decode_term(sigma: &Alphabet, j: usize) -> WordTerm {
    let keep = WordTerm::proj(2, 1);
    let tags = [tag(1), tag(2)];
    // arguments (w, r): scrutinee is the rest of the word after the tag
    let peek = WordTerm::case(
        WordTerm::proj(1, 1),
        sigma
            .symbols()
            .iter()
            .map(|&c| (c, cons_on(c, WordTerm::proj(2, 2))))
            .chain(tags.map(|t| (t, WordTerm::proj(2, 2)))),
    );
    let on_tag = WordTerm::comp(peek, vec![WordTerm::proj(2, 2), WordTerm::proj(2, 1)]);
    WordTerm::rec(
        WordTerm::Eps,
        sigma
            .symbols()
            .iter()
            .map(|&c| (c, keep.clone()))
            .chain(tags.iter().enumerate().map(|(i, &t)| {
                (t, if i + 1 == j { on_tag.clone() } else { keep.clone() })
            })),
    )
}

/// Replaces every simultaneous recursion by a single recursion on notation
/// over tuple-coded accumulators.
pub fn tupled_expand(t: &WordTerm, sigma: &Alphabet) -> Result<WordTerm, WordError> {
    let arity = t.validate(sigma)?;
    Ok(expand(t, arity.min()))
}

fn expand(t: &WordTerm, arity: usize) -> WordTerm {
    match t {
        WordTerm::Comp(f, gs) => WordTerm::comp(
            expand(f, gs.len()),
            gs.iter().map(|g| expand(g, arity)).collect(),
        ),
        WordTerm::Rec(b, s) => WordTerm::Rec(
            Box::new(expand(b, arity.saturating_sub(1))),
            s.iter().map(|(c, g)| (*c, expand(g, arity + 1))).collect(),
        ),
        WordTerm::Case(b, s) => WordTerm::Case(
            Box::new(expand(b, arity.saturating_sub(1))),
            s.iter().map(|(c, g)| (*c, expand(g, arity))).collect(),
        ),
        WordTerm::SimRec { index, bases, steps } => {
            let n = bases.len();
            let k = arity.saturating_sub(1);
            let base = WordTerm::comp(
                WordTerm::Det(tuple_fn(n)),
                bases.iter().map(|b| expand(b, k)).collect(),
            );
            let mut new_steps = std::collections::BTreeMap::new();
            for (j, a) in steps.keys() {
                if *j != 1 {
                    continue;
                }
                let inner_args: Vec<WordTerm> = (1..=n)
                    .map(|i| WordTerm::comp(WordTerm::Det(untuple_fn(n, i)), vec![WordTerm::proj(k + 2, 1)]))
                    .chain((2..=k + 2).map(|p| WordTerm::proj(k + 2, p)))
                    .collect();
                let comps = (1..=n)
                    .map(|i| WordTerm::comp(expand(&steps[&(i, *a)], n + k + 1), inner_args.clone()))
                    .collect();
                new_steps.insert(*a, WordTerm::comp(WordTerm::Det(tuple_fn(n)), comps));
            }
            WordTerm::comp(
                WordTerm::Det(untuple_fn(n, *index)),
                vec![WordTerm::Rec(Box::new(base), new_steps)],
            )
        }
        other => other.clone(),
    }
}
