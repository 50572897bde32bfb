//! Standard word-algebra terms, parameterized by the alphabet.

use std::collections::BTreeMap;

use super::term::{Alphabet, WordTerm};

fn p(n: usize, m: usize) -> WordTerm {
    WordTerm::proj(n, m)
}

fn cons_on(c: char, t: WordTerm) -> WordTerm {
    WordTerm::comp(WordTerm::Cons(c), vec![t])
}

fn each(sigma: &Alphabet, mut f: impl FnMut(char) -> WordTerm) -> Vec<(char, WordTerm)> {
    sigma.symbols().iter().map(|&c| (c, f(c))).collect()
}

/// `copy(a·w) = a·copy(w)`: the identity, by recursion. `W_1 → W_0`.
pub fn copy(sigma: &Alphabet) -> WordTerm {
    WordTerm::rec(WordTerm::Eps, each(sigma, |c| cons_on(c, p(2, 1))))
}

/// `concat(u, v) = u·v`, recursing on `u`. `W_1 × W_0 → W_0`.
pub fn concat(sigma: &Alphabet) -> WordTerm {
    WordTerm::rec(p(1, 1), each(sigma, |c| cons_on(c, p(3, 1))))
}

/// `tail(a·w) = w`, `tail(ε) = ε`. `W_k → W_k`.
pub fn tail(sigma: &Alphabet) -> WordTerm {
    WordTerm::case(WordTerm::Eps, each(sigma, |_| p(1, 1)))
}

/// `drop(u, x)`: `x` without its first `|u|` symbols. `W_1 × W_0 → W_0`.
pub fn drop(sigma: &Alphabet) -> WordTerm {
    WordTerm::rec(p(1, 1), each(sigma, |_| WordTerm::comp(tail(sigma), vec![p(3, 1)])))
}

/// Reverses its argument. Reading `x` from the right, the step for the
/// suffix `w` prepends `x`'s symbol at position `|w|`, found as the head of
/// `drop(w, x)`. `x` is needed both as recurrence argument and below it, so
/// the second copy goes through [`copy`]. `W_1 → W_0`.
pub fn reverse(sigma: &Alphabet) -> WordTerm {
    // arguments of the step: (r, w, x)
    let head_onto = WordTerm::case(p(1, 1), each(sigma, |c| cons_on(c, p(2, 2))));
    let step = WordTerm::comp(
        head_onto,
        vec![WordTerm::comp(drop(sigma), vec![p(3, 2), p(3, 3)]), p(3, 1)],
    );
    let rev = WordTerm::rec(WordTerm::Eps, each(sigma, |_| step.clone()));
    WordTerm::comp(rev, vec![p(1, 1), WordTerm::comp(copy(sigma), vec![p(1, 1)])])
}

/// The naive form of [`reverse`] feeding `x` to both positions directly;
/// untypable.
pub fn reverse_naive(sigma: &Alphabet) -> WordTerm {
    let WordTerm::Comp(rev, _) = reverse(sigma) else {
        unreachable!()
    };
    WordTerm::comp(*rev, vec![p(1, 1), p(1, 1)])
}

/// Length in unary: `c^{|x|}` where `c` is the first symbol. `W_1 → W_0`.
pub fn length(sigma: &Alphabet) -> WordTerm {
    let c0 = sigma.symbols()[0];
    WordTerm::rec(WordTerm::Eps, each(sigma, |_| cons_on(c0, p(2, 1))))
}

/// Occurrences of symbol `a`, in unary. `W_1 → W_0`.
pub fn count(sigma: &Alphabet, a: char) -> WordTerm {
    WordTerm::rec(
        WordTerm::Eps,
        each(sigma, |c| if c == a { cons_on(a, p(2, 1)) } else { p(2, 1) }),
    )
}

/// `head(a·w) = a`, `head(ε) = ε`. `W_k → W_k`.
pub fn head(sigma: &Alphabet) -> WordTerm {
    WordTerm::case(WordTerm::Eps, each(sigma, |c| cons_on(c, WordTerm::Eps)))
}

/// Swaps the first two symbols. `W_k → W_k`.
pub fn swap2(sigma: &Alphabet) -> WordTerm {
    let inner = |a: char| {
        WordTerm::case(
            cons_on(a, WordTerm::Eps),
            each(sigma, |b| cons_on(b, cons_on(a, p(1, 1)))),
        )
    };
    WordTerm::case(WordTerm::Eps, each(sigma, inner))
}

/// `choose(x, u, v)`: `u` if `x` starts with the first symbol, else `v`.
/// `W_k × W_l × W_l → W_l`.
pub fn choose(sigma: &Alphabet) -> WordTerm {
    let c0 = sigma.symbols()[0];
    WordTerm::case(p(2, 2), each(sigma, |c| if c == c0 { p(3, 2) } else { p(3, 3) }))
}

/// Each recursion step appends `a` with probability ½: binomial length.
pub fn random_append(sigma: &Alphabet, a: char) -> WordTerm {
    WordTerm::rec(
        WordTerm::Eps,
        each(sigma, |_| WordTerm::comp(WordTerm::RandCons(a), vec![p(2, 1)])),
    )
}

/// Random subsequence: every symbol is kept with probability ½.
pub fn random_subword(sigma: &Alphabet) -> WordTerm {
    WordTerm::rec(
        WordTerm::Eps,
        each(sigma, |c| WordTerm::comp(WordTerm::RandCons(c), vec![p(2, 1)])),
    )
}

/// Doubling: `d(ε) = a`, `d(c·w) = concat(d(w), d(w))`, length `2^{|x|}`.
/// The canonical impredicative term.
pub fn exp(sigma: &Alphabet) -> WordTerm {
    let a = sigma.symbols()[0];
    WordTerm::rec(
        cons_on(a, WordTerm::Eps),
        each(sigma, |_| WordTerm::comp(concat(sigma), vec![p(2, 1), p(2, 1)])),
    )
}

/// Recursion applied to the recursive result: `f(c·w) = g(f(w))`.
pub fn iterate_on_result(sigma: &Alphabet, g: WordTerm) -> WordTerm {
    WordTerm::rec(
        cons_on(sigma.symbols()[0], WordTerm::Eps),
        each(sigma, |c| cons_on(c, WordTerm::comp(g.clone(), vec![p(2, 1)]))),
    )
}

/// `f(c·w, y) = concat(f(w, y), y)`: quadratic, but recursing on its own
/// output.
pub fn append_param(sigma: &Alphabet) -> WordTerm {
    WordTerm::rec(
        p(1, 1),
        each(sigma, |_| WordTerm::comp(concat(sigma), vec![p(3, 1), p(3, 3)])),
    )
}

/// Two-component system: `f¹` is the parity of `|x|` (`ε` or the first
/// symbol), `f²` is `|x|` in unary.
pub fn parity_length(sigma: &Alphabet, index: usize) -> WordTerm {
    let c0 = sigma.symbols()[0];
    let toggle = WordTerm::case(cons_on(c0, WordTerm::Eps), each(sigma, |_| WordTerm::Eps));
    let mut steps = BTreeMap::new();
    for &c in sigma.symbols() {
        steps.insert((1, c), WordTerm::comp(toggle.clone(), vec![p(3, 1)]));
        steps.insert((2, c), cons_on(c0, p(3, 2)));
    }
    WordTerm::SimRec {
        index,
        bases: vec![WordTerm::Eps, WordTerm::Eps],
        steps,
    }
}

/// Two-component system with randomness and cross-dependence:
/// `f¹(c·w) = r_c(f²(w))`, `f²(c·w) = c·f¹(w)`.
pub fn coupled_random(sigma: &Alphabet, index: usize) -> WordTerm {
    let mut steps = BTreeMap::new();
    for &c in sigma.symbols() {
        steps.insert((1, c), WordTerm::comp(WordTerm::RandCons(c), vec![p(3, 2)]));
        steps.insert((2, c), cons_on(c, p(3, 1)));
    }
    WordTerm::SimRec {
        index,
        bases: vec![WordTerm::Eps, WordTerm::Eps],
        steps,
    }
}

/// Single-component simultaneous recursion with the data of [`copy`].
pub fn simrec_copy(sigma: &Alphabet) -> WordTerm {
    let steps = sigma
        .symbols()
        .iter()
        .map(|&c| ((1, c), cons_on(c, p(2, 1))))
        .collect();
    WordTerm::SimRec {
        index: 1,
        bases: vec![WordTerm::Eps],
        steps,
    }
}

/// Simultaneous doubling: `f¹(c·w) = concat(f²(w), f²(w))`; untypable.
pub fn simrec_exp(sigma: &Alphabet) -> WordTerm {
    let a = sigma.symbols()[0];
    let mut steps = BTreeMap::new();
    for &c in sigma.symbols() {
        steps.insert((1, c), WordTerm::comp(concat(sigma), vec![p(3, 2), p(3, 2)]));
        steps.insert((2, c), p(3, 1));
    }
    WordTerm::SimRec {
        index: 1,
        bases: vec![cons_on(a, WordTerm::Eps), cons_on(a, WordTerm::Eps)],
        steps,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::Word;
    use crate::num::ratio;
    use crate::word::{eval_simrec, eval_word};
    use crate::WordDist;

    fn ab() -> Alphabet {
        Alphabet::parse("ab").unwrap()
    }

    fn det(t: &WordTerm, args: &[&str]) -> String {
        let args: Vec<Word> = args.iter().map(|s| Word::from(*s)).collect();
        let d: WordDist = eval_word(t, &args, &ab()).unwrap();
        assert_eq!(d.len(), 1, "{d:?}");
        let out = d.keys().next().unwrap().to_string();
        out
    }

    #[test]
    fn deterministic_terms_against_native() {
        let s = ab();
        for x in s.words_up_to(4) {
            let xs = x.as_str();
            let rev: String = xs.chars().rev().collect();
            assert_eq!(det(&reverse(&s), &[xs]), rev);
            assert_eq!(det(&copy(&s), &[xs]), xs);
            assert_eq!(det(&concat(&s), &[xs, "ba"]), format!("{xs}ba"));
            assert_eq!(det(&length(&s), &[xs]), "a".repeat(xs.len()));
            assert_eq!(det(&count(&s, 'b'), &[xs]), "b".repeat(xs.matches('b').count()));
            assert_eq!(det(&tail(&s), &[xs]), xs.chars().skip(1).collect::<String>());
            assert_eq!(det(&head(&s), &[xs]), xs.chars().take(1).collect::<String>());
            assert_eq!(det(&drop(&s), &["ab", xs]), xs.chars().skip(2).collect::<String>());
            assert_eq!(det(&exp(&s), &[xs]).len(), 1 << xs.len());
            assert_eq!(det(&reverse_naive(&s), &[xs]), rev);
        }
        assert_eq!(det(&swap2(&s), &["abb"]), "bab");
        assert_eq!(det(&swap2(&s), &["a"]), "a");
        assert_eq!(det(&choose(&s), &["ba", "aa", "bb"]), "bb");
    }

    #[test]
    fn random_append_is_binomial() {
        let d: WordDist = eval_word(&random_append(&ab(), 'a'), &[Word::from("abab")], &ab()).unwrap();
        for (k, c) in [1, 4, 6, 4, 1].into_iter().enumerate() {
            assert_eq!(d.get(&Word::from("a".repeat(k))), ratio(c, 16));
        }
    }

    #[test]
    fn parity_length_hand_unrolled() {
        // abab: parity toggles four times, length grows to four
        let x = [Word::from("abab")];
        let p1: WordDist = eval_simrec(&parity_length(&ab(), 1), &x, &ab()).unwrap();
        let p2: WordDist = eval_simrec(&parity_length(&ab(), 2), &x, &ab()).unwrap();
        assert_eq!(p1, WordDist::point(Word::from("")));
        assert_eq!(p2, WordDist::point(Word::from("aaaa")));
        let p1: WordDist = eval_simrec(&parity_length(&ab(), 1), &[Word::from("aba")], &ab()).unwrap();
        assert_eq!(p1, WordDist::point(Word::from("a")));
    }

    #[test]
    fn single_component_matches_rec() {
        let s = ab();
        for x in s.words_up_to(3) {
            let a: WordDist = eval_word(&simrec_copy(&s), &[x.clone()], &s).unwrap();
            let b: WordDist = eval_word(&copy(&s), &[x], &s).unwrap();
            assert_eq!(a, b);
        }
    }
}
