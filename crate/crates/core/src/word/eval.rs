use std::collections::BTreeMap;

use super::term::{Alphabet, WordError, WordTerm};
use crate::dist::{PseudoDistribution, Word};
use crate::num::Weight;
use crate::oracle::{enumerate, CoinStream, NeedBit, OracleError, Run};
use crate::WordDist;

/// Exact output distribution of `t` on `args`.
///
/// Recursion on notation is evaluated bottom-up over the suffixes of the
/// recurrence argument, so evaluation always terminates.
pub fn eval_word<W: Weight>(
    t: &WordTerm,
    args: &[Word],
    alphabet: &Alphabet,
) -> Result<PseudoDistribution<Word, W>, WordError> {
    prepare(t, args, alphabet)?;
    Ok(eval(t, args))
}

/// Joint distribution of all components of a simultaneous recursion.
pub fn eval_simrec_joint<W: Weight>(
    t: &WordTerm,
    args: &[Word],
    alphabet: &Alphabet,
) -> Result<PseudoDistribution<Vec<Word>, W>, WordError> {
    prepare(t, args, alphabet)?;
    match t {
        WordTerm::SimRec { bases, steps, .. } => Ok(simrec_joint(bases, steps, args)),
        _ => Err(WordError::ArityMismatch {
            path: "root".into(),
            detail: "not a simrec term".into(),
        }),
    }
}

/// Component `index` of a simultaneous recursion.
pub fn eval_simrec<W: Weight>(
    t: &WordTerm,
    args: &[Word],
    alphabet: &Alphabet,
) -> Result<PseudoDistribution<Word, W>, WordError> {
    let WordTerm::SimRec { index, .. } = t else {
        return Err(WordError::ArityMismatch {
            path: "root".into(),
            detail: "not a simrec term".into(),
        });
    };
    Ok(eval_simrec_joint::<W>(t, args, alphabet)?.map_keys(|tuple| tuple[index - 1].clone()))
}

fn prepare(t: &WordTerm, args: &[Word], alphabet: &Alphabet) -> Result<(), WordError> {
    let arity = t.validate(alphabet)?;
    if !arity.admits(args.len()) {
        return Err(WordError::ArityMismatch {
            path: "root".into(),
            detail: format!("term has arity {arity}, given {} arguments", args.len()),
        });
    }
    for a in args {
        alphabet.check_word(a)?;
    }
    Ok(())
}

fn eval<W: Weight>(t: &WordTerm, x: &[Word]) -> PseudoDistribution<Word, W> {
    match t {
        WordTerm::Eps => PseudoDistribution::point(Word::empty()),
        WordTerm::Cons(a) => PseudoDistribution::point(x[0].cons(*a)),
        WordTerm::RandCons(a) => {
            let mut d = PseudoDistribution::empty();
            d.add_mass(x[0].cons(*a), W::half());
            d.add_mass(x[0].clone(), W::half());
            d
        }
        WordTerm::Proj(_, m) => PseudoDistribution::point(x[m - 1].clone()),
        WordTerm::Det(f) => match f.apply(x) {
            Some(w) => PseudoDistribution::point(w),
            None => PseudoDistribution::empty(),
        },
        WordTerm::Comp(f, gs) => {
            let inner: Vec<_> = gs.iter().map(|g| eval::<W>(g, x)).collect();
            product(&inner).bind(|zs| eval(f, zs))
        }
        WordTerm::Case(base, branches) => match x[0].split_first() {
            None => eval(base, &x[1..]),
            Some((a, w)) => {
                let mut buf = x.to_vec();
                buf[0] = w;
                eval(&branches[&a], &buf)
            }
        },
        WordTerm::Rec(base, steps) => {
            let suffixes = suffixes(&x[0]);
            let mut cur = eval::<W>(base, &x[1..]);
            let mut buf = Vec::with_capacity(x.len() + 1);
            buf.push(Word::empty());
            buf.extend_from_slice(x);
            for (a, w) in suffixes.into_iter().rev() {
                buf[1] = w;
                let g = &steps[&a];
                cur = cur.bind(|z| {
                    buf[0] = z.clone();
                    eval(g, &buf)
                });
            }
            cur
        }
        WordTerm::SimRec { index, bases, steps } => {
            simrec_joint::<W>(bases, steps, x).map_keys(|tuple| tuple[index - 1].clone())
        }
    }
}

/// For `w = a₁…aₙ`, the pairs `(aᵢ, aᵢ₊₁…aₙ)` for `i = 1..n`.
fn suffixes(w: &Word) -> Vec<(char, Word)> {
    let chars: Vec<char> = w.chars().collect();
    (0..chars.len())
        .map(|i| (chars[i], Word::from(chars[i + 1..].iter().collect::<String>())))
        .collect()
}

/// Distribution of independent draws, one from each input.
fn product<W: Weight>(ds: &[PseudoDistribution<Word, W>]) -> PseudoDistribution<Vec<Word>, W> {
    let mut acc = PseudoDistribution::point(Vec::with_capacity(ds.len()));
    for d in ds {
        acc = acc.bind(|prefix: &Vec<Word>| {
            d.map_keys(|w| {
                let mut t = prefix.clone();
                t.push(w.clone());
                t
            })
        });
    }
    acc
}

/// Joint semantics: one tuple of component values is carried through the
/// recursion; at each step every component's step function is applied to
/// that same tuple, independently of the others.
fn simrec_joint<W: Weight>(
    bases: &[WordTerm],
    steps: &BTreeMap<(usize, char), WordTerm>,
    x: &[Word],
) -> PseudoDistribution<Vec<Word>, W> {
    let n = bases.len();
    let start: Vec<_> = bases.iter().map(|b| eval::<W>(b, &x[1..])).collect();
    let mut cur = product(&start);
    for (a, w) in suffixes(&x[0]).into_iter().rev() {
        cur = cur.bind(|tuple| {
            let mut buf = tuple.clone();
            buf.push(w.clone());
            buf.extend_from_slice(&x[1..]);
            let next: Vec<_> = (1..=n).map(|j| eval::<W>(&steps[&(j, a)], &buf)).collect();
            product(&next)
        });
    }
    cur
}

type Step = Result<Run<Word>, NeedBit>;

/// Coin-stream semantics: every `RandCons` reads one bit (1 = append).
pub fn run_word(t: &WordTerm, x: &[Word], s: &mut CoinStream<'_>) -> Step {
    Ok(match t {
        WordTerm::Eps => Run::Value(Word::empty()),
        WordTerm::Cons(a) => Run::Value(x[0].cons(*a)),
        WordTerm::RandCons(a) => Run::Value(if s.flip()? { x[0].cons(*a) } else { x[0].clone() }),
        WordTerm::Proj(_, m) => Run::Value(x[m - 1].clone()),
        WordTerm::Det(f) => match f.apply(x) {
            Some(w) => Run::Value(w),
            None => Run::Undefined,
        },
        WordTerm::Comp(f, gs) => {
            let mut zs = Vec::with_capacity(gs.len());
            for g in gs {
                match run_word(g, x, s)? {
                    Run::Value(z) => zs.push(z),
                    Run::Undefined => return Ok(Run::Undefined),
                }
            }
            return run_word(f, &zs, s);
        }
        WordTerm::Case(base, branches) => match x[0].split_first() {
            None => return run_word(base, &x[1..], s),
            Some((a, w)) => {
                let mut buf = x.to_vec();
                buf[0] = w;
                return run_word(&branches[&a], &buf, s);
            }
        },
        WordTerm::Rec(base, steps) => {
            // unfold top-down: f(a·w) needs f(w) first
            let mut cur = match run_word(base, &x[1..], s)? {
                Run::Value(v) => v,
                Run::Undefined => return Ok(Run::Undefined),
            };
            for (a, w) in suffixes(&x[0]).into_iter().rev() {
                let mut buf = vec![cur, w];
                buf.extend_from_slice(&x[1..]);
                cur = match run_word(&steps[&a], &buf, s)? {
                    Run::Value(v) => v,
                    Run::Undefined => return Ok(Run::Undefined),
                };
            }
            Run::Value(cur)
        }
        WordTerm::SimRec { index, bases, steps } => {
            let n = bases.len();
            let mut tuple = Vec::with_capacity(n);
            for b in bases {
                match run_word(b, &x[1..], s)? {
                    Run::Value(v) => tuple.push(v),
                    Run::Undefined => return Ok(Run::Undefined),
                }
            }
            for (a, w) in suffixes(&x[0]).into_iter().rev() {
                let mut buf = tuple.clone();
                buf.push(w);
                buf.extend_from_slice(&x[1..]);
                let mut next = Vec::with_capacity(n);
                for j in 1..=n {
                    match run_word(&steps[&(j, a)], &buf, s)? {
                        Run::Value(v) => next.push(v),
                        Run::Undefined => return Ok(Run::Undefined),
                    }
                }
                tuple = next;
            }
            Run::Value(tuple[index - 1].clone())
        }
    })
}

/// Exhaustive coin-stream distribution of `t` on `args`.
pub fn oracle_word(
    t: &WordTerm,
    args: &[Word],
    alphabet: &Alphabet,
    max_bits: usize,
) -> Result<WordDist, OracleError> {
    prepare(t, args, alphabet).map_err(|e| OracleError::Subject(e.to_string()))?;
    enumerate(max_bits, false, |s| Ok::<_, OracleError>(run_word(t, args, s)))
}
