use super::*;
use crate::dist::Word;
use crate::fixtures;
use crate::num::ratio;
use crate::ptm::{eval_ptm, step_profile as ptm_profile};
use crate::{Prob, WordDist};

fn prog(s: &str) -> PrmSpec {
    PrmSpec::parse(s).unwrap()
}

fn strs(ws: &[&str]) -> Vec<String> {
    ws.iter().map(|s| s.to_string()).collect()
}

#[test]
fn instruction_semantics() {
    let p = prog("alphabet ab\ncons a r0 r1\n");
    let c = p.initial(&strs(&["b", ""])).unwrap();
    let d = p.step(&c).unwrap();
    let next = PrmConfig { regs: strs(&["b", "ab"]), pc: 2 };
    assert_eq!(d.get(&next), ratio(1, 1));

    let p = prog("alphabet ab\neps r0 r0\neps r0 r0\njrand 7\neps r0 r0\neps r0 r0\neps r0 r0\neps r0 r0\n");
    let c = PrmConfig { regs: strs(&[""]), pc: 3 };
    let d = p.step(&c).unwrap();
    assert_eq!(d.get(&PrmConfig { pc: 7, ..c.clone() }), ratio(1, 2));
    assert_eq!(d.get(&PrmConfig { pc: 4, ..c.clone() }), ratio(1, 2));

    let p = prog("alphabet ab\njump r0 -> 3 3\neps r0 r0\n");
    let [a, _] = p.successors(&p.initial(&strs(&[""])).unwrap()).unwrap();
    assert_eq!(a, PrmConfig { regs: strs(&[""]), pc: 2 });
    let [a, _] = p.successors(&p.initial(&strs(&["ba"])).unwrap()).unwrap();
    assert_eq!(a, PrmConfig { regs: strs(&["a"]), pc: 3 });
    assert!(matches!(p.successors(&a), Err(PrmError::FinalConfiguration(3))));
}

#[test]
fn eps_copies_and_pred_mismatch_is_identity() {
    let p = prog("alphabet ab\neps r0 r1\npred a r0 r2\npred b r0 r0\n");
    let c = p.initial(&strs(&["ab"])).unwrap();
    let c = p.successors(&c).unwrap()[0].clone();
    assert_eq!(c.regs, strs(&["ab", "ab", ""]));
    let c = p.successors(&c).unwrap()[0].clone();
    assert_eq!(c.regs, strs(&["ab", "ab", "b"]));
    let c = p.successors(&c).unwrap()[0].clone();
    assert_eq!(c.regs, strs(&["ab", "ab", "b"]));
}

#[test]
fn small_programs() {
    let p = prog("alphabet ab\ncons a r0 r0\n");
    let d: WordDist = eval_prm(&p, &strs(&["b"]), 5, 0).unwrap();
    assert_eq!(d, WordDist::point(Word::from("ab")));
    assert_eq!(max_steps(&p, &strs(&["b"]), 5).unwrap(), StepBound::Halts(1));

    let p = prog("alphabet ab\njrand 5\ncons b r0 r0\ncons a r1 r1\njump r1 -> 6 6\ncons a r0 r0\n");
    let d: WordDist = eval_prm(&p, &strs(&[""]), 5, 0).unwrap();
    let half = ratio(1, 2);
    assert_eq!(d, WordDist::from_entries([(Word::from("a"), half.clone()), (Word::from("b"), half)]).unwrap());
    assert_eq!(max_steps(&p, &strs(&[""]), 5).unwrap(), StepBound::Halts(4));

    let spin = prog("alphabet a\njrand 1\n");
    assert_eq!(max_steps(&spin, &[], 6).unwrap(), StepBound::Unbounded(6));
}

#[test]
fn parse_errors_and_round_trip() {
    assert!(matches!(PrmSpec::parse("cons a r0 r0"), Err(PrmError::Parse { .. })));
    assert!(matches!(
        PrmSpec::parse("alphabet ab\ncons a r0\n"),
        Err(PrmError::Parse { line: 2, .. })
    ));
    assert!(matches!(PrmSpec::parse("alphabet ab\njrand 9\n"), Err(PrmError::Spec(_))));
    assert!(matches!(PrmSpec::parse("alphabet ab\njump r0 -> 1\n"), Err(PrmError::Spec(_))));
    let p = prog("alphabet ab  # comment\nregisters 4\njump r1 -> 2 3\npred b r3 r0\n");
    assert_eq!(p.registers, 4);
    assert_eq!(PrmSpec::parse(&p.to_string()).unwrap(), p);
}

#[test]
fn fixpoint_matches_path_enumeration() {
    for name in fixtures::machine_names() {
        let m = fixtures::machine(name).unwrap();
        let p = ptm_to_prm(&m);
        for input in ["", "a", "ab"] {
            let Ok(_) = m.initial_config(&Word::from(input)) else { continue };
            let regs = encode_input(&m, &Word::from(input));
            for d in 0..12 {
                let got: WordDist = eval_prm(&p, &regs, d, 0).unwrap();
                assert_eq!(got, oracle_prm(&p, &regs, d, 0).unwrap(), "{name} {input:?} {d}");
            }
        }
    }
}

fn inputs(m: &crate::ptm::PtmSpec, n: usize) -> Vec<Word> {
    let sym: Vec<char> = m.input_symbols().collect();
    let mut out = vec![Word::empty()];
    let mut layer = vec![Word::empty()];
    for _ in 0..n {
        layer = layer.iter().flat_map(|w| sym.iter().map(move |c| Word::new(format!("{}{c}", w.as_str())))).collect();
        out.extend(layer.iter().cloned());
    }
    out
}

#[test]
fn reduction_preserves_outputs_with_small_step_ratio() {
    for name in fixtures::machine_names() {
        let m = fixtures::machine(name).unwrap();
        let p = ptm_to_prm(&m);
        assert_eq!(p.registers, 3);
        let (mut ptm_max, mut prm_max) = (0, 0);
        for x in inputs(&m, 3) {
            let d = 8;
            let aligned = aligned_depth(&m, &p, &x, d, 6 * d + 10).unwrap();
            let aligned = aligned.unwrap_or_else(|| panic!("{name} {x:?}: no PRM depth matches"));
            ptm_max = ptm_max.max(ptm_profile(&m, &x, d).unwrap().max_halting.unwrap_or(0));
            prm_max = prm_max.max(aligned);
            let want: WordDist = eval_ptm(&m, &x, d).unwrap();
            let far: WordDist = eval_prm(&p, &encode_input(&m, &x), 6 * d + 10, 0).unwrap();
            assert!(want.leq(&far.map_keys(|w| decode_left(&m, w))), "{name} {x:?}");
        }
        assert!(prm_max <= 3 * ptm_max.max(1), "{name}: {prm_max} PRM vs {ptm_max} PTM steps");
    }
}

#[test]
fn coin_writer_reduction() {
    let m = fixtures::machine("coin-writer").unwrap();
    let p = ptm_to_prm(&m);
    let d: WordDist = eval_prm(&p, &encode_input(&m, &Word::from("1")), 10, 0).unwrap();
    let half: Prob = ratio(1, 2);
    assert_eq!(d, WordDist::from_entries([(Word::from("0"), half.clone()), (Word::from("1"), half)]).unwrap());
}

mod compiled {
    use super::*;
    use crate::tiering::TierOptions;
    use crate::word::{eval_word, library as lib, tupled_expand, Alphabet, DetWordFn, WordTerm};

    fn ab() -> Alphabet {
        Alphabet::parse("ab").unwrap()
    }

    fn tuples(sigma: &Alphabet, arity: usize, len: usize) -> Vec<Vec<Word>> {
        let words = sigma.words_up_to(len);
        let mut out = vec![Vec::new()];
        for _ in 0..arity {
            out = out
                .iter()
                .flat_map(|p: &Vec<Word>| {
                    words.iter().map(move |w| {
                        let mut p = p.clone();
                        p.push(w.clone());
                        p
                    })
                })
                .collect();
        }
        out
    }

    fn agrees(name: &str, t: &WordTerm, sigma: &Alphabet, len: usize) {
        let c = compile_word_term(t, sigma, TierOptions::default()).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(!c.program.program.iter().any(|i| matches!(i, Instr::Pred { .. })));
        let plain = Alphabet::new(sigma.symbols().iter().copied().filter(|c| !crate::word::is_tag(*c))).unwrap();
        for args in tuples(&plain, c.arity, len) {
            let want: WordDist = eval_word(t, &args, sigma).unwrap();
            let got: WordDist = c.eval(&args, 1 << 20).unwrap();
            assert_eq!(got, want, "{name} on {args:?}");
        }
    }

    fn corpus(s: &Alphabet) -> Vec<(&'static str, WordTerm)> {
        vec![
            ("copy", lib::copy(s)),
            ("tail", lib::tail(s)),
            ("reverse", lib::reverse(s)),
            ("length", lib::length(s)),
            ("count", lib::count(s, 'b')),
            ("head", lib::head(s)),
            ("swap2", lib::swap2(s)),
            ("random-append", lib::random_append(s, 'a')),
            ("random-subword", lib::random_subword(s)),
            ("parity", lib::parity_length(s, 1)),
            ("coupled", lib::coupled_random(s, 2)),
            ("simrec-copy", lib::simrec_copy(s)),
            ("rand-cons", WordTerm::RandCons('a')),
        ]
    }

    #[test]
    fn unary_terms_agree_on_all_short_words() {
        let s = ab();
        for (name, t) in corpus(&s) {
            agrees(name, &t, &s, 5);
        }
    }

    #[test]
    fn binary_and_ternary_terms_agree() {
        let s = ab();
        agrees("concat", &lib::concat(&s), &s, 4);
        agrees("drop", &lib::drop(&s), &s, 4);
        agrees("choose", &lib::choose(&s), &s, 2);
    }

    #[test]
    fn tupled_expansions_compile_with_native_coding() {
        let s = ab();
        for (name, t) in [("parity", lib::parity_length(&s, 2)), ("coupled", lib::coupled_random(&s, 1))] {
            let e = tupled_expand(&t, &s).unwrap();
            agrees(name, &e, &s, 4);
        }
    }

    #[test]
    fn untiered_and_opaque_terms_are_refused() {
        let s = ab();
        let err = compile_word_term(&lib::exp(&s), &s, TierOptions::default()).unwrap_err();
        assert!(matches!(err, CompileError::NotTiered(_)));
        let f = DetWordFn::new("mystery", vec![0], 0, |w| Some(w[0].clone()));
        let err = compile_word_term(&WordTerm::Det(f), &s, TierOptions::default()).unwrap_err();
        assert!(matches!(err, CompileError::Unsupported(_)));
    }

    #[test]
    fn step_growth_is_polynomial_and_stable() {
        let s = ab();
        for (name, t) in [("reverse", lib::reverse(&s)), ("length", lib::length(&s)), ("concat", lib::concat(&s))] {
            let c = compile_word_term(&t, &s, TierOptions::default()).unwrap();
            let r = growth_report(&c, 1..=8, 1 << 20).unwrap();
            assert!(r.monotone && r.stable, "{name}: {r:?}");
            assert!(r.fit.k < 3.5, "{name}: {r:?}");
        }
    }

    #[test]
    fn power_fit_recovers_exact_powers() {
        let pts: Vec<(usize, usize)> = (1..=8).map(|n| (n, 3 * n * n)).collect();
        let f = fit_power(&pts).unwrap();
        assert!((f.k - 2.0).abs() < 1e-9 && (f.c - 3.0).abs() < 1e-9);
        assert!(fit_power(&[(2, 5)]).is_none());
    }
}
