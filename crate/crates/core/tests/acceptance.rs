//! Acceptance criteria, one line each. Exits non-zero if any fails.

use std::time::Instant;

use probrec::check::{compare_exact, compare_sampled, monte_carlo, Verdict};
use probrec::dsl::TermFile;
use probrec::fixtures::{self, Expect};
use probrec::nat::stdlib::{encode_prob, h_coin};
use probrec::nat::{i2p, i2p_term, oracle_nat, run_nat};
use probrec::num::{format_ratio, ratio};
use probrec::prm::{
    aligned_depth, compile_word_term, decode_left, encode_input, eval_prm, growth_report, oracle_prm, ptm_to_prm, run_prm,
};
use probrec::ptm::{compile_to_term, eval_ptm, mu_bound_for_depth, oracle_ptm, run_ptm, ComputationTree, PtmSpec};
use probrec::tiering::{infer, TierJudgment, TierVerdict};
use probrec::word::{couple_encode, couple_first, couple_second, eval_simrec, library as lib, run_word, tupled_expand};
use probrec::{eval_nat, eval_word, Alphabet, EvalBudget, NatDist, NatTerm, Prob, Weight, Word, WordDist};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn nat_fixture(name: &str) -> NatTerm {
    match fixtures::term(name) {
        Some(TermFile::Nat(t)) => t,
        other => panic!("{name}: {other:?}"),
    }
}

fn expected_nat(v: &serde_json::Value) -> NatDist {
    NatDist::from_json_value(v).expect("expected distribution parses")
}

fn words_upto(symbols: &[char], n: usize) -> Vec<Word> {
    let mut all = vec![Word::empty()];
    let mut level = vec![Word::empty()];
    for _ in 0..n {
        level = level
            .iter()
            .flat_map(|w| symbols.iter().map(move |c| Word::new(format!("{w}{c}"))))
            .collect();
        all.extend(level.iter().cloned());
    }
    all
}

fn machines() -> Vec<(&'static str, PtmSpec)> {
    fixtures::machine_names()
        .into_iter()
        .map(|n| (n, fixtures::machine(n).expect("bundled machine loads")))
        .collect()
}

fn input_words(m: &PtmSpec, n: usize) -> Vec<Word> {
    words_upto(&m.input_symbols().collect::<Vec<_>>(), n)
}

fn halving() -> Outcome {
    let b = EvalBudget::with_mu_bound(10);
    let want = expected_nat(&fixtures::expected("paper-h-mu10").unwrap());
    let d: NatDist = eval_nat(&h_coin(), &[0], &b).map_err(|e| e.to_string())?;
    ensure!(d == want, "μ(coin ⊙ Π²₁) at 0: {d:?}");
    ensure!(d.deficit() == ratio(1, 1024), "deficit {}", format_ratio(&d.deficit()));
    let h = nat_fixture("paper-h");
    for x in 0..=5 {
        let d: NatDist = eval_nat(&h, &[x], &b).map_err(|e| e.to_string())?;
        ensure!(d == want, "paper-h at {x}: {d:?}");
    }
    Ok("masses 1/2^(y+1) for y < 10, deficit 1/1024, at x = 0..5".into())
}

fn shifted() -> Outcome {
    let f = nat_fixture("paper-f");
    for x in [0, 1, 2, 5] {
        let want = expected_nat(&fixtures::expected(&format!("paper-f-x{x}-mu10")).unwrap());
        let d: NatDist = eval_nat(&f, &[x], &EvalBudget::with_mu_bound(10)).map_err(|e| e.to_string())?;
        ensure!(d == want, "x = {x}: {d:?}");
        for y in x..x + 10 {
            ensure!(d.get(&y) == Prob::dyadic((y - x + 1) as u32), "x = {x}, y = {y}");
        }
    }
    Ok("mass 1/2^(y-x+1) on [x, x+10) for x in {0,1,2,5}".into())
}

fn tree_annotations() -> Outcome {
    let m = fixtures::machine("fig1-machine").unwrap();
    let t = ComputationTree::build(&m, &Word::empty(), 2).map_err(|e| e.to_string())?;
    let id = |s: &str| s.parse().unwrap();
    let e = t.node(id("00")).unwrap().config.clone();
    ensure!(m.state_name(e.state) == "E", "node 00 is in {}", m.state_name(e.state));
    ensure!(t.config_prob(&e) == ratio(3, 4), "PC(E) = {}", format_ratio(&t.config_prob(&e)));
    let pt0 = t.pt0(id("10")).map_err(|e| e.to_string())?;
    ensure!(pt0 == ratio(1, 2), "PT0(10) = {}", format_ratio(&pt0));
    let pt1 = t.pt1(id("00")).map_err(|e| e.to_string())?;
    ensure!(pt1 == ratio(3, 4), "PT1(00) = {}", format_ratio(&pt1));
    let annotations = fixtures::expected("fig2-ptc").unwrap();
    let annotations = annotations.as_object().unwrap();
    for (node, want) in annotations {
        let got = t.ptc(id(node)).map_err(|e| e.to_string())?;
        ensure!(got == expected_nat(want), "PTC({node}) = {got:?}");
    }
    let leaves = t.leaves().count();
    ensure!(leaves == 4, "{leaves} leaves");
    let out: WordDist = eval_ptm(&m, &Word::empty(), 2).map_err(|e| e.to_string())?;
    let want = WordDist::from_json_value(&fixtures::expected("fig1-outputs").unwrap()).unwrap();
    ensure!(out == want, "outputs {out:?}");
    Ok(format!("PC(E) = 3/4, PT0(10) = 1/2, PT1(00) = 3/4, {} node annotations", annotations.len()))
}

fn completeness() -> Outcome {
    let depth = 6;
    let b = EvalBudget::with_mu_bound(mu_bound_for_depth(depth));
    let (mut runs, mut partial) = (0, 0);
    for (name, m) in machines() {
        let t = compile_to_term(name, &m);
        for x in input_words(&m, 4) {
            let code = m.input_code(&x).ok_or(format!("{name}: no code for {x:?}"))?;
            let got: NatDist = eval_nat(&t, &[code], &b).map_err(|e| format!("{name}: {e}"))?;
            let want: WordDist = eval_ptm(&m, &x, depth).map_err(|e| format!("{name}: {e}"))?;
            let want = want.map_keys(|o| m.output_code(o).unwrap());
            ensure!(got == want, "{name} on {x:?}: {}", verdict_text(&compare_exact(&got, &want)));
            runs += 1;
            partial += usize::from(want.deficit() > Prob::from_integer(0.into()));
        }
    }
    Ok(format!("{runs} machine/input pairs at depth {depth}, {partial} with divergence"))
}

fn verdict_text(v: &Verdict) -> String {
    serde_json::to_string(v).unwrap()
}

fn fixpoint_vs_oracle() -> Outcome {
    let mut checks = 0;
    for (name, m) in machines() {
        for x in input_words(&m, 2) {
            for d in 0..=14 {
                let got: WordDist = eval_ptm(&m, &x, d).map_err(|e| e.to_string())?;
                let want = oracle_ptm(&m, &x, d).map_err(|e| e.to_string())?;
                ensure!(got == want, "PTM {name} on {x:?} at {d}: {}", verdict_text(&compare_exact(&got, &want)));
                checks += 1;
            }
        }
    }
    let mut programs: Vec<(String, probrec::prm::PrmSpec, Vec<Vec<String>>)> = Vec::new();
    for (name, m) in machines() {
        let inputs = input_words(&m, 2).iter().map(|x| encode_input(&m, x)).collect();
        programs.push((format!("reduction of {name}"), ptm_to_prm(&m), inputs));
    }
    for path in fixtures::names().filter(|p| p.starts_with("programs/")) {
        let stem = path.trim_start_matches("programs/").trim_end_matches(".prm");
        let p = fixtures::program(stem).unwrap();
        let inputs = words_upto(&p.alphabet, 2).into_iter().map(|w| vec![w.into_string()]).collect();
        programs.push((stem.to_string(), p, inputs));
    }
    for (name, p, inputs) in &programs {
        for regs in inputs {
            for d in 0..=14 {
                for out in 0..p.registers {
                    let got: WordDist = eval_prm(p, regs, d, out).map_err(|e| e.to_string())?;
                    let want = oracle_prm(p, regs, d, out).map_err(|e| e.to_string())?;
                    ensure!(got == want, "PRM {name} on {regs:?} at {d}, r{out}: {}", verdict_text(&compare_exact(&got, &want)));
                    checks += 1;
                }
            }
        }
    }
    Ok(format!("{checks} exact comparisons over {} machines and {} programs, depths 0..14", machines().len(), programs.len()))
}

fn i2p_agreement() -> Outcome {
    let qs = [ratio(0, 1), ratio(1, 1), ratio(1, 2), ratio(3, 8), ratio(5, 16)];
    let t = i2p_term();
    let mut worst = Prob::from_integer(0.into());
    for q in &qs {
        let code = encode_prob(q).map_err(|e| e.to_string())?;
        let direct = i2p(q).map_err(|e| e.to_string())?;
        let primitive: NatDist = eval_nat(&NatTerm::I2p, &[code], &EvalBudget::default()).map_err(|e| e.to_string())?;
        ensure!(primitive == direct, "primitive I2P at {q}");
        for bound in 1..=12usize {
            let d: NatDist = eval_nat(&t, &[code], &EvalBudget::with_mu_bound(bound as u64)).map_err(|e| e.to_string())?;
            let tv = d.tv_distance(&direct);
            ensure!(tv <= Prob::dyadic(bound as u32), "q = {q}, B = {bound}: tv {}", format_ratio(&tv));
            // Below 1 these q have at most four binary digits, and past them
            // the mass on 1 is exact. 1 itself is 0.111..., so its mass on 1
            // is 1 - 2^-B.
            let one = Prob::from_integer(1.into());
            let want = if *q == one { one.clone() - Prob::dyadic(bound as u32) } else { q.clone() };
            if bound > 4 || *q == one {
                ensure!(d.get(&1) == want, "q = {q}, B = {bound}: mass on 1 is {}", format_ratio(&d.get(&1)));
            }
            let by_oracle = oracle_nat(&t, &[code], bound as u64, bound + 1).map_err(|e| e.to_string())?;
            ensure!(by_oracle == d, "q = {q}, B = {bound}: evaluator and enumeration differ");
            let scaled = tv / Prob::dyadic(bound as u32);
            if scaled > worst {
                worst = scaled;
            }
        }
    }
    Ok(format!("5 rationals, B = 1..12, largest tv * 2^B = {}", format_ratio(&worst)))
}

fn tier_corpus() -> Outcome {
    let (mut accepted, mut rejected) = (0, 0);
    let corpus = fixtures::tier_corpus();
    for case in &corpus {
        let (s, t) = case.term().ok_or(format!("{} does not parse", case.name))?;
        match (&case.expect, infer(&t, &s, Default::default()).map_err(|e| e.to_string())?) {
            (Expect::Accept, TierVerdict::Typable { judgment }) => {
                let want: TierJudgment = case.judgment.as_deref().unwrap_or_default().parse().map_err(|e| format!("{e}"))?;
                ensure!(judgment == want, "{}: inferred {judgment}, expected {want}", case.name);
                accepted += 1;
            }
            (Expect::Reject, TierVerdict::Untypable { cycle, explanation }) => {
                ensure!(!cycle.is_empty() && !explanation.is_empty(), "{}: no cycle", case.name);
                rejected += 1;
            }
            (_, v) => return Err(format!("{}: {v:?}", case.name)),
        }
    }
    ensure!(accepted >= 10 && rejected >= 5, "{accepted} accepted, {rejected} rejected");
    ensure!(
        corpus.iter().any(|c| c.name == "exp-rejected" && c.expect == Expect::Reject),
        "exp-rejected missing"
    );
    Ok(format!("{accepted} accepted with minimal judgments, {rejected} rejected with cycles"))
}

fn reductions() -> Outcome {
    let depth = 8;
    let mut worst: f64 = 0.0;
    for (name, m) in machines() {
        let p = ptm_to_prm(&m);
        let (mut ptm_max, mut prm_max) = (0, 0);
        for x in input_words(&m, 3) {
            let aligned = aligned_depth(&m, &p, &x, depth, 6 * depth + 10).map_err(|e| e.to_string())?;
            let aligned = aligned.ok_or(format!("{name} on {x:?}: no depth reproduces the output"))?;
            let want: WordDist = eval_ptm(&m, &x, depth).map_err(|e| e.to_string())?;
            let got: WordDist = eval_prm(&p, &encode_input(&m, &x), aligned, 0).map_err(|e| e.to_string())?;
            ensure!(got.map_keys(|w| decode_left(&m, w)) == want, "{name} on {x:?}");
            let profile = probrec::ptm::step_profile(&m, &x, depth).map_err(|e| e.to_string())?;
            ptm_max = ptm_max.max(profile.max_halting.unwrap_or(0));
            prm_max = prm_max.max(aligned);
        }
        let ratio = prm_max as f64 / ptm_max.max(1) as f64;
        ensure!(ratio <= 3.0, "{name}: {prm_max} register-machine steps for {ptm_max} machine steps");
        worst = worst.max(ratio);
    }
    Ok(format!("exact on all machines, inputs up to length 3, worst step ratio {worst:.2}"))
}

fn simultaneous_recursion() -> Outcome {
    use rand_chacha::ChaCha8Rng;
    use rand_core::{Rng, SeedableRng};
    let s = Alphabet::parse("ab").unwrap();
    let systems = [
        ("parity", lib::parity_length(&s, 1)),
        ("length", lib::parity_length(&s, 2)),
        ("coupled 1", lib::coupled_random(&s, 1)),
        ("coupled 2", lib::coupled_random(&s, 2)),
        ("copy", lib::simrec_copy(&s)),
        ("doubling", lib::simrec_exp(&s)),
    ];
    let words = words_upto(s.symbols(), 5);
    for (name, t) in &systems {
        let expanded = tupled_expand(t, &s).map_err(|e| e.to_string())?;
        for w in &words {
            let direct: WordDist = eval_simrec(t, std::slice::from_ref(w), &s).map_err(|e| e.to_string())?;
            let via: WordDist = eval_word(&expanded, std::slice::from_ref(w), &s).map_err(|e| e.to_string())?;
            ensure!(direct == via, "{name} on {w:?}: {}", verdict_text(&compare_exact(&via, &direct)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let word = |rng: &mut ChaCha8Rng| {
        let n = (rng.next_u32() % 12) as usize;
        Word::new((0..n).map(|_| if rng.next_u32() % 2 == 0 { 'a' } else { 'b' }).collect::<String>())
    };
    for _ in 0..1000 {
        let (u, v) = (word(&mut rng), word(&mut rng));
        let m = 1 + rng.next_u32() % 3;
        let t = couple_encode(&u, &v, m).map_err(|e| e.to_string())?;
        ensure!(couple_first(&t, m).ok() == Some(u.clone()) && couple_second(&t, m).ok() == Some(v.clone()), "{u:?}, {v:?}");
        let bound = 2 * u.len() + 2 * v.len() + 2;
        ensure!((bound as u128) <= (t.len() as u128).pow(m), "{u:?}, {v:?}: {bound} > |t|^{m}");
    }
    Ok(format!("{} systems on {} words; 1000 coupled pairs", systems.len(), words.len()))
}

fn growth() -> Outcome {
    let mut exponents = Vec::new();
    for case in fixtures::tier_corpus().into_iter().filter(|c| c.expect == Expect::Accept) {
        let (s, t) = case.term().unwrap();
        let c = compile_word_term(&t, &s, Default::default()).map_err(|e| format!("{}: {e}", case.name))?;
        let r = growth_report(&c, 1..=8, 1 << 20).map_err(|e| format!("{}: {e}", case.name))?;
        ensure!(r.stable, "{}: unstable exponent, {r:?}", case.name);
        // Flat step counts fit an exponent of zero up to rounding.
        let k = if r.fit.k.abs() < 5e-3 { 0.0 } else { r.fit.k };
        exponents.push(format!("{} {k:.2}", case.name));
    }
    Ok(format!("fits (empirical, not a proof): {}", exponents.join(", ")))
}

fn monte_carlo_consistency() -> Outcome {
    const DRAWS: u64 = 100_000;
    let mut lines = Vec::new();
    let mut record = |name: &str, v: Verdict| -> Result<(), String> {
        match v {
            Verdict::WithinTolerance { epsilon, .. } => {
                lines.push(format!("{name} {epsilon:.4}"));
                Ok(())
            }
            v => Err(format!("{name}: {}", verdict_text(&v))),
        }
    };
    for (seed, name, x) in [(1, "paper-h", 0), (2, "paper-f", 2)] {
        let t = nat_fixture(name);
        let exact: NatDist = eval_nat(&t, &[x], &EvalBudget::with_mu_bound(10)).map_err(|e| e.to_string())?;
        let tally = monte_carlo(DRAWS, seed, 16, |s| run_nat(&t, &[x], 10, s)).map_err(|e| e.to_string())?;
        record(name, compare_sampled(&exact, &tally, 3.0))?;
    }
    let m = fixtures::machine("fig1-machine").unwrap();
    let start = m.initial_config(&Word::empty()).unwrap();
    let exact: WordDist = eval_ptm(&m, &Word::empty(), 2).map_err(|e| e.to_string())?;
    let tally = monte_carlo(DRAWS, 3, 2, |s| run_ptm(&m, &start, s)).map_err(|e| e.to_string())?;
    record("fig1-machine", compare_sampled(&exact, &tally, 3.0))?;

    let p = fixtures::program("jrand-choice").unwrap();
    let start = p.initial(&[]).unwrap();
    let exact: WordDist = eval_prm(&p, &[], 10, 1).map_err(|e| e.to_string())?;
    let tally = monte_carlo(DRAWS, 4, 10, |s| run_prm(&p, &start, 1, s)).map_err(|e| e.to_string())?;
    record("jrand-choice", compare_sampled(&exact, &tally, 3.0))?;

    let case = fixtures::tier_corpus().into_iter().find(|c| c.name == "random-subword").unwrap();
    let (s, t) = case.term().unwrap();
    let x = [Word::from("abab")];
    let exact: WordDist = eval_word(&t, &x, &s).map_err(|e| e.to_string())?;
    let tally = monte_carlo(DRAWS, 5, 32, |st| Ok::<_, String>(run_word(&t, &x, st)))?;
    record("random-subword", compare_sampled(&exact, &tally, 3.0))?;
    Ok(format!("10^5 draws each, 3 sigma per outcome; largest deviations: {}", lines.join(", ")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("h halves its mass per output", halving),
        ("shifted f masses", shifted),
        ("computation tree annotations", tree_annotations),
        ("machines compiled to terms", completeness),
        ("evaluators equal coin-path enumeration", fixpoint_vs_oracle),
        ("I2P direct vs constructed", i2p_agreement),
        ("tiering corpus", tier_corpus),
        ("machine to register-machine reduction", reductions),
        ("simultaneous recursion", simultaneous_recursion),
        ("empirical polynomial step growth", growth),
        ("Monte-Carlo consistency", monte_carlo_consistency),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let r = std::panic::catch_unwind(f).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match r {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of 11 criteria failed");
        std::process::exit(1);
    }
}
