//! Anything that denotes a distribution: a term with arguments, a machine on
//! an input, a program on registers.

use probrec::check::{compare_exact, compare_sampled, monte_carlo, Tally, Verdict};
use probrec::dsl::{parse_nat_with, parse_word};
use probrec::nat::{oracle_nat, run_nat, stdlib, NatLib};
use probrec::oracle::{CoinStream, NeedBit, Run};
use probrec::prm::{eval_prm, run_prm, PrmSpec};
use probrec::ptm::{eval_ptm, pt1_fn, run_ptm, sp_fn, PtmSpec};
use probrec::word::{oracle_word, run_word};
use probrec::{eval_nat, eval_word, Alphabet, AnyDist, EvalBudget, NatTerm, Word, WordTerm};
use serde_json::{json, Value};

use crate::error::{invalid, CliError, CliResult};
use crate::input::{self, Source};
use crate::report::digest;

pub enum Subject {
    Nat { term: NatTerm, args: Vec<u64>, mu_bound: u64 },
    Word { term: WordTerm, alphabet: Alphabet, args: Vec<Word> },
    Ptm { spec: PtmSpec, input: Word, depth: usize },
    Prm { spec: PrmSpec, inputs: Vec<String>, depth: usize, out: usize },
}

/// A subject plus what the report says about where it came from.
pub struct Loaded {
    pub subject: Subject,
    pub digest: String,
    pub budget: Value,
}

/// The standard library, plus the functions a compiled machine refers to.
pub fn nat_lib(machine: Option<&str>) -> CliResult<NatLib> {
    let mut lib = stdlib();
    if let Some(m) = machine {
        let spec = load_machine(m)?;
        let name = input::stem(m);
        lib.insert_det(sp_fn(&name, &spec));
        lib.insert_det(pt1_fn(&name, &spec));
    }
    Ok(lib)
}

pub fn load_machine(arg: &str) -> CliResult<PtmSpec> {
    let src = input::read(arg, input::MACHINES)?;
    PtmSpec::from_json(&src.text).map_err(invalid(&src.label))
}

pub fn load_program(arg: &str) -> CliResult<(Source, PrmSpec)> {
    let src = input::read(arg, input::PROGRAMS)?;
    let spec = PrmSpec::parse(&src.text).map_err(invalid(&src.label))?;
    Ok((src, spec))
}

pub fn nat_subject(term: &str, args: &str, mu_bound: u64, machine: Option<&str>) -> CliResult<Loaded> {
    let src = input::read(term, input::TERMS)?;
    let t = parse_nat_with(&src.text, &nat_lib(machine)?).map_err(invalid(&src.label))?;
    let args = input::nat_args(args)?;
    let arity = t.arity().map_err(invalid("term"))?;
    if arity != args.len() {
        return Err(CliError::Invalid(format!("term has arity {arity}, given {} arguments", args.len())));
    }
    Ok(Loaded {
        digest: digest([src.text.as_str(), &format!("{args:?}")]),
        budget: json!({ "mu_bound": mu_bound }),
        subject: Subject::Nat { term: t, args, mu_bound },
    })
}

pub fn word_subject(term: &str, args: &str) -> CliResult<Loaded> {
    let src = input::read(term, input::TERMS)?;
    let (alphabet, t) = parse_word(&src.text).map_err(invalid(&src.label))?;
    let arity = t.validate(&alphabet).map_err(invalid("term"))?;
    let args: Vec<Word> = input::word_args(args, arity.admits(0)).into_iter().map(Word::new).collect();
    Ok(Loaded {
        digest: digest([src.text.as_str(), &format!("{args:?}")]),
        budget: json!({}),
        subject: Subject::Word { term: t, alphabet, args },
    })
}

pub fn ptm_subject(machine: &str, input: &str, depth: usize) -> CliResult<Loaded> {
    let src = input::read(machine, input::MACHINES)?;
    let spec = PtmSpec::from_json(&src.text).map_err(invalid(&src.label))?;
    spec.initial_config(&Word::from(input)).map_err(invalid("input"))?;
    Ok(Loaded {
        digest: digest([src.text.as_str(), input]),
        budget: json!({ "depth": depth }),
        subject: Subject::Ptm { spec, input: Word::from(input), depth },
    })
}

pub fn prm_subject(program: &str, inputs: &str, depth: usize, out: usize) -> CliResult<Loaded> {
    let (src, spec) = load_program(program)?;
    let inputs = input::word_args(inputs, true);
    spec.initial(&inputs).map_err(invalid("inputs"))?;
    if out >= spec.registers {
        return Err(CliError::Invalid(format!("register r{out} does not exist")));
    }
    Ok(Loaded {
        digest: digest([src.text.as_str(), &inputs.join(",")]),
        budget: json!({ "depth": depth, "out_reg": out }),
        subject: Subject::Prm { spec, inputs, depth, out },
    })
}

/// Outcome counts of seeded runs, in either key space.
pub enum AnyTally {
    Nat(Tally<u64>),
    Word(Tally<Word>),
}

impl Subject {
    /// The evaluator's exact distribution.
    pub fn exact(&self) -> CliResult<AnyDist> {
        Ok(match self {
            Subject::Nat { term, args, mu_bound } => {
                AnyDist::Nat(eval_nat(term, args, &EvalBudget::with_mu_bound(*mu_bound)).map_err(invalid("eval"))?)
            }
            Subject::Word { term, alphabet, args } => {
                AnyDist::Word(eval_word(term, args, alphabet).map_err(invalid("eval"))?)
            }
            Subject::Ptm { spec, input, depth } => AnyDist::Word(eval_ptm(spec, input, *depth).map_err(invalid("eval"))?),
            Subject::Prm { spec, inputs, depth, out } => {
                AnyDist::Word(eval_prm(spec, inputs, *depth, *out).map_err(invalid("eval"))?)
            }
        })
    }

    /// Exhaustive coin-path enumeration. Machines read one coin per step, so
    /// their bit budget is the depth.
    pub fn enumerate(&self, max_bits: usize) -> CliResult<AnyDist> {
        Ok(match self {
            Subject::Nat { term, args, mu_bound } => {
                AnyDist::Nat(oracle_nat(term, args, *mu_bound, max_bits).map_err(invalid("oracle"))?)
            }
            Subject::Word { term, alphabet, args } => {
                AnyDist::Word(oracle_word(term, args, alphabet, max_bits).map_err(invalid("oracle"))?)
            }
            Subject::Ptm { spec, input, depth } => {
                AnyDist::Word(probrec::ptm::oracle_ptm(spec, input, *depth).map_err(invalid("oracle"))?)
            }
            Subject::Prm { spec, inputs, depth, out } => {
                AnyDist::Word(probrec::prm::oracle_prm(spec, inputs, *depth, *out).map_err(invalid("oracle"))?)
            }
        })
    }

    pub fn sample(&self, draws: u64, seed: u64, max_bits: usize) -> CliResult<AnyTally> {
        fn ok<K>(r: Result<Run<K>, NeedBit>) -> Result<Result<Run<K>, NeedBit>, CliError> {
            Ok(r)
        }
        Ok(match self {
            Subject::Nat { term, args, mu_bound } => {
                AnyTally::Nat(monte_carlo(draws, seed, max_bits, |s| run_nat(term, args, *mu_bound, s).map_err(invalid("run")))?)
            }
            Subject::Word { term, args, .. } => {
                AnyTally::Word(monte_carlo(draws, seed, max_bits, |s| ok(run_word(term, args, s)))?)
            }
            Subject::Ptm { spec, input, depth } => {
                let start = spec.initial_config(input).map_err(invalid("input"))?;
                AnyTally::Word(monte_carlo(draws, seed, *depth, |s: &mut CoinStream<'_>| {
                    run_ptm(spec, &start, s).map_err(invalid("run"))
                })?)
            }
            Subject::Prm { spec, inputs, depth, out } => {
                let start = spec.initial(inputs).map_err(invalid("inputs"))?;
                AnyTally::Word(monte_carlo(draws, seed, *depth, |s: &mut CoinStream<'_>| {
                    run_prm(spec, &start, *out, s).map_err(invalid("run"))
                })?)
            }
        })
    }
}

pub fn compare(subject: &AnyDist, oracle: &AnyDist) -> CliResult<Verdict> {
    match (subject, oracle) {
        (AnyDist::Nat(a), AnyDist::Nat(b)) => Ok(compare_exact(a, b)),
        (AnyDist::Word(a), AnyDist::Word(b)) => Ok(compare_exact(a, b)),
        _ => Err(CliError::Invalid("incompatible key spaces".into())),
    }
}

pub fn compare_tally(exact: &AnyDist, tally: &AnyTally, sigmas: f64) -> CliResult<Verdict> {
    match (exact, tally) {
        (AnyDist::Nat(d), AnyTally::Nat(t)) => Ok(compare_sampled(d, t, sigmas)),
        (AnyDist::Word(d), AnyTally::Word(t)) => Ok(compare_sampled(d, t, sigmas)),
        _ => Err(CliError::Invalid("incompatible key spaces".into())),
    }
}
