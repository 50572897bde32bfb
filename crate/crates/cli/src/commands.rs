use probrec::check::Verdict;
use probrec::dsl::parse_word;
use probrec::fixtures;
use probrec::tiering::{check_judgment, infer, TierJudgment, TierOptions, TierVerdict};
use probrec::AnyDist;
use serde_json::json;

use crate::error::{invalid, CliError, CliResult};
use crate::input;
use crate::report::{RunReport, Timer};
use crate::subject::{self, compare, compare_tally, AnyTally, Loaded, Subject};
use crate::{Against, Output, SubjectArgs};

/// Evaluates, optionally checks against enumeration, prints the report.
pub fn evaluate(loaded: Loaded, check: Option<usize>, output: Output) -> CliResult<()> {
    let timer = Timer::start();
    let d = loaded.subject.exact()?;
    let verdict = match check {
        Some(bits) => Some(compare(&d, &loaded.subject.enumerate(bits)?)?),
        None => None,
    };
    report(&loaded, &d, verdict, &timer, output)
}

/// Prints the report; a mismatch verdict still prints, then fails.
pub fn report(loaded: &Loaded, d: &AnyDist, verdict: Option<Verdict>, timer: &Timer, output: Output) -> CliResult<()> {
    let mut r = RunReport::new(loaded.digest.clone(), d, loaded.budget.clone(), timer).with_decimals(d, output.approx_decimals);
    r.verdict = verdict;
    r.print(output.out);
    match &r.verdict {
        Some(Verdict::Mismatch { witness, expected, got }) => Err(CliError::Mismatch(format!(
            "at {witness}: expected {expected}, got {got}"
        ))),
        _ => Ok(()),
    }
}

pub fn eval(term: &str, args: &str, mu_bound: u64, machine: Option<&str>, check: Option<usize>, output: Output) -> CliResult<()> {
    evaluate(subject::nat_subject(term, args, mu_bound, machine)?, check, output)
}

pub fn eval_word(term: &str, args: &str, check: Option<usize>, output: Output) -> CliResult<()> {
    evaluate(subject::word_subject(term, args)?, check, output)
}

pub fn tiercheck(term: &str, judgment: Option<&str>, strict_case: bool) -> CliResult<()> {
    let src = input::read(term, input::TERMS)?;
    let (alphabet, t) = parse_word(&src.text).map_err(invalid(&src.label))?;
    let opts = TierOptions {
        case_scrutinee_at_least_result: strict_case,
    };
    let verdict = infer(&t, &alphabet, opts).map_err(invalid("term"))?;
    let mut ok = matches!(verdict, TierVerdict::Typable { .. });
    let mut out = json!({ "term": src.label, "inferred": verdict });
    match &verdict {
        TierVerdict::Typable { judgment } => eprintln!("typable; minimal judgment {judgment}"),
        TierVerdict::Untypable { cycle, explanation } => {
            eprintln!("not typable: {explanation}");
            for e in cycle {
                eprintln!("  {} -> {} ({:+}): {}", e.from, e.to, e.weight, e.reason);
            }
        }
    }
    if let Some(j) = judgment {
        let j: TierJudgment = j.parse().map_err(invalid("--judgment"))?;
        let c = check_judgment(&t, &j, &alphabet, opts).map_err(invalid("--judgment"))?;
        if c.valid {
            eprintln!("judgment {j} holds");
        } else {
            eprintln!("judgment {j} fails: {}", c.violated.as_deref().unwrap_or("no derivation"));
        }
        ok = c.valid;
        out["check"] = json!({ "judgment": j.to_string(), "outcome": c });
    }
    outln!("{}", serde_json::to_string_pretty(&out).expect("json"));
    if ok {
        Ok(())
    } else {
        Err(CliError::Invalid("term rejected by the tier checker".into()))
    }
}

pub fn load(s: &SubjectArgs) -> CliResult<Loaded> {
    match (&s.term, &s.machine, &s.program) {
        (Some(t), m, None) => {
            if is_word_file(&input::read(t, input::TERMS)?.text) {
                subject::word_subject(t, &s.args)
            } else {
                subject::nat_subject(t, &s.args, s.mu_bound, m.as_deref())
            }
        }
        (None, Some(m), None) => subject::ptm_subject(m, &s.input, s.depth),
        (None, None, Some(p)) => subject::prm_subject(p, &s.inputs, s.depth, s.out_reg),
        _ => Err(CliError::Invalid("give one of --term, --machine or --program".into())),
    }
}

fn is_word_file(text: &str) -> bool {
    text.lines().any(|l| l.trim_start().starts_with("alphabet"))
}

pub fn oracle(s: &SubjectArgs, against: Against, sampled: Option<(u64, u64, f64)>, output: Output) -> CliResult<()> {
    let loaded = load(s)?;
    let timer = Timer::start();
    let d = loaded.subject.exact()?;
    if let Some((seed, draws, sigmas)) = sampled {
        let tally = loaded.subject.sample(draws, seed, s.max_bits)?;
        let v = compare_tally(&d, &tally, sigmas)?;
        return report(&loaded, &d, Some(v), &timer, output);
    }
    match (against, &loaded.subject) {
        (Against::Enumeration, sub) => {
            let v = compare(&d, &sub.enumerate(s.max_bits)?)?;
            report(&loaded, &d, Some(v), &timer, output)
        }
        (Against::Compiled, Subject::Ptm { spec, input, depth }) => {
            let name = input::stem(s.machine.as_deref().unwrap_or("machine"));
            let got = crate::machines::via_term(&name, spec, input, *depth)?;
            report(&loaded, &got, Some(compare(&got, &d)?), &timer, output)
        }
        (Against::Prm, Subject::Ptm { spec, input, depth }) => {
            let (got, prm_depth) = crate::machines::via_prm(spec, input, *depth)?;
            let mut l = loaded;
            l.budget["prm_depth"] = json!(prm_depth);
            let v = compare(&got, &d)?;
            report(&l, &got, Some(v), &timer, output)
        }
        _ => Err(CliError::Invalid("--against compiled and prm need a --machine".into())),
    }
}

pub fn sample(s: &SubjectArgs, seed: u64, draws: u64) -> CliResult<()> {
    let loaded = load(s)?;
    let tally = loaded.subject.sample(draws, seed, s.max_bits)?;
    let rows = |counts: Vec<(String, u64)>, undefined: u64| {
        let mut v: Vec<_> = counts
            .into_iter()
            .map(|(k, c)| json!({ "key": k, "count": c, "frequency": c as f64 / draws.max(1) as f64 }))
            .collect();
        v.push(json!({ "key": probrec::check::UNDEFINED, "count": undefined, "frequency": undefined as f64 / draws.max(1) as f64 }));
        v
    };
    use probrec::Key;
    let counts = match &tally {
        AnyTally::Nat(t) => rows(t.counts.iter().map(|(k, c)| (k.encode(), *c)).collect(), t.undefined),
        AnyTally::Word(t) => rows(t.counts.iter().map(|(k, c)| (k.encode(), *c)).collect(), t.undefined),
    };
    let out = json!({
        "command": std::env::args().collect::<Vec<_>>(),
        "input_digest": loaded.digest,
        "seed": seed,
        "draws": draws,
        "budget": loaded.budget,
        "counts": counts,
    });
    outln!("{}", serde_json::to_string_pretty(&out).expect("json"));
    Ok(())
}

pub fn fixtures_list() -> CliResult<()> {
    for n in fixtures::names() {
        outln!("{n}");
    }
    Ok(())
}

pub fn fixtures_show(name: &str) -> CliResult<()> {
    let path = fixtures::find(name).ok_or_else(|| CliError::Invalid(format!("no fixture {name:?}")))?;
    out!("{}", fixtures::load(path).unwrap_or_default());
    Ok(())
}

