//! Tier inference and checking for word terms.
//!
//! Every argument and result position of every subterm occurrence gets a
//! tier variable. The typing rules become difference constraints
//! `x_u − x_v ≥ c`: equalities are a pair of 0-weight constraints, the
//! recursion premise `m > k` is `x_m − x_k ≥ 1`, and every variable is at
//! least a distinguished zero variable. The constraints are satisfiable over
//! ℕ iff the graph with an edge `v → u` of weight `c` per constraint has no
//! positive cycle; the longest-path distances from the zero variable are
//! then the pointwise-minimal solution.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::word::{Alphabet, WordError, WordTerm};

/// `W_{a₁} × … × W_{aₙ} → W_r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TierJudgment {
    pub args: Vec<u32>,
    pub result: u32,
}

impl TierJudgment {
    pub fn new(args: Vec<u32>, result: u32) -> Self {
        TierJudgment { args, result }
    }

    /// All tiers raised by `by`.
    pub fn shifted(&self, by: u32) -> Self {
        TierJudgment {
            args: self.args.iter().map(|a| a + by).collect(),
            result: self.result + by,
        }
    }
}

impl fmt::Display for TierJudgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<String> = self.args.iter().map(u32::to_string).collect();
        write!(f, "{}->{}", args.join(","), self.result)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("judgment must look like \"1,0->0\": {0}")]
pub struct JudgmentParseError(String);

impl FromStr for TierJudgment {
    type Err = JudgmentParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || JudgmentParseError(s.to_string());
        let (lhs, rhs) = s.split_once("->").ok_or_else(err)?;
        let result = rhs.trim().parse().map_err(|_| err())?;
        let lhs = lhs.trim();
        let args = if lhs.is_empty() {
            Vec::new()
        } else {
            lhs.split(',')
                .map(|a| a.trim().parse().map_err(|_| err()))
                .collect::<Result<_, _>>()?
        };
        Ok(TierJudgment { args, result })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TierOptions {
    /// Require the case scrutinee's tier to be at least the result tier.
    /// The printed rule relates them in no way; off by default.
    pub case_scrutinee_at_least_result: bool,
}

pub type Var = usize;

/// `x_hi − x_lo ≥ weight`, justified by `reason`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Constraint {
    pub hi: Var,
    pub lo: Var,
    pub weight: i64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TierConstraintSet {
    /// Human-readable name of every variable; variable 0 is the zero tier.
    pub labels: Vec<String>,
    pub args: Vec<Var>,
    pub result: Var,
    pub constraints: Vec<Constraint>,
}

impl TierConstraintSet {
    fn fresh(&mut self, label: String) -> Var {
        self.labels.push(label);
        let v = self.labels.len() - 1;
        self.constraints.push(Constraint {
            hi: v,
            lo: ZERO,
            weight: 0,
            reason: "tiers are natural numbers".into(),
        });
        v
    }

    fn ge(&mut self, hi: Var, lo: Var, weight: i64, reason: String) {
        self.constraints.push(Constraint { hi, lo, weight, reason });
    }

    fn eq(&mut self, a: Var, b: Var, reason: String) {
        self.ge(a, b, 0, reason.clone());
        self.ge(b, a, 0, reason);
    }

    pub fn equalities(&self) -> usize {
        self.constraints.iter().filter(|c| c.weight == 0 && c.lo != ZERO).count() / 2
    }

    pub fn strict(&self) -> impl Iterator<Item = &Constraint> {
        self.constraints.iter().filter(|c| c.weight > 0)
    }
}

const ZERO: Var = 0;

/// Builds the constraints for `t` used at `arity` arguments.
pub fn collect_constraints(t: &WordTerm, arity: usize, opts: TierOptions) -> TierConstraintSet {
    let mut cs = TierConstraintSet {
        labels: vec!["tier 0".into()],
        args: Vec::new(),
        result: 0,
        constraints: Vec::new(),
    };
    let args: Vec<Var> = (1..=arity).map(|i| cs.fresh(format!("argument {i}"))).collect();
    let res = cs.fresh("result".into());
    cs.args = args.clone();
    cs.result = res;
    walk(t, &args, res, "root", opts, &mut cs);
    cs
}

fn walk(t: &WordTerm, args: &[Var], res: Var, path: &str, opts: TierOptions, cs: &mut TierConstraintSet) {
    match t {
        WordTerm::Eps => {
            if args.len() == 1 {
                cs.eq(args[0], res, format!("{path}: ε ▷ W_k → W_k"));
            }
        }
        WordTerm::Cons(a) => cs.eq(args[0], res, format!("{path}: c_{a} ▷ W_k → W_k")),
        WordTerm::RandCons(a) => cs.eq(args[0], res, format!("{path}: r_{a} ▷ W_k → W_k")),
        WordTerm::Proj(n, m) => cs.eq(res, args[m - 1], format!("{path}: Π^{n}_{m} returns argument {m}'s tier")),
        WordTerm::Det(f) => {
            let (sig, r) = f.signature();
            for (i, (&v, &s)) in args.iter().zip(sig).enumerate() {
                let d = s as i64 - r as i64;
                let why = format!("{path}: declared signature of {} (argument {})", f.name(), i + 1);
                cs.ge(v, res, d, why.clone());
                cs.ge(res, v, -d, why);
            }
        }
        WordTerm::Comp(f, gs) => {
            let mids: Vec<Var> = (1..=gs.len())
                .map(|i| cs.fresh(format!("{path}/comp.g{i}: result")))
                .collect();
            for (i, (g, &m)) in gs.iter().zip(&mids).enumerate() {
                walk(g, args, m, &format!("{path}/comp.g{}", i + 1), opts, cs);
            }
            walk(f, &mids, res, &format!("{path}/comp.f"), opts, cs);
        }
        WordTerm::Case(base, branches) => {
            if opts.case_scrutinee_at_least_result {
                cs.ge(args[0], res, 0, format!("{path}: case scrutinee tier ≥ result tier (strict option)"));
            }
            walk(base, &args[1..], res, &format!("{path}/case.ε"), opts, cs);
            for (a, g) in branches {
                walk(g, args, res, &format!("{path}/case.{a}"), opts, cs);
            }
        }
        WordTerm::Rec(base, steps) => {
            let m = args[0];
            cs.ge(m, res, 1, format!("{path}: rec premise m > k"));
            walk(base, &args[1..], res, &format!("{path}/rec.ε"), opts, cs);
            let mut inner = vec![res];
            inner.extend_from_slice(args);
            for (a, g) in steps {
                walk(g, &inner, res, &format!("{path}/rec.{a}"), opts, cs);
            }
        }
        WordTerm::SimRec { bases, steps, .. } => {
            let m = args[0];
            cs.ge(m, res, 1, format!("{path}: simrec premise m > k"));
            for (j, b) in bases.iter().enumerate() {
                walk(b, &args[1..], res, &format!("{path}/simrec.ε{}", j + 1), opts, cs);
            }
            let mut inner = vec![res; bases.len()];
            inner.extend_from_slice(args);
            for ((j, a), g) in steps {
                walk(g, &inner, res, &format!("{path}/simrec.{j}.{a}"), opts, cs);
            }
        }
    }
}

/// Outcome of solving a constraint set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum TierVerdict {
    Typable { judgment: TierJudgment },
    Untypable { cycle: Vec<CycleEdge>, explanation: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleEdge {
    pub from: String,
    pub to: String,
    pub weight: i64,
    pub reason: String,
}

/// Minimal solution or a positive cycle.
pub fn solve_tiers(cs: &TierConstraintSet) -> TierVerdict {
    match longest_paths(cs) {
        Ok(dist) => TierVerdict::Typable {
            judgment: TierJudgment {
                args: cs.args.iter().map(|&a| dist[a] as u32).collect(),
                result: dist[cs.result] as u32,
            },
        },
        Err(cycle) => {
            let edges: Vec<CycleEdge> = cycle
                .iter()
                .map(|&i| {
                    let c = &cs.constraints[i];
                    CycleEdge {
                        from: cs.labels[c.lo].clone(),
                        to: cs.labels[c.hi].clone(),
                        weight: c.weight,
                        reason: c.reason.clone(),
                    }
                })
                .collect();
            let total: i64 = edges.iter().map(|e| e.weight).sum();
            let mut explanation = format!(
                "the constraints force a tier to exceed itself by {total} along this cycle:"
            );
            for e in &edges {
                explanation.push_str(&format!("\n  tier({}) ≥ tier({}) + {}  [{}]", e.to, e.from, e.weight, e.reason));
            }
            TierVerdict::Untypable {
                cycle: edges,
                explanation,
            }
        }
    }
}

/// Bellman–Ford for longest paths from the zero variable. On failure returns
/// the constraint indices along a positive cycle, in path order.
fn longest_paths(cs: &TierConstraintSet) -> Result<Vec<i64>, Vec<usize>> {
    let n = cs.labels.len();
    let mut dist = vec![i64::MIN; n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    dist[ZERO] = 0;
    let mut last = None;
    for _ in 0..n {
        last = None;
        for (i, c) in cs.constraints.iter().enumerate() {
            if dist[c.lo] == i64::MIN {
                continue;
            }
            let cand = dist[c.lo] + c.weight;
            if cand > dist[c.hi] {
                dist[c.hi] = cand;
                pred[c.hi] = Some(i);
                last = Some(c.hi);
            }
        }
        if last.is_none() {
            return Ok(dist);
        }
    }
    // still relaxing after n rounds: walk back into the cycle
    let mut v = last.expect("relaxed in the final round");
    for _ in 0..n {
        v = cs.constraints[pred[v].expect("relaxed vertex has a predecessor")].lo;
    }
    let start = v;
    let mut cycle = Vec::new();
    loop {
        let e = pred[v].expect("cycle vertex has a predecessor");
        cycle.push(e);
        v = cs.constraints[e].lo;
        if v == start {
            break;
        }
    }
    cycle.reverse();
    Err(cycle)
}

/// Minimal judgment for `t` at its smallest admissible arity, or a cycle.
pub fn infer(t: &WordTerm, alphabet: &Alphabet, opts: TierOptions) -> Result<TierVerdict, WordError> {
    let arity = t.validate(alphabet)?.min();
    Ok(solve_tiers(&collect_constraints(t, arity, opts)))
}

/// Result of checking a given judgment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub valid: bool,
    /// The first violated premise, when invalid.
    pub violated: Option<String>,
    pub cycle: Vec<CycleEdge>,
}

/// Decides whether `j` extends to a derivation for `t`.
pub fn check_judgment(
    t: &WordTerm,
    j: &TierJudgment,
    alphabet: &Alphabet,
    opts: TierOptions,
) -> Result<CheckOutcome, WordError> {
    let arity = t.validate(alphabet)?;
    if !arity.admits(j.args.len()) {
        return Err(WordError::ArityMismatch {
            path: "root".into(),
            detail: format!("judgment has {} arguments, term arity {arity}", j.args.len()),
        });
    }
    let mut cs = collect_constraints(t, j.args.len(), opts);
    let pins: Vec<(Var, u32, String)> = cs
        .args
        .iter()
        .zip(&j.args)
        .enumerate()
        .map(|(i, (&v, &k))| (v, k, format!("given: argument {} at W_{k}", i + 1)))
        .chain([(cs.result, j.result, format!("given: result at W_{}", j.result))])
        .collect();
    for (v, k, why) in pins {
        cs.ge(v, ZERO, k as i64, why.clone());
        cs.ge(ZERO, v, -(k as i64), why);
    }
    Ok(match solve_tiers(&cs) {
        TierVerdict::Typable { .. } => CheckOutcome {
            valid: true,
            violated: None,
            cycle: Vec::new(),
        },
        TierVerdict::Untypable { cycle, .. } => CheckOutcome {
            valid: false,
            violated: cycle
                .iter()
                .find(|e| e.weight > 0 && !e.reason.starts_with("given"))
                .or_else(|| cycle.iter().find(|e| !e.reason.starts_with("given")))
                .map(|e| e.reason.clone()),
            cycle,
        },
    })
}
