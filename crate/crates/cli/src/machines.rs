use std::path::Path;

use probrec::dsl::print_nat;
use probrec::num::format_ratio;
use probrec::prm::{aligned_depth, decode_left, encode_input, eval_prm, max_steps, ptm_to_prm, step_profile};
use probrec::ptm::{compile_to_term, mu_bound_for_depth, pt_prob, ComputationTree, PtmSpec};
use probrec::{eval_nat, AnyDist, EvalBudget, NatDist, Word, WordDist};
use serde_json::json;

use crate::commands::evaluate;
use crate::error::{invalid, CliError, CliResult};
use crate::input;
use crate::report::Format;
use crate::subject::{load_machine, load_program, prm_subject, ptm_subject};
use crate::{Annotation, Output};

pub fn ptm_run(machine: &str, input: &str, depth: usize, check: bool, output: Output) -> CliResult<()> {
    evaluate(ptm_subject(machine, input, depth)?, check.then_some(depth), output)
}

pub fn prm_run(program: &str, inputs: &str, depth: usize, out: usize, check: bool, output: Output) -> CliResult<()> {
    evaluate(prm_subject(program, inputs, depth, out)?, check.then_some(depth), output)
}

pub fn ptm_tree(machine: &str, input: &str, depth: usize, annotate: &[Annotation], format: Format) -> CliResult<()> {
    let spec = load_machine(machine)?;
    let t = ComputationTree::build(&spec, &Word::from(input), depth).map_err(invalid("tree"))?;
    let mut nodes = Vec::new();
    for n in &t.nodes {
        let mut v = json!({
            "node": n.id.to_string(),
            "index": n.id.index(),
            "state": spec.state_name(n.config.state),
            "config": spec.show_config(&n.config),
            "leaf": n.leaf,
        });
        for a in annotate {
            match a {
                Annotation::Pt => v["pt"] = json!(format_ratio(&pt_prob(n.id))),
                Annotation::Ptc => {
                    v["pt0"] = json!(format_ratio(&t.pt0(n.id).map_err(invalid("tree"))?));
                    v["pt1"] = json!(format_ratio(&t.pt1(n.id).map_err(invalid("tree"))?));
                    v["ptc"] = t.ptc(n.id).map_err(invalid("tree"))?.to_json_value();
                }
                Annotation::Config => v["config_prob"] = json!(format_ratio(&t.config_prob(&n.config))),
            }
        }
        nodes.push(v);
    }
    match format {
        Format::Json => {
            let out = json!({ "machine": machine, "input": input, "depth": depth, "nodes": nodes });
            outln!("{}", serde_json::to_string_pretty(&out).expect("json"));
        }
        Format::Text => {
            for v in nodes {
                let id = v["node"].as_str().unwrap_or_default();
                let mut line = format!("{}{id}\t{}", "  ".repeat(id.chars().count().saturating_sub(id.starts_with('ε') as usize)), v["config"].as_str().unwrap_or_default());
                if v["leaf"] == true {
                    line += "\tleaf";
                }
                for key in ["pt", "pt0", "pt1", "config_prob"] {
                    if let Some(s) = v[key].as_str() {
                        line += &format!("\t{key}={s}");
                    }
                }
                outln!("{line}");
            }
        }
    }
    Ok(())
}

fn write_or_print(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Invalid(format!("{}: {e}", p.display()))),
        None => {
            out!("{text}");
            Ok(())
        }
    }
}

pub fn ptm_compile(machine: &str, out: Option<&Path>) -> CliResult<()> {
    let spec = load_machine(machine)?;
    let name = input::stem(machine);
    let t = compile_to_term(&name, &spec);
    let text = format!(
        "# Compiled from {machine}. Arguments and results are word codes;\n# evaluate with --machine {machine}.\n{}\n",
        print_nat(&t)
    );
    write_or_print(out, &text)
}

pub fn prm_from_ptm(machine: &str, out: Option<&Path>) -> CliResult<()> {
    let spec = load_machine(machine)?;
    let text = format!(
        "# Simulates {machine}: registers r0, r1, r2 hold the reversed left tape,\n# the scanned symbol and the right tape.\n{}",
        ptm_to_prm(&spec)
    );
    write_or_print(out, &text)
}

pub fn prm_steps(program: &str, inputs: &str, depth: usize) -> CliResult<()> {
    let (_, spec) = load_program(program)?;
    let inputs = input::word_args(inputs, true);
    let profile = step_profile(&spec, &inputs, depth).map_err(invalid("steps"))?;
    let bound = max_steps(&spec, &inputs, depth).map_err(invalid("steps"))?;
    let out = json!({ "program": program, "inputs": inputs, "profile": profile, "bound": bound });
    outln!("{}", serde_json::to_string_pretty(&out).expect("json"));
    Ok(())
}

/// The machine's output at `depth` computed through its compiled term.
pub fn via_term(name: &str, spec: &PtmSpec, input: &Word, depth: usize) -> CliResult<AnyDist> {
    let x = spec
        .input_code(input)
        .ok_or_else(|| CliError::Invalid("input has no code".into()))?;
    let t = compile_to_term(name, spec);
    let codes: NatDist = eval_nat(&t, &[x], &EvalBudget::with_mu_bound(mu_bound_for_depth(depth))).map_err(invalid("eval"))?;
    Ok(AnyDist::Word(codes.map_keys(|c| spec.output_word(*c))))
}

/// The machine's output through its register-machine simulation, at the
/// smallest register-machine depth that matches; the largest tried depth
/// otherwise.
pub fn via_prm(spec: &PtmSpec, input: &Word, depth: usize) -> CliResult<(AnyDist, usize)> {
    let prm = ptm_to_prm(spec);
    let max = 6 * depth + 10;
    let d = aligned_depth(spec, &prm, input, depth, max).map_err(invalid("reduce"))?.unwrap_or(max);
    let got: WordDist = eval_prm(&prm, &encode_input(spec, input), d, 0).map_err(invalid("eval"))?;
    Ok((AnyDist::Word(got.map_keys(|w| decode_left(spec, w))), d))
}
