//! `probrec`: evaluate terms, check tiers, run machines and compare
//! evaluators against oracles.

/// `print!` that tolerates a closed stdout, as when piped into `head`.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = write!(std::io::stdout().lock(), $($t)*);
    }};
}

macro_rules! outln {
    ($($t:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

mod commands;
mod error;
mod input;
mod machines;
mod report;
mod subject;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::Format;

#[derive(Parser)]
#[command(name = "probrec", version, about = "Exact distributions of probabilistic recursive functions and machines")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Copy)]
pub struct Output {
    /// Report format.
    #[arg(long, value_enum, default_value = "json")]
    pub out: Format,
    /// Add a decimal rendering of each mass, for display only.
    #[arg(long, value_name = "N")]
    pub approx_decimals: Option<usize>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a term over the naturals.
    Eval {
        /// Term file or fixture name.
        #[arg(long)]
        term: String,
        /// Comma-separated naturals.
        #[arg(long, default_value = "")]
        args: String,
        #[arg(long, default_value_t = 32)]
        mu_bound: u64,
        /// Machine whose compiled functions the term refers to.
        #[arg(long)]
        machine: Option<String>,
        /// Also compare against exhaustive coin-path enumeration.
        #[arg(long)]
        check: bool,
        #[arg(long, default_value_t = 24)]
        max_bits: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluate a word term.
    EvalWord {
        #[arg(long)]
        term: String,
        /// Comma-separated words.
        #[arg(long, default_value = "")]
        args: String,
        #[arg(long)]
        check: bool,
        #[arg(long, default_value_t = 24)]
        max_bits: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Infer the minimal tiering judgment of a word term, or check a given one.
    Tiercheck {
        #[arg(long)]
        term: String,
        /// Judgment to check, like "1,0->0".
        #[arg(long)]
        judgment: Option<String>,
        /// Require case scrutinees to sit at least at the result tier.
        #[arg(long)]
        strict_case: bool,
    },
    /// Probabilistic Turing machines.
    #[command(subcommand)]
    Ptm(PtmCmd),
    /// Probabilistic register machines.
    #[command(subcommand)]
    Prm(PrmCmd),
    /// Compare an evaluator with an independent oracle.
    Oracle {
        #[command(flatten)]
        subject: SubjectArgs,
        #[arg(long, value_enum, default_value = "enumeration")]
        against: Against,
        /// Compare with seeded sampling instead.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 100_000)]
        draws: u64,
        #[arg(long, default_value_t = 3.0)]
        sigmas: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Draw seeded samples.
    Sample {
        #[command(flatten)]
        subject: SubjectArgs,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        draws: u64,
    },
    /// Bundled machines, programs, terms and expected distributions.
    #[command(subcommand)]
    Fixtures(FixturesCmd),
}

#[derive(Subcommand)]
enum PtmCmd {
    /// Output distribution of the runs halting within the depth.
    Run {
        #[arg(long)]
        machine: String,
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long, default_value_t = 12)]
        depth: usize,
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        output: Output,
    },
    /// The computation tree down to the depth.
    Tree {
        #[arg(long)]
        machine: String,
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, value_enum)]
        annotate: Vec<Annotation>,
        #[arg(long, value_enum, default_value = "json")]
        out: Format,
    },
    /// The equivalent term over the naturals, working on word codes.
    Compile {
        #[arg(long)]
        machine: String,
        /// Term file to write; standard output otherwise.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum PrmCmd {
    /// Distribution of an output register.
    Run {
        #[arg(long)]
        program: String,
        /// Comma-separated initial registers; the rest start empty.
        #[arg(long, default_value = "")]
        inputs: String,
        #[arg(long, default_value_t = 20)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        out_reg: usize,
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Longest halting run within the depth.
    Steps {
        #[arg(long)]
        program: String,
        #[arg(long, default_value = "")]
        inputs: String,
        #[arg(long, default_value_t = 20)]
        depth: usize,
    },
    /// The register machine simulating a Turing machine.
    FromPtm {
        #[arg(long)]
        machine: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum FixturesCmd {
    /// Every bundled fixture path.
    List,
    /// Print a fixture, by path or bare name.
    Show { name: String },
}

/// What to evaluate: a term, a machine or a program.
#[derive(Args)]
pub struct SubjectArgs {
    #[arg(long, conflicts_with_all = ["program"])]
    pub term: Option<String>,
    #[arg(long, default_value = "")]
    pub args: String,
    #[arg(long, default_value_t = 32)]
    pub mu_bound: u64,
    #[arg(long, conflicts_with = "program")]
    pub machine: Option<String>,
    #[arg(long, default_value = "")]
    pub input: String,
    #[arg(long)]
    pub program: Option<String>,
    #[arg(long, default_value = "")]
    pub inputs: String,
    #[arg(long, default_value_t = 0)]
    pub out_reg: usize,
    #[arg(long, default_value_t = 12)]
    pub depth: usize,
    /// Coin budget for term subjects; machines use the depth.
    #[arg(long, default_value_t = 24)]
    pub max_bits: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Against {
    /// Exhaustive coin-path enumeration.
    Enumeration,
    /// The machine's compiled term (machines only).
    Compiled,
    /// The machine's register-machine simulation (machines only).
    Prm,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Annotation {
    Pt,
    Ptc,
    Config,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match cli.cmd {
        Cmd::Eval { term, args, mu_bound, machine, check, max_bits, output } => {
            commands::eval(&term, &args, mu_bound, machine.as_deref(), check.then_some(max_bits), output)
        }
        Cmd::EvalWord { term, args, check, max_bits, output } => {
            commands::eval_word(&term, &args, check.then_some(max_bits), output)
        }
        Cmd::Tiercheck { term, judgment, strict_case } => commands::tiercheck(&term, judgment.as_deref(), strict_case),
        Cmd::Ptm(PtmCmd::Run { machine, input, depth, check, output }) => {
            machines::ptm_run(&machine, &input, depth, check, output)
        }
        Cmd::Ptm(PtmCmd::Tree { machine, input, depth, annotate, out }) => {
            machines::ptm_tree(&machine, &input, depth, &annotate, out)
        }
        Cmd::Ptm(PtmCmd::Compile { machine, out }) => machines::ptm_compile(&machine, out.as_deref()),
        Cmd::Prm(PrmCmd::Run { program, inputs, depth, out_reg, check, output }) => {
            machines::prm_run(&program, &inputs, depth, out_reg, check, output)
        }
        Cmd::Prm(PrmCmd::Steps { program, inputs, depth }) => machines::prm_steps(&program, &inputs, depth),
        Cmd::Prm(PrmCmd::FromPtm { machine, out }) => machines::prm_from_ptm(&machine, out.as_deref()),
        Cmd::Oracle { subject, against, seed, draws, sigmas, output } => {
            commands::oracle(&subject, against, seed.map(|s| (s, draws, sigmas)), output)
        }
        Cmd::Sample { subject, seed, draws } => commands::sample(&subject, seed, draws),
        Cmd::Fixtures(FixturesCmd::List) => commands::fixtures_list(),
        Cmd::Fixtures(FixturesCmd::Show { name }) => commands::fixtures_show(&name),
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code() as u8)
        }
    }
}
