//! Command-line front end.
//!
//! Exit status: 0 for TRUE / accept / full agreement, 1 for FALSE / reject /
//! any disagreement, 2 for INCONCLUSIVE, 3 for usage or input errors, 4 when
//! lasso exploration hits the state limit.

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::acceptance::{
    fuzz_compare, lasso_accepts_with_limit, oracle_eval, FuzzBounds, DEFAULT_STATE_LIMIT,
};
use crate::automaton::Automaton;
use crate::events::{LassoTrace, TraceReader};
use crate::formula::{parse, temporal_depth, to_nnf, Formula};
use crate::monitor::{Monitor, Verdict};

pub const EXIT_INPUT_ERROR: i32 = 3;
pub const EXIT_RESOURCE_LIMIT: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "ltlfo",
    version,
    about = "Compile, monitor and check first-order LTL properties of event traces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the automaton's states, or emit them as DOT
    Compile {
        #[arg(long)]
        formula: PathBuf,
        /// Emit Graphviz DOT instead of the state listing
        #[arg(long)]
        dot: bool,
        /// Print state count, temporal depth and variable count
        #[arg(long)]
        stats: bool,
    },
    /// Monitor a JSON Lines trace, printing one verdict per message
    Monitor {
        #[arg(long)]
        formula: PathBuf,
        #[arg(long)]
        trace: PathBuf,
    },
    /// Decide acceptance of a lasso trace with the automaton
    Accept {
        #[arg(long)]
        formula: PathBuf,
        #[arg(long)]
        lasso: PathBuf,
        /// Maximum number of explored product states
        #[arg(long, default_value_t = DEFAULT_STATE_LIMIT)]
        state_limit: usize,
    },
    /// Evaluate a lasso trace with the reference semantics
    Oracle {
        #[arg(long)]
        formula: PathBuf,
        #[arg(long)]
        lasso: PathBuf,
    },
    /// Compare automaton and reference semantics on random cases
    Fuzz(FuzzArgs),
}

#[derive(Debug, Args)]
pub struct FuzzArgs {
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub count: usize,
    /// Maximum temporal depth of generated formulas
    #[arg(long, default_value_t = 3)]
    pub max_depth: usize,
    /// Maximum number of quantifiers per formula
    #[arg(long, default_value_t = 2)]
    pub max_quant: usize,
    /// Number of distinct data values
    #[arg(long, default_value_t = 3)]
    pub alphabet: usize,
    #[arg(long, default_value_t = 4)]
    pub max_prefix: usize,
    #[arg(long, default_value_t = 3)]
    pub max_loop: usize,
    #[arg(long, default_value_t = DEFAULT_STATE_LIMIT)]
    pub state_limit: usize,
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

/// Reads a formula file: one formula, lines starting with `#` ignored.
pub fn read_formula(path: &Path) -> Result<Formula, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let body: Vec<&str> = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('#'))
        .collect();
    parse(&body.join("\n")).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_lasso(path: &Path) -> Result<LassoTrace, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    LassoTrace::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn compile(out: &mut dyn Write, formula: &Path, dot: bool, stats: bool) -> Result<i32, Failure> {
    let phi = to_nnf(&read_formula(formula)?);
    let a = Automaton::build(&phi)?;
    if dot {
        write!(out, "{}", a.to_dot())?;
    } else {
        for s in a.states() {
            let mut flags = Vec::new();
            if s == a.initial_state() {
                flags.push("initial");
            }
            if a.is_accepting(s) {
                flags.push("accepting");
            }
            let flags = if flags.is_empty() {
                "-".to_string()
            } else {
                flags.join(",")
            };
            writeln!(out, "{}\t{flags}\t{}", s.0, a.label(s))?;
        }
    }
    if stats {
        writeln!(out, "states\t{}", a.state_count())?;
        writeln!(out, "temporal-depth\t{}", temporal_depth(&phi))?;
        writeln!(out, "variables\t{}", a.variables().len())?;
    }
    Ok(0)
}

fn monitor(out: &mut dyn Write, formula: &Path, trace: &Path) -> Result<i32, Failure> {
    let mut m = Monitor::new(&read_formula(formula)?)?;
    let file = File::open(trace).map_err(|e| format!("{}: {e}", trace.display()))?;
    for (index, msg) in TraceReader::new(BufReader::new(file)).enumerate() {
        let msg = msg.map_err(|e| format!("{}: {e}", trace.display()))?;
        let verdict = m.step(&msg);
        writeln!(out, "{index}\t{verdict}")?;
    }
    let verdict = m.verdict();
    writeln!(out, "RESULT {verdict}")?;
    Ok(verdict.exit_code())
}

fn accept(
    out: &mut dyn Write,
    err: &mut dyn Write,
    formula: &Path,
    lasso: &Path,
    limit: usize,
) -> Result<i32, Failure> {
    let a = Automaton::build(&to_nnf(&read_formula(formula)?))?;
    let t = read_lasso(lasso)?;
    match lasso_accepts_with_limit(&a, &t, limit) {
        Ok(outcome) => {
            let verdict = if outcome.accepted { "ACCEPT" } else { "REJECT" };
            writeln!(out, "RESULT {verdict}")?;
            Ok(i32::from(!outcome.accepted))
        }
        Err(e) => {
            writeln!(out, "RESULT LIMIT")?;
            writeln!(err, "error: {e}; raise --state-limit")?;
            Ok(EXIT_RESOURCE_LIMIT)
        }
    }
}

fn oracle(out: &mut dyn Write, formula: &Path, lasso: &Path) -> Result<i32, Failure> {
    let phi = read_formula(formula)?;
    let t = read_lasso(lasso)?;
    let holds = oracle_eval(&phi, &t, 0)?;
    let verdict = if holds { Verdict::True } else { Verdict::False };
    writeln!(out, "RESULT {verdict}")?;
    Ok(verdict.exit_code())
}

fn fuzz(out: &mut dyn Write, err: &mut dyn Write, args: &FuzzArgs) -> Result<i32, Failure> {
    if args.alphabet == 0 || args.max_loop == 0 {
        return Err(Failure("--alphabet and --max-loop must be positive".into()));
    }
    let bounds = FuzzBounds {
        max_depth: args.max_depth,
        max_quant: args.max_quant,
        alphabet: args.alphabet,
        max_prefix: args.max_prefix,
        max_loop: args.max_loop,
        state_limit: args.state_limit,
        ..FuzzBounds::default()
    };
    let report = fuzz_compare(args.seed, args.count, &bounds);
    write!(out, "{report}")?;
    writeln!(err, "elapsed {:.3}s", report.elapsed.as_secs_f64())?;
    Ok(i32::from(!report.all_agree()))
}

/// Runs a parsed command line, writing results to `out` and diagnostics to
/// `err`; returns the process exit status.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Compile {
            formula,
            dot,
            stats,
        } => compile(out, formula, *dot, *stats),
        Command::Monitor { formula, trace } => monitor(out, formula, trace),
        Command::Accept {
            formula,
            lasso,
            state_limit,
        } => accept(out, err, formula, lasso, *state_limit),
        Command::Oracle { formula, lasso } => oracle(out, formula, lasso),
        Command::Fuzz(args) => fuzz(out, err, args),
    };
    match result {
        Ok(code) => code,
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT_ERROR
        }
    }
}
