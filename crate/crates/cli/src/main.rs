//! `chainplan` command-line front end.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{anyhow, Context, Result};
use chainplan::layout::Layout;
use chainplan::runtime::{counts_from_trace, first_inadmissible};
use chainplan::{
    causal_graph, dtg, extract_message, max_domain_size, operator_count, parse_dimacs, parse_problem,
    predicted_plan_length, reduce, run, schema_count, synthesize, verify_equivalence, write_problem, Assignment,
    CnfFormula, Plan, PlanningProblem, SearchLimits, Status, Variant, Verdict,
};
use clap::{Parser, Subcommand};
use rayon::prelude::*;

/// Reductions from CNF-SAT to planning over chain causal graphs.
#[derive(Parser, Debug)]
#[command(name = "chainplan", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduce a DIMACS formula to a planning problem.
    Reduce {
        #[arg(long, value_parser = parse_variant)]
        variant: Variant,
        #[arg(long)]
        cnf: PathBuf,
        /// Output file; stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a plan and report goal satisfaction, admissibility and change counters.
    Validate {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        plan: PathBuf,
        /// Also write the state trace as TSV.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Build the admissible plan that emits the given assignment.
    Synthesize {
        #[arg(long, value_parser = parse_variant)]
        variant: Variant,
        #[arg(long)]
        cnf: PathBuf,
        /// Bits such as `01`, or a file holding them on one line.
        #[arg(long)]
        assignment: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the message a plan sends through the message variable.
    Decode {
        #[arg(long)]
        problem: PathBuf,
        #[arg(long)]
        plan: PathBuf,
    },
    /// Breadth-first plan search.
    Oracle {
        #[arg(long)]
        problem: PathBuf,
        #[command(flatten)]
        limits: LimitArgs,
        /// Write the plan found, if any.
        #[arg(long)]
        plan_out: Option<PathBuf>,
    },
    /// Compare brute-force satisfiability with plan existence on the reduction.
    Verify {
        /// Variants to check; all three if absent.
        #[arg(long, value_parser = parse_variant)]
        variant: Vec<Variant>,
        #[arg(long, required = true, num_args = 1..)]
        cnf: Vec<PathBuf>,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Graphviz export of the causal graph or a domain transition graph.
    Export {
        #[arg(long)]
        problem: PathBuf,
        /// `causal` or `dtg:<variable>`.
        #[arg(long)]
        dot: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Size of the reduction and the length of its synthesized plans.
    Stats {
        #[arg(long, value_parser = parse_variant)]
        variant: Variant,
        #[arg(long)]
        cnf: PathBuf,
        /// Assignment for the plan length; all zeros if absent. Only K7 plan
        /// lengths depend on it.
        #[arg(long)]
        assignment: Option<String>,
    },
}

#[derive(clap::Args, Debug, Clone)]
struct LimitArgs {
    #[arg(long, env = "CHAINPLAN_MAX_STATES", default_value_t = chainplan::oracle::DEFAULT_MAX_STATES)]
    max_states: usize,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    max_time: Option<f64>,
    #[arg(long)]
    max_plan_length: Option<usize>,
}

impl LimitArgs {
    fn limits(&self) -> SearchLimits {
        SearchLimits {
            max_states: self.max_states,
            max_time: self.max_time.map(Duration::from_secs_f64),
            max_plan_length: self.max_plan_length,
        }
    }
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse()
}

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;

/// Bad input files or arguments; exits with the usage status.
#[derive(Debug)]
struct InputError(String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn input_error(msg: impl Into<String>) -> anyhow::Error {
    InputError(msg.into()).into()
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn load_cnf(path: &Path) -> Result<CnfFormula> {
    parse_dimacs(&read(path)?).map_err(|e| input_error(format!("{}:{e}", path.display())))
}

fn load_problem(path: &Path) -> Result<PlanningProblem> {
    parse_problem(&read(path)?).map_err(|e| input_error(format!("{}:{e}", path.display())))
}

fn load_plan(path: &Path) -> Result<Plan> {
    Plan::parse(&read(path)?).map_err(|e| input_error(format!("{}:{e}", path.display())))
}

fn load_assignment(arg: &str, n: usize) -> Result<Assignment> {
    let sigma: Assignment = match arg.parse() {
        Ok(a) => a,
        Err(_) => {
            let text = read(Path::new(arg))?;
            text.trim().parse().map_err(|e| input_error(format!("{arg}: {e}")))?
        }
    };
    if sigma.len() != n {
        return Err(input_error(format!("assignment has {} bits, formula has {n} variables", sigma.len())));
    }
    Ok(sigma)
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<InputError>().is_some() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
    }
}

fn execute(command: Command) -> Result<u8> {
    match command {
        Command::Reduce { variant, cnf, out } => {
            let f = load_cnf(&cnf)?;
            emit(out.as_deref(), &write_problem(&reduce(&f, variant)))?;
            Ok(0)
        }
        Command::Validate { problem, plan, trace } => validate(&problem, &plan, trace.as_deref()),
        Command::Synthesize { variant, cnf, assignment, out } => {
            let f = load_cnf(&cnf)?;
            let sigma = load_assignment(&assignment, f.num_vars())?;
            let plan = synthesize(&f, &sigma, variant)?;
            emit(out.as_deref(), &plan.to_text())?;
            Ok(0)
        }
        Command::Decode { problem, plan } => {
            let p = load_problem(&problem)?;
            let plan = load_plan(&plan)?;
            println!("{}", extract_message(&p, &plan)?);
            Ok(0)
        }
        Command::Oracle { problem, limits, plan_out } => {
            let p = load_problem(&problem)?;
            let outcome = chainplan::bfs_plan_exists(&p, limits.limits());
            println!("{outcome}");
            Ok(match &outcome.verdict {
                Verdict::Solvable(plan) => {
                    if let Some(path) = plan_out {
                        emit(Some(&path), &plan.to_text())?;
                    }
                    0
                }
                Verdict::Unsolvable => EXIT_FAIL,
                Verdict::LimitExceeded => EXIT_INCONCLUSIVE,
            })
        }
        Command::Verify { variant, cnf, limits } => verify(variant, &cnf, limits.limits()),
        Command::Export { problem, dot, out } => {
            let p = load_problem(&problem)?;
            let text = match dot.as_str() {
                "causal" => causal_graph(&p).to_dot("causal"),
                other => {
                    let name = other
                        .strip_prefix("dtg:")
                        .ok_or_else(|| input_error(format!("--dot expects `causal` or `dtg:<var>`, got `{other}`")))?;
                    let var = p.variable_id(name).ok_or_else(|| input_error(format!("unknown variable `{name}`")))?;
                    dtg(&p, var).to_dot(name)
                }
            };
            emit(out.as_deref(), &text)?;
            Ok(0)
        }
        Command::Stats { variant, cnf, assignment } => {
            let f = load_cnf(&cnf)?;
            let sigma = match assignment {
                Some(a) => load_assignment(&a, f.num_vars())?,
                None => Assignment::new(vec![false; f.num_vars()]),
            };
            let p = reduce(&f, variant);
            println!(
                "variables={} operators={} schemas={} max_domain={} predicted_plan_length={}",
                p.num_variables(),
                operator_count(&f, variant),
                schema_count(&f, variant),
                max_domain_size(&p),
                predicted_plan_length(&f, &sigma, variant)
            );
            Ok(0)
        }
    }
}

fn validate(problem: &Path, plan: &Path, trace_out: Option<&Path>) -> Result<u8> {
    let p = load_problem(problem)?;
    let plan = load_plan(plan)?;
    let trace = match run(&p, &plan) {
        Ok(t) => t,
        Err(e) => {
            println!("SOLVES false");
            println!("INAPPLICABLE {e}");
            return Ok(EXIT_FAIL);
        }
    };
    if let Some(path) = trace_out {
        emit(Some(path), &trace.to_tsv(&p))?;
    }
    let solves = p.is_goal(trace.final_state());
    println!("SOLVES {solves}");
    match Layout::infer(&p) {
        Ok(layout) => {
            let counts = counts_from_trace(&p, &layout, &trace);
            let admissible = first_inadmissible(&layout, &counts);
            println!("ADMISSIBLE {}", admissible.is_none());
            let mut line = String::from("COUNTERS");
            for (name, c) in layout.names().iter().zip(&counts.counts) {
                let _ = write!(line, " {name}={c}");
            }
            println!("{line}");
            match extract_message(&p, &plan) {
                Ok(m) => println!("MESSAGE {m}"),
                Err(e) => println!("MESSAGE none ({e})"),
            }
        }
        Err(_) => println!("ADMISSIBLE n/a"),
    }
    Ok(if solves { 0 } else { EXIT_FAIL })
}

fn verify(variants: Vec<Variant>, files: &[PathBuf], limits: SearchLimits) -> Result<u8> {
    let variants = if variants.is_empty() { Variant::ALL.to_vec() } else { variants };
    let formulas: Vec<(String, CnfFormula)> =
        files.iter().map(|p| Ok((p.display().to_string(), load_cnf(p)?))).collect::<Result<_>>()?;
    let jobs: Vec<(&str, &CnfFormula, Variant)> =
        formulas.iter().flat_map(|(name, f)| variants.iter().map(move |&v| (name.as_str(), f, v))).collect();
    let reports = jobs
        .par_iter()
        .map(|&(name, f, v)| verify_equivalence(f, v, limits).map(|r| (name, v, r)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| anyhow!(e))?;
    let mut code = 0;
    for (name, v, report) in &reports {
        println!("{report} variant={v} cnf={name}");
        code = match report.status {
            Status::Fail => EXIT_FAIL,
            Status::Inconclusive if code == 0 => EXIT_INCONCLUSIVE,
            _ => code,
        };
    }
    Ok(code)
}
