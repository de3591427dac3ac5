mod cmd;
mod util;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::util::DomainError;

/// Placeholder strings, tableau circuits and limited-witness deciders.
#[derive(Parser, Debug)]
#[command(name = "forge", version)]
struct Cli {
    /// Print one JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Turing machine utilities.
    #[command(subcommand)]
    Tm(TmCommand),
    /// Compile a machine run on a placeholder string into a circuit.
    Compile(CompileArgs),
    /// Brute-force a circuit; exit 10 if satisfiable, 20 if not.
    Solve(SolveArgs),
    /// Decide membership; exit 10 for members, 20 otherwise.
    Decide(DecideArgs),
    /// Witness splitting or padding of an instance manifest.
    Transform(TransformArgs),
    /// Witness-factor / exponent trade-off table.
    Tradeoff(TradeoffArgs),
    /// Encode a problem instance as a placeholder string.
    #[command(subcommand)]
    Encode(EncodeCommand),
    /// k-clique by one of three routes; exit 10 if found, 20 if not.
    Clique(CliqueArgs),
    /// Cross-module oracle suites.
    Selftest(SelftestArgs),
}

#[derive(Subcommand, Debug)]
enum TmCommand {
    /// Run a machine for at most `--bound` steps.
    Run {
        /// Machine file or builtin name.
        machine: String,
        /// Input string, or a file holding it.
        input: String,
        #[arg(long)]
        bound: u64,
        /// Print every configuration.
        #[arg(long)]
        trace: bool,
    },
}

#[derive(Args, Debug)]
struct CompileArgs {
    /// Machine file or builtin name.
    machine: String,
    #[arg(long)]
    input: String,
    /// Number of leading placeholders to expose as circuit inputs.
    #[arg(long, default_value_t = 0)]
    expose: usize,
    #[arg(long)]
    bound: usize,
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
    /// Write the text format instead of the binary one.
    #[arg(long)]
    text: bool,
    /// Skip constant folding (full tableau).
    #[arg(long)]
    raw: bool,
}

#[derive(Args, Debug)]
struct SolveArgs {
    circuit: PathBuf,
    /// Allow more inputs than `⌈log₂ m⌉`.
    #[arg(long)]
    lenient: bool,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Via {
    Circuits,
    Bruteforce,
}

#[derive(Args, Debug)]
struct DecideArgs {
    manifest: PathBuf,
    input: String,
    #[arg(long, value_enum, default_value = "circuits")]
    via: Via,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("kind").required(true))]
struct TransformArgs {
    manifest: PathBuf,
    /// Padding function, as `f=<expr>`.
    #[arg(long, group = "kind")]
    pad: Option<String>,
    /// Witness split, as `w=<expr>,w'=<expr>`.
    #[arg(long, group = "kind")]
    translate: Option<String>,
    /// Also decide this string against the derived instance (padded first
    /// under `--pad`).
    #[arg(long)]
    input: Option<String>,
    /// Write the derived manifest here.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TradeoffArgs {
    /// Base exponent, `1 ≤ α < 2`; fractions like `3/2` are exact.
    #[arg(long)]
    alpha: String,
    #[arg(long)]
    kmax: u32,
    /// Also report the least k reaching exponent ratio `1 + ε`.
    #[arg(long)]
    epsilon: Option<f64>,
    /// Print the per-step speed-up schedule as well.
    #[arg(long)]
    schedule: bool,
}

#[derive(Subcommand, Debug)]
enum EncodeCommand {
    /// DIMACS CNF to `p^v` plus clauses.
    Sat {
        cnf: PathBuf,
        /// Write a manifest (and the generated verifier beside it).
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// DIMACS graph to `p^{k⌈log₂ v⌉}` plus the graph.
    Clique {
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CliqueVia {
    Pipeline,
    Gadget,
    Subsets,
}

#[derive(Args, Debug)]
struct CliqueArgs {
    graph: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long, value_enum, default_value = "pipeline")]
    via: CliqueVia,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

#[derive(Args, Debug)]
struct SelftestArgs {
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

/// What a command produced: an exit status plus both renderings.
pub struct Outcome {
    pub code: u8,
    pub text: String,
    pub json: serde_json::Value,
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    match cli.command {
        Command::Tm(TmCommand::Run {
            machine,
            input,
            bound,
            trace,
        }) => cmd::tm_run(&machine, &input, bound, trace),
        Command::Compile(a) => cmd::compile(
            &a.machine,
            &a.input,
            a.expose,
            a.bound,
            a.raw,
            a.output.as_deref(),
            a.text,
        ),
        Command::Solve(a) => cmd::solve(&a.circuit, a.lenient, a.jobs),
        Command::Decide(a) => cmd::decide(
            &a.manifest,
            &a.input,
            matches!(a.via, Via::Circuits),
            a.jobs,
        ),
        Command::Transform(a) => cmd::transform(
            &a.manifest,
            a.pad.as_deref(),
            a.translate.as_deref(),
            a.input.as_deref(),
            a.output.as_deref(),
        ),
        Command::Tradeoff(a) => cmd::tradeoff(&a.alpha, a.kmax, a.epsilon, a.schedule),
        Command::Encode(EncodeCommand::Sat { cnf, output }) => {
            cmd::encode_sat(&cnf, output.as_deref())
        }
        Command::Encode(EncodeCommand::Clique { graph, k, output }) => {
            cmd::encode_clique(&graph, k, output.as_deref())
        }
        Command::Clique(a) => {
            let via = match a.via {
                CliqueVia::Pipeline => "pipeline",
                CliqueVia::Gadget => "gadget",
                CliqueVia::Subsets => "subsets",
            };
            cmd::clique(&a.graph, a.k, via, a.jobs)
        }
        Command::Selftest(a) => cmd::selftest(a.seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let json = cli.json;
    match run(cli) {
        Ok(out) => {
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&out.json).expect("values serialize")
                );
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code)
        }
        Err(e) => {
            match e.downcast_ref::<DomainError>() {
                Some(d) => eprintln!("error: {d}"),
                None => eprintln!("error: {e:#}"),
            }
            ExitCode::from(1)
        }
    }
}
