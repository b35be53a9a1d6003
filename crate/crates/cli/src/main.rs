use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use randlab_cli::{cap_from_env, run_job, write_outputs, JobKind, Options};

#[derive(Parser)]
#[command(name = "randlab", version, about = "Exact finite-scale randomness-test constructions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the counting bound or Kraft sum of a complexity table
    ValidateModel(CommonArgs),
    /// Enumerate the toy machine into a complexity table
    EnumerateMachine(CommonArgs),
    /// Compare plain and prefix deficiencies along one string
    Profile(CommonArgs),
    /// Build the plain-complexity test functions f_m
    PlainTest(CommonArgs),
    /// Build the prefix-complexity sum test
    Gacs(CommonArgs),
    /// Tails-bounded comparisons and the series delay
    Tails(CommonArgs),
    /// Conidis cover of a sequence of open sets
    Conidis(CommonArgs),
    /// Constructive Fatou bound
    Fatou(CommonArgs),
    /// Slow-convergence cover on Cantor space
    SlowCover(CommonArgs),
    /// Slow-convergence cover on Cantor space times the half-line
    SlowCover2d(CommonArgs),
    /// Graph lifting, epsilon grid and Q extraction
    QPipeline(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Job configuration (TOML)
    #[arg(long)]
    config: PathBuf,
    /// Output directory
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Seed for generated suites; overrides the config
    #[arg(long)]
    seed: Option<u64>,
    /// Largest cylinder depth accepted
    #[arg(long)]
    max_depth: Option<usize>,
    /// Overrides the program length of machine enumerations
    #[arg(long)]
    max_program_length: Option<usize>,
    /// Overrides the step budget of machine enumerations
    #[arg(long)]
    step_budget: Option<u64>,
}

impl Command {
    fn split(self) -> (JobKind, CommonArgs) {
        match self {
            Command::ValidateModel(a) => (JobKind::ValidateModel, a),
            Command::EnumerateMachine(a) => (JobKind::EnumerateMachine, a),
            Command::Profile(a) => (JobKind::Profile, a),
            Command::PlainTest(a) => (JobKind::PlainTest, a),
            Command::Gacs(a) => (JobKind::Gacs, a),
            Command::Tails(a) => (JobKind::Tails, a),
            Command::Conidis(a) => (JobKind::Conidis, a),
            Command::Fatou(a) => (JobKind::Fatou, a),
            Command::SlowCover(a) => (JobKind::SlowCover, a),
            Command::SlowCover2d(a) => (JobKind::SlowCover2d, a),
            Command::QPipeline(a) => (JobKind::QPipeline, a),
        }
    }
}

fn run(kind: JobKind, args: CommonArgs) -> anyhow::Result<bool> {
    let text = std::fs::read_to_string(&args.config)
        .with_context(|| format!("cannot read config {}", args.config.display()))?;
    let base = args.config.parent().map(PathBuf::from).unwrap_or_default();
    let opts = Options {
        seed: args.seed,
        max_depth: args.max_depth,
        max_program_length: args.max_program_length,
        step_budget: args.step_budget,
        cap_bytes: cap_from_env(),
    };
    let out = run_job(kind, &text, &base, &opts).with_context(|| format!("{}", args.config.display()))?;
    write_outputs(&args.out, &out).with_context(|| format!("cannot write to {}", args.out.display()))?;
    print!("{}", out.report.to_text());
    Ok(out.report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = cli.command.split();
    match run(kind, args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("randlab: {e:#}");
            ExitCode::from(2)
        }
    }
}
