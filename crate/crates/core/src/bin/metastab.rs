use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use metastab::commands::{self, AnalysisConfig, DEFAULT_HORIZON, DEFAULT_RESOLUTION};
use metastab::numeric::DEFAULT_TOLERANCE;
use metastab::{par, Epsilon};

/// Metastability and uniform-rate analysis for real sequences, function
/// families and a toy continuous logic.
#[derive(Parser)]
#[command(name = "metastab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Witnesses and Cauchy indices for each member of a family.
    Analyze(Opts),
    /// Certify a uniform rate for a family, or refute it.
    Certify(Opts),
    /// Defeat a constant bound with the family's adversary or by search.
    Refute(Opts),
    /// Least uniform rate E* for each (epsilon, sampling).
    Synth(Opts),
    /// The g0, F, g1, F, ... instance on a finite discrete point set.
    Prop23(Opts),
    /// Rate analysis of a sentence sequence modulo a theory.
    Logic(Opts),
    /// Write a sampling prefix as JSON.
    GenSampling(Opts),
}

#[derive(Args)]
struct Opts {
    #[arg(long, default_value_t = DEFAULT_HORIZON)]
    horizon: usize,
    /// Repeatable; `p/q`, integer or decimal.
    #[arg(long = "epsilon", default_values_t = vec!["1/2".parse::<Epsilon>().unwrap()])]
    epsilons: Vec<Epsilon>,
    /// Repeatable; pairs[:L] | intervals:w[:L] | straddle:c[:L] | random:L:seed[:k] | @file.json
    #[arg(long = "sampling", default_values_t = vec!["pairs".to_string()])]
    samplings: Vec<String>,
    /// monotone01 | alternating[:P] | cesaro:<expr> | expr:<e;e> | const:<v,v> | @file.csv | @file
    #[arg(long)]
    family: Option<String>,
    /// const:N | maxeta0plus1 | expr:<text> | @file.json
    #[arg(long)]
    rate: Option<String>,
    /// Constant bound to refute.
    #[arg(long)]
    bound: Option<u64>,
    /// auto | adversary | search
    #[arg(long)]
    strategy: Option<String>,
    /// Number of points for prop23.
    #[arg(long)]
    points: Option<usize>,
    /// Theory: `;`-separated formulas or @file.
    #[arg(long)]
    theory: Option<String>,
    /// Sentences: template:<formula>, `;`-separated formulas, or @file.
    #[arg(long)]
    sentences: Option<String>,
    /// Comma-separated atom names (inferred when absent).
    #[arg(long, value_delimiter = ',')]
    atoms: Option<Vec<String>>,
    #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
    grid_resolution: u32,
    /// Absolute tolerance for comparisons on trace data.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    /// Also search for a refuting sampling of this length (analyze).
    #[arg(long)]
    refute_length: Option<usize>,
    /// Output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (0 = all cores). Does not affect report content.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Leave the timing field out of the report.
    #[arg(long)]
    no_timing: bool,
}

impl Opts {
    fn config(&self) -> AnalysisConfig {
        AnalysisConfig {
            horizon: self.horizon,
            epsilons: self.epsilons.clone(),
            samplings: self.samplings.clone(),
            family: self.family.clone(),
            rate: self.rate.clone(),
            bound: self.bound,
            strategy: self.strategy.clone(),
            points: self.points,
            theory: self.theory.clone(),
            sentences: self.sentences.clone(),
            atoms: self.atoms.clone(),
            grid_resolution: self.grid_resolution,
            tolerance: self.tolerance,
            refute_length: self.refute_length,
        }
    }
}

fn run(cli: Cli) -> metastab::Result<i32> {
    let (opts, cmd): (&Opts, fn(&AnalysisConfig) -> metastab::Result<metastab::report::Report>) = match &cli.command {
        Command::Analyze(o) => (o, commands::cmd_analyze),
        Command::Certify(o) => (o, commands::cmd_certify),
        Command::Refute(o) => (o, commands::cmd_refute),
        Command::Synth(o) => (o, commands::cmd_synth),
        Command::Prop23(o) => (o, commands::cmd_prop23),
        Command::Logic(o) => (o, commands::cmd_logic),
        Command::GenSampling(o) => {
            let text = commands::cmd_gen_sampling(&o.config(), o.out.as_ref())?;
            if o.out.is_none() {
                print!("{text}");
            }
            return Ok(0);
        }
    };
    let config = opts.config();
    let report = par::with_threads(opts.threads, || cmd(&config))?;
    match &opts.out {
        Some(path) => report.write(path, !opts.no_timing)?,
        None if opts.no_timing => print!("{}", report.canonical_json()),
        None => print!("{}", report.to_json()),
    }
    Ok(report.exit_code)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
