use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use intmoo::benchmarks::{benchmark, BenchmarkName};
use intmoo::de::Variant;
use intmoo::harness::{self, OutputFormat};
use intmoo::hybrid::HybridConfig;
use intmoo::{Error, Result};

#[derive(Parser)]
#[command(
    name = "intmoo",
    version,
    about = "Integer multi-objective optimization benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the pipeline once and print the archived solutions.
    Solve(RunArgs),
    /// Run the pipeline repeatedly and report per-solution success rates.
    Experiment(RunArgs),
    /// Check the published solutions against exhaustive enumeration.
    Verify {
        #[arg(long, value_parser = parse::<BenchmarkName>)]
        problem: BenchmarkName,
        #[arg(long, default_value = "json", value_parser = parse::<OutputFormat>)]
        format: OutputFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rank the rows of a CSV decision matrix with TOPSIS.
    Rank {
        /// CSV file: label column followed by numeric criteria.
        input: PathBuf,
        /// Comma-separated criterion names to treat as benefit (default: all cost).
        #[arg(long, value_delimiter = ',')]
        benefit: Vec<String>,
        /// Comma-separated weights, one per criterion (default: uniform).
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_parser = parse::<BenchmarkName>)]
    problem: BenchmarkName,
    #[arg(long, value_parser = parse::<Variant>)]
    variant: Option<Variant>,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value = "csv", value_parser = parse::<OutputFormat>)]
    format: OutputFormat,
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON file overriding any default parameter.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    oracle_anchors: bool,
    #[arg(long)]
    canonical_best: bool,
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> std::result::Result<T, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl RunArgs {
    fn config(&self) -> Result<HybridConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|source| Error::Io {
                    path: path.clone(),
                    source,
                })?;
                serde_json::from_str(&text)?
            }
            None => HybridConfig::default(),
        };
        if let Some(v) = self.variant {
            cfg.de.variant = v;
        }
        if let Some(r) = self.runs {
            cfg.runs = r;
        }
        cfg.oracle_anchors |= self.oracle_anchors;
        cfg.de.canonical_best |= self.canonical_best;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Serialize)]
struct SolveReport<'a> {
    schema_version: u32,
    problem: BenchmarkName,
    seed: u64,
    config: &'a HybridConfig,
    outcome: &'a intmoo::hybrid::RunOutcome,
}

fn json(value: &impl Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve(args) => {
            let cfg = args.config()?;
            let spec = benchmark(args.problem);
            let outcome = harness::solve_seeded(&spec.problem, &cfg, args.seed)?;
            for note in &outcome.notes {
                log::info!("{note}");
            }
            let text = match args.format {
                OutputFormat::Csv => harness::archive_csv(&spec.problem, &outcome.archive)?,
                OutputFormat::Json => json(&SolveReport {
                    schema_version: harness::SCHEMA_VERSION,
                    problem: args.problem,
                    seed: args.seed,
                    config: &cfg,
                    outcome: &outcome,
                })?,
            };
            harness::write_output(&text, args.out.as_deref())
        }
        Command::Experiment(args) => {
            let cfg = args.config()?;
            let spec = benchmark(args.problem);
            let report = harness::run_experiment(&spec, cfg.de.variant, &cfg, args.seed)?;
            harness::emit(&report, args.format, args.out.as_deref())
        }
        Command::Verify { problem, format, out } => {
            let report = harness::verify_known(&benchmark(problem))?;
            let text = match format {
                OutputFormat::Json => json(&report)?,
                OutputFormat::Csv => verify_csv(&report)?,
            };
            harness::write_output(&text, out.as_deref())
        }
        Command::Rank {
            input,
            benefit,
            weights,
            out,
        } => {
            let file = fs::File::open(&input).map_err(|source| Error::Io {
                path: input.clone(),
                source,
            })?;
            let text = harness::rank_csv(file, &benefit, weights)?;
            harness::write_output(&text, out.as_deref())
        }
    }
}

fn verify_csv(report: &harness::VerificationReport) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record([
        "solution",
        "provenance",
        "feasible",
        "violation",
        "pareto",
        "dominated_by_known",
    ])?;
    for c in &report.checks {
        let dominators: Vec<String> = c
            .dominated_by_known
            .iter()
            .map(|x| harness::format_solution(x))
            .collect();
        w.write_record([
            harness::format_solution(&c.x),
            serde_json::to_value(c.provenance)?
                .as_str()
                .unwrap_or_default()
                .to_string(),
            c.feasible.to_string(),
            c.violation.to_string(),
            c.pareto.to_string(),
            dominators.join(" "),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io {
        path: Path::new("<memory>").to_path_buf(),
        source: e.into_error(),
    })?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
