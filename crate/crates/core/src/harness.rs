//! Repeated-run experiments, oracle verification of the published solutions
//! and report serialization.

use std::fmt;
use std::fs;
use std::io::{self, Read, Write};
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::benchmarks::{BenchmarkName, BenchmarkSpec, Provenance};
use crate::de::Variant;
use crate::error::{Error, Result};
use crate::hybrid::{self, HybridConfig, RunOutcome, SolutionArchive};
use crate::problem::{brute_force_pareto, dominates, feasible_lattice, Problem, Sense};
use crate::topsis::{CriterionSense, DecisionMatrix};

pub const SCHEMA_VERSION: u32 = 1;

/// SplitMix64 finalizer.
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of run `run` under `master`: `splitmix64(master ^ splitmix64(run))`.
pub fn run_seed(master: u64, run: usize) -> u64 {
    splitmix64(master ^ splitmix64(run as u64))
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One full pipeline run from a seed.
pub fn solve_seeded(problem: &Problem, config: &HybridConfig, seed: u64) -> Result<RunOutcome> {
    hybrid::solve(problem, config, &mut rng_for(seed))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionCount {
    pub solution: Vec<i64>,
    /// Objective values in each objective's own sense.
    pub objectives: Vec<f64>,
    pub count: usize,
    pub rate_percent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub problem: BenchmarkName,
    pub variant: Variant,
    pub runs: usize,
    pub master_seed: u64,
    pub seeds: Vec<u64>,
    pub wall_clock_ms: Vec<f64>,
    pub run_notes: Vec<Vec<String>>,
    pub config: HybridConfig,
    /// Sorted by descending count, then by solution vector.
    pub solutions: Vec<SolutionCount>,
}

impl ExperimentReport {
    pub fn count(&self, x: &[i64]) -> usize {
        self.solutions
            .iter()
            .find(|s| s.solution == x)
            .map_or(0, |s| s.count)
    }
}

fn raw_objectives(problem: &Problem, min_sense: &[f64]) -> Vec<f64> {
    problem
        .objectives()
        .iter()
        .zip(min_sense)
        .map(|(o, &v)| match o.sense {
            Sense::Minimize => v,
            Sense::Maximize => -v,
        })
        .collect()
}

/// `100 * count / runs`.
pub fn rate_percent(count: usize, runs: usize) -> f64 {
    100.0 * count as f64 / runs as f64
}

/// Runs the pipeline `config.runs` times with seeds derived from
/// `master_seed` and counts, for every archived solution, how many runs
/// produced it. Runs execute in parallel; the result does not depend on
/// scheduling.
pub fn run_experiment(
    spec: &BenchmarkSpec,
    variant: Variant,
    config: &HybridConfig,
    master_seed: u64,
) -> Result<ExperimentReport> {
    let mut config = config.clone();
    config.de.variant = variant;
    config.validate()?;
    let seeds: Vec<u64> = (0..config.runs).map(|r| run_seed(master_seed, r)).collect();

    let outcomes: Vec<Result<(RunOutcome, f64)>> = seeds
        .par_iter()
        .enumerate()
        .map(|(run, &seed)| {
            let start = Instant::now();
            let out = solve_seeded(&spec.problem, &config, seed).map_err(|e| Error::RunFailed {
                run,
                seed,
                source: Box::new(e),
            })?;
            Ok((out, start.elapsed().as_secs_f64() * 1e3))
        })
        .collect();

    let mut merged = SolutionArchive::new();
    let mut wall_clock_ms = Vec::with_capacity(seeds.len());
    let mut run_notes = Vec::with_capacity(seeds.len());
    for (run, outcome) in outcomes.into_iter().enumerate() {
        let (out, ms) = outcome?;
        merged.absorb(&out.archive, run);
        wall_clock_ms.push(ms);
        run_notes.push(out.notes);
    }

    let mut solutions = Vec::with_capacity(merged.len());
    for e in merged.entries() {
        let check = spec.problem.evaluate_int(&e.x)?;
        if !check.is_feasible() || !spec.problem.contains_int(&e.x) {
            return Err(Error::InvalidProblem(format!(
                "archived solution {:?} is not feasible for {}",
                e.x, spec.name
            )));
        }
        solutions.push(SolutionCount {
            solution: e.x.clone(),
            objectives: raw_objectives(&spec.problem, &check.objectives),
            count: e.count,
            rate_percent: rate_percent(e.count, config.runs),
        });
    }
    solutions.sort_by(|a, b| b.count.cmp(&a.count).then_with(|| a.solution.cmp(&b.solution)));

    Ok(ExperimentReport {
        schema_version: SCHEMA_VERSION,
        problem: spec.name,
        variant,
        runs: config.runs,
        master_seed,
        seeds,
        wall_clock_ms,
        run_notes,
        config,
        solutions,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnownCheck {
    pub x: Vec<i64>,
    pub provenance: Provenance,
    pub feasible: bool,
    pub violation: f64,
    /// Member of the exhaustive Pareto set.
    pub pareto: bool,
    /// Other feasible reference solutions that dominate this one.
    pub dominated_by_known: Vec<Vec<i64>>,
    /// Every feasible lattice point that dominates this one.
    pub dominated_by: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub problem: BenchmarkName,
    pub pareto_set: Vec<Vec<i64>>,
    pub checks: Vec<KnownCheck>,
}

impl VerificationReport {
    pub fn check(&self, x: &[i64]) -> Option<&KnownCheck> {
        self.checks.iter().find(|c| c.x == x)
    }
}

/// Checks every reference solution against exhaustive enumeration.
pub fn verify_known(spec: &BenchmarkSpec) -> Result<VerificationReport> {
    let front = brute_force_pareto(&spec.problem)?;
    let lattice = feasible_lattice(&spec.problem)?;
    let pareto_set: Vec<Vec<i64>> = front.into_iter().map(|p| p.0).collect();

    let mut evals = Vec::with_capacity(spec.known_solutions.len());
    for k in &spec.known_solutions {
        evals.push(spec.problem.evaluate_int(&k.x)?);
    }
    let mut checks = Vec::with_capacity(spec.known_solutions.len());
    for (k, e) in spec.known_solutions.iter().zip(&evals) {
        let feasible = e.is_feasible();
        let mut dominated_by_known = Vec::new();
        let mut dominated_by = Vec::new();
        if feasible {
            for (other, oe) in spec.known_solutions.iter().zip(&evals) {
                if oe.is_feasible() && dominates(&oe.objectives, &e.objectives)? {
                    dominated_by_known.push(other.x.clone());
                }
            }
            for (x, le) in &lattice {
                if dominates(&le.objectives, &e.objectives)? {
                    dominated_by.push(x.clone());
                }
            }
        }
        dominated_by_known.sort();
        checks.push(KnownCheck {
            x: k.x.clone(),
            provenance: k.provenance,
            feasible,
            violation: e.violation,
            pareto: pareto_set.contains(&k.x),
            dominated_by_known,
            dominated_by,
        });
    }
    Ok(VerificationReport {
        problem: spec.name,
        pareto_set,
        checks,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(Error::UnknownName {
                kind: "format",
                name: s.to_string(),
                expected: "csv, json",
            }),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        })
    }
}

pub fn format_solution(x: &[i64]) -> String {
    let parts: Vec<String> = x.iter().map(i64::to_string).collect();
    format!("({})", parts.join(","))
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Io {
        path: "<memory>".into(),
        source: e.into_error(),
    })?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// `solution,count,rate_percent,variant,problem`, one row per solution.
pub fn report_csv(report: &ExperimentReport) -> Result<String> {
    let mut w = csv_writer();
    w.write_record(["solution", "count", "rate_percent", "variant", "problem"])?;
    for s in &report.solutions {
        w.write_record([
            format_solution(&s.solution),
            s.count.to_string(),
            format!("{:.1}", s.rate_percent),
            report.variant.to_string(),
            report.problem.to_string(),
        ])?;
    }
    finish_csv(w)
}

pub fn report_json(report: &ExperimentReport) -> Result<String> {
    Ok(serde_json::to_string_pretty(report)? + "\n")
}

pub fn render_report(report: &ExperimentReport, format: OutputFormat) -> Result<String> {
    match format {
        OutputFormat::Csv => report_csv(report),
        OutputFormat::Json => report_json(report),
    }
}

/// Writes `content` to `destination`, or stdout when `None`.
pub fn write_output(content: &str, destination: Option<&Path>) -> Result<()> {
    match destination {
        Some(path) => fs::write(path, content).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => io::stdout()
            .write_all(content.as_bytes())
            .map_err(|source| Error::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

pub fn emit(report: &ExperimentReport, format: OutputFormat, destination: Option<&Path>) -> Result<()> {
    write_output(&render_report(report, format)?, destination)
}

/// Archive of one run as `solution,<objective names...>` in each
/// objective's own sense.
pub fn archive_csv(problem: &Problem, archive: &SolutionArchive) -> Result<String> {
    let mut w = csv_writer();
    let mut header = vec!["solution".to_string()];
    header.extend(problem.objectives().iter().map(|o| o.name.clone()));
    w.write_record(&header)?;
    for e in archive.entries() {
        let mut row = vec![format_solution(&e.x)];
        row.extend(
            raw_objectives(problem, &e.evaluation.objectives)
                .iter()
                .map(|v| v.to_string()),
        );
        w.write_record(&row)?;
    }
    finish_csv(w)
}

/// Ranks the rows of a CSV decision matrix. The first column labels each
/// alternative, the remaining columns are numeric criteria (cost unless
/// named in `benefit`). Output columns: `alternative,closeness,rank,d_plus,d_minus`
/// in rank order.
pub fn rank_csv<R: Read>(input: R, benefit: &[String], weights: Option<Vec<f64>>) -> Result<String> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
    let headers = rdr.headers()?.clone();
    if headers.len() < 2 {
        return Err(Error::InvalidMatrix(
            "need a label column and at least one criterion".into(),
        ));
    }
    let criteria: Vec<&str> = headers.iter().skip(1).collect();
    for b in benefit {
        if !criteria.contains(&b.as_str()) {
            return Err(Error::InvalidMatrix(format!("unknown criterion '{b}'")));
        }
    }
    let mut labels = Vec::new();
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec?;
        labels.push(rec.get(0).unwrap_or_default().to_string());
        let mut row = Vec::with_capacity(criteria.len());
        for (j, field) in rec.iter().skip(1).enumerate() {
            row.push(field.parse::<f64>().map_err(|_| {
                Error::InvalidMatrix(format!(
                    "row {}: '{field}' in column '{}' is not a number",
                    i + 1,
                    criteria.get(j).copied().unwrap_or("?")
                ))
            })?);
        }
        rows.push(row);
    }
    let senses = criteria
        .iter()
        .map(|c| {
            if benefit.iter().any(|b| b == c) {
                CriterionSense::Benefit
            } else {
                CriterionSense::Cost
            }
        })
        .collect();
    let weights = weights.unwrap_or_else(|| crate::topsis::uniform_weights(criteria.len()));
    let ranking = DecisionMatrix::new(rows, senses, weights)?.rank();

    let mut w = csv_writer();
    w.write_record(["alternative", "closeness", "rank", "d_plus", "d_minus"])?;
    for (pos, &i) in ranking.order.iter().enumerate() {
        w.write_record([
            labels[i].clone(),
            ranking.closeness[i].to_string(),
            (pos + 1).to_string(),
            ranking.d_plus[i].to_string(),
            ranking.d_minus[i].to_string(),
        ])?;
    }
    finish_csv(w)
}
