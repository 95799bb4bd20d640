//! Three-stage compromise pipeline.
//!
//! 1. Per-objective ideal values: every objective is minimized and maximized
//!    separately over the feasible region (`f*` and `f-`).
//! 2. Distance functions `d_pis(x)` / `d_nis(x)` to those ideals, and their
//!    extreme values: `x_p` minimizes `d_pis`, `x_n` maximizes `d_nis`.
//! 3. Maximize the satisfaction level `min(mu1(x), mu2(x))` by alternating
//!    differential evolution with tabu search on rounded population members.
//!    Feasible integer points reached by the tabu searches are archived and
//!    the archive is reduced to its non-dominated subset at the end.
//!
//! Constraint violation `G(x)` is appended as an extra minimized objective,
//! while the constraints themselves stay active for the feasibility rules.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::de::{self, DeConfig, Individual, Population, ScalarObjective, Variant};
use crate::error::{Error, Result};
use crate::problem::{feasible_lattice, pareto_filter, Evaluation, Objective, Problem, Sense};
use crate::tabu::{stochastic_round, TabuSearch};

pub const VIOLATION_OBJECTIVE: &str = "constraint_violation";

/// Appends `G(x)` as a minimized objective. Problems without constraints
/// are returned unchanged.
pub fn augment_with_violation(problem: &Problem) -> Problem {
    if problem.constraints().is_empty() {
        return problem.clone();
    }
    let constraints = problem.constraints().to_vec();
    let g = Arc::new(move |x: &[f64]| constraints.iter().map(|c| c.value(x)).fold(0.0_f64, f64::max));
    problem.with_objective(Objective::new(VIOLATION_OBJECTIVE, Sense::Minimize, g))
}

/// Per-objective ideal values (minimization sense) and distance weights.
/// Objectives whose two ideals coincide carry zero weight.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveAnchors {
    pub f_star: Vec<f64>,
    pub f_minus: Vec<f64>,
    pub weights: Vec<f64>,
    pub dropped: Vec<usize>,
}

impl ObjectiveAnchors {
    /// Equal weights over the non-degenerate objectives.
    pub fn new(f_star: Vec<f64>, f_minus: Vec<f64>) -> Result<Self> {
        if f_star.len() != f_minus.len() {
            return Err(Error::DimensionMismatch {
                expected: f_star.len(),
                actual: f_minus.len(),
            });
        }
        if let Some(j) = (0..f_star.len()).find(|&j| f_star[j] > f_minus[j]) {
            return Err(Error::InvalidConfig(format!(
                "objective {j}: positive ideal {} worse than negative ideal {}",
                f_star[j], f_minus[j]
            )));
        }
        let dropped: Vec<usize> = (0..f_star.len()).filter(|&j| f_star[j] == f_minus[j]).collect();
        let kept = f_star.len() - dropped.len();
        let weights = (0..f_star.len())
            .map(|j| {
                if dropped.contains(&j) {
                    0.0
                } else {
                    1.0 / kept as f64
                }
            })
            .collect();
        Ok(Self {
            f_star,
            f_minus,
            weights,
            dropped,
        })
    }

    fn distance(&self, objectives: &[f64], toward_pis: bool) -> Result<f64> {
        if objectives.len() != self.f_star.len() {
            return Err(Error::DimensionMismatch {
                expected: self.f_star.len(),
                actual: objectives.len(),
            });
        }
        let mut sum = 0.0;
        for (j, &w) in self.weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let span = self.f_minus[j] - self.f_star[j];
            if span == 0.0 {
                return Err(Error::DegenerateObjective {
                    index: j,
                    value: self.f_star[j],
                });
            }
            let num = if toward_pis {
                objectives[j] - self.f_star[j]
            } else {
                self.f_minus[j] - objectives[j]
            };
            let t = num / span;
            sum += w * w * t * t;
        }
        Ok(sum.sqrt())
    }

    /// `sqrt(sum_j w_j^2 ((f_j(x) - f*_j) / (f-_j - f*_j))^2)`.
    pub fn d_pis(&self, objectives: &[f64]) -> Result<f64> {
        self.distance(objectives, true)
    }

    /// `sqrt(sum_j w_j^2 ((f-_j - f_j(x)) / (f-_j - f*_j))^2)`.
    pub fn d_nis(&self, objectives: &[f64]) -> Result<f64> {
        self.distance(objectives, false)
    }
}

/// Ideal values plus the distance anchors that shape both membership
/// functions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompromiseAnchors {
    pub ideals: ObjectiveAnchors,
    pub d_pis_star: f64,
    pub d_nis_star: f64,
    pub d_pis_prime: f64,
    pub d_nis_prime: f64,
    pub x_p: Vec<f64>,
    pub x_n: Vec<f64>,
}

impl CompromiseAnchors {
    /// `mu1` has no linear range; it is identically 1.
    pub fn pis_degenerate(&self) -> bool {
        self.d_pis_prime.partial_cmp(&self.d_pis_star) != Some(std::cmp::Ordering::Greater)
    }

    /// `mu2` has no linear range; it is identically 1.
    pub fn nis_degenerate(&self) -> bool {
        self.d_nis_star.partial_cmp(&self.d_nis_prime) != Some(std::cmp::Ordering::Greater)
    }

    /// Membership of a `d_pis` value: 1 at or below `d_pis_star`, 0 above
    /// `d_pis_prime`, linear in between.
    pub fn mu1(&self, d_pis: f64) -> f64 {
        if self.pis_degenerate() || d_pis < self.d_pis_star {
            1.0
        } else if d_pis > self.d_pis_prime {
            0.0
        } else {
            1.0 - (d_pis - self.d_pis_star) / (self.d_pis_prime - self.d_pis_star)
        }
    }

    /// Membership of a `d_nis` value: 1 at or above `d_nis_star`, 0 below
    /// `d_nis_prime`, linear in between.
    pub fn mu2(&self, d_nis: f64) -> f64 {
        if self.nis_degenerate() || d_nis > self.d_nis_star {
            1.0
        } else if d_nis < self.d_nis_prime {
            0.0
        } else {
            1.0 - (self.d_nis_star - d_nis) / (self.d_nis_star - self.d_nis_prime)
        }
    }

    /// `min(mu1, mu2)` at an objective vector.
    pub fn satisfaction(&self, objectives: &[f64]) -> Result<f64> {
        let mu1 = self.mu1(self.ideals.d_pis(objectives)?);
        let mu2 = self.mu2(self.ideals.d_nis(objectives)?);
        Ok(maxmin(mu1, mu2))
    }
}

/// The max-min operator's inner term.
pub fn maxmin(mu1: f64, mu2: f64) -> f64 {
    mu1.min(mu2)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HybridConfig {
    pub de: DeConfig,
    pub ts_iterations: usize,
    pub alternations: usize,
    pub runs: usize,
    pub include_violation_objective: bool,
    /// Replace the stage-1 optimizer runs with exact lattice enumeration.
    pub oracle_anchors: bool,
    pub literal_diversification: bool,
}

impl Default for HybridConfig {
    fn default() -> Self {
        Self {
            de: DeConfig::default(),
            ts_iterations: 1000,
            alternations: 10,
            runs: 20,
            include_violation_objective: true,
            oracle_anchors: false,
            literal_diversification: true,
        }
    }
}

impl HybridConfig {
    pub fn validate(&self) -> Result<()> {
        self.de.validate()?;
        if self.ts_iterations == 0 || self.alternations == 0 || self.runs == 0 {
            return Err(Error::InvalidConfig(
                "ts_iterations, alternations and runs must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Optimizer settings for the anchor subproblems, which always use DEGL.
    fn anchor_de(&self) -> DeConfig {
        DeConfig {
            variant: Variant::Degl,
            ..self.de.clone()
        }
    }
}

/// Archived feasible integer solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArchiveEntry {
    pub x: Vec<i64>,
    pub evaluation: Evaluation,
    /// Number of distinct runs that produced this point.
    pub count: usize,
    pub first_run: usize,
    #[serde(skip)]
    last_run: usize,
}

/// Distinct feasible integer solutions keyed by decision vector.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SolutionArchive {
    entries: BTreeMap<Vec<i64>, ArchiveEntry>,
}

impl SolutionArchive {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records `x` as produced by `run`. Infeasible points are ignored.
    /// Returns whether the point is now in the archive.
    pub fn insert(&mut self, x: &[i64], evaluation: &Evaluation, run: usize) -> bool {
        if !evaluation.is_feasible() {
            return false;
        }
        match self.entries.get_mut(x) {
            Some(e) => {
                if e.last_run != run {
                    e.count += 1;
                    e.last_run = run;
                    e.first_run = e.first_run.min(run);
                }
            }
            None => {
                self.entries.insert(
                    x.to_vec(),
                    ArchiveEntry {
                        x: x.to_vec(),
                        evaluation: evaluation.clone(),
                        count: 1,
                        first_run: run,
                        last_run: run,
                    },
                );
            }
        }
        true
    }

    /// Adds every entry of a single-run archive under `run`.
    pub fn absorb(&mut self, other: &SolutionArchive, run: usize) {
        for e in other.entries.values() {
            self.insert(&e.x, &e.evaluation, run);
        }
    }

    /// Drops every entry dominated by another entry.
    pub fn finalize(&mut self) {
        let points: Vec<(Vec<i64>, Evaluation)> = self
            .entries
            .values()
            .map(|e| (e.x.clone(), e.evaluation.clone()))
            .collect();
        let keep: Vec<Vec<i64>> = pareto_filter(&points).into_iter().map(|p| p.0).collect();
        self.entries.retain(|k, _| keep.binary_search(k).is_ok());
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.entries.contains_key(x)
    }

    pub fn get(&self, x: &[i64]) -> Option<&ArchiveEntry> {
        self.entries.get(x)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in lexicographic order of their decision vectors.
    pub fn entries(&self) -> impl Iterator<Item = &ArchiveEntry> {
        self.entries.values()
    }

    pub fn solutions(&self) -> Vec<Vec<i64>> {
        self.entries.keys().cloned().collect()
    }
}

fn best_member(pop: &Population) -> Result<&Individual> {
    let all: Vec<usize> = (0..pop.len()).collect();
    Ok(&pop.members[de::choose_best(pop, &all)?])
}

/// Ideal values from `2k` optimizer runs, one minimizing and one maximizing
/// each objective under the feasibility rules.
pub fn stage1_anchors<R: Rng + ?Sized>(
    problem_k: &Problem,
    config: &HybridConfig,
    rng: &mut R,
) -> Result<ObjectiveAnchors> {
    let cfg = config.anchor_de();
    let k = problem_k.num_objectives();
    let mut f_star = Vec::with_capacity(k);
    let mut f_minus = Vec::with_capacity(k);
    for j in 0..k {
        let pop = de::run(problem_k, &cfg, &ScalarObjective::minimize(j), rng, None)?;
        f_star.push(best_member(&pop)?.eval.objectives[j]);
        let pop = de::run(problem_k, &cfg, &ScalarObjective::maximize(j), rng, None)?;
        f_minus.push(best_member(&pop)?.eval.objectives[j]);
    }
    // the two runs are independent; keep the pair ordered
    for j in 0..k {
        if f_star[j] > f_minus[j] {
            std::mem::swap(&mut f_star[j], &mut f_minus[j]);
        }
    }
    ObjectiveAnchors::new(f_star, f_minus)
}

/// Exact ideal values over the feasible integer lattice.
pub fn oracle_anchors(problem_k: &Problem) -> Result<ObjectiveAnchors> {
    let lattice = feasible_lattice(problem_k)?;
    if lattice.is_empty() {
        return Err(Error::InvalidProblem(format!(
            "{}: no feasible lattice point",
            problem_k.name()
        )));
    }
    let k = problem_k.num_objectives();
    let mut f_star = vec![f64::INFINITY; k];
    let mut f_minus = vec![f64::NEG_INFINITY; k];
    for (_, e) in &lattice {
        for j in 0..k {
            f_star[j] = f_star[j].min(e.objectives[j]);
            f_minus[j] = f_minus[j].max(e.objectives[j]);
        }
    }
    ObjectiveAnchors::new(f_star, f_minus)
}

/// Minimizes `d_pis` (solution `x_p`) and maximizes `d_nis` (solution
/// `x_n`), then cross-evaluates both distances at the two solutions.
pub fn stage2_anchors<R: Rng + ?Sized>(
    problem_k: &Problem,
    ideals: ObjectiveAnchors,
    config: &HybridConfig,
    rng: &mut R,
) -> Result<CompromiseAnchors> {
    let cfg = config.anchor_de();
    let shared = Arc::new(ideals);

    let pop = de::run(
        problem_k,
        &cfg,
        &ScalarObjective::DistancePis(shared.clone()),
        rng,
        None,
    )?;
    let p = best_member(&pop)?.clone();
    let pop = de::run(
        problem_k,
        &cfg,
        &ScalarObjective::DistanceNis(shared.clone()),
        rng,
        None,
    )?;
    let n = best_member(&pop)?.clone();

    let ideals = Arc::try_unwrap(shared).unwrap_or_else(|a| (*a).clone());
    Ok(CompromiseAnchors {
        d_pis_star: ideals.d_pis(&p.eval.objectives)?,
        d_nis_star: ideals.d_nis(&n.eval.objectives)?,
        d_pis_prime: ideals.d_pis(&n.eval.objectives)?,
        d_nis_prime: ideals.d_nis(&p.eval.objectives)?,
        x_p: p.x,
        x_n: n.x,
        ideals,
    })
}

/// Alternates optimizer phases on `min(mu1, mu2)` with tabu refinement of
/// every rounded population member, archiving each feasible integer point
/// the searches reach. `original_objectives` is the objective count before
/// augmentation; archived evaluations keep only those.
#[allow(clippy::too_many_arguments)]
pub fn stage3_alternate<R: Rng + ?Sized>(
    problem_k: &Problem,
    original_objectives: usize,
    anchors: Arc<CompromiseAnchors>,
    config: &HybridConfig,
    rng: &mut R,
    archive: &mut SolutionArchive,
    run: usize,
) -> Result<()> {
    let objective = ScalarObjective::MaxMin(anchors);
    let ts = TabuSearch::new(problem_k, &objective, config.ts_iterations)
        .literal_diversification(config.literal_diversification);
    let mut population: Option<Population> = None;

    for _ in 0..config.alternations {
        let mut pop = de::run(problem_k, &config.de, &objective, rng, population.take())?;
        for i in 0..pop.len() {
            let mut start = stochastic_round(pop.x(i), rng);
            for (j, v) in start.iter_mut().enumerate() {
                *v = (*v).clamp(problem_k.lower()[j], problem_k.upper()[j]);
            }
            let best = ts.search_with(start, rng, &mut |p, _| {
                if p.eval.is_feasible() {
                    let original = Evaluation {
                        objectives: p.eval.objectives[..original_objectives].to_vec(),
                        violation: p.eval.violation,
                    };
                    archive.insert(&p.x, &original, run);
                }
            })?;
            if best.fitness.better_than(&pop.members[i].fitness) {
                pop.members[i] = Individual {
                    x: best.x.iter().map(|&v| v as f64).collect(),
                    eval: best.eval,
                    fitness: best.fitness,
                };
            }
        }
        population = Some(pop);
    }
    archive.finalize();
    Ok(())
}

/// Outcome of one full pipeline run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunOutcome {
    pub archive: SolutionArchive,
    pub anchors: CompromiseAnchors,
    /// Fallbacks taken (dropped objectives, degenerate memberships).
    pub notes: Vec<String>,
}

/// Runs all three stages once. Deterministic for a given rng state.
pub fn solve<R: Rng + ?Sized>(problem: &Problem, config: &HybridConfig, rng: &mut R) -> Result<RunOutcome> {
    config.validate()?;
    let problem_k = if config.include_violation_objective {
        augment_with_violation(problem)
    } else {
        problem.clone()
    };
    let ideals = if config.oracle_anchors {
        oracle_anchors(&problem_k)?
    } else {
        stage1_anchors(&problem_k, config, rng)?
    };
    let mut notes = Vec::new();
    for &j in &ideals.dropped {
        notes.push(format!(
            "objective '{}' dropped from distances: both ideals equal {}",
            problem_k.objectives()[j].name,
            ideals.f_star[j]
        ));
    }
    let anchors = stage2_anchors(&problem_k, ideals, config, rng)?;
    if anchors.pis_degenerate() {
        notes.push(format!(
            "d_pis anchors degenerate ({} >= {}); mu1 fixed at 1",
            anchors.d_pis_star, anchors.d_pis_prime
        ));
    }
    if anchors.nis_degenerate() {
        notes.push(format!(
            "d_nis anchors degenerate ({} <= {}); mu2 fixed at 1",
            anchors.d_nis_star, anchors.d_nis_prime
        ));
    }
    let anchors = Arc::new(anchors);
    let mut archive = SolutionArchive::new();
    stage3_alternate(
        &problem_k,
        problem.num_objectives(),
        anchors.clone(),
        config,
        rng,
        &mut archive,
        0,
    )?;
    Ok(RunOutcome {
        archive,
        anchors: Arc::try_unwrap(anchors).unwrap_or_else(|a| (*a).clone()),
        notes,
    })
}
