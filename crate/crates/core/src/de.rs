//! Differential evolution over the continuous relaxation of the box.
//!
//! Three donor rules are available: `rand1` (`X_r1 + F (X_r2 - X_r3)`),
//! `best` (`X_r1 + F (X_r2 - X_gbest)`, the printed form; the textbook
//! `X_gbest + F (X_r1 - X_r2)` is behind `canonical_best`) and `degl`, which
//! blends a ring-neighborhood donor with a population-wide donor. Best
//! individuals are picked with TOPSIS over (fitness, violation); survivor
//! selection uses the feasibility rules of [`Fitness::better_than`].

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hybrid::{CompromiseAnchors, ObjectiveAnchors};
use crate::problem::{Evaluation, Fitness, Problem};
use crate::topsis;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Rand1,
    Best,
    #[default]
    Degl,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Rand1, Variant::Best, Variant::Degl];

    pub fn as_str(&self) -> &'static str {
        match self {
            Variant::Rand1 => "rand1",
            Variant::Best => "best",
            Variant::Degl => "degl",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rand1" => Ok(Variant::Rand1),
            "best" => Ok(Variant::Best),
            "degl" => Ok(Variant::Degl),
            _ => Err(Error::UnknownName {
                kind: "variant",
                name: s.to_string(),
                expected: "rand1, best, degl",
            }),
        }
    }
}

/// Optimizer parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DeConfig {
    pub population_size: usize,
    pub max_iterations: usize,
    pub crossover_rate: f64,
    pub scale_factor: f64,
    pub alpha: f64,
    pub beta: f64,
    pub neighborhood_k: usize,
    pub variant: Variant,
    pub canonical_best: bool,
}

impl Default for DeConfig {
    fn default() -> Self {
        Self {
            population_size: 40,
            max_iterations: 100,
            crossover_rate: 0.9,
            scale_factor: 0.8,
            alpha: 0.8,
            beta: 0.8,
            neighborhood_k: 2,
            variant: Variant::Degl,
            canonical_best: false,
        }
    }
}

impl DeConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if self.population_size < 4 {
            return bad(format!("population_size {} < 4", self.population_size));
        }
        if self.max_iterations == 0 {
            return bad("max_iterations must be positive".into());
        }
        if self.neighborhood_k == 0 || 2 * self.neighborhood_k + 1 > self.population_size {
            return bad(format!(
                "neighborhood_k {} needs 1 <= k and 2k+1 <= population_size {}",
                self.neighborhood_k, self.population_size
            ));
        }
        if !(0.0..=1.0).contains(&self.crossover_rate) {
            return bad(format!("crossover_rate {} outside [0, 1]", self.crossover_rate));
        }
        for (name, v) in [
            ("scale_factor", self.scale_factor),
            ("alpha", self.alpha),
            ("beta", self.beta),
        ] {
            if !v.is_finite() {
                return bad(format!("{name} must be finite"));
            }
        }
        if !(0.4..=1.0).contains(&self.scale_factor) {
            log::warn!(
                "scale_factor {} outside the usual [0.4, 1] range",
                self.scale_factor
            );
        }
        Ok(())
    }
}

/// Scalarization used as fitness by one optimizer run.
#[derive(Debug, Clone)]
pub enum ScalarObjective {
    /// One objective of the evaluation, minimized (or maximized).
    Single { index: usize, maximize: bool },
    /// Minimize the distance to the positive ideal.
    DistancePis(Arc<ObjectiveAnchors>),
    /// Maximize the distance from the negative ideal.
    DistanceNis(Arc<ObjectiveAnchors>),
    /// Maximize `min(mu1, mu2)`.
    MaxMin(Arc<CompromiseAnchors>),
}

impl ScalarObjective {
    pub fn minimize(index: usize) -> Self {
        ScalarObjective::Single {
            index,
            maximize: false,
        }
    }

    pub fn maximize(index: usize) -> Self {
        ScalarObjective::Single {
            index,
            maximize: true,
        }
    }

    /// Minimized fitness of an evaluation, paired with its violation.
    pub fn fitness(&self, eval: &Evaluation) -> Result<Fitness> {
        let value = match self {
            ScalarObjective::Single { index, maximize } => {
                let v = *eval.objectives.get(*index).ok_or(Error::ObjectiveIndex {
                    index: *index,
                    count: eval.objectives.len(),
                })?;
                if *maximize {
                    -v
                } else {
                    v
                }
            }
            ScalarObjective::DistancePis(a) => a.d_pis(&eval.objectives)?,
            ScalarObjective::DistanceNis(a) => -a.d_nis(&eval.objectives)?,
            ScalarObjective::MaxMin(a) => -a.satisfaction(&eval.objectives)?,
        };
        Ok(Fitness::new(value, eval.violation))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub x: Vec<f64>,
    pub eval: Evaluation,
    pub fitness: Fitness,
}

impl Individual {
    pub fn evaluate(problem: &Problem, objective: &ScalarObjective, x: Vec<f64>) -> Result<Self> {
        let eval = problem.evaluate(&x)?;
        let fitness = objective.fitness(&eval)?;
        Ok(Self { x, eval, fitness })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    pub members: Vec<Individual>,
}

impl Population {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn x(&self, i: usize) -> &[f64] {
        &self.members[i].x
    }

    /// Recomputes cached fitness under another scalarization.
    pub fn rescore(&mut self, objective: &ScalarObjective) -> Result<()> {
        for m in &mut self.members {
            m.fitness = objective.fitness(&m.eval)?;
        }
        Ok(())
    }

    /// Index of the best member under the feasibility rules (first on ties).
    pub fn feasibility_best(&self) -> usize {
        let mut best = 0;
        for (i, m) in self.members.iter().enumerate().skip(1) {
            if m.fitness.better_than(&self.members[best].fitness) {
                best = i;
            }
        }
        best
    }
}

/// `x_ij = l_j + U(0,1) (u_j - l_j)` for every member.
pub fn init_population<R: Rng + ?Sized>(
    problem: &Problem,
    config: &DeConfig,
    objective: &ScalarObjective,
    rng: &mut R,
) -> Result<Population> {
    let mut members = Vec::with_capacity(config.population_size);
    for _ in 0..config.population_size {
        let x = problem
            .lower()
            .iter()
            .zip(problem.upper())
            .map(|(&l, &u)| {
                let (l, u) = (l as f64, u as f64);
                l + rng.gen::<f64>() * (u - l)
            })
            .collect();
        members.push(Individual::evaluate(problem, objective, x)?);
    }
    Ok(Population { members })
}

/// Draws `count` distinct entries of `pool` that are not in `exclude`,
/// by rejection.
pub fn sample_distinct<R: Rng + ?Sized>(
    rng: &mut R,
    pool: &[usize],
    exclude: &[usize],
    count: usize,
) -> Vec<usize> {
    let available = pool.iter().filter(|p| !exclude.contains(p)).count();
    assert!(
        available >= count,
        "cannot draw {count} distinct indices from {available} candidates"
    );
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let c = pool[rng.gen_range(0..pool.len())];
        if !exclude.contains(&c) && !out.contains(&c) {
            out.push(c);
        }
    }
    out
}

/// `base + scale * (plus - minus)`.
pub fn differential(base: &[f64], plus: &[f64], minus: &[f64], scale: f64) -> Vec<f64> {
    base.iter()
        .zip(plus.iter().zip(minus))
        .map(|(&b, (&p, &m))| b + scale * (p - m))
        .collect()
}

fn all_indices(n: usize) -> Vec<usize> {
    (0..n).collect()
}

pub fn mutate_rand1<R: Rng + ?Sized>(pop: &Population, i: usize, f: f64, rng: &mut R) -> Vec<f64> {
    let r = sample_distinct(rng, &all_indices(pop.len()), &[i], 3);
    differential(pop.x(r[0]), pop.x(r[1]), pop.x(r[2]), f)
}

pub fn mutate_best<R: Rng + ?Sized>(
    pop: &Population,
    i: usize,
    f: f64,
    gbest: usize,
    canonical: bool,
    rng: &mut R,
) -> Vec<f64> {
    let r = sample_distinct(rng, &all_indices(pop.len()), &[i], 2);
    if canonical {
        differential(pop.x(gbest), pop.x(r[0]), pop.x(r[1]), f)
    } else {
        differential(pop.x(r[0]), pop.x(r[1]), pop.x(gbest), f)
    }
}

/// Ring neighborhood `{i-k, ..., i+k}` modulo `np`, in that order.
pub fn ring_neighborhood(i: usize, k: usize, np: usize) -> Vec<usize> {
    (0..=2 * k).map(|o| (i + np * k + o - k) % np).collect()
}

/// Local, global and blended donor of one DEGL mutation.
#[derive(Debug, Clone, PartialEq)]
pub struct DeglDonor {
    pub local: Vec<f64>,
    pub global: Vec<f64>,
    pub donor: Vec<f64>,
}

/// `X_i + alpha (X_best - X_i) + beta (X_p - X_q)`.
pub fn directed_donor(xi: &[f64], best: &[f64], p: &[f64], q: &[f64], alpha: f64, beta: f64) -> Vec<f64> {
    (0..xi.len())
        .map(|j| xi[j] + alpha * (best[j] - xi[j]) + beta * (p[j] - q[j]))
        .collect()
}

/// `V = r G + (1 - r) L`.
pub fn blend(global: &[f64], local: &[f64], r: f64) -> Vec<f64> {
    global
        .iter()
        .zip(local)
        .map(|(&g, &l)| r * g + (1.0 - r) * l)
        .collect()
}

#[allow(clippy::too_many_arguments)]
pub fn mutate_degl<R: Rng + ?Sized>(
    pop: &Population,
    i: usize,
    alpha: f64,
    beta: f64,
    r: f64,
    neighborhood_k: usize,
    local_best: usize,
    gbest: usize,
    rng: &mut R,
) -> DeglDonor {
    let ring = ring_neighborhood(i, neighborhood_k, pop.len());
    let pq = sample_distinct(rng, &ring, &[i], 2);
    let xi = pop.x(i);
    let local = directed_donor(xi, pop.x(local_best), pop.x(pq[0]), pop.x(pq[1]), alpha, beta);
    let pq = sample_distinct(rng, &all_indices(pop.len()), &[i], 2);
    let global = directed_donor(xi, pop.x(gbest), pop.x(pq[0]), pop.x(pq[1]), alpha, beta);
    let donor = blend(&global, &local, r);
    DeglDonor { local, global, donor }
}

/// Exploitation weight `iteration / max_iterations`.
pub fn weight_r(iteration: usize, max_iterations: usize) -> f64 {
    iteration as f64 / max_iterations as f64
}

/// Binomial crossover; the component at a uniformly drawn `j_rand` always
/// comes from the donor.
pub fn crossover<R: Rng + ?Sized>(target: &[f64], donor: &[f64], cr: f64, rng: &mut R) -> Vec<f64> {
    let j_rand = rng.gen_range(0..target.len());
    target
        .iter()
        .zip(donor)
        .enumerate()
        .map(|(j, (&x, &v))| {
            let draw: f64 = rng.gen();
            if draw <= cr || j == j_rand {
                v
            } else {
                x
            }
        })
        .collect()
}

/// Survivor of target vs trial: the trial only if strictly better.
pub fn select(target: Individual, trial: Individual) -> Individual {
    if trial.fitness.better_than(&target.fitness) {
        trial
    } else {
        target
    }
}

/// TOPSIS-best member among `indices` over (fitness, violation), both cost,
/// uniform weights.
pub fn choose_best(pop: &Population, indices: &[usize]) -> Result<usize> {
    if indices.is_empty() {
        return Err(Error::EmptyCandidates);
    }
    let rows: Vec<[f64; 2]> = indices
        .iter()
        .map(|&i| {
            let f = pop.members[i].fitness;
            [f.value, f.violation]
        })
        .collect();
    let pos = topsis::best_uniform_cost(rows.iter().map(|r| &r[..]), 2).expect("non-empty candidate rows");
    Ok(indices[pos])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BestScope {
    Global,
    Neighborhood,
}

/// Instrumentation callbacks of [`run_observed`].
#[derive(Debug)]
pub enum DeEvent<'a> {
    BestChosen {
        generation: usize,
        target: usize,
        index: usize,
        scope: BestScope,
    },
    GenerationDone {
        generation: usize,
        population: &'a Population,
    },
}

pub fn run<R: Rng + ?Sized>(
    problem: &Problem,
    config: &DeConfig,
    objective: &ScalarObjective,
    rng: &mut R,
    initial: Option<Population>,
) -> Result<Population> {
    run_observed(problem, config, objective, rng, initial, &mut |_| {})
}

/// Runs `max_iterations` generations. Each target is replaced in place as
/// soon as its trial wins, so later targets of the same generation see it.
pub fn run_observed<R: Rng + ?Sized>(
    problem: &Problem,
    config: &DeConfig,
    objective: &ScalarObjective,
    rng: &mut R,
    initial: Option<Population>,
    observer: &mut dyn FnMut(DeEvent<'_>),
) -> Result<Population> {
    config.validate()?;
    let mut pop = match initial {
        Some(mut p) => {
            if p.len() != config.population_size {
                return Err(Error::InvalidConfig(format!(
                    "initial population has {} members, expected {}",
                    p.len(),
                    config.population_size
                )));
            }
            p.rescore(objective)?;
            p
        }
        None => init_population(problem, config, objective, rng)?,
    };
    let np = pop.len();
    let everyone = all_indices(np);

    for generation in 1..=config.max_iterations {
        let gbest = match config.variant {
            Variant::Rand1 => None,
            Variant::Best | Variant::Degl => {
                let g = choose_best(&pop, &everyone)?;
                observer(DeEvent::BestChosen {
                    generation,
                    target: usize::MAX,
                    index: g,
                    scope: BestScope::Global,
                });
                Some(g)
            }
        };
        let r = weight_r(generation, config.max_iterations);

        for i in 0..np {
            let donor = match (config.variant, gbest) {
                (Variant::Rand1, _) => mutate_rand1(&pop, i, config.scale_factor, rng),
                (Variant::Best, Some(g)) => {
                    mutate_best(&pop, i, config.scale_factor, g, config.canonical_best, rng)
                }
                (Variant::Degl, Some(g)) => {
                    let ring = ring_neighborhood(i, config.neighborhood_k, np);
                    let local = choose_best(&pop, &ring)?;
                    observer(DeEvent::BestChosen {
                        generation,
                        target: i,
                        index: local,
                        scope: BestScope::Neighborhood,
                    });
                    mutate_degl(
                        &pop,
                        i,
                        config.alpha,
                        config.beta,
                        r,
                        config.neighborhood_k,
                        local,
                        g,
                        rng,
                    )
                    .donor
                }
                _ => unreachable!("gbest is computed for best and degl"),
            };
            let mut trial = crossover(pop.x(i), &donor, config.crossover_rate, rng);
            problem.clamp(&mut trial);
            let trial = Individual::evaluate(problem, objective, trial)?;
            if trial.fitness.better_than(&pop.members[i].fitness) {
                pop.members[i] = trial;
            }
        }
        observer(DeEvent::GenerationDone {
            generation,
            population: &pop,
        });
    }
    Ok(pop)
}
