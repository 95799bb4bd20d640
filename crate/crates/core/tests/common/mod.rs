#![allow(dead_code)]

use std::sync::Arc;

use intmoo::benchmarks::{benchmark, BenchmarkName};
use intmoo::de::{self, BestScope, DeConfig, DeEvent, ScalarObjective, Variant};
use intmoo::harness::rng_for;
use intmoo::hybrid::{augment_with_violation, oracle_anchors, stage2_anchors, HybridConfig};
use intmoo::Problem;

/// Every scalarization the pipeline optimizes for one benchmark: both
/// directions of each objective, the two ideal distances and the max-min
/// satisfaction.
pub fn scalarized_subproblems(name: BenchmarkName) -> (Problem, Vec<(String, ScalarObjective)>) {
    let problem_k = augment_with_violation(&benchmark(name).problem);
    let mut subs = Vec::new();
    for j in 0..problem_k.num_objectives() {
        subs.push((format!("min f{j}"), ScalarObjective::minimize(j)));
        subs.push((format!("max f{j}"), ScalarObjective::maximize(j)));
    }
    let ideals = oracle_anchors(&problem_k).unwrap();
    let shared = Arc::new(ideals.clone());
    subs.push(("d_pis".into(), ScalarObjective::DistancePis(shared.clone())));
    subs.push(("d_nis".into(), ScalarObjective::DistanceNis(shared)));
    let anchors = stage2_anchors(&problem_k, ideals, &HybridConfig::default(), &mut rng_for(17)).unwrap();
    subs.push(("maxmin".into(), ScalarObjective::MaxMin(Arc::new(anchors))));
    (problem_k, subs)
}

/// Runs 100 generations and reports the first violation of per-slot and
/// population-best Deb monotonicity, or of the box.
pub fn elitism_violation(
    problem: &Problem,
    objective: &ScalarObjective,
    variant: Variant,
    seed: u64,
) -> Option<String> {
    let config = DeConfig {
        variant,
        max_iterations: 100,
        ..DeConfig::default()
    };
    let mut previous: Option<Vec<intmoo::Fitness>> = None;
    let mut failure = None;
    de::run_observed(
        problem,
        &config,
        objective,
        &mut rng_for(seed),
        None,
        &mut |event| {
            if let DeEvent::GenerationDone {
                generation,
                population,
            } = event
            {
                if failure.is_some() {
                    return;
                }
                let current: Vec<_> = population.members.iter().map(|m| m.fitness).collect();
                for m in &population.members {
                    if !problem.contains(&m.x) {
                        failure = Some(format!("generation {generation}: {:?} outside box", m.x));
                        return;
                    }
                }
                if let Some(prev) = &previous {
                    for (i, (old, new)) in prev.iter().zip(&current).enumerate() {
                        if old.better_than(new) {
                            failure = Some(format!("generation {generation}: slot {i} got worse"));
                            return;
                        }
                    }
                    let best = |f: &[intmoo::Fitness]| {
                        let mut b = f[0];
                        for x in &f[1..] {
                            if x.better_than(&b) {
                                b = *x;
                            }
                        }
                        b
                    };
                    if best(prev).better_than(&best(&current)) {
                        failure = Some(format!("generation {generation}: population best got worse"));
                    }
                }
                previous = Some(current);
            }
        },
    )
    .unwrap();
    failure
}

/// Counts DEGL neighborhood-best selections, to confirm they happen once per
/// target per generation.
pub fn count_local_choices(problem: &Problem, objective: &ScalarObjective) -> usize {
    let config = DeConfig {
        max_iterations: 5,
        ..DeConfig::default()
    };
    let mut n = 0;
    de::run_observed(problem, &config, objective, &mut rng_for(1), None, &mut |e| {
        if let DeEvent::BestChosen {
            scope: BestScope::Neighborhood,
            ..
        } = e
        {
            n += 1;
        }
    })
    .unwrap();
    n
}

/// Largest feasible `2 x1 + 5 x2` for the first benchmark over a fine grid;
/// the objective is linear, so along each `x2` the feasible `x1` range is
/// located by bisection on the constraints.
pub fn problem1_f1_continuous_max() -> f64 {
    let p = benchmark(BenchmarkName::P1).problem;
    let feasible = |x1: f64, x2: f64| p.violation(&[x1, x2]).unwrap() == 0.0;
    let mut best = f64::NEG_INFINITY;
    let steps = 40_000;
    for s in 0..=steps {
        let x2 = 1.0 + 4.0 * s as f64 / steps as f64;
        if !feasible(1.0, x2) {
            continue;
        }
        let x1 = if feasible(7.0, x2) {
            7.0
        } else {
            let (mut lo, mut hi) = (1.0, 7.0);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if feasible(mid, x2) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        };
        best = best.max(2.0 * x1 + 5.0 * x2);
    }
    best
}
