use intmoo::benchmarks::{benchmark, problem1, problem2, problem3, BenchmarkName};
use intmoo::harness::{rng_for, solve_seeded};
use intmoo::hybrid::{
    augment_with_violation, oracle_anchors, stage1_anchors, stage2_anchors, CompromiseAnchors, HybridConfig,
    ObjectiveAnchors,
};
use intmoo::problem::{dominates, feasible_lattice};
use intmoo::Problem;
use proptest::prelude::*;

fn quick() -> HybridConfig {
    HybridConfig {
        alternations: 3,
        ts_iterations: 200,
        ..HybridConfig::default()
    }
}

#[test]
fn stage1_on_problem3_reaches_relaxed_extremes() {
    // continuous maximum of x1 is at the intersection of 2 x1 - x2 = 21 and
    // 5 x1 + 1.5 x2 = 57.5, i.e. x1 = 11.125; x2 is capped by 6.5
    let problem_k = augment_with_violation(&problem3().problem);
    let a = stage1_anchors(&problem_k, &HybridConfig::default(), &mut rng_for(4)).unwrap();
    assert!((a.f_star[0] + 11.125).abs() < 1e-3, "{:?}", a.f_star);
    assert!((a.f_star[1] + 6.5).abs() < 1e-3, "{:?}", a.f_star);
    assert!(
        a.f_minus[0].abs() < 1e-6 && a.f_minus[1].abs() < 1e-6,
        "{:?}",
        a.f_minus
    );
    assert_eq!(a.f_star[2], 0.0);
    // the search stays inside the feasible region, so the violation
    // objective never rises above zero and is dropped
    assert_eq!(a.dropped, vec![2]);
    assert_eq!(a.weights, vec![0.5, 0.5, 0.0]);
}

#[test]
fn anchors_bracket_lattice_values() {
    for name in BenchmarkName::ALL {
        let problem_k = augment_with_violation(&benchmark(name).problem);
        let exact = oracle_anchors(&problem_k).unwrap();
        let approx = stage1_anchors(&problem_k, &HybridConfig::default(), &mut rng_for(8)).unwrap();
        for (_, e) in feasible_lattice(&problem_k).unwrap() {
            for j in 0..problem_k.num_objectives() {
                let v = e.objectives[j];
                assert!(exact.f_star[j] <= v && v <= exact.f_minus[j]);
                let tol = 1e-6 * (1.0 + v.abs());
                assert!(
                    approx.f_star[j] <= v + tol,
                    "{name} objective {j}: {} > {v}",
                    approx.f_star[j]
                );
                assert!(
                    approx.f_minus[j] >= v - tol,
                    "{name} objective {j}: {} < {v}",
                    approx.f_minus[j]
                );
            }
        }
    }
}

fn anchors_for(name: BenchmarkName, seed: u64) -> (Problem, CompromiseAnchors) {
    let problem_k = augment_with_violation(&benchmark(name).problem);
    let ideals = oracle_anchors(&problem_k).unwrap();
    let a = stage2_anchors(&problem_k, ideals, &HybridConfig::default(), &mut rng_for(seed)).unwrap();
    (problem_k, a)
}

#[test]
fn membership_identities_at_extremes() {
    for name in BenchmarkName::ALL {
        let (problem_k, a) = anchors_for(name, 1);
        assert!(!a.pis_degenerate() && !a.nis_degenerate(), "{name}");
        let at_p = problem_k.evaluate(&a.x_p).unwrap();
        let at_n = problem_k.evaluate(&a.x_n).unwrap();
        assert_eq!(a.mu1(a.ideals.d_pis(&at_p.objectives).unwrap()), 1.0);
        assert_eq!(a.mu2(a.ideals.d_nis(&at_n.objectives).unwrap()), 1.0);
        assert_eq!(a.satisfaction(&at_p.objectives).unwrap(), 0.0);
        assert_eq!(a.satisfaction(&at_n.objectives).unwrap(), 0.0);
        assert!(a.d_pis_star <= a.d_pis_prime && a.d_nis_star >= a.d_nis_prime);
    }
}

#[test]
fn stage2_minimum_lies_below_every_feasible_lattice_point() {
    let (problem_k, a) = anchors_for(BenchmarkName::P2, 6);
    for (_, e) in feasible_lattice(&problem_k).unwrap() {
        assert!(a.d_pis_star <= a.ideals.d_pis(&e.objectives).unwrap() + 1e-9);
        assert!(a.d_nis_star >= a.ideals.d_nis(&e.objectives).unwrap() - 1e-9);
    }
}

proptest! {
    #[test]
    fn memberships_are_clamped_and_monotone(
        star in 0.0f64..1.0,
        gap in 1e-6f64..1.0,
        d1 in 0.0f64..3.0,
        d2 in 0.0f64..3.0,
    ) {
        let a = CompromiseAnchors {
            ideals: ObjectiveAnchors::new(vec![0.0], vec![1.0]).unwrap(),
            d_pis_star: star,
            d_pis_prime: star + gap,
            d_nis_star: star + gap,
            d_nis_prime: star,
            x_p: vec![],
            x_n: vec![],
        };
        let (lo, hi) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
        for d in [lo, hi] {
            prop_assert!((0.0..=1.0).contains(&a.mu1(d)));
            prop_assert!((0.0..=1.0).contains(&a.mu2(d)));
        }
        prop_assert!(a.mu1(lo) >= a.mu1(hi));
        prop_assert!(a.mu2(lo) <= a.mu2(hi));
        let mid = star + gap / 2.0;
        prop_assert!((a.mu1(mid) - 0.5).abs() < 1e-9);
        prop_assert_eq!(a.mu1(star + gap), 0.0);
    }
}

#[test]
fn archive_is_feasible_and_nondominated() {
    for spec in [problem1(), problem2(), problem3()] {
        let outcome = solve_seeded(&spec.problem, &quick(), 21).unwrap();
        assert!(!outcome.archive.is_empty());
        let entries: Vec<_> = outcome.archive.entries().collect();
        for e in &entries {
            assert!(spec.problem.contains_int(&e.x));
            let fresh = spec.problem.evaluate_int(&e.x).unwrap();
            assert_eq!(fresh.violation, 0.0);
            assert_eq!(fresh.objectives, e.evaluation.objectives);
            for other in &entries {
                assert!(!dominates(&other.evaluation.objectives, &e.evaluation.objectives).unwrap());
            }
        }
    }
}

#[test]
fn dominated_known_solutions_never_reported() {
    let p = problem2().problem;
    for seed in 0..3 {
        let outcome = solve_seeded(&p, &quick(), seed).unwrap();
        assert!(!outcome.archive.contains(&[10, 1]));
        assert!(!outcome.archive.contains(&[9, 2]));
    }
}

#[test]
fn solve_is_deterministic() {
    let p = problem1().problem;
    let a = solve_seeded(&p, &quick(), 5).unwrap();
    let b = solve_seeded(&p, &quick(), 5).unwrap();
    assert_eq!(a.archive, b.archive);
    assert_eq!(a.anchors, b.anchors);
}

#[test]
fn oracle_anchor_mode_runs() {
    let cfg = HybridConfig {
        oracle_anchors: true,
        ..quick()
    };
    let outcome = solve_seeded(&problem3().problem, &cfg, 2).unwrap();
    assert_eq!(outcome.anchors.ideals.f_star, vec![-11.0, -6.0, 0.0]);
    assert!(outcome.archive.contains(&[9, 5]));
}

#[test]
fn single_point_region_falls_back() {
    let p = Problem::builder("point", vec![3, 3], vec![3, 3])
        .minimize("a", |x| x[0] + x[1])
        .maximize("b", |x| x[0] * x[1])
        .build()
        .unwrap();
    let outcome = solve_seeded(&p, &quick(), 0).unwrap();
    assert!(outcome.anchors.pis_degenerate() && outcome.anchors.nis_degenerate());
    assert_eq!(outcome.archive.solutions(), vec![vec![3, 3]]);
    assert!(outcome.notes.iter().any(|n| n.contains("mu1 fixed at 1")));
}

#[test]
fn config_json_defaults_and_rejects_unknown_keys() {
    let cfg: HybridConfig = serde_json::from_str(r#"{"runs": 5, "de": {"variant": "rand1"}}"#).unwrap();
    assert_eq!(cfg.runs, 5);
    assert_eq!(cfg.de.population_size, 40);
    assert_eq!(cfg.ts_iterations, HybridConfig::default().ts_iterations);
    assert!(serde_json::from_str::<HybridConfig>(r#"{"rnus": 5}"#).is_err());
}
