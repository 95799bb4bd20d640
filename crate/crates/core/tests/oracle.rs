use intmoo::benchmarks::{problem1, problem2, problem3, Provenance};
use intmoo::harness::verify_known;
use intmoo::problem::{brute_force_pareto, dominates, feasible_lattice};

fn sorted_pareto(spec: &intmoo::benchmarks::BenchmarkSpec) -> Vec<Vec<i64>> {
    let mut xs: Vec<Vec<i64>> = brute_force_pareto(&spec.problem)
        .unwrap()
        .into_iter()
        .map(|(x, _)| x)
        .collect();
    xs.sort();
    xs
}

fn pts(list: &[(i64, i64)]) -> Vec<Vec<i64>> {
    let mut v: Vec<Vec<i64>> = list.iter().map(|&(a, b)| vec![a, b]).collect();
    v.sort();
    v
}

// Feasible counts and Pareto sets below come from an independent exhaustive
// enumeration written outside this crate.

#[test]
fn problem1_lattice() {
    let spec = problem1();
    assert_eq!(feasible_lattice(&spec.problem).unwrap().len(), 23);
    assert_eq!(sorted_pareto(&spec), pts(&[(2, 5), (4, 4), (5, 3), (6, 2)]));
}

#[test]
fn problem2_lattice() {
    let spec = problem2();
    assert_eq!(feasible_lattice(&spec.problem).unwrap().len(), 223);
    let expected = pts(&[
        (0, 11),
        (0, 12),
        (0, 13),
        (0, 14),
        (0, 15),
        (0, 16),
        (1, 10),
        (2, 9),
        (3, 8),
        (4, 7),
        (5, 6),
        (6, 5),
        (7, 4),
        (8, 3),
    ]);
    assert_eq!(sorted_pareto(&spec), expected);
    // the Pareto set is exactly the tabulated solutions
    let mut table = spec.table_solutions();
    table.sort();
    assert_eq!(table, expected);
}

#[test]
fn problem3_lattice() {
    let spec = problem3();
    assert_eq!(feasible_lattice(&spec.problem).unwrap().len(), 74);
    assert_eq!(sorted_pareto(&spec), pts(&[(7, 6), (9, 5), (10, 4), (11, 1)]));
}

#[test]
fn problem2_dominated_known_solutions() {
    let report = verify_known(&problem2()).unwrap();
    let c = report.check(&[10, 1]).unwrap();
    assert!(c.feasible && !c.pareto);
    assert!(c.dominated_by_known.contains(&vec![7, 4]));
    assert!(c.dominated_by_known.contains(&vec![8, 3]));
    let c = report.check(&[9, 2]).unwrap();
    assert!(!c.pareto);
    assert_eq!(c.dominated_by_known, vec![vec![8, 3]]);
    for x in [[1, 10], [8, 3], [0, 16]] {
        assert!(report.check(&x).unwrap().pareto, "{x:?}");
    }
}

#[test]
fn problem1_known_are_feasible_and_mutually_nondominated() {
    let spec = problem1();
    let report = verify_known(&spec).unwrap();
    let evals: Vec<_> = spec
        .known_solutions
        .iter()
        .map(|k| spec.problem.evaluate_int(&k.x).unwrap())
        .collect();
    for (i, a) in evals.iter().enumerate() {
        assert!(a.is_feasible());
        assert!(report.checks[i].pareto);
        for b in &evals {
            assert!(!dominates(&a.objectives, &b.objectives).unwrap());
        }
    }
}

#[test]
fn problem3_binding_constraint_and_infeasible_entry() {
    let spec = problem3();
    let g3 = spec.problem.constraints()[2].value(&[9.0, 5.0]);
    assert!((g3 + 0.1).abs() < 1e-12, "{g3}");
    let report = verify_known(&spec).unwrap();
    let c = report.check(&[9, 5]).unwrap();
    assert!(c.feasible && c.pareto);
    let c = report.check(&[5, 7]).unwrap();
    assert_eq!(c.provenance, Provenance::SuccessTable);
    assert!(!c.feasible);
    assert!((c.violation - 0.5).abs() < 1e-12);
}

#[test]
fn oracle_is_fast() {
    let start = std::time::Instant::now();
    for spec in [problem1(), problem2(), problem3()] {
        verify_known(&spec).unwrap();
    }
    assert!(start.elapsed().as_secs_f64() < 1.0);
}
