//! The three integer test problems and the solutions published for them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::Problem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchmarkName {
    P1,
    P2,
    P3,
}

impl BenchmarkName {
    pub const ALL: [BenchmarkName; 3] = [BenchmarkName::P1, BenchmarkName::P2, BenchmarkName::P3];

    pub fn as_str(&self) -> &'static str {
        match self {
            BenchmarkName::P1 => "p1",
            BenchmarkName::P2 => "p2",
            BenchmarkName::P3 => "p3",
        }
    }
}

impl fmt::Display for BenchmarkName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BenchmarkName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "p1" => Ok(BenchmarkName::P1),
            "p2" => Ok(BenchmarkName::P2),
            "p3" => Ok(BenchmarkName::P3),
            _ => Err(Error::UnknownName {
                kind: "problem",
                name: s.to_string(),
                expected: "p1, p2, p3",
            }),
        }
    }
}

/// Where a reference solution comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Listed as a known solution of the problem.
    KnownList,
    /// Reported in the success-rate table only.
    SuccessTable,
    /// Both listed and reported.
    Both,
}

impl Provenance {
    pub fn in_table(&self) -> bool {
        matches!(self, Provenance::SuccessTable | Provenance::Both)
    }

    pub fn in_known_list(&self) -> bool {
        matches!(self, Provenance::KnownList | Provenance::Both)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnownSolution {
    pub x: Vec<i64>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone)]
pub struct BenchmarkSpec {
    pub name: BenchmarkName,
    pub problem: Problem,
    pub known_solutions: Vec<KnownSolution>,
    pub notes: String,
}

impl BenchmarkSpec {
    /// Solutions appearing in the success-rate table.
    pub fn table_solutions(&self) -> Vec<Vec<i64>> {
        self.known_solutions
            .iter()
            .filter(|k| k.provenance.in_table())
            .map(|k| k.x.clone())
            .collect()
    }

    /// Table solutions that are feasible for the problem.
    pub fn feasible_table_solutions(&self) -> Result<Vec<Vec<i64>>> {
        let mut out = Vec::new();
        for x in self.table_solutions() {
            if self.problem.evaluate_int(&x)?.is_feasible() {
                out.push(x);
            }
        }
        Ok(out)
    }
}

fn known(list: &[(i64, i64)], provenance: Provenance) -> Vec<KnownSolution> {
    list.iter()
        .map(|&(a, b)| KnownSolution {
            x: vec![a, b],
            provenance,
        })
        .collect()
}

pub fn benchmark(name: BenchmarkName) -> BenchmarkSpec {
    match name {
        BenchmarkName::P1 => problem1(),
        BenchmarkName::P2 => problem2(),
        BenchmarkName::P3 => problem3(),
    }
}

pub fn problem1() -> BenchmarkSpec {
    let problem = Problem::builder("p1", vec![1, 1], vec![7, 5])
        .maximize("f1", |x| 2.0 * x[0] + 5.0 * x[1])
        .maximize("f2", |x| 3.0 * x[0] * x[1] - x[0] + 6.0 * x[1])
        .maximize("f3", |x| 2.0 * x[0] * x[0] + x[0] * x[1] - x[1])
        .constraint("g1", |x| {
            x[0] + 2.0 * x[1] + 2.9 * (0.09 * x[0] * x[0] + 0.05 * x[1] * x[1] + 1.0).sqrt() - 18.0
        })
        .constraint("g2", |x| 3.0 * x[0] + 2.0 * x[1] - 22.0)
        .build()
        .expect("problem 1 is well formed");
    BenchmarkSpec {
        name: BenchmarkName::P1,
        problem,
        known_solutions: known(&[(4, 4), (2, 5), (6, 2), (5, 3)], Provenance::Both),
        notes: "three maximized objectives, two nonlinear constraints, box [1,7]x[1,5]".into(),
    }
}

pub fn problem2() -> BenchmarkSpec {
    let problem = Problem::builder("p2", vec![0, 0], vec![16, 16])
        .minimize("f1", |x| x[0] * x[0] + 3.0 * x[1] * x[1])
        .minimize("f2", |x| 5.0 * x[0] * x[0] + x[1] * x[1])
        .minimize("f3", |x| 2.0 * x[0] * x[0] - x[1])
        .constraint("g1", |x| -x[0] - x[1] + 11.0)
        .build()
        .expect("problem 2 is well formed");
    let mut known_solutions = known(
        &[(1, 10), (2, 9), (3, 8), (4, 7), (5, 6), (6, 5), (7, 4), (8, 3)],
        Provenance::Both,
    );
    known_solutions.extend(known(&[(9, 2), (10, 1)], Provenance::KnownList));
    known_solutions.extend(known(
        &[(0, 11), (0, 12), (0, 13), (0, 14), (0, 15), (0, 16)],
        Provenance::SuccessTable,
    ));
    BenchmarkSpec {
        name: BenchmarkName::P2,
        problem,
        known_solutions,
        notes: "(7,4) and (8,3) dominate the listed (10,1); (8,3) dominates the listed (9,2)".into(),
    }
}

pub fn problem3() -> BenchmarkSpec {
    // no explicit bounds in the source; this box contains the feasible region
    let problem = Problem::builder("p3", vec![0, 0], vec![12, 7])
        .maximize("f1", |x| x[0])
        .maximize("f2", |x| x[1])
        .constraint("g1", |x| 2.0 * x[0] - x[1] - 21.0)
        .constraint("g2", |x| 5.0 * x[0] + 1.5 * x[1] - 57.5)
        .constraint("g3", |x| 4.0 * x[0] + 5.0 * x[1] - 61.1)
        .constraint("g4", |x| 6.0 * x[0] + 15.0 * x[1] - 135.0)
        .constraint("g5", |x| x[1] - 6.5)
        .build()
        .expect("problem 3 is well formed");
    let mut known_solutions = known(&[(9, 5)], Provenance::Both);
    known_solutions.extend(known(
        &[(10, 4), (11, 1), (7, 6), (5, 7)],
        Provenance::SuccessTable,
    ));
    BenchmarkSpec {
        name: BenchmarkName::P3,
        problem,
        known_solutions,
        notes: "search box [0,12]x[0,7]; the tabulated (5,7) violates x2 <= 6.5".into(),
    }
}
