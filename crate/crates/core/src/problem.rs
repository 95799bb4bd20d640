//! Integer multi-objective problem model.
//!
//! A [`Problem`] is an integer box `[l, u]` together with `d` objective
//! functions (each minimized or maximized) and `m` inequality constraints
//! `g_j(x) <= 0`. Functions are defined over real vectors so that the
//! continuous optimizer can evaluate points that are not yet integral.
//!
//! Evaluations are always expressed in minimization sense: maximized
//! objectives are negated, so dominance and selection share one code path.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Enumeration cap for [`brute_force_pareto`].
pub const LATTICE_LIMIT: u128 = 10_000_000;

pub type ScalarFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone)]
pub struct Objective {
    pub name: String,
    pub sense: Sense,
    func: ScalarFn,
}

impl Objective {
    pub fn new(name: impl Into<String>, sense: Sense, func: ScalarFn) -> Self {
        Self {
            name: name.into(),
            sense,
            func,
        }
    }

    /// Raw value in the objective's own sense.
    pub fn value(&self, x: &[f64]) -> f64 {
        (self.func)(x)
    }
}

impl fmt::Debug for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Objective")
            .field("name", &self.name)
            .field("sense", &self.sense)
            .finish()
    }
}

/// Inequality constraint `g(x) <= 0`.
#[derive(Clone)]
pub struct Constraint {
    pub name: String,
    func: ScalarFn,
}

impl Constraint {
    pub fn new(name: impl Into<String>, func: ScalarFn) -> Self {
        Self {
            name: name.into(),
            func,
        }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        (self.func)(x)
    }
}

impl fmt::Debug for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Constraint").field("name", &self.name).finish()
    }
}

/// Objective vector (minimization sense) plus the maximum constraint
/// violation `G(x) = max(0, g_1(x), ..., g_m(x))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub objectives: Vec<f64>,
    pub violation: f64,
}

impl Evaluation {
    pub fn is_feasible(&self) -> bool {
        self.violation == 0.0
    }
}

#[derive(Debug, Clone)]
pub struct Problem {
    name: String,
    lower: Vec<i64>,
    upper: Vec<i64>,
    objectives: Vec<Objective>,
    constraints: Vec<Constraint>,
}

pub struct ProblemBuilder {
    name: String,
    lower: Vec<i64>,
    upper: Vec<i64>,
    objectives: Vec<Objective>,
    constraints: Vec<Constraint>,
}

impl ProblemBuilder {
    pub fn minimize<F>(mut self, name: impl Into<String>, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        self.objectives
            .push(Objective::new(name, Sense::Minimize, Arc::new(f)));
        self
    }

    pub fn maximize<F>(mut self, name: impl Into<String>, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        self.objectives
            .push(Objective::new(name, Sense::Maximize, Arc::new(f)));
        self
    }

    /// Adds the constraint `g(x) <= 0`.
    pub fn constraint<F>(mut self, name: impl Into<String>, g: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        self.constraints.push(Constraint::new(name, Arc::new(g)));
        self
    }

    pub fn build(self) -> Result<Problem> {
        Problem::from_parts(
            self.name,
            self.lower,
            self.upper,
            self.objectives,
            self.constraints,
        )
    }
}

impl Problem {
    pub fn builder(name: impl Into<String>, lower: Vec<i64>, upper: Vec<i64>) -> ProblemBuilder {
        ProblemBuilder {
            name: name.into(),
            lower,
            upper,
            objectives: Vec::new(),
            constraints: Vec::new(),
        }
    }

    pub fn from_parts(
        name: String,
        lower: Vec<i64>,
        upper: Vec<i64>,
        objectives: Vec<Objective>,
        constraints: Vec<Constraint>,
    ) -> Result<Self> {
        if lower.is_empty() {
            return Err(Error::InvalidProblem(format!("{name}: dimension must be >= 1")));
        }
        if lower.len() != upper.len() {
            return Err(Error::InvalidProblem(format!(
                "{name}: {} lower bounds but {} upper bounds",
                lower.len(),
                upper.len()
            )));
        }
        if let Some(j) = (0..lower.len()).find(|&j| lower[j] > upper[j]) {
            return Err(Error::InvalidProblem(format!(
                "{name}: lower bound {} exceeds upper bound {} for variable {j}",
                lower[j], upper[j]
            )));
        }
        if objectives.is_empty() {
            return Err(Error::InvalidProblem(format!(
                "{name}: at least one objective required"
            )));
        }
        Ok(Self {
            name,
            lower,
            upper,
            objectives,
            constraints,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[i64] {
        &self.lower
    }

    pub fn upper(&self) -> &[i64] {
        &self.upper
    }

    pub fn objectives(&self) -> &[Objective] {
        &self.objectives
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn num_objectives(&self) -> usize {
        self.objectives.len()
    }

    /// Copy of this problem with one more objective appended.
    pub fn with_objective(&self, objective: Objective) -> Problem {
        let mut out = self.clone();
        out.objectives.push(objective);
        out
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dimension()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&v, (&l, &u))| v >= l as f64 && v <= u as f64)
    }

    pub fn contains_int(&self, x: &[i64]) -> bool {
        x.len() == self.dimension()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&v, (&l, &u))| v >= l && v <= u)
    }

    /// Clips every component into `[l_j, u_j]`.
    pub fn clamp(&self, x: &mut [f64]) {
        for ((v, &l), &u) in x.iter_mut().zip(&self.lower).zip(&self.upper) {
            *v = v.clamp(l as f64, u as f64);
        }
    }

    /// Number of integer points in the box.
    pub fn lattice_size(&self) -> u128 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(&l, &u)| (u - l + 1) as u128)
            .product()
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<Evaluation> {
        if x.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                actual: x.len(),
            });
        }
        let mut objectives = Vec::with_capacity(self.objectives.len());
        for obj in &self.objectives {
            let raw = obj.value(x);
            if !raw.is_finite() {
                return Err(Error::NonFinite {
                    what: format!("objective '{}'", obj.name),
                    value: raw,
                    x: x.to_vec(),
                });
            }
            objectives.push(match obj.sense {
                Sense::Minimize => raw,
                Sense::Maximize => -raw,
            });
        }
        let violation = self.violation(x)?;
        Ok(Evaluation {
            objectives,
            violation,
        })
    }

    pub fn evaluate_int(&self, x: &[i64]) -> Result<Evaluation> {
        let xf: Vec<f64> = x.iter().map(|&v| v as f64).collect();
        self.evaluate(&xf)
    }

    /// `G(x)`; zero when there are no constraints.
    pub fn violation(&self, x: &[f64]) -> Result<f64> {
        let mut worst = 0.0_f64;
        for c in &self.constraints {
            let g = c.value(x);
            if !g.is_finite() {
                return Err(Error::NonFinite {
                    what: format!("constraint '{}'", c.name),
                    value: g,
                    x: x.to_vec(),
                });
            }
            worst = worst.max(g);
        }
        Ok(worst)
    }
}

/// Pareto dominance on minimization-sense vectors: `a` is no worse in every
/// component and strictly better in at least one. Comparison is exact.
pub fn dominates(a: &[f64], b: &[f64]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            actual: b.len(),
        });
    }
    Ok(dominates_unchecked(a, b))
}

pub(crate) fn dominates_unchecked(a: &[f64], b: &[f64]) -> bool {
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x > y {
            return false;
        }
        if x < y {
            strict = true;
        }
    }
    strict
}

/// Keeps the feasible points not dominated by any other feasible point.
/// Identical keys are collapsed to their first occurrence; input order is
/// otherwise preserved.
pub fn pareto_filter<K: PartialEq + Clone>(points: &[(K, Evaluation)]) -> Vec<(K, Evaluation)> {
    let mut feasible: Vec<&(K, Evaluation)> = Vec::new();
    for p in points.iter().filter(|p| p.1.is_feasible()) {
        if !feasible.iter().any(|q| q.0 == p.0) {
            feasible.push(p);
        }
    }
    feasible
        .iter()
        .filter(|p| {
            !feasible
                .iter()
                .any(|q| dominates_unchecked(&q.1.objectives, &p.1.objectives))
        })
        .map(|p| (*p).clone())
        .collect()
}

/// Iterates every integer point of the problem box in lexicographic order.
pub fn lattice_points(problem: &Problem) -> impl Iterator<Item = Vec<i64>> + '_ {
    let lower = problem.lower();
    let upper = problem.upper();
    let mut next = Some(lower.to_vec());
    std::iter::from_fn(move || {
        let current = next.take()?;
        let mut succ = current.clone();
        for j in (0..succ.len()).rev() {
            if succ[j] < upper[j] {
                succ[j] += 1;
                next = Some(succ);
                break;
            }
            succ[j] = lower[j];
        }
        Some(current)
    })
}

/// Exhaustive Pareto set of the feasible integer lattice, sorted
/// lexicographically. Refuses boxes with more than [`LATTICE_LIMIT`] points.
pub fn brute_force_pareto(problem: &Problem) -> Result<Vec<(Vec<i64>, Evaluation)>> {
    let feasible = feasible_lattice(problem)?;
    let mut front = pareto_filter(&feasible);
    front.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(front)
}

/// All feasible lattice points with their evaluations, in lexicographic order.
pub fn feasible_lattice(problem: &Problem) -> Result<Vec<(Vec<i64>, Evaluation)>> {
    let size = problem.lattice_size();
    if size > LATTICE_LIMIT {
        return Err(Error::LatticeTooLarge {
            size,
            limit: LATTICE_LIMIT,
        });
    }
    let mut out = Vec::new();
    for x in lattice_points(problem) {
        let e = problem.evaluate_int(&x)?;
        if e.is_feasible() {
            out.push((x, e));
        }
    }
    Ok(out)
}

/// Scalar fitness (minimized) paired with constraint violation; the unit
/// compared by the feasibility rules during selection and local search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fitness {
    pub value: f64,
    pub violation: f64,
}

impl Fitness {
    pub fn new(value: f64, violation: f64) -> Self {
        Self { value, violation }
    }

    /// Feasibility rules: feasible beats infeasible, two feasible points
    /// compare on `value`, two infeasible points on `violation`. Ties are
    /// not "better".
    pub fn better_than(&self, other: &Fitness) -> bool {
        let a_ok = self.violation == 0.0;
        let b_ok = other.violation == 0.0;
        match (a_ok, b_ok) {
            (true, true) => self.value < other.value,
            (true, false) => true,
            (false, true) => false,
            (false, false) => self.violation < other.violation,
        }
    }
}

/// Feasibility-rule comparison of two evaluations using one objective as
/// fitness. `None` selects objective 0.
pub fn deb_better(a: &Evaluation, b: &Evaluation, objective: Option<usize>) -> Result<bool> {
    let idx = objective.unwrap_or(0);
    let count = a.objectives.len().min(b.objectives.len());
    if idx >= count {
        return Err(Error::ObjectiveIndex { index: idx, count });
    }
    let fa = Fitness::new(a.objectives[idx], a.violation);
    let fb = Fitness::new(b.objectives[idx], b.violation);
    Ok(fa.better_than(&fb))
}
