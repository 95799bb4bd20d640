//! Integer refinement: stochastic rounding followed by a short-term-memory
//! tabu search over unit moves `x +/- e_j`.
//!
//! Tabu memory is one timestamp per variable (`t_j`, the iteration at which
//! `x_j` last changed). A move on `j` is tabu while `k - t_j <= d`, with the
//! tenure `d` drawn from `U(1, n)` for every coordinate on every call. A tabu
//! move is still allowed when it beats the best point found so far. When no
//! variable has changed for more than `n` iterations, a random coordinate is
//! reset to a uniform value inside its bounds.

use rand::Rng;

use crate::de::ScalarObjective;
use crate::error::Result;
use crate::problem::{Evaluation, Fitness, Problem};

/// Rounds each component up with probability equal to its fractional part.
pub fn stochastic_round<R: Rng + ?Sized>(x: &[f64], rng: &mut R) -> Vec<i64> {
    x.iter()
        .map(|&v| {
            let floor = v.floor();
            let draw: f64 = rng.gen();
            if draw <= v - floor {
                v.ceil() as i64
            } else {
                floor as i64
            }
        })
        .collect()
}

/// Evaluated integer point.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub x: Vec<i64>,
    pub eval: Evaluation,
    pub fitness: Fitness,
}

impl Point {
    pub fn better_than(&self, other: &Point) -> bool {
        self.fitness.better_than(&other.fitness)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TabuState {
    /// Last iteration at which each variable changed.
    pub t: Vec<i64>,
    /// Current iteration.
    pub k: i64,
}

impl TabuState {
    pub fn new(n: usize) -> Self {
        Self {
            t: vec![-(n as i64); n],
            k: 0,
        }
    }

    /// Horizon of the tabu list; equal to the problem dimension.
    pub fn list_size(&self) -> usize {
        self.t.len()
    }
}

/// Result of one [`TabuSearch::tabu_move`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveKind {
    /// Random reset of one coordinate.
    Diversify { coordinate: usize },
    /// Accepted unit move.
    Step { coordinate: usize },
    /// No admissible improving neighbor.
    Stay,
}

#[derive(Debug, Clone)]
pub struct TabuSearch<'a> {
    problem: &'a Problem,
    objective: &'a ScalarObjective,
    iterations: usize,
    literal_diversification: bool,
}

impl<'a> TabuSearch<'a> {
    pub fn new(problem: &'a Problem, objective: &'a ScalarObjective, iterations: usize) -> Self {
        Self {
            problem,
            objective,
            iterations,
            literal_diversification: true,
        }
    }

    /// Enables or disables the random-reset branch (on by default).
    pub fn literal_diversification(mut self, on: bool) -> Self {
        self.literal_diversification = on;
        self
    }

    pub fn point(&self, x: Vec<i64>) -> Result<Point> {
        let eval = self.problem.evaluate_int(&x)?;
        let fitness = self.objective.fitness(&eval)?;
        Ok(Point { x, eval, fitness })
    }

    /// One move from `current` at iteration `k`.
    pub fn tabu_move<R: Rng + ?Sized>(
        &self,
        current: Point,
        best: &Point,
        k: i64,
        state: &mut TabuState,
        rng: &mut R,
    ) -> Result<(Point, MoveKind)> {
        let n = self.problem.dimension();
        let horizon = n as i64;
        state.k = k;

        if self.literal_diversification && state.t.iter().all(|&tj| k - tj > horizon) {
            let c = rng.gen_range(0..n);
            let mut x = current.x;
            x[c] = rng.gen_range(self.problem.lower()[c]..=self.problem.upper()[c]);
            state.t[c] = k;
            return Ok((self.point(x)?, MoveKind::Diversify { coordinate: c }));
        }

        let mut chosen: Option<(Point, usize)> = None;
        for j in 0..n {
            let tenure = rng.gen_range(1..=horizon);
            for delta in [-1i64, 1] {
                let s = current.x[j] + delta;
                if s < self.problem.lower()[j] || s > self.problem.upper()[j] {
                    continue;
                }
                let mut x = current.x.clone();
                x[j] = s;
                let candidate = self.point(x)?;
                let incumbent = chosen.as_ref().map_or(&current, |(p, _)| p);
                if candidate.better_than(incumbent)
                    && (k - state.t[j] > tenure || candidate.better_than(best))
                {
                    chosen = Some((candidate, j));
                }
            }
        }
        match chosen {
            Some((p, c)) => {
                state.t[c] = k;
                Ok((p, MoveKind::Step { coordinate: c }))
            }
            None => Ok((current, MoveKind::Stay)),
        }
    }

    /// Runs the configured number of moves from `x0` and returns the best
    /// point seen.
    pub fn search<R: Rng + ?Sized>(&self, x0: Vec<i64>, rng: &mut R) -> Result<Point> {
        self.search_with(x0, rng, &mut |_, _| {})
    }

    /// Like [`search`](Self::search), reporting the starting point and the
    /// point after every move (with the move kind; `None` for the start).
    pub fn search_with<R: Rng + ?Sized>(
        &self,
        x0: Vec<i64>,
        rng: &mut R,
        visit: &mut dyn FnMut(&Point, Option<MoveKind>),
    ) -> Result<Point> {
        let mut current = self.point(x0)?;
        visit(&current, None);
        let mut best = current.clone();
        let mut state = TabuState::new(self.problem.dimension());
        for k in 1..=self.iterations as i64 {
            let (next, kind) = self.tabu_move(current, &best, k, &mut state, rng)?;
            current = next;
            visit(&current, Some(kind));
            if current.better_than(&best) {
                best = current.clone();
            }
        }
        Ok(best)
    }
}
