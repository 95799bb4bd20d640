//! TOPSIS ranking of alternatives over weighted criteria.
//!
//! Each row of a [`DecisionMatrix`] is an alternative, each column a
//! criterion tagged benefit or cost. Columns are normalized by their largest
//! absolute value, ideal rows are taken per column, and alternatives are
//! ordered by relative closeness `xi = d- / (d+ + d-)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::Evaluation;

const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CriterionSense {
    Benefit,
    Cost,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionMatrix {
    rows: Vec<Vec<f64>>,
    senses: Vec<CriterionSense>,
    weights: Vec<f64>,
}

impl DecisionMatrix {
    /// Validates shape, finiteness and weights (non-negative, summing to one).
    pub fn new(rows: Vec<Vec<f64>>, senses: Vec<CriterionSense>, weights: Vec<f64>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidMatrix("no alternatives".into()));
        }
        let cols = senses.len();
        if cols == 0 {
            return Err(Error::InvalidMatrix("no criteria".into()));
        }
        if weights.len() != cols {
            return Err(Error::InvalidMatrix(format!(
                "{} weights for {cols} criteria",
                weights.len()
            )));
        }
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(Error::InvalidMatrix(format!(
                "row {i} has {} entries, expected {cols}",
                r.len()
            )));
        }
        if rows.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        if weights.iter().any(|&w| w < 0.0 || !w.is_finite()) {
            return Err(Error::InvalidMatrix(format!(
                "weights must be non-negative: {weights:?}"
            )));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::InvalidMatrix(format!("weights sum to {sum}, not 1")));
        }
        Ok(Self {
            rows,
            senses,
            weights,
        })
    }

    /// All-cost matrix with uniform weights.
    pub fn uniform_cost(rows: Vec<Vec<f64>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        Self::new(rows, vec![CriterionSense::Cost; cols], uniform_weights(cols))
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn senses(&self) -> &[CriterionSense] {
        &self.senses
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn num_alternatives(&self) -> usize {
        self.rows.len()
    }

    pub fn num_criteria(&self) -> usize {
        self.senses.len()
    }

    /// `p_ij = x_ij / max_i |x_ij|`; an all-zero column stays zero.
    pub fn normalize(&self) -> Vec<Vec<f64>> {
        let scale: Vec<f64> = (0..self.num_criteria())
            .map(|j| self.rows.iter().map(|r| r[j].abs()).fold(0.0, f64::max))
            .collect();
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .zip(&scale)
                    .map(|(&v, &m)| if m == 0.0 { 0.0 } else { v / m })
                    .collect()
            })
            .collect()
    }

    pub fn rank(&self) -> TopsisRanking {
        let normalized = self.normalize();
        let (positive_ideal, negative_ideal) = ideal_solutions(&normalized, &self.senses);
        let (d_plus, d_minus, closeness) =
            closeness(&normalized, &positive_ideal, &negative_ideal, &self.weights);
        let mut order: Vec<usize> = (0..closeness.len()).collect();
        // stable sort keeps lower indices first among equal coefficients
        order.sort_by(|&a, &b| closeness[b].total_cmp(&closeness[a]));
        TopsisRanking {
            normalized,
            positive_ideal,
            negative_ideal,
            d_plus,
            d_minus,
            closeness,
            order,
        }
    }
}

pub fn uniform_weights(n: usize) -> Vec<f64> {
    vec![1.0 / n as f64; n]
}

/// Decision matrix over `d` objectives plus the violation column, all cost.
/// Weights default to uniform `1/(d+1)`.
pub fn build_matrix(evaluations: &[Evaluation], weights: Option<Vec<f64>>) -> Result<DecisionMatrix> {
    let first = evaluations
        .first()
        .ok_or_else(|| Error::InvalidMatrix("no alternatives".into()))?;
    let d = first.objectives.len();
    let mut rows = Vec::with_capacity(evaluations.len());
    for e in evaluations {
        if e.objectives.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: e.objectives.len(),
            });
        }
        let mut row = e.objectives.clone();
        row.push(e.violation);
        rows.push(row);
    }
    let weights = weights.unwrap_or_else(|| uniform_weights(d + 1));
    DecisionMatrix::new(rows, vec![CriterionSense::Cost; d + 1], weights)
}

/// Per-column ideal rows: benefit columns take max as positive and min as
/// negative ideal, cost columns the reverse.
pub fn ideal_solutions(normalized: &[Vec<f64>], senses: &[CriterionSense]) -> (Vec<f64>, Vec<f64>) {
    let mut pos = Vec::with_capacity(senses.len());
    let mut neg = Vec::with_capacity(senses.len());
    for (j, sense) in senses.iter().enumerate() {
        let hi = normalized.iter().map(|r| r[j]).fold(f64::NEG_INFINITY, f64::max);
        let lo = normalized.iter().map(|r| r[j]).fold(f64::INFINITY, f64::min);
        match sense {
            CriterionSense::Benefit => {
                pos.push(hi);
                neg.push(lo);
            }
            CriterionSense::Cost => {
                pos.push(lo);
                neg.push(hi);
            }
        }
    }
    (pos, neg)
}

/// Weighted distances to both ideals and the closeness coefficient. The
/// weight multiplies the squared difference under the root. When both
/// distances vanish the coefficient is 1.
pub fn closeness(
    normalized: &[Vec<f64>],
    positive: &[f64],
    negative: &[f64],
    weights: &[f64],
) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let dist = |row: &[f64], ideal: &[f64]| -> f64 {
        row.iter()
            .zip(ideal)
            .zip(weights)
            .map(|((&p, &b), &w)| w * (b - p) * (b - p))
            .sum::<f64>()
            .sqrt()
    };
    let d_plus: Vec<f64> = normalized.iter().map(|r| dist(r, positive)).collect();
    let d_minus: Vec<f64> = normalized.iter().map(|r| dist(r, negative)).collect();
    let xi = d_plus
        .iter()
        .zip(&d_minus)
        .map(|(&p, &m)| if p + m == 0.0 { 1.0 } else { m / (p + m) })
        .collect();
    (d_plus, d_minus, xi)
}

#[derive(Debug, Clone, PartialEq)]
pub struct TopsisRanking {
    pub normalized: Vec<Vec<f64>>,
    pub positive_ideal: Vec<f64>,
    pub negative_ideal: Vec<f64>,
    pub d_plus: Vec<f64>,
    pub d_minus: Vec<f64>,
    pub closeness: Vec<f64>,
    /// Alternatives by descending closeness, ties by lowest index.
    pub order: Vec<usize>,
}

impl TopsisRanking {
    pub fn best_alternative(&self) -> usize {
        self.order[0]
    }
}

pub fn best_alternative(ranking: &TopsisRanking) -> usize {
    ranking.best_alternative()
}

/// Index of the TOPSIS-best row of an all-cost matrix with uniform weights.
/// Avoids the intermediate allocations of [`DecisionMatrix::rank`]; used on
/// the optimizer's hot path.
pub(crate) fn best_uniform_cost<'a, I>(rows: I, cols: usize) -> Option<usize>
where
    I: Iterator<Item = &'a [f64]> + Clone,
{
    let mut scale = vec![0.0_f64; cols];
    let mut lo = vec![f64::INFINITY; cols];
    let mut hi = vec![f64::NEG_INFINITY; cols];
    let mut count = 0usize;
    for r in rows.clone() {
        count += 1;
        for j in 0..cols {
            scale[j] = scale[j].max(r[j].abs());
        }
    }
    if count == 0 {
        return None;
    }
    let norm = |v: f64, m: f64| if m == 0.0 { 0.0 } else { v / m };
    for r in rows.clone() {
        for j in 0..cols {
            let p = norm(r[j], scale[j]);
            lo[j] = lo[j].min(p);
            hi[j] = hi[j].max(p);
        }
    }
    let w = 1.0 / cols as f64;
    let mut best = 0usize;
    let mut best_xi = f64::NEG_INFINITY;
    for (i, r) in rows.enumerate() {
        let (mut dp, mut dm) = (0.0, 0.0);
        for j in 0..cols {
            let p = norm(r[j], scale[j]);
            dp += w * (lo[j] - p) * (lo[j] - p);
            dm += w * (hi[j] - p) * (hi[j] - p);
        }
        let (dp, dm) = (dp.sqrt(), dm.sqrt());
        let xi = if dp + dm == 0.0 { 1.0 } else { dm / (dp + dm) };
        if xi > best_xi {
            best_xi = xi;
            best = i;
        }
    }
    Some(best)
}
