//! Pursuer-to-evader assignment.
//!
//! The payoff matrix scores each pair by the duel value when the pursuer wins
//! and by `−L` otherwise. The optimal assignment maximizes the team payoff over
//! one-to-one matchings of evaders into pursuers. Ties form the optimal set
//! `Γ*`; in the evader winning region `Γ*` is refined by the value matrix into
//! `Θ*`.

mod brute;
mod hungarian;
mod murty;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::duel::{self, DuelError, DuelRegion, DuelState};
use crate::model::{Assignment, Scenario};

pub use brute::{brute_force_assignment, feasible_count, for_each_feasible, TooLarge, DEFAULT_BRUTE_FORCE_CAP};
pub use hungarian::max_weight_matching;
pub use murty::RankedAssignments;

/// Default cap on the number of members `enumerate_optimal_set` collects.
pub const DEFAULT_MEMBER_CAP: usize = 100_000;

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    /// Panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

/// How a single evader/pursuer pair resolves under optimal 1v1 play.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PairKind {
    /// `B > 0`, `α ≤ 1`.
    Capture,
    /// `B ≤ 0`, `α ≤ 1`.
    Escape,
    /// `α > 1`: no duel value exists.
    Unsupported,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairInfo {
    pub kind: PairKind,
    pub alpha: f64,
    pub barrier: f64,
    /// Duel value for `Capture` and `Escape` pairs.
    pub value: Option<f64>,
}

impl PairInfo {
    pub fn region(&self) -> Option<DuelRegion> {
        match self.kind {
            PairKind::Capture => Some(DuelRegion::PursuerWins),
            PairKind::Escape => Some(DuelRegion::EvaderWins),
            PairKind::Unsupported => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("pair (E{}, P{}): {source}", .evader + 1, .pursuer + 1)]
pub struct PairError {
    /// 0-based evader index.
    pub evader: usize,
    /// 0-based pursuer index.
    pub pursuer: usize,
    pub source: DuelError,
}

/// Per-pair duel classification and values, independent of the penalty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairTable {
    m: usize,
    n: usize,
    pairs: Vec<PairInfo>,
}

impl PairTable {
    pub fn build(s: &Scenario) -> Result<Self, PairError> {
        let (m, n) = (s.num_evaders(), s.num_pursuers());
        let mut pairs = Vec::with_capacity(m * n);
        for (i, e) in s.evaders().iter().enumerate() {
            for (j, p) in s.pursuers().iter().enumerate() {
                let state = DuelState::new(e.position, p.position, e.speed, p.speed);
                let alpha = state.alpha();
                let barrier = duel::barrier_1v1(&state);
                let err = |source| PairError { evader: i, pursuer: j, source };
                let info = if !s.speed_ratio(i, j).is_supported() {
                    PairInfo { kind: PairKind::Unsupported, alpha, barrier, value: None }
                } else if barrier > 0.0 {
                    let v = duel::value_pursuer_region(&state).map_err(err)?;
                    PairInfo { kind: PairKind::Capture, alpha, barrier, value: Some(v.value) }
                } else {
                    let value = match duel::value_evader_region(&state) {
                        Ok(v) => v.value,
                        Err(DuelError::SingularGradient { value }) => value,
                        Err(e) => return Err(err(e)),
                    };
                    PairInfo { kind: PairKind::Escape, alpha, barrier, value: Some(value) }
                };
                pairs.push(info);
            }
        }
        Ok(Self { m, n, pairs })
    }

    pub fn num_evaders(&self) -> usize {
        self.m
    }

    pub fn num_pursuers(&self) -> usize {
        self.n
    }

    pub fn get(&self, evader: usize, pursuer: usize) -> &PairInfo {
        &self.pairs[evader * self.n + pursuer]
    }

    /// `L*`: sum over evaders of the best capture value, 0 for evaders nobody captures.
    pub fn best_case_payoff(&self) -> f64 {
        (0..self.m)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.get(i, j))
                    .filter(|p| p.kind == PairKind::Capture)
                    .filter_map(|p| p.value)
                    .fold(0.0f64, f64::max)
            })
            .sum()
    }

    /// `L̄*`: twice the sum over evaders of the largest `|V|` among supported pairs.
    pub fn refinement_bound(&self) -> f64 {
        2.0 * (0..self.m)
            .map(|i| {
                (0..self.n)
                    .filter_map(|j| self.get(i, j).value)
                    .map(f64::abs)
                    .fold(0.0f64, f64::max)
            })
            .sum::<f64>()
    }

    /// Default penalty `10 · max(L*, L̄*, 1)`.
    pub fn default_penalty(&self) -> f64 {
        10.0 * self.best_case_payoff().max(self.refinement_bound()).max(1.0)
    }

    pub fn payoff_matrix(&self, penalty: f64) -> PayoffMatrix {
        let mut a = Matrix::zeros(self.m, self.n);
        for i in 0..self.m {
            for j in 0..self.n {
                let p = self.get(i, j);
                let entry = match (p.kind, p.value) {
                    (PairKind::Capture, Some(v)) => v,
                    _ => -penalty,
                };
                a.set(i, j, entry);
            }
        }
        PayoffMatrix { entries: a, penalty }
    }

    pub fn value_matrix(&self, penalty: f64) -> ValueMatrix {
        let mut v = Matrix::zeros(self.m, self.n);
        let mut unsupported = vec![false; self.m * self.n];
        for i in 0..self.m {
            for j in 0..self.n {
                let p = self.get(i, j);
                v.set(i, j, p.value.unwrap_or(-penalty));
                unsupported[i * self.n + j] = p.kind == PairKind::Unsupported;
            }
        }
        ValueMatrix { entries: v, unsupported, penalty }
    }
}

/// Pursuer-team payoff per pair: the capture value, or `−L` when the pursuer cannot win the duel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PayoffMatrix {
    entries: Matrix,
    penalty: f64,
}

impl PayoffMatrix {
    /// Wraps a literal `m × n` matrix; `penalty` is the `L` it was built with.
    pub fn from_rows(rows: Vec<Vec<f64>>, penalty: f64) -> Self {
        let entries = Matrix::from_rows(rows);
        assert!(entries.rows() <= entries.cols(), "payoff matrix needs m ≤ n");
        Self { entries, penalty }
    }

    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    pub fn penalty(&self) -> f64 {
        self.penalty
    }

    pub fn get(&self, evader: usize, pursuer: usize) -> f64 {
        self.entries.get(evader, pursuer)
    }

    /// `Ψ`, summed in evader order.
    pub fn team_payoff(&self, assignment: &Assignment) -> f64 {
        self.team_payoff_of(assignment.as_slice())
    }

    pub(crate) fn team_payoff_of(&self, pursuer_of: &[usize]) -> f64 {
        pursuer_of.iter().enumerate().fold(0.0, |acc, (i, &j)| acc + self.entries.get(i, j))
    }

    /// Number of assigned pairs the pursuer loses (entries `≤ 0`, i.e. `−L`).
    pub fn losing_pairs(&self, assignment: &Assignment) -> usize {
        assignment.pairs().filter(|&(i, j)| self.entries.get(i, j) <= 0.0).count()
    }
}

/// Duel value per pair in both regions, `−L` for unsupported pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValueMatrix {
    entries: Matrix,
    unsupported: Vec<bool>,
    penalty: f64,
}

impl ValueMatrix {
    pub fn entries(&self) -> &Matrix {
        &self.entries
    }

    pub fn get(&self, evader: usize, pursuer: usize) -> f64 {
        self.entries.get(evader, pursuer)
    }

    pub fn is_unsupported(&self, evader: usize, pursuer: usize) -> bool {
        self.unsupported[evader * self.entries.cols() + pursuer]
    }

    pub fn total(&self, assignment: &Assignment) -> f64 {
        assignment.pairs().fold(0.0, |acc, (i, j)| acc + self.entries.get(i, j))
    }

    /// Number of assigned pairs with `α > 1`.
    pub fn unsupported_pairs(&self, assignment: &Assignment) -> usize {
        assignment.pairs().filter(|&(i, j)| self.is_unsupported(i, j)).count()
    }
}

/// Assignments sharing the optimal objective, sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimalAssignmentSet {
    pub assignments: Vec<Assignment>,
    /// The optimal objective: `Ψ` for `Γ*`, the value-matrix total for `Θ*`.
    pub team_payoff: f64,
}

impl OptimalAssignmentSet {
    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn first(&self) -> &Assignment {
        &self.assignments[0]
    }

    pub fn contains(&self, a: &Assignment) -> bool {
        self.assignments.binary_search(a).is_ok()
    }
}

/// Allowed shortfall from `optimum`: relative when `|optimum| > 1`, absolute otherwise.
pub fn tie_threshold(optimum: f64, tie_tolerance: f64) -> f64 {
    tie_tolerance * optimum.abs().max(1.0)
}

pub fn build_payoff_matrix(s: &Scenario) -> Result<PayoffMatrix, PairError> {
    let table = PairTable::build(s)?;
    let penalty = s.penalty().unwrap_or_else(|| table.default_penalty());
    Ok(table.payoff_matrix(penalty))
}

pub fn build_value_matrix(s: &Scenario) -> Result<ValueMatrix, PairError> {
    let table = PairTable::build(s)?;
    let penalty = s.penalty().unwrap_or_else(|| table.default_penalty());
    Ok(table.value_matrix(penalty))
}

/// `L*` for a scenario.
pub fn best_case_payoff(s: &Scenario) -> Result<f64, PairError> {
    Ok(PairTable::build(s)?.best_case_payoff())
}

/// `L̄*` for a scenario.
pub fn refinement_bound(s: &Scenario) -> Result<f64, PairError> {
    Ok(PairTable::build(s)?.refinement_bound())
}

/// The scenario's penalty, or `10 · max(L*, L̄*, 1)` when it has none.
pub fn effective_penalty(s: &Scenario) -> Result<f64, PairError> {
    match s.penalty() {
        Some(l) => Ok(l),
        None => Ok(PairTable::build(s)?.default_penalty()),
    }
}

/// One maximizer of the team payoff.
pub fn solve_assignment_lp(p: &PayoffMatrix) -> Assignment {
    let cols = max_weight_matching(p.entries(), |_, _| false).expect("m ≤ n is always feasible");
    Assignment::new(cols, p.entries().cols()).expect("matching is one-to-one")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("optimal set has more than {cap} members")]
pub struct TooManyOptima {
    pub cap: usize,
}

/// Every assignment whose payoff is within the tie tolerance of the optimum.
pub fn enumerate_optimal_set(p: &PayoffMatrix, tie_tolerance: f64) -> OptimalAssignmentSet {
    enumerate_optimal_set_capped(p, tie_tolerance, DEFAULT_MEMBER_CAP)
        .expect("optimal set exceeds the default member cap")
}

pub fn enumerate_optimal_set_capped(
    p: &PayoffMatrix,
    tie_tolerance: f64,
    cap: usize,
) -> Result<OptimalAssignmentSet, TooManyOptima> {
    let mut ranked = RankedAssignments::new(p);
    let (first, best) = ranked.next().expect("m ≤ n is always feasible");
    let floor = best - tie_threshold(best, tie_tolerance);
    let mut assignments = vec![first];
    while ranked.peek_payoff().is_some_and(|v| v >= floor) {
        if assignments.len() == cap {
            return Err(TooManyOptima { cap });
        }
        assignments.push(ranked.next().expect("peeked").0);
    }
    assignments.sort();
    Ok(OptimalAssignmentSet { assignments, team_payoff: best })
}

/// `Θ*`: the members of `Γ*` with the largest value-matrix total.
pub fn refine_theta_star(gamma_star: &OptimalAssignmentSet, v: &ValueMatrix, tie_tolerance: f64) -> OptimalAssignmentSet {
    assert!(!gamma_star.is_empty(), "Γ* must be non-empty");
    let totals: Vec<f64> = gamma_star.assignments.iter().map(|a| v.total(a)).collect();
    let best = totals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let floor = best - tie_threshold(best, tie_tolerance);
    let assignments = gamma_star
        .assignments
        .iter()
        .zip(&totals)
        .filter(|(_, &t)| t >= floor)
        .map(|(a, _)| a.clone())
        .collect();
    OptimalAssignmentSet { assignments, team_payoff: best }
}
