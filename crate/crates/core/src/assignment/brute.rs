//! Exhaustive enumeration of feasible assignments.

use thiserror::Error;

use super::{tie_threshold, OptimalAssignmentSet, PayoffMatrix};
use crate::model::Assignment;

/// Default cap on the number of feasible assignments brute force will visit.
pub const DEFAULT_BRUTE_FORCE_CAP: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{} feasible assignments exceed the brute-force cap of {cap}", .count.map_or("too many".to_string(), |c| c.to_string()))]
pub struct TooLarge {
    /// `None` when the count itself overflows.
    pub count: Option<u128>,
    pub cap: u128,
}

/// `n! / (n − m)!`, the number of feasible assignments, or `None` on overflow.
pub fn feasible_count(m: usize, n: usize) -> Option<u128> {
    if m > n {
        return Some(0);
    }
    (n - m + 1..=n).try_fold(1u128, |acc, k| acc.checked_mul(k as u128))
}

/// Calls `visit` with every feasible pursuer list (indexed by evader) and its
/// team payoff, summed in evader order.
pub fn for_each_feasible(p: &PayoffMatrix, mut visit: impl FnMut(&[usize], f64)) {
    let a = p.entries();
    let (m, n) = (a.rows(), a.cols());
    let mut chosen = Vec::with_capacity(m);
    let mut used = vec![false; n];
    fn recurse(
        a: &super::Matrix,
        row: usize,
        partial: f64,
        chosen: &mut Vec<usize>,
        used: &mut [bool],
        visit: &mut dyn FnMut(&[usize], f64),
    ) {
        if row == a.rows() {
            visit(chosen, partial);
            return;
        }
        for j in 0..a.cols() {
            if used[j] {
                continue;
            }
            used[j] = true;
            chosen.push(j);
            recurse(a, row + 1, partial + a.get(row, j), chosen, used, visit);
            chosen.pop();
            used[j] = false;
        }
    }
    if m <= n {
        recurse(a, 0, 0.0, &mut chosen, &mut used, &mut visit);
    }
}

/// Exact optimal set by exhaustive enumeration, refusing instances larger than `cap`.
pub fn brute_force_assignment(p: &PayoffMatrix, tie_tolerance: f64, cap: u128) -> Result<OptimalAssignmentSet, TooLarge> {
    let (m, n) = (p.entries().rows(), p.entries().cols());
    let count = feasible_count(m, n);
    match count {
        Some(c) if c <= cap => {}
        _ => return Err(TooLarge { count, cap }),
    }
    let mut best = f64::NEG_INFINITY;
    let mut candidates: Vec<(Vec<usize>, f64)> = Vec::new();
    for_each_feasible(p, |sol, payoff| {
        if payoff > best {
            best = payoff;
            let thr = tie_threshold(best, tie_tolerance);
            candidates.retain(|(_, v)| *v >= best - thr);
        }
        if payoff >= best - tie_threshold(best, tie_tolerance) {
            candidates.push((sol.to_vec(), payoff));
        }
    });
    let thr = tie_threshold(best, tie_tolerance);
    let mut assignments: Vec<Assignment> = candidates
        .into_iter()
        .filter(|(_, v)| *v >= best - thr)
        .map(|(sol, _)| Assignment::new(sol, n).expect("enumerated assignment is feasible"))
        .collect();
    assignments.sort();
    Ok(OptimalAssignmentSet { assignments, team_payoff: best })
}
