//! Ranked enumeration of assignments by Murty's partitioning scheme.
//!
//! Each search node fixes some `(row, col)` pairs and forbids others. Popping
//! the best node and splitting its solution into disjoint subproblems yields
//! assignments in non-increasing payoff order.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use super::hungarian::max_weight_matching;
use super::{Matrix, PayoffMatrix};
use crate::model::Assignment;

#[derive(Debug, Clone)]
struct Node {
    forced: Vec<(usize, usize)>,
    forbidden: Vec<(usize, usize)>,
    solution: Vec<usize>,
    payoff: f64,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    // Max-heap on payoff; equal payoffs pop in lexicographic order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.payoff
            .total_cmp(&other.payoff)
            .then_with(|| other.solution.cmp(&self.solution))
    }
}

/// Iterator over all feasible assignments in non-increasing payoff order.
pub struct RankedAssignments<'a> {
    payoff: &'a PayoffMatrix,
    heap: BinaryHeap<Node>,
}

impl<'a> RankedAssignments<'a> {
    pub fn new(payoff: &'a PayoffMatrix) -> Self {
        let mut heap = BinaryHeap::new();
        if let Some(root) = solve_node(payoff, Vec::new(), Vec::new()) {
            heap.push(root);
        }
        Self { payoff, heap }
    }

    /// Payoff of the next assignment without consuming it.
    pub fn peek_payoff(&self) -> Option<f64> {
        self.heap.peek().map(|n| n.payoff)
    }
}

impl Iterator for RankedAssignments<'_> {
    type Item = (Assignment, f64);

    fn next(&mut self) -> Option<Self::Item> {
        let node = self.heap.pop()?;
        let free_rows: Vec<usize> = (0..node.solution.len())
            .filter(|r| !node.forced.iter().any(|&(fr, _)| fr == *r))
            .collect();
        let mut forced = node.forced.clone();
        for &r in &free_rows {
            let mut forbidden = node.forbidden.clone();
            forbidden.push((r, node.solution[r]));
            if let Some(child) = solve_node(self.payoff, forced.clone(), forbidden) {
                self.heap.push(child);
            }
            forced.push((r, node.solution[r]));
        }
        let n = self.payoff.entries().cols();
        let assignment = Assignment::new(node.solution, n).expect("matching is feasible");
        Some((assignment, node.payoff))
    }
}

fn solve_node(p: &PayoffMatrix, forced: Vec<(usize, usize)>, forbidden: Vec<(usize, usize)>) -> Option<Node> {
    let a = p.entries();
    let (m, n) = (a.rows(), a.cols());
    let free_rows: Vec<usize> = (0..m).filter(|r| !forced.iter().any(|&(fr, _)| fr == *r)).collect();
    let free_cols: Vec<usize> = (0..n).filter(|c| !forced.iter().any(|&(_, fc)| fc == *c)).collect();
    let mut sub = Matrix::zeros(free_rows.len(), free_cols.len());
    for (si, &r) in free_rows.iter().enumerate() {
        for (sj, &c) in free_cols.iter().enumerate() {
            sub.set(si, sj, a.get(r, c));
        }
    }
    let is_forbidden = |si: usize, sj: usize| forbidden.contains(&(free_rows[si], free_cols[sj]));
    let cols = max_weight_matching(&sub, is_forbidden)?;
    let mut solution = vec![0usize; m];
    for &(r, c) in &forced {
        solution[r] = c;
    }
    for (si, &sj) in cols.iter().enumerate() {
        solution[free_rows[si]] = free_cols[sj];
    }
    let payoff = p.team_payoff_of(&solution);
    Some(Node { forced, forbidden, solution, payoff })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_all_permutations_of_small_matrix() {
        let p = PayoffMatrix::from_rows(vec![vec![3.0, 1.0, 0.0], vec![2.0, 5.0, 4.0]], 10.0);
        let ranked: Vec<(Assignment, f64)> = RankedAssignments::new(&p).collect();
        assert_eq!(ranked.len(), 6);
        assert!(ranked.windows(2).all(|w| w[0].1 >= w[1].1));
        assert_eq!(ranked[0].0.as_slice(), &[0, 1]);
        assert_eq!(ranked[0].1, 8.0);
        let mut seen: Vec<_> = ranked.iter().map(|(a, _)| a.clone()).collect();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 6);
    }
}
