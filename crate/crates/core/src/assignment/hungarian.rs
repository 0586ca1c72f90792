//! Rectangular Hungarian method (shortest augmenting paths with potentials).
//!
//! Works on `rows ≤ cols` directly: every row is matched, surplus columns stay
//! free. That is the same optimum as padding with zero-weight dummy rows.

use super::Matrix;

/// Maximum-weight matching of every row to a distinct column.
///
/// `forbidden(i, j)` removes edge `(i, j)`. Returns `None` when no complete
/// row matching avoids the forbidden edges.
pub fn max_weight_matching(weights: &Matrix, forbidden: impl Fn(usize, usize) -> bool) -> Option<Vec<usize>> {
    let (n, m) = (weights.rows(), weights.cols());
    assert!(n <= m, "matching needs rows ≤ cols, got {n}×{m}");
    if n == 0 {
        return Some(Vec::new());
    }
    let cost = |i: usize, j: usize| -> f64 {
        if forbidden(i, j) {
            f64::INFINITY
        } else {
            -weights.get(i, j)
        }
    };

    // 1-based potentials; column 0 is the virtual root of each augmentation.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; m + 1];
    let mut row_of = vec![0usize; m + 1];
    let mut way = vec![0usize; m + 1];

    for i in 1..=n {
        row_of[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; m + 1];
        let mut used = vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=m {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            if !delta.is_finite() {
                return None;
            }
            for j in 0..=m {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut col_of = vec![0usize; n];
    for j in 1..=m {
        if row_of[j] != 0 {
            col_of[row_of[j] - 1] = j - 1;
        }
    }
    Some(col_of)
}
