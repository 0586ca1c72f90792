//! Property checks shared by the test suites and the command-line `verify`.
//!
//! Each check returns a [`PropertyReport`] rather than panicking, so callers
//! can print every outcome. Cases where a property is undefined (coincident
//! players, `α > 1`, a state on the wrong side of a region boundary) count as
//! skipped, not failed.

use serde::{Deserialize, Serialize};

use crate::assignment::{
    brute_force_assignment, enumerate_optimal_set, for_each_feasible, refine_theta_star, solve_assignment_lp,
    tie_threshold, PairTable, PayoffMatrix, TooLarge, DEFAULT_BRUTE_FORCE_CAP,
};
use crate::duel::{self, DuelRegion, DuelState, DuelValue};
use crate::game::team_barrier;
use crate::model::Scenario;
use crate::vec3::Vec3;

pub const HJI_TOLERANCE: f64 = 1e-9;
pub const GRADIENT_TOLERANCE: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub name: String,
    pub passed: bool,
    pub checked: usize,
    pub skipped: usize,
    /// Largest residual or violation seen; 0 for counting properties that hold.
    pub worst: f64,
    pub note: String,
}

impl PropertyReport {
    fn new(name: &str) -> Self {
        Self { name: name.to_string(), passed: true, checked: 0, skipped: 0, worst: 0.0, note: String::new() }
    }

    fn fail(&mut self, note: impl Into<String>) {
        if self.passed {
            self.note = note.into();
        }
        self.passed = false;
    }

    /// Merges reports of the same property over several inputs.
    pub fn absorb(&mut self, other: &PropertyReport) {
        if !other.passed && self.passed {
            self.note = other.note.clone();
        }
        self.passed &= other.passed;
        self.checked += other.checked;
        self.skipped += other.skipped;
        self.worst = self.worst.max(other.worst);
    }
}

/// Duel states for every evader/pursuer pair of a scenario.
pub fn pair_states(s: &Scenario) -> Vec<DuelState> {
    let mut out = Vec::with_capacity(s.num_evaders() * s.num_pursuers());
    for e in s.evaders() {
        for p in s.pursuers() {
            out.push(DuelState::new(e.position, p.position, e.speed, p.speed));
        }
    }
    out
}

fn region_value(s: &DuelState) -> Option<DuelValue> {
    if !s.is_supported() {
        return None;
    }
    duel::value(s).ok()
}

/// `|−α ρ_E + ρ_P| < tol` at every state with a defined gradient.
pub fn hji_residual(states: &[DuelState], tol: f64) -> PropertyReport {
    let mut r = PropertyReport::new("hji_residual");
    for s in states {
        let Some(v) = region_value(s) else {
            r.skipped += 1;
            continue;
        };
        // Evader on the target: the evader gradient is undefined.
        if v.region == DuelRegion::EvaderWins && s.evader.norm() == 0.0 {
            r.skipped += 1;
            continue;
        }
        r.checked += 1;
        let res = v.hji_residual(s.alpha()).abs();
        r.worst = r.worst.max(res);
        if res.is_nan() || res >= tol {
            r.fail(format!("residual {res:e} at {s:?}"));
        }
    }
    r
}

fn central_difference(s: &DuelState, region: DuelRegion) -> Option<(Vec3, Vec3)> {
    let value_at = |e: Vec3, p: Vec3| {
        let st = DuelState::new(e, p, s.evader_speed, s.pursuer_speed);
        match duel::value_in_region(&st, region) {
            Ok(v) => Some(v.value),
            Err(duel::DuelError::SingularGradient { value }) => Some(value),
            Err(_) => None,
        }
    };
    let h = 1e-6 * s.evader.norm().max(s.pursuer.norm()).max(1.0);
    let mut ge = Vec3::ZERO;
    let mut gp = Vec3::ZERO;
    for k in 0..3 {
        let e_plus = s.evader.with_component(k, s.evader.component(k) + h);
        let e_minus = s.evader.with_component(k, s.evader.component(k) - h);
        ge = ge.with_component(k, (value_at(e_plus, s.pursuer)? - value_at(e_minus, s.pursuer)?) / (2.0 * h));
        let p_plus = s.pursuer.with_component(k, s.pursuer.component(k) + h);
        let p_minus = s.pursuer.with_component(k, s.pursuer.component(k) - h);
        gp = gp.with_component(k, (value_at(s.evader, p_plus)? - value_at(s.evader, p_minus)?) / (2.0 * h));
    }
    Some((ge, gp))
}

/// Analytic gradients agree with central finite differences to relative `tol`.
///
/// States whose stencil leaves the region, or that sit at a kink of the value
/// (a player on the target), are skipped.
pub fn gradient_check(states: &[DuelState], tol: f64) -> PropertyReport {
    let mut r = PropertyReport::new("gradient_finite_difference");
    for s in states {
        let Some(v) = region_value(s) else {
            r.skipped += 1;
            continue;
        };
        let scale = s.evader.norm().max(s.pursuer.norm()).max(1.0);
        let kink = s.evader.norm() < 1e-3 * scale || s.pursuer.norm() < 1e-3 * scale;
        let near_coincident = s.evader.distance(s.pursuer) < 1e-3 * scale;
        if kink || near_coincident {
            r.skipped += 1;
            continue;
        }
        let Some((ge, gp)) = central_difference(s, v.region) else {
            r.skipped += 1;
            continue;
        };
        r.checked += 1;
        for (fd, an) in [(ge, v.grad_evader), (gp, v.grad_pursuer)] {
            let err = (fd - an).norm() / an.norm().max(1e-12);
            r.worst = r.worst.max(err);
            if err.is_nan() || err >= tol {
                r.fail(format!("relative gradient error {err:e} at {s:?}"));
            }
        }
    }
    r
}

/// Hungarian optimum equals the brute-force optimum within the tie tolerance.
pub fn oracle_equivalence(matrices: &[PayoffMatrix], tie_tolerance: f64, cap: u128) -> PropertyReport {
    let mut r = PropertyReport::new("oracle_equivalence");
    for p in matrices {
        let brute = match brute_force_assignment(p, tie_tolerance, cap) {
            Ok(b) => b,
            Err(TooLarge { .. }) => {
                r.skipped += 1;
                continue;
            }
        };
        r.checked += 1;
        let lp = solve_assignment_lp(p);
        let gap = (p.team_payoff(&lp) - brute.team_payoff).abs();
        r.worst = r.worst.max(gap);
        if gap > tie_threshold(brute.team_payoff, tie_tolerance) {
            r.fail(format!("Hungarian {} vs brute force {}", p.team_payoff(&lp), brute.team_payoff));
        } else if !brute.contains(&lp) {
            r.fail(format!("Hungarian assignment {lp} is not in the brute-force optimal set"));
        }
        let set = enumerate_optimal_set(p, tie_tolerance);
        if set.assignments != brute.assignments {
            r.fail(format!("ranked enumeration found {} optima, brute force {}", set.len(), brute.len()));
        }
    }
    r
}

/// Every member of `Γ*` leaves the same number of pairs at `−L`.
pub fn equal_loss_count(matrices: &[PayoffMatrix], tie_tolerance: f64) -> PropertyReport {
    let mut r = PropertyReport::new("equal_loss_count");
    for p in matrices {
        r.checked += 1;
        let set = enumerate_optimal_set(p, tie_tolerance);
        let counts: Vec<usize> = set.assignments.iter().map(|a| p.losing_pairs(a)).collect();
        let spread = counts.iter().max().unwrap() - counts.iter().min().unwrap();
        r.worst = r.worst.max(spread as f64);
        if spread != 0 {
            r.fail(format!("loss counts {counts:?} differ across the optimal set"));
        }
    }
    r
}

/// With `L > L*`, optimal members lose no more pairs than any feasible assignment.
pub fn minimum_leakage(matrices: &[PayoffMatrix], tie_tolerance: f64, cap: u128) -> PropertyReport {
    let mut r = PropertyReport::new("minimum_leakage");
    for p in matrices {
        let l_star: f64 = (0..p.entries().rows())
            .map(|i| p.entries().row(i).iter().copied().filter(|&a| a > 0.0).fold(0.0, f64::max))
            .sum();
        let (m, n) = (p.entries().rows(), p.entries().cols());
        let too_big = crate::assignment::feasible_count(m, n).is_none_or(|c| c > cap);
        if p.penalty() <= l_star || too_big {
            r.skipped += 1;
            continue;
        }
        r.checked += 1;
        let mut fewest = usize::MAX;
        for_each_feasible(p, |sol, _| {
            let losses = sol.iter().enumerate().filter(|&(i, &j)| p.get(i, j) <= 0.0).count();
            fewest = fewest.min(losses);
        });
        let set = enumerate_optimal_set(p, tie_tolerance);
        for a in &set.assignments {
            let losses = p.losing_pairs(a);
            if losses > fewest {
                r.worst = r.worst.max((losses - fewest) as f64);
                r.fail(format!("optimal {a} loses {losses} pairs, {fewest} is possible"));
            }
        }
    }
    r
}

/// Properties of a single scenario's assignment structure.
pub fn scenario_suite(s: &Scenario) -> Vec<PropertyReport> {
    let states = pair_states(s);
    let mut reports = vec![hji_residual(&states, HJI_TOLERANCE), gradient_check(&states, GRADIENT_TOLERANCE)];
    let names = ["oracle_equivalence", "equal_loss_count", "barrier_invariance", "theta_subset", "refinement_minimizes_unsupported"];
    let table = match PairTable::build(s) {
        Ok(t) => t,
        Err(e) => {
            for name in names {
                let mut r = PropertyReport::new(name);
                r.skipped = 1;
                r.note = format!("degenerate geometry: {e}");
                reports.push(r);
            }
            return reports;
        }
    };
    let penalty = s.penalty().unwrap_or_else(|| table.default_penalty());
    let p = table.payoff_matrix(penalty);
    let v = table.value_matrix(penalty);
    let tol = s.tie_tolerance();
    reports.push(oracle_equivalence(std::slice::from_ref(&p), tol, DEFAULT_BRUTE_FORCE_CAP));
    reports.push(equal_loss_count(std::slice::from_ref(&p), tol));

    let gamma = enumerate_optimal_set(&p, tol);
    let mut inv = PropertyReport::new("barrier_invariance");
    inv.checked = 1;
    let signs: Vec<bool> = gamma.assignments.iter().map(|a| team_barrier(&p, a) > 0.0).collect();
    if signs.iter().any(|&x| x != signs[0]) {
        inv.fail("team barrier sign differs across the optimal set");
    }
    reports.push(inv);

    let theta = refine_theta_star(&gamma, &v, tol);
    let mut sub = PropertyReport::new("theta_subset");
    sub.checked = 1;
    if !theta.assignments.iter().all(|a| gamma.contains(a)) {
        sub.fail("refined set is not contained in the optimal set");
    }
    sub.note = if theta.len() < gamma.len() {
        format!("refinement kept {} of {} optimal assignments", theta.len(), gamma.len())
    } else {
        format!("refinement kept all {} optimal assignments", gamma.len())
    };
    reports.push(sub);

    let mut l6 = PropertyReport::new("refinement_minimizes_unsupported");
    if penalty > table.refinement_bound() {
        l6.checked = 1;
        let fewest = gamma.assignments.iter().map(|a| v.unsupported_pairs(a)).min().unwrap_or(0);
        for a in &theta.assignments {
            let k = v.unsupported_pairs(a);
            if k > fewest {
                l6.worst = l6.worst.max((k - fewest) as f64);
                l6.fail(format!("refined {a} keeps {k} pairs with α > 1, {fewest} is possible"));
            }
        }
    } else {
        l6.skipped = 1;
        l6.note = "penalty does not exceed the refinement bound".into();
    }
    reports.push(l6);
    reports
}
