//! Timing of brute-force enumeration against the assignment solver on random
//! scenarios.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use radg_core::assignment::{brute_force_assignment, build_payoff_matrix, feasible_count, solve_assignment_lp, tie_threshold};

use crate::{random_scenario, trial_rng};

pub const DEFAULT_SIZES: &[(usize, usize)] = &[(3, 3), (7, 5), (10, 8), (11, 7), (12, 10), (20, 15), (50, 40), (100, 100)];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    /// Mean seconds, `None` when the feasible set exceeds the cap.
    pub brute_force_seconds: Option<f64>,
    pub lp_seconds: f64,
    pub payoff_matrix_build_seconds: f64,
    /// Whether brute force and the solver found the same optimum in every trial.
    pub agree: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub seed: u64,
    pub trials: usize,
    pub cap: u128,
    pub rows: Vec<BenchRow>,
}

struct Trial {
    build: f64,
    lp: f64,
    brute: Option<(f64, bool)>,
}

fn run_trial(seed: u64, n: usize, m: usize, k: usize, cap: u128) -> Trial {
    let s = random_scenario(&mut trial_rng(seed, n, m, k), n, m);
    let t0 = Instant::now();
    let p = build_payoff_matrix(&s).expect("random scenarios have no coincident players");
    let build = t0.elapsed().as_secs_f64();
    let t1 = Instant::now();
    let lp = solve_assignment_lp(&p);
    let lp_time = t1.elapsed().as_secs_f64();
    let brute = match feasible_count(m, n) {
        Some(c) if c <= cap => {
            let t2 = Instant::now();
            let set = brute_force_assignment(&p, s.tie_tolerance(), cap).expect("count checked against the cap");
            let secs = t2.elapsed().as_secs_f64();
            let best = p.team_payoff(&lp);
            Some((secs, (set.team_payoff - best).abs() <= tie_threshold(best, s.tie_tolerance())))
        }
        _ => None,
    };
    Trial { build, lp: lp_time, brute }
}

pub fn run(sizes: &[(usize, usize)], trials: usize, seed: u64, cap: u128) -> BenchReport {
    let rows = sizes
        .iter()
        .map(|&(n, m)| {
            let results: Vec<Trial> = (0..trials).into_par_iter().map(|k| run_trial(seed, n, m, k, cap)).collect();
            let mean = |f: &dyn Fn(&Trial) -> f64| results.iter().map(f).sum::<f64>() / trials as f64;
            let brute: Option<Vec<(f64, bool)>> = results.iter().map(|t| t.brute).collect();
            BenchRow {
                n,
                m,
                brute_force_seconds: brute.as_ref().map(|b| b.iter().map(|x| x.0).sum::<f64>() / trials as f64),
                lp_seconds: mean(&|t| t.lp),
                payoff_matrix_build_seconds: mean(&|t| t.build),
                agree: brute.map(|b| b.iter().all(|x| x.1)),
            }
        })
        .collect();
    BenchReport { seed, trials, cap, rows }
}

impl BenchReport {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:>9}  {:>16}  {:>12}  {:>17}  {:>5}", "n,m", "brute force (s)", "LP (s)", "matrix build (ms)", "agree");
        for r in &self.rows {
            let brute = r.brute_force_seconds.map_or("NA".to_string(), |b| format!("{b:.6}"));
            let agree = r.agree.map_or("-", |a| if a { "yes" } else { "NO" });
            let _ = writeln!(
                out,
                "{:>9}  {brute:>16}  {:>12.6}  {:>17.4}  {agree:>5}",
                format!("{},{}", r.n, r.m),
                r.lp_seconds,
                r.payoff_matrix_build_seconds * 1e3
            );
        }
        out
    }
}

/// Parses `"(n,m),(n,m),..."`, requiring `n ≥ m ≥ 1`.
pub fn parse_sizes(text: &str) -> Result<Vec<(usize, usize)>, String> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = compact
        .strip_prefix('(')
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| format!("expected \"(n,m),...\", got {text:?}"))?;
    inner
        .split("),(")
        .map(|cell| {
            let (n, m) = cell.split_once(',').ok_or_else(|| format!("expected n,m in {cell:?}"))?;
            let n: usize = n.parse().map_err(|_| format!("bad pursuer count {n:?}"))?;
            let m: usize = m.parse().map_err(|_| format!("bad evader count {m:?}"))?;
            if m == 0 || n < m {
                return Err(format!("size ({n},{m}) needs n ≥ m ≥ 1"));
            }
            Ok((n, m))
        })
        .collect()
}
