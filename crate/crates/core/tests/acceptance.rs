//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

mod support;

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use radg_core::assignment::{
    brute_force_assignment, build_payoff_matrix, build_value_matrix, enumerate_optimal_set, solve_assignment_lp,
    PairTable, PayoffMatrix, TooLarge, DEFAULT_BRUTE_FORCE_CAP,
};
use radg_core::duel::{self, DuelRegion};
use radg_core::game::{self, Team};
use radg_core::model::DEFAULT_TIE_TOLERANCE;
use radg_core::sim::{self, StrategyProfile};
use radg_core::verify::{gradient_check, hji_residual};
use radg_core::{presets, Assignment, Scenario};

const VALUE_TOL_EX2: f64 = 0.05;
const VALUE_TOL_EX3: f64 = 0.05;
const VALUE_TOL_EX4: f64 = 0.02;

struct Outcome {
    passed: bool,
    detail: String,
}

#[derive(Default)]
struct Checks {
    parts: Vec<String>,
    passed: bool,
}

impl Checks {
    fn new() -> Self {
        Self { parts: Vec::new(), passed: true }
    }

    fn check(&mut self, ok: bool, what: String) {
        self.passed &= ok;
        self.parts.push(format!("{}{}", if ok { "" } else { "✗ " }, what));
    }

    fn done(self) -> Outcome {
        Outcome { passed: self.passed, detail: self.parts.join("; ") }
    }
}

fn pairs(s: &str, m: usize, n: usize) -> Assignment {
    let p: Vec<(usize, usize)> = s
        .split(',')
        .map(|t| {
            let b = t.trim().as_bytes();
            ((b[0] - b'0') as usize, (b[1] - b'0') as usize)
        })
        .collect();
    Assignment::from_one_based(&p, m, n).unwrap()
}

fn set_eq(got: &[Assignment], want: &[Assignment]) -> bool {
    let mut w = want.to_vec();
    w.sort();
    got == w.as_slice()
}

fn fmt_set(set: &[Assignment]) -> String {
    set.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" ")
}

fn example2() -> Outcome {
    let s = presets::three_on_three_pursuer_win();
    let mut c = Checks::new();
    let start = Instant::now();
    let sol = game::solve(&s).unwrap();
    let elapsed = start.elapsed();
    c.check(sol.winner == Team::PursuerTeam, format!("winner {:?}", sol.winner));
    let want = pairs("12,21,33", 3, 3);
    c.check(sol.gamma_star.assignments == vec![want.clone()], format!("Γ* {} (want {want})", fmt_set(&sol.gamma_star.assignments)));
    c.check((sol.value - 18.63).abs() <= VALUE_TOL_EX2, format!("value {:.4} (want 18.63 ± {VALUE_TOL_EX2})", sol.value));
    c.check(
        (sol.best_case_payoff - 23.84).abs() <= 0.05,
        format!("L* {:.4} (want 23.84 ± 0.05)", sol.best_case_payoff),
    );
    let low = build_payoff_matrix(&s.with_penalty(1.0).unwrap()).unwrap();
    let lp = solve_assignment_lp(&low);
    c.check(lp == pairs("13,21,32", 3, 3), format!("L=1 assignment {lp} (want {{13,21,32}})"));
    c.check(elapsed < Duration::from_secs(1), format!("solve took {elapsed:?}"));
    c.done()
}

fn example2_deviation() -> Outcome {
    let s = presets::three_on_three_pursuer_win();
    let sol = game::solve(&s).unwrap();
    let traj = sim::simulate(&s, &sol.chosen, &StrategyProfile::straight_evaders(), sim::default_step(&s)).unwrap();
    let mut c = Checks::new();
    let r = traj.realized_payoff;
    c.check((r - 20.26).abs() <= VALUE_TOL_EX2, format!("realized {r:.4} (want 20.26 ± {VALUE_TOL_EX2})"));
    c.check(r >= 18.63, format!("realized {r:.4} ≥ 18.63"));
    c.parts.push(format!("computed value {:.4}, bound vs computed value holds: {}", sol.value, r >= sol.value));
    c.done()
}

fn example3() -> Outcome {
    let s = presets::three_on_three_evader_win();
    let sol = game::solve(&s).unwrap();
    let v = build_value_matrix(&s).unwrap();
    let mut c = Checks::new();
    let g1 = pairs("21,12,33", 3, 3);
    let g2 = pairs("21,13,32", 3, 3);
    c.check(sol.winner == Team::EvaderTeam, format!("winner {:?}", sol.winner));
    c.check(
        set_eq(&sol.gamma_star.assignments, &[g1.clone(), g2.clone()]),
        format!("Γ* {}", fmt_set(&sol.gamma_star.assignments)),
    );
    c.check(sol.theta_star.assignments == vec![g1.clone()], format!("Θ* {} (want {g1})", fmt_set(&sol.theta_star.assignments)));
    let (t1, t2) = (v.total(&g1), v.total(&g2));
    c.check((t1 - 3.21).abs() <= VALUE_TOL_EX3, format!("refined {g1} = {t1:.4} (want 3.21)"));
    c.check((t2 - 2.58).abs() <= VALUE_TOL_EX3, format!("refined {g2} = {t2:.4} (want 2.58)"));
    c.check((sol.value - 3.21).abs() <= VALUE_TOL_EX3, format!("value {:.4}", sol.value));
    let alpha_23 = s.speed_ratio(1, 2).value();
    c.check(alpha_23 > 1.0, format!("α(E2,P3) = {alpha_23:.4} > 1"));
    let excluded = sol.theta_star.assignments.iter().all(|a| a.pursuer_of(1) != 2);
    c.check(excluded, "(E2,P3) not in Θ*".to_string());
    c.done()
}

fn example4() -> Outcome {
    let s = presets::dispersal_three_on_two();
    let sol = game::solve(&s).unwrap();
    let mut c = Checks::new();
    let want: Vec<Assignment> = ["13,21", "12,21", "11,23", "11,22"].iter().map(|p| pairs(p, 2, 3)).collect();
    c.check(set_eq(&sol.gamma_star.assignments, &want), format!("Γ* {}", fmt_set(&sol.gamma_star.assignments)));
    c.check((sol.value - 1.54).abs() <= VALUE_TOL_EX4, format!("value {:.4} (want 1.54 ± {VALUE_TOL_EX4})", sol.value));
    c.check(sol.on_dispersal_surface, format!("dispersal {}", sol.on_dispersal_surface));
    c.done()
}

fn tied_matrix() -> Outcome {
    let p = PayoffMatrix::from_rows(presets::tied_payoff_rows(), 100.0);
    let set = enumerate_optimal_set(&p, DEFAULT_TIE_TOLERANCE);
    let want = [pairs("11,22,33", 3, 3), pairs("12,21,33", 3, 3)];
    let mut c = Checks::new();
    c.check(set_eq(&set.assignments, &want), format!("Γ* {}", fmt_set(&set.assignments)));
    c.done()
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut rng = support::rng(0x5eed_0006);
    let mut c = Checks::new();
    let (mut mismatches, mut loss_spread, mut worst_gap) = (0usize, 0usize, 0.0f64);
    for k in 0..1000 {
        use rand::Rng;
        let n = rng.gen_range(1..=6);
        let m = rng.gen_range(1..=n);
        let l = rng.gen_range(1.0..100.0);
        let p = if k % 2 == 0 {
            support::uniform_matrix(&mut rng, m, n, l)
        } else {
            support::penalized_matrix(&mut rng, m, n, l, 0.4)
        };
        let brute = brute_force_assignment(&p, DEFAULT_TIE_TOLERANCE, DEFAULT_BRUTE_FORCE_CAP).unwrap();
        let lp = solve_assignment_lp(&p);
        let gap = (p.team_payoff(&lp) - brute.team_payoff).abs();
        worst_gap = worst_gap.max(gap);
        if gap > DEFAULT_TIE_TOLERANCE * brute.team_payoff.abs().max(1.0) {
            mismatches += 1;
        }
        let set = enumerate_optimal_set(&p, DEFAULT_TIE_TOLERANCE);
        let losses: Vec<usize> = set.assignments.iter().map(|a| p.losing_pairs(a)).collect();
        if losses.iter().any(|&x| x != losses[0]) {
            loss_spread += 1;
        }
    }
    let elapsed = start.elapsed();
    c.check(mismatches == 0, format!("{mismatches}/1000 optimum mismatches (worst gap {worst_gap:e})"));
    c.check(loss_spread == 0, format!("{loss_spread}/1000 optimal sets with unequal loss counts"));
    c.check(elapsed < Duration::from_secs(60), format!("took {elapsed:?}"));
    c.done()
}

fn hji_and_gradients() -> Outcome {
    let mut rng = support::rng(0x5eed_0007);
    let (mut pursuer, mut evader) = (Vec::new(), Vec::new());
    while pursuer.len() < 1000 || evader.len() < 1000 {
        let st = support::duel_state(&mut rng);
        match duel::region(&st) {
            DuelRegion::PursuerWins if pursuer.len() < 1000 => pursuer.push(st),
            DuelRegion::EvaderWins if evader.len() < 1000 => evader.push(st),
            _ => {}
        }
    }
    let mut c = Checks::new();
    for (name, states) in [("pursuer", &pursuer), ("evader", &evader)] {
        let h = hji_residual(states, 1e-9);
        c.check(h.passed && h.checked == 1000, format!("{name} HJI worst {:e} over {}", h.worst, h.checked));
        let g = gradient_check(states, 1e-5);
        c.check(
            g.passed && g.checked >= 900,
            format!("{name} FD worst rel {:e} over {} ({} skipped)", g.worst, g.checked, g.skipped),
        );
    }
    c.done()
}

fn value_conservation() -> Outcome {
    let mut c = Checks::new();
    for (name, s) in [
        ("ex2", presets::three_on_three_pursuer_win()),
        ("ex3", presets::three_on_three_evader_win()),
    ] {
        let sol = game::solve(&s).unwrap();
        let d1 = sim::value_conservation_check(&s, &sol.chosen, 1e-3).unwrap().max_drift;
        let d2 = sim::value_conservation_check(&s, &sol.chosen, 5e-4).unwrap().max_drift;
        c.check(d1 < 1e-4, format!("{name} drift {d1:e} at h=1e-3"));
        c.check(d2 <= (0.6 * d1).max(1e-10), format!("{name} drift {d2:e} at h=5e-4"));
    }
    c.done()
}

fn straight_lines() -> Outcome {
    let mut c = Checks::new();
    for (name, s) in presets::all() {
        let sol = game::solve(&s).unwrap();
        let traj = sim::simulate(&s, &sol.chosen, &StrategyProfile::optimal(), sim::default_step(&s)).unwrap();
        let worst = sim::straightness_check(&traj).into_iter().fold(0.0, f64::max);
        c.check(worst < 1e-6, format!("{name} max deviation {worst:e}"));
    }
    c.done()
}

fn random_matrix(s: &Scenario) -> PayoffMatrix {
    let t = PairTable::build(s).unwrap();
    t.payoff_matrix(t.default_penalty())
}

fn scaling() -> Outcome {
    let mut rng = support::rng(0x5eed_0010);
    let mut c = Checks::new();

    let p12 = random_matrix(&support::scenario(&mut rng, 12, 10));
    let start = Instant::now();
    let brute = brute_force_assignment(&p12, DEFAULT_TIE_TOLERANCE, 300_000_000).unwrap();
    let t_brute = start.elapsed();
    let start = Instant::now();
    let lp = solve_assignment_lp(&p12);
    let t_lp = start.elapsed();
    let same = (p12.team_payoff(&lp) - brute.team_payoff).abs() <= 1e-9 * brute.team_payoff.abs().max(1.0);
    c.check(
        t_lp * 10 <= t_brute && same,
        format!("(12,10) brute {t_brute:?} vs LP {t_lp:?}, same optimum {same}"),
    );

    let p20 = random_matrix(&support::scenario(&mut rng, 20, 15));
    let na = matches!(brute_force_assignment(&p20, DEFAULT_TIE_TOLERANCE, DEFAULT_BRUTE_FORCE_CAP), Err(TooLarge { .. }));
    c.check(na, "(20,15) brute force NA".to_string());

    let s100 = support::scenario(&mut rng, 100, 100);
    let start = Instant::now();
    let p100 = random_matrix(&s100);
    let t_build = start.elapsed();
    let start = Instant::now();
    let _ = solve_assignment_lp(&p100);
    let t_lp = start.elapsed();
    c.check(t_lp < Duration::from_secs(1), format!("(100,100) LP {t_lp:?} (matrix build {t_build:?})"));
    c.done()
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("pursuer-win example: winner, assignment, value, L*, small-L assignment", example2),
        ("pursuer-win example: straight-running evaders", example2_deviation),
        ("evader-win example: optimal set and refinement", example3),
        ("dispersal example: four optimal assignments", example4),
        ("tied payoff matrix: two optimal assignments", tied_matrix),
        ("Hungarian vs brute force on 1000 random instances", oracle_equivalence),
        ("HJI residual and finite-difference gradients", hji_and_gradients),
        ("value conservation along optimal play", value_conservation),
        ("straight optimal trajectories", straight_lines),
        ("assignment scaling", scaling),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Outcome { passed: false, detail: format!("panicked: {msg}") }
        });
        if !outcome.passed {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {name}: {}",
            k + 1,
            if outcome.passed { "PASS" } else { "FAIL" },
            outcome.detail
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
