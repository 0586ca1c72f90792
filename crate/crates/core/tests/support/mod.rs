//! Seeded generators and independent oracles for the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use radg_core::assignment::PayoffMatrix;
use radg_core::duel::DuelState;
use radg_core::{Scenario, Vec3};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn point(rng: &mut impl Rng, half: f64) -> Vec3 {
    Vec3::new(rng.gen_range(-half..half), rng.gen_range(-half..half), rng.gen_range(-half..half))
}

/// Random supported duel state (`α ≤ 1`).
pub fn duel_state(rng: &mut impl Rng) -> DuelState {
    let v = rng.gen_range(1.0..2.5);
    let u = v * rng.gen_range(0.05..1.0);
    DuelState::new(point(rng, 15.0), point(rng, 15.0), u, v)
}

/// Random scenario with positions in [−15, 15]³ and the speed ranges used by the benchmarks.
pub fn scenario(rng: &mut impl Rng, n: usize, m: usize) -> Scenario {
    let pursuers: Vec<(Vec3, f64)> = (0..n).map(|_| (point(rng, 15.0), rng.gen_range(1.5..2.5))).collect();
    let evaders: Vec<(Vec3, f64)> = (0..m).map(|_| (point(rng, 15.0), rng.gen_range(0.8..2.0))).collect();
    Scenario::from_positions(&pursuers, &evaders, None).unwrap()
}

/// `m × n` matrix with entries uniform in `[−l, l]`.
pub fn uniform_matrix(rng: &mut impl Rng, m: usize, n: usize, l: f64) -> PayoffMatrix {
    let rows = (0..m).map(|_| (0..n).map(|_| rng.gen_range(-l..=l)).collect()).collect();
    PayoffMatrix::from_rows(rows, l)
}

/// Payoff-like matrix: positive capture values or `−l` with probability `p_loss`.
pub fn penalized_matrix(rng: &mut impl Rng, m: usize, n: usize, l: f64, p_loss: f64) -> PayoffMatrix {
    let rows = (0..m)
        .map(|_| {
            (0..n)
                .map(|_| if rng.gen_bool(p_loss) { -l } else { rng.gen_range(0.1..10.0) })
                .collect()
        })
        .collect();
    PayoffMatrix::from_rows(rows, l)
}

/// All injective maps from `m` evaders into `n` pursuers, by plain recursion.
pub fn all_assignments(m: usize, n: usize) -> Vec<Vec<usize>> {
    fn go(m: usize, n: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for j in 0..n {
            if !cur.contains(&j) {
                cur.push(j);
                go(m, n, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(m, n, &mut Vec::new(), &mut out);
    out
}

/// Point where a pursuer at `x_p` (speed `v`) meets an evader at `x_e` (speed `u`)
/// that runs in direction `dir`, if the pursuer can get there.
fn meeting_point(x_e: Vec3, x_p: Vec3, u: f64, v: f64, dir: Vec3) -> Option<Vec3> {
    // |x_e + u t d − x_p|² = v² t²
    let w = x_e - x_p;
    let a = u * u - v * v;
    let b = 2.0 * u * w.dot(dir);
    let c = w.norm_squared();
    let t = if a.abs() < 1e-14 {
        if b >= 0.0 {
            return None;
        }
        -c / b
    } else {
        let disc = b * b - 4.0 * a * c;
        if disc < 0.0 {
            return None;
        }
        let r1 = (-b - disc.sqrt()) / (2.0 * a);
        let r2 = (-b + disc.sqrt()) / (2.0 * a);
        [r1, r2].into_iter().filter(|t| *t >= 0.0).fold(f64::NAN, f64::max)
    };
    (t.is_finite() && t >= 0.0).then(|| x_e + dir * (u * t))
}

fn unit(theta: f64, phi: f64) -> Vec3 {
    Vec3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos())
}

/// Closest-to-target meeting point over all evader headings, found by a
/// coarse angular grid followed by shrinking pattern search.
pub fn interception_oracle(x_e: Vec3, x_p: Vec3, u: f64, v: f64) -> (Vec3, f64) {
    let eval = |th: f64, ph: f64| meeting_point(x_e, x_p, u, v, unit(th, ph)).map(|x| (x, x.norm()));
    let mut best = (0.0, 0.0, Vec3::ZERO, f64::INFINITY);
    let k = 120;
    for a in 0..=k {
        for b in 0..2 * k {
            let th = std::f64::consts::PI * a as f64 / k as f64;
            let ph = std::f64::consts::PI * b as f64 / k as f64;
            if let Some((x, d)) = eval(th, ph) {
                if d < best.3 {
                    best = (th, ph, x, d);
                }
            }
        }
    }
    let mut step = std::f64::consts::PI / k as f64;
    while step > 1e-13 {
        let mut improved = false;
        for (dt, dp) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
            if let Some((x, d)) = eval(best.0 + dt, best.1 + dp) {
                if d < best.3 {
                    best = (best.0 + dt, best.1 + dp, x, d);
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (best.2, best.3)
}
