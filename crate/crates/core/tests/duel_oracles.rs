mod support;

use proptest::prelude::*;

use radg_core::duel::{self, DuelRegion, DuelState};
use radg_core::geometry::{apollonius_locus, closest_point_to_origin};
use radg_core::{SpeedRatio, Vec3};

fn vec3(r: f64) -> impl Strategy<Value = Vec3> {
    (-r..r, -r..r, -r..r).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

fn supported_state() -> impl Strategy<Value = DuelState> {
    (vec3(15.0), vec3(15.0), 1.0f64..2.5, 0.05f64..1.0).prop_map(|(e, p, v, a)| DuelState::new(e, p, a * v, v))
}

#[test]
fn pursuer_value_matches_sampled_interception() {
    let mut rng = support::rng(11);
    let mut checked = 0;
    while checked < 40 {
        let s = support::duel_state(&mut rng);
        if duel::region(&s) != DuelRegion::PursuerWins || s.evader.distance(s.pursuer) < 1.0 {
            continue;
        }
        let v = duel::value_pursuer_region(&s).unwrap();
        let (point, dist) = support::interception_oracle(s.evader, s.pursuer, s.evader_speed, s.pursuer_speed);
        assert!((v.value - dist).abs() < 1e-6 * dist.max(1.0), "{} vs oracle {dist} at {s:?}", v.value);
        let locus = apollonius_locus(s.evader, s.pursuer, SpeedRatio::new(s.alpha()).unwrap()).unwrap();
        let (i, _) = closest_point_to_origin(&locus).unwrap();
        assert!((i - point).norm() < 1e-4 * dist.max(1.0));
        checked += 1;
    }
}

#[test]
fn evader_value_is_arrival_gap() {
    // Evader runs home in R_E/U; the pursuer is then R_P − V·R_E/U from the target.
    let s = DuelState::new(Vec3::new(3.0, 0.0, 4.0), Vec3::new(0.0, 12.0, 0.0), 1.0, 2.0);
    let v = duel::value(&s).unwrap();
    assert_eq!(v.region, DuelRegion::EvaderWins);
    let pursuer_gap = 12.0 - 2.0 * (5.0 / 1.0);
    assert!((v.value + pursuer_gap).abs() < 1e-12);
}

#[test]
fn optimal_pursuer_heads_for_interception_point() {
    let mut rng = support::rng(12);
    let mut checked = 0;
    while checked < 20 {
        let s = support::duel_state(&mut rng);
        if duel::region(&s) != DuelRegion::PursuerWins || s.evader.distance(s.pursuer) < 1.0 {
            continue;
        }
        let (u, v) = duel::optimal_controls(&s).unwrap();
        let (point, _) = support::interception_oracle(s.evader, s.pursuer, s.evader_speed, s.pursuer_speed);
        let to_p = (point - s.pursuer).normalized().unwrap();
        let to_e = (point - s.evader).normalized().unwrap();
        assert!((v.velocity() / s.pursuer_speed - to_p).norm() < 1e-4);
        assert!((u.velocity() / s.evader_speed - to_e).norm() < 1e-4);
        checked += 1;
    }
}

proptest! {
    #[test]
    fn regions_partition_the_state_space(s in supported_state()) {
        let b = duel::barrier_1v1(&s);
        let r = duel::region(&s);
        prop_assert_eq!(r == DuelRegion::PursuerWins, b > 0.0);
        prop_assert_eq!(duel::value_pursuer_region(&s).is_ok() || s.evader.distance(s.pursuer) < 1e-9, b > 0.0);
    }

    #[test]
    fn value_sign_matches_region(s in supported_state()) {
        prop_assume!(s.pursuer.norm() > 1e-9 && s.evader.distance(s.pursuer) > 1e-9);
        let v = duel::value(&s).unwrap();
        match v.region {
            DuelRegion::PursuerWins => prop_assert!(v.value > 0.0),
            DuelRegion::EvaderWins => prop_assert!(v.value <= 1e-12 * s.pursuer.norm()),
        }
    }

    #[test]
    fn hji_residual_vanishes(s in supported_state()) {
        prop_assume!(s.pursuer.norm() > 1e-6 && s.evader.norm() > 1e-6 && s.evader.distance(s.pursuer) > 1e-6);
        let v = duel::value(&s).unwrap();
        let scale = v.grad_evader.norm().max(1.0);
        prop_assert!(v.hji_residual(s.alpha()).abs() < 1e-9 * scale);
    }

    #[test]
    fn controls_have_full_speed(s in supported_state()) {
        prop_assume!(s.pursuer.norm() > 1e-6 && s.evader.norm() > 1e-6 && s.evader.distance(s.pursuer) > 1e-6);
        let (u, v) = duel::optimal_controls(&s).unwrap();
        prop_assert!((u.speed() - s.evader_speed).abs() < 1e-12 * s.evader_speed);
        prop_assert!((v.speed() - s.pursuer_speed).abs() < 1e-12 * s.pursuer_speed);
    }

    #[test]
    fn equal_speeds_continuous_with_plane(e in vec3(10.0), p in vec3(10.0)) {
        let near = DuelState::new(e, p, 1.0 - 1e-7, 1.0);
        let at = DuelState::new(e, p, 1.0, 1.0);
        prop_assume!(duel::barrier_1v1(&near) > 1e-3 && duel::barrier_1v1(&at) > 1e-3);
        prop_assume!(e.distance(p) > 1e-2);
        let a = duel::value(&near).unwrap().value;
        let b = duel::value(&at).unwrap().value;
        prop_assert!((a - b).abs() < 1e-4 * b.abs().max(1.0), "{} vs {}", a, b);
    }
}
