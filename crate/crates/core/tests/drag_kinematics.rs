mod support;

use birdstrike_core::kinematics::{
    drag_fall_distance, drag_velocity_at_time, fall_time_for_height, ideal_impact_velocity,
    impact_velocity_from_drop, impact_velocity_from_timing, terminal_velocity, DragParams,
    PAPER_GRAVITY,
};
use birdstrike_core::projectile::{generate_projectile_set, ABS_DENSITY};
use birdstrike_core::species::{bundled_species, find_species};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::ode::{drag_constant, integrate_fall, simpson};

fn random_params(rng: &mut ChaCha8Rng) -> DragParams {
    DragParams::new(
        rng.gen_range(0.005..1.0),
        rng.gen_range(1.0..1.3),
        rng.gen_range(0.1..2.0),
        rng.gen_range(1e-4..0.05),
        rng.gen_range(9.0..10.5),
    )
    .unwrap()
}

fn rel_diff(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

#[test]
fn closed_form_matches_rk4_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let times: Vec<f64> = (1..=30).map(|i| i as f64 * 0.1).collect();
    for _ in 0..100 {
        let p = random_params(&mut rng);
        let k = drag_constant(
            p.projectile_mass,
            p.air_density,
            p.drag_coefficient,
            p.reference_area,
        );
        let states = integrate_fall(p.gravity, k, &times, 1e-3);
        for st in states {
            let v = drag_velocity_at_time(st.t, &p).unwrap();
            let s = drag_fall_distance(st.t, &p).unwrap();
            assert!(
                rel_diff(v, st.velocity) < 1e-6,
                "v at t={} {v} vs {}",
                st.t,
                st.velocity
            );
            assert!(
                rel_diff(s, st.distance) < 1e-6,
                "s at t={} {s} vs {}",
                st.t,
                st.distance
            );
        }
    }
}

#[test]
fn distance_is_integral_of_velocity() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let p = random_params(&mut rng);
        let t_end = rng.gen_range(0.1..3.0);
        let quad = simpson(|t| drag_velocity_at_time(t, &p).unwrap(), 0.0, t_end, 2000);
        let closed = drag_fall_distance(t_end, &p).unwrap();
        assert!(rel_diff(quad, closed) < 1e-6);
    }
}

#[test]
fn starling_projectile_drop_velocity() {
    let registry = bundled_species();
    let starling = find_species(&registry, "Starling").unwrap();
    let sn1 = generate_projectile_set(starling, ABS_DENSITY, 0.0)
        .unwrap()
        .remove(0);
    let radius = match sn1.shape {
        birdstrike_core::ProjectileShape::Cylinder { radius, .. } => radius,
        _ => unreachable!(),
    };
    // End-on cylinder, C_d ≈ 0.82.
    let params = DragParams::new(
        sn1.mass,
        1.225,
        0.82,
        std::f64::consts::PI * radius * radius,
        PAPER_GRAVITY,
    )
    .unwrap();
    let v = impact_velocity_from_drop(2.8, &params).unwrap();
    assert!(v > 7.0 && v < 7.49, "{v}");

    // ODE oracle: integrate until the projectile has fallen 2.8 m.
    let t = fall_time_for_height(2.8, &params).unwrap();
    let k = drag_constant(
        params.projectile_mass,
        params.air_density,
        params.drag_coefficient,
        params.reference_area,
    );
    let st = integrate_fall(params.gravity, k, &[t], 1e-4)[0];
    assert!((st.distance - 2.8).abs() < 1e-6);
    assert!(rel_diff(st.velocity, v) < 1e-6);
}

#[test]
fn timing_matches_ode_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let p = random_params(&mut rng);
        let t = rng.gen_range(0.0..3.0);
        let k = drag_constant(
            p.projectile_mass,
            p.air_density,
            p.drag_coefficient,
            p.reference_area,
        );
        let st = integrate_fall(p.gravity, k, &[t], 1e-3)[0];
        let v = impact_velocity_from_timing(t, &p).unwrap();
        assert!(rel_diff(v, st.velocity) < 1e-6 || (v - st.velocity).abs() < 1e-12);
    }
    assert_eq!(
        impact_velocity_from_timing(0.0, &random_params(&mut rng)).unwrap(),
        0.0
    );
}

#[test]
fn vanishing_drag_limit() {
    for h in [0.5, 1.5, 2.8, 10.0] {
        let p = DragParams::new(0.0108, 1.225, 1e-9, 3.1e-4, PAPER_GRAVITY).unwrap();
        let v = impact_velocity_from_drop(h, &p).unwrap();
        let ideal = ideal_impact_velocity(h, PAPER_GRAVITY).unwrap();
        assert!(rel_diff(v, ideal) < 1e-3);
    }
}

fn params_strategy() -> impl Strategy<Value = DragParams> {
    (
        0.005..1.0f64,
        1.0..1.3f64,
        0.1..2.0f64,
        1e-4..0.05f64,
        9.0..10.5f64,
    )
        .prop_map(|(m, rho, cd, a, g)| DragParams::new(m, rho, cd, a, g).unwrap())
}

proptest! {
    #[test]
    fn fall_root_round_trips(p in params_strategy(), h in 0.0..50.0f64) {
        let t = fall_time_for_height(h, &p).unwrap();
        let back = drag_fall_distance(t, &p).unwrap();
        prop_assert!((back - h).abs() <= 1e-9, "h={h} back={back}");
    }

    #[test]
    fn drop_velocity_is_bounded(p in params_strategy(), h in 0.0..200.0f64) {
        let v = impact_velocity_from_drop(h, &p).unwrap();
        let ideal = ideal_impact_velocity(h, p.gravity).unwrap();
        let vt = terminal_velocity(&p).unwrap();
        prop_assert!(v >= 0.0);
        prop_assert!(v <= ideal.min(vt));
        if h > 0.0 {
            prop_assert!(v < ideal);
        }
    }

    #[test]
    fn timing_round_trip(p in params_strategy(), t in 0.0..3.0f64) {
        let h = drag_fall_distance(t, &p).unwrap();
        let a = impact_velocity_from_timing(t, &p).unwrap();
        let b = impact_velocity_from_drop(h, &p).unwrap();
        prop_assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }
}
