//! Drop-weight launch kinematics.
//!
//! Drop heights are planned drag-free (`v = √(2gh)`). For reconstructing the
//! actual impact velocity, a vertical fall with quadratic drag is available:
//! `dv/dt = g − k·v²` with `k = ρ·C_d·A/(2m)`, whose solution from rest is
//! `v(t) = v_t·tanh(g·t/v_t)` and `s(t) = (v_t²/g)·ln cosh(g·t/v_t)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_non_negative, ensure_positive, Error, Result};
use crate::roots::{bisect, Tolerance};

pub const STANDARD_GRAVITY: f64 = 9.80665;
/// Rounded gravity that reproduces the published drop-height table.
pub const PAPER_GRAVITY: f64 = 10.0;
/// Default velocity down-scaling of the drop experiment (1:15).
pub const DEFAULT_SCALE_FACTOR: f64 = 15.0;

/// Time tolerance for fall-time root finding, seconds.
pub const FALL_TIME_TOLERANCE: f64 = 1e-9;
/// Distance residual accepted at the root, relative to the height. Tight
/// enough that the root is usually float-exact.
pub const FALL_DISTANCE_TOLERANCE: f64 = 4.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GravityPreset {
    #[default]
    Standard,
    Paper,
}

impl GravityPreset {
    pub fn value(self) -> f64 {
        match self {
            GravityPreset::Standard => STANDARD_GRAVITY,
            GravityPreset::Paper => PAPER_GRAVITY,
        }
    }
}

impl FromStr for GravityPreset {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "standard" => Ok(GravityPreset::Standard),
            "paper" => Ok(GravityPreset::Paper),
            _ => Err(format!(
                "unknown gravity preset `{s}` (expected standard or paper)"
            )),
        }
    }
}

impl fmt::Display for GravityPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GravityPreset::Standard => "standard",
            GravityPreset::Paper => "paper",
        })
    }
}

/// Original and velocity-scaled drop configuration for one species.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DropPlan {
    pub species_name: String,
    /// m/s
    pub original_impact_velocity: f64,
    /// m
    pub original_drop_height: f64,
    pub scale_factor: f64,
    /// m/s
    pub scaled_impact_velocity: f64,
    /// m
    pub scaled_drop_height: f64,
    /// m/s²
    pub gravity: f64,
}

/// Drag-free impact velocity after falling `height` from rest.
pub fn ideal_impact_velocity(height: f64, gravity: f64) -> Result<f64> {
    ensure_non_negative("height", height)?;
    ensure_positive("gravity", gravity)?;
    Ok((2.0 * gravity * height).sqrt())
}

/// Drag-free height needed to reach `velocity`.
pub fn drop_height_for_velocity(velocity: f64, gravity: f64) -> Result<f64> {
    ensure_non_negative("velocity", velocity)?;
    ensure_positive("gravity", gravity)?;
    Ok(velocity * velocity / (2.0 * gravity))
}

/// Height that reproduces the closing speed `v_bird + v_aircraft`.
pub fn required_drop_height(bird_speed: f64, aircraft_speed: f64, gravity: f64) -> Result<f64> {
    ensure_non_negative("bird_speed", bird_speed)?;
    ensure_non_negative("aircraft_speed", aircraft_speed)?;
    drop_height_for_velocity(bird_speed + aircraft_speed, gravity)
}

pub fn make_drop_plan(
    species_name: &str,
    bird_speed: f64,
    aircraft_speed: f64,
    scale_factor: f64,
    gravity: f64,
) -> Result<DropPlan> {
    if !(scale_factor.is_finite() && scale_factor >= 1.0) {
        return Err(Error::InvalidInput {
            name: "scale_factor",
            value: scale_factor,
            reason: "must be finite and >= 1",
        });
    }
    let original_impact_velocity = bird_speed + aircraft_speed;
    let original_drop_height = required_drop_height(bird_speed, aircraft_speed, gravity)?;
    let scaled_impact_velocity = original_impact_velocity / scale_factor;
    let scaled_drop_height = drop_height_for_velocity(scaled_impact_velocity, gravity)?;
    Ok(DropPlan {
        species_name: species_name.to_string(),
        original_impact_velocity,
        original_drop_height,
        scale_factor,
        scaled_impact_velocity,
        scaled_drop_height,
        gravity,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DragParams {
    /// kg
    pub projectile_mass: f64,
    /// kg/m³
    pub air_density: f64,
    pub drag_coefficient: f64,
    /// m²
    pub reference_area: f64,
    /// m/s²
    pub gravity: f64,
}

impl DragParams {
    pub fn new(
        projectile_mass: f64,
        air_density: f64,
        drag_coefficient: f64,
        reference_area: f64,
        gravity: f64,
    ) -> Result<Self> {
        let p = DragParams {
            projectile_mass,
            air_density,
            drag_coefficient,
            reference_area,
            gravity,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("projectile_mass", self.projectile_mass)?;
        ensure_positive("air_density", self.air_density)?;
        ensure_positive("drag_coefficient", self.drag_coefficient)?;
        ensure_positive("reference_area", self.reference_area)?;
        ensure_positive("gravity", self.gravity)
    }

    /// `k` in `dv/dt = g − k·v²`, 1/m.
    pub fn drag_constant(&self) -> f64 {
        self.air_density * self.drag_coefficient * self.reference_area
            / (2.0 * self.projectile_mass)
    }
}

pub fn terminal_velocity(params: &DragParams) -> Result<f64> {
    params.validate()?;
    Ok((2.0 * params.projectile_mass * params.gravity
        / (params.air_density * params.drag_coefficient * params.reference_area))
        .sqrt())
}

pub fn drag_velocity_at_time(t: f64, params: &DragParams) -> Result<f64> {
    ensure_non_negative("time", t)?;
    let vt = terminal_velocity(params)?;
    Ok(vt * (params.gravity * t / vt).tanh())
}

pub fn drag_fall_distance(t: f64, params: &DragParams) -> Result<f64> {
    ensure_non_negative("time", t)?;
    let vt = terminal_velocity(params)?;
    Ok(vt * vt / params.gravity * ln_cosh(params.gravity * t / vt))
}

/// `ln(cosh x)` without overflow for large `x` or cancellation for small `x`.
fn ln_cosh(x: f64) -> f64 {
    let x = x.abs();
    if x < 1.0 {
        // cosh x − 1 = 2·sinh²(x/2)
        let s = (0.5 * x).sinh();
        (2.0 * s * s).ln_1p()
    } else {
        x + (-2.0 * x).exp().ln_1p() - std::f64::consts::LN_2
    }
}

/// Time to fall `height` from rest under drag.
pub fn fall_time_for_height(height: f64, params: &DragParams) -> Result<f64> {
    ensure_non_negative("height", height)?;
    params.validate()?;
    if height == 0.0 {
        return Ok(0.0);
    }
    // Drag only lengthens the fall; widen from the drag-free time.
    let lo = 0.0;
    let mut hi = (2.0 * height / params.gravity).sqrt();
    let distance = |t: f64| drag_fall_distance(t, params).unwrap_or(f64::NAN);
    let mut expansions = 0;
    while distance(hi) < height {
        hi *= 2.0;
        expansions += 1;
        if expansions > 200 || !hi.is_finite() {
            return Err(Error::NoConvergence {
                iterations: expansions,
            });
        }
    }
    let tol = Tolerance {
        x_abs: FALL_TIME_TOLERANCE,
        f_abs: FALL_DISTANCE_TOLERANCE * height,
        max_iterations: 2000,
    };
    bisect(|t| distance(t) - height, lo, hi, tol)
}

/// Impact velocity after falling `height` from rest, with drag.
pub fn impact_velocity_from_drop(height: f64, params: &DragParams) -> Result<f64> {
    let t = fall_time_for_height(height, params)?;
    drag_velocity_at_time(t, params)
}

/// Impact velocity from a measured drop-to-impact interval.
pub fn impact_velocity_from_timing(fall_time: f64, params: &DragParams) -> Result<f64> {
    drag_velocity_at_time(fall_time, params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn params() -> DragParams {
        DragParams::new(0.1, 1.225, 1.0, 0.01, 9.81).unwrap()
    }

    #[test]
    fn ideal_velocity_examples() {
        assert!((ideal_impact_velocity(631.0, PAPER_GRAVITY).unwrap() - 112.34).abs() < 0.005);
        assert_eq!(ideal_impact_velocity(0.0, 3.7).unwrap(), 0.0);
        let v = ideal_impact_velocity(1.5, PAPER_GRAVITY).unwrap();
        assert!((v - 5.477).abs() < 5e-4);
        assert!((v - 5.47).abs() < 0.01);
        assert!(ideal_impact_velocity(-1.0, PAPER_GRAVITY).is_err());
    }

    #[test]
    fn required_height_examples() {
        let h = required_drop_height(22.35, 90.0, PAPER_GRAVITY).unwrap();
        assert!((h - 631.1).abs() < 0.05);
        let h = required_drop_height(36.11, 90.0, PAPER_GRAVITY).unwrap();
        assert!((h - 795.2).abs() < 0.05);
        assert_eq!(required_drop_height(0.0, 0.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn drop_plan_examples() {
        let p = make_drop_plan("Starling", 22.35, 90.0, 15.0, PAPER_GRAVITY).unwrap();
        assert!((p.scaled_impact_velocity - 7.49).abs() < 0.005);
        assert!((p.scaled_drop_height - 2.80).abs() < 0.01);
        let p = make_drop_plan("Rock Dove", 36.11, 90.0, 15.0, PAPER_GRAVITY).unwrap();
        assert!((p.scaled_impact_velocity - 8.41).abs() < 0.005);
        assert!((p.scaled_drop_height - 3.53).abs() < 0.01);
        let p = make_drop_plan("X", 10.0, 20.0, 1.0, PAPER_GRAVITY).unwrap();
        assert_eq!(p.scaled_impact_velocity, p.original_impact_velocity);
        assert_eq!(p.scaled_drop_height, p.original_drop_height);
        assert!(make_drop_plan("X", 10.0, 20.0, 0.5, PAPER_GRAVITY).is_err());
    }

    #[test]
    fn scaled_height_is_original_over_square() {
        let p = make_drop_plan("Starling", 22.35, 90.0, 15.0, PAPER_GRAVITY).unwrap();
        assert_relative_eq!(
            p.scaled_drop_height,
            p.original_drop_height / 225.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn terminal_velocity_examples() {
        // √(1.962/0.01225)
        assert_relative_eq!(
            terminal_velocity(&params()).unwrap(),
            12.655_562_623_057_2,
            max_relative = 1e-12
        );
        let heavy = DragParams {
            projectile_mass: 0.2,
            ..params()
        };
        assert_relative_eq!(
            terminal_velocity(&heavy).unwrap() / terminal_velocity(&params()).unwrap(),
            std::f64::consts::SQRT_2,
            max_relative = 1e-12
        );
        let mut last = f64::INFINITY;
        for area in [0.001, 0.01, 0.1, 1.0, 10.0, 1e6] {
            let v = terminal_velocity(&DragParams {
                reference_area: area,
                ..params()
            })
            .unwrap();
            assert!(v < last);
            last = v;
        }
        assert!(last < 1e-2);
    }

    #[test]
    fn zero_and_asymptotic_time() {
        let p = params();
        assert_eq!(drag_velocity_at_time(0.0, &p).unwrap(), 0.0);
        assert_eq!(drag_fall_distance(0.0, &p).unwrap(), 0.0);
        let vt = terminal_velocity(&p).unwrap();
        assert_relative_eq!(
            drag_velocity_at_time(100.0, &p).unwrap(),
            vt,
            max_relative = 1e-6
        );
        assert!(drag_velocity_at_time(-1.0, &p).is_err());
        assert!(drag_fall_distance(-1.0, &p).is_err());
        assert!(impact_velocity_from_timing(-1.0, &p).is_err());
        assert!(drag_fall_distance(1e6, &p).unwrap().is_finite());
    }

    #[test]
    fn small_time_distance_is_free_fall() {
        let p = params();
        let vt = terminal_velocity(&p).unwrap();
        let t = 0.05 * vt / p.gravity;
        let s = drag_fall_distance(t, &p).unwrap();
        let free = 0.5 * p.gravity * t * t;
        assert!((s - free).abs() / free < 1e-3);
    }

    #[test]
    fn ln_cosh_matches_naive_in_safe_range() {
        for x in [1e-6, 0.01, 0.5, 0.999, 1.0, 3.0, 20.0] {
            let naive = f64::cosh(x).ln();
            assert_relative_eq!(ln_cosh(x), naive, max_relative = 1e-9);
        }
        assert!((ln_cosh(1000.0) - (1000.0 - std::f64::consts::LN_2)).abs() < 1e-9);
    }

    #[test]
    fn drop_height_zero_and_negative() {
        assert_eq!(impact_velocity_from_drop(0.0, &params()).unwrap(), 0.0);
        assert!(impact_velocity_from_drop(-0.1, &params()).is_err());
    }

    #[test]
    fn drop_velocity_matches_energy_closed_form() {
        // From v dv/ds = g − k v²: v² = v_t²·(1 − exp(−2·k·h)).
        let p = params();
        let vt = terminal_velocity(&p).unwrap();
        for h in [0.1, 1.0, 2.8, 10.0, 50.0] {
            let expected = vt * (-(-2.0 * p.drag_constant() * h).exp_m1()).sqrt();
            let v = impact_velocity_from_drop(h, &p).unwrap();
            assert_relative_eq!(v, expected, max_relative = 1e-9);
        }
    }

    #[test]
    fn vanishing_drag_approaches_ideal() {
        let p = DragParams {
            drag_coefficient: 1e-9,
            ..params()
        };
        let v = impact_velocity_from_drop(2.8, &p).unwrap();
        let ideal = ideal_impact_velocity(2.8, p.gravity).unwrap();
        assert!(v < ideal);
        assert!((ideal - v) / ideal < 1e-3);
    }

    #[test]
    fn gravity_presets() {
        assert_eq!(GravityPreset::Paper.value(), 10.0);
        assert_eq!(GravityPreset::Standard.value(), 9.80665);
        assert_eq!(
            "paper".parse::<GravityPreset>().unwrap(),
            GravityPreset::Paper
        );
        assert!("moon".parse::<GravityPreset>().is_err());
    }
}
