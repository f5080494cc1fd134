//! Published reference values used for reproduction checks, and the
//! reported figure deltas that the force model does not reproduce.

use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::impact::{scenario_force, ForceModel, ImpactAngle, ImpactScenario, ScenarioParameter};

/// One row of the published drop-height table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedDropRow {
    pub species: &'static str,
    pub original_velocity: f64,
    pub original_height: f64,
    pub scaled_velocity: f64,
    pub scaled_height: f64,
    /// Printed values that do not follow from `h = v²/2g` with the other rows' `g`.
    pub inconsistent: bool,
}

const fn row(
    species: &'static str,
    original_velocity: f64,
    original_height: f64,
    scaled_velocity: f64,
    scaled_height: f64,
    inconsistent: bool,
) -> PublishedDropRow {
    PublishedDropRow {
        species,
        original_velocity,
        original_height,
        scaled_velocity,
        scaled_height,
        inconsistent,
    }
}

pub const PUBLISHED_DROP_TABLE: [PublishedDropRow; 11] = [
    row("Common Grackle", 103.41, 535.0, 6.89, 2.4, false),
    row("Starling", 112.35, 631.0, 7.49, 2.8, false),
    row("House Sparrow", 102.77, 528.0, 6.85, 2.3, false),
    row("Mallard", 119.06, 709.0, 7.94, 3.1, false),
    row("Turkey Vulture", 116.82, 708.0, 7.79, 3.0, true),
    row("Laughing Gull", 96.70, 467.0, 6.44, 2.0, false),
    row("Bald Eagle", 110.12, 606.0, 7.34, 2.7, false),
    row("Canada Goose", 107.88, 582.0, 7.19, 2.6, false),
    row("Rock Dove", 126.11, 795.0, 8.40, 3.5, false),
    row("Ring-billed Gull", 107.88, 582.0, 7.19, 2.6, false),
    row("Herring Gull", 107.88, 582.0, 7.19, 2.6, false),
];

/// Tolerances for comparing a computed drop plan with the published table.
pub const ORIGINAL_HEIGHT_TOLERANCE: f64 = 1.0;
pub const SCALED_VELOCITY_TOLERANCE: f64 = 0.01;
pub const SCALED_HEIGHT_TOLERANCE: f64 = 0.1;

/// Published cylinder geometry: (species, radius m, height m, radius decimals).
pub const PUBLISHED_GEOMETRY_TABLE: [(&str, f64, f64, u32); 11] = [
    ("Common Grackle", 0.01, 0.31, 2),
    ("Starling", 0.01, 0.22, 2),
    ("House Sparrow", 0.007, 0.16, 3),
    ("Mallard", 0.03, 0.57, 2),
    ("Turkey Vulture", 0.03, 0.72, 2),
    ("Laughing Gull", 0.02, 0.43, 2),
    ("Bald Eagle", 0.06, 0.90, 2),
    ("Canada Goose", 0.05, 0.92, 2),
    ("Rock Dove", 0.02, 0.33, 2),
    ("Ring-billed Gull", 0.02, 0.48, 2),
    ("Herring Gull", 0.03, 0.66, 2),
];

pub fn published_drop_row(species: &str) -> Option<&'static PublishedDropRow> {
    PUBLISHED_DROP_TABLE
        .iter()
        .find(|r| r.species.eq_ignore_ascii_case(species))
}

/// Rounds half away from zero to `decimals` places.
pub fn round_to_decimals(x: f64, decimals: u32) -> f64 {
    let scale = 10f64.powi(decimals as i32);
    (x * scale).round() / scale
}

/// How a reported figure varied the base configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FigureVariation {
    /// The parameter alone multiplied by a factor.
    Scale(f64),
    /// The parameter and the bird mass multiplied together (same projectile
    /// geometry at higher infill, or a shorter projectile of equal density).
    ScaleWithMass(f64),
    /// Both speeds multiplied by a factor.
    JointSpeedScale(f64),
    /// Impact angle set to a value in degrees.
    SetAngle(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FigureClaim {
    pub label: &'static str,
    pub parameters: &'static [ScenarioParameter],
    pub description: &'static str,
    pub variation: FigureVariation,
    /// Reported theoretical force change, percent.
    pub reported_percent: f64,
}

pub const FIGURE_CLAIMS: [FigureClaim; 6] = [
    FigureClaim {
        label: "mass",
        parameters: &[ScenarioParameter::BirdMass],
        description: "bird mass reduced to 1/4 (projectile SN3)",
        variation: FigureVariation::Scale(0.25),
        reported_percent: -65.0,
    },
    FigureClaim {
        label: "velocity",
        parameters: &[
            ScenarioParameter::BirdSpeed,
            ScenarioParameter::AircraftSpeed,
        ],
        description: "impact velocity increased by 17 %",
        variation: FigureVariation::JointSpeedScale(1.17),
        reported_percent: 50.0,
    },
    FigureClaim {
        label: "density",
        parameters: &[ScenarioParameter::BirdDensity],
        description: "bird density +34 % at fixed geometry (mass co-varies)",
        variation: FigureVariation::ScaleWithMass(1.34),
        reported_percent: 40.0,
    },
    FigureClaim {
        label: "length",
        parameters: &[ScenarioParameter::BirdLength],
        description: "bird length −31 % at fixed density (mass co-varies)",
        variation: FigureVariation::ScaleWithMass(0.69),
        reported_percent: -2.0,
    },
    FigureClaim {
        label: "angle",
        parameters: &[ScenarioParameter::ImpactAngle],
        description: "impact angle 90° → 50°",
        variation: FigureVariation::SetAngle(50.0),
        reported_percent: -40.0,
    },
    FigureClaim {
        label: "material",
        parameters: &[ScenarioParameter::AircraftDensity],
        description: "aircraft density −58 % (CFRP)",
        variation: FigureVariation::Scale(0.42),
        reported_percent: -62.0,
    },
];

/// Reported and model-predicted deltas differ by more than this, in points.
pub const FIGURE_DISCREPANCY_THRESHOLD: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureDiscrepancy {
    pub claim: FigureClaim,
    pub predicted_percent: f64,
}

impl fmt::Display for FigureDiscrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} claim, {}: reported theoretical change {:+.0} %, force model gives {:+.1} % \
             for this base scenario; the reported value is not reproducible from the model",
            self.claim.label,
            self.claim.description,
            self.claim.reported_percent,
            self.predicted_percent
        )
    }
}

fn apply_variation(
    base: &ImpactScenario,
    parameter: ScenarioParameter,
    v: FigureVariation,
) -> Result<ImpactScenario> {
    let mut s = *base;
    match v {
        FigureVariation::Scale(k) => s = parameter.with(&s, parameter.get(&s) * k)?,
        FigureVariation::ScaleWithMass(k) => {
            s = parameter.with(&s, parameter.get(&s) * k)?;
            s.bird_mass *= k;
        }
        FigureVariation::JointSpeedScale(k) => {
            s.bird_speed *= k;
            s.aircraft_speed *= k;
        }
        FigureVariation::SetAngle(deg) => s.impact_angle = ImpactAngle::from_degrees(deg)?,
    }
    Ok(s)
}

/// Reported figure deltas for `parameter` that the model does not reproduce
/// when evaluated against `base`.
pub fn figure_discrepancies(
    base: &ImpactScenario,
    parameter: ScenarioParameter,
) -> Result<Vec<FigureDiscrepancy>> {
    let base_force = scenario_force(base, ForceModel::Moving)?;
    let mut out = Vec::new();
    for claim in FIGURE_CLAIMS
        .iter()
        .filter(|c| c.parameters.contains(&parameter))
    {
        let varied = apply_variation(base, parameter, claim.variation)?;
        let predicted = crate::impact::percent_change(
            base_force,
            scenario_force(&varied, ForceModel::Moving)?,
        )?;
        if (predicted - claim.reported_percent).abs() > FIGURE_DISCREPANCY_THRESHOLD {
            out.push(FigureDiscrepancy {
                claim: *claim,
                predicted_percent: predicted,
            });
        }
    }
    Ok(out)
}
