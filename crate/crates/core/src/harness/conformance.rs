//! Theoretical references and theory-vs-experiment conformance.
//!
//! Percent error is signed, `100·(theoretical − experimental)/theoretical`,
//! and conformance is `100 − percent error`. A scenario whose mean
//! measurement exceeds theory therefore conforms by more than 100 %; the
//! absolute variant `100 − |percent error|` is carried alongside.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::matrix::{AircraftMotion, TestMatrix, TestScenario};
use super::measurements::MeasurementSet;
use crate::error::{Error, Result};
use crate::impact::{impact_force, impact_force_stationary, ImpactScenario};
use crate::kinematics::DEFAULT_SCALE_FACTOR;
use crate::projectile::{find_projectile, ProjectileSpec};
use crate::species::{find_material, MaterialSpec, AIR_TAXI_CRUISE_SPEED};

/// Where the impact velocity fed to the force model comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VelocitySource {
    /// Drag-free velocity recomputed from the drop height.
    #[default]
    DropHeight,
    /// The velocity listed in the matrix definition.
    Nominal,
    /// Mean of the per-iteration velocities in the measurement file.
    Measured,
}

/// How a single drop velocity is split into bird and aircraft speed.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VelocitySplit {
    /// Aircraft speed is the cruise speed divided by the scale factor; the
    /// bird speed is the remainder (zero if the drop is slower than that).
    #[default]
    ScaledCruise,
    /// The whole drop velocity is aircraft speed.
    AllAircraft,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceConfig {
    pub scale_factor: f64,
    /// Full-scale cruise speed, m/s.
    pub cruise_speed: f64,
    pub velocity_source: VelocitySource,
    pub velocity_split: VelocitySplit,
}

impl Default for ReferenceConfig {
    fn default() -> Self {
        ReferenceConfig {
            scale_factor: DEFAULT_SCALE_FACTOR,
            cruise_speed: AIR_TAXI_CRUISE_SPEED,
            velocity_source: VelocitySource::DropHeight,
            velocity_split: VelocitySplit::ScaledCruise,
        }
    }
}

impl ReferenceConfig {
    /// `(bird_speed, aircraft_speed)` for a drop velocity.
    pub fn split(&self, velocity: f64) -> (f64, f64) {
        match self.velocity_split {
            VelocitySplit::ScaledCruise => {
                let aircraft = (self.cruise_speed / self.scale_factor).min(velocity);
                (velocity - aircraft, aircraft)
            }
            VelocitySplit::AllAircraft => (0.0, velocity),
        }
    }
}

/// Impact velocity for `scenario` under `config`, before any split.
pub fn reference_velocity(
    scenario: &TestScenario,
    config: &ReferenceConfig,
    measurements: Option<&MeasurementSet>,
) -> Result<f64> {
    match config.velocity_source {
        VelocitySource::DropHeight => Ok(scenario.drop_impact_velocity),
        VelocitySource::Nominal => Ok(scenario.nominal_impact_velocity),
        VelocitySource::Measured => measurements
            .and_then(MeasurementSet::mean_impact_velocity)
            .ok_or_else(|| Error::MissingMeasuredVelocity(scenario.id.clone())),
    }
}

/// Theoretical force for a scenario at a given impact velocity.
pub fn theoretical_force_at(
    velocity: f64,
    scenario: &TestScenario,
    projectile: &ProjectileSpec,
    specimen: &MaterialSpec,
    config: &ReferenceConfig,
) -> Result<f64> {
    let bird_length = projectile.length();
    match scenario.aircraft_motion {
        AircraftMotion::Stationary => Ok(impact_force_stationary(
            projectile.mass,
            velocity,
            bird_length,
            projectile.effective_density,
            specimen.density,
            scenario.impact_angle,
        )),
        AircraftMotion::Moving => {
            let (bird_speed, aircraft_speed) = config.split(velocity);
            let s = ImpactScenario {
                bird_mass: projectile.mass,
                bird_length,
                bird_density: projectile.effective_density,
                bird_speed,
                aircraft_speed,
                aircraft_density: specimen.density,
                impact_angle: scenario.impact_angle,
            };
            Ok(impact_force(&s)?.force)
        }
    }
}

pub fn theoretical_reference(
    scenario: &TestScenario,
    projectile: &ProjectileSpec,
    specimen: &MaterialSpec,
    config: &ReferenceConfig,
) -> Result<f64> {
    let v = reference_velocity(scenario, config, None)?;
    theoretical_force_at(v, scenario, projectile, specimen, config)
}

/// References for every matrix scenario, keyed by scenario id.
pub fn compute_references(
    matrix: &TestMatrix,
    projectiles: &[ProjectileSpec],
    materials: &[MaterialSpec],
    measurements: &[MeasurementSet],
    config: &ReferenceConfig,
) -> Result<Vec<(String, f64)>> {
    matrix
        .scenarios
        .iter()
        .map(|s| {
            let projectile = find_projectile(projectiles, s.projectile_serial)?;
            let specimen = find_material(materials, &s.specimen_material)
                .ok_or_else(|| Error::UnknownMaterial(s.specimen_material.clone()))?;
            let set = measurements.iter().find(|m| m.scenario_id == s.id);
            let v = reference_velocity(s, config, set)?;
            Ok((
                s.id.clone(),
                theoretical_force_at(v, s, projectile, specimen, config)?,
            ))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioStats {
    pub n: usize,
    pub mean: f64,
    /// Sample (n − 1) standard deviation; 0 for a single reading.
    pub std: f64,
}

pub fn scenario_stats(set: &MeasurementSet) -> Result<ScenarioStats> {
    let n = set.forces.len();
    if n == 0 {
        return Err(Error::EmptyMeasurements);
    }
    let mean = set.forces.iter().sum::<f64>() / n as f64;
    let std = if n == 1 {
        0.0
    } else {
        let ss: f64 = set.forces.iter().map(|f| (f - mean) * (f - mean)).sum();
        (ss / (n - 1) as f64).sqrt()
    };
    Ok(ScenarioStats { n, mean, std })
}

pub fn percent_error(theoretical: f64, experimental: f64) -> Result<f64> {
    if theoretical == 0.0 {
        return Err(Error::ZeroTheoreticalForce);
    }
    Ok((theoretical - experimental) * 100.0 / theoretical)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConformance {
    pub scenario_id: String,
    #[serde(rename = "theoretical_n")]
    pub theoretical_force: f64,
    #[serde(rename = "experimental_mean_n")]
    pub experimental_mean: f64,
    #[serde(rename = "experimental_std_n")]
    pub experimental_std: f64,
    pub iterations: usize,
    pub percent_error: f64,
    pub percent_conformance: f64,
    pub absolute_conformance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConformanceReport {
    pub scenarios: Vec<ScenarioConformance>,
    pub overall_mean_conformance: f64,
    pub overall_absolute_conformance: f64,
}

/// Builds the report in matrix order. Every scenario needs a reference and
/// a measurement set.
pub fn conformance_report(
    matrix: &TestMatrix,
    references: &[(String, f64)],
    measurements: &[MeasurementSet],
) -> Result<ConformanceReport> {
    let refs: HashMap<&str, f64> = references.iter().map(|(id, f)| (id.as_str(), *f)).collect();
    let sets: HashMap<&str, &MeasurementSet> = measurements
        .iter()
        .map(|m| (m.scenario_id.as_str(), m))
        .collect();

    let mut scenarios = Vec::with_capacity(matrix.scenarios.len());
    for s in &matrix.scenarios {
        let theoretical = *refs
            .get(s.id.as_str())
            .ok_or_else(|| Error::MissingReference(s.id.clone()))?;
        let set = sets
            .get(s.id.as_str())
            .ok_or_else(|| Error::MissingMeasurements(s.id.clone()))?;
        let stats = scenario_stats(set)?;
        let err = percent_error(theoretical, stats.mean)?;
        scenarios.push(ScenarioConformance {
            scenario_id: s.id.clone(),
            theoretical_force: theoretical,
            experimental_mean: stats.mean,
            experimental_std: stats.std,
            iterations: stats.n,
            percent_error: err,
            percent_conformance: 100.0 - err,
            absolute_conformance: 100.0 - err.abs(),
        });
    }
    if scenarios.is_empty() {
        return Err(Error::EmptyMeasurements);
    }
    let n = scenarios.len() as f64;
    Ok(ConformanceReport {
        overall_mean_conformance: scenarios.iter().map(|s| s.percent_conformance).sum::<f64>() / n,
        overall_absolute_conformance: scenarios
            .iter()
            .map(|s| s.absolute_conformance)
            .sum::<f64>()
            / n,
        scenarios,
    })
}
