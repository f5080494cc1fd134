use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::impact::ImpactAngle;
use crate::kinematics::{ideal_impact_velocity, PAPER_GRAVITY};
use crate::projectile::{find_projectile, ProjectileSpec};
use crate::species::{find_material, MaterialSpec, ALUMINIUM_NAME, CFRP_NAME};

pub const DEFAULT_ITERATIONS: u32 = 15;
/// Nominal and drop-height velocities further apart than this are flagged, m/s.
pub const VELOCITY_MISMATCH_TOLERANCE: f64 = 0.05;

/// Which closed form the theoretical reference uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AircraftMotion {
    Moving,
    Stationary,
}

/// A scenario as configured, before validation against the projectile set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioDefinition {
    pub id: String,
    /// `None` for the baseline shared by every case.
    pub case_number: Option<u8>,
    pub projectile_serial: u8,
    pub drop_height: f64,
    pub nominal_impact_velocity: f64,
    pub impact_angle: f64,
    pub specimen_material: String,
    pub aircraft_motion: AircraftMotion,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestScenario {
    pub id: String,
    pub case_number: Option<u8>,
    pub projectile_serial: u8,
    /// m
    pub drop_height: f64,
    /// Velocity as listed in the matrix definition, m/s.
    pub nominal_impact_velocity: f64,
    /// Drag-free velocity recomputed from the drop height, m/s.
    pub drop_impact_velocity: f64,
    pub velocity_mismatch: bool,
    pub impact_angle: ImpactAngle,
    pub specimen_material: String,
    pub aircraft_motion: AircraftMotion,
    pub iterations: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestMatrix {
    pub scenarios: Vec<TestScenario>,
    pub iterations_per_scenario: u32,
    /// m/s²
    pub gravity: f64,
}

impl TestMatrix {
    pub fn total_iterations(&self) -> u64 {
        self.scenarios.iter().map(|s| s.iterations as u64).sum()
    }

    pub fn case_count(&self) -> usize {
        self.scenarios
            .iter()
            .filter_map(|s| s.case_number)
            .collect::<BTreeSet<_>>()
            .len()
    }

    pub fn scenario(&self, id: &str) -> Option<&TestScenario> {
        self.scenarios.iter().find(|s| s.id == id)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("matrix serialises");
        s.push('\n');
        s
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixConfig {
    pub iterations_per_scenario: u32,
    pub gravity: f64,
    pub scenarios: Vec<ScenarioDefinition>,
}

impl Default for MatrixConfig {
    fn default() -> Self {
        MatrixConfig {
            iterations_per_scenario: DEFAULT_ITERATIONS,
            gravity: PAPER_GRAVITY,
            scenarios: default_scenarios(),
        }
    }
}

/// Baseline plus one variant per influencing parameter.
pub fn default_scenarios() -> Vec<ScenarioDefinition> {
    let def = |id: &str, case, serial, height, velocity, angle, material: &str, motion| {
        ScenarioDefinition {
            id: id.to_string(),
            case_number: case,
            projectile_serial: serial,
            drop_height: height,
            nominal_impact_velocity: velocity,
            impact_angle: angle,
            specimen_material: material.to_string(),
            aircraft_motion: motion,
        }
    };
    use AircraftMotion::{Moving, Stationary};
    let al = ALUMINIUM_NAME;
    vec![
        def("baseline", None, 1, 2.8, 7.49, 90.0, al, Moving),
        def("1", Some(1), 3, 2.8, 7.49, 90.0, al, Moving),
        def("2.1", Some(2), 1, 2.0, 6.44, 90.0, al, Moving),
        def("2.2", Some(2), 1, 1.5, 5.47, 90.0, al, Stationary),
        def("3", Some(3), 2, 2.8, 7.49, 90.0, al, Moving),
        def("4", Some(4), 4, 2.8, 7.49, 90.0, al, Moving),
        def("5", Some(5), 1, 2.8, 7.49, 50.0, al, Moving),
        def("6", Some(6), 1, 2.8, 7.49, 90.0, CFRP_NAME, Moving),
        def("7", Some(7), 5, 2.8, 7.49, 90.0, al, Moving),
    ]
}

pub fn build_test_matrix(
    config: &MatrixConfig,
    projectiles: &[ProjectileSpec],
    materials: &[MaterialSpec],
) -> Result<TestMatrix> {
    if config.iterations_per_scenario == 0 {
        return Err(Error::InvalidInput {
            name: "iterations_per_scenario",
            value: 0.0,
            reason: "must be >= 1",
        });
    }
    let mut seen = BTreeSet::new();
    let mut scenarios = Vec::with_capacity(config.scenarios.len());
    for def in &config.scenarios {
        find_projectile(projectiles, def.projectile_serial)?;
        let material = find_material(materials, &def.specimen_material)
            .ok_or_else(|| Error::UnknownMaterial(def.specimen_material.clone()))?;
        if !(def.drop_height.is_finite() && def.drop_height > 0.0) {
            return Err(Error::InvalidInput {
                name: "drop_height",
                value: def.drop_height,
                reason: "must be finite and > 0",
            });
        }
        let angle = ImpactAngle::from_degrees(def.impact_angle)?;
        if angle.degrees() == 0.0 {
            return Err(Error::InvalidInput {
                name: "impact_angle",
                value: 0.0,
                reason: "test scenarios need an angle in (0, 90]",
            });
        }
        if !seen.insert(def.id.clone()) {
            return Err(Error::DuplicateScenario(def.id.clone()));
        }
        let drop_impact_velocity = ideal_impact_velocity(def.drop_height, config.gravity)?;
        scenarios.push(TestScenario {
            id: def.id.clone(),
            case_number: def.case_number,
            projectile_serial: def.projectile_serial,
            drop_height: def.drop_height,
            nominal_impact_velocity: def.nominal_impact_velocity,
            drop_impact_velocity,
            velocity_mismatch: (drop_impact_velocity - def.nominal_impact_velocity).abs()
                > VELOCITY_MISMATCH_TOLERANCE,
            impact_angle: angle,
            specimen_material: material.name.clone(),
            aircraft_motion: def.aircraft_motion,
            iterations: config.iterations_per_scenario,
        });
    }
    Ok(TestMatrix {
        scenarios,
        iterations_per_scenario: config.iterations_per_scenario,
        gravity: config.gravity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projectile::{generate_projectile_set, ABS_DENSITY};
    use crate::species::{builtin_materials, BirdSpecies};

    fn fixtures() -> (Vec<ProjectileSpec>, Vec<MaterialSpec>) {
        let starling = BirdSpecies::new("Starling", 0.085, 0.22, 1230.0, 22.35).unwrap();
        (
            generate_projectile_set(&starling, ABS_DENSITY, 0.0).unwrap(),
            builtin_materials(),
        )
    }

    #[test]
    fn default_matrix_shape() {
        let (p, m) = fixtures();
        let matrix = build_test_matrix(&MatrixConfig::default(), &p, &m).unwrap();
        assert_eq!(matrix.scenarios.len(), 9);
        assert_eq!(matrix.case_count(), 7);
        assert_eq!(matrix.total_iterations(), 135);
        assert_eq!(matrix.scenario("5").unwrap().impact_angle.degrees(), 50.0);
        assert_eq!(matrix.scenario("6").unwrap().specimen_material, CFRP_NAME);
        assert_eq!(matrix.scenario("7").unwrap().projectile_serial, 5);
    }

    #[test]
    fn single_iteration_matrix() {
        let (p, m) = fixtures();
        let config = MatrixConfig {
            iterations_per_scenario: 1,
            ..MatrixConfig::default()
        };
        assert_eq!(
            build_test_matrix(&config, &p, &m)
                .unwrap()
                .total_iterations(),
            9
        );
        let config = MatrixConfig {
            iterations_per_scenario: 0,
            ..MatrixConfig::default()
        };
        assert!(build_test_matrix(&config, &p, &m).is_err());
    }

    #[test]
    fn only_scenario_2_1_velocity_is_flagged() {
        let (p, m) = fixtures();
        let matrix = build_test_matrix(&MatrixConfig::default(), &p, &m).unwrap();
        let flagged: Vec<&str> = matrix
            .scenarios
            .iter()
            .filter(|s| s.velocity_mismatch)
            .map(|s| s.id.as_str())
            .collect();
        assert_eq!(flagged, ["2.1"]);
        let s = matrix.scenario("2.1").unwrap();
        assert_eq!(s.nominal_impact_velocity, 6.44);
        assert!((s.drop_impact_velocity - 40f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn unknown_serial_or_material() {
        let (p, m) = fixtures();
        let mut config = MatrixConfig::default();
        config.scenarios[1].projectile_serial = 9;
        assert!(matches!(
            build_test_matrix(&config, &p, &m),
            Err(Error::UnknownProjectile(9))
        ));
        let mut config = MatrixConfig::default();
        config.scenarios[7].specimen_material = "Balsa".into();
        assert!(matches!(
            build_test_matrix(&config, &p, &m),
            Err(Error::UnknownMaterial(_))
        ));
    }

    #[test]
    fn serialisation_is_deterministic_and_roundtrips() {
        let (p, m) = fixtures();
        let a = build_test_matrix(&MatrixConfig::default(), &p, &m).unwrap();
        let b = build_test_matrix(&MatrixConfig::default(), &p, &m).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        let back: TestMatrix = serde_json::from_str(&a.to_json()).unwrap();
        assert_eq!(back, a);
    }
}
