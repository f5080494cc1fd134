//! Analytical bird-strike impact force model.
//!
//! The bird is a right circular cylinder of length `l` and density `ρ_bird`
//! striking a skin of density `ρ_aircraft` at angle `θ` (90° is head-on).
//! Kinetic energy of the combined closing speed is dissipated over a
//! momentum-derived penetration depth:
//!
//! ```text
//! v = v_bird·sin θ + v_aircraft
//! E = ½·m·v²
//! d = l·(ρ_bird/ρ_aircraft)·(v / v_aircraft)
//! F = E/d·sin θ = ½·m·ρ_aircraft·v_aircraft·v/(l·ρ_bird)·sin θ
//! ```
//!
//! The depth is singular for a stationary aircraft; that case has its own
//! closed form, [`impact_force_stationary`], and callers pick it explicitly.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_non_negative, ensure_positive, Error, Result};

/// Impact angle in degrees, restricted to `[0, 90]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct ImpactAngle(f64);

impl ImpactAngle {
    pub const HEAD_ON: ImpactAngle = ImpactAngle(90.0);

    pub fn from_degrees(degrees: f64) -> Result<Self> {
        if (0.0..=90.0).contains(&degrees) {
            Ok(ImpactAngle(degrees))
        } else {
            Err(Error::InvalidInput {
                name: "impact_angle",
                value: degrees,
                reason: "must lie in [0, 90] degrees",
            })
        }
    }

    pub fn degrees(self) -> f64 {
        self.0
    }

    /// Sine of the angle in degrees. 0°, 30° and 90° are the only angles
    /// in range with a rational sine, and those come back exact; `to_radians`
    /// alone would give sin 30° = 0.49999999999999994.
    pub fn sin(self) -> f64 {
        match self.0 {
            0.0 => 0.0,
            30.0 => 0.5,
            90.0 => 1.0,
            d => d.to_radians().sin(),
        }
    }
}

impl TryFrom<f64> for ImpactAngle {
    type Error = Error;
    fn try_from(value: f64) -> Result<Self> {
        ImpactAngle::from_degrees(value)
    }
}

impl From<ImpactAngle> for f64 {
    fn from(a: ImpactAngle) -> f64 {
        a.0
    }
}

impl fmt::Display for ImpactAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}°", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImpactScenario {
    /// kg
    pub bird_mass: f64,
    /// m
    pub bird_length: f64,
    /// kg/m³
    pub bird_density: f64,
    /// m/s
    pub bird_speed: f64,
    /// m/s
    pub aircraft_speed: f64,
    /// kg/m³
    pub aircraft_density: f64,
    pub impact_angle: ImpactAngle,
}

impl ImpactScenario {
    pub fn validate(&self) -> Result<()> {
        ensure_non_negative("bird_mass", self.bird_mass)?;
        ensure_positive("bird_length", self.bird_length)?;
        ensure_positive("bird_density", self.bird_density)?;
        ensure_positive("aircraft_density", self.aircraft_density)?;
        ensure_non_negative("bird_speed", self.bird_speed)?;
        ensure_non_negative("aircraft_speed", self.aircraft_speed)?;
        Ok(())
    }

    pub fn total_speed(&self) -> f64 {
        total_impact_speed(self.bird_speed, self.aircraft_speed, self.impact_angle)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImpactResult {
    /// m/s
    pub total_speed: f64,
    /// J
    pub kinetic_energy: f64,
    /// m
    pub penetration_depth: f64,
    /// N
    pub force: f64,
}

pub fn total_impact_speed(bird_speed: f64, aircraft_speed: f64, angle: ImpactAngle) -> f64 {
    bird_speed * angle.sin() + aircraft_speed
}

pub fn kinetic_energy(
    bird_mass: f64,
    bird_speed: f64,
    aircraft_speed: f64,
    angle: ImpactAngle,
) -> f64 {
    let v = total_impact_speed(bird_speed, aircraft_speed, angle);
    0.5 * bird_mass * v * v
}

pub fn penetration_depth_cylinder(
    bird_length: f64,
    bird_density: f64,
    aircraft_density: f64,
    bird_speed: f64,
    aircraft_speed: f64,
    angle: ImpactAngle,
) -> Result<f64> {
    if aircraft_speed == 0.0 {
        return Err(Error::StationarySingularity);
    }
    let v = total_impact_speed(bird_speed, aircraft_speed, angle);
    Ok(bird_length * (bird_density / aircraft_density) * (v / aircraft_speed))
}

/// Evaluates the moving-aircraft model and its intermediates.
pub fn impact_force(scenario: &ImpactScenario) -> Result<ImpactResult> {
    scenario.validate()?;
    let s = scenario;
    let sin = s.impact_angle.sin();
    let total_speed = s.total_speed();
    let kinetic_energy =
        kinetic_energy(s.bird_mass, s.bird_speed, s.aircraft_speed, s.impact_angle);
    let penetration_depth = penetration_depth_cylinder(
        s.bird_length,
        s.bird_density,
        s.aircraft_density,
        s.bird_speed,
        s.aircraft_speed,
        s.impact_angle,
    )?;
    let force = 0.5 * s.bird_mass * s.aircraft_density * s.aircraft_speed * total_speed
        / (s.bird_length * s.bird_density)
        * sin;
    Ok(ImpactResult {
        total_speed,
        kinetic_energy,
        penetration_depth,
        force,
    })
}

/// Impact force on a stationary aircraft: `½·m·v_bird²·ρ_aircraft·sin³θ/(l·ρ_bird)`.
pub fn impact_force_stationary(
    bird_mass: f64,
    bird_speed: f64,
    bird_length: f64,
    bird_density: f64,
    aircraft_density: f64,
    angle: ImpactAngle,
) -> f64 {
    let sin = angle.sin();
    0.5 * bird_mass * bird_speed * bird_speed * aircraft_density * sin * sin * sin
        / (bird_length * bird_density)
}

/// Which force expression to evaluate. Nothing switches between them
/// implicitly; the two disagree as the aircraft speed goes to zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ForceModel {
    #[default]
    Moving,
    /// Aircraft at rest; `aircraft_speed` must be 0.
    Stationary,
    /// Stationary exactly when `aircraft_speed == 0`, moving otherwise.
    Auto,
}

pub fn scenario_force(scenario: &ImpactScenario, model: ForceModel) -> Result<f64> {
    scenario.validate()?;
    let model = match model {
        ForceModel::Auto if scenario.aircraft_speed == 0.0 => ForceModel::Stationary,
        ForceModel::Auto => ForceModel::Moving,
        m => m,
    };
    match model {
        ForceModel::Moving | ForceModel::Auto => impact_force(scenario).map(|r| r.force),
        ForceModel::Stationary if scenario.aircraft_speed != 0.0 => Err(Error::InvalidInput {
            name: "aircraft_speed",
            value: scenario.aircraft_speed,
            reason: "must be 0 for the stationary model",
        }),
        ForceModel::Stationary => Ok(impact_force_stationary(
            scenario.bird_mass,
            scenario.bird_speed,
            scenario.bird_length,
            scenario.bird_density,
            scenario.aircraft_density,
            scenario.impact_angle,
        )),
    }
}

/// Multiplies both speeds by `velocity_factor`.
pub fn scale_scenario(scenario: &ImpactScenario, velocity_factor: f64) -> Result<ImpactScenario> {
    ensure_positive("velocity_factor", velocity_factor)?;
    Ok(ImpactScenario {
        bird_speed: scenario.bird_speed * velocity_factor,
        aircraft_speed: scenario.aircraft_speed * velocity_factor,
        ..*scenario
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificationLimits {
    /// N
    pub single_bird_force: f64,
    /// N
    pub flock_force: f64,
    /// kg
    pub single_bird_mass: f64,
    /// kg
    pub flock_bird_mass: f64,
    /// m/s
    pub windshield_speed: f64,
}

impl Default for CertificationLimits {
    fn default() -> Self {
        CertificationLimits {
            single_bird_force: 2255.0,
            flock_force: 4819.0,
            single_bird_mass: 1.0,
            flock_bird_mass: 0.45,
            windshield_speed: 25.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrikeCase {
    SingleBird,
    Flock,
}

impl FromStr for StrikeCase {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "single-bird" | "single" => Ok(StrikeCase::SingleBird),
            "flock" => Ok(StrikeCase::Flock),
            _ => Err(format!(
                "unknown strike case `{s}` (expected single-bird or flock)"
            )),
        }
    }
}

impl fmt::Display for StrikeCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StrikeCase::SingleBird => "single-bird",
            StrikeCase::Flock => "flock",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificationVerdict {
    pub case: StrikeCase,
    pub force: f64,
    pub limit: f64,
    pub passed: bool,
    /// `limit - force`; negative when the limit is exceeded.
    pub margin: f64,
}

pub fn check_certification(
    force: f64,
    case: StrikeCase,
    limits: &CertificationLimits,
) -> Result<CertificationVerdict> {
    ensure_non_negative("force", force)?;
    let limit = match case {
        StrikeCase::SingleBird => limits.single_bird_force,
        StrikeCase::Flock => limits.flock_force,
    };
    Ok(CertificationVerdict {
        case,
        force,
        limit,
        passed: force <= limit,
        margin: limit - force,
    })
}

/// A field of [`ImpactScenario`] that a sensitivity sweep can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioParameter {
    BirdMass,
    BirdLength,
    BirdDensity,
    BirdSpeed,
    AircraftSpeed,
    AircraftDensity,
    ImpactAngle,
}

impl ScenarioParameter {
    pub const ALL: [ScenarioParameter; 7] = [
        ScenarioParameter::BirdMass,
        ScenarioParameter::BirdLength,
        ScenarioParameter::BirdDensity,
        ScenarioParameter::BirdSpeed,
        ScenarioParameter::AircraftSpeed,
        ScenarioParameter::AircraftDensity,
        ScenarioParameter::ImpactAngle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScenarioParameter::BirdMass => "bird_mass",
            ScenarioParameter::BirdLength => "bird_length",
            ScenarioParameter::BirdDensity => "bird_density",
            ScenarioParameter::BirdSpeed => "bird_speed",
            ScenarioParameter::AircraftSpeed => "aircraft_speed",
            ScenarioParameter::AircraftDensity => "aircraft_density",
            ScenarioParameter::ImpactAngle => "impact_angle",
        }
    }

    pub fn get(self, s: &ImpactScenario) -> f64 {
        match self {
            ScenarioParameter::BirdMass => s.bird_mass,
            ScenarioParameter::BirdLength => s.bird_length,
            ScenarioParameter::BirdDensity => s.bird_density,
            ScenarioParameter::BirdSpeed => s.bird_speed,
            ScenarioParameter::AircraftSpeed => s.aircraft_speed,
            ScenarioParameter::AircraftDensity => s.aircraft_density,
            ScenarioParameter::ImpactAngle => s.impact_angle.degrees(),
        }
    }

    /// Copy of `s` with this field set to `value`.
    pub fn with(self, s: &ImpactScenario, value: f64) -> Result<ImpactScenario> {
        let mut out = *s;
        match self {
            ScenarioParameter::BirdMass => out.bird_mass = value,
            ScenarioParameter::BirdLength => out.bird_length = value,
            ScenarioParameter::BirdDensity => out.bird_density = value,
            ScenarioParameter::BirdSpeed => out.bird_speed = value,
            ScenarioParameter::AircraftSpeed => out.aircraft_speed = value,
            ScenarioParameter::AircraftDensity => out.aircraft_density = value,
            ScenarioParameter::ImpactAngle => out.impact_angle = ImpactAngle::from_degrees(value)?,
        }
        out.validate()?;
        Ok(out)
    }
}

impl FromStr for ScenarioParameter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().replace('-', "_");
        ScenarioParameter::ALL
            .into_iter()
            .find(|p| p.name() == key)
            .ok_or_else(|| Error::UnknownParameter(s.to_string()))
    }
}

impl fmt::Display for ScenarioParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensitivityRow {
    pub value: f64,
    /// N
    pub force: f64,
    /// `100·(F − F_base)/F_base`
    pub percent_change: f64,
}

/// Signed percent change of `value` relative to `base`.
pub fn percent_change(base: f64, value: f64) -> Result<f64> {
    if base == 0.0 {
        return Err(Error::ZeroBaseForce);
    }
    Ok(100.0 * (value - base) / base)
}

/// Force at each value of `parameter`, as a signed percent change from the
/// base. Uses [`ForceModel::Auto`], so a zero aircraft speed falls back to
/// the stationary form.
pub fn sensitivity_table(
    base: &ImpactScenario,
    parameter: ScenarioParameter,
    values: &[f64],
) -> Result<Vec<SensitivityRow>> {
    let model = ForceModel::Auto;
    let base_force = scenario_force(base, model)?;
    if base_force == 0.0 {
        return Err(Error::ZeroBaseForce);
    }
    values
        .iter()
        .map(|&value| {
            let force = scenario_force(&parameter.with(base, value)?, model)?;
            Ok(SensitivityRow {
                value,
                force,
                percent_change: percent_change(base_force, force)?,
            })
        })
        .collect()
}
