//! Bird-strike impact force model and the design math of its drop-weight
//! validation experiment.
//!
//! - [`species`]: bird, material and aircraft records
//! - [`impact`]: impact force model, scaling, certification checks, sweeps
//! - [`kinematics`]: drop-height planning and drag-aware velocity reconstruction
//! - [`projectile`]: surrogate projectile sizing and descriptors
//! - [`harness`]: test matrix, measurement ingestion, conformance reports
//! - [`reference`]: published tables and reported figure deltas

pub mod error;
pub mod harness;
pub mod impact;
pub mod kinematics;
pub mod projectile;
pub mod reference;
pub mod roots;
pub mod species;

pub use error::{Error, Result};
pub use impact::{
    check_certification, impact_force, impact_force_stationary, scale_scenario, scenario_force,
    sensitivity_table, CertificationLimits, CertificationVerdict, ForceModel, ImpactAngle,
    ImpactResult, ImpactScenario, ScenarioParameter, SensitivityRow, StrikeCase,
};
pub use kinematics::{DragParams, DropPlan, GravityPreset};
pub use projectile::{ProjectileShape, ProjectileSpec};
pub use species::{AircraftParams, BirdSpecies, MaterialSpec};
