//! Run configuration loaded from a TOML file.
//!
//! ```toml
//! gravity = "paper"            # or "standard"
//! scale_factor = 15
//! cruise_speed = 90            # m/s
//! species_file = "birds.csv"
//! materials_file = "materials.csv"
//! measurements_file = "drops.csv"
//! velocity_split = "scaled-cruise"   # or "all-aircraft"
//! velocity_source = "drop-height"    # "nominal", "measured"
//! format = "csv"               # or "json"
//! ```
//!
//! Every key is optional. Command-line flags win over the file.

use std::fs;
use std::path::{Path, PathBuf};

use birdstrike_core::harness::{ReportFormat, VelocitySource, VelocitySplit};
use birdstrike_core::GravityPreset;
use serde::Deserialize;

use crate::UsageError;

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub gravity: Option<GravityPreset>,
    pub scale_factor: Option<f64>,
    pub cruise_speed: Option<f64>,
    pub species_file: Option<PathBuf>,
    pub materials_file: Option<PathBuf>,
    pub measurements_file: Option<PathBuf>,
    pub velocity_split: Option<VelocitySplit>,
    pub velocity_source: Option<VelocitySource>,
    pub format: Option<ReportFormat>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, UsageError> {
        let text = fs::read_to_string(path)
            .map_err(|e| UsageError(format!("config {}: {e}", path.display())))?;
        let mut cfg = Self::parse(&text)
            .map_err(|e| UsageError(format!("config {}: {e}", path.display())))?;
        // Relative paths in the file are relative to the file.
        if let Some(dir) = path.parent() {
            for p in [
                &mut cfg.species_file,
                &mut cfg.materials_file,
                &mut cfg.measurements_file,
            ]
            .into_iter()
            .flatten()
            {
                if p.is_relative() {
                    *p = dir.join(&*p);
                }
            }
        }
        Ok(cfg)
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| e.to_string())?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), String> {
        if let Some(s) = self.scale_factor {
            check_scale_factor(s)?;
        }
        if let Some(v) = self.cruise_speed {
            if !(v.is_finite() && v >= 0.0) {
                return Err(format!("cruise_speed must be finite and >= 0, got {v}"));
            }
        }
        Ok(())
    }
}

pub fn check_scale_factor(s: f64) -> Result<(), String> {
    if s.is_finite() && s >= 1.0 {
        Ok(())
    } else {
        Err(format!("scale_factor must be >= 1, got {s}"))
    }
}
