//! Surrogate bird projectiles.
//!
//! A bird of mass `m`, body density `ρ` and length `l` maps to a cylinder of
//! height `l` and radius `√(m/(ρ·π·l))`. Printed projectiles reach a target
//! density through their infill; the effective density of a part with solid
//! shell fraction `s` and infill fraction `f` is `ρ_solid·(s + (1 − s)·f)`.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_fraction, ensure_positive, Error, Result};
use crate::species::BirdSpecies;

/// Handbook density of solid ABS filament.
pub const ABS_DENSITY: f64 = 1040.0;
/// Minimum and maximum infill presets of the printer.
pub const BASE_INFILL: f64 = 0.15;
pub const DENSE_INFILL: f64 = 0.40;
/// Radius of the thin-projectile variant relative to the base cylinder.
pub const RADIUS_VARIANT_FACTOR: f64 = 0.5;
/// Length of the short-projectile variant relative to the base (0.15 m / 0.22 m).
pub const LENGTH_VARIANT_FACTOR: f64 = 0.15 / 0.22;
/// Printed dimensions are specified to 0.1 mm.
pub const DIMENSION_RESOLUTION: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", content = "dims_m", rename_all = "lowercase")]
pub enum ProjectileShape {
    Cylinder {
        radius: f64,
        height: f64,
    },
    /// Semi-axes, `a` along the direction of travel.
    Ellipsoid {
        a: f64,
        b: f64,
        c: f64,
    },
}

impl ProjectileShape {
    pub fn volume(&self) -> Result<f64> {
        match *self {
            ProjectileShape::Cylinder { radius, height } => cylinder_volume(radius, height),
            ProjectileShape::Ellipsoid { a, b, c } => ellipsoid_volume(a, b, c),
        }
    }

    /// Extent along the direction of travel, used as the bird length.
    pub fn length(&self) -> f64 {
        match *self {
            ProjectileShape::Cylinder { height, .. } => height,
            ProjectileShape::Ellipsoid { a, .. } => 2.0 * a,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ProjectileShape::Cylinder { .. } => "cylinder",
            ProjectileShape::Ellipsoid { .. } => "ellipsoid",
        }
    }
}

/// One printed surrogate, serialised as the geometry descriptor JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectileSpec {
    pub serial: u8,
    #[serde(flatten)]
    pub shape: ProjectileShape,
    pub infill_fraction: f64,
    #[serde(rename = "solid_density_kg_m3")]
    pub solid_material_density: f64,
    #[serde(rename = "effective_density_kg_m3")]
    pub effective_density: f64,
    #[serde(rename = "mass_kg")]
    pub mass: f64,
    pub varying_factor: String,
}

impl ProjectileSpec {
    /// Builds a spec whose mass follows from its shape and effective density.
    pub fn new(
        serial: u8,
        shape: ProjectileShape,
        solid_material_density: f64,
        infill_fraction: f64,
        shell_fraction: f64,
        varying_factor: impl Into<String>,
    ) -> Result<Self> {
        let effective = effective_density(solid_material_density, infill_fraction, shell_fraction)?;
        let mass = effective * shape.volume()?;
        Ok(ProjectileSpec {
            serial,
            shape,
            infill_fraction,
            solid_material_density,
            effective_density: effective,
            mass,
            varying_factor: varying_factor.into(),
        })
    }

    pub fn volume(&self) -> Result<f64> {
        self.shape.volume()
    }

    pub fn length(&self) -> f64 {
        self.shape.length()
    }

    pub fn validate(&self) -> Result<()> {
        ensure_fraction("infill_fraction", self.infill_fraction)?;
        let volume = self.shape.volume()?;
        let expected = self.effective_density * volume;
        if (self.mass - expected).abs() > 1e-9 * expected.abs().max(f64::MIN_POSITIVE) {
            return Err(Error::InvalidInput {
                name: "mass_kg",
                value: self.mass,
                reason: "must equal effective density × volume",
            });
        }
        Ok(())
    }
}

pub fn cylinder_volume(radius: f64, height: f64) -> Result<f64> {
    ensure_positive("radius", radius)?;
    ensure_positive("height", height)?;
    Ok(PI * radius * radius * height)
}

pub fn ellipsoid_volume(a: f64, b: f64, c: f64) -> Result<f64> {
    ensure_positive("a", a)?;
    ensure_positive("b", b)?;
    ensure_positive("c", c)?;
    Ok(4.0 / 3.0 * PI * a * b * c)
}

/// Radius of the cylinder of height `length` holding `mass` at `body_density`.
pub fn cylinder_radius_for(mass: f64, body_density: f64, length: f64) -> Result<f64> {
    ensure_positive("mass", mass)?;
    ensure_positive("body_density", body_density)?;
    ensure_positive("length", length)?;
    Ok((mass / (body_density * PI * length)).sqrt())
}

pub fn effective_density(
    solid_density: f64,
    infill_fraction: f64,
    shell_fraction: f64,
) -> Result<f64> {
    ensure_positive("solid_density", solid_density)?;
    ensure_fraction("infill_fraction", infill_fraction)?;
    ensure_fraction("shell_fraction", shell_fraction)?;
    Ok(solid_density * (shell_fraction + (1.0 - shell_fraction) * infill_fraction))
}

fn to_resolution(x: f64) -> f64 {
    (x / DIMENSION_RESOLUTION).round() * DIMENSION_RESOLUTION
}

/// The five-projectile set built around the species' base cylinder.
///
/// SN1 is the base cylinder at minimum infill; SN2–SN4 vary infill, radius
/// and length one at a time; SN5 is the ellipsoid inscribed in SN1.
pub fn generate_projectile_set(
    base: &BirdSpecies,
    solid_density: f64,
    shell_fraction: f64,
) -> Result<Vec<ProjectileSpec>> {
    base.validate()?;
    let radius = to_resolution(cylinder_radius_for(
        base.mass,
        base.body_density,
        base.length,
    )?);
    let height = to_resolution(base.length);
    let cylinder = |radius, height| ProjectileShape::Cylinder { radius, height };
    let spec = |serial, shape, infill, label: &str| {
        ProjectileSpec::new(serial, shape, solid_density, infill, shell_fraction, label)
    };
    Ok(vec![
        spec(1, cylinder(radius, height), BASE_INFILL, "Base model")?,
        spec(
            2,
            cylinder(radius, height),
            DENSE_INFILL,
            "Bird density & bird mass (Infill)",
        )?,
        spec(
            3,
            cylinder(to_resolution(radius * RADIUS_VARIANT_FACTOR), height),
            BASE_INFILL,
            "Bird radius (& bird mass)",
        )?,
        spec(
            4,
            cylinder(radius, to_resolution(height * LENGTH_VARIANT_FACTOR)),
            BASE_INFILL,
            "Bird length (& bird mass)",
        )?,
        spec(
            5,
            ProjectileShape::Ellipsoid {
                a: height / 2.0,
                b: radius,
                c: radius,
            },
            BASE_INFILL,
            "Bird shape",
        )?,
    ])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeciesGeometry {
    pub species: String,
    /// m
    pub radius: f64,
    /// m
    pub height: f64,
}

pub fn species_geometry_table(registry: &[BirdSpecies]) -> Result<Vec<SpeciesGeometry>> {
    registry
        .iter()
        .map(|s| {
            Ok(SpeciesGeometry {
                species: s.name.clone(),
                radius: cylinder_radius_for(s.mass, s.body_density, s.length)?,
                height: s.length,
            })
        })
        .collect()
}

pub fn export_geometry(spec: &ProjectileSpec, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut text = serde_json::to_string_pretty(spec).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn import_geometry(path: impl AsRef<Path>) -> Result<ProjectileSpec> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let spec: ProjectileSpec = serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    spec.validate()?;
    Ok(spec)
}

pub fn find_projectile(set: &[ProjectileSpec], serial: u8) -> Result<&ProjectileSpec> {
    set.iter()
        .find(|p| p.serial == serial)
        .ok_or(Error::UnknownProjectile(serial))
}
