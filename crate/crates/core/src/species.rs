//! Bird, material and aircraft parameter records.
//!
//! Species are read from a CSV registry with the header
//! `name,mass_kg,length_m,density_kg_m3,flight_speed_m_s`; materials from an
//! optional CSV with `name,density_kg_m3,thickness_m`. Records are immutable
//! once loaded.

use std::collections::HashSet;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SPECIES_HEADER: [&str; 5] = [
    "name",
    "mass_kg",
    "length_m",
    "density_kg_m3",
    "flight_speed_m_s",
];

pub const MATERIALS_HEADER: [&str; 3] = ["name", "density_kg_m3", "thickness_m"];

/// Handbook density of Aluminium 2024-T3.
pub const ALUMINIUM_2024_T3_DENSITY: f64 = 2780.0;
/// CFRP density relative to aluminium (58 % lighter).
pub const CFRP_TO_ALUMINIUM_DENSITY_RATIO: f64 = 0.42;
/// Specimen plate thickness used for both test materials.
pub const SPECIMEN_THICKNESS: f64 = 0.002;
/// Mid-range air-taxi cruise speed (175 kn).
pub const AIR_TAXI_CRUISE_SPEED: f64 = 90.0;

pub const ALUMINIUM_NAME: &str = "Aluminium-2024-T3";
pub const CFRP_NAME: &str = "CFRP";

/// Plausible body density range; values outside only produce a warning.
pub const PLAUSIBLE_BODY_DENSITY: (f64, f64) = (500.0, 2000.0);

const BUNDLED_SPECIES_CSV: &str = include_str!("../data/species.csv");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BirdSpecies {
    pub name: String,
    /// kg
    pub mass: f64,
    /// m
    pub length: f64,
    /// kg/m³
    pub body_density: f64,
    /// m/s
    pub flight_speed: f64,
}

impl BirdSpecies {
    pub fn new(
        name: impl Into<String>,
        mass: f64,
        length: f64,
        body_density: f64,
        flight_speed: f64,
    ) -> Result<Self> {
        let species = BirdSpecies {
            name: name.into(),
            mass,
            length,
            body_density,
            flight_speed,
        };
        species.validate()?;
        Ok(species)
    }

    pub fn validate(&self) -> Result<()> {
        self.check().map_err(|(field, reason)| Error::InvalidInput {
            name: field,
            value: match field {
                "mass_kg" => self.mass,
                "length_m" => self.length,
                "density_kg_m3" => self.body_density,
                _ => self.flight_speed,
            },
            reason,
        })
    }

    fn check(&self) -> std::result::Result<(), (&'static str, &'static str)> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.mass) {
            return Err(("mass_kg", "must be finite and > 0"));
        }
        if !positive(self.length) {
            return Err(("length_m", "must be finite and > 0"));
        }
        if !positive(self.body_density) {
            return Err(("density_kg_m3", "must be finite and > 0"));
        }
        if !(self.flight_speed.is_finite() && self.flight_speed >= 0.0) {
            return Err(("flight_speed_m_s", "must be finite and >= 0"));
        }
        Ok(())
    }

    /// Warning text when the body density falls outside the plausible range.
    pub fn plausibility_warning(&self) -> Option<String> {
        let (lo, hi) = PLAUSIBLE_BODY_DENSITY;
        if self.body_density < lo || self.body_density > hi {
            Some(format!(
                "species `{}`: body density {} kg/m³ outside plausible range [{lo}, {hi}]",
                self.name, self.body_density
            ))
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaterialSpec {
    pub name: String,
    /// kg/m³
    pub density: f64,
    /// m
    pub thickness: f64,
}

impl MaterialSpec {
    pub fn new(name: impl Into<String>, density: f64, thickness: f64) -> Result<Self> {
        crate::error::ensure_positive("density_kg_m3", density)?;
        crate::error::ensure_positive("thickness_m", thickness)?;
        Ok(MaterialSpec {
            name: name.into(),
            density,
            thickness,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AircraftParams {
    /// m/s
    pub cruise_speed: f64,
    pub skin: MaterialSpec,
}

impl AircraftParams {
    pub fn new(cruise_speed: f64, skin: MaterialSpec) -> Result<Self> {
        crate::error::ensure_non_negative("cruise_speed", cruise_speed)?;
        Ok(AircraftParams { cruise_speed, skin })
    }

    /// 90 m/s air taxi with an Aluminium-2024-T3 skin.
    pub fn air_taxi() -> Self {
        AircraftParams {
            cruise_speed: AIR_TAXI_CRUISE_SPEED,
            skin: aluminium_2024_t3(),
        }
    }
}

fn aluminium_2024_t3() -> MaterialSpec {
    MaterialSpec {
        name: ALUMINIUM_NAME.to_string(),
        density: ALUMINIUM_2024_T3_DENSITY,
        thickness: SPECIMEN_THICKNESS,
    }
}

/// The two specimen materials, with CFRP defined relative to aluminium.
pub fn builtin_materials() -> Vec<MaterialSpec> {
    let al = aluminium_2024_t3();
    let cfrp = MaterialSpec {
        name: CFRP_NAME.to_string(),
        density: al.density * CFRP_TO_ALUMINIUM_DENSITY_RATIO,
        thickness: SPECIMEN_THICKNESS,
    };
    vec![al, cfrp]
}

pub fn find_material<'a>(materials: &'a [MaterialSpec], name: &str) -> Option<&'a MaterialSpec> {
    materials.iter().find(|m| m.name.eq_ignore_ascii_case(name))
}

pub fn find_species<'a>(registry: &'a [BirdSpecies], name: &str) -> Option<&'a BirdSpecies> {
    registry.iter().find(|s| s.name.eq_ignore_ascii_case(name))
}

/// The species registry shipped with the crate.
pub fn bundled_species() -> Vec<BirdSpecies> {
    read_species(BUNDLED_SPECIES_CSV.as_bytes(), "bundled species.csv")
        .expect("bundled species registry is valid")
}

pub fn load_species_registry(path: impl AsRef<Path>) -> Result<Vec<BirdSpecies>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_species(file, &path.display().to_string())
}

pub fn read_species<R: Read>(reader: R, source_name: &str) -> Result<Vec<BirdSpecies>> {
    let rows = read_table(reader, source_name, &SPECIES_HEADER)?;
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(rows.len());
    for (row, record) in rows {
        let numbers = parse_numbers(source_name, row, &record, &SPECIES_HEADER[1..])?;
        let species = BirdSpecies {
            name: record[0].trim().to_string(),
            mass: numbers[0],
            length: numbers[1],
            body_density: numbers[2],
            flight_speed: numbers[3],
        };
        if species.name.is_empty() {
            return Err(Error::InvalidRecord {
                source_name: source_name.to_string(),
                row,
                field: "name".into(),
                message: "must not be empty".into(),
            });
        }
        species
            .check()
            .map_err(|(field, reason)| Error::InvalidRecord {
                source_name: source_name.to_string(),
                row,
                field: field.into(),
                message: reason.into(),
            })?;
        if !seen.insert(species.name.to_lowercase()) {
            return Err(Error::DuplicateSpecies(species.name));
        }
        if let Some(w) = species.plausibility_warning() {
            log::warn!("{w}");
        }
        out.push(species);
    }
    Ok(out)
}

/// Writes species using shortest round-trip float formatting.
pub fn write_species<W: Write>(writer: W, species: &[BirdSpecies]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(SPECIES_HEADER)?;
    for s in species {
        w.write_record([
            s.name.clone(),
            s.mass.to_string(),
            s.length.to_string(),
            s.body_density.to_string(),
            s.flight_speed.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<writer>", e))?;
    Ok(())
}

pub fn load_materials(path: impl AsRef<Path>) -> Result<Vec<MaterialSpec>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_materials(file, &path.display().to_string())
}

pub fn read_materials<R: Read>(reader: R, source_name: &str) -> Result<Vec<MaterialSpec>> {
    let rows = read_table(reader, source_name, &MATERIALS_HEADER)?;
    rows.into_iter()
        .map(|(row, record)| {
            let numbers = parse_numbers(source_name, row, &record, &MATERIALS_HEADER[1..])?;
            for (field, value) in MATERIALS_HEADER[1..].iter().zip(&numbers) {
                if !(value.is_finite() && *value > 0.0) {
                    return Err(Error::InvalidRecord {
                        source_name: source_name.to_string(),
                        row,
                        field: (*field).into(),
                        message: "must be finite and > 0".into(),
                    });
                }
            }
            Ok(MaterialSpec {
                name: record[0].trim().to_string(),
                density: numbers[0],
                thickness: numbers[1],
            })
        })
        .collect()
}

/// Reads a headed CSV table, checking the header and column count.
/// Returns `(row_number, record)` pairs where the header is row 1.
pub(crate) fn read_table<R: Read>(
    reader: R,
    source_name: &str,
    header: &[&str],
) -> Result<Vec<(usize, csv::StringRecord)>> {
    read_table_with_optional(reader, source_name, header, &[])
}

/// Like [`read_table`], but permits trailing `optional` columns.
pub(crate) fn read_table_with_optional<R: Read>(
    reader: R,
    source_name: &str,
    header: &[&str],
    optional: &[&str],
) -> Result<Vec<(usize, csv::StringRecord)>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut records = rdr.records();
    let found = match records.next() {
        None => return Ok(Vec::new()),
        Some(r) => r?,
    };
    let found: Vec<&str> = found.iter().collect();
    let header_ok = found.len() >= header.len()
        && found.len() <= header.len() + optional.len()
        && found[..header.len()] == *header
        && found[header.len()..] == optional[..found.len() - header.len()];
    if !header_ok {
        return Err(Error::Parse {
            source_name: source_name.to_string(),
            row: 1,
            column: "header".into(),
            message: format!(
                "expected `{}`, found `{}`",
                header.join(","),
                found.join(",")
            ),
        });
    }
    let width = found.len();
    let mut out = Vec::new();
    for (i, rec) in records.enumerate() {
        let row = i + 2;
        let rec = rec?;
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        if rec.len() != width {
            return Err(Error::Parse {
                source_name: source_name.to_string(),
                row,
                column: "*".into(),
                message: format!("expected {width} fields, found {}", rec.len()),
            });
        }
        out.push((row, rec));
    }
    Ok(out)
}

/// Parses `columns` (the header names after the first) as floats.
fn parse_numbers(
    source_name: &str,
    row: usize,
    record: &csv::StringRecord,
    columns: &[&str],
) -> Result<Vec<f64>> {
    columns
        .iter()
        .enumerate()
        .map(|(i, column)| parse_f64_field(source_name, row, column, &record[i + 1]))
        .collect()
}

pub(crate) fn parse_f64_field(
    source_name: &str,
    row: usize,
    column: &str,
    text: &str,
) -> Result<f64> {
    text.parse::<f64>().map_err(|e| Error::Parse {
        source_name: source_name.to_string(),
        row,
        column: column.to_string(),
        message: format!("`{text}`: {e}"),
    })
}
