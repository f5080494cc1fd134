use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::matrix::TestMatrix;
use crate::error::{Error, Result};
use crate::species::{parse_f64_field, read_table_with_optional};

pub const MEASUREMENTS_HEADER: [&str; 3] = ["scenario_id", "iteration", "force_n"];
pub const MEASUREMENTS_OPTIONAL: [&str; 1] = ["impact_velocity_m_s"];

/// Per-iteration force readings for one scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSet {
    pub scenario_id: String,
    /// N, one per iteration in file order.
    pub forces: Vec<f64>,
    /// m/s, aligned with `forces`; `None` where not recorded.
    pub impact_velocities: Vec<Option<f64>>,
}

impl MeasurementSet {
    pub fn new(scenario_id: impl Into<String>, forces: Vec<f64>) -> Result<Self> {
        let set = MeasurementSet {
            scenario_id: scenario_id.into(),
            impact_velocities: vec![None; forces.len()],
            forces,
        };
        set.validate()?;
        Ok(set)
    }

    pub fn validate(&self) -> Result<()> {
        if self.forces.is_empty() {
            return Err(Error::EmptyMeasurements);
        }
        for &f in &self.forces {
            crate::error::ensure_non_negative("force_n", f)?;
        }
        Ok(())
    }

    /// Mean recorded impact velocity, if every iteration has one.
    pub fn mean_impact_velocity(&self) -> Option<f64> {
        let v: Option<Vec<f64>> = self.impact_velocities.iter().copied().collect();
        let v = v.filter(|v| !v.is_empty())?;
        Some(v.iter().sum::<f64>() / v.len() as f64)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct IngestOptions<'a> {
    /// Validate scenario ids and iteration counts against this matrix.
    pub matrix: Option<&'a TestMatrix>,
    /// Turn matrix mismatches into errors instead of warnings.
    pub strict: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Ingested {
    pub sets: Vec<MeasurementSet>,
    pub warnings: Vec<String>,
}

pub fn ingest_measurements(path: impl AsRef<Path>, options: IngestOptions<'_>) -> Result<Ingested> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_measurements(file, &path.display().to_string(), options)
}

/// Groups rows by scenario id, keeping first-appearance order.
pub fn read_measurements<R: Read>(
    reader: R,
    source_name: &str,
    options: IngestOptions<'_>,
) -> Result<Ingested> {
    let rows = read_table_with_optional(
        reader,
        source_name,
        &MEASUREMENTS_HEADER,
        &MEASUREMENTS_OPTIONAL,
    )?;
    let mut sets: Vec<MeasurementSet> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut iterations: Vec<BTreeSet<u64>> = Vec::new();

    for (row, record) in rows {
        let id = record[0].to_string();
        if id.is_empty() {
            return Err(invalid(
                source_name,
                row,
                "scenario_id",
                "must not be empty",
            ));
        }
        let iteration: u64 = record[1].parse().map_err(|e| Error::Parse {
            source_name: source_name.to_string(),
            row,
            column: "iteration".into(),
            message: format!("`{}`: {e}", &record[1]),
        })?;
        let force = parse_f64_field(source_name, row, "force_n", &record[2])?;
        if !(force.is_finite() && force >= 0.0) {
            return Err(invalid(
                source_name,
                row,
                "force_n",
                "must be finite and >= 0",
            ));
        }
        let velocity = match record.get(3) {
            None | Some("") => None,
            Some(text) => {
                let v = parse_f64_field(source_name, row, "impact_velocity_m_s", text)?;
                if !(v.is_finite() && v >= 0.0) {
                    return Err(invalid(
                        source_name,
                        row,
                        "impact_velocity_m_s",
                        "must be finite and >= 0",
                    ));
                }
                Some(v)
            }
        };
        let slot = *index.entry(id.clone()).or_insert_with(|| {
            sets.push(MeasurementSet {
                scenario_id: id.clone(),
                forces: Vec::new(),
                impact_velocities: Vec::new(),
            });
            iterations.push(BTreeSet::new());
            sets.len() - 1
        });
        if !iterations[slot].insert(iteration) {
            return Err(invalid(
                source_name,
                row,
                "iteration",
                "duplicate iteration for scenario",
            ));
        }
        sets[slot].forces.push(force);
        sets[slot].impact_velocities.push(velocity);
    }

    let mut warnings = Vec::new();
    if let Some(matrix) = options.matrix {
        for set in &sets {
            let problem = match matrix.scenario(&set.scenario_id) {
                None => Some(Error::UnknownScenario(set.scenario_id.clone())),
                Some(s) if s.iterations as usize != set.forces.len() => {
                    Some(Error::IterationCount {
                        id: set.scenario_id.clone(),
                        expected: s.iterations as usize,
                        found: set.forces.len(),
                    })
                }
                Some(_) => None,
            };
            match problem {
                Some(e) if options.strict => return Err(e),
                Some(e) => {
                    log::warn!("{e}");
                    warnings.push(e.to_string());
                }
                None => {}
            }
        }
    }
    Ok(Ingested { sets, warnings })
}

fn invalid(source_name: &str, row: usize, field: &str, message: &str) -> Error {
    Error::InvalidRecord {
        source_name: source_name.to_string(),
        row,
        field: field.to_string(),
        message: message.to_string(),
    }
}
