use std::fmt;
use std::fs;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::conformance::{ConformanceReport, ScenarioConformance};
use crate::error::{Error, Result};
use crate::species::{parse_f64_field, read_table};

pub const REPORT_HEADER: [&str; 6] = [
    "scenario_id",
    "theoretical_n",
    "experimental_mean_n",
    "experimental_std_n",
    "percent_error",
    "percent_conformance",
];

pub const OVERALL_ROW_ID: &str = "OVERALL";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            _ => Err(format!("unknown format `{s}` (expected csv or json)")),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
        })
    }
}

#[derive(Serialize)]
struct JsonReport<'a> {
    scenarios: &'a [ScenarioConformance],
    overall: JsonOverall,
}

#[derive(Serialize, Deserialize)]
struct JsonOverall {
    scenario_id: String,
    percent_conformance: f64,
    absolute_conformance: f64,
}

pub fn render_report(report: &ConformanceReport, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(REPORT_HEADER)?;
            for s in &report.scenarios {
                w.write_record([
                    s.scenario_id.clone(),
                    s.theoretical_force.to_string(),
                    s.experimental_mean.to_string(),
                    s.experimental_std.to_string(),
                    s.percent_error.to_string(),
                    s.percent_conformance.to_string(),
                ])?;
            }
            let overall = report.overall_mean_conformance.to_string();
            w.write_record([OVERALL_ROW_ID, "", "", "", "", overall.as_str()])?;
            let bytes = w
                .into_inner()
                .map_err(|e| Error::io("<report>", e.into_error()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
        ReportFormat::Json => {
            let doc = JsonReport {
                scenarios: &report.scenarios,
                overall: JsonOverall {
                    scenario_id: OVERALL_ROW_ID.to_string(),
                    percent_conformance: report.overall_mean_conformance,
                    absolute_conformance: report.overall_absolute_conformance,
                },
            };
            let mut s = serde_json::to_string_pretty(&doc).map_err(|source| Error::Json {
                path: "<report>".into(),
                source,
            })?;
            s.push('\n');
            Ok(s)
        }
    }
}

pub fn emit_report(
    report: &ConformanceReport,
    format: ReportFormat,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, render_report(report, format)?).map_err(|e| Error::io(path, e))
}

/// A parsed CSV report row; the overall row has only `percent_conformance`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub scenario_id: String,
    pub theoretical_n: Option<f64>,
    pub experimental_mean_n: Option<f64>,
    pub experimental_std_n: Option<f64>,
    pub percent_error: Option<f64>,
    pub percent_conformance: f64,
}

pub fn read_report_csv<R: Read>(reader: R, source_name: &str) -> Result<Vec<ReportRow>> {
    let rows = read_table(reader, source_name, &REPORT_HEADER)?;
    rows.into_iter()
        .map(|(row, rec)| {
            let opt = |i: usize| -> Result<Option<f64>> {
                match &rec[i] {
                    "" => Ok(None),
                    t => parse_f64_field(source_name, row, REPORT_HEADER[i], t).map(Some),
                }
            };
            Ok(ReportRow {
                scenario_id: rec[0].to_string(),
                theoretical_n: opt(1)?,
                experimental_mean_n: opt(2)?,
                experimental_std_n: opt(3)?,
                percent_error: opt(4)?,
                percent_conformance: parse_f64_field(source_name, row, REPORT_HEADER[5], &rec[5])?,
            })
        })
        .collect()
}
