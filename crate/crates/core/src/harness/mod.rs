//! Drop-test matrix, measurement ingestion and conformance reporting.

pub mod conformance;
pub mod matrix;
pub mod measurements;
pub mod report;

pub use conformance::{
    compute_references, conformance_report, percent_error, reference_velocity, scenario_stats,
    theoretical_force_at, theoretical_reference, ConformanceReport, ReferenceConfig,
    ScenarioConformance, ScenarioStats, VelocitySource, VelocitySplit,
};
pub use matrix::{
    build_test_matrix, default_scenarios, AircraftMotion, MatrixConfig, ScenarioDefinition,
    TestMatrix, TestScenario,
};
pub use measurements::{
    ingest_measurements, read_measurements, IngestOptions, Ingested, MeasurementSet,
};
pub use report::{emit_report, read_report_csv, render_report, ReportFormat, ReportRow};
