//! `birdstrike`: impact force model, drop-test planning and analysis.
//!
//! Exit status is 0 on success, 1 when the model or its inputs fail, and 2
//! for usage errors (bad flags, unknown names, bad config).

mod commands;
mod config;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use birdstrike_core::harness::{ReportFormat, VelocitySource, VelocitySplit};
use birdstrike_core::{GravityPreset, StrikeCase};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Parser, Debug)]
#[command(
    name = "birdstrike",
    version,
    about = "Bird-strike impact force model and drop-test toolkit"
)]
pub struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true, env = "BIRDSTRIKE_CONFIG", value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Species registry CSV (defaults to the bundled set).
    #[arg(long, global = true, value_name = "PATH")]
    pub species_file: Option<PathBuf>,

    /// Extra specimen materials CSV (name,density_kg_m3,thickness_m).
    #[arg(long, global = true, value_name = "PATH")]
    pub materials_file: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Impact force on a moving aircraft, with intermediates.
    Force(ForceArgs),
    /// Impact force on a stationary aircraft.
    ForceStationary(StationaryArgs),
    /// Original and scaled drop heights per species.
    Plan(PlanArgs),
    /// Impact velocity of a dropped projectile, optionally with drag.
    DropVelocity(DropVelocityArgs),
    /// Surrogate projectile set, or the per-species cylinder table.
    Design(DesignArgs),
    /// Drop-test matrix as JSON.
    Matrix(MatrixArgs),
    /// Conformance report from measured forces.
    Analyze(AnalyzeArgs),
    /// Compare a force with the certification limits.
    CheckCert(CheckCertArgs),
    /// Force sensitivity to one scenario parameter.
    Sweep(SweepArgs),
}

#[derive(Args, Debug, Clone, Default)]
pub struct ScenarioArgs {
    /// Take mass, length, density and flight speed from a registry species.
    #[arg(long)]
    pub species: Option<String>,
    /// Bird mass, kg.
    #[arg(long)]
    pub mass: Option<f64>,
    /// Bird length, m.
    #[arg(long)]
    pub length: Option<f64>,
    /// Bird body density, kg/m³.
    #[arg(long)]
    pub bird_density: Option<f64>,
    /// Bird speed, m/s.
    #[arg(long)]
    pub bird_speed: Option<f64>,
    /// Aircraft skin density, kg/m³ [default: aluminium].
    #[arg(long, conflicts_with = "material")]
    pub aircraft_density: Option<f64>,
    /// Aircraft skin material by name.
    #[arg(long)]
    pub material: Option<String>,
    /// Impact angle, degrees; 90 is head-on.
    #[arg(long, default_value_t = 90.0)]
    pub angle: f64,
    /// Divide both speeds by this factor before evaluating.
    #[arg(long)]
    pub scale_factor: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum TextFormat {
    #[default]
    Text,
    Json,
}

#[derive(Args, Debug)]
pub struct ForceArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    /// Aircraft speed, m/s [default with --species: cruise speed].
    #[arg(long)]
    pub aircraft_speed: Option<f64>,
    /// Use the stationary-aircraft form (aircraft speed must be 0).
    #[arg(long)]
    pub stationary: bool,
    #[arg(long, value_enum, default_value_t)]
    pub format: TextFormat,
}

#[derive(Args, Debug)]
pub struct StationaryArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    #[arg(long, value_enum, default_value_t)]
    pub format: TextFormat,
}

#[derive(Args, Debug)]
pub struct PlanArgs {
    /// Species to plan; repeatable.
    #[arg(long, required_unless_present = "all")]
    pub species: Vec<String>,
    /// Every species in the registry.
    #[arg(long, conflicts_with = "species")]
    pub all: bool,
    #[arg(long)]
    pub gravity: Option<GravityPreset>,
    #[arg(long)]
    pub scale_factor: Option<f64>,
    /// Aircraft cruise speed, m/s.
    #[arg(long)]
    pub cruise_speed: Option<f64>,
    #[arg(long)]
    pub format: Option<ReportFormat>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct DropVelocityArgs {
    /// Drop height, m.
    #[arg(
        long,
        required_unless_present = "fall_time",
        conflicts_with = "fall_time"
    )]
    pub height: Option<f64>,
    /// Measured release-to-impact time, s.
    #[arg(long)]
    pub fall_time: Option<f64>,
    /// Projectile mass, kg.
    #[arg(long)]
    pub mass: Option<f64>,
    /// Frontal area, m².
    #[arg(long, conflicts_with = "diameter")]
    pub area: Option<f64>,
    /// Frontal diameter, m.
    #[arg(long)]
    pub diameter: Option<f64>,
    /// Take mass and frontal area from projectile SN<serial> of --species.
    #[arg(long)]
    pub projectile: Option<u8>,
    #[arg(long, default_value = "Starling")]
    pub species: String,
    /// Drag coefficient; omit for a drag-free fall.
    #[arg(long)]
    pub cd: Option<f64>,
    /// kg/m³
    #[arg(long, default_value_t = 1.225)]
    pub air_density: f64,
    #[arg(long)]
    pub gravity: Option<GravityPreset>,
    #[arg(long, value_enum, default_value_t)]
    pub format: TextFormat,
}

#[derive(Args, Debug, Clone)]
pub struct ProjectileArgs {
    /// Species the projectile set is sized from.
    #[arg(long, default_value = "Starling")]
    pub species: String,
    /// Printing material density, kg/m³.
    #[arg(long, default_value_t = birdstrike_core::projectile::ABS_DENSITY)]
    pub solid_density: f64,
    /// Solid shell share of the volume, 0..=1.
    #[arg(long, default_value_t = 0.0)]
    pub shell_fraction: f64,
}

#[derive(Args, Debug)]
pub struct DesignArgs {
    #[command(flatten)]
    pub projectile: ProjectileArgs,
    /// Write one sn<serial>.json per projectile here instead of stdout.
    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
    /// Print the per-species cylinder radius/height table as CSV instead.
    #[arg(long, conflicts_with = "out_dir")]
    pub table: bool,
}

#[derive(Args, Debug)]
pub struct MatrixArgs {
    #[command(flatten)]
    pub projectile: ProjectileArgs,
    #[arg(long)]
    pub iterations: Option<u32>,
    /// Gravity used to recompute impact velocities [default: paper].
    #[arg(long)]
    pub gravity: Option<GravityPreset>,
    /// JSON list of scenario definitions replacing the defaults.
    #[arg(long, value_name = "PATH")]
    pub scenarios: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    /// Measurements CSV: scenario_id,iteration,force_n[,impact_velocity_m_s].
    #[arg(long, value_name = "PATH")]
    pub measurements: Option<PathBuf>,
    /// Matrix JSON from `birdstrike matrix` [default: built-in matrix].
    #[arg(long, value_name = "PATH")]
    pub matrix: Option<PathBuf>,
    #[command(flatten)]
    pub projectile: ProjectileArgs,
    #[arg(long)]
    pub format: Option<ReportFormat>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Fail on unknown scenarios or iteration-count mismatches.
    #[arg(long)]
    pub strict: bool,
    #[arg(long, value_enum)]
    pub velocity_source: Option<SourceArg>,
    #[arg(long, value_enum)]
    pub velocity_split: Option<SplitArg>,
    #[arg(long)]
    pub scale_factor: Option<f64>,
    #[arg(long)]
    pub cruise_speed: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceArg {
    DropHeight,
    Nominal,
    Measured,
}

impl From<SourceArg> for VelocitySource {
    fn from(s: SourceArg) -> Self {
        match s {
            SourceArg::DropHeight => VelocitySource::DropHeight,
            SourceArg::Nominal => VelocitySource::Nominal,
            SourceArg::Measured => VelocitySource::Measured,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SplitArg {
    ScaledCruise,
    AllAircraft,
}

impl From<SplitArg> for VelocitySplit {
    fn from(s: SplitArg) -> Self {
        match s {
            SplitArg::ScaledCruise => VelocitySplit::ScaledCruise,
            SplitArg::AllAircraft => VelocitySplit::AllAircraft,
        }
    }
}

#[derive(Args, Debug)]
pub struct CheckCertArgs {
    /// N
    #[arg(long)]
    pub force: f64,
    #[arg(long, default_value = "single-bird")]
    pub case: StrikeCase,
    /// Override the single-bird limit, N.
    #[arg(long)]
    pub single_bird_limit: Option<f64>,
    /// Override the flock limit, N.
    #[arg(long)]
    pub flock_limit: Option<f64>,
    #[arg(long, value_enum, default_value_t)]
    pub format: TextFormat,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub scenario: ScenarioArgs,
    /// Aircraft speed, m/s [default: cruise speed].
    #[arg(long)]
    pub aircraft_speed: Option<f64>,
    /// bird_mass, bird_length, bird_density, bird_speed, aircraft_speed,
    /// aircraft_density or impact_angle.
    #[arg(long)]
    pub parameter: String,
    /// Comma-separated values of the parameter.
    #[arg(
        long,
        value_delimiter = ',',
        required = true,
        allow_negative_numbers = true
    )]
    pub values: Vec<f64>,
    #[arg(long)]
    pub format: Option<ReportFormat>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format(|buf, record| {
            use std::io::Write;
            let level = match record.level() {
                log::Level::Error => "error",
                log::Level::Warn => "warning",
                log::Level::Info => "info",
                log::Level::Debug => "debug",
                log::Level::Trace => "trace",
            };
            writeln!(buf, "{level}: {}", record.args())
        })
        .init();
    let cli = Cli::parse();
    log::info!("birdstrike {}", env!("CARGO_PKG_VERSION"));
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
