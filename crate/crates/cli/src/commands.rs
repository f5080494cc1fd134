use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use birdstrike_core::harness::{
    build_test_matrix, compute_references, conformance_report, ingest_measurements, render_report,
    IngestOptions, MatrixConfig, ReferenceConfig, ReportFormat, ScenarioDefinition, TestMatrix,
    VelocitySource,
};
use birdstrike_core::impact::{
    impact_force, impact_force_stationary, scale_scenario, sensitivity_table,
};
use birdstrike_core::kinematics::{
    drag_fall_distance, fall_time_for_height, ideal_impact_velocity, impact_velocity_from_drop,
    impact_velocity_from_timing, make_drop_plan, terminal_velocity, DEFAULT_SCALE_FACTOR,
};
use birdstrike_core::projectile::{
    export_geometry, find_projectile, generate_projectile_set, species_geometry_table,
};
use birdstrike_core::reference::{
    figure_discrepancies, published_drop_row, ORIGINAL_HEIGHT_TOLERANCE,
};
use birdstrike_core::species::{
    builtin_materials, bundled_species, find_material, find_species, load_materials,
    load_species_registry, AIR_TAXI_CRUISE_SPEED, ALUMINIUM_2024_T3_DENSITY,
};
use birdstrike_core::{
    check_certification, BirdSpecies, CertificationLimits, DragParams, Error as CoreError,
    GravityPreset, ImpactAngle, ImpactScenario, MaterialSpec, ProjectileShape, ProjectileSpec,
    ScenarioParameter,
};
use serde::Serialize;

use crate::config::{check_scale_factor, RunConfig};
use crate::{
    AnalyzeArgs, CheckCertArgs, Cli, Command, DesignArgs, DropVelocityArgs, ForceArgs, MatrixArgs,
    PlanArgs, ProjectileArgs, ScenarioArgs, StationaryArgs, SweepArgs, TextFormat, UsageError,
};

struct Ctx {
    cfg: RunConfig,
    registry: Vec<BirdSpecies>,
    materials: Vec<MaterialSpec>,
}

pub fn run(cli: Cli) -> Result<()> {
    let cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let species_file = cli
        .species_file
        .clone()
        .or_else(|| cfg.species_file.clone());
    let registry = match &species_file {
        Some(p) => load_species_registry(p)?,
        None => bundled_species(),
    };
    let mut materials = builtin_materials();
    if let Some(p) = cli
        .materials_file
        .clone()
        .or_else(|| cfg.materials_file.clone())
    {
        for m in load_materials(&p)? {
            materials.retain(|x| !x.name.eq_ignore_ascii_case(&m.name));
            materials.push(m);
        }
    }
    let ctx = Ctx {
        cfg,
        registry,
        materials,
    };
    match cli.command {
        Command::Force(a) => force(&ctx, a),
        Command::ForceStationary(a) => force_stationary(&ctx, a),
        Command::Plan(a) => plan(&ctx, a),
        Command::DropVelocity(a) => drop_velocity(&ctx, a),
        Command::Design(a) => design(&ctx, a),
        Command::Matrix(a) => matrix(&ctx, a),
        Command::Analyze(a) => analyze(&ctx, a),
        Command::CheckCert(a) => check_cert(a),
        Command::Sweep(a) => sweep(&ctx, a),
    }
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Bad flag values are usage errors, not model failures.
fn flag_error(e: CoreError) -> anyhow::Error {
    match e {
        CoreError::InvalidInput { .. } => usage(e.to_string()),
        e => e.into(),
    }
}

impl Ctx {
    fn species(&self, name: &str) -> Result<&BirdSpecies> {
        find_species(&self.registry, name).ok_or_else(|| {
            let known: Vec<&str> = self.registry.iter().map(|s| s.name.as_str()).collect();
            usage(format!(
                "unknown species `{name}` (known: {})",
                known.join(", ")
            ))
        })
    }

    fn material(&self, name: &str) -> Result<&MaterialSpec> {
        find_material(&self.materials, name)
            .ok_or_else(|| usage(format!("unknown material `{name}`")))
    }

    fn scale_factor(&self, flag: Option<f64>) -> Result<f64> {
        let s = flag
            .or(self.cfg.scale_factor)
            .unwrap_or(DEFAULT_SCALE_FACTOR);
        check_scale_factor(s).map_err(usage)?;
        Ok(s)
    }

    fn cruise_speed(&self, flag: Option<f64>) -> f64 {
        flag.or(self.cfg.cruise_speed)
            .unwrap_or(AIR_TAXI_CRUISE_SPEED)
    }

    fn gravity(&self, flag: Option<GravityPreset>, fallback: GravityPreset) -> f64 {
        flag.or(self.cfg.gravity).unwrap_or(fallback).value()
    }

    fn projectiles(&self, a: &ProjectileArgs) -> Result<Vec<ProjectileSpec>> {
        let base = self.species(&a.species)?;
        generate_projectile_set(base, a.solid_density, a.shell_fraction).map_err(flag_error)
    }

    /// Fills scenario fields from flags, then the species, then defaults.
    fn scenario(
        &self,
        a: &ScenarioArgs,
        aircraft_speed: Option<f64>,
        default_species: Option<&str>,
    ) -> Result<ImpactScenario> {
        let name = a.species.as_deref().or(if a.mass.is_none() {
            default_species
        } else {
            None
        });
        let species = name.map(|n| self.species(n)).transpose()?;
        let pick = |flag: Option<f64>, from: fn(&BirdSpecies) -> f64, what: &str| -> Result<f64> {
            flag.or(species.map(from))
                .ok_or_else(|| usage(format!("--{what} is required unless --species is given")))
        };
        let aircraft_speed = match aircraft_speed {
            Some(v) => v,
            None if species.is_some() => self.cruise_speed(None),
            None => {
                return Err(usage(
                    "--aircraft-speed is required unless --species is given",
                ))
            }
        };
        let aircraft_density = match (&a.aircraft_density, &a.material) {
            (Some(d), _) => *d,
            (None, Some(m)) => self.material(m)?.density,
            (None, None) => ALUMINIUM_2024_T3_DENSITY,
        };
        let s = ImpactScenario {
            bird_mass: pick(a.mass, |b| b.mass, "mass")?,
            bird_length: pick(a.length, |b| b.length, "length")?,
            bird_density: pick(a.bird_density, |b| b.body_density, "bird-density")?,
            bird_speed: pick(a.bird_speed, |b| b.flight_speed, "bird-speed")?,
            aircraft_speed,
            aircraft_density,
            impact_angle: ImpactAngle::from_degrees(a.angle).map_err(flag_error)?,
        };
        s.validate().map_err(flag_error)?;
        match a.scale_factor {
            Some(f) => {
                check_scale_factor(f).map_err(usage)?;
                scale_scenario(&s, 1.0 / f).map_err(flag_error)
            }
            None => Ok(s),
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    Ok(String::from_utf8(
        w.into_inner().map_err(|e| e.into_error())?,
    )?)
}

/// `key value` lines from a flat JSON object.
fn key_values<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)?;
    let mut out = String::new();
    if let serde_json::Value::Object(map) = v {
        for (k, v) in map {
            match v {
                serde_json::Value::String(s) => out.push_str(&format!("{k} {s}\n")),
                serde_json::Value::Null => {}
                other => out.push_str(&format!("{k} {other}\n")),
            }
        }
    }
    Ok(out)
}

fn render<T: Serialize>(value: &T, format: TextFormat) -> Result<String> {
    match format {
        TextFormat::Text => key_values(value),
        TextFormat::Json => json(value),
    }
}

#[derive(Serialize)]
struct ForceOutput {
    model: &'static str,
    total_speed_m_s: f64,
    kinetic_energy_j: f64,
    penetration_depth_m: f64,
    force_n: f64,
}

fn force(ctx: &Ctx, a: ForceArgs) -> Result<()> {
    if a.stationary {
        if a.aircraft_speed.is_some_and(|v| v != 0.0) {
            return Err(usage(
                "--stationary needs --aircraft-speed 0 (or no --aircraft-speed)",
            ));
        }
        return print_stationary(ctx, &a.scenario, a.format);
    }
    let s = ctx.scenario(&a.scenario, a.aircraft_speed, None)?;
    let r = impact_force(&s).map_err(|e| match e {
        CoreError::StationarySingularity => anyhow::Error::new(e)
            .context("moving-aircraft model at zero aircraft speed (pass --stationary)"),
        e => e.into(),
    })?;
    let out = ForceOutput {
        model: "moving",
        total_speed_m_s: r.total_speed,
        kinetic_energy_j: r.kinetic_energy,
        penetration_depth_m: r.penetration_depth,
        force_n: r.force,
    };
    emit(&render(&out, a.format)?, None)
}

fn force_stationary(ctx: &Ctx, a: StationaryArgs) -> Result<()> {
    print_stationary(ctx, &a.scenario, a.format)
}

fn print_stationary(ctx: &Ctx, args: &ScenarioArgs, format: TextFormat) -> Result<()> {
    let s = ctx.scenario(args, Some(0.0), None)?;
    let v = s.bird_speed * s.impact_angle.sin();
    let out = ForceOutput {
        model: "stationary",
        total_speed_m_s: v,
        kinetic_energy_j: 0.5 * s.bird_mass * v * v,
        penetration_depth_m: s.bird_length * s.bird_density / s.aircraft_density,
        force_n: impact_force_stationary(
            s.bird_mass,
            s.bird_speed,
            s.bird_length,
            s.bird_density,
            s.aircraft_density,
            s.impact_angle,
        ),
    };
    emit(&render(&out, format)?, None)
}

#[derive(Serialize)]
struct PlanRow {
    species: String,
    original_velocity_m_s: f64,
    original_height_m: f64,
    scale_factor: f64,
    scaled_velocity_m_s: f64,
    scaled_height_m: f64,
    gravity_m_s2: f64,
    note: String,
}

const PLAN_HEADER: [&str; 8] = [
    "species",
    "original_velocity_m_s",
    "original_height_m",
    "scale_factor",
    "scaled_velocity_m_s",
    "scaled_height_m",
    "gravity_m_s2",
    "note",
];

fn plan(ctx: &Ctx, a: PlanArgs) -> Result<()> {
    let gravity = ctx.gravity(a.gravity, GravityPreset::Standard);
    let scale = ctx.scale_factor(a.scale_factor)?;
    let cruise = ctx.cruise_speed(a.cruise_speed);
    let species: Vec<&BirdSpecies> = if a.all {
        ctx.registry.iter().collect()
    } else {
        a.species
            .iter()
            .map(|n| ctx.species(n))
            .collect::<Result<_>>()?
    };
    let mut rows = Vec::with_capacity(species.len());
    for b in species {
        let p =
            make_drop_plan(&b.name, b.flight_speed, cruise, scale, gravity).map_err(flag_error)?;
        let mut note = String::new();
        if let Some(row) = published_drop_row(&b.name).filter(|r| r.inconsistent) {
            note = format!(
                "inconsistent published height: {} m listed, {:.1} m computed",
                row.original_height, p.original_drop_height
            );
            if (row.original_height - p.original_drop_height).abs() > ORIGINAL_HEIGHT_TOLERANCE {
                log::warn!("{}: {note}", b.name);
            }
        }
        rows.push(PlanRow {
            species: p.species_name,
            original_velocity_m_s: p.original_impact_velocity,
            original_height_m: p.original_drop_height,
            scale_factor: p.scale_factor,
            scaled_velocity_m_s: p.scaled_impact_velocity,
            scaled_height_m: p.scaled_drop_height,
            gravity_m_s2: p.gravity,
            note,
        });
    }
    let text = match a.format.or(ctx.cfg.format).unwrap_or_default() {
        ReportFormat::Json => json(&rows)?,
        ReportFormat::Csv => {
            let records: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        r.species.clone(),
                        r.original_velocity_m_s.to_string(),
                        r.original_height_m.to_string(),
                        r.scale_factor.to_string(),
                        r.scaled_velocity_m_s.to_string(),
                        r.scaled_height_m.to_string(),
                        r.gravity_m_s2.to_string(),
                        r.note.clone(),
                    ]
                })
                .collect();
            csv_text(&PLAN_HEADER, &records)?
        }
    };
    emit(&text, a.out.as_deref())
}

#[derive(Serialize)]
struct DropOutput {
    height_m: f64,
    fall_time_s: f64,
    impact_velocity_m_s: f64,
    drag_free_velocity_m_s: f64,
    terminal_velocity_m_s: Option<f64>,
}

fn frontal_area(p: &ProjectileSpec) -> f64 {
    match p.shape {
        ProjectileShape::Cylinder { radius, .. } => std::f64::consts::PI * radius * radius,
        ProjectileShape::Ellipsoid { b, c, .. } => std::f64::consts::PI * b * c,
    }
}

fn drop_velocity(ctx: &Ctx, a: DropVelocityArgs) -> Result<()> {
    let g = ctx.gravity(a.gravity, GravityPreset::Standard);
    let out = match a.cd {
        None => {
            let (h, t) = match (a.height, a.fall_time) {
                (Some(h), _) => {
                    let v = ideal_impact_velocity(h, g).map_err(flag_error)?;
                    (h, v / g)
                }
                (None, Some(t)) => {
                    if !(t.is_finite() && t >= 0.0) {
                        return Err(usage(format!("--fall-time must be >= 0, got {t}")));
                    }
                    (0.5 * g * t * t, t)
                }
                (None, None) => return Err(usage("--height or --fall-time is required")),
            };
            let v = g * t;
            DropOutput {
                height_m: h,
                fall_time_s: t,
                impact_velocity_m_s: v,
                drag_free_velocity_m_s: v,
                terminal_velocity_m_s: None,
            }
        }
        Some(cd) => {
            let projectile = match a.projectile {
                Some(serial) => {
                    let set = generate_projectile_set(
                        ctx.species(&a.species)?,
                        birdstrike_core::projectile::ABS_DENSITY,
                        0.0,
                    )?;
                    Some(
                        find_projectile(&set, serial)
                            .map_err(|e| usage(e.to_string()))?
                            .clone(),
                    )
                }
                None => None,
            };
            let mass = a
                .mass
                .or(projectile.as_ref().map(|p| p.mass))
                .ok_or_else(|| usage("--mass (or --projectile) is required with --cd"))?;
            let area = a
                .area
                .or(a.diameter.map(|d| std::f64::consts::PI * d * d / 4.0))
                .or(projectile.as_ref().map(frontal_area))
                .ok_or_else(|| usage("--area, --diameter or --projectile is required with --cd"))?;
            let params = DragParams::new(mass, a.air_density, cd, area, g).map_err(flag_error)?;
            let (h, t, v) = match (a.height, a.fall_time) {
                (Some(h), _) => {
                    let t = fall_time_for_height(h, &params).map_err(flag_error)?;
                    (h, t, impact_velocity_from_drop(h, &params)?)
                }
                (None, Some(t)) => {
                    let v = impact_velocity_from_timing(t, &params).map_err(flag_error)?;
                    (drag_fall_distance(t, &params)?, t, v)
                }
                (None, None) => return Err(usage("--height or --fall-time is required")),
            };
            DropOutput {
                height_m: h,
                fall_time_s: t,
                impact_velocity_m_s: v,
                drag_free_velocity_m_s: ideal_impact_velocity(h, g)?,
                terminal_velocity_m_s: Some(terminal_velocity(&params)?),
            }
        }
    };
    emit(&render(&out, a.format)?, None)
}

fn design(ctx: &Ctx, a: DesignArgs) -> Result<()> {
    if a.table {
        let rows: Vec<Vec<String>> = species_geometry_table(&ctx.registry)?
            .into_iter()
            .map(|g| vec![g.species, g.radius.to_string(), g.height.to_string()])
            .collect();
        return emit(
            &csv_text(&["species", "radius_m", "height_m"], &rows)?,
            None,
        );
    }
    let set = ctx.projectiles(&a.projectile)?;
    match a.out_dir {
        Some(dir) => {
            fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
            let mut listing = String::new();
            for p in &set {
                let path = dir.join(format!("sn{}.json", p.serial));
                export_geometry(p, &path)?;
                listing.push_str(&format!("{}\n", path.display()));
            }
            emit(&listing, None)
        }
        None => emit(&json(&set)?, None),
    }
}

fn default_matrix(ctx: &Ctx, projectiles: &[ProjectileSpec], gravity: f64) -> Result<TestMatrix> {
    let config = MatrixConfig {
        gravity,
        ..MatrixConfig::default()
    };
    Ok(build_test_matrix(&config, projectiles, &ctx.materials)?)
}

fn warn_mismatches(m: &TestMatrix) {
    for s in m.scenarios.iter().filter(|s| s.velocity_mismatch) {
        log::warn!(
            "scenario {}: listed velocity {} m/s differs from the drop-height velocity {:.2} m/s",
            s.id,
            s.nominal_impact_velocity,
            s.drop_impact_velocity
        );
    }
}

fn matrix(ctx: &Ctx, a: MatrixArgs) -> Result<()> {
    let projectiles = ctx.projectiles(&a.projectile)?;
    let mut config = MatrixConfig {
        gravity: ctx.gravity(a.gravity, GravityPreset::Paper),
        ..MatrixConfig::default()
    };
    if let Some(n) = a.iterations {
        if n == 0 {
            return Err(usage("--iterations must be >= 1"));
        }
        config.iterations_per_scenario = n;
    }
    if let Some(path) = &a.scenarios {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let defs: Vec<ScenarioDefinition> =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        config.scenarios = defs;
    }
    let m = build_test_matrix(&config, &projectiles, &ctx.materials)?;
    warn_mismatches(&m);
    emit(&m.to_json(), a.out.as_deref())
}

fn analyze(ctx: &Ctx, a: AnalyzeArgs) -> Result<()> {
    let measurements = a
        .measurements
        .clone()
        .or_else(|| ctx.cfg.measurements_file.clone())
        .ok_or_else(|| usage("--measurements is required (or measurements_file in the config)"))?;
    let projectiles = ctx.projectiles(&a.projectile)?;
    let matrix = match &a.matrix {
        Some(p) => TestMatrix::load(p)?,
        None => default_matrix(ctx, &projectiles, ctx.gravity(None, GravityPreset::Paper))?,
    };
    let reference = ReferenceConfig {
        scale_factor: ctx.scale_factor(a.scale_factor)?,
        cruise_speed: ctx.cruise_speed(a.cruise_speed),
        velocity_source: a
            .velocity_source
            .map(Into::into)
            .or(ctx.cfg.velocity_source)
            .unwrap_or_default(),
        velocity_split: a
            .velocity_split
            .map(Into::into)
            .or(ctx.cfg.velocity_split)
            .unwrap_or_default(),
    };
    if reference.velocity_source == VelocitySource::DropHeight {
        warn_mismatches(&matrix);
    }
    let ingested = ingest_measurements(
        &measurements,
        IngestOptions {
            matrix: Some(&matrix),
            strict: a.strict,
        },
    )?;
    let refs = compute_references(
        &matrix,
        &projectiles,
        &ctx.materials,
        &ingested.sets,
        &reference,
    )?;
    let report = conformance_report(&matrix, &refs, &ingested.sets)?;
    let format = a.format.or(ctx.cfg.format).unwrap_or_default();
    emit(&render_report(&report, format)?, a.out.as_deref())
}

fn check_cert(a: CheckCertArgs) -> Result<()> {
    let mut limits = CertificationLimits::default();
    for (flag, slot, name) in [
        (
            a.single_bird_limit,
            &mut limits.single_bird_force,
            "--single-bird-limit",
        ),
        (a.flock_limit, &mut limits.flock_force, "--flock-limit"),
    ] {
        if let Some(v) = flag {
            if !(v.is_finite() && v > 0.0) {
                return Err(usage(format!("{name} must be > 0, got {v}")));
            }
            *slot = v;
        }
    }
    let v = check_certification(a.force, a.case, &limits).map_err(flag_error)?;
    #[derive(Serialize)]
    struct Out {
        case: String,
        force_n: f64,
        limit_n: f64,
        margin_n: f64,
        verdict: &'static str,
    }
    let out = Out {
        case: v.case.to_string(),
        force_n: v.force,
        limit_n: v.limit,
        margin_n: v.margin,
        verdict: if v.passed { "pass" } else { "fail" },
    };
    emit(&render(&out, a.format)?, None)
}

fn sweep(ctx: &Ctx, a: SweepArgs) -> Result<()> {
    let parameter: ScenarioParameter = a
        .parameter
        .parse()
        .map_err(|e: CoreError| usage(e.to_string()))?;
    let base = ctx.scenario(&a.scenario, a.aircraft_speed, Some("Starling"))?;
    if base.aircraft_speed > 0.0 {
        for d in figure_discrepancies(&base, parameter)? {
            log::warn!("{d}");
        }
    }
    let rows = sensitivity_table(&base, parameter, &a.values).map_err(flag_error)?;
    let text = match a.format.or(ctx.cfg.format).unwrap_or_default() {
        ReportFormat::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                parameter: &'a str,
                base: &'a ImpactScenario,
                rows: &'a [birdstrike_core::SensitivityRow],
            }
            json(&Out {
                parameter: parameter.name(),
                base: &base,
                rows: &rows,
            })?
        }
        ReportFormat::Csv => {
            let records: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    vec![
                        parameter.name().to_string(),
                        r.value.to_string(),
                        r.force.to_string(),
                        r.percent_change.to_string(),
                    ]
                })
                .collect();
            csv_text(
                &["parameter", "value", "force_n", "percent_change"],
                &records,
            )?
        }
    };
    emit(&text, a.out.as_deref())
}
