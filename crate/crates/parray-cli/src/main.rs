//! `parray` — scenario-driven runner for the parasitic-array simulator.
//!
//! One invocation runs one command against one TOML scenario file and
//! writes one machine-readable artifact (plus a JSON summary sidecar for
//! the CSV-producing studies). Every run is a pure function of the
//! config: seeds live in the file, floats are serialized with fixed
//! formatting, so rerunning a command reproduces its output byte for
//! byte.
//!
//! Exit codes: 0 success, 2 configuration error, 3 I/O error,
//! 4 numerical/model error. Diagnostics go to stderr; set `PARRAY_LOG`
//! (e.g. `PARRAY_LOG=debug`) for more.

mod report;

use std::io;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use parray_core::config::{MonteCarloConfig, ScenarioConfig};
use parray_core::ga::{self, DesignMetrics, DesignVector, SearchBounds};
use parray_core::metrics;
use parray_core::solver;
use parray_core::uncertainty::{self, BinQuantity, TrialBin, TrialRecord};
use parray_core::{ArrayGeometry, Error, RadiationPattern};

use report::{csv_opt_f64, csv_sanitize, fmt_f64, Json};

const SCHEMA_VERSION: u64 = 1;
/// One volt at the driven element; gains are drive-normalized, so the
/// choice only fixes a reference.
const DRIVE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Parser)]
#[command(
    name = "parray",
    version,
    about = "Thin-wire simulator and design optimizer for parasitic antenna arrays"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the scene and export the radiation pattern with its metrics (JSON).
    Pattern(CommonArgs),
    /// Run the seeded pose-error Monte Carlo study (CSV + JSON summary sidecar).
    Montecarlo(CommonArgs),
    /// Re-evaluate the scene across a grid of ground parameters (CSV + JSON summary sidecar).
    Groundsweep(CommonArgs),
    /// Re-tune parasitic spacings and lengths for the configured ground (JSON).
    Optimize(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Scenario description (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output file to write.
    #[arg(long)]
    out: PathBuf,
    /// Worker threads for parallel studies; 0 picks the CPU count.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Pattern resolution in degrees; overrides the config's value.
    #[arg(long)]
    grid_deg: Option<f64>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("PARRAY_LOG", "warn"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Command::Pattern(a) => ("pattern", a),
        Command::Montecarlo(a) => ("montecarlo", a),
        Command::Groundsweep(a) => ("groundsweep", a),
        Command::Optimize(a) => ("optimize", a),
    };
    match run(kind, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Config(_) => 2,
                Error::Io(_) => 3,
                _ => 4,
            })
        }
    }
}

fn run(kind: &str, args: &CommonArgs) -> parray_core::Result<()> {
    parray_core::configure_threads(args.threads)?;
    let config = load_config(&args.config)?;
    // A scene the library rejects is a configuration mistake, whatever
    // shape the rejection takes (bad wire, bad placement, bad ground).
    let scene = config.build_scene().map_err(|e| match e {
        Error::Config(msg) => Error::Config(format!("{}: {msg}", args.config.display())),
        other => Error::Config(format!("{}: invalid scene: {other}", args.config.display())),
    })?;
    let grid_deg = args.grid_deg.unwrap_or(config.pattern.grid_deg);
    log::info!(
        "{kind}: {} elements at {} Hz, grid {grid_deg}°",
        scene.len(),
        fmt_f64(scene.frequency_hz())
    );
    match kind {
        "pattern" => cmd_pattern(&scene, grid_deg, &args.out),
        "montecarlo" => cmd_montecarlo(&config, &scene, grid_deg, &args.out),
        "groundsweep" => cmd_groundsweep(&config, &scene, grid_deg, &args.out),
        "optimize" => cmd_optimize(&config, &scene, grid_deg, &args.out),
        _ => unreachable!("clap only admits the four subcommands"),
    }
}

fn load_config(path: &Path) -> parray_core::Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| io_with_path(e, path))?;
    ScenarioConfig::from_toml_str(&text)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn write_output(path: &Path, content: &str) -> parray_core::Result<()> {
    std::fs::write(path, content).map_err(|e| io_with_path(e, path))?;
    log::info!("wrote {}", path.display());
    Ok(())
}

fn io_with_path(e: io::Error, path: &Path) -> Error {
    Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display())))
}

/// `<out>.summary.json`, next to the main artifact.
fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".summary.json");
    PathBuf::from(name)
}

// ---------------------------------------------------------------------------
// pattern

fn cmd_pattern(scene: &ArrayGeometry, grid_deg: f64, out: &Path) -> parray_core::Result<()> {
    let sol = solver::solve_currents(scene, DRIVE)?;
    let pat = solver::far_field(scene, &sol, grid_deg, grid_deg)?;
    let doc = Json::Object(vec![
        ("schema_version", Json::UInt(SCHEMA_VERSION)),
        ("frequency_hz", Json::Float(scene.frequency_hz())),
        ("grid_deg", Json::Float(grid_deg)),
        ("theta_deg", Json::floats(pat.theta_deg().iter().copied())),
        ("phi_deg", Json::floats(pat.phi_deg().iter().copied())),
        (
            "power_db",
            Json::Array(
                (0..pat.n_theta())
                    .map(|it| Json::floats((0..pat.n_phi()).map(|ip| pat.power_db(it, ip))))
                    .collect(),
            ),
        ),
        ("metrics", pattern_metrics_json(&pat)?),
    ]);
    write_output(out, &doc.render())
}

/// The pattern-level metrics block shared by several artifacts. Elevation
/// is reported above the horizon (90° − polar angle).
fn pattern_metrics_json(pat: &RadiationPattern) -> parray_core::Result<Json> {
    let beam = metrics::beam_direction(pat);
    Ok(Json::Object(vec![
        ("directivity_db", Json::Float(metrics::directivity_db(pat)?)),
        ("beam_azimuth_deg", Json::Float(beam.azimuth_deg)),
        ("beam_elevation_deg", Json::Float(90.0 - beam.polar_deg)),
        ("beam_ambiguous", Json::Bool(beam.ambiguous)),
        ("beamwidth_az_deg", Json::float_opt(metrics::beamwidth_az_deg(pat, beam.polar_deg))),
        ("side_lobe_level_db", Json::float_opt(metrics::side_lobe_level_db(pat))),
    ]))
}

// ---------------------------------------------------------------------------
// montecarlo

fn cmd_montecarlo(
    config: &ScenarioConfig,
    scene: &ArrayGeometry,
    grid_deg: f64,
    out: &Path,
) -> parray_core::Result<()> {
    let mc = config.montecarlo()?;
    let spec = mc.perturbation_spec()?;

    let sol = solver::solve_currents(scene, DRIVE)?;
    let pat = solver::far_field(scene, &sol, grid_deg, grid_deg)?;
    let base_beam = metrics::beam_direction(&pat);
    let base_directivity = metrics::directivity_db(&pat)?;

    let records = uncertainty::run_monte_carlo(
        scene,
        &spec,
        (base_beam.azimuth_deg, base_beam.polar_deg),
        grid_deg,
    )?;

    let mut csv = String::from(
        "trial,mean_position_error_m,orientation_spread_deg,directivity_db,beam_error_deg,status\n",
    );
    for r in &records {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.trial,
            fmt_f64(r.mean_position_error_m),
            fmt_f64(r.orientation_spread_deg),
            csv_opt_f64(r.directivity_db),
            csv_opt_f64(r.beam_error_deg),
            csv_sanitize(r.status()),
        ));
    }
    write_output(out, &csv)?;

    let summary = montecarlo_summary(mc, &records, base_directivity, &base_beam, grid_deg)?;
    write_output(&sidecar_path(out), &summary.render())
}

fn montecarlo_summary(
    mc: &MonteCarloConfig,
    records: &[TrialRecord],
    base_directivity: f64,
    base_beam: &metrics::BeamDirection,
    grid_deg: f64,
) -> parray_core::Result<Json> {
    let ok: Vec<&TrialRecord> = records.iter().filter(|r| r.failure.is_none()).collect();
    let failed = records.len() - ok.len();
    let mean = |f: fn(&TrialRecord) -> Option<f64>| -> Option<f64> {
        if ok.is_empty() {
            None
        } else {
            Some(ok.iter().filter_map(|r| f(r)).sum::<f64>() / ok.len() as f64)
        }
    };

    let mut fields = vec![
        ("schema_version", Json::UInt(SCHEMA_VERSION)),
        ("seed", Json::UInt(mc.seed)),
        ("trials", Json::UInt(records.len() as u64)),
        ("failed_trials", Json::UInt(failed as u64)),
        ("target", Json::Str(mc.target.clone())),
        ("position_error_max_m", Json::Float(mc.position_error_max_m)),
        ("orientation_error_max_deg", Json::Float(mc.orientation_error_max_deg)),
        ("grid_deg", Json::Float(grid_deg)),
        (
            "unperturbed",
            Json::Object(vec![
                ("directivity_db", Json::Float(base_directivity)),
                ("beam_azimuth_deg", Json::Float(base_beam.azimuth_deg)),
                ("beam_elevation_deg", Json::Float(90.0 - base_beam.polar_deg)),
            ]),
        ),
        ("mean_directivity_db", Json::float_opt(mean(|r| r.directivity_db))),
        ("mean_beam_error_deg", Json::float_opt(mean(|r| r.beam_error_deg))),
    ];
    if mc.position_error_max_m > 0.0 {
        let bins =
            uncertainty::bin_records(records, BinQuantity::MeanPositionError, mc.position_bin_width_m())?;
        fields.push(("binned_by_position_error_m", bins_json(&bins)));
    }
    if mc.orientation_error_max_deg > 0.0 {
        let bins = uncertainty::bin_records(
            records,
            BinQuantity::OrientationSpread,
            mc.orientation_bin_width_deg(),
        )?;
        fields.push(("binned_by_orientation_spread_deg", bins_json(&bins)));
    }
    Ok(Json::Object(fields))
}

fn bins_json(bins: &[TrialBin]) -> Json {
    Json::Array(
        bins.iter()
            .map(|b| {
                Json::Object(vec![
                    ("lower", Json::Float(b.lower)),
                    ("upper", Json::Float(b.upper)),
                    ("count", Json::UInt(b.count as u64)),
                    ("mean_directivity_db", Json::Float(b.mean_directivity_db)),
                    (
                        "std_error_directivity_db",
                        Json::float_opt(b.std_error_directivity_db),
                    ),
                    ("mean_beam_error_deg", Json::Float(b.mean_beam_error_deg)),
                ])
            })
            .collect(),
    )
}

// ---------------------------------------------------------------------------
// groundsweep

fn cmd_groundsweep(
    config: &ScenarioConfig,
    scene: &ArrayGeometry,
    grid_deg: f64,
    out: &Path,
) -> parray_core::Result<()> {
    let spec = config.groundsweep()?.sweep_spec()?;
    let rows = uncertainty::sweep_ground_params(scene, &spec, grid_deg)?;

    let mut csv = String::from("epsilon_r,sigma_s_per_m,directivity_db,beam_error_deg\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{}\n",
            fmt_f64(r.epsilon_r),
            fmt_f64(r.sigma_s_per_m),
            fmt_f64(r.directivity_db),
            fmt_f64(r.beam_error_deg),
        ));
    }
    write_output(out, &csv)?;

    // Per-permittivity digest: how much directivity the conductivity axis
    // costs, and how far the beam ever strays from the design direction.
    let per_epsilon = spec
        .epsilon_r_values
        .iter()
        .map(|&er| {
            let along_sigma: Vec<&_> = rows.iter().filter(|r| r.epsilon_r == er).collect();
            let min_d =
                along_sigma.iter().map(|r| r.directivity_db).fold(f64::INFINITY, f64::min);
            let max_d =
                along_sigma.iter().map(|r| r.directivity_db).fold(f64::NEG_INFINITY, f64::max);
            let max_err =
                along_sigma.iter().map(|r| r.beam_error_deg).fold(f64::NEG_INFINITY, f64::max);
            Json::Object(vec![
                ("epsilon_r", Json::Float(er)),
                ("min_directivity_db", Json::Float(min_d)),
                ("max_directivity_db", Json::Float(max_d)),
                ("max_beam_error_deg", Json::Float(max_err)),
            ])
        })
        .collect();
    let summary = Json::Object(vec![
        ("schema_version", Json::UInt(SCHEMA_VERSION)),
        ("grid_deg", Json::Float(grid_deg)),
        ("epsilon_r", Json::floats(spec.epsilon_r_values.iter().copied())),
        ("sigma_s_per_m", Json::floats(spec.sigma_values.iter().copied())),
        ("per_epsilon", Json::Array(per_epsilon)),
    ]);
    write_output(&sidecar_path(out), &summary.render())
}

// ---------------------------------------------------------------------------
// optimize

fn cmd_optimize(
    config: &ScenarioConfig,
    scene: &ArrayGeometry,
    grid_deg: f64,
    out: &Path,
) -> parray_core::Result<()> {
    let opt = config.optimize()?;
    let bounds = SearchBounds::for_scene(scene);
    let mut ga_config = opt.ga_config(grid_deg);
    let objective = match opt.desired_gain_db {
        Some(g) => opt.objective(g),
        None => {
            let fallback = ga::free_space_gain_target(scene, grid_deg)?;
            log::info!("no desired_gain_db in config; targeting free-space {} dB", fmt_f64(fallback));
            opt.objective(fallback)
        }
    };

    let scene_design = ga::design_from_scene(scene);
    if opt.seed_scene_design {
        match bounds.validate(&scene_design) {
            Ok(()) => ga_config.initial_designs.push(scene_design.clone()),
            Err(e) => log::info!("scene design not seeded into the population: {e}"),
        }
    }

    let outcome = ga::evolve(&ga_config, &objective, scene, &bounds)?;
    log::info!(
        "best fitness {} after {} evaluations",
        fmt_f64(outcome.best_fitness),
        outcome.evaluations
    );
    let comparison = ga::compare_designs(&scene_design, &outcome.best, scene, grid_deg)?;

    let wl = scene.wavelength_m();
    let doc = Json::Object(vec![
        ("schema_version", Json::UInt(SCHEMA_VERSION)),
        ("seed", Json::UInt(ga_config.seed)),
        ("wavelength_m", Json::Float(wl)),
        (
            "objective",
            Json::Object(vec![
                ("desired_gain_db", Json::Float(objective.desired_gain_db)),
                ("gain_tolerance_db", Json::Float(objective.gain_tolerance_db)),
                ("azimuth_tolerance_deg", Json::Float(objective.azimuth_tolerance_deg)),
                ("elevation_tolerance_deg", Json::Float(objective.elevation_tolerance_deg)),
                ("azimuth_weight_db_per_deg", Json::Float(objective.azimuth_weight_db_per_deg)),
                (
                    "elevation_weight_db_per_deg",
                    Json::Float(objective.elevation_weight_db_per_deg),
                ),
            ]),
        ),
        (
            "ga",
            Json::Object(vec![
                ("population", Json::UInt(ga_config.population as u64)),
                ("generations", Json::UInt(ga_config.generations as u64)),
                ("crossover_rate", Json::Float(ga_config.crossover_rate)),
                ("mutation_rate", Json::Float(ga_config.mutation_rate)),
                ("mutation_scale", Json::Float(ga_config.mutation_scale)),
                ("elitism", Json::UInt(ga_config.elitism as u64)),
                ("pattern_grid_deg", Json::Float(ga_config.pattern_grid_deg)),
            ]),
        ),
        ("evaluations", Json::UInt(outcome.evaluations as u64)),
        ("best", design_json(&outcome.best, outcome.best_fitness, wl)),
        (
            "trace",
            Json::Array(
                outcome
                    .trace
                    .iter()
                    .map(|s| {
                        Json::Object(vec![
                            ("generation", Json::UInt(s.generation as u64)),
                            ("best_fitness", Json::Float(s.best_fitness)),
                            ("mean_fitness", Json::Float(s.mean_fitness)),
                        ])
                    })
                    .collect(),
            ),
        ),
        (
            "comparison",
            Json::Object(vec![
                ("lone_driven", design_metrics_json(&comparison.reference)),
                ("scene_design", design_metrics_json(&comparison.first)),
                ("optimized_design", design_metrics_json(&comparison.second)),
            ]),
        ),
    ]);
    write_output(out, &doc.render())
}

fn design_json(d: &DesignVector, fitness: f64, wl: f64) -> Json {
    Json::Object(vec![
        ("fitness", Json::Float(fitness)),
        ("spacings_m", Json::floats(d.spacings_m.iter().copied())),
        ("spacings_wl", Json::floats(d.spacings_m.iter().map(|s| s / wl))),
        ("lengths_m", Json::floats(d.lengths_m.iter().copied())),
        ("lengths_wl", Json::floats(d.lengths_m.iter().map(|l| l / wl))),
    ])
}

fn design_metrics_json(m: &DesignMetrics) -> Json {
    Json::Object(vec![
        ("directivity_db", Json::Float(m.directivity_db)),
        ("beam_azimuth_deg", Json::Float(m.beam_azimuth_deg)),
        ("beam_elevation_deg", Json::Float(90.0 - m.beam_polar_deg)),
        ("side_lobe_level_db", Json::float_opt(m.side_lobe_level_db)),
        ("beamwidth_az_deg", Json::float_opt(m.beamwidth_az_deg)),
        ("gain_over_reference_db", Json::Float(m.gain_over_reference_db)),
    ])
}
