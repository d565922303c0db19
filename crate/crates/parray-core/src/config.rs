//! Scenario configuration: one TOML file describes the scene and the
//! command-specific blocks (pattern export, Monte Carlo study, ground
//! sweep, optimization run).
//!
//! Parsing is strict — unknown keys are rejected so a typo cannot
//! silently fall back to a default — and every dimensioned key carries
//! its unit in its name (`frequency_hz`, `length_m`, `grid_deg`), since
//! antenna work mixes wavelength-relative and metric units freely enough
//! that bare numbers invite unit bugs. Seeds live here too: a run is a
//! pure function of its config file.

use serde::Deserialize;

use crate::element::WireElement;
use crate::error::{Error, Result};
use crate::ga::{GAConfig, ObjectiveSpec};
use crate::geometry::{ArrayGeometry, PlacedElement};
use crate::ground::GroundModel;
use crate::uncertainty::{GroundSweepSpec, PerturbationSpec, PerturbationTarget};

/// Top-level configuration. The `[scene]` block is always required; each
/// command demands its own block and rejects configs lacking it.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scene: SceneConfig,
    #[serde(default)]
    pub pattern: PatternConfig,
    pub montecarlo: Option<MonteCarloConfig>,
    pub groundsweep: Option<GroundSweepConfig>,
    pub optimize: Option<OptimizeConfig>,
}

/// Physical scene: operating frequency, ground, feed height, and the
/// element list.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneConfig {
    pub frequency_hz: f64,
    /// Height of every feed point above the ground plane. Defaults to a
    /// clearance that keeps the longest wire's lower tip off the ground.
    pub feed_height_m: Option<f64>,
    pub ground: GroundConfig,
    pub elements: Vec<ElementConfig>,
}

/// Ground description. `kind` selects the model; the homogeneous kind
/// requires both material parameters, the free-space kind forbids them.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroundConfig {
    pub kind: String,
    pub epsilon_r: Option<f64>,
    pub sigma_s_per_m: Option<f64>,
}

/// One wire in the scene.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementConfig {
    /// "driven" or "parasitic"; exactly one element must be driven.
    pub role: String,
    pub x_m: f64,
    pub y_m: f64,
    pub length_m: f64,
    pub radius_m: f64,
    #[serde(default)]
    pub tilt_polar_deg: f64,
    #[serde(default)]
    pub tilt_azimuth_deg: f64,
}

/// Pattern-export resolution, also the evaluation grid for studies
/// unless overridden on the command line.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PatternConfig {
    #[serde(default = "default_grid_deg")]
    pub grid_deg: f64,
}

impl Default for PatternConfig {
    fn default() -> Self {
        PatternConfig { grid_deg: default_grid_deg() }
    }
}

fn default_grid_deg() -> f64 {
    1.0
}

/// Monte Carlo study block.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonteCarloConfig {
    pub seed: u64,
    pub trials: usize,
    #[serde(default)]
    pub position_error_max_m: f64,
    #[serde(default)]
    pub orientation_error_max_deg: f64,
    /// Which elements the errors strike: "all", "reflectors", or
    /// "directors".
    #[serde(default = "default_target")]
    pub target: String,
    /// Bin width for the position-error summary (defaults to a fifth of
    /// the configured maximum).
    pub bin_width_m: Option<f64>,
    /// Bin width for the orientation-spread summary (same default rule).
    pub bin_width_deg: Option<f64>,
}

fn default_target() -> String {
    "all".to_owned()
}

/// Ground-sweep block: the study runs the scene over every (ε_r, σ)
/// pair in the cross product.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroundSweepConfig {
    pub epsilon_r: Vec<f64>,
    pub sigma_s_per_m: Vec<f64>,
}

/// Optimization block. Hyperparameters default to the library's
/// standard budget; the gain target defaults to what the same hardware
/// achieves in free space.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeConfig {
    pub seed: u64,
    pub population: Option<usize>,
    pub generations: Option<usize>,
    pub crossover_rate: Option<f64>,
    pub mutation_rate: Option<f64>,
    pub mutation_scale: Option<f64>,
    pub elitism: Option<usize>,
    pub desired_gain_db: Option<f64>,
    pub gain_tolerance_db: Option<f64>,
    pub azimuth_tolerance_deg: Option<f64>,
    pub elevation_tolerance_deg: Option<f64>,
    pub azimuth_weight_db_per_deg: Option<f64>,
    pub elevation_weight_db_per_deg: Option<f64>,
    /// Seed the starting population with the scene's own design
    /// (default true), so the search begins at the status quo.
    #[serde(default = "default_true")]
    pub seed_scene_design: bool,
}

fn default_true() -> bool {
    true
}

impl ScenarioConfig {
    /// Parses and structurally validates a TOML document. Messages from
    /// the parser carry line/column positions and field names.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Builds the scene the config describes.
    pub fn build_scene(&self) -> Result<ArrayGeometry> {
        let ground = self.scene.ground.build()?;
        let mut elements = Vec::with_capacity(self.scene.elements.len());
        for (i, e) in self.scene.elements.iter().enumerate() {
            let wire = if e.tilt_polar_deg == 0.0 && e.tilt_azimuth_deg == 0.0 {
                WireElement::new(e.length_m, e.radius_m)
            } else {
                WireElement::with_tilt(
                    e.length_m,
                    e.radius_m,
                    e.tilt_polar_deg,
                    e.tilt_azimuth_deg,
                )
            }
            .map_err(|err| Error::Config(format!("elements[{i}]: {err}")))?;
            let placed = match e.role.as_str() {
                "driven" => PlacedElement::driven(wire, [e.x_m, e.y_m]),
                "parasitic" => PlacedElement::parasitic(wire, [e.x_m, e.y_m]),
                other => {
                    return Err(Error::Config(format!(
                        "elements[{i}].role: expected \"driven\" or \"parasitic\", got \"{other}\""
                    )))
                }
            };
            elements.push(placed);
        }
        let feed_height = match self.scene.feed_height_m {
            Some(h) => h,
            None => {
                let wl = crate::geometry::C0 / self.scene.frequency_hz;
                let max_len = elements
                    .iter()
                    .map(|p| p.element.length_m())
                    .fold(0.0, f64::max);
                crate::geometry::default_feed_height_m(max_len, wl)
            }
        };
        ArrayGeometry::new(elements, self.scene.frequency_hz, feed_height, ground)
    }

    /// The Monte Carlo block, or a config error naming it.
    pub fn montecarlo(&self) -> Result<&MonteCarloConfig> {
        self.montecarlo
            .as_ref()
            .ok_or_else(|| Error::Config("config has no [montecarlo] block".into()))
    }

    /// The ground-sweep block, or a config error naming it.
    pub fn groundsweep(&self) -> Result<&GroundSweepConfig> {
        self.groundsweep
            .as_ref()
            .ok_or_else(|| Error::Config("config has no [groundsweep] block".into()))
    }

    /// The optimize block, or a config error naming it.
    pub fn optimize(&self) -> Result<&OptimizeConfig> {
        self.optimize
            .as_ref()
            .ok_or_else(|| Error::Config("config has no [optimize] block".into()))
    }
}

impl GroundConfig {
    /// Resolves the `kind` discriminator and checks that exactly the
    /// right parameters accompany it.
    pub fn build(&self) -> Result<GroundModel> {
        match self.kind.as_str() {
            "free_space" => {
                if self.epsilon_r.is_some() || self.sigma_s_per_m.is_some() {
                    return Err(Error::Config(
                        "ground.kind \"free_space\" takes no epsilon_r or sigma_s_per_m".into(),
                    ));
                }
                Ok(GroundModel::FreeSpace)
            }
            "homogeneous" => {
                let epsilon_r = self.epsilon_r.ok_or_else(|| {
                    Error::Config("ground.kind \"homogeneous\" requires epsilon_r".into())
                })?;
                let sigma = self.sigma_s_per_m.ok_or_else(|| {
                    Error::Config("ground.kind \"homogeneous\" requires sigma_s_per_m".into())
                })?;
                GroundModel::homogeneous(epsilon_r, sigma)
            }
            other => Err(Error::Config(format!(
                "ground.kind: expected \"free_space\" or \"homogeneous\", got \"{other}\""
            ))),
        }
    }
}

impl MonteCarloConfig {
    /// Converts to the study's perturbation spec.
    pub fn perturbation_spec(&self) -> Result<PerturbationSpec> {
        let target = match self.target.as_str() {
            "all" => PerturbationTarget::All,
            "reflectors" => PerturbationTarget::Reflectors,
            "directors" => PerturbationTarget::Directors,
            other => {
                return Err(Error::Config(format!(
                    "montecarlo.target: expected \"all\", \"reflectors\", or \"directors\", \
                     got \"{other}\""
                )))
            }
        };
        let spec = PerturbationSpec {
            seed: self.seed,
            trials: self.trials,
            position_error_max_m: self.position_error_max_m,
            orientation_error_max_deg: self.orientation_error_max_deg,
            target,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Position-error bin width for the summary sidecar.
    pub fn position_bin_width_m(&self) -> f64 {
        match self.bin_width_m {
            Some(w) => w,
            None if self.position_error_max_m > 0.0 => self.position_error_max_m / 5.0,
            None => 0.1,
        }
    }

    /// Orientation-spread bin width for the summary sidecar.
    pub fn orientation_bin_width_deg(&self) -> f64 {
        match self.bin_width_deg {
            Some(w) => w,
            None if self.orientation_error_max_deg > 0.0 => {
                self.orientation_error_max_deg / 5.0
            }
            None => 1.0,
        }
    }
}

impl GroundSweepConfig {
    /// Converts to the sweep spec, rejecting empty axes.
    pub fn sweep_spec(&self) -> Result<GroundSweepSpec> {
        if self.epsilon_r.is_empty() || self.sigma_s_per_m.is_empty() {
            return Err(Error::Config(
                "groundsweep.epsilon_r and groundsweep.sigma_s_per_m must be non-empty".into(),
            ));
        }
        Ok(GroundSweepSpec {
            epsilon_r_values: self.epsilon_r.clone(),
            sigma_values: self.sigma_s_per_m.clone(),
        })
    }
}

impl OptimizeConfig {
    /// Assembles the GA hyperparameters, filling gaps from the library
    /// defaults. `grid_deg` is the pattern resolution fitness runs at.
    pub fn ga_config(&self, grid_deg: f64) -> GAConfig {
        let d = GAConfig::default();
        GAConfig {
            population: self.population.unwrap_or(d.population),
            generations: self.generations.unwrap_or(d.generations),
            crossover_rate: self.crossover_rate.unwrap_or(d.crossover_rate),
            mutation_rate: self.mutation_rate.unwrap_or(d.mutation_rate),
            mutation_scale: self.mutation_scale.unwrap_or(d.mutation_scale),
            elitism: self.elitism.unwrap_or(d.elitism),
            seed: self.seed,
            pattern_grid_deg: grid_deg,
            initial_designs: Vec::new(),
        }
    }

    /// Assembles the objective around `default_gain_db`, used when the
    /// config names no target of its own.
    pub fn objective(&self, default_gain_db: f64) -> ObjectiveSpec {
        let base = ObjectiveSpec::toward_gain(self.desired_gain_db.unwrap_or(default_gain_db));
        ObjectiveSpec {
            gain_tolerance_db: self.gain_tolerance_db.unwrap_or(base.gain_tolerance_db),
            azimuth_tolerance_deg: self
                .azimuth_tolerance_deg
                .unwrap_or(base.azimuth_tolerance_deg),
            elevation_tolerance_deg: self
                .elevation_tolerance_deg
                .unwrap_or(base.elevation_tolerance_deg),
            azimuth_weight_db_per_deg: self
                .azimuth_weight_db_per_deg
                .unwrap_or(base.azimuth_weight_db_per_deg),
            elevation_weight_db_per_deg: self
                .elevation_weight_db_per_deg
                .unwrap_or(base.elevation_weight_db_per_deg),
            ..base
        }
    }
}
