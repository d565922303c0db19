//! Genetic-algorithm redesign of parasitic spacings and lengths.
//!
//! A parasitic array tuned in free space detunes over real ground: the
//! image currents shift every coupling impedance, and the pattern with it.
//! This module searches the axial spacings and element lengths of the
//! parasitics — the driven element, ground, and wire radii stay fixed —
//! for a design that restores a desired peak gain with the beam pointed
//! down the array axis at the horizon. The objective is a sum of hinge
//! penalties, zero exactly when every constraint is met within its
//! tolerance.
//!
//! The search is a plain generational GA: tournament selection of size
//! two, uniform crossover, Gaussian mutation clipped to bounds, and
//! elitism. Everything stochastic draws from one seeded stream, so a run
//! is reproducible bit for bit; fitness evaluations within a generation
//! run in parallel without affecting the result.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{self, ArrayGeometry};
use crate::metrics::{self, BeamDirection};
use crate::solver;

const DRIVE: Complex64 = Complex64::new(1.0, 0.0);

/// Genome: axial offset (signed meters, along +x from the driven element)
/// and wire length for each parasitic, in element order.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignVector {
    pub spacings_m: Vec<f64>,
    pub lengths_m: Vec<f64>,
}

/// Box constraints of the search space, in meters.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchBounds {
    /// Signed axial offset range for every parasitic.
    pub spacing_range_m: (f64, f64),
    /// Wire length range for every parasitic.
    pub length_range_m: (f64, f64),
    /// Minimum axial distance between any two elements, driven included.
    pub min_separation_m: f64,
    /// When set, every gene snaps to this lattice pitch (measured from the
    /// range start) — used to search the same quantized space as an
    /// exhaustive grid.
    pub quantum_m: Option<f64>,
}

/// Spacings may wander half a wavelength behind the driven element or
/// three quarters ahead of it.
const SPACING_RANGE_WL: (f64, f64) = (-0.5, 0.75);
/// Mast-height band of the study hardware, widened ±20% for search
/// headroom (in element-length terms).
const LENGTH_RANGE_WL: (f64, f64) = (0.336, 0.624);
/// Keep neighbors at least four wire diameters apart.
const MIN_SEPARATION_DIAMETERS: f64 = 4.0;

impl SearchBounds {
    /// Bounds sized for `template`'s wavelength and wire radii. The length
    /// band is trimmed to what the scene can physically host: the floor is
    /// raised where the thin-wire model demands it (length must exceed
    /// twenty radii), and over a real ground the ceiling stops wires from
    /// reaching below the feed height into the soil — so every candidate
    /// the GA can draw is also a wire the solver accepts.
    pub fn for_scene(template: &ArrayGeometry) -> Self {
        let wl = template.wavelength_m();
        let max_radius = template
            .elements()
            .iter()
            .map(|e| e.element.radius_m())
            .fold(0.0, f64::max);
        let length_min = (LENGTH_RANGE_WL.0 * wl).max(20.0 * max_radius * 1.0001);
        let mut length_max = LENGTH_RANGE_WL.1 * wl;
        if !template.ground().is_free_space() {
            length_max = length_max.min(2.0 * template.feed_height_m() * 0.9999);
        }
        SearchBounds {
            spacing_range_m: (SPACING_RANGE_WL.0 * wl, SPACING_RANGE_WL.1 * wl),
            length_range_m: (length_min, length_max.max(length_min)),
            min_separation_m: MIN_SEPARATION_DIAMETERS * 2.0 * max_radius,
            quantum_m: None,
        }
    }

    fn clip_spacing(&self, v: f64) -> f64 {
        let v = v.clamp(self.spacing_range_m.0, self.spacing_range_m.1);
        self.snap(v, self.spacing_range_m.0)
    }

    fn clip_length(&self, v: f64) -> f64 {
        let v = v.clamp(self.length_range_m.0, self.length_range_m.1);
        self.snap(v, self.length_range_m.0)
    }

    fn snap(&self, v: f64, origin: f64) -> f64 {
        match self.quantum_m {
            Some(q) => origin + ((v - origin) / q).round() * q,
            None => v,
        }
    }

    /// Checks a design against the box constraints and pairwise
    /// separations (the driven element sits at offset zero).
    pub fn validate(&self, design: &DesignVector) -> Result<()> {
        if design.spacings_m.len() != design.lengths_m.len() {
            return Err(Error::Config(format!(
                "design has {} spacings but {} lengths",
                design.spacings_m.len(),
                design.lengths_m.len()
            )));
        }
        for &s in &design.spacings_m {
            if !(s >= self.spacing_range_m.0 && s <= self.spacing_range_m.1) {
                return Err(Error::Config(format!(
                    "spacing {s} m outside [{}, {}] m",
                    self.spacing_range_m.0, self.spacing_range_m.1
                )));
            }
        }
        for &l in &design.lengths_m {
            if !(l >= self.length_range_m.0 && l <= self.length_range_m.1) {
                return Err(Error::Config(format!(
                    "length {l} m outside [{}, {}] m",
                    self.length_range_m.0, self.length_range_m.1
                )));
            }
        }
        let mut axial: Vec<f64> = design.spacings_m.clone();
        axial.push(0.0);
        for i in 0..axial.len() {
            for j in (i + 1)..axial.len() {
                if (axial[i] - axial[j]).abs() < self.min_separation_m {
                    return Err(Error::Config(format!(
                        "elements at {} m and {} m sit closer than {} m",
                        axial[i], axial[j], self.min_separation_m
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Target the optimizer steers toward: a desired peak gain with the beam
/// on the array axis at the horizon, each with a tolerance inside which
/// the corresponding penalty vanishes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveSpec {
    pub desired_gain_db: f64,
    pub gain_tolerance_db: f64,
    pub azimuth_tolerance_deg: f64,
    pub elevation_tolerance_deg: f64,
    /// dB-equivalent weight per degree of azimuth miss.
    pub azimuth_weight_db_per_deg: f64,
    /// dB-equivalent weight per degree of elevation miss.
    pub elevation_weight_db_per_deg: f64,
}

impl ObjectiveSpec {
    /// Standard tolerances around a chosen gain target: ±0.5 dB on gain,
    /// ±2° on each beam angle, beam misses weighted at 0.5 dB per degree.
    pub fn toward_gain(desired_gain_db: f64) -> Self {
        ObjectiveSpec {
            desired_gain_db,
            gain_tolerance_db: 0.5,
            azimuth_tolerance_deg: 2.0,
            elevation_tolerance_deg: 2.0,
            azimuth_weight_db_per_deg: 0.5,
            elevation_weight_db_per_deg: 0.5,
        }
    }

    fn validate(&self) -> Result<()> {
        let tols =
            [self.gain_tolerance_db, self.azimuth_tolerance_deg, self.elevation_tolerance_deg];
        if tols.iter().any(|t| !(t > &0.0) || !t.is_finite()) {
            return Err(Error::Config(format!("objective tolerances must be positive: {self:?}")));
        }
        if !(self.azimuth_weight_db_per_deg >= 0.0 && self.elevation_weight_db_per_deg >= 0.0) {
            return Err(Error::Config(format!("objective weights must be ≥ 0: {self:?}")));
        }
        if !self.desired_gain_db.is_finite() {
            return Err(Error::Config(format!(
                "desired gain must be finite, got {} dB",
                self.desired_gain_db
            )));
        }
        Ok(())
    }
}

/// GA hyperparameters. Defaults are sized so a full run is a desk-scale
/// job: each fitness call is one small-matrix solve plus one pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct GAConfig {
    pub population: usize,
    pub generations: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    /// Mutation standard deviation as a fraction of each gene's range.
    pub mutation_scale: f64,
    pub elitism: usize,
    pub seed: u64,
    /// Pattern resolution used inside fitness evaluations.
    pub pattern_grid_deg: f64,
    /// Designs injected into generation zero ahead of random fill — seed
    /// the search with known-good starting points.
    pub initial_designs: Vec<DesignVector>,
}

impl Default for GAConfig {
    fn default() -> Self {
        GAConfig {
            population: 40,
            generations: 60,
            crossover_rate: 0.9,
            mutation_rate: 0.15,
            mutation_scale: 0.1,
            elitism: 2,
            seed: 1,
            pattern_grid_deg: 1.0,
            initial_designs: Vec::new(),
        }
    }
}

impl GAConfig {
    fn validate(&self) -> Result<()> {
        if self.population < 2 {
            return Err(Error::Config(format!(
                "population must be at least 2, got {}",
                self.population
            )));
        }
        if self.generations == 0 {
            return Err(Error::Config("generation count must be at least 1".into()));
        }
        for (name, rate) in
            [("crossover", self.crossover_rate), ("mutation", self.mutation_rate)]
        {
            if !(0.0..=1.0).contains(&rate) {
                return Err(Error::Config(format!("{name} rate must lie in [0, 1], got {rate}")));
            }
        }
        if !(self.mutation_scale > 0.0 && self.mutation_scale.is_finite()) {
            return Err(Error::Config(format!(
                "mutation scale must be positive, got {}",
                self.mutation_scale
            )));
        }
        if self.elitism >= self.population {
            return Err(Error::Config(format!(
                "elitism {} must be smaller than the population {}",
                self.elitism, self.population
            )));
        }
        if self.initial_designs.len() > self.population {
            return Err(Error::Config(format!(
                "{} seeded designs exceed the population of {}",
                self.initial_designs.len(),
                self.population
            )));
        }
        if !(self.pattern_grid_deg > 0.0) {
            return Err(Error::Config(format!(
                "pattern grid must be positive, got {}°",
                self.pattern_grid_deg
            )));
        }
        Ok(())
    }
}

/// Materializes a design in the template scene: each parasitic moves to
/// its axial offset (y = driven's y) and takes its searched length; the
/// driven element, radii, ground, and feed height are untouched.
pub fn apply_design(template: &ArrayGeometry, design: &DesignVector) -> Result<ArrayGeometry> {
    let parasitic_count = template.len() - 1;
    if design.spacings_m.len() != parasitic_count || design.lengths_m.len() != parasitic_count {
        return Err(Error::Config(format!(
            "design sized for {} parasitics but the scene has {parasitic_count}",
            design.spacings_m.len()
        )));
    }
    let driven = template.driven_index();
    let driven_pos = template.elements()[driven].position_m;
    let mut elements = template.elements().to_vec();
    let mut gene = 0;
    for (i, e) in elements.iter_mut().enumerate() {
        if i == driven {
            continue;
        }
        e.position_m = [driven_pos[0] + design.spacings_m[gene], driven_pos[1]];
        e.element = e.element.with_length(design.lengths_m[gene])?;
        gene += 1;
    }
    template.with_placements(elements)
}

/// Reads the design a scene currently embodies — the inverse of
/// [`apply_design`] for on-axis scenes.
pub fn design_from_scene(scene: &ArrayGeometry) -> DesignVector {
    let driven = scene.driven_index();
    let driven_x = scene.elements()[driven].position_m[0];
    let mut spacings_m = Vec::new();
    let mut lengths_m = Vec::new();
    for (i, e) in scene.elements().iter().enumerate() {
        if i == driven {
            continue;
        }
        spacings_m.push(e.position_m[0] - driven_x);
        lengths_m.push(e.element.length_m());
    }
    DesignVector { spacings_m, lengths_m }
}

/// Hinge-penalty fitness: zero exactly when the realized peak gain is
/// within tolerance of the desired gain and the beam lands on the array
/// axis at the horizon within its angular tolerances. Designs the solver
/// rejects score infinite and drop out of selection.
pub fn fitness(
    design: &DesignVector,
    objective: &ObjectiveSpec,
    template: &ArrayGeometry,
    grid_deg: f64,
) -> f64 {
    let evaluated = (|| -> Result<(f64, BeamDirection)> {
        let geom = apply_design(template, design)?;
        let sol = solver::solve_currents(&geom, DRIVE)?;
        let pat = solver::far_field(&geom, &sol, grid_deg, grid_deg)?;
        Ok((metrics::directivity_db(&pat)?, metrics::beam_direction(&pat)))
    })();
    match evaluated {
        Ok((gain_db, beam)) => {
            let gain_miss =
                ((gain_db - objective.desired_gain_db).abs() - objective.gain_tolerance_db)
                    .max(0.0);
            let az_miss =
                (beam.azimuth_deg.abs() - objective.azimuth_tolerance_deg).max(0.0);
            let el_miss =
                ((beam.polar_deg - 90.0).abs() - objective.elevation_tolerance_deg).max(0.0);
            gain_miss
                + objective.azimuth_weight_db_per_deg * az_miss
                + objective.elevation_weight_db_per_deg * el_miss
        }
        Err(e) => {
            log::warn!("design culled, solver said: {e}");
            f64::INFINITY
        }
    }
}

/// Best-so-far and population-mean fitness of one generation. The mean
/// covers finite-fitness genomes only (culled designs would swamp it).
#[derive(Debug, Clone, PartialEq)]
pub struct GenerationStats {
    pub generation: usize,
    pub best_fitness: f64,
    pub mean_fitness: f64,
}

/// Result of an optimization run.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolveOutcome {
    pub best: DesignVector,
    pub best_fitness: f64,
    pub trace: Vec<GenerationStats>,
    pub evaluations: usize,
}

fn gaussian(rng: &mut ChaCha12Rng) -> f64 {
    let u1: f64 = rng.random_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    (-2.0 * u1.ln()).sqrt() * u2.cos()
}

fn random_design(
    rng: &mut ChaCha12Rng,
    bounds: &SearchBounds,
    parasitics: usize,
) -> Result<DesignVector> {
    for _attempt in 0..100 {
        let spacings_m: Vec<f64> = (0..parasitics)
            .map(|_| {
                bounds
                    .clip_spacing(rng.random_range(bounds.spacing_range_m.0..=bounds.spacing_range_m.1))
            })
            .collect();
        let lengths_m: Vec<f64> = (0..parasitics)
            .map(|_| {
                bounds
                    .clip_length(rng.random_range(bounds.length_range_m.0..=bounds.length_range_m.1))
            })
            .collect();
        let d = DesignVector { spacings_m, lengths_m };
        if bounds.validate(&d).is_ok() {
            return Ok(d);
        }
    }
    Err(Error::Config(
        "could not draw a valid random design in 100 attempts; \
         the separation constraint leaves almost no room in the spacing range"
            .into(),
    ))
}

/// Crossover + mutation, retried until the child satisfies the bounds;
/// falls back to the first parent (valid by construction) if the
/// constraint corner is too tight.
fn make_child(
    rng: &mut ChaCha12Rng,
    config: &GAConfig,
    bounds: &SearchBounds,
    a: &DesignVector,
    b: &DesignVector,
) -> DesignVector {
    let spacing_width = bounds.spacing_range_m.1 - bounds.spacing_range_m.0;
    let length_width = bounds.length_range_m.1 - bounds.length_range_m.0;
    for _attempt in 0..100 {
        let mut child = a.clone();
        if rng.random_range(0.0..1.0) < config.crossover_rate {
            for i in 0..child.spacings_m.len() {
                if rng.random_range(0.0..1.0) < 0.5 {
                    child.spacings_m[i] = b.spacings_m[i];
                }
            }
            for i in 0..child.lengths_m.len() {
                if rng.random_range(0.0..1.0) < 0.5 {
                    child.lengths_m[i] = b.lengths_m[i];
                }
            }
        }
        for i in 0..child.spacings_m.len() {
            if rng.random_range(0.0..1.0) < config.mutation_rate {
                child.spacings_m[i] = bounds.clip_spacing(
                    child.spacings_m[i] + config.mutation_scale * spacing_width * gaussian(rng),
                );
            }
        }
        for i in 0..child.lengths_m.len() {
            if rng.random_range(0.0..1.0) < config.mutation_rate {
                child.lengths_m[i] = bounds.clip_length(
                    child.lengths_m[i] + config.mutation_scale * length_width * gaussian(rng),
                );
            }
        }
        if bounds.validate(&child).is_ok() {
            return child;
        }
    }
    a.clone()
}

/// Runs the GA. Deterministic given the config seed; stops early when a
/// zero-fitness design appears. Fails if the whole initial population is
/// infeasible (every genome culled by the solver).
pub fn evolve(
    config: &GAConfig,
    objective: &ObjectiveSpec,
    template: &ArrayGeometry,
    bounds: &SearchBounds,
) -> Result<EvolveOutcome> {
    config.validate()?;
    objective.validate()?;
    if template.len() < 2 {
        return Err(Error::Config("the scene has no parasitic elements to optimize".into()));
    }
    let parasitics = template.len() - 1;
    for d in &config.initial_designs {
        bounds.validate(d)?;
    }

    let mut rng = ChaCha12Rng::seed_from_u64(config.seed);
    let mut population: Vec<DesignVector> = config.initial_designs.clone();
    while population.len() < config.population {
        population.push(random_design(&mut rng, bounds, parasitics)?);
    }
    let mut fitnesses = evaluate_all(&population, objective, template, config.pattern_grid_deg);
    let mut evaluations = population.len();
    if fitnesses.iter().all(|f| f.is_infinite()) {
        return Err(Error::Config(
            "the entire initial population is infeasible; \
             check the search bounds against the scene"
                .into(),
        ));
    }

    let mut trace = vec![stats(0, &fitnesses)];
    for generation in 1..=config.generations {
        if trace.last().is_some_and(|s| s.best_fitness == 0.0) {
            break;
        }
        let mut order: Vec<usize> = (0..population.len()).collect();
        order.sort_by(|&i, &j| fitnesses[i].total_cmp(&fitnesses[j]));

        let mut next: Vec<DesignVector> =
            order.iter().take(config.elitism).map(|&i| population[i].clone()).collect();
        let mut next_fit: Vec<f64> =
            order.iter().take(config.elitism).map(|&i| fitnesses[i]).collect();
        let mut newcomers = Vec::with_capacity(config.population - next.len());
        while next.len() + newcomers.len() < config.population {
            let a = tournament(&mut rng, &fitnesses);
            let b = tournament(&mut rng, &fitnesses);
            newcomers.push(make_child(
                &mut rng,
                config,
                bounds,
                &population[a],
                &population[b],
            ));
        }
        let newcomer_fit =
            evaluate_all(&newcomers, objective, template, config.pattern_grid_deg);
        evaluations += newcomers.len();
        next.extend(newcomers);
        next_fit.extend(newcomer_fit);
        population = next;
        fitnesses = next_fit;
        trace.push(stats(generation, &fitnesses));
    }

    let best_index = (0..population.len())
        .min_by(|&i, &j| fitnesses[i].total_cmp(&fitnesses[j]))
        .expect("population is never empty");
    Ok(EvolveOutcome {
        best: population[best_index].clone(),
        best_fitness: fitnesses[best_index],
        trace,
        evaluations,
    })
}

fn evaluate_all(
    designs: &[DesignVector],
    objective: &ObjectiveSpec,
    template: &ArrayGeometry,
    grid_deg: f64,
) -> Vec<f64> {
    designs
        .par_iter()
        .map(|d| fitness(d, objective, template, grid_deg))
        .collect()
}

fn tournament(rng: &mut ChaCha12Rng, fitnesses: &[f64]) -> usize {
    let a = rng.random_range(0..fitnesses.len());
    let b = rng.random_range(0..fitnesses.len());
    if fitnesses[a].total_cmp(&fitnesses[b]).is_le() {
        a
    } else {
        b
    }
}

fn stats(generation: usize, fitnesses: &[f64]) -> GenerationStats {
    let best = fitnesses.iter().cloned().fold(f64::INFINITY, f64::min);
    let finite: Vec<f64> = fitnesses.iter().cloned().filter(|f| f.is_finite()).collect();
    let mean = if finite.is_empty() {
        f64::INFINITY
    } else {
        finite.iter().sum::<f64>() / finite.len() as f64
    };
    GenerationStats { generation, best_fitness: best, mean_fitness: mean }
}

/// Default gain target for a redesign: what the same hardware achieves
/// in free space. Asking the optimizer for this over a real ground reads
/// as "win back what the ground took".
pub fn free_space_gain_target(template: &ArrayGeometry, grid_deg: f64) -> Result<f64> {
    let free = template.with_ground(crate::ground::GroundModel::FreeSpace)?;
    let sol = solver::solve_currents(&free, DRIVE)?;
    let pat = solver::far_field(&free, &sol, grid_deg, grid_deg)?;
    metrics::directivity_db(&pat)
}

/// Metrics of one design realized in the comparison scene.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMetrics {
    pub directivity_db: f64,
    pub beam_azimuth_deg: f64,
    pub beam_polar_deg: f64,
    pub side_lobe_level_db: Option<f64>,
    pub beamwidth_az_deg: Option<f64>,
    /// Gain over the lone driven element, both at this design's beam peak.
    pub gain_over_reference_db: f64,
}

/// Side-by-side report of two designs in the same scene, with the lone
/// driven element as the reference row.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignComparison {
    pub reference: DesignMetrics,
    pub first: DesignMetrics,
    pub second: DesignMetrics,
}

fn evaluate_scene(
    scene: &ArrayGeometry,
    reference: &crate::pattern::RadiationPattern,
    grid_deg: f64,
) -> Result<DesignMetrics> {
    let sol = solver::solve_currents(scene, DRIVE)?;
    let pat = solver::far_field(scene, &sol, grid_deg, grid_deg)?;
    let beam = metrics::beam_direction(&pat);
    Ok(DesignMetrics {
        directivity_db: metrics::directivity_db(&pat)?,
        beam_azimuth_deg: beam.azimuth_deg,
        beam_polar_deg: beam.polar_deg,
        side_lobe_level_db: metrics::side_lobe_level_db(&pat),
        beamwidth_az_deg: metrics::beamwidth_az_deg(&pat, beam.polar_deg),
        gain_over_reference_db: metrics::relative_gain_db(
            &pat,
            reference,
            beam.polar_deg,
            beam.azimuth_deg,
        )?,
    })
}

/// Evaluates two designs in `template`'s scene next to the lone driven
/// element. All three rows share the template's ground, so the table reads
/// as "what does each design buy over bare hardware, here".
pub fn compare_designs(
    a: &DesignVector,
    b: &DesignVector,
    template: &ArrayGeometry,
    grid_deg: f64,
) -> Result<DesignComparison> {
    let lone = geometry::lone_driven_reference(template)?;
    let lone_sol = solver::solve_currents(&lone, DRIVE)?;
    let lone_pat = solver::far_field(&lone, &lone_sol, grid_deg, grid_deg)?;
    Ok(DesignComparison {
        reference: evaluate_scene(&lone, &lone_pat, grid_deg)?,
        first: evaluate_scene(&apply_design(template, a)?, &lone_pat, grid_deg)?,
        second: evaluate_scene(&apply_design(template, b)?, &lone_pat, grid_deg)?,
    })
}
