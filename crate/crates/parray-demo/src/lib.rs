//! Interactive browser demo for the parasitic-array simulator.
//!
//! All computation lives in this module as ordinary Rust — compiled and
//! tested natively like the rest of the workspace. [`wasm`] wraps the
//! same functions for `wasm-bindgen` so the static page in `www/` can
//! call them; the JSON payloads are identical on both targets.
//!
//! Three operations back the page:
//! - [`two_element_gain_curve`]: the closed-form azimuth gain of a
//!   driven element next to one parasitic, fast enough for live sliders;
//! - [`array_study`]: full pattern cuts and metrics for the baseline
//!   three- or five-element array over a chosen ground;
//! - [`quick_redesign`]: a small-budget optimizer run that retunes the
//!   three-element array for the chosen soil.

use num_complex::Complex64;
use serde::Serialize;

use parray_core::element::WireElement;
use parray_core::ga::{self, GAConfig, SearchBounds};
use parray_core::geometry::{self, ArrayGeometry};
use parray_core::metrics;
use parray_core::solver;
use parray_core::{Error, GroundModel, Result};

#[cfg(target_arch = "wasm32")]
mod wasm;

/// The demo works one band; everything else scales with wavelength.
pub const DEMO_FREQUENCY_HZ: f64 = 40.0e6;
/// Wire radius used for the pair explorer, in wavelengths.
pub const PAIR_RADIUS_WL: f64 = 0.005;
/// Pattern grid used throughout the demo — coarse enough for a browser.
pub const DEMO_GRID_DEG: f64 = 2.0;

const DRIVE: Complex64 = Complex64::new(1.0, 0.0);

/// Azimuth gain of a driven λ/2 element with one parasitic beside it,
/// from the closed-form two-element expression.
#[derive(Debug, Clone, Serialize)]
pub struct GainCurve {
    /// Azimuth samples, 0°..=360° every degree.
    pub phi_deg: Vec<f64>,
    /// Gain over the lone driven element at equal accepted power, dB.
    pub gain_db: Vec<f64>,
    /// Input resistance of the coupled pair, Ω.
    pub input_resistance_ohm: f64,
    /// Gain at φ=0° minus gain at φ=180°.
    pub front_to_back_db: f64,
}

impl GainCurve {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("gain curve payloads are plain finite data")
    }
}

/// Evaluates the closed-form pair gain every 1° of azimuth. The parasitic
/// sits `spacing_wl` wavelengths behind the driven element, so φ=0 looks
/// away from it.
pub fn two_element_gain_curve(spacing_wl: f64, parasitic_len_wl: f64) -> Result<GainCurve> {
    if !(0.05..=1.0).contains(&spacing_wl) {
        return Err(Error::Config(format!(
            "pair spacing must lie in [0.05, 1.0] wavelengths, got {spacing_wl}"
        )));
    }
    let wl = geometry::C0 / DEMO_FREQUENCY_HZ;
    let driven = WireElement::new(0.5 * wl, PAIR_RADIUS_WL * wl)?;
    let parasitic = WireElement::new(parasitic_len_wl * wl, PAIR_RADIUS_WL * wl)?;
    let spacing_m = spacing_wl * wl;

    let mut phi_deg = Vec::with_capacity(361);
    let mut gain_db = Vec::with_capacity(361);
    for phi_i in 0..=360 {
        let phi = phi_i as f64;
        let ratio =
            solver::two_element_gain_closed_form(&driven, &parasitic, spacing_m, wl, phi)?;
        phi_deg.push(phi);
        gain_db.push(20.0 * ratio.log10());
    }
    let front_to_back_db = gain_db[0] - gain_db[180];

    // Input resistance from the matrix route, so the readout reflects the
    // same coupling the curve does.
    let geom = geometry::two_element(
        DEMO_FREQUENCY_HZ,
        0.5,
        parasitic_len_wl,
        spacing_wl,
        PAIR_RADIUS_WL,
        GroundModel::FreeSpace,
    )?;
    let sol = solver::solve_currents(&geom, DRIVE)?;

    Ok(GainCurve {
        phi_deg,
        gain_db,
        input_resistance_ohm: sol.input_impedance.re,
        front_to_back_db,
    })
}

/// Pattern cuts and summary metrics for one baseline array over one ground.
#[derive(Debug, Clone, Serialize)]
pub struct ArrayStudy {
    /// Azimuth samples of the horizontal cut, degrees.
    pub azimuth_deg: Vec<f64>,
    /// Normalized power along the beam's polar ring, dB (peak 0).
    pub azimuth_cut_db: Vec<f64>,
    /// Elevation samples of the forward vertical cut, degrees above the
    /// horizon (+90 zenith, −90 straight down).
    pub elevation_deg: Vec<f64>,
    /// Normalized power in the φ=0 half-plane, dB.
    pub elevation_cut_db: Vec<f64>,
    pub directivity_db: f64,
    pub beam_azimuth_deg: f64,
    /// Beam elevation above the horizon, degrees.
    pub beam_elevation_deg: f64,
    pub side_lobe_level_db: Option<f64>,
    pub beamwidth_az_deg: Option<f64>,
}

impl ArrayStudy {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("array study payloads are plain finite data")
    }
}

/// Solves the baseline array with `elements` ∈ {3, 5} over the given
/// ground (`None` = free space) and extracts the two display cuts.
pub fn array_study(elements: u32, ground: Option<(f64, f64)>) -> Result<ArrayStudy> {
    let ground = match ground {
        None => GroundModel::FreeSpace,
        Some((epsilon_r, sigma_s_per_m)) => GroundModel::homogeneous(epsilon_r, sigma_s_per_m)?,
    };
    let geom: ArrayGeometry = match elements {
        3 => geometry::baseline_three_element(DEMO_FREQUENCY_HZ, ground)?,
        5 => geometry::baseline_five_element(DEMO_FREQUENCY_HZ, ground)?,
        n => {
            return Err(Error::Config(format!(
                "the demo ships 3- and 5-element baselines, not {n} elements"
            )))
        }
    };
    let sol = solver::solve_currents(&geom, DRIVE)?;
    let pat = solver::far_field(&geom, &sol, DEMO_GRID_DEG, DEMO_GRID_DEG)?;
    let beam = metrics::beam_direction(&pat);

    let ring = pat.nearest_theta_index(beam.polar_deg);
    let azimuth_deg = pat.phi_deg().to_vec();
    let azimuth_cut_db: Vec<f64> =
        (0..pat.n_phi()).map(|ip| pat.power_db(ring, ip)).collect();

    let forward = pat.nearest_phi_index(0.0);
    let elevation_deg: Vec<f64> = pat.theta_deg().iter().map(|t| 90.0 - t).collect();
    let elevation_cut_db: Vec<f64> =
        (0..pat.n_theta()).map(|it| pat.power_db(it, forward)).collect();

    Ok(ArrayStudy {
        azimuth_deg,
        azimuth_cut_db,
        elevation_deg,
        elevation_cut_db,
        directivity_db: metrics::directivity_db(&pat)?,
        beam_azimuth_deg: beam.azimuth_deg,
        beam_elevation_deg: 90.0 - beam.polar_deg,
        side_lobe_level_db: metrics::side_lobe_level_db(&pat),
        beamwidth_az_deg: metrics::beamwidth_az_deg(&pat, beam.polar_deg),
    })
}

/// Outcome of a small-budget redesign of the three-element array.
#[derive(Debug, Clone, Serialize)]
pub struct Redesign {
    /// Optimized parasitic offsets from the driven element, wavelengths
    /// (negative = behind).
    pub spacings_wl: Vec<f64>,
    /// Optimized parasitic lengths, wavelengths.
    pub lengths_wl: Vec<f64>,
    /// Directivity of the free-space layout over this soil, dB.
    pub carried_over_db: f64,
    /// Directivity of the optimized layout over this soil, dB.
    pub optimized_db: f64,
    pub improvement_db: f64,
    /// Beam elevation of the optimized layout, degrees above the horizon.
    pub beam_elevation_deg: f64,
    pub generations_run: usize,
    pub evaluations: usize,
    pub best_fitness: f64,
}

impl Redesign {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("redesign payloads are plain finite data")
    }
}

/// Retunes the three-element array for a homogeneous soil with a small,
/// browser-sized optimizer budget. The free-space layout seeds the
/// population, so the result never falls below the carried-over design.
pub fn quick_redesign(
    epsilon_r: f64,
    sigma_s_per_m: f64,
    seed: u32,
    generations: u32,
) -> Result<Redesign> {
    let ground = GroundModel::homogeneous(epsilon_r, sigma_s_per_m)?;
    let template = geometry::baseline_three_element(DEMO_FREQUENCY_HZ, ground)?;
    let bounds = SearchBounds::for_scene(&template);
    let scene_design = ga::design_from_scene(&template);

    // Chase the free-space figure plus a stretch margin; the hinge
    // objective then keeps pulling until the budget runs out.
    let target_db = ga::free_space_gain_target(&template, DEMO_GRID_DEG)? + 3.0;
    let objective = ga::ObjectiveSpec::toward_gain(target_db);
    let config = GAConfig {
        population: 16,
        generations: generations.clamp(1, 40) as usize,
        seed: seed as u64,
        pattern_grid_deg: DEMO_GRID_DEG,
        initial_designs: vec![scene_design.clone()],
        ..GAConfig::default()
    };
    let outcome = ga::evolve(&config, &objective, &template, &bounds)?;
    let cmp = ga::compare_designs(&scene_design, &outcome.best, &template, DEMO_GRID_DEG)?;

    let wl = template.wavelength_m();
    Ok(Redesign {
        spacings_wl: outcome.best.spacings_m.iter().map(|s| s / wl).collect(),
        lengths_wl: outcome.best.lengths_m.iter().map(|l| l / wl).collect(),
        carried_over_db: cmp.first.directivity_db,
        optimized_db: cmp.second.directivity_db,
        improvement_db: cmp.second.directivity_db - cmp.first.directivity_db,
        beam_elevation_deg: 90.0 - cmp.second.beam_polar_deg,
        generations_run: outcome.trace.len().saturating_sub(1),
        evaluations: outcome.evaluations,
        best_fitness: outcome.best_fitness,
    })
}
