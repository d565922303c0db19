//! Seeded Monte Carlo studies of element pose uncertainty, plus ground
//! parameter sweeps.
//!
//! Mobile elements never sit exactly where a design puts them. This module
//! quantifies the cost: each trial perturbs the targeted elements' positions
//! (uniform in x and y) and orientations (uniform signed polar tilt with a
//! uniform tilt azimuth), re-solves the array, and records directivity and
//! beam-pointing error against the intended direction. Trials are seeded
//! per-index so a study is reproducible bit for bit and parallelizable
//! without ordering effects.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::ArrayGeometry;
use crate::ground::GroundModel;
use crate::metrics::{self, BeamDirection};
use crate::solver;

/// Redraw budget for perturbations that land elements on top of each other.
pub const MAX_REDRAWS: usize = 100;

/// A study whose trials fail more often than this is reporting on a broken
/// model, not on pose uncertainty; the run is rejected outright.
pub const MAX_FAILURE_FRACTION: f64 = 0.10;

/// Which elements a perturbation study shakes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbationTarget {
    /// Every element, driven included.
    All,
    /// Parasitic elements behind the driven element on the array (+x) axis.
    Reflectors,
    /// Parasitic elements ahead of the driven element on the array axis.
    Directors,
}

/// Error model for one Monte Carlo study.
#[derive(Debug, Clone, Copy)]
pub struct PerturbationSpec {
    /// Root seed; combined with each trial index for independent streams.
    pub seed: u64,
    /// Number of trials to run.
    pub trials: usize,
    /// Position offsets in x and y are each uniform in `[−max, +max]`.
    pub position_error_max_m: f64,
    /// Signed polar tilt uniform in `[−max, +max]` degrees, tilt azimuth
    /// uniform over the circle. Perturbations are applied in the horizontal
    /// plane and about the nominal vertical orientation — ground vehicles
    /// carrying the elements move on the ground, they do not levitate.
    pub orientation_error_max_deg: f64,
    /// Which elements are perturbed; the rest keep their nominal pose.
    pub target: PerturbationTarget,
}

impl PerturbationSpec {
    /// Checks the bounds make sense before any trial runs.
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("a study needs at least one trial".into()));
        }
        if !(self.position_error_max_m >= 0.0 && self.position_error_max_m.is_finite()) {
            return Err(Error::Config(format!(
                "position error bound must be finite and ≥ 0, got {} m",
                self.position_error_max_m
            )));
        }
        if !(self.orientation_error_max_deg >= 0.0 && self.orientation_error_max_deg < 90.0) {
            return Err(Error::Config(format!(
                "orientation error bound must lie in [0°, 90°), got {}°",
                self.orientation_error_max_deg
            )));
        }
        Ok(())
    }
}

/// Outcome of one perturbed trial. Metric fields are `None` when the trial
/// failed; the failure reason is kept so no trial is silently dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    /// Mean Euclidean position offset across the targeted elements.
    pub mean_position_error_m: f64,
    /// Standard deviation of the signed polar tilt errors across the
    /// targeted elements (zero when only one element is targeted).
    pub orientation_spread_deg: f64,
    pub directivity_db: Option<f64>,
    /// Great-circle angle between the realized and intended beam.
    pub beam_error_deg: Option<f64>,
    pub failure: Option<String>,
}

impl TrialRecord {
    /// `"ok"` or the failure reason — the status column of the CSV schema.
    pub fn status(&self) -> &str {
        self.failure.as_deref().unwrap_or("ok")
    }
}

/// Indices of the elements a target selects, in element order.
fn targeted_indices(base: &ArrayGeometry, target: PerturbationTarget) -> Vec<usize> {
    let driven_x = base.elements()[base.driven_index()].position_m[0];
    base.elements()
        .iter()
        .enumerate()
        .filter(|(i, e)| match target {
            PerturbationTarget::All => true,
            PerturbationTarget::Reflectors => {
                *i != base.driven_index() && e.position_m[0] < driven_x
            }
            PerturbationTarget::Directors => {
                *i != base.driven_index() && e.position_m[0] > driven_x
            }
        })
        .map(|(i, _)| i)
        .collect()
}

/// Independent per-trial RNG stream: the root seed and trial index are
/// mixed through a strong finalizer so neighboring trials share nothing.
fn trial_stream(seed: u64, trial: u64) -> ChaCha12Rng {
    let mut z = seed ^ trial.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^= z >> 31;
    ChaCha12Rng::seed_from_u64(z)
}

/// One drawn trial: the perturbed scene plus its realized error measures.
fn draw_trial(
    base: &ArrayGeometry,
    spec: &PerturbationSpec,
    trial_index: usize,
) -> Result<(ArrayGeometry, f64, f64)> {
    let targets = targeted_indices(base, spec.target);
    if targets.is_empty() {
        return Err(Error::Config(
            "perturbation target selects no elements in this scene".into(),
        ));
    }
    let mut rng = trial_stream(spec.seed, trial_index as u64);
    for _attempt in 0..MAX_REDRAWS {
        let mut elements = base.elements().to_vec();
        let mut offsets_m = Vec::with_capacity(targets.len());
        let mut polar_errors_deg = Vec::with_capacity(targets.len());
        let mut draw_ok = true;
        for &i in &targets {
            let dx = rng.random_range(-spec.position_error_max_m..=spec.position_error_max_m);
            let dy = rng.random_range(-spec.position_error_max_m..=spec.position_error_max_m);
            let polar = rng
                .random_range(-spec.orientation_error_max_deg..=spec.orientation_error_max_deg);
            let tilt_az = rng.random_range(0.0..360.0);
            elements[i].position_m[0] += dx;
            elements[i].position_m[1] += dy;
            match elements[i].element.retilted(polar, tilt_az) {
                Ok(e) => elements[i].element = e,
                Err(_) => {
                    draw_ok = false;
                    break;
                }
            }
            offsets_m.push(dx.hypot(dy));
            polar_errors_deg.push(polar);
        }
        if !draw_ok {
            continue;
        }
        match base.with_placements(elements) {
            Ok(geom) => {
                let mean_offset =
                    offsets_m.iter().sum::<f64>() / offsets_m.len() as f64;
                let n = polar_errors_deg.len() as f64;
                let mean_polar = polar_errors_deg.iter().sum::<f64>() / n;
                let spread = (polar_errors_deg
                    .iter()
                    .map(|p| (p - mean_polar).powi(2))
                    .sum::<f64>()
                    / n)
                    .sqrt();
                return Ok((geom, mean_offset, spread));
            }
            Err(_) => continue,
        }
    }
    Err(Error::Numerical(format!(
        "trial {trial_index}: no valid element placement in {MAX_REDRAWS} redraws; \
         the error bounds are incompatible with the element separations"
    )))
}

/// The perturbed scene for one trial — a pure function of
/// `(spec.seed, trial_index)`, so reruns and parallel schedules agree.
pub fn perturb_geometry(
    base: &ArrayGeometry,
    spec: &PerturbationSpec,
    trial_index: usize,
) -> Result<ArrayGeometry> {
    spec.validate()?;
    draw_trial(base, spec, trial_index).map(|(geom, _, _)| geom)
}

/// Rejects a record set whose failure fraction exceeds
/// [`MAX_FAILURE_FRACTION`].
pub(crate) fn enforce_failure_budget(records: &[TrialRecord]) -> Result<()> {
    let failed = records.iter().filter(|r| r.failure.is_some()).count();
    if failed as f64 > MAX_FAILURE_FRACTION * records.len() as f64 {
        let first = records
            .iter()
            .find_map(|r| r.failure.as_deref())
            .unwrap_or("unknown");
        return Err(Error::Harness(format!(
            "{failed} of {} trials failed (limit {:.0}%); first failure: {first}",
            records.len(),
            MAX_FAILURE_FRACTION * 100.0
        )));
    }
    Ok(())
}

/// Runs a full study: perturb → solve → pattern → metrics, per trial.
///
/// `intended_beam` is the `(azimuth°, polar°)` direction the unperturbed
/// design points at; per-trial beam error is measured against it.
/// `grid_deg` sets the pattern resolution on both axes. Records come back
/// ordered by trial index whatever the execution order. Failed trials keep
/// their reason; a failure fraction above [`MAX_FAILURE_FRACTION`] rejects
/// the whole run.
pub fn run_monte_carlo(
    base: &ArrayGeometry,
    spec: &PerturbationSpec,
    intended_beam: (f64, f64),
    grid_deg: f64,
) -> Result<Vec<TrialRecord>> {
    spec.validate()?;
    if targeted_indices(base, spec.target).is_empty() {
        return Err(Error::Config(
            "perturbation target selects no elements in this scene".into(),
        ));
    }
    // A base that does not solve is a configuration problem, not a
    // statistics problem; fail before burning trials.
    solver::solve_currents(base, DRIVE)?;
    let intended = BeamDirection {
        azimuth_deg: intended_beam.0,
        polar_deg: intended_beam.1,
        peak_power_db: 0.0,
        ambiguous: false,
    };
    let records: Vec<TrialRecord> = (0..spec.trials)
        .into_par_iter()
        .map(|trial| run_one_trial(base, spec, trial, &intended, grid_deg))
        .collect();
    enforce_failure_budget(&records)?;
    Ok(records)
}

const DRIVE: Complex64 = Complex64::new(1.0, 0.0);

fn run_one_trial(
    base: &ArrayGeometry,
    spec: &PerturbationSpec,
    trial: usize,
    intended: &BeamDirection,
    grid_deg: f64,
) -> TrialRecord {
    let (geom, mean_position_error_m, orientation_spread_deg) =
        match draw_trial(base, spec, trial) {
            Ok(t) => t,
            Err(e) => {
                return TrialRecord {
                    trial,
                    mean_position_error_m: f64::NAN,
                    orientation_spread_deg: f64::NAN,
                    directivity_db: None,
                    beam_error_deg: None,
                    failure: Some(e.to_string()),
                }
            }
        };
    let metrics_result = (|| -> Result<(f64, f64)> {
        let sol = solver::solve_currents(&geom, DRIVE)?;
        let pat = solver::far_field(&geom, &sol, grid_deg, grid_deg)?;
        let d = metrics::directivity_db(&pat)?;
        let beam = metrics::beam_direction(&pat);
        Ok((d, metrics::beam_direction_error_deg(intended, &beam)))
    })();
    match metrics_result {
        Ok((directivity_db, beam_error_deg)) => TrialRecord {
            trial,
            mean_position_error_m,
            orientation_spread_deg,
            directivity_db: Some(directivity_db),
            beam_error_deg: Some(beam_error_deg),
            failure: None,
        },
        Err(e) => TrialRecord {
            trial,
            mean_position_error_m,
            orientation_spread_deg,
            directivity_db: None,
            beam_error_deg: None,
            failure: Some(e.to_string()),
        },
    }
}

/// Which realized error a binned summary is indexed by.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinQuantity {
    MeanPositionError,
    OrientationSpread,
}

/// One bin of a study summary.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialBin {
    pub lower: f64,
    pub upper: f64,
    pub count: usize,
    pub mean_directivity_db: f64,
    /// Standard error of the directivity mean; `None` for single-trial bins.
    pub std_error_directivity_db: Option<f64>,
    pub mean_beam_error_deg: f64,
}

/// Groups successful trials into fixed-width bins of the chosen realized
/// error measure. Empty bins are omitted; bins come back in ascending
/// order.
pub fn bin_records(
    records: &[TrialRecord],
    quantity: BinQuantity,
    bin_width: f64,
) -> Result<Vec<TrialBin>> {
    if !(bin_width > 0.0 && bin_width.is_finite()) {
        return Err(Error::Config(format!(
            "bin width must be positive and finite, got {bin_width}"
        )));
    }
    let mut bins: std::collections::BTreeMap<i64, Vec<(f64, f64)>> =
        std::collections::BTreeMap::new();
    for r in records {
        let (Some(d), Some(be)) = (r.directivity_db, r.beam_error_deg) else {
            continue;
        };
        let x = match quantity {
            BinQuantity::MeanPositionError => r.mean_position_error_m,
            BinQuantity::OrientationSpread => r.orientation_spread_deg,
        };
        bins.entry((x / bin_width).floor() as i64).or_default().push((d, be));
    }
    Ok(bins
        .into_iter()
        .map(|(k, vals)| {
            let n = vals.len() as f64;
            let mean_d = vals.iter().map(|(d, _)| d).sum::<f64>() / n;
            let std_error = if vals.len() > 1 {
                let var = vals.iter().map(|(d, _)| (d - mean_d).powi(2)).sum::<f64>()
                    / (n - 1.0);
                Some((var / n).sqrt())
            } else {
                None
            };
            TrialBin {
                lower: k as f64 * bin_width,
                upper: (k + 1) as f64 * bin_width,
                count: vals.len(),
                mean_directivity_db: mean_d,
                std_error_directivity_db: std_error,
                mean_beam_error_deg: vals.iter().map(|(_, b)| b).sum::<f64>() / n,
            }
        })
        .collect())
}

/// Grid of ground parameters to sweep.
#[derive(Debug, Clone)]
pub struct GroundSweepSpec {
    pub epsilon_r_values: Vec<f64>,
    pub sigma_values: Vec<f64>,
}

/// One sweep point. Beam error is measured against the design's intended
/// horizon-forward direction (azimuth 0°, polar 90°).
#[derive(Debug, Clone, PartialEq)]
pub struct GroundSweepRow {
    pub epsilon_r: f64,
    pub sigma_s_per_m: f64,
    pub directivity_db: f64,
    pub beam_error_deg: f64,
}

/// Re-solves `base` over every `(ε_r, σ)` combination — ε_r outer, σ inner —
/// and tabulates directivity and beam error. `(1.0, 0.0)` rows degenerate to
/// exact free space.
pub fn sweep_ground_params(
    base: &ArrayGeometry,
    spec: &GroundSweepSpec,
    grid_deg: f64,
) -> Result<Vec<GroundSweepRow>> {
    if spec.epsilon_r_values.is_empty() || spec.sigma_values.is_empty() {
        return Err(Error::Config(
            "ground sweep needs at least one permittivity and one conductivity".into(),
        ));
    }
    let mut rows = Vec::with_capacity(spec.epsilon_r_values.len() * spec.sigma_values.len());
    for &epsilon_r in &spec.epsilon_r_values {
        for &sigma in &spec.sigma_values {
            let geom = base.with_ground(GroundModel::homogeneous(epsilon_r, sigma)?)?;
            let sol = solver::solve_currents(&geom, DRIVE)?;
            let pat = solver::far_field(&geom, &sol, grid_deg, grid_deg)?;
            let beam = metrics::beam_direction(&pat);
            rows.push(GroundSweepRow {
                epsilon_r,
                sigma_s_per_m: sigma,
                directivity_db: metrics::directivity_db(&pat)?,
                beam_error_deg: metrics::great_circle_deg(
                    90.0,
                    0.0,
                    beam.polar_deg,
                    beam.azimuth_deg,
                ),
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry;
    use proptest::prelude::*;

    const F: f64 = 40.0e6;

    fn base_three() -> ArrayGeometry {
        geometry::baseline_three_element(F, GroundModel::FreeSpace).unwrap()
    }

    fn study_ground() -> GroundModel {
        GroundModel::homogeneous(2.0, 1e-3).unwrap()
    }

    fn spec(
        seed: u64,
        trials: usize,
        pos_m: f64,
        tilt_deg: f64,
        target: PerturbationTarget,
    ) -> PerturbationSpec {
        PerturbationSpec {
            seed,
            trials,
            position_error_max_m: pos_m,
            orientation_error_max_deg: tilt_deg,
            target,
        }
    }

    fn scenes_agree(a: &ArrayGeometry, b: &ArrayGeometry) -> bool {
        a.elements().iter().zip(b.elements()).all(|(x, y)| {
            x.position_m == y.position_m
                && x.element.axis() == y.element.axis()
                && x.element.length_m() == y.element.length_m()
        })
    }

    #[test]
    fn zero_error_bounds_leave_the_scene_untouched() {
        let base = base_three();
        let s = spec(7, 1, 0.0, 0.0, PerturbationTarget::All);
        let perturbed = perturb_geometry(&base, &s, 0).unwrap();
        assert!(
            scenes_agree(&base, &perturbed),
            "null perturbation must reproduce the base scene exactly"
        );
    }

    #[test]
    fn identical_seed_and_trial_reproduce_the_same_draw() {
        let base = base_three();
        let s = spec(42, 8, 1.2, 8.0, PerturbationTarget::All);
        let a = perturb_geometry(&base, &s, 3).unwrap();
        let b = perturb_geometry(&base, &s, 3).unwrap();
        assert!(scenes_agree(&a, &b), "same (seed, trial) must redraw identically");
        let c = perturb_geometry(&base, &s, 4).unwrap();
        assert!(!scenes_agree(&a, &c), "different trials must draw differently");
    }

    #[test]
    fn targeted_groups_select_the_expected_elements() {
        let base = base_three();
        assert_eq!(targeted_indices(&base, PerturbationTarget::All), vec![0, 1, 2]);
        assert_eq!(targeted_indices(&base, PerturbationTarget::Reflectors), vec![0]);
        assert_eq!(targeted_indices(&base, PerturbationTarget::Directors), vec![2]);

        let s = spec(11, 1, 0.8, 0.0, PerturbationTarget::Reflectors);
        let perturbed = perturb_geometry(&base, &s, 0).unwrap();
        for i in [1usize, 2] {
            assert_eq!(
                base.elements()[i].position_m,
                perturbed.elements()[i].position_m,
                "untargeted element {i} must keep its nominal position"
            );
        }
        assert_ne!(
            base.elements()[0].position_m,
            perturbed.elements()[0].position_m,
            "the targeted reflector must move"
        );
    }

    #[test]
    fn offset_draws_are_centered_and_bounded() {
        let base = base_three();
        let max = 0.2 * base.wavelength_m();
        let s = spec(2024, 1, max, 6.0, PerturbationTarget::All);
        let mut draws = Vec::new();
        for trial in 0..1700 {
            let p = perturb_geometry(&base, &s, trial).unwrap();
            for (b, q) in base.elements().iter().zip(p.elements()) {
                draws.push(q.position_m[0] - b.position_m[0]);
                draws.push(q.position_m[1] - b.position_m[1]);
                let tilt = q.element.axis()[2].clamp(-1.0, 1.0).acos().to_degrees();
                assert!(tilt <= 6.0 + 1e-9, "tilt {tilt}° beyond the 6° bound");
            }
        }
        assert!(draws.len() >= 10_000, "want ≥10⁴ scalar draws, got {}", draws.len());
        assert!(
            draws.iter().all(|d| d.abs() <= max + 1e-12),
            "an offset escaped the ±{max} m bound"
        );
        let mean = draws.iter().sum::<f64>() / draws.len() as f64;
        // Uniform on [−max, max] has σ = max/√3; the mean of n draws has
        // σ/√n. Three standard errors is the agreed statistical gate.
        let gate = 3.0 * max / 3.0_f64.sqrt() / (draws.len() as f64).sqrt();
        assert!(mean.abs() < gate, "draw mean {mean} outside ±{gate}");
    }

    #[test]
    fn single_zero_error_trial_equals_the_unperturbed_metrics() {
        let base = geometry::baseline_three_element(F, study_ground()).unwrap();
        let sol = solver::solve_currents(&base, DRIVE).unwrap();
        let pat = solver::far_field(&base, &sol, 2.0, 2.0).unwrap();
        let beam = metrics::beam_direction(&pat);
        let d = metrics::directivity_db(&pat).unwrap();

        let s = spec(5, 1, 0.0, 0.0, PerturbationTarget::All);
        let records =
            run_monte_carlo(&base, &s, (beam.azimuth_deg, beam.polar_deg), 2.0).unwrap();
        assert_eq!(records.len(), 1);
        let r = &records[0];
        assert_eq!(r.status(), "ok");
        assert_eq!(r.mean_position_error_m, 0.0);
        assert_eq!(r.orientation_spread_deg, 0.0);
        assert!(
            (r.directivity_db.unwrap() - d).abs() < 1e-12,
            "zero-error trial directivity {} vs baseline {d}",
            r.directivity_db.unwrap()
        );
        assert!(r.beam_error_deg.unwrap() < 1e-9, "beam error {:?}", r.beam_error_deg);
    }

    #[test]
    fn studies_reproduce_bit_for_bit_and_stay_ordered() {
        let base = geometry::baseline_three_element(F, study_ground()).unwrap();
        let s = spec(99, 10, 0.5, 5.0, PerturbationTarget::All);
        let a = run_monte_carlo(&base, &s, (0.0, 71.0), 2.0).unwrap();
        let b = run_monte_carlo(&base, &s, (0.0, 71.0), 2.0).unwrap();
        assert_eq!(a, b, "identical studies must produce identical records");
        for (i, r) in a.iter().enumerate() {
            assert_eq!(r.trial, i, "records must come back in trial order");
        }
    }

    #[test]
    fn failure_budget_rejects_untrustworthy_runs() {
        let ok = TrialRecord {
            trial: 0,
            mean_position_error_m: 0.1,
            orientation_spread_deg: 0.0,
            directivity_db: Some(8.0),
            beam_error_deg: Some(0.5),
            failure: None,
        };
        let bad = TrialRecord { failure: Some("solver blew up".into()), ..ok.clone() };
        let mut records = vec![ok.clone(); 9];
        records.push(bad.clone());
        assert!(
            enforce_failure_budget(&records).is_ok(),
            "exactly 10% failures is still within budget"
        );
        records.push(bad);
        let err = enforce_failure_budget(&records).unwrap_err().to_string();
        assert!(
            err.contains("harness") && err.contains("solver blew up"),
            "budget error must carry the first failure reason: {err}"
        );
    }

    #[test]
    fn binned_directivity_degrades_with_position_error() {
        let base = geometry::baseline_three_element(F, study_ground()).unwrap();
        let s = spec(7, 140, 1.1, 0.0, PerturbationTarget::All);
        let records = run_monte_carlo(&base, &s, (0.0, 71.1), 2.0).unwrap();
        let bins =
            bin_records(&records, BinQuantity::MeanPositionError, 0.35).unwrap();
        assert!(bins.len() >= 2, "study too narrow to bin: {bins:?}");
        for w in bins.windows(2) {
            let slack = w[1].std_error_directivity_db.unwrap_or(0.0)
                + w[0].std_error_directivity_db.unwrap_or(0.0);
            assert!(
                w[1].mean_directivity_db <= w[0].mean_directivity_db + slack,
                "directivity must not improve with larger position error: \
                 {:?} then {:?}",
                w[0],
                w[1]
            );
        }
    }

    #[test]
    fn ground_sweep_free_space_row_matches_free_space() {
        let base = base_three();
        let sol = solver::solve_currents(&base, DRIVE).unwrap();
        let pat = solver::far_field(&base, &sol, 2.0, 2.0).unwrap();
        let d_free = metrics::directivity_db(&pat).unwrap();

        let rows = sweep_ground_params(
            &base,
            &GroundSweepSpec { epsilon_r_values: vec![1.0], sigma_values: vec![0.0] },
            2.0,
        )
        .unwrap();
        assert_eq!(rows.len(), 1);
        assert!(
            (rows[0].directivity_db - d_free).abs() < 0.1,
            "vacuum ground row {} vs free space {d_free}",
            rows[0].directivity_db
        );
        assert!(rows[0].beam_error_deg < 1e-9, "free-space beam sits on the horizon");
    }

    #[test]
    fn ground_sweep_degrades_with_conductivity_but_keeps_the_beam() {
        let base = base_three();
        let rows = sweep_ground_params(
            &base,
            &GroundSweepSpec {
                epsilon_r_values: vec![1.5, 8.0],
                sigma_values: vec![1e-4, 1e-3, 1e-2],
            },
            2.0,
        )
        .unwrap();
        assert_eq!(rows.len(), 6);
        for chunk in rows.chunks(3) {
            for w in chunk.windows(2) {
                assert!(
                    w[1].directivity_db <= w[0].directivity_db + 0.3,
                    "directivity must not grow with conductivity: {w:?}"
                );
                assert!(
                    (w[1].beam_error_deg - w[0].beam_error_deg).abs() < 2.0,
                    "conductivity alone must not move the beam: {w:?}"
                );
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        // Every draw respects its configured bounds, whatever the seed.
        #[test]
        fn draws_respect_bounds(
            seed in any::<u64>(),
            trial in 0usize..512,
            pos_max in 0.0f64..2.0,
            tilt_max in 0.0f64..12.0
        ) {
            let base = base_three();
            let s = spec(seed, 512, pos_max, tilt_max, PerturbationTarget::All);
            let p = perturb_geometry(&base, &s, trial).unwrap();
            for (b, q) in base.elements().iter().zip(p.elements()) {
                let dx = q.position_m[0] - b.position_m[0];
                let dy = q.position_m[1] - b.position_m[1];
                prop_assert!(dx.abs() <= pos_max + 1e-12 && dy.abs() <= pos_max + 1e-12);
                let tilt = q.element.axis()[2].clamp(-1.0, 1.0).acos().to_degrees();
                prop_assert!(tilt <= tilt_max + 1e-9);
            }
        }
    }
}
