//! Far-field pattern sampled on a regular spherical grid.
//!
//! Angles follow the physics convention used throughout the crate:
//! `θ` is the polar angle from zenith (0° = straight up, 90° = horizon)
//! and `φ` is azimuth from the `+x` axis. Samples are stored row-major,
//! one row per `θ`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Floor applied to normalized power levels so exact nulls stay finite.
pub const DB_FLOOR: f64 = -300.0;

/// Drive bookkeeping carried by solver-produced patterns, required for
/// any comparison of absolute levels between two patterns.
#[derive(Debug, Clone, Copy)]
pub struct DriveNormalization {
    pub drive_voltage: Complex64,
    pub driven_current: Complex64,
    /// Real power accepted at the feed, `½·Re(V·I*)`, watts.
    pub input_power_w: f64,
}

#[derive(Debug, Clone)]
pub struct RadiationPattern {
    theta_deg: Vec<f64>,
    phi_deg: Vec<f64>,
    field: Vec<Complex64>,
    power_db: Vec<f64>,
    peak_field_norm: f64,
    normalization: Option<DriveNormalization>,
}

impl RadiationPattern {
    /// Wraps a sampled complex far field. `field` must hold
    /// `theta_deg.len() × phi_deg.len()` samples in row-major order;
    /// both angle vectors must be finite and strictly increasing, and
    /// the field must not vanish identically.
    pub fn from_field(
        theta_deg: Vec<f64>,
        phi_deg: Vec<f64>,
        field: Vec<Complex64>,
        normalization: Option<DriveNormalization>,
    ) -> Result<Self> {
        check_axis("theta", &theta_deg)?;
        check_axis("phi", &phi_deg)?;
        if field.len() != theta_deg.len() * phi_deg.len() {
            return Err(Error::Contract(format!(
                "field has {} samples but the grid is {} × {}",
                field.len(),
                theta_deg.len(),
                phi_deg.len()
            )));
        }
        if field.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Numerical("far field contains non-finite samples".into()));
        }
        let peak_field_norm = field.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
        if peak_field_norm <= 0.0 {
            return Err(Error::Numerical("far field is identically zero".into()));
        }
        let power_db = field
            .iter()
            .map(|c| {
                let ratio = c.norm() / peak_field_norm;
                if ratio <= 0.0 {
                    DB_FLOOR
                } else {
                    (20.0 * ratio.log10()).max(DB_FLOOR)
                }
            })
            .collect();
        Ok(Self { theta_deg, phi_deg, field, power_db, peak_field_norm, normalization })
    }

    /// Builds the inclusive `[0°, 180°] × [0°, 360°]` grid for the given
    /// steps; each step must divide its span exactly.
    pub fn grid_from_steps(theta_step_deg: f64, phi_step_deg: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        let axis = |span: f64, step: f64, name: &str| -> Result<Vec<f64>> {
            if !(step.is_finite() && step > 0.0) {
                return Err(Error::Config(format!("{name} step must be positive, got {step}")));
            }
            let n = span / step;
            if (n - n.round()).abs() > 1e-9 {
                return Err(Error::Config(format!(
                    "{name} step {step}° must divide {span}° exactly"
                )));
            }
            let n = n.round() as usize;
            Ok((0..=n).map(|i| i as f64 * step).collect())
        };
        Ok((axis(180.0, theta_step_deg, "theta")?, axis(360.0, phi_step_deg, "phi")?))
    }

    pub fn theta_deg(&self) -> &[f64] {
        &self.theta_deg
    }

    pub fn phi_deg(&self) -> &[f64] {
        &self.phi_deg
    }

    pub fn n_theta(&self) -> usize {
        self.theta_deg.len()
    }

    pub fn n_phi(&self) -> usize {
        self.phi_deg.len()
    }

    /// Complex field at grid indices `(i_theta, i_phi)`.
    pub fn field(&self, i_theta: usize, i_phi: usize) -> Complex64 {
        self.field[i_theta * self.phi_deg.len() + i_phi]
    }

    /// Normalized power in dB (peak = 0, floored at [`DB_FLOOR`]).
    pub fn power_db(&self, i_theta: usize, i_phi: usize) -> f64 {
        self.power_db[i_theta * self.phi_deg.len() + i_phi]
    }

    /// Normalized linear power, `|E|²/max|E|²`.
    pub fn power_linear(&self, i_theta: usize, i_phi: usize) -> f64 {
        let r = self.field[i_theta * self.phi_deg.len() + i_phi].norm() / self.peak_field_norm;
        r * r
    }

    /// Largest field magnitude on the grid (the normalization reference).
    pub fn peak_field_norm(&self) -> f64 {
        self.peak_field_norm
    }

    pub fn normalization(&self) -> Option<&DriveNormalization> {
        self.normalization.as_ref()
    }

    /// Index of the grid row nearest to `theta_deg`.
    pub fn nearest_theta_index(&self, theta_deg: f64) -> usize {
        nearest(&self.theta_deg, theta_deg)
    }

    /// Index of the grid column nearest to `phi_deg` (azimuth wrapped to
    /// the grid's `[0°, 360°]` range).
    pub fn nearest_phi_index(&self, phi_deg: f64) -> usize {
        nearest(&self.phi_deg, phi_deg.rem_euclid(360.0))
    }

    /// Normalized power along the azimuth cut at the grid row nearest to
    /// `theta_deg`, as `(φ, dB)` pairs.
    pub fn azimuth_cut(&self, theta_deg: f64) -> Vec<(f64, f64)> {
        let i = self.nearest_theta_index(theta_deg);
        self.phi_deg.iter().enumerate().map(|(j, &p)| (p, self.power_db(i, j))).collect()
    }
}

fn check_axis(name: &str, v: &[f64]) -> Result<()> {
    if v.len() < 2 {
        return Err(Error::Contract(format!("{name} axis needs at least 2 samples")));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::Contract(format!("{name} axis contains non-finite angles")));
    }
    if v.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Contract(format!("{name} axis must be strictly increasing")));
    }
    Ok(())
}

fn nearest(axis: &[f64], value: f64) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, &a) in axis.iter().enumerate() {
        let d = (a - value).abs();
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform_field(n_theta: usize, n_phi: usize) -> Vec<Complex64> {
        vec![Complex64::new(1.0, 0.0); n_theta * n_phi]
    }

    #[test]
    fn one_degree_grid_has_expected_shape() {
        let (t, p) = RadiationPattern::grid_from_steps(1.0, 1.0).unwrap();
        assert_eq!(t.len(), 181);
        assert_eq!(p.len(), 361);
        assert_eq!(t[0], 0.0);
        assert_eq!(t[180], 180.0);
        assert_eq!(p[360], 360.0);
    }

    #[test]
    fn steps_must_divide_the_sphere() {
        assert!(RadiationPattern::grid_from_steps(7.0, 1.0).is_err(), "7 ∤ 180");
        assert!(RadiationPattern::grid_from_steps(1.0, 11.0).is_err(), "11 ∤ 360");
        assert!(RadiationPattern::grid_from_steps(0.5, 2.0).is_ok());
    }

    #[test]
    fn normalized_power_peaks_at_zero_db() {
        let (t, p) = RadiationPattern::grid_from_steps(30.0, 60.0).unwrap();
        let mut f = uniform_field(t.len(), p.len());
        f[8] = Complex64::new(2.0, 0.0); // one sample 6 dB above the rest
        let pat = RadiationPattern::from_field(t, p, f, None).unwrap();
        let mut max = f64::NEG_INFINITY;
        for i in 0..pat.n_theta() {
            for j in 0..pat.n_phi() {
                max = max.max(pat.power_db(i, j));
            }
        }
        assert_eq!(max, 0.0, "peak of a normalized pattern is exactly 0 dB");
        assert!((pat.power_db(0, 0) + 6.020_599_913).abs() < 1e-9);
    }

    #[test]
    fn exact_nulls_floor_instead_of_diverging() {
        let (t, p) = RadiationPattern::grid_from_steps(90.0, 180.0).unwrap();
        let mut f = uniform_field(t.len(), p.len());
        f[0] = Complex64::new(0.0, 0.0);
        let pat = RadiationPattern::from_field(t, p, f, None).unwrap();
        assert_eq!(pat.power_db(0, 0), DB_FLOOR);
    }

    #[test]
    fn rejects_malformed_grids() {
        let f3 = vec![Complex64::new(1.0, 0.0); 3];
        assert!(RadiationPattern::from_field(
            vec![0.0, 90.0],
            vec![0.0, 90.0],
            f3.clone(),
            None
        )
        .is_err());
        assert!(RadiationPattern::from_field(vec![90.0, 0.0], vec![0.0, 90.0, 180.0], f3, None)
            .is_err());
        let zero = vec![Complex64::new(0.0, 0.0); 4];
        assert!(
            RadiationPattern::from_field(vec![0.0, 90.0], vec![0.0, 180.0], zero, None).is_err(),
            "identically zero field is a solver bug, not a pattern"
        );
    }

    #[test]
    fn nearest_index_wraps_azimuth() {
        let (t, p) = RadiationPattern::grid_from_steps(10.0, 10.0).unwrap();
        let n = t.len() * p.len();
        let pat =
            RadiationPattern::from_field(t, p, vec![Complex64::new(1.0, 0.0); n], None).unwrap();
        assert_eq!(pat.nearest_phi_index(-10.0), 35, "−10° wraps to 350°");
        assert_eq!(pat.nearest_theta_index(94.9), 9);
    }
}
