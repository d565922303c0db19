//! Thin-wire radiating element.

use crate::error::{Error, Result};

/// A straight cylindrical wire element carrying an assumed sinusoidal
/// current. `length_m` is the full end-to-end length: scenes built from
/// ground-mounted masts of height `h` pass `2h`, the equivalent dipole of
/// the mast-plus-image pair.
///
/// Invariants enforced at construction: positive dimensions, thin-wire
/// slenderness `radius < length / 20`, and tilt polar angle in `[0°, 90°)`
/// (an element lying in the ground plane leaves the model's regime).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WireElement {
    length_m: f64,
    radius_m: f64,
    tilt_polar_deg: f64,
    tilt_azimuth_deg: f64,
}

impl WireElement {
    /// Vertical element.
    pub fn new(length_m: f64, radius_m: f64) -> Result<Self> {
        Self::with_tilt(length_m, radius_m, 0.0, 0.0)
    }

    /// Element tilted `tilt_polar_deg` off vertical, leaning toward azimuth
    /// `tilt_azimuth_deg`. A negative polar angle is normalized to a
    /// positive one leaning the opposite way.
    pub fn with_tilt(
        length_m: f64,
        radius_m: f64,
        tilt_polar_deg: f64,
        tilt_azimuth_deg: f64,
    ) -> Result<Self> {
        if !length_m.is_finite() || length_m <= 0.0 {
            return Err(Error::Geometry(format!(
                "element length must be positive and finite, got {length_m} m"
            )));
        }
        if !radius_m.is_finite() || radius_m <= 0.0 {
            return Err(Error::Geometry(format!(
                "element radius must be positive and finite, got {radius_m} m"
            )));
        }
        if radius_m >= length_m / 20.0 {
            return Err(Error::Geometry(format!(
                "thin-wire model requires radius < length/20: radius {radius_m} m vs length {length_m} m"
            )));
        }
        if !tilt_polar_deg.is_finite() || !tilt_azimuth_deg.is_finite() {
            return Err(Error::Geometry("tilt angles must be finite".into()));
        }
        let (mut polar, mut azimuth) = (tilt_polar_deg, tilt_azimuth_deg);
        if polar < 0.0 {
            polar = -polar;
            azimuth += 180.0;
        }
        azimuth = azimuth.rem_euclid(360.0);
        if polar >= 90.0 {
            return Err(Error::Geometry(format!(
                "tilt polar angle must lie in [0°, 90°), got {tilt_polar_deg}°"
            )));
        }
        Ok(Self { length_m, radius_m, tilt_polar_deg: polar, tilt_azimuth_deg: azimuth })
    }

    pub fn length_m(&self) -> f64 {
        self.length_m
    }

    pub fn radius_m(&self) -> f64 {
        self.radius_m
    }

    pub fn tilt_polar_deg(&self) -> f64 {
        self.tilt_polar_deg
    }

    pub fn tilt_azimuth_deg(&self) -> f64 {
        self.tilt_azimuth_deg
    }

    /// Same element with a different tilt.
    pub fn retilted(&self, tilt_polar_deg: f64, tilt_azimuth_deg: f64) -> Result<Self> {
        Self::with_tilt(self.length_m, self.radius_m, tilt_polar_deg, tilt_azimuth_deg)
    }

    /// Same element with a different length.
    pub fn with_length(&self, length_m: f64) -> Result<Self> {
        Self::with_tilt(length_m, self.radius_m, self.tilt_polar_deg, self.tilt_azimuth_deg)
    }

    /// Unit vector along the wire axis (pointing into the upper half-space).
    pub fn axis(&self) -> [f64; 3] {
        let tau = self.tilt_polar_deg.to_radians();
        let beta = self.tilt_azimuth_deg.to_radians();
        [tau.sin() * beta.cos(), tau.sin() * beta.sin(), tau.cos()]
    }
}

/// Angle in radians between two element axes (0 when parallel).
pub fn relative_tilt_rad(a: &WireElement, b: &WireElement) -> f64 {
    let ua = a.axis();
    let ub = b.axis();
    let dot = (ua[0] * ub[0] + ua[1] * ub[1] + ua[2] * ub[2]).clamp(-1.0, 1.0);
    dot.acos()
}
