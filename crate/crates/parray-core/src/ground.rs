//! Homogeneous lossy half-space under the array.
//!
//! The ground enters twice: per-direction vertical-polarization Fresnel
//! reflection of the two-ray far field, and a fixed characteristic-angle
//! image term perturbing the impedance matrix. Both derive from the
//! complex relative permittivity `ε = εr − jσ/(ωε₀)`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Vacuum permittivity, F/m.
pub const EPSILON0: f64 = 8.854_187_8128e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GroundModel {
    FreeSpace,
    /// Semi-infinite homogeneous ground with relative permittivity
    /// `epsilon_r` and conductivity `sigma_s_per_m` (S/m).
    Homogeneous { epsilon_r: f64, sigma_s_per_m: f64 },
}

impl GroundModel {
    pub fn homogeneous(epsilon_r: f64, sigma_s_per_m: f64) -> Result<Self> {
        if !epsilon_r.is_finite() || epsilon_r < 1.0 {
            return Err(Error::Config(format!(
                "ground relative permittivity must be ≥ 1, got {epsilon_r}"
            )));
        }
        if !sigma_s_per_m.is_finite() || sigma_s_per_m < 0.0 {
            return Err(Error::Config(format!(
                "ground conductivity must be ≥ 0 S/m, got {sigma_s_per_m}"
            )));
        }
        // Vacuum parameters describe no interface at all; degenerate to the
        // exact free-space limit rather than a zero-reflection half space
        // (the half-space model still clips radiation to the upper
        // hemisphere, which would be wrong here).
        if epsilon_r == 1.0 && sigma_s_per_m == 0.0 {
            return Ok(Self::FreeSpace);
        }
        Ok(Self::Homogeneous { epsilon_r, sigma_s_per_m })
    }

    pub fn is_free_space(&self) -> bool {
        matches!(self, Self::FreeSpace)
    }

    /// Complex relative permittivity at `frequency_hz`.
    pub fn complex_permittivity(&self, frequency_hz: f64) -> Complex64 {
        match *self {
            Self::FreeSpace => Complex64::new(1.0, 0.0),
            Self::Homogeneous { epsilon_r, sigma_s_per_m } => {
                let omega = 2.0 * std::f64::consts::PI * frequency_hz;
                Complex64::new(epsilon_r, -sigma_s_per_m / (omega * EPSILON0))
            }
        }
    }

    /// Vertical-polarization Fresnel reflection coefficient for a ray at
    /// grazing angle `grazing_rad` above the surface:
    ///
    /// ```text
    /// Γᵥ(ψ) = (ε·sinψ − √(ε − cos²ψ)) / (ε·sinψ + √(ε − cos²ψ))
    /// ```
    ///
    /// Free space returns 0; every ground returns −1 at grazing and
    /// approaches +1 everywhere as σ → ∞ (perfect conductor).
    pub fn reflection_vertical(&self, frequency_hz: f64, grazing_rad: f64) -> Complex64 {
        if self.is_free_space() {
            return Complex64::new(0.0, 0.0);
        }
        let eps = self.complex_permittivity(frequency_hz);
        let (sin_psi, cos_psi) = (grazing_rad.sin(), grazing_rad.cos());
        let root = (eps - cos_psi * cos_psi).sqrt();
        (eps * sin_psi - root) / (eps * sin_psi + root)
    }

    /// Reflection coefficient at normal incidence, `(√ε − 1)/(√ε + 1)`:
    /// the fixed characteristic angle used for impedance-matrix image
    /// terms (the element-to-own-image specular direction).
    pub fn reflection_normal_incidence(&self, frequency_hz: f64) -> Complex64 {
        if self.is_free_space() {
            return Complex64::new(0.0, 0.0);
        }
        let root = self.complex_permittivity(frequency_hz).sqrt();
        (root - 1.0) / (root + 1.0)
    }
}
