//! Thin-wire simulator and design optimizer for ground-based parasitic
//! (Yagi–Uda style) antenna arrays.
//!
//! The model chain, bottom to top:
//!
//! * **Element impedances** — induced-EMF method on assumed sinusoidal
//!   current distributions: an adaptive Gauss–Legendre reaction integral
//!   for self and mutual impedances of parallel (optionally vertically
//!   staggered) elements, with the classical Si/Ci closed form kept as a
//!   thin-wire cross-check.
//! * **Ground** — image theory over a homogeneous half-space with the
//!   angle-dependent vertical-polarization Fresnel reflection coefficient;
//!   exact per-direction reflection in the far field, one fixed
//!   characteristic-angle image term in the impedance matrix.
//! * **Array solve** — dense complex impedance matrix, one driven element,
//!   parasitics shorted; direct solve for the element currents.
//! * **Far field** — coherent superposition of element patterns on a
//!   (θ, φ) grid, plus directivity, beam direction, beamwidth and
//!   side-lobe metrics, and closed-form two-element gain for cross-checks.
//! * **Studies** — seeded Monte Carlo over placement/orientation errors,
//!   ground-parameter sweeps, and a genetic-algorithm redesign loop that
//!   re-tunes spacings and lengths for a given ground.
//!
//! Conventions: SI units and degrees at the public surface; θ is the polar
//! angle from zenith, φ the azimuth from the +x array axis; directivity is
//! dB relative to isotropic. Elements are vertical thin wires unless given
//! a small tilt; tilts enter mutual impedances through an axis-projection
//! factor and the far field through each element's own pattern, a
//! small-angle treatment adequate for the ≤10° misalignments studied here.

pub mod config;
pub mod element;
pub mod emf;
pub mod error;
pub mod ga;
pub mod geometry;
pub mod ground;
pub mod metrics;
pub mod pattern;
pub mod sici;
pub mod solver;
pub mod uncertainty;

pub use element::WireElement;
pub use error::{Error, Result};
pub use geometry::{ArrayGeometry, PlacedElement, Role};
pub use ground::GroundModel;
pub use pattern::RadiationPattern;
pub use solver::{CurrentSolution, ImpedanceMatrix};

/// Caps the worker pool used by parallel studies; `0` keeps the automatic
/// per-CPU count. Call once, before the first parallel operation —
/// later calls cannot resize an already-started pool and report a
/// configuration error.
pub fn configure_threads(n: usize) -> Result<()> {
    if n == 0 {
        return Ok(());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Config(format!("could not size the thread pool: {e}")))
}
