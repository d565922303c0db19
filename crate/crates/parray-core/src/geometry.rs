//! Scene description: wire elements placed on a ground plane.
//!
//! An [`ArrayGeometry`] is a set of vertical (or nearly vertical) wire
//! elements standing on a common ground, with exactly one element driven
//! at its feed and the rest parasitic. Element feed points sit at a
//! common height above the ground and at arbitrary `(x, y)` positions;
//! the nominal boresight of an end-fire layout is the `+x` axis.

use crate::element::WireElement;
use crate::error::{Error, Result};
use crate::ground::GroundModel;

/// Free-space speed of light, m/s.
pub const C0: f64 = 299_792_458.0;

/// Baseline element radius in wavelengths (0.04 λ diameter masts).
pub const BASELINE_RADIUS_WL: f64 = 0.02;

/// Baseline driven-element length in wavelengths (a 0.26 λ mast and its
/// equivalent center-fed dipole of twice that length).
pub const BASELINE_DRIVEN_LEN_WL: f64 = 0.52;

/// Baseline reflector length in wavelengths.
pub const BASELINE_REFLECTOR_LEN_WL: f64 = 0.52;

/// Baseline director length in wavelengths. Directors must sit on the
/// capacitive side of resonance to pull the beam forward; at this wire
/// radius that means the short end of the mast-height band.
pub const BASELINE_DIRECTOR_LEN_WL: f64 = 0.42;

/// Baseline reflector offset behind the driven element, in wavelengths.
pub const BASELINE_REFLECTOR_SPACING_WL: f64 = 0.25;

/// Baseline director-to-director pitch ahead of the driven element, in
/// wavelengths.
pub const BASELINE_DIRECTOR_SPACING_WL: f64 = 0.31;

/// Clearance added between the lowest wire tip and the ground when a
/// scene is built with the default feed height.
pub const DEFAULT_GROUND_CLEARANCE_WL: f64 = 0.04;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Driven,
    Parasitic,
}

/// One element of the array: the wire itself, its feed-point position in
/// the horizontal plane, and whether it is driven.
#[derive(Debug, Clone)]
pub struct PlacedElement {
    pub element: WireElement,
    /// Feed-point `(x, y)` in meters.
    pub position_m: [f64; 2],
    pub role: Role,
}

impl PlacedElement {
    pub fn driven(element: WireElement, position_m: [f64; 2]) -> Self {
        Self { element, position_m, role: Role::Driven }
    }

    pub fn parasitic(element: WireElement, position_m: [f64; 2]) -> Self {
        Self { element, position_m, role: Role::Parasitic }
    }
}

#[derive(Debug, Clone)]
pub struct ArrayGeometry {
    elements: Vec<PlacedElement>,
    frequency_hz: f64,
    wavelength_m: f64,
    feed_height_m: f64,
    ground: GroundModel,
}

impl ArrayGeometry {
    /// Builds and validates a scene. The wavelength is derived from the
    /// frequency (`λ = c/f`), so the two can never disagree.
    ///
    /// Validation enforces: a positive finite frequency; at least one
    /// element, exactly one of them driven; every element inside the
    /// model's length band; pairwise lateral separation greater than the
    /// summed wire radii; and, over a homogeneous ground, feed height
    /// large enough that no wire tip touches the surface.
    pub fn new(
        elements: Vec<PlacedElement>,
        frequency_hz: f64,
        feed_height_m: f64,
        ground: GroundModel,
    ) -> Result<Self> {
        if !(frequency_hz.is_finite() && frequency_hz > 0.0) {
            return Err(Error::Config(format!(
                "frequency must be positive and finite, got {frequency_hz} Hz"
            )));
        }
        let wavelength_m = C0 / frequency_hz;
        if elements.is_empty() {
            return Err(Error::Config("array has no elements".into()));
        }
        let driven = elements.iter().filter(|e| e.role == Role::Driven).count();
        if driven != 1 {
            return Err(Error::Config(format!(
                "array must have exactly one driven element, found {driven}"
            )));
        }
        if !(feed_height_m.is_finite() && feed_height_m >= 0.0) {
            return Err(Error::Config(format!(
                "feed height must be ≥ 0, got {feed_height_m} m"
            )));
        }
        for (i, p) in elements.iter().enumerate() {
            if !(p.position_m[0].is_finite() && p.position_m[1].is_finite()) {
                return Err(Error::Config(format!("element {i} has a non-finite position")));
            }
            crate::emf::check_length_band(p.element.length_m(), wavelength_m)?;
        }
        for i in 0..elements.len() {
            for j in (i + 1)..elements.len() {
                let dx = elements[i].position_m[0] - elements[j].position_m[0];
                let dy = elements[i].position_m[1] - elements[j].position_m[1];
                let d = dx.hypot(dy);
                let min = elements[i].element.radius_m() + elements[j].element.radius_m();
                if d <= min {
                    return Err(Error::Geometry(format!(
                        "elements {i} and {j} overlap: lateral separation {d:.6} m \
                         is not greater than the summed wire radii {min:.6} m"
                    )));
                }
            }
        }
        if !ground.is_free_space() {
            for (i, p) in elements.iter().enumerate() {
                let reach = p.element.length_m() / 2.0;
                if feed_height_m < reach {
                    return Err(Error::Geometry(format!(
                        "element {i} pierces the ground: feed height {feed_height_m:.4} m \
                         is below its half-length {reach:.4} m"
                    )));
                }
            }
        }
        Ok(Self { elements, frequency_hz, wavelength_m, feed_height_m, ground })
    }

    pub fn elements(&self) -> &[PlacedElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn frequency_hz(&self) -> f64 {
        self.frequency_hz
    }

    pub fn wavelength_m(&self) -> f64 {
        self.wavelength_m
    }

    pub fn feed_height_m(&self) -> f64 {
        self.feed_height_m
    }

    pub fn ground(&self) -> &GroundModel {
        &self.ground
    }

    pub fn driven_index(&self) -> usize {
        self.elements
            .iter()
            .position(|e| e.role == Role::Driven)
            .expect("validated: exactly one driven element")
    }

    /// Lateral separation between elements `i` and `j`, meters.
    pub fn separation_m(&self, i: usize, j: usize) -> f64 {
        let dx = self.elements[i].position_m[0] - self.elements[j].position_m[0];
        let dy = self.elements[i].position_m[1] - self.elements[j].position_m[1];
        dx.hypot(dy)
    }

    /// Returns a copy with one element's wire replaced (same position and
    /// role). Re-validates the scene.
    pub fn with_element(&self, index: usize, element: WireElement) -> Result<Self> {
        if index >= self.elements.len() {
            return Err(Error::Config(format!(
                "element index {index} out of range (array has {})",
                self.elements.len()
            )));
        }
        let mut elements = self.elements.clone();
        elements[index].element = element;
        Self::new(elements, self.frequency_hz, self.feed_height_m, self.ground)
    }

    /// Returns a copy with every element repositioned/retilted per the
    /// supplied list (same roles and wires unless retilted). Used by the
    /// perturbation studies.
    pub fn with_placements(&self, elements: Vec<PlacedElement>) -> Result<Self> {
        Self::new(elements, self.frequency_hz, self.feed_height_m, self.ground)
    }

    /// Returns a copy over a different ground. Re-validates clearance,
    /// since homogeneous ground demands the wires stay above it.
    pub fn with_ground(&self, ground: GroundModel) -> Result<Self> {
        Self::new(self.elements.clone(), self.frequency_hz, self.feed_height_m, ground)
    }
}

/// Feed height that clears every wire tip by [`DEFAULT_GROUND_CLEARANCE_WL`].
pub fn default_feed_height_m(max_length_m: f64, wavelength_m: f64) -> f64 {
    max_length_m / 2.0 + DEFAULT_GROUND_CLEARANCE_WL * wavelength_m
}

/// Scene containing only `geom`'s driven element, unchanged in wire,
/// position, height, and ground — the reference radiator for
/// equal-power relative-gain measurements against `geom`.
pub fn lone_driven_reference(geom: &ArrayGeometry) -> Result<ArrayGeometry> {
    let driven = geom.elements()[geom.driven_index()].clone();
    ArrayGeometry::new(vec![driven], geom.frequency_hz(), geom.feed_height_m(), *geom.ground())
}

/// A single driven element — the reference radiator for relative-gain
/// comparisons.
pub fn single_driven(
    frequency_hz: f64,
    length_wl: f64,
    ground: GroundModel,
) -> Result<ArrayGeometry> {
    let wl = C0 / frequency_hz;
    let e = WireElement::new(length_wl * wl, BASELINE_RADIUS_WL * wl)?;
    let h = default_feed_height_m(e.length_m(), wl);
    ArrayGeometry::new(vec![PlacedElement::driven(e, [0.0, 0.0])], frequency_hz, h, ground)
}

/// Driven element at the origin plus one parasitic element placed at
/// `(-spacing, 0)`, so the array's forward direction is `+x` when the
/// parasitic acts as a reflector.
pub fn two_element(
    frequency_hz: f64,
    driven_len_wl: f64,
    parasitic_len_wl: f64,
    spacing_wl: f64,
    radius_wl: f64,
    ground: GroundModel,
) -> Result<ArrayGeometry> {
    let wl = C0 / frequency_hz;
    let driven = WireElement::new(driven_len_wl * wl, radius_wl * wl)?;
    let parasitic = WireElement::new(parasitic_len_wl * wl, radius_wl * wl)?;
    let h = default_feed_height_m(driven.length_m().max(parasitic.length_m()), wl);
    ArrayGeometry::new(
        vec![
            PlacedElement::driven(driven, [0.0, 0.0]),
            PlacedElement::parasitic(parasitic, [-spacing_wl * wl, 0.0]),
        ],
        frequency_hz,
        h,
        ground,
    )
}

/// Reflector–driven–director three-element beam with baseline spacings.
pub fn baseline_three_element(frequency_hz: f64, ground: GroundModel) -> Result<ArrayGeometry> {
    let wl = C0 / frequency_hz;
    let radius = BASELINE_RADIUS_WL * wl;
    let reflector = WireElement::new(BASELINE_REFLECTOR_LEN_WL * wl, radius)?;
    let driven = WireElement::new(BASELINE_DRIVEN_LEN_WL * wl, radius)?;
    let director = WireElement::new(BASELINE_DIRECTOR_LEN_WL * wl, radius)?;
    let h = default_feed_height_m(BASELINE_REFLECTOR_LEN_WL * wl, wl);
    ArrayGeometry::new(
        vec![
            PlacedElement::parasitic(reflector, [-BASELINE_REFLECTOR_SPACING_WL * wl, 0.0]),
            PlacedElement::driven(driven, [0.0, 0.0]),
            PlacedElement::parasitic(director, [BASELINE_DIRECTOR_SPACING_WL * wl, 0.0]),
        ],
        frequency_hz,
        h,
        ground,
    )
}

/// The five-element baseline beam: one reflector behind the driven
/// element and three equally pitched directors ahead of it.
pub fn baseline_five_element(frequency_hz: f64, ground: GroundModel) -> Result<ArrayGeometry> {
    let wl = C0 / frequency_hz;
    let radius = BASELINE_RADIUS_WL * wl;
    let reflector = WireElement::new(BASELINE_REFLECTOR_LEN_WL * wl, radius)?;
    let driven = WireElement::new(BASELINE_DRIVEN_LEN_WL * wl, radius)?;
    let director = WireElement::new(BASELINE_DIRECTOR_LEN_WL * wl, radius)?;
    let h = default_feed_height_m(BASELINE_REFLECTOR_LEN_WL * wl, wl);
    let pitch = BASELINE_DIRECTOR_SPACING_WL * wl;
    ArrayGeometry::new(
        vec![
            PlacedElement::parasitic(reflector, [-BASELINE_REFLECTOR_SPACING_WL * wl, 0.0]),
            PlacedElement::driven(driven, [0.0, 0.0]),
            PlacedElement::parasitic(director.clone(), [pitch, 0.0]),
            PlacedElement::parasitic(director.clone(), [2.0 * pitch, 0.0]),
            PlacedElement::parasitic(director, [3.0 * pitch, 0.0]),
        ],
        frequency_hz,
        h,
        ground,
    )
}
