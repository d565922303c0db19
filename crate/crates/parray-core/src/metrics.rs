//! Pattern metrics: directivity, beam direction, beamwidth, side-lobe
//! level, and equal-power gain comparisons.

use crate::error::{Error, Result};
use crate::pattern::RadiationPattern;

/// Half-power drop, `10·log₁₀(½)` dB.
const HALF_POWER_DB: f64 = -3.010_299_956_639_812;

/// Plateau extent (degrees) beyond which a beam direction is flagged
/// ambiguous.
const PLATEAU_LIMIT_DEG: f64 = 10.0;

/// Directivity of a full-sphere pattern in dB relative to isotropic:
/// `10·log₁₀(4π·max U / ∮ U dΩ)`.
///
/// The solid-angle integral treats the sampled power as piecewise linear
/// in `θ` and integrates `linear(θ)·sinθ` exactly per cell (trapezoid in
/// `φ`, which is exact-in-the-limit for the periodic axis). A constant
/// pattern therefore integrates to exactly `4π` on any grid, so the
/// isotropic directivity is 0 dB to machine precision rather than to
/// grid order.
pub fn directivity_db(pat: &RadiationPattern) -> Result<f64> {
    let th = pat.theta_deg();
    let ph = pat.phi_deg();
    let full_sphere = th[0].abs() < 1e-9
        && (th[th.len() - 1] - 180.0).abs() < 1e-9
        && ph[0].abs() < 1e-9
        && (ph[ph.len() - 1] - 360.0).abs() < 1e-9;
    if !full_sphere {
        return Err(Error::Contract(format!(
            "directivity needs a full-sphere grid (θ 0–180°, φ 0–360°), got θ {}–{}°, φ {}–{}°",
            th[0],
            th[th.len() - 1],
            ph[0],
            ph[ph.len() - 1]
        )));
    }

    // Per-sample θ weights: for each cell, ∫ hat(θ)·sinθ dθ in closed
    // form (antiderivative of θ·sinθ is sinθ − θ·cosθ).
    let mut wt = vec![0.0f64; th.len()];
    for i in 0..th.len() - 1 {
        let t0 = th[i].to_radians();
        let t1 = th[i + 1].to_radians();
        let h = t1 - t0;
        let dsin = (t1.sin() - t0.sin()) / h;
        wt[i] += t0.cos() - dsin;
        wt[i + 1] += dsin - t1.cos();
    }
    let mut wp = vec![0.0f64; ph.len()];
    for j in 0..ph.len() - 1 {
        let h = (ph[j + 1] - ph[j]).to_radians();
        wp[j] += 0.5 * h;
        wp[j + 1] += 0.5 * h;
    }

    let mut integral = 0.0;
    for i in 0..th.len() {
        let mut row = 0.0;
        for j in 0..ph.len() {
            row += wp[j] * pat.power_linear(i, j);
        }
        integral += wt[i] * row;
    }
    if !(integral > 0.0) {
        return Err(Error::Numerical(format!(
            "radiated-power integral is {integral:.3e}; pattern is numerically empty"
        )));
    }
    Ok(10.0 * (4.0 * std::f64::consts::PI / integral).log10())
}

/// Interpolated direction of the pattern maximum.
#[derive(Debug, Clone, Copy)]
pub struct BeamDirection {
    /// Azimuth in `(−180°, 180°]`, measured from the `+x` axis.
    pub azimuth_deg: f64,
    /// Polar angle from zenith; `90°` is the horizon.
    pub polar_deg: f64,
    /// Interpolated peak level in normalized dB (grid peak is 0 dB, so
    /// this is ≥ 0 when the true peak falls between samples).
    pub peak_power_db: f64,
    /// True when samples within one part in 10⁹ of the maximum spread
    /// over more than 10° — a plateau rather than a beam.
    pub ambiguous: bool,
}

/// Number of distinct azimuth columns (drops the duplicated 360° column
/// of a full-circle grid).
fn distinct_phi(pat: &RadiationPattern) -> usize {
    let ph = pat.phi_deg();
    let n = ph.len();
    if (ph[n - 1] - ph[0] - 360.0).abs() < 1e-9 {
        n - 1
    } else {
        n
    }
}

fn wrap_azimuth(az: f64) -> f64 {
    let a = az.rem_euclid(360.0);
    if a > 180.0 {
        a - 360.0
    } else {
        a
    }
}

/// Vertex of the parabola through `(−1, pl)`, `(0, p0)`, `(1, pr)`:
/// `(offset in [−½, ½], value − p0)`. Falls back to the center sample
/// when the triple is not concave.
fn parabolic_vertex(pl: f64, p0: f64, pr: f64) -> (f64, f64) {
    let den = pl + pr - 2.0 * p0;
    if den >= -1e-12 {
        return (0.0, 0.0);
    }
    let x = ((pl - pr) / (2.0 * den)).clamp(-0.5, 0.5);
    let value = 0.5 * (pr - pl) * x + 0.5 * den * x * x;
    (x, value)
}

/// Finds the beam: grid argmax (ties resolved toward the smallest
/// azimuth, then the smallest polar angle), refined by separable
/// quadratic interpolation over the 3×3 neighborhood in dB.
pub fn beam_direction(pat: &RadiationPattern) -> BeamDirection {
    let n_t = pat.n_theta();
    let n_p = distinct_phi(pat);
    let th = pat.theta_deg();
    let ph = pat.phi_deg();

    let mut best = f64::NEG_INFINITY;
    let (mut bi, mut bj) = (0usize, 0usize);
    for j in 0..n_p {
        for i in 0..n_t {
            let p = pat.power_linear(i, j);
            if p > best {
                best = p;
                bi = i;
                bj = j;
            }
        }
    }

    // Plateau check: collect near-ties and measure their angular extent.
    let tie_floor = best * (1.0 - 1e-9);
    let mut ties: Vec<(f64, f64)> = Vec::new();
    let mut overflow = false;
    'outer: for i in 0..n_t {
        for j in 0..n_p {
            if pat.power_linear(i, j) >= tie_floor {
                ties.push((th[i], ph[j]));
                if ties.len() > 512 {
                    overflow = true;
                    break 'outer;
                }
            }
        }
    }
    let ambiguous = overflow || {
        let mut extent = 0.0f64;
        for a in 0..ties.len() {
            for b in (a + 1)..ties.len() {
                extent = extent
                    .max(great_circle_deg(ties[a].0, ties[a].1, ties[b].0, ties[b].1));
            }
        }
        extent > PLATEAU_LIMIT_DEG
    };

    // Separable quadratic refinement in dB. Skips an axis at the grid
    // edge or where spacing is locally non-uniform.
    let p0 = pat.power_db(bi, bj);
    let (mut dtheta, mut corr_t) = (0.0, 0.0);
    if bi > 0 && bi + 1 < n_t {
        let h0 = th[bi] - th[bi - 1];
        let h1 = th[bi + 1] - th[bi];
        if (h0 - h1).abs() < 1e-9 {
            let (x, v) = parabolic_vertex(pat.power_db(bi - 1, bj), p0, pat.power_db(bi + 1, bj));
            dtheta = x * h1;
            corr_t = v;
        }
    }
    let (mut dphi, mut corr_p) = (0.0, 0.0);
    if n_p >= 3 {
        let jl = (bj + n_p - 1) % n_p;
        let jr = (bj + 1) % n_p;
        let h = ph[1] - ph[0];
        let uniform = ph.windows(2).all(|w| (w[1] - w[0] - h).abs() < 1e-9);
        if uniform {
            let (x, v) = parabolic_vertex(pat.power_db(bi, jl), p0, pat.power_db(bi, jr));
            dphi = x * h;
            corr_p = v;
        }
    }

    BeamDirection {
        azimuth_deg: wrap_azimuth(ph[bj] + dphi),
        polar_deg: (th[bi] + dtheta).clamp(0.0, 180.0),
        peak_power_db: p0 + corr_t + corr_p,
        ambiguous,
    }
}

/// Great-circle angle in degrees between two directions given as
/// (polar from zenith, azimuth). Evaluated as `atan2(‖a×b‖, a·b)` on
/// unit vectors, which stays accurate where the bare law-of-cosines
/// loses digits (angles near 0° and 180°).
pub fn great_circle_deg(polar_a_deg: f64, az_a_deg: f64, polar_b_deg: f64, az_b_deg: f64) -> f64 {
    let unit = |polar: f64, az: f64| -> [f64; 3] {
        let (st, ct) = (polar.to_radians().sin(), polar.to_radians().cos());
        let (sp, cp) = (az.to_radians().sin(), az.to_radians().cos());
        [st * cp, st * sp, ct]
    };
    let a = unit(polar_a_deg, az_a_deg);
    let b = unit(polar_b_deg, az_b_deg);
    let cross = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    let cross_norm = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
    let dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    cross_norm.atan2(dot).to_degrees()
}

/// Great-circle separation between two beam directions, degrees.
pub fn beam_direction_error_deg(a: &BeamDirection, b: &BeamDirection) -> f64 {
    great_circle_deg(a.polar_deg, a.azimuth_deg, b.polar_deg, b.azimuth_deg)
}

/// Half-power beamwidth of the azimuth cut nearest `theta_deg`, in
/// degrees, with linear-in-dB crossing interpolation. `None` when the
/// cut never falls 3 dB below its own peak (an omnidirectional cut).
pub fn beamwidth_az_deg(pat: &RadiationPattern, theta_deg: f64) -> Option<f64> {
    let i = pat.nearest_theta_index(theta_deg);
    let n_p = distinct_phi(pat);
    if n_p < 3 {
        return None;
    }
    let step = pat.phi_deg()[1] - pat.phi_deg()[0];
    let cut: Vec<f64> = (0..n_p).map(|j| pat.power_db(i, j)).collect();
    let (jmax, peak) =
        cut.iter().enumerate().fold((0, f64::NEG_INFINITY), |acc, (j, &p)| {
            if p > acc.1 {
                (j, p)
            } else {
                acc
            }
        });
    let target = peak + HALF_POWER_DB;
    let walk = |dir: isize| -> Option<f64> {
        for s in 1..n_p as isize {
            let j_prev = (jmax as isize + dir * (s - 1)).rem_euclid(n_p as isize) as usize;
            let j_cur = (jmax as isize + dir * s).rem_euclid(n_p as isize) as usize;
            if cut[j_cur] < target {
                let frac = (cut[j_prev] - target) / (cut[j_prev] - cut[j_cur]);
                return Some((s - 1) as f64 + frac);
            }
        }
        None
    };
    match (walk(1), walk(-1)) {
        (Some(r), Some(l)) => Some((r + l) * step),
        _ => None,
    }
}

/// Highest lobe outside the main lobe, in dB relative to the peak
/// (negative). The main lobe is grown from the peak cell: first the
/// connected region within 3 dB of the peak, then monotone descent down
/// its flanks until the pattern rises again. `None` when the whole
/// sphere drains into the main lobe (a pattern with no side lobes).
pub fn side_lobe_level_db(pat: &RadiationPattern) -> Option<f64> {
    let n_t = pat.n_theta();
    let n_p = distinct_phi(pat);
    let idx = |i: usize, j: usize| i * n_p + j;
    let p: Vec<f64> = (0..n_t)
        .flat_map(|i| (0..n_p).map(move |j| (i, j)))
        .map(|(i, j)| pat.power_db(i, j))
        .collect();

    let mut peak_at = 0usize;
    for k in 1..p.len() {
        if p[k] > p[peak_at] {
            peak_at = k;
        }
    }
    let peak = p[peak_at];

    let mut in_lobe = vec![false; p.len()];
    let mut queue = std::collections::VecDeque::new();
    in_lobe[peak_at] = true;
    queue.push_back(peak_at);
    while let Some(cur) = queue.pop_front() {
        let (i, j) = (cur / n_p, cur % n_p);
        let mut neighbors = Vec::with_capacity(4);
        if i > 0 {
            neighbors.push(idx(i - 1, j));
        }
        if i + 1 < n_t {
            neighbors.push(idx(i + 1, j));
        }
        neighbors.push(idx(i, (j + 1) % n_p));
        neighbors.push(idx(i, (j + n_p - 1) % n_p));
        for nb in neighbors {
            if in_lobe[nb] {
                continue;
            }
            let core = p[nb] >= peak + HALF_POWER_DB;
            let descending = p[nb] <= p[cur] + 1e-12;
            if core || descending {
                in_lobe[nb] = true;
                queue.push_back(nb);
            }
        }
    }

    let mut sll = f64::NEG_INFINITY;
    let mut any_outside = false;
    for k in 0..p.len() {
        if !in_lobe[k] {
            any_outside = true;
            sll = sll.max(p[k]);
        }
    }
    if any_outside {
        Some(sll - peak)
    } else {
        None
    }
}

/// Gain of pattern `a` over pattern `b` in a given direction at equal
/// accepted power: `10·log₁₀[(|E_a|²/P_a)/(|E_b|²/P_b)]` dB, sampled at
/// the nearest grid point of each pattern. Both patterns must carry the
/// drive normalization produced by the solver.
pub fn relative_gain_db(
    a: &RadiationPattern,
    b: &RadiationPattern,
    theta_deg: f64,
    phi_deg: f64,
) -> Result<f64> {
    let norm_a = a.normalization().ok_or_else(|| {
        Error::Contract("first pattern lacks drive normalization; synthesize it via the solver".into())
    })?;
    let norm_b = b.normalization().ok_or_else(|| {
        Error::Contract("second pattern lacks drive normalization; synthesize it via the solver".into())
    })?;
    if !(norm_a.input_power_w > 0.0 && norm_b.input_power_w > 0.0) {
        return Err(Error::Numerical(format!(
            "relative gain needs positive accepted powers, got {} W and {} W",
            norm_a.input_power_w, norm_b.input_power_w
        )));
    }
    let ea = a.field(a.nearest_theta_index(theta_deg), a.nearest_phi_index(phi_deg)).norm();
    let eb = b.field(b.nearest_theta_index(theta_deg), b.nearest_phi_index(phi_deg)).norm();
    if eb == 0.0 {
        return Err(Error::Numerical(format!(
            "reference pattern is null at (θ={theta_deg}°, φ={phi_deg}°)"
        )));
    }
    if ea == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(10.0 * ((ea * ea / norm_a.input_power_w) / (eb * eb / norm_b.input_power_w)).log10())
}
