//! Induced-EMF impedances for thin-wire elements with sinusoidal currents.
//!
//! Self impedance uses the canonical Si/Ci closed form (current-maximum
//! reference, field evaluated on the wire surface). Mutual impedance
//! evaluates the reaction integral
//!
//! ```text
//! Z_ab = (jη/4π) ∫_b G_a(z) · sin(k(l_b − |z − z_b|)) dz
//! G_a(z) = e^(−jkR₁)/R₁ + e^(−jkR₂)/R₂ − 2cos(k·l_a)·e^(−jkR₀)/R₀
//! ```
//!
//! (`R₀,R₁,R₂` measured from element a's center and ends) with panelled
//! Gauss–Legendre quadrature, which covers unequal lengths, lateral
//! separation, and vertical stagger — the last is what ground images need.
//! All impedances are referred to the current maximum of the sinusoidal
//! distribution; the sinusoidal assumption itself restricts element
//! lengths to `0.05 < L/λ < 0.75`.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::element::{relative_tilt_rad, WireElement};
use crate::error::{Error, Result};
use crate::sici::{cosine_integral, sine_integral, EULER_GAMMA};

/// Free-space wave impedance η₀ in ohms (exact physical value, not 120π).
pub const ETA0: f64 = 376.730_313_668;

/// Sinusoidal-current validity band for `length / wavelength`.
pub const LENGTH_BAND: (f64, f64) = (0.05, 0.75);

fn check_wavelength(wavelength_m: f64) -> Result<()> {
    if !wavelength_m.is_finite() || wavelength_m <= 0.0 {
        return Err(Error::Domain(format!(
            "wavelength must be positive and finite, got {wavelength_m} m"
        )));
    }
    Ok(())
}

/// Rejects element lengths outside the sinusoidal-current validity band.
pub(crate) fn check_length_band(length_m: f64, wavelength_m: f64) -> Result<()> {
    let ratio = length_m / wavelength_m;
    if !(LENGTH_BAND.0..LENGTH_BAND.1).contains(&ratio) {
        return Err(Error::ModelValidity(format!(
            "sinusoidal-current impedances are valid for {} < length/wavelength < {}, got {ratio:.4}",
            LENGTH_BAND.0, LENGTH_BAND.1
        )));
    }
    Ok(())
}

/// Self impedance of a center-fed element, referred to the current maximum:
/// the reaction integral of the element's own field evaluated on the wire
/// surface. Exact for the sinusoidal-current model at any slenderness, and
/// consistent with the mutual-impedance path (same integration engine).
pub fn self_impedance(element: &WireElement, wavelength_m: f64) -> Result<Complex64> {
    mutual_impedance_staggered(
        element.length_m(),
        element.length_m(),
        element.radius_m(),
        0.0,
        wavelength_m,
    )
}

/// Classical thin-wire closed form for the self impedance in sine/cosine
/// integrals. Matches [`self_impedance`] to well under an ohm for
/// `radius ≲ 1e-3·λ` (the reactance approximation degrades roughly as
/// `(η/4π)·(2·radius/length)·|sin(kL)|`); the λ/2 element returns the
/// classic 73.1 + j42.5 Ω.
pub fn self_impedance_closed_form(element: &WireElement, wavelength_m: f64) -> Result<Complex64> {
    check_wavelength(wavelength_m)?;
    check_length_band(element.length_m(), wavelength_m)?;

    let k = 2.0 * std::f64::consts::PI / wavelength_m;
    let l = element.length_m();
    let a_radius = element.radius_m();
    let kl = k * l;
    let kl2 = 2.0 * kl;

    let si_kl = sine_integral(kl)?;
    let si_2kl = sine_integral(kl2)?;
    let ci_kl = cosine_integral(kl)?;
    let ci_2kl = cosine_integral(kl2)?;
    let ci_surface = cosine_integral(2.0 * k * a_radius * a_radius / l)?;

    let r = ETA0 / (2.0 * std::f64::consts::PI)
        * (EULER_GAMMA + kl.ln() - ci_kl
            + 0.5 * kl.sin() * (si_2kl - 2.0 * si_kl)
            + 0.5 * kl.cos() * (EULER_GAMMA + (kl / 2.0).ln() + ci_2kl - 2.0 * ci_kl));
    let x = ETA0 / (4.0 * std::f64::consts::PI)
        * (2.0 * si_kl + kl.cos() * (2.0 * si_kl - si_2kl)
            - kl.sin() * (2.0 * ci_kl - ci_2kl - ci_surface));

    Ok(Complex64::new(r, x))
}

/// Mutual impedance between two elements whose feed centers sit at the same
/// height, a lateral distance `separation_m` apart. Tilted elements are
/// handled by computing the parallel (vertical-projection) coupling and
/// scaling by the cosine of the angle between the two axes.
pub fn mutual_impedance(
    a: &WireElement,
    b: &WireElement,
    separation_m: f64,
    wavelength_m: f64,
) -> Result<Complex64> {
    if separation_m <= a.radius_m() + b.radius_m() {
        return Err(Error::Geometry(format!(
            "elements overlap: separation {separation_m} m is not beyond the summed radii {} m",
            a.radius_m() + b.radius_m()
        )));
    }
    let projection = relative_tilt_rad(a, b).cos();
    let z = mutual_impedance_staggered(
        a.length_m(),
        b.length_m(),
        separation_m,
        0.0,
        wavelength_m,
    )?;
    Ok(z * projection)
}

/// Mutual impedance between parallel elements of full lengths `len_a_m`,
/// `len_b_m`, lateral separation `rho_m`, with b's center `dz_m` above a's.
/// `rho_m = 0` (collinear, as for an element and its own ground image) is
/// allowed so long as the spans do not overlap.
pub fn mutual_impedance_staggered(
    len_a_m: f64,
    len_b_m: f64,
    rho_m: f64,
    dz_m: f64,
    wavelength_m: f64,
) -> Result<Complex64> {
    check_wavelength(wavelength_m)?;
    check_length_band(len_a_m, wavelength_m)?;
    check_length_band(len_b_m, wavelength_m)?;
    if !rho_m.is_finite() || rho_m < 0.0 {
        return Err(Error::Geometry(format!("lateral separation must be ≥ 0, got {rho_m} m")));
    }
    let half_a = len_a_m / 2.0;
    let half_b = len_b_m / 2.0;
    if rho_m == 0.0 && dz_m.abs() < half_a + half_b {
        return Err(Error::Geometry(format!(
            "collinear elements overlap: |stagger| {} m is inside the summed half-lengths {} m",
            dz_m.abs(),
            half_a + half_b
        )));
    }

    // Canonical argument order so that Z_ab and Z_ba run the identical
    // float program: reciprocity then holds bit-for-bit.
    if len_a_m > len_b_m || (len_a_m == len_b_m && dz_m < 0.0) {
        return mutual_impedance_staggered(len_b_m, len_a_m, rho_m, -dz_m, wavelength_m);
    }

    let k = 2.0 * std::f64::consts::PI / wavelength_m;
    let kernel = |z: f64| -> Complex64 {
        let r0 = (rho_m * rho_m + z * z).sqrt();
        let r1 = (rho_m * rho_m + (z - half_a) * (z - half_a)).sqrt();
        let r2 = (rho_m * rho_m + (z + half_a) * (z + half_a)).sqrt();
        let green = |r: f64| Complex64::from_polar(1.0 / r, -k * r);
        green(r1) + green(r2) - 2.0 * (k * half_a).cos() * green(r0)
    };

    // Panel widths track the distance to the kernel's source abscissae
    // (a's center and ends), resolving the 1/R variation even for the
    // surface-kernel self case and for near-touching collinear images:
    // bisect any panel wider than twice its clearance from the source set.
    let sources = [-half_a, 0.0, half_a];
    let clearance = |u0: f64, u1: f64| -> f64 {
        sources
            .iter()
            .map(|&p| {
                let ax = if p < u0 {
                    u0 - p
                } else if p > u1 {
                    p - u1
                } else {
                    0.0
                };
                (rho_m * rho_m + ax * ax).sqrt()
            })
            .fold(f64::INFINITY, f64::min)
    };
    let floor = half_b / 16_384.0;
    let integrand = |z: f64| kernel(z) * (k * (half_b - (z - dz_m).abs())).sin();

    let mut acc = Complex64::new(0.0, 0.0);
    // Each half of element b separately: the current has a slope kink at
    // the feed. Panels split at interior source projections first.
    for (lo, hi) in [(dz_m - half_b, dz_m), (dz_m, dz_m + half_b)] {
        let mut cuts: Vec<f64> = vec![lo, hi];
        cuts.extend(sources.iter().copied().filter(|p| (lo..hi).contains(p)));
        cuts.sort_by(f64::total_cmp);
        for pair in cuts.windows(2) {
            let mut stack = vec![(pair[0], pair[1])];
            while let Some((u0, u1)) = stack.pop() {
                let width = u1 - u0;
                if width > floor && width > 2.0 * clearance(u0, u1) {
                    let mid = 0.5 * (u0 + u1);
                    stack.push((u0, mid));
                    stack.push((mid, u1));
                } else {
                    acc += gauss_legendre_c(&integrand, u0, u1);
                }
            }
        }
    }

    Ok(Complex64::new(0.0, ETA0 / (4.0 * std::f64::consts::PI)) * acc)
}

/// Fixed-order Gauss–Legendre rule used by the reaction integral.
const GL_ORDER: usize = 24;

fn gl_nodes() -> &'static (Vec<f64>, Vec<f64>) {
    static NODES: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    NODES.get_or_init(|| {
        // Newton iteration on P_n with the Chebyshev-like initial guess.
        let n = GL_ORDER;
        let mut xs = vec![0.0; n];
        let mut ws = vec![0.0; n];
        for i in 0..n {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0f64, x);
                for j in 2..=n {
                    let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let step = p1 / dp;
                x -= step;
                if step.abs() < 1e-15 {
                    break;
                }
            }
            xs[i] = x;
            ws[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        (xs, ws)
    })
}

fn gauss_legendre_c(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64) -> Complex64 {
    let (xs, ws) = gl_nodes();
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in xs.iter().zip(ws) {
        acc += *w * f(mid + half * x);
    }
    acc * half
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::element::WireElement;

    const LAMBDA: f64 = 7.5;

    fn thin(length_wl: f64) -> WireElement {
        WireElement::new(length_wl * LAMBDA, 1e-4 * LAMBDA).unwrap()
    }

    /// Complex-valued adaptive Simpson: the independent quadrature oracle
    /// for the reaction integrals.
    fn adaptive_simpson_c(f: &dyn Fn(f64) -> Complex64, a: f64, b: f64, tol: f64) -> Complex64 {
        fn recurse(
            f: &dyn Fn(f64) -> Complex64,
            a: f64,
            fa: Complex64,
            b: f64,
            fb: Complex64,
            whole: Complex64,
            m: f64,
            fm: Complex64,
            tol: f64,
            depth: u32,
        ) -> Complex64 {
            let lm = 0.5 * (a + m);
            let rm = 0.5 * (m + b);
            let flm = f(lm);
            let frm = f(rm);
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            let err = left + right - whole;
            if depth == 0 || err.norm() < 15.0 * tol {
                left + right + err / 15.0
            } else {
                recurse(f, a, fa, m, fm, left, lm, flm, 0.5 * tol, depth - 1)
                    + recurse(f, m, fm, b, fb, right, rm, frm, 0.5 * tol, depth - 1)
            }
        }
        let fa = f(a);
        let fb = f(b);
        let m = 0.5 * (a + b);
        let fm = f(m);
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        recurse(f, a, fa, b, fb, whole, m, fm, tol, 52)
    }

    /// Reaction-integral oracle shared by the self (rho = wire radius) and
    /// mutual (rho = separation) checks.
    fn reaction_oracle(len_a: f64, len_b: f64, rho: f64, dz: f64) -> Complex64 {
        let k = 2.0 * std::f64::consts::PI / LAMBDA;
        let half_a = len_a / 2.0;
        let half_b = len_b / 2.0;
        let integrand = move |z: f64| -> Complex64 {
            let green = |r: f64| Complex64::from_polar(1.0 / r, -k * r);
            let r0 = (rho * rho + z * z).sqrt();
            let r1 = (rho * rho + (z - half_a) * (z - half_a)).sqrt();
            let r2 = (rho * rho + (z + half_a) * (z + half_a)).sqrt();
            (green(r1) + green(r2) - 2.0 * (k * half_a).cos() * green(r0))
                * (k * (half_b - (z - dz).abs())).sin()
        };
        let lower = adaptive_simpson_c(&integrand, dz - half_b, dz, 1e-11);
        let upper = adaptive_simpson_c(&integrand, dz, dz + half_b, 1e-11);
        Complex64::new(0.0, ETA0 / (4.0 * std::f64::consts::PI)) * (lower + upper)
    }

    #[test]
    fn half_wave_self_impedance_hits_canonical_anchor() {
        for z in [
            self_impedance(&thin(0.5), LAMBDA).unwrap(),
            self_impedance_closed_form(&thin(0.5), LAMBDA).unwrap(),
        ] {
            assert!(
                (z.re - 73.1).abs() < 1.0,
                "λ/2 resistance {} Ω should be within 1 Ω of 73.1",
                z.re
            );
            assert!(
                (z.im - 42.5).abs() < 3.0,
                "λ/2 reactance {} Ω should be within 3 Ω of 42.5",
                z.im
            );
        }
    }

    #[test]
    fn self_impedance_agrees_with_reaction_quadrature_oracle() {
        for &(len_wl, radius_wl) in
            &[(0.5, 1e-4), (0.42, 1e-3), (0.52, 2e-2), (0.42, 2e-2), (0.3, 1e-4), (0.7, 1e-3)]
        {
            let e = WireElement::new(len_wl * LAMBDA, radius_wl * LAMBDA).unwrap();
            let got = self_impedance(&e, LAMBDA).unwrap();
            let oracle = reaction_oracle(e.length_m(), e.length_m(), e.radius_m(), 0.0);
            assert!(
                (got - oracle).norm() < 0.02,
                "self Z at L={len_wl}λ a={radius_wl}λ: {got} vs oracle {oracle}"
            );
        }
    }

    #[test]
    fn closed_form_self_impedance_matches_integral_in_thin_regime() {
        for &(len_wl, radius_wl) in &[(0.5, 1e-4), (0.42, 1e-3), (0.3, 1e-4), (0.7, 1e-3)] {
            let e = WireElement::new(len_wl * LAMBDA, radius_wl * LAMBDA).unwrap();
            let closed = self_impedance_closed_form(&e, LAMBDA).unwrap();
            let exact = self_impedance(&e, LAMBDA).unwrap();
            assert!(
                (closed.re - exact.re).abs() < 0.05,
                "thin-regime R at L={len_wl}λ a={radius_wl}λ: closed {closed} vs integral {exact}"
            );
            // Documented closed-form reactance error, ~(η/4π)·(2a/L)·|sin kL|.
            let kl = 2.0 * std::f64::consts::PI * len_wl;
            let x_tol = 0.05
                + 12.0 * ETA0 / (4.0 * std::f64::consts::PI) * (2.0 * radius_wl / len_wl)
                    * kl.sin().abs();
            assert!(
                (closed.im - exact.im).abs() < x_tol,
                "thin-regime X at L={len_wl}λ a={radius_wl}λ: closed {closed} vs integral {exact} (tol {x_tol})"
            );
        }
    }

    #[test]
    fn quarter_spacing_mutual_hits_canonical_anchor() {
        let z = mutual_impedance(&thin(0.5), &thin(0.5), 0.25 * LAMBDA, LAMBDA).unwrap();
        assert!((z.re - 40.9).abs() < 1.5, "R12 {} Ω should be within 1.5 Ω of 40.9", z.re);
        assert!((z.im + 28.3).abs() < 1.5, "X12 {} Ω should be within 1.5 Ω of −28.3", z.im);
    }

    #[test]
    fn mutual_agrees_with_adaptive_quadrature_oracle() {
        for &(la, lb, rho, dz) in &[
            (0.5, 0.5, 0.25, 0.0),
            (0.5, 0.42, 0.31, 0.0),
            (0.52, 0.42, 0.16, 0.0),
            (0.5, 0.5, 0.3, 0.52),
            (0.42, 0.52, 0.25, -0.6),
            (0.5, 0.5, 0.0, 0.7),
            (0.46, 0.52, 0.05, 0.55),
        ] {
            let got = mutual_impedance_staggered(
                la * LAMBDA,
                lb * LAMBDA,
                rho * LAMBDA,
                dz * LAMBDA,
                LAMBDA,
            )
            .unwrap();
            let want = reaction_oracle(la * LAMBDA, lb * LAMBDA, rho * LAMBDA, dz * LAMBDA);
            assert!(
                (got - want).norm() < 0.02,
                "mutual(la={la}λ, lb={lb}λ, ρ={rho}λ, dz={dz}λ): {got} vs oracle {want}"
            );
        }
    }

    #[test]
    fn side_by_side_half_waves_match_si_ci_closed_form() {
        // Independent classical closed form for the parallel λ/2 pair.
        let eta_over_4pi = ETA0 / (4.0 * std::f64::consts::PI);
        let k = 2.0 * std::f64::consts::PI / LAMBDA;
        let len = 0.5 * LAMBDA;
        for &d_wl in &[0.1, 0.25, 0.5, 1.0, 1.5] {
            let d = d_wl * LAMBDA;
            let u0 = k * d;
            let hyp = (d * d + len * len).sqrt();
            let u1 = k * (hyp + len);
            let u2 = k * (hyp - len);
            let closed = Complex64::new(
                eta_over_4pi
                    * (2.0 * cosine_integral(u0).unwrap()
                        - cosine_integral(u1).unwrap()
                        - cosine_integral(u2).unwrap()),
                -eta_over_4pi
                    * (2.0 * sine_integral(u0).unwrap()
                        - sine_integral(u1).unwrap()
                        - sine_integral(u2).unwrap()),
            );
            let got = mutual_impedance(&thin(0.5), &thin(0.5), d, LAMBDA).unwrap();
            assert!(
                (got - closed).norm() < 0.05,
                "d = {d_wl}λ: reaction integral {got} vs Si/Ci closed form {closed}"
            );
        }
    }

    #[test]
    fn mutual_coupling_decays_with_separation() {
        let z_half = mutual_impedance(&thin(0.5), &thin(0.5), 0.5 * LAMBDA, LAMBDA).unwrap();
        let z_two = mutual_impedance(&thin(0.5), &thin(0.5), 2.0 * LAMBDA, LAMBDA).unwrap();
        assert!(z_two.norm() < z_half.norm());
        assert!(z_two.norm() < 10.0, "coupling at 2λ should be weak, got {} Ω", z_two.norm());
    }

    #[test]
    fn mutual_is_continuous_across_the_separation_sweep() {
        let mut prev: Option<Complex64> = None;
        let mut d = 0.05;
        while d <= 2.0 {
            let z = mutual_impedance(&thin(0.5), &thin(0.5), d * LAMBDA, LAMBDA).unwrap();
            if let Some(p) = prev {
                assert!(
                    (z - p).norm() < 8.0,
                    "jump of {} Ω between d={}λ and d={d}λ",
                    (z - p).norm(),
                    d - 0.01
                );
            }
            prev = Some(z);
            d += 0.01;
        }
    }

    #[test]
    fn reciprocity_is_bitwise() {
        let a = thin(0.42);
        let b = thin(0.52);
        let zab = mutual_impedance(&a, &b, 0.31 * LAMBDA, LAMBDA).unwrap();
        let zba = mutual_impedance(&b, &a, 0.31 * LAMBDA, LAMBDA).unwrap();
        assert_eq!(zab, zba);

        let s1 = mutual_impedance_staggered(3.2, 3.9, 1.1, 2.6, LAMBDA).unwrap();
        let s2 = mutual_impedance_staggered(3.9, 3.2, 1.1, -2.6, LAMBDA).unwrap();
        assert_eq!(s1, s2);
    }

    #[test]
    fn tilt_projects_with_the_cosine_of_the_relative_angle() {
        let upright = thin(0.5);
        let leaning = WireElement::with_tilt(0.5 * LAMBDA, 1e-4 * LAMBDA, 8.0, 45.0).unwrap();
        let z0 = mutual_impedance(&upright, &upright, 0.25 * LAMBDA, LAMBDA).unwrap();
        let zt = mutual_impedance(&upright, &leaning, 0.25 * LAMBDA, LAMBDA).unwrap();
        let ratio = zt.norm() / z0.norm();
        assert!(
            (ratio - 8.0f64.to_radians().cos()).abs() < 1e-12,
            "tilt projection ratio {ratio}"
        );
    }

    #[test]
    fn rejects_inputs_outside_the_model() {
        assert!(matches!(
            self_impedance(&thin(0.03), LAMBDA),
            Err(Error::ModelValidity(_))
        ));
        assert!(matches!(
            self_impedance(&thin(0.8), LAMBDA),
            Err(Error::ModelValidity(_))
        ));
        assert!(self_impedance(&thin(0.5), 0.0).is_err());
        assert!(self_impedance(&thin(0.5), f64::NAN).is_err());
        // Overlapping elements.
        let fat = WireElement::new(0.5 * LAMBDA, 0.02 * LAMBDA).unwrap();
        assert!(matches!(
            mutual_impedance(&fat, &fat, 0.03 * LAMBDA, LAMBDA),
            Err(Error::Geometry(_))
        ));
        // Collinear overlap.
        assert!(mutual_impedance_staggered(3.75, 3.75, 0.0, 1.0, LAMBDA).is_err());
    }

    #[test]
    fn reactance_crosses_zero_below_half_wave_resonance() {
        let x_450 = self_impedance(&thin(0.45), LAMBDA).unwrap().im;
        let x_500 = self_impedance(&thin(0.5), LAMBDA).unwrap().im;
        assert!(
            x_450 < 0.0 && x_500 > 0.0,
            "resonance should be bracketed: X(0.45λ) = {x_450}, X(0.50λ) = {x_500}"
        );
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(48))]

            #[test]
            fn half_wave_resistance_is_stable_across_thin_radii(
                radius_wl in 1e-5f64..1e-3
            ) {
                let e = WireElement::new(0.5 * LAMBDA, radius_wl * LAMBDA).unwrap();
                let r = self_impedance(&e, LAMBDA).unwrap().re;
                prop_assert!((60.0..85.0).contains(&r), "R = {} Ω", r);
            }

            #[test]
            fn reciprocity_holds_for_random_pairs(
                la in 0.2f64..0.7,
                lb in 0.2f64..0.7,
                rho in 0.05f64..1.5,
                dz in -1.0f64..1.0
            ) {
                let zab = mutual_impedance_staggered(
                    la * LAMBDA, lb * LAMBDA, rho * LAMBDA, dz * LAMBDA, LAMBDA).unwrap();
                let zba = mutual_impedance_staggered(
                    lb * LAMBDA, la * LAMBDA, rho * LAMBDA, -dz * LAMBDA, LAMBDA).unwrap();
                prop_assert_eq!(zab, zba);
            }
        }
    }
}
