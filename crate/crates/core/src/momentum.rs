//! Transverse-momentum wavefunctions of the slit-plane states.
//!
//! Internally `k_x` is in radians per wavelength; patterns report it in units
//! of `k₀`. `sinc(x) = sin(x)/x`.

use core::f64::consts::PI;

use crate::apertures::{decomposition_coefficients, ApparatusGeometry, SlitHypothesis};
use crate::exec::map_indices;
use crate::screen::{bin_center, window_warning, Axis, Normalization, SampledPattern, Window};
use crate::{quadrature, Diagnosed, Error, Result};

pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        libm::sin(x) / x
    }
}

/// Fourier transform of the slit-plane state of `h` at `kx`.
pub fn psi_k(h: SlitHypothesis, kx: f64, g: &ApparatusGeometry) -> f64 {
    let (w, b) = (g.w(), g.b());
    match h {
        SlitHypothesis::NoBomb => libm::sqrt(w / (2.0 * PI)) * sinc(0.5 * kx * w),
        SlitHypothesis::Bomb => {
            libm::sqrt(1.0 / (2.0 * PI * (w - b))) * (w * sinc(0.5 * kx * w) - b * sinc(0.5 * kx * b))
        }
    }
}

/// Fourier transform of the dark state.
pub fn dark_state_k(kx: f64, g: &ApparatusGeometry) -> f64 {
    let (w, b) = (g.w(), g.b());
    let inner = -libm::sqrt((w - b) / (w * b));
    let outer = libm::sqrt(b / (w * (w - b)));
    // Φ = outer·[|x| ≤ w/2] + (inner − outer)·[|x| < b/2]
    (outer * w * sinc(0.5 * kx * w) + (inner - outer) * b * sinc(0.5 * kx * b)) / libm::sqrt(2.0 * PI)
}

/// `|ψ_h(k)|²` reconstructed from the bright/dark decomposition; used to
/// cross-check [`psi_k`].
pub fn psi_k_from_decomposition(kx: f64, g: &ApparatusGeometry) -> f64 {
    let (bright, dark) = decomposition_coefficients(g);
    bright * psi_k(SlitHypothesis::NoBomb, kx, g) + dark * dark_state_k(kx, g)
}

/// Momentum pattern of `h`; `window` and `bin_width` are in units of `k₀` and
/// the density is per unit `k_x/k₀`.
pub fn momentum_pattern(
    h: SlitHypothesis,
    g: &ApparatusGeometry,
    window: Window,
    bin_width: f64,
    norm: Normalization,
) -> Result<Diagnosed<SampledPattern>> {
    let n = window.bin_count(bin_width)?;
    let k0 = g.k0();
    let density = |h: SlitHypothesis, kappa: f64| {
        let v = psi_k(h, kappa * k0, g);
        k0 * v * v
    };
    let physical = map_indices(n, |i| density(h, bin_center(window.lo, bin_width, i)));
    let reference_peak = match norm {
        Normalization::RelativeToNoBombPeak => {
            map_indices(n, |i| density(SlitHypothesis::NoBomb, bin_center(window.lo, bin_width, i)))
                .into_iter()
                .fold(0.0, f64::max)
        }
        _ => 1.0,
    };
    let flanks: f64 = map_indices(2 * n, |i| {
        let lo = if i < n { window.lo - window.width() } else { window.hi - n as f64 * bin_width };
        density(h, bin_center(lo, bin_width, i))
    })
    .iter()
    .sum::<f64>()
        * bin_width;
    let target = if norm == Normalization::FluxMass { crate::screen::survival_probability(h, g) } else { 1.0 };
    let p = SampledPattern::from_physical(Axis::Momentum, window, bin_width, physical, norm, target, reference_peak)?;
    let mut out = Diagnosed::clean(p);
    out.warnings.extend(window_warning(out.value.physical_mass, out.value.physical_mass + flanks));
    Ok(out)
}

/// Both hypotheses on the common "no-bomb density at `k_x = 0` is 1" scale.
pub fn figure_momentum_patterns(
    g: &ApparatusGeometry,
    window: Window,
    bin_width: f64,
) -> Result<Diagnosed<(SampledPattern, SampledPattern)>> {
    let norm = Normalization::RelativeToNoBombPeak;
    let none = momentum_pattern(SlitHypothesis::NoBomb, g, window, bin_width, norm)?;
    let bomb = momentum_pattern(SlitHypothesis::Bomb, g, window, bin_width, norm)?;
    let mut warnings = none.warnings;
    warnings.extend(bomb.warnings);
    Ok(Diagnosed { value: (none.value, bomb.value), warnings })
}

/// Oscillation-averaged `|ψ_h(k)|² ≈ A/k²` at large `|k|`; returns `A`.
fn tail_coefficient(h: SlitHypothesis, g: &ApparatusGeometry) -> f64 {
    match h {
        SlitHypothesis::NoBomb => 1.0 / (PI * g.w()),
        // (sin(kw/2) − sin(kb/2))² averages to 1 for w ≠ b
        SlitHypothesis::Bomb => 2.0 / (PI * (g.w() - g.b())),
    }
}

/// Quadrature cutoff: two thousand periods of the fastest oscillation
/// beyond `from`.
fn quadrature_cutoff(g: &ApparatusGeometry, from: f64) -> f64 {
    from + 2000.0 * 2.0 * PI / g.b().min(g.w())
}

/// `∫_{|k| > kc} |ψ_h|² dk`: quadrature up to a cutoff, then the averaged
/// `A/k²` tail in closed form.
pub fn tail_mass(h: SlitHypothesis, g: &ApparatusGeometry, kc: f64) -> f64 {
    let cutoff = quadrature_cutoff(g, kc);
    let body = integrate_density(h, g, kc, cutoff);
    2.0 * (body + tail_coefficient(h, g) / cutoff)
}

/// Total momentum-space norm with the same tail correction (Parseval: 1).
pub fn momentum_norm(h: SlitHypothesis, g: &ApparatusGeometry) -> f64 {
    let cutoff = quadrature_cutoff(g, 0.0);
    2.0 * (integrate_density(h, g, 0.0, cutoff) + tail_coefficient(h, g) / cutoff)
}

fn integrate_density(h: SlitHypothesis, g: &ApparatusGeometry, a: f64, b: f64) -> f64 {
    // Panels of roughly one period keep every Kronrod panel well resolved.
    let period = 2.0 * PI / g.b().min(g.w());
    let panels = libm::ceil((b - a) / period).max(1.0) as usize;
    let width = (b - a) / panels as f64;
    (0..panels)
        .map(|j| {
            let lo = a + j as f64 * width;
            let hi = if j + 1 == panels { b } else { lo + width };
            quadrature::integrate(
                |k| {
                    let v = psi_k(h, k, g);
                    v * v
                },
                lo,
                hi,
                1e-17,
                1e-13,
            )
            .value[0]
        })
        .sum()
}

/// Mean of `k_x` over a symmetric range, summed in mirrored pairs.
fn mean_momentum(h: SlitHypothesis, g: &ApparatusGeometry, reach: f64) -> f64 {
    quadrature::integrate(
        |k| {
            let (p, m) = (psi_k(h, k, g), psi_k(h, -k, g));
            k * (p * p) - k * (m * m)
        },
        0.0,
        reach,
        1e-17,
        1e-13,
    )
    .value[0]
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct KickStatistics {
    /// Threshold `k_c` in radians per wavelength.
    pub kc: f64,
    pub tail_no_bomb: f64,
    pub tail_bomb: f64,
    pub mean_no_bomb: f64,
    pub mean_bomb: f64,
}

/// Probability of a transverse kick `|k_x| > kc` with and without the bomb
/// (unit-mass distributions), plus the mean `k_x` of each.
pub fn kick_statistics(g: &ApparatusGeometry, kc: f64) -> Result<KickStatistics> {
    if !(kc.is_finite() && kc > 0.0) {
        return Err(Error::Domain("kick threshold must be positive and finite"));
    }
    let reach = quadrature_cutoff(g, kc);
    Ok(KickStatistics {
        kc,
        tail_no_bomb: tail_mass(SlitHypothesis::NoBomb, g, kc),
        tail_bomb: tail_mass(SlitHypothesis::Bomb, g, kc),
        mean_no_bomb: mean_momentum(SlitHypothesis::NoBomb, g, reach),
        mean_bomb: mean_momentum(SlitHypothesis::Bomb, g, reach),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig2() -> ApparatusGeometry {
        ApparatusGeometry::reference()
    }

    #[test]
    fn sinc_convention() {
        assert_eq!(sinc(0.0), 1.0);
        assert!((sinc(PI / 2.0) - 2.0 / PI).abs() < 1e-16);
        assert!(sinc(PI).abs() < 1e-16);
    }

    #[test]
    fn zero_momentum_value() {
        let g = fig2();
        assert_eq!(psi_k(SlitHypothesis::NoBomb, 0.0, &g), libm::sqrt(1000.0 / (2.0 * PI)));
    }

    #[test]
    fn no_bomb_zeros_are_not_bomb_zeros() {
        let g = fig2();
        for n in 1..=3 {
            let k = 2.0 * PI * n as f64 / g.w();
            assert!(psi_k(SlitHypothesis::NoBomb, k, &g).abs() < 1e-15);
        }
        let k = 2.0 * PI / g.w();
        let expected = -libm::sqrt(1.0 / (PI * g.w())) * (g.w() / 2.0) * (2.0 / PI);
        assert!((psi_k(SlitHypothesis::Bomb, k, &g) - expected).abs() < 1e-15);
        for n in [1, 3, 5, 7] {
            let k = 2.0 * PI * n as f64 / g.w();
            assert!(psi_k(SlitHypothesis::Bomb, k, &g).abs() > 1e-3, "n = {n}");
        }
    }

    #[test]
    fn kick_threshold_validation() {
        assert!(kick_statistics(&fig2(), 0.0).is_err());
        assert!(kick_statistics(&fig2(), f64::NAN).is_err());
    }

    #[test]
    fn tiny_threshold_leaves_everything_in_the_tail() {
        let s = kick_statistics(&fig2(), 1e-9).unwrap();
        assert!((s.tail_no_bomb - 1.0).abs() < 1e-3);
        assert!((s.tail_bomb - 1.0).abs() < 1e-3);
    }
}
