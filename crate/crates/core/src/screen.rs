//! Screen-plane amplitudes and binned probability densities in the plane-wave
//! limit.
//!
//! Densities are conditioned on the photon reaching the open part of the slit.
//! The physical density of hypothesis `h` is `|A_h(x₂)|²/(2w)`, where `A_h` is
//! the unit-constant aperture amplitude; it integrates to 1 without the bomb
//! and to the survival probability `(w−b)/w` with it.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::apertures::{ApparatusGeometry, SlitHypothesis};
use crate::exec::map_indices;
use crate::propagation::segment_amplitude_unchecked;
use crate::quadrature::minimize_bracketed;
use crate::{Diagnosed, Error, Result, Warning};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Axis {
    /// Screen position in wavelengths.
    Position,
    /// Transverse wavenumber in units of `k₀`.
    Momentum,
}

impl Axis {
    pub fn as_str(&self) -> &'static str {
        match self {
            Axis::Position => "position",
            Axis::Momentum => "momentum",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "position" => Some(Axis::Position),
            "momentum" => Some(Axis::Momentum),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Normalization {
    /// Largest bin density is exactly 1.
    PeakOne,
    /// Window mass is 1.
    UnitMass,
    /// Window mass equals the hypothesis' survival probability.
    FluxMass,
    /// Scaled by the factor that brings the no-bomb pattern of the same
    /// geometry and window to `PeakOne`; used to plot both hypotheses on the
    /// common "I(0) = 1 without the bomb" scale.
    RelativeToNoBombPeak,
}

/// A symmetric-or-not sampling interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
}

impl Window {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Domain("window requires finite lo < hi"));
        }
        Ok(Self { lo, hi })
    }

    pub fn symmetric(half_width: f64) -> Result<Self> {
        Self::new(-half_width, half_width)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Number of bins of width `bin_width` tiling the window exactly.
    pub fn bin_count(&self, bin_width: f64) -> Result<usize> {
        if !(bin_width.is_finite() && bin_width > 0.0) {
            return Err(Error::Domain("bin width must be positive and finite"));
        }
        let ratio = self.width() / bin_width;
        let n = libm::round(ratio);
        if n < 1.0 || (ratio - n).abs() > 1e-9 * ratio.max(1.0) {
            return Err(Error::Domain("window width must be a whole number of bins"));
        }
        Ok(n as usize)
    }
}

impl Default for Window {
    /// `±10⁶` wavelengths.
    fn default() -> Self {
        Self { lo: -1e6, hi: 1e6 }
    }
}

/// Default bin width in wavelengths.
pub const DEFAULT_BIN_WIDTH: f64 = 10.0;

/// A uniformly binned probability density.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SampledPattern {
    pub axis: Axis,
    pub x_lo: f64,
    pub x_hi: f64,
    pub bin_width: f64,
    pub densities: Vec<f64>,
    /// `bin_width·Σ densities`.
    pub mass: f64,
    pub normalization: Normalization,
    /// Window mass of the physically normalized density, before rescaling.
    pub physical_mass: f64,
}

impl SampledPattern {
    /// Builds a pattern from physically normalized bin densities.
    pub fn from_physical(
        axis: Axis,
        window: Window,
        bin_width: f64,
        physical: Vec<f64>,
        normalization: Normalization,
        target_mass: f64,
        reference_peak: f64,
    ) -> Result<Self> {
        let physical_mass = bin_width * physical.iter().sum::<f64>();
        // Peak-based scales divide so the reference bin lands on exactly 1.
        enum Scale {
            DivideBy(f64),
            MultiplyBy(f64),
        }
        let scale = match normalization {
            Normalization::PeakOne => {
                let peak = physical.iter().copied().fold(0.0, f64::max);
                if peak <= 0.0 {
                    return Err(Error::ZeroMass);
                }
                Scale::DivideBy(peak)
            }
            Normalization::UnitMass | Normalization::FluxMass => {
                if physical_mass <= 0.0 {
                    return Err(Error::ZeroMass);
                }
                Scale::MultiplyBy(target_mass / physical_mass)
            }
            Normalization::RelativeToNoBombPeak => {
                if reference_peak.is_nan() || reference_peak <= 0.0 {
                    return Err(Error::ZeroMass);
                }
                Scale::DivideBy(reference_peak)
            }
        };
        let densities: Vec<f64> = match scale {
            Scale::DivideBy(p) => physical.into_iter().map(|d| d / p).collect(),
            Scale::MultiplyBy(f) => physical.into_iter().map(|d| d * f).collect(),
        };
        let mass = bin_width * densities.iter().sum::<f64>();
        Ok(Self { axis, x_lo: window.lo, x_hi: window.hi, bin_width, densities, mass, normalization, physical_mass })
    }

    pub fn len(&self) -> usize {
        self.densities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.densities.is_empty()
    }

    pub fn bin_center(&self, i: usize) -> f64 {
        bin_center(self.x_lo, self.bin_width, i)
    }

    pub fn bin_centers(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.len()).map(|i| self.bin_center(i))
    }

    /// Index of the bin containing `x`, if inside the window.
    pub fn bin_index(&self, x: f64) -> Option<usize> {
        if !(x >= self.x_lo && x < self.x_hi) {
            return None;
        }
        let i = libm::floor((x - self.x_lo) / self.bin_width) as usize;
        Some(i.min(self.len() - 1))
    }

    /// Probability mass of each bin.
    pub fn bin_masses(&self) -> impl Iterator<Item = f64> + '_ {
        self.densities.iter().map(|d| d * self.bin_width)
    }

    /// The same pattern rescaled to a new normalization (the physical scale is
    /// not recoverable here, so `FluxMass` needs the target mass explicitly).
    pub fn renormalized(&self, normalization: Normalization, target_mass: f64) -> Result<Self> {
        let window = Window { lo: self.x_lo, hi: self.x_hi };
        let mut out = Self::from_physical(
            self.axis,
            window,
            self.bin_width,
            self.densities.clone(),
            normalization,
            target_mass,
            1.0,
        )?;
        out.physical_mass = self.physical_mass;
        Ok(out)
    }
}

pub(crate) fn bin_center(lo: f64, width: f64, i: usize) -> f64 {
    lo + (i as f64 + 0.5) * width
}

/// Unit-constant screen amplitude: the full-slit segment amplitude, minus the
/// bomb segment when the bomb is present.
pub fn amplitude_at_screen(h: SlitHypothesis, x2: f64, g: &ApparatusGeometry) -> Complex64 {
    let scale = libm::sqrt(g.k0() / (core::f64::consts::PI * g.l2()));
    let (hw, hb) = (0.5 * g.w(), 0.5 * g.b());
    let open = segment_amplitude_unchecked(x2, -hw, hw, scale);
    match h {
        SlitHypothesis::NoBomb => open,
        SlitHypothesis::Bomb => open - segment_amplitude_unchecked(x2, -hb, hb, scale),
    }
}

/// Physically normalized screen density `|A_h(x₂)|²/(2w)`.
pub fn physical_density(h: SlitHypothesis, x2: f64, g: &ApparatusGeometry) -> f64 {
    amplitude_at_screen(h, x2, g).norm_sqr() / (2.0 * g.w())
}

/// `d/dx₂` of the physical density, from `dA/dx₂ = −s·(e^{iπu_hi²/2} − e^{iπu_lo²/2})`.
fn physical_density_slope(h: SlitHypothesis, x2: f64, g: &ApparatusGeometry) -> f64 {
    let s = libm::sqrt(g.k0() / (core::f64::consts::PI * g.l2()));
    let edge = |x1: f64| {
        let u = s * (x1 - x2);
        Complex64::from_polar(1.0, 0.5 * core::f64::consts::PI * u * u)
    };
    let (hw, hb) = (0.5 * g.w(), 0.5 * g.b());
    let mut slope = -s * (edge(hw) - edge(-hw));
    if h == SlitHypothesis::Bomb {
        slope -= -s * (edge(hb) - edge(-hb));
    }
    2.0 * (amplitude_at_screen(h, x2, g).conj() * slope).re / (2.0 * g.w())
}

/// Probability of not being absorbed, given the photon reached the open slit.
pub fn survival_probability(h: SlitHypothesis, g: &ApparatusGeometry) -> f64 {
    match h {
        SlitHypothesis::NoBomb => 1.0,
        SlitHypothesis::Bomb => (g.w() - g.b()) / g.w(),
    }
}

fn physical_bins(h: SlitHypothesis, g: &ApparatusGeometry, lo: f64, bin_width: f64, n: usize) -> Vec<f64> {
    map_indices(n, |i| physical_density(h, bin_center(lo, bin_width, i), g))
}

/// Mass of the physical density in the two flanks that extend `window` to
/// three times its width, at the same bin width.
fn flank_mass(h: SlitHypothesis, g: &ApparatusGeometry, window: Window, bin_width: f64, n: usize) -> f64 {
    let left = physical_bins(h, g, window.lo - window.width(), bin_width, n);
    let right = physical_bins(h, g, window.hi, bin_width, n);
    bin_width * (left.iter().sum::<f64>() + right.iter().sum::<f64>())
}

pub(crate) fn window_warning(captured: f64, wide: f64) -> Option<Warning> {
    let captured_fraction = if wide > 0.0 { captured / wide } else { 1.0 };
    (captured_fraction < 0.99).then_some(Warning::WindowTooSmall { captured_fraction })
}

/// Screen pattern of hypothesis `h`, densities evaluated at bin centres.
///
/// `FluxMass` scales the window mass to the survival probability (1 without
/// the bomb, `(w−b)/w` with it). A [`Warning::WindowTooSmall`] is attached when
/// the window holds under 99% of the mass found in a window three times wider.
pub fn pattern(
    h: SlitHypothesis,
    g: &ApparatusGeometry,
    window: Window,
    bin_width: f64,
    norm: Normalization,
) -> Result<Diagnosed<SampledPattern>> {
    let n = window.bin_count(bin_width)?;
    let physical = physical_bins(h, g, window.lo, bin_width, n);
    let reference_peak = match norm {
        Normalization::RelativeToNoBombPeak if h == SlitHypothesis::Bomb => {
            physical_bins(SlitHypothesis::NoBomb, g, window.lo, bin_width, n).into_iter().fold(0.0, f64::max)
        }
        Normalization::RelativeToNoBombPeak => physical.iter().copied().fold(0.0, f64::max),
        _ => 1.0,
    };
    let flanks = flank_mass(h, g, window, bin_width, n);
    let p = SampledPattern::from_physical(
        Axis::Position,
        window,
        bin_width,
        physical,
        norm,
        survival_target(h, g, norm),
        reference_peak,
    )?;
    let mut out = Diagnosed::clean(p);
    out.warnings.extend(window_warning(out.value.physical_mass, out.value.physical_mass + flanks));
    Ok(out)
}

fn survival_target(h: SlitHypothesis, g: &ApparatusGeometry, norm: Normalization) -> f64 {
    match norm {
        Normalization::FluxMass => survival_probability(h, g),
        _ => 1.0,
    }
}

/// Both hypotheses on the common "no-bomb peak = 1" scale.
pub fn figure_patterns(
    g: &ApparatusGeometry,
    window: Window,
    bin_width: f64,
) -> Result<Diagnosed<(SampledPattern, SampledPattern)>> {
    let none = pattern(SlitHypothesis::NoBomb, g, window, bin_width, Normalization::RelativeToNoBombPeak)?;
    let bomb = pattern(SlitHypothesis::Bomb, g, window, bin_width, Normalization::RelativeToNoBombPeak)?;
    let mut warnings = none.warnings;
    warnings.extend(bomb.warnings);
    Ok(Diagnosed { value: (none.value, bomb.value), warnings })
}

/// Scan step for locating minima: a sixteenth of the smaller of the
/// far-field fringe spacing `l2/w` and the Fresnel scale `√l2`.
pub fn default_scan_step(g: &ApparatusGeometry) -> f64 {
    (g.l2() / g.w()).min(libm::sqrt(g.l2())) / 16.0
}

/// Local minima `x₂*` of the no-bomb density inside `window` whose density
/// is below `rel_threshold` times the density at `x₂ = 0`, sorted ascending.
pub fn dark_points(g: &ApparatusGeometry, window: Window, rel_threshold: f64) -> Result<Vec<f64>> {
    dark_points_with_step(g, window, rel_threshold, default_scan_step(g))
}

/// [`dark_points`] with an explicit scan step.
///
/// Minima are bracketed on the sampled curve, located by Brent's method and
/// then polished by bisection on the analytic slope until the bracket cannot
/// shrink further, which drives the slope to rounding level.
pub fn dark_points_with_step(
    g: &ApparatusGeometry,
    window: Window,
    rel_threshold: f64,
    step: f64,
) -> Result<Vec<f64>> {
    if !(rel_threshold > 0.0 && rel_threshold < 1.0) {
        return Err(Error::Domain("relative threshold must lie in (0, 1)"));
    }
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::Domain("scan step must be positive"));
    }
    let h = SlitHypothesis::NoBomb;
    let density = |x: f64| physical_density(h, x, g);
    let reference = density(0.0);
    let reach = window.lo.abs().max(window.hi.abs());
    let n = libm::ceil(reach / step) as usize + 2;
    // The pattern is even; scan x ≥ 0 (with one sample mirrored to x < 0).
    let samples = map_indices(n + 1, |i| density((i as f64 - 1.0) * step));

    let mut positive = Vec::new();
    for i in 1..n {
        let (prev, here, next) = (samples[i - 1], samples[i], samples[i + 1]);
        if !(here < prev && here <= next) {
            continue;
        }
        let (lo, hi) = ((i as f64 - 2.0) * step, i as f64 * step);
        let (guess, _) = minimize_bracketed(density, lo, hi, 1e-9 * step);
        let x = polish_minimum(|x| physical_density_slope(h, x, g), lo, hi, guess);
        if density(x) < rel_threshold * reference {
            positive.push(x.max(0.0));
        }
    }

    let mut points: Vec<f64> = Vec::with_capacity(2 * positive.len());
    for &x in positive.iter().rev() {
        if x > 0.0 {
            points.push(-x);
        }
    }
    points.extend(positive.iter().copied());
    points.retain(|x| *x >= window.lo && *x <= window.hi);
    points.dedup();
    Ok(points)
}

/// Bisection on the slope within `[lo, hi]`, seeded by `guess`.
fn polish_minimum(slope: impl Fn(f64) -> f64, lo: f64, hi: f64, guess: f64) -> f64 {
    let (mut a, mut b) = (lo, hi);
    // Tighten the bracket around the guess when the slope allows it.
    let width = 1e-6 * (hi - lo);
    if slope(guess - width) < 0.0 && slope(guess + width) > 0.0 {
        a = guess - width;
        b = guess + width;
    } else if !(slope(a) < 0.0 && slope(b) > 0.0) {
        return guess;
    }
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let s = slope(mid);
        if s == 0.0 {
            return mid;
        }
        if s < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    if slope(a).abs() <= slope(b).abs() {
        a
    } else {
        b
    }
}
