//! Free-space paraxial propagation.
//!
//! The evolution over a longitudinal distance `l` is `exp(-i k_x² l / 2k₀)`.
//! Two routes are provided: the analytic amplitude behind a uniformly lit
//! aperture segment (Fresnel integrals), and a spectral propagator for
//! arbitrary sampled wavefunctions.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::fft::{angular_frequencies, Radix2Fft};
use crate::fresnel::fresnel_pair;
use crate::{Diagnosed, Error, Result, Warning, K0};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PropagationParams {
    k0: f64,
    distance: f64,
}

impl PropagationParams {
    pub fn new(k0: f64, distance: f64) -> Result<Self> {
        if !(k0.is_finite() && k0 > 0.0) {
            return Err(Error::Domain("wavenumber must be positive and finite"));
        }
        if !(distance.is_finite() && distance > 0.0) {
            return Err(Error::Domain("propagation distance must be positive and finite"));
        }
        Ok(Self { k0, distance })
    }

    /// Distance in wavelengths with `k₀ = 2π`.
    pub fn in_wavelengths(distance: f64) -> Result<Self> {
        Self::new(K0, distance)
    }

    pub fn k0(&self) -> f64 {
        self.k0
    }

    pub fn distance(&self) -> f64 {
        self.distance
    }

    /// Scale `√(k₀/(πl))` mapping transverse offsets to Fresnel arguments.
    pub fn fresnel_scale(&self) -> f64 {
        libm::sqrt(self.k0 / (PI * self.distance))
    }
}

/// Screen amplitude at `x2` from a uniformly illuminated segment
/// `[x_lo, x_hi]`, with the global constant set to 1:
/// `{C[u(x_hi)] − C[u(x_lo)]} + i{S[u(x_hi)] − S[u(x_lo)]}`, where
/// `u(x₁) = √(k₀/(πl))·(x₁ − x₂)`.
pub fn segment_amplitude(x2: f64, x_lo: f64, x_hi: f64, params: &PropagationParams) -> Result<Complex64> {
    if !(x2.is_finite() && x_lo.is_finite() && x_hi.is_finite()) {
        return Err(Error::Domain("segment amplitude arguments must be finite"));
    }
    if x_lo >= x_hi {
        return Err(Error::Domain("segment must satisfy x_lo < x_hi"));
    }
    Ok(segment_amplitude_unchecked(x2, x_lo, x_hi, params.fresnel_scale()))
}

pub(crate) fn segment_amplitude_unchecked(x2: f64, x_lo: f64, x_hi: f64, scale: f64) -> Complex64 {
    let (c_hi, s_hi) = fresnel_pair(scale * (x_hi - x2));
    let (c_lo, s_lo) = fresnel_pair(scale * (x_lo - x2));
    Complex64::new(c_hi - c_lo, s_hi - s_lo)
}

/// Complex amplitudes on a uniform periodic grid.
///
/// Sample `j` sits at `x_min + j·dx` with `dx = (x_max − x_min)/n`; `x_max`
/// itself is the periodic image of `x_min` and carries no sample.
#[derive(Debug, Clone, PartialEq)]
pub struct GridWavefunction {
    x_min: f64,
    x_max: f64,
    amplitudes: Vec<Complex64>,
}

impl GridWavefunction {
    /// `n` must be a power of two (the spectral propagator is radix-2).
    pub fn new(x_min: f64, x_max: f64, amplitudes: Vec<Complex64>) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && x_max > x_min) {
            return Err(Error::Domain("grid requires finite x_min < x_max"));
        }
        let n = amplitudes.len();
        if n < 2 || !n.is_power_of_two() {
            return Err(Error::Domain("grid size must be a power of two ≥ 2"));
        }
        let grid = Self { x_min, x_max, amplitudes };
        if !grid.norm_sqr().is_finite() {
            return Err(Error::Domain("grid wavefunction norm is not finite"));
        }
        Ok(grid)
    }

    pub fn from_fn(x_min: f64, x_max: f64, n: usize, mut f: impl FnMut(f64) -> Complex64) -> Result<Self> {
        let dx = (x_max - x_min) / n as f64;
        let amplitudes = (0..n).map(|j| f(x_min + j as f64 * dx)).collect();
        Self::new(x_min, x_max, amplitudes)
    }

    /// Each sample is the mean of the real function over its cell
    /// `[x_j − dx/2, x_j + dx/2]`, given `cell_integral(a, b) = ∫_a^b f`.
    pub fn from_cell_integrals(
        x_min: f64,
        x_max: f64,
        n: usize,
        mut cell_integral: impl FnMut(f64, f64) -> f64,
    ) -> Result<Self> {
        let dx = (x_max - x_min) / n as f64;
        let amplitudes = (0..n)
            .map(|j| {
                let x = x_min + j as f64 * dx;
                Complex64::new(cell_integral(x - 0.5 * dx, x + 0.5 * dx) / dx, 0.0)
            })
            .collect();
        Self::new(x_min, x_max, amplitudes)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.len() as f64
    }

    pub fn position(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.dx()
    }

    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        let dx = self.dx();
        (0..self.len()).map(move |j| self.x_min + j as f64 * dx)
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    /// Squared norm by the (periodic) trapezoid rule.
    pub fn norm_sqr(&self) -> f64 {
        self.dx() * self.amplitudes.iter().map(Complex64::norm_sqr).sum::<f64>()
    }

    /// `∫ conj(self)·other dx` on a shared grid.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.len() != other.len() || self.x_min != other.x_min || self.x_max != other.x_max {
            return Err(Error::Domain("inner product needs identical grids"));
        }
        let sum: Complex64 = self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum();
        Ok(sum * self.dx())
    }

    /// Squared norm carried by samples with `lo ≤ x < hi`.
    pub fn mass_between(&self, lo: f64, hi: f64) -> f64 {
        let dx = self.dx();
        self.positions()
            .zip(&self.amplitudes)
            .filter(|(x, _)| *x >= lo && *x < hi)
            .map(|(_, a)| a.norm_sqr())
            .sum::<f64>()
            * dx
    }

    /// Fraction of the squared norm inside the outer `fraction` of the domain
    /// at each end.
    pub fn guard_mass_fraction(&self, fraction: f64) -> f64 {
        let total = self.norm_sqr();
        if total == 0.0 {
            return 0.0;
        }
        let span = self.x_max - self.x_min;
        let inner_lo = self.x_min + fraction * span;
        let inner_hi = self.x_max - fraction * span;
        (total - self.mass_between(inner_lo, inner_hi)) / total
    }
}

/// Outer strips of the periodic domain that should stay (nearly) empty.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GuardBand {
    /// Width of each strip as a fraction of the domain span.
    pub fraction: f64,
    /// Largest tolerated fraction of the squared norm inside the strips.
    pub tolerance: f64,
}

impl Default for GuardBand {
    fn default() -> Self {
        Self { fraction: 0.125, tolerance: 1e-6 }
    }
}

impl GuardBand {
    pub fn check(&self, psi: &GridWavefunction) -> Option<Warning> {
        let guard_mass_fraction = psi.guard_mass_fraction(self.fraction);
        (guard_mass_fraction > self.tolerance).then_some(Warning::Aliasing { guard_mass_fraction })
    }
}

/// Spectral propagator for one grid and one step distance, reusable across
/// many applications.
#[derive(Debug, Clone)]
pub struct GridPropagator {
    fft: Radix2Fft,
    phases: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl GridPropagator {
    pub fn new(n: usize, dx: f64, params: &PropagationParams) -> Result<Self> {
        let fft = Radix2Fft::new(n)?;
        let factor = params.distance() / (2.0 * params.k0());
        let phases = angular_frequencies(n, dx)
            .into_iter()
            .map(|k| {
                let phase = -k * k * factor;
                Complex64::new(libm::cos(phase), libm::sin(phase))
            })
            .collect();
        Ok(Self { fft, phases, scratch: Vec::with_capacity(n) })
    }

    pub fn for_grid(psi: &GridWavefunction, params: &PropagationParams) -> Result<Self> {
        Self::new(psi.len(), psi.dx(), params)
    }

    /// Propagates in place.
    pub fn apply(&mut self, psi: &mut GridWavefunction) {
        assert_eq!(psi.len(), self.fft.len(), "propagator planned for a different grid size");
        self.scratch.clear();
        self.scratch.extend_from_slice(psi.amplitudes());
        self.fft.forward(&mut self.scratch);
        for (z, p) in self.scratch.iter_mut().zip(&self.phases) {
            *z *= p;
        }
        self.fft.inverse(&mut self.scratch);
        psi.amplitudes_mut().copy_from_slice(&self.scratch);
    }
}

/// Applies the paraxial evolution over `params.distance()` spectrally.
///
/// The grid is periodic; an [`Warning::Aliasing`] is attached when the output
/// carries more than `guard.tolerance` of its norm inside the guard band.
pub fn propagate_grid(
    psi: &GridWavefunction,
    params: &PropagationParams,
    guard: &GuardBand,
) -> Result<Diagnosed<GridWavefunction>> {
    let mut out = psi.clone();
    GridPropagator::for_grid(psi, params)?.apply(&mut out);
    let mut result = Diagnosed::clean(out);
    result.warnings.extend(guard.check(&result.value));
    Ok(result)
}
