//! Diffraction-based interaction-free measurement.
//!
//! A photon crosses a slit that may hold a perfectly sensitive absorber (the
//! "bomb") in its middle. When the bomb is present but does not fire, the slit
//! behaves as a double slit and the screen pattern acquires intensity where the
//! plain single-slit pattern is dark. This crate models that scene end to end:
//!
//! * [`fresnel`] and [`propagation`]: Fresnel integrals, analytic aperture
//!   amplitudes and a spectral (FFT) paraxial propagator.
//! * [`apertures`]: the slit-plane states of both hypotheses and the dark state.
//! * [`screen`]: binned screen patterns, dark points and survival probabilities.
//! * [`inference`]: posterior, threshold classifier and efficiency measures.
//! * [`momentum`]: transverse momentum distributions and kick statistics.
//! * [`montecarlo`]: seeded single-photon trials and classification experiments.
//! * [`zeno`]: the bomb as a periodic projective detector during propagation.
//!
//! All lengths are in units of the wavelength, so the longitudinal wavenumber
//! is `2π`.
//!
//! The crate is `no_std` (with `alloc`) when built without default features.
//! The `parallel` feature spreads pattern evaluation and Monte Carlo trials
//! over a rayon pool; results are bit-identical for any thread count.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod apertures;
mod error;
mod exec;
pub mod fft;
pub mod fresnel;
pub mod inference;
pub mod momentum;
pub mod montecarlo;
pub mod propagation;
pub mod quadrature;
pub mod screen;
pub mod zeno;

pub use apertures::{ApparatusGeometry, SlitHypothesis};
pub use error::{Diagnosed, Error, Warning};
pub use inference::{Classification, ClassifierConfig, Label, LikelihoodMode};
pub use montecarlo::{ExperimentReport, TrialOutcome};
pub use propagation::{GridWavefunction, PropagationParams};
pub use screen::{Axis, Normalization, SampledPattern, Window};
pub use zeno::ZenoConfig;

/// Longitudinal wavenumber when lengths are measured in wavelengths.
pub const K0: f64 = 2.0 * core::f64::consts::PI;

pub type Result<T, E = Error> = core::result::Result<T, E>;
