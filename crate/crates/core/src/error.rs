use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("invalid geometry: {0}")]
    Geometry(&'static str),
    #[error("invalid classifier configuration: {0}")]
    Classifier(&'static str),
    #[error("posterior undefined at x2 = {x2}: both likelihoods vanish")]
    UndefinedPosterior { x2: f64 },
    #[error("pattern has zero mass")]
    ZeroMass,
}

/// Numerical diagnostics that do not invalidate a result.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum Warning {
    /// Fresnel number `w²/l2` is not small; the paraxial model is stretched.
    ParaxialFresnelNumber { fresnel_number: f64 },
    /// The sampling window holds less than 99% of the mass found in a window
    /// three times as wide.
    WindowTooSmall { captured_fraction: f64 },
    /// Probability mass in the grid's guard band exceeds the tolerance, so
    /// periodic wrap-around may have polluted the result.
    Aliasing { guard_mass_fraction: f64 },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::ParaxialFresnelNumber { fresnel_number } => {
                write!(f, "Fresnel number {fresnel_number:.3} is not small (paraxial model stretched)")
            }
            Warning::WindowTooSmall { captured_fraction } => {
                write!(f, "window captures only {:.4}% of the pattern mass", 100.0 * captured_fraction)
            }
            Warning::Aliasing { guard_mass_fraction } => {
                write!(f, "guard band holds {guard_mass_fraction:.3e} of the norm (aliasing risk)")
            }
        }
    }
}

/// A value together with the warnings raised while computing it.
#[derive(Debug, Clone, PartialEq)]
pub struct Diagnosed<T> {
    pub value: T,
    pub warnings: Vec<Warning>,
}

impl<T> Diagnosed<T> {
    pub fn clean(value: T) -> Self {
        Self { value, warnings: Vec::new() }
    }

    pub fn is_clean(&self) -> bool {
        self.warnings.is_empty()
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Diagnosed<U> {
        Diagnosed { value: f(self.value), warnings: self.warnings }
    }
}
