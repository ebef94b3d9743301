//! Fresnel integrals `C(x) = ∫₀ˣ cos(πt²/2) dt` and `S(x) = ∫₀ˣ sin(πt²/2) dt`.
//!
//! Three regimes, all written in terms of the auxiliary functions `f`, `g`
//! (`C = ½ + f·sin(πx²/2) − g·cos(πx²/2)`, `S = ½ − f·cos(πx²/2) − g·sin(πx²/2)`)
//! except the first:
//!
//! * `|x| < 1`: Maclaurin series of `∫₀ˣ exp(iπt²/2) dt`.
//! * `1 ≤ |x| ≤ 20`: `f` and `g` from their Laplace-type integrals
//!   `f = (√2/π)∫₀^∞ e^{-πx²s²/2}/(1+s⁴) ds`, `g = (√2/π)∫₀^∞ s² e^{-πx²s²/2}/(1+s⁴) ds`,
//!   by adaptive Gauss–Kronrod quadrature. The integrands are smooth and
//!   Gaussian-damped, so no oscillation has to be resolved.
//! * `|x| > 20`: asymptotic expansions of `f` and `g` in powers of `1/(πx²)²`,
//!   whose truncation error there is far below double precision.

use core::f64::consts::{PI, SQRT_2};

use crate::{quadrature, Error, Result};

const SERIES_LIMIT: f64 = 1.0;
const ASYMPTOTIC_LIMIT: f64 = 20.0;

/// `(C(x), S(x))`. Fails only for non-finite input.
pub fn fresnel_cs(x: f64) -> Result<(f64, f64)> {
    if !x.is_finite() {
        return Err(Error::Domain("Fresnel integral argument must be finite"));
    }
    Ok(fresnel_pair(x))
}

/// Unchecked variant for arguments already known to be finite.
pub(crate) fn fresnel_pair(x: f64) -> (f64, f64) {
    let ax = x.abs();
    let (c, s) = if ax < SERIES_LIMIT {
        series(ax)
    } else {
        let (f, g) = if ax <= ASYMPTOTIC_LIMIT { auxiliary_quadrature(ax) } else { auxiliary_asymptotic(ax) };
        let phase = 0.5 * PI * ax * ax;
        let (sin, cos) = (libm::sin(phase), libm::cos(phase));
        (0.5 + f * sin - g * cos, 0.5 - f * cos - g * sin)
    };
    if x < 0.0 {
        (-c, -s)
    } else {
        (c, s)
    }
}

// x·Σ (iz)^m / (m!(2m+1)), z = πx²/2
fn series(x: f64) -> (f64, f64) {
    let z = 0.5 * PI * x * x;
    let mut power = 1.0; // z^m / m!
    let (mut c, mut s) = (0.0, 0.0);
    for m in 0..60_u32 {
        let term = power / f64::from(2 * m + 1);
        match m % 4 {
            0 => c += term,
            1 => s += term,
            2 => c -= term,
            _ => s -= term,
        }
        power *= z / f64::from(m + 1);
        if power < 1e-18 {
            break;
        }
    }
    (x * c, x * s)
}

fn auxiliary_quadrature(x: f64) -> (f64, f64) {
    let a = 0.5 * PI * x * x;
    // e^{-a s²} < e^{-45} past this point; the rational factor only shrinks it.
    let upper = libm::sqrt(45.0 / a);
    let r = quadrature::integrate_n(
        |s| {
            let s2 = s * s;
            let damped = libm::exp(-a * s2) / (1.0 + s2 * s2);
            [damped, s2 * damped]
        },
        0.0,
        upper,
        1e-16,
        1e-14,
    );
    (SQRT_2 / PI * r.value[0], SQRT_2 / PI * r.value[1])
}

fn auxiliary_asymptotic(x: f64) -> (f64, f64) {
    let inv = 1.0 / (PI * x * x);
    let inv2 = inv * inv;
    let (mut f_sum, mut g_sum) = (0.0, 0.0);
    let (mut f_term, mut g_term) = (1.0_f64, 1.0_f64);
    for m in 0..40_u32 {
        f_sum += f_term;
        g_sum += g_term;
        let k = f64::from(4 * m);
        let f_next = -f_term * (k + 1.0) * (k + 3.0) * inv2;
        let g_next = -g_term * (k + 3.0) * (k + 5.0) * inv2;
        if f_next.abs() >= f_term.abs() || (f_next.abs() < 1e-18 && g_next.abs() < 1e-18) {
            break;
        }
        f_term = f_next;
        g_term = g_next;
    }
    (f_sum / (PI * x), g_sum / (PI * PI * x * x * x))
}
