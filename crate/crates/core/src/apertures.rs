//! Slit-plane states for the two hypotheses and the dark state.
//!
//! All three states are conditioned on the photon reaching the open part of the
//! slit (and, for the bomb case, on the bomb not firing), so each has unit norm:
//!
//! ```text
//! Ψ_NoBomb(x) = 1/√w                     |x| ≤ w/2
//! Ψ_Bomb(x)   = 1/√(w−b)                 b/2 ≤ |x| ≤ w/2
//! Φ(x)        = −√((w−b)/(wb))           |x| < b/2
//!               √(b/(w(w−b)))            b/2 ≤ |x| ≤ w/2
//! ```
//!
//! `{Ψ_NoBomb, Φ}` is orthonormal and `Ψ_Bomb = √((w−b)/w)·Ψ_NoBomb + √(b/w)·Φ`.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::propagation::GridWavefunction;
use crate::{quadrature, Error, Result, Warning, K0};

/// The physical scene, lengths in wavelengths.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ApparatusGeometry {
    w: f64,
    b: f64,
    l2: f64,
    k0: f64,
}

impl ApparatusGeometry {
    /// Slit width `w`, centred bomb length `b` and slit-to-screen distance
    /// `l2`; requires `0 < b < w` and `l2 > 0`.
    pub fn new(w: f64, b: f64, l2: f64) -> Result<Self> {
        if !(w.is_finite() && w > 0.0) {
            return Err(Error::Geometry("slit width must be positive and finite"));
        }
        if !(b.is_finite() && b > 0.0 && b < w) {
            return Err(Error::Geometry("bomb length must satisfy 0 < b < w"));
        }
        if !(l2.is_finite() && l2 > 0.0) {
            return Err(Error::Geometry("screen distance must be positive and finite"));
        }
        Ok(Self { w, b, l2, k0: K0 })
    }

    /// The geometry behind the headline screen patterns: `w = 1000`,
    /// `b = 500`, `l2 = 6·10⁶`.
    pub fn reference() -> Self {
        Self { w: 1000.0, b: 500.0, l2: 6e6, k0: K0 }
    }

    pub fn w(&self) -> f64 {
        self.w
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn l2(&self) -> f64 {
        self.l2
    }

    pub fn k0(&self) -> f64 {
        self.k0
    }

    /// Bomb-to-slit ratio `b/w`.
    pub fn ratio(&self) -> f64 {
        self.b / self.w
    }

    /// `w²/(λ·l2)`.
    pub fn fresnel_number(&self) -> f64 {
        self.w * self.w / self.l2
    }

    /// Non-fatal diagnostics: a Fresnel number above one means the slit is
    /// viewed in the near field, where the paraxial model is least reliable.
    pub fn diagnostics(&self) -> Vec<Warning> {
        let fresnel_number = self.fresnel_number();
        if fresnel_number > 1.0 {
            alloc::vec![Warning::ParaxialFresnelNumber { fresnel_number }]
        } else {
            Vec::new()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SlitHypothesis {
    NoBomb,
    Bomb,
}

impl SlitHypothesis {
    pub const ALL: [SlitHypothesis; 2] = [SlitHypothesis::NoBomb, SlitHypothesis::Bomb];

    pub fn as_str(&self) -> &'static str {
        match self {
            SlitHypothesis::NoBomb => "no_bomb",
            SlitHypothesis::Bomb => "bomb",
        }
    }
}

/// Slit-plane wavefunction of hypothesis `h` at `x1`.
pub fn slit_wavefunction(h: SlitHypothesis, x1: f64, g: &ApparatusGeometry) -> f64 {
    let ax = x1.abs();
    match h {
        SlitHypothesis::NoBomb if ax <= 0.5 * g.w => libm::sqrt(1.0 / g.w),
        SlitHypothesis::Bomb if ax >= 0.5 * g.b && ax <= 0.5 * g.w => libm::sqrt(1.0 / (g.w - g.b)),
        _ => 0.0,
    }
}

/// The state orthogonal to `Ψ_NoBomb` within the span of the two hypotheses.
pub fn dark_state(x1: f64, g: &ApparatusGeometry) -> f64 {
    let ax = x1.abs();
    if ax < 0.5 * g.b {
        -libm::sqrt((g.w - g.b) / (g.w * g.b))
    } else if ax <= 0.5 * g.w {
        libm::sqrt(g.b / (g.w * (g.w - g.b)))
    } else {
        0.0
    }
}

/// `(c_bright, c_dark) = (√((w−b)/w), √(b/w))`, the coefficients of
/// `Ψ_Bomb` on `Ψ_NoBomb` and `Φ`.
pub fn decomposition_coefficients(g: &ApparatusGeometry) -> (f64, f64) {
    (libm::sqrt((g.w - g.b) / g.w), libm::sqrt(g.b / g.w))
}

/// A real function that is constant on finitely many disjoint intervals and
/// zero elsewhere. Interval endpoints carry measure zero.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseConstant {
    pieces: Vec<(f64, f64, f64)>,
}

impl PiecewiseConstant {
    /// Pieces `(lo, hi, value)` must be non-degenerate, sorted and disjoint.
    pub fn new(pieces: Vec<(f64, f64, f64)>) -> Result<Self> {
        for p in &pieces {
            if !(p.0.is_finite() && p.1.is_finite() && p.2.is_finite() && p.0 < p.1) {
                return Err(Error::Domain("piece must be finite with lo < hi"));
            }
        }
        if pieces.windows(2).any(|pair| pair[0].1 > pair[1].0) {
            return Err(Error::Domain("pieces must be sorted and disjoint"));
        }
        Ok(Self { pieces })
    }

    pub fn slit_state(h: SlitHypothesis, g: &ApparatusGeometry) -> Self {
        let (hw, hb) = (0.5 * g.w, 0.5 * g.b);
        let pieces = match h {
            SlitHypothesis::NoBomb => alloc::vec![(-hw, hw, libm::sqrt(1.0 / g.w))],
            SlitHypothesis::Bomb => {
                let v = libm::sqrt(1.0 / (g.w - g.b));
                alloc::vec![(-hw, -hb, v), (hb, hw, v)]
            }
        };
        Self { pieces }
    }

    pub fn dark_state(g: &ApparatusGeometry) -> Self {
        let (hw, hb) = (0.5 * g.w, 0.5 * g.b);
        let inner = -libm::sqrt((g.w - g.b) / (g.w * g.b));
        let outer = libm::sqrt(g.b / (g.w * (g.w - g.b)));
        Self { pieces: alloc::vec![(-hw, -hb, outer), (-hb, hb, inner), (hb, hw, outer)] }
    }

    pub fn pieces(&self) -> &[(f64, f64, f64)] {
        &self.pieces
    }

    /// Value with half-open `[lo, hi)` pieces; use the dedicated state
    /// functions when boundary conventions matter.
    pub fn value(&self, x: f64) -> f64 {
        self.pieces.iter().find(|p| x >= p.0 && x < p.1).map_or(0.0, |p| p.2)
    }

    /// `∫_a^b f`.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        self.pieces.iter().map(|&(lo, hi, v)| (hi.min(b) - lo.max(a)).max(0.0) * v).sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.pieces.iter().map(|&(lo, hi, v)| (hi - lo) * v * v).sum()
    }

    /// Exact `∫ f·g` of two piecewise-constant functions.
    pub fn dot(&self, other: &Self) -> f64 {
        let mut total = 0.0;
        for &(a_lo, a_hi, a) in &self.pieces {
            for &(b_lo, b_hi, b) in &other.pieces {
                let len = a_hi.min(b_hi) - a_lo.max(b_lo);
                if len > 0.0 {
                    total += len * a * b;
                }
            }
        }
        total
    }

    /// Cell-averaged samples on a periodic grid.
    pub fn sample(&self, x_min: f64, x_max: f64, n: usize) -> Result<GridWavefunction> {
        GridWavefunction::from_cell_integrals(x_min, x_max, n, |a, b| self.integral(a, b))
    }

    fn support(&self) -> Option<(f64, f64)> {
        Some((self.pieces.first()?.0, self.pieces.last()?.1))
    }
}

/// A square-integrable slit-plane state.
pub enum SlitPlaneState<'a> {
    Piecewise(&'a PiecewiseConstant),
    /// An arbitrary complex function vanishing outside `support`.
    Function { support: (f64, f64), f: &'a dyn Fn(f64) -> Complex64 },
}

impl SlitPlaneState<'_> {
    fn support(&self) -> Option<(f64, f64)> {
        match self {
            SlitPlaneState::Piecewise(p) => p.support(),
            SlitPlaneState::Function { support, .. } => Some(*support),
        }
    }

    fn eval(&self, x: f64) -> Complex64 {
        match self {
            SlitPlaneState::Piecewise(p) => Complex64::new(p.value(x), 0.0),
            SlitPlaneState::Function { f, .. } => f(x),
        }
    }

    fn breakpoints(&self, out: &mut Vec<f64>) {
        match self {
            SlitPlaneState::Piecewise(p) => {
                for &(lo, hi, _) in p.pieces() {
                    out.push(lo);
                    out.push(hi);
                }
            }
            SlitPlaneState::Function { support, .. } => {
                out.push(support.0);
                out.push(support.1);
            }
        }
    }
}

/// `∫ conj(f)·g dx`.
///
/// Closed form when both states are piecewise constant, otherwise adaptive
/// quadrature split at every breakpoint of either state.
pub fn overlap(f: &SlitPlaneState<'_>, g: &SlitPlaneState<'_>) -> Result<Complex64> {
    if let (SlitPlaneState::Piecewise(a), SlitPlaneState::Piecewise(b)) = (f, g) {
        return Ok(Complex64::new(a.dot(b), 0.0));
    }
    for state in [f, g] {
        if let Some((lo, hi)) = state.support() {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::Domain("state support must be a bounded interval"));
            }
            let norm = integrate_split(&[lo, hi], |x| state.eval(x).norm_sqr());
            if !norm.is_finite() {
                return Err(Error::Domain("state is not normalizable"));
            }
        }
    }
    let (Some(sf), Some(sg)) = (f.support(), g.support()) else {
        return Ok(Complex64::new(0.0, 0.0));
    };
    let (lo, hi) = (sf.0.max(sg.0), sf.1.min(sg.1));
    if lo >= hi {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut cuts = alloc::vec![lo, hi];
    f.breakpoints(&mut cuts);
    g.breakpoints(&mut cuts);
    cuts.retain(|c| *c >= lo && *c <= hi);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let re = integrate_split(&cuts, |x| (f.eval(x).conj() * g.eval(x)).re);
    let im = integrate_split(&cuts, |x| (f.eval(x).conj() * g.eval(x)).im);
    Ok(Complex64::new(re, im))
}

fn integrate_split(cuts: &[f64], mut integrand: impl FnMut(f64) -> f64) -> f64 {
    cuts.windows(2).map(|c| quadrature::integrate(&mut integrand, c[0], c[1], 1e-14, 1e-13).value[0]).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig2() -> ApparatusGeometry {
        ApparatusGeometry::reference()
    }

    #[test]
    fn geometry_validation() {
        assert!(ApparatusGeometry::new(1000.0, 0.0, 1.0).is_err());
        assert!(ApparatusGeometry::new(1000.0, 1000.0, 1.0).is_err());
        assert!(ApparatusGeometry::new(1000.0, 500.0, -1.0).is_err());
        assert!(ApparatusGeometry::new(-1.0, 0.5, 1.0).is_err());
        assert_eq!(ApparatusGeometry::new(1000.0, 500.0, 6e6).unwrap(), fig2());
        assert!(fig2().diagnostics().is_empty());
        let near = ApparatusGeometry::new(1000.0, 500.0, 1e4).unwrap();
        assert!(matches!(near.diagnostics()[0], Warning::ParaxialFresnelNumber { .. }));
    }

    #[test]
    fn slit_wavefunction_values() {
        let g = fig2();
        assert_eq!(slit_wavefunction(SlitHypothesis::NoBomb, 0.0, &g), libm::sqrt(1.0 / 1000.0));
        assert_eq!(slit_wavefunction(SlitHypothesis::Bomb, 0.0, &g), 0.0);
        for h in SlitHypothesis::ALL {
            assert_eq!(slit_wavefunction(h, 600.0, &g), 0.0);
            assert_eq!(slit_wavefunction(h, -600.0, &g), 0.0);
        }
        // boundary conventions
        assert!(slit_wavefunction(SlitHypothesis::Bomb, 250.0, &g) > 0.0);
        assert!(slit_wavefunction(SlitHypothesis::Bomb, 500.0, &g) > 0.0);
        assert!(slit_wavefunction(SlitHypothesis::NoBomb, 500.0, &g) > 0.0);
    }

    #[test]
    fn dark_state_values() {
        let g = fig2();
        assert_eq!(dark_state(0.0, &g), -libm::sqrt(500.0 / (1000.0 * 500.0)));
        assert_eq!(dark_state(0.0, &g), -libm::sqrt(1.0 / 1000.0));
        assert_eq!(dark_state(600.0, &g), 0.0);
        assert!((PiecewiseConstant::dark_state(&g).norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn overlaps() {
        let g = fig2();
        let dark = PiecewiseConstant::dark_state(&g);
        let none = PiecewiseConstant::slit_state(SlitHypothesis::NoBomb, &g);
        let bomb = PiecewiseConstant::slit_state(SlitHypothesis::Bomb, &g);
        let o = |a, b| overlap(&SlitPlaneState::Piecewise(a), &SlitPlaneState::Piecewise(b)).unwrap();
        assert_eq!(o(&dark, &none), Complex64::new(0.0, 0.0));
        assert!((o(&dark, &bomb).re - libm::sqrt(0.5)).abs() < 1e-12);
        assert!((o(&none, &none).re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn quadrature_overlap_matches_closed_form() {
        let g = ApparatusGeometry::new(10.0, 3.0, 100.0).unwrap();
        let f = |x: f64| Complex64::new(dark_state(x, &g), 0.0);
        let bomb = PiecewiseConstant::slit_state(SlitHypothesis::Bomb, &g);
        let via_quadrature =
            overlap(&SlitPlaneState::Function { support: (-5.0, 5.0), f: &f }, &SlitPlaneState::Piecewise(&bomb))
                .unwrap();
        assert!((via_quadrature.re - libm::sqrt(0.3)).abs() < 1e-12);
        assert!(via_quadrature.im.abs() < 1e-15);
    }

    #[test]
    fn non_normalizable_rejected() {
        let f = |_x: f64| Complex64::new(1.0, 0.0);
        let none = PiecewiseConstant::slit_state(SlitHypothesis::NoBomb, &fig2());
        let unbounded = SlitPlaneState::Function { support: (f64::NEG_INFINITY, 0.0), f: &f };
        assert!(overlap(&unbounded, &SlitPlaneState::Piecewise(&none)).is_err());
        let singular = |x: f64| Complex64::new(1.0 / x, 0.0);
        let pole = SlitPlaneState::Function { support: (0.0, 1.0), f: &singular };
        assert!(overlap(&pole, &SlitPlaneState::Piecewise(&none)).is_err());
    }

    #[test]
    fn decomposition() {
        let (cb, cd) = decomposition_coefficients(&fig2());
        assert!((cb - libm::sqrt(0.5)).abs() < 1e-16 && (cd - libm::sqrt(0.5)).abs() < 1e-16);
        assert!((cb * cb + cd * cd - 1.0).abs() < 1e-15);
        let tiny = ApparatusGeometry::new(1000.0, 1e-6, 6e6).unwrap();
        assert!(decomposition_coefficients(&tiny).1 < 1e-4);
    }

    #[test]
    fn piecewise_validation() {
        assert!(PiecewiseConstant::new(alloc::vec![(0.0, 1.0, 1.0), (0.5, 2.0, 1.0)]).is_err());
        assert!(PiecewiseConstant::new(alloc::vec![(1.0, 1.0, 1.0)]).is_err());
        let p = PiecewiseConstant::new(alloc::vec![(0.0, 1.0, 2.0), (1.0, 3.0, -1.0)]).unwrap();
        assert_eq!(p.integral(0.5, 2.0), 0.0);
        assert_eq!(p.norm_sqr(), 6.0);
    }
}
