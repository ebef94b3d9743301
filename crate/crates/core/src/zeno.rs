//! The bomb as a detector that checks its region at equal intervals while the
//! photon propagates.
//!
//! Time enters only through the propagation distance `l = cΔt`. Between checks
//! the photon evolves freely on the grid; at each check the amplitude inside
//! the bomb region `|x| ≤ b/2` is removed without renormalizing, so the squared
//! norm of the remaining branch is the joint probability of having survived
//! every check so far.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::apertures::{ApparatusGeometry, PiecewiseConstant, SlitHypothesis};
use crate::exec::map_indices;
use crate::propagation::{GridPropagator, GridWavefunction, GuardBand, PropagationParams};
use crate::{Diagnosed, Error, Result, Warning};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
}

impl GridSpec {
    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ZenoConfig {
    grid: GridSpec,
    geometry: ApparatusGeometry,
    total_distance: f64,
    n_measurements: usize,
    guard: GuardBand,
}

impl ZenoConfig {
    pub fn new(
        grid: GridSpec,
        geometry: ApparatusGeometry,
        total_distance: f64,
        n_measurements: usize,
        guard: GuardBand,
    ) -> Result<Self> {
        if !(total_distance.is_finite() && total_distance > 0.0) {
            return Err(Error::Domain("total distance must be positive"));
        }
        if n_measurements == 0 {
            return Err(Error::Domain("at least one measurement is required"));
        }
        if !(grid.x_min.is_finite() && grid.x_max.is_finite() && grid.x_max > grid.x_min) {
            return Err(Error::Domain("grid requires finite x_min < x_max"));
        }
        if grid.n < 2 || !grid.n.is_power_of_two() {
            return Err(Error::Domain("grid size must be a power of two ≥ 2"));
        }
        if !(guard.fraction >= 0.0 && guard.fraction < 0.5) {
            return Err(Error::Domain("guard fraction must lie in [0, 0.5)"));
        }
        let span = grid.x_max - grid.x_min;
        let half_bomb = 0.5 * geometry.b();
        if -half_bomb <= grid.x_min + guard.fraction * span || half_bomb >= grid.x_max - guard.fraction * span {
            return Err(Error::Domain("bomb region must lie inside the grid, clear of the guard band"));
        }
        Ok(Self { grid, geometry, total_distance, n_measurements, guard })
    }

    /// 4096 points over `[−128, 128)`, a 64λ slit with an 8λ bomb, and 32λ of
    /// propagation checked once.
    pub fn desk_scale() -> Self {
        Self {
            grid: GridSpec { x_min: -128.0, x_max: 128.0, n: 4096 },
            geometry: ApparatusGeometry::new(64.0, 8.0, 32.0).expect("valid desk geometry"),
            total_distance: 32.0,
            n_measurements: 1,
            guard: GuardBand::default(),
        }
    }

    pub fn with_measurements(mut self, n_measurements: usize) -> Result<Self> {
        if n_measurements == 0 {
            return Err(Error::Domain("at least one measurement is required"));
        }
        self.n_measurements = n_measurements;
        Ok(self)
    }

    pub fn with_total_distance(self, total_distance: f64) -> Result<Self> {
        Self::new(self.grid, self.geometry, total_distance, self.n_measurements, self.guard)
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn geometry(&self) -> &ApparatusGeometry {
        &self.geometry
    }

    pub fn total_distance(&self) -> f64 {
        self.total_distance
    }

    pub fn n_measurements(&self) -> usize {
        self.n_measurements
    }

    pub fn step_distance(&self) -> f64 {
        self.total_distance / self.n_measurements as f64
    }

    pub fn guard(&self) -> GuardBand {
        self.guard
    }

    fn in_bomb(&self, x: f64) -> bool {
        x.abs() <= 0.5 * self.geometry.b()
    }
}

/// Hard-edged slit state of `h`, cell-averaged onto the grid.
pub fn slit_state_on_grid(h: SlitHypothesis, g: &ApparatusGeometry, grid: GridSpec) -> Result<GridWavefunction> {
    PiecewiseConstant::slit_state(h, g).sample(grid.x_min, grid.x_max, grid.n)
}

/// Slit state of `h` whose edges rise over `edge_width` with a raised-cosine
/// profile inside the open region, normalized on the grid.
pub fn apodized_slit_state(
    h: SlitHypothesis,
    g: &ApparatusGeometry,
    grid: GridSpec,
    edge_width: f64,
) -> Result<GridWavefunction> {
    if edge_width.is_nan() || edge_width <= 0.0 {
        return Err(Error::Domain("edge width must be positive"));
    }
    let ramp = |d: f64| {
        if d <= 0.0 {
            0.0
        } else if d >= edge_width {
            1.0
        } else {
            0.5 - 0.5 * libm::cos(PI * d / edge_width)
        }
    };
    let (hw, hb) = (0.5 * g.w(), 0.5 * g.b());
    let mut psi = GridWavefunction::from_fn(grid.x_min, grid.x_max, grid.n, |x| {
        let a = x.abs();
        let outer = ramp(hw - a);
        let inner = match h {
            SlitHypothesis::NoBomb => 1.0,
            SlitHypothesis::Bomb => ramp(a - hb),
        };
        Complex64::new(outer * inner, 0.0)
    })?;
    let norm = libm::sqrt(psi.norm_sqr());
    if norm == 0.0 {
        return Err(Error::Domain("edge width leaves no open region"));
    }
    for a in psi.amplitudes_mut() {
        *a /= norm;
    }
    Ok(psi)
}

/// The initial state used for the desk-scale sweep: the bomb-hypothesis slit
/// state with 2λ raised-cosine edges.
pub fn desk_scale_initial_state(cfg: &ZenoConfig) -> Result<GridWavefunction> {
    apodized_slit_state(SlitHypothesis::Bomb, cfg.geometry(), cfg.grid(), 2.0)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ZenoRun {
    pub p_absorbed: f64,
    /// Squared norm after each check.
    pub survival_curve: Vec<f64>,
    /// Squared norm found (and removed) in the bomb region at each check.
    pub absorbed_per_check: Vec<f64>,
}

/// Propagates `psi0` over the total distance in `n` equal steps, removing
/// the bomb-region amplitude after each step.
pub fn zeno_run(psi0: &GridWavefunction, cfg: &ZenoConfig) -> Result<Diagnosed<ZenoRun>> {
    let grid = cfg.grid();
    if psi0.len() != grid.n || psi0.x_min() != grid.x_min || psi0.x_max() != grid.x_max {
        return Err(Error::Domain("initial state does not live on the configured grid"));
    }
    let initial = psi0.norm_sqr();
    if (initial - 1.0).abs() > 1e-9 {
        return Err(Error::Domain("initial state must be normalized"));
    }
    let params = PropagationParams::new(cfg.geometry().k0(), cfg.step_distance())?;
    let mut propagator = GridPropagator::for_grid(psi0, &params)?;
    let inside: Vec<bool> = psi0.positions().map(|x| cfg.in_bomb(x)).collect();
    let dx = psi0.dx();

    let mut psi = psi0.clone();
    let mut survival_curve = Vec::with_capacity(cfg.n_measurements());
    let mut absorbed_per_check = Vec::with_capacity(cfg.n_measurements());
    let mut worst_guard: f64 = 0.0;
    for _ in 0..cfg.n_measurements() {
        propagator.apply(&mut psi);
        worst_guard = worst_guard.max(psi.guard_mass_fraction(cfg.guard().fraction));
        let mut caught = 0.0;
        for (a, &bomb) in psi.amplitudes_mut().iter_mut().zip(&inside) {
            if bomb {
                caught += a.norm_sqr();
                *a = Complex64::new(0.0, 0.0);
            }
        }
        absorbed_per_check.push(caught * dx);
        survival_curve.push(psi.norm_sqr());
    }
    let p_absorbed = (initial - survival_curve.last().copied().unwrap_or(initial)).clamp(0.0, 1.0);
    let mut out = Diagnosed::clean(ZenoRun { p_absorbed, survival_curve, absorbed_per_check });
    if worst_guard > cfg.guard().tolerance {
        out.warnings.push(Warning::Aliasing { guard_mass_fraction: worst_guard });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ZenoRow {
    pub n_measurements: usize,
    pub step_distance: f64,
    pub p_absorbed: f64,
}

/// One [`zeno_run`] per entry of `n_values` (ascending), sharing `psi0` and
/// the total distance. Rows are returned in input order.
pub fn zeno_sweep(psi0: &GridWavefunction, base: &ZenoConfig, n_values: &[usize]) -> Result<Diagnosed<Vec<ZenoRow>>> {
    if n_values.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Domain("measurement counts must be ascending"));
    }
    let configs = n_values.iter().map(|&n| base.with_measurements(n)).collect::<Result<Vec<_>>>()?;
    let runs = map_indices(configs.len(), |i| zeno_run(psi0, &configs[i]));
    let mut rows = Vec::with_capacity(runs.len());
    let mut warnings = Vec::new();
    for (cfg, run) in configs.iter().zip(runs) {
        let run = run?;
        for w in run.warnings {
            if !warnings.contains(&w) {
                warnings.push(w);
            }
        }
        rows.push(ZenoRow {
            n_measurements: cfg.n_measurements(),
            step_distance: cfg.step_distance(),
            p_absorbed: run.value.p_absorbed,
        });
    }
    Ok(Diagnosed { value: rows, warnings })
}

/// Measurement counts used by the desk-scale sweep.
pub const DESK_SCALE_SWEEP: [usize; 6] = [1, 2, 4, 8, 16, 32];
