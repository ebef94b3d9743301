//! Bayesian bomb detection from a single screen hit, and IFM efficiencies.

use alloc::vec::Vec;

use crate::apertures::{ApparatusGeometry, SlitHypothesis};
use crate::exec::map_indices;
use crate::screen::{
    amplitude_at_screen, bin_center, pattern, survival_probability, Normalization, SampledPattern, Window,
};
use crate::{Diagnosed, Error, Result};

/// How the bomb-case likelihood is normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum LikelihoodMode {
    /// The likelihood of a screen detection: the bomb-case density keeps its
    /// sub-unit mass `(w−b)/w`, since explosions produce no screen hit.
    FluxAware,
    /// Both densities rescaled to unit mass.
    UnitNormalized,
}

impl LikelihoodMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            LikelihoodMode::FluxAware => "flux_aware",
            LikelihoodMode::UnitNormalized => "unit_normalized",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ClassifierConfig {
    prior_bomb: f64,
    threshold: f64,
    likelihood_mode: LikelihoodMode,
}

impl ClassifierConfig {
    /// `prior_bomb ∈ [0, 1]`, `threshold ∈ (0.5, 1]`.
    pub fn new(prior_bomb: f64, threshold: f64, likelihood_mode: LikelihoodMode) -> Result<Self> {
        if !(0.0..=1.0).contains(&prior_bomb) {
            return Err(Error::Classifier("prior must lie in [0, 1]"));
        }
        if !(threshold > 0.5 && threshold <= 1.0) {
            return Err(Error::Classifier("threshold must lie in (0.5, 1]"));
        }
        Ok(Self { prior_bomb, threshold, likelihood_mode })
    }

    pub fn prior_bomb(&self) -> f64 {
        self.prior_bomb
    }

    pub fn prior_no_bomb(&self) -> f64 {
        1.0 - self.prior_bomb
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn likelihood_mode(&self) -> LikelihoodMode {
        self.likelihood_mode
    }
}

impl Default for ClassifierConfig {
    /// Prior 0.5, threshold 0.99, flux-aware likelihoods.
    fn default() -> Self {
        Self { prior_bomb: 0.5, threshold: 0.99, likelihood_mode: LikelihoodMode::FluxAware }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Label {
    BombPresent,
    BombAbsent,
    Inconclusive,
}

impl Label {
    pub fn as_str(&self) -> &'static str {
        match self {
            Label::BombPresent => "bomb_present",
            Label::BombAbsent => "bomb_absent",
            Label::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Classification {
    pub label: Label,
    pub posterior: f64,
}

/// `(P(x₂|Bomb), P(x₂|NoBomb))` under `mode`.
pub fn likelihoods(x2: f64, g: &ApparatusGeometry, mode: LikelihoodMode) -> (f64, f64) {
    let bomb = amplitude_at_screen(SlitHypothesis::Bomb, x2, g).norm_sqr();
    let none = amplitude_at_screen(SlitHypothesis::NoBomb, x2, g).norm_sqr();
    let bomb_mass = match mode {
        LikelihoodMode::FluxAware => g.w(),
        LikelihoodMode::UnitNormalized => g.w() - g.b(),
    };
    (bomb / (2.0 * bomb_mass), none / (2.0 * g.w()))
}

/// Bayes' rule for the two hypotheses.
pub fn posterior_from_likelihoods(bomb: f64, none: f64, prior_bomb: f64) -> Option<f64> {
    let joint_bomb = bomb * prior_bomb;
    let evidence = joint_bomb + none * (1.0 - prior_bomb);
    (evidence > 0.0).then(|| joint_bomb / evidence)
}

/// `P(Bomb | x₂)`.
pub fn posterior(x2: f64, g: &ApparatusGeometry, cfg: &ClassifierConfig) -> Result<f64> {
    let (bomb, none) = likelihoods(x2, g, cfg.likelihood_mode);
    posterior_from_likelihoods(bomb, none, cfg.prior_bomb).ok_or(Error::UndefinedPosterior { x2 })
}

/// Threshold labelling; both comparisons are inclusive.
pub fn label_for(posterior: f64, threshold: f64) -> Label {
    if posterior >= threshold {
        Label::BombPresent
    } else if 1.0 - posterior >= threshold {
        Label::BombAbsent
    } else {
        Label::Inconclusive
    }
}

pub fn classify(x2: f64, g: &ApparatusGeometry, cfg: &ClassifierConfig) -> Result<Classification> {
    let posterior = posterior(x2, g, cfg)?;
    Ok(Classification { label: label_for(posterior, cfg.threshold), posterior })
}

/// Posterior at every bin centre of `window`; `None` where undefined.
pub fn posterior_table(
    g: &ApparatusGeometry,
    prior_bomb: f64,
    mode: LikelihoodMode,
    window: Window,
    bin_width: f64,
) -> Result<Vec<Option<f64>>> {
    let n = window.bin_count(bin_width)?;
    Ok(map_indices(n, |i| {
        let (bomb, none) = likelihoods(bin_center(window.lo, bin_width, i), g, mode);
        posterior_from_likelihoods(bomb, none, prior_bomb)
    }))
}

/// Threshold-based efficiency and its ingredients.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct EfficiencyReport {
    pub eta_tilde: f64,
    /// `P(Explosion|Bomb) / P(IFM detection|Bomb)`; absent when no bin
    /// clears the threshold.
    pub explosions_per_detection: Option<f64>,
    pub mode: LikelihoodMode,
    #[cfg_attr(feature = "serde", serde(rename = "T"))]
    pub threshold: f64,
    pub prior: f64,
    /// Bomb-case probability mass of bins whose posterior clears the threshold.
    pub detection_probability: f64,
    pub explosion_probability: f64,
}

/// `η̃(T, P(Bomb))`: the flux-normalized bomb-case mass of bins whose
/// posterior is at least `T`, relative to that mass plus the explosion
/// probability `b/w`.
pub fn eta_tilde(
    g: &ApparatusGeometry,
    cfg: &ClassifierConfig,
    window: Window,
    bin_width: f64,
) -> Result<Diagnosed<EfficiencyReport>> {
    eta_tilde_at_threshold(g, cfg.prior_bomb, cfg.likelihood_mode, cfg.threshold, window, bin_width)
}

/// [`eta_tilde`] for any threshold in `[0, 1]`, including the degenerate
/// `T ≤ 0.5` range that a classifier would reject.
pub fn eta_tilde_at_threshold(
    g: &ApparatusGeometry,
    prior_bomb: f64,
    mode: LikelihoodMode,
    threshold: f64,
    window: Window,
    bin_width: f64,
) -> Result<Diagnosed<EfficiencyReport>> {
    if !(0.0..=1.0).contains(&threshold) {
        return Err(Error::Classifier("threshold must lie in [0, 1]"));
    }
    if !(0.0..=1.0).contains(&prior_bomb) {
        return Err(Error::Classifier("prior must lie in [0, 1]"));
    }
    let flux = pattern(SlitHypothesis::Bomb, g, window, bin_width, Normalization::FluxMass)?;
    let posteriors = posterior_table(g, prior_bomb, mode, window, bin_width)?;
    let report = efficiency_from_tables(&flux.value, &posteriors, g, prior_bomb, mode, threshold);
    Ok(Diagnosed { value: report, warnings: flux.warnings })
}

pub(crate) fn efficiency_from_tables(
    bomb_flux: &SampledPattern,
    posteriors: &[Option<f64>],
    g: &ApparatusGeometry,
    prior: f64,
    mode: LikelihoodMode,
    threshold: f64,
) -> EfficiencyReport {
    let detection_probability: f64 = bomb_flux
        .bin_masses()
        .zip(posteriors)
        .filter(|(_, p)| p.is_some_and(|p| p >= threshold))
        .map(|(m, _)| m)
        .sum();
    let explosion_probability = 1.0 - survival_probability(SlitHypothesis::Bomb, g);
    EfficiencyReport {
        eta_tilde: detection_probability / (detection_probability + explosion_probability),
        explosions_per_detection: (detection_probability > 0.0).then(|| explosion_probability / detection_probability),
        mode,
        threshold,
        prior,
        detection_probability,
        explosion_probability,
    }
}

fn check_ratio(r: f64) -> Result<()> {
    if r > 0.0 && r < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain("bomb-to-slit ratio must lie in (0, 1)"))
    }
}

/// Efficiency of the optimal measurement, distinguishing `Ψ_NoBomb` from the
/// dark state: `(1 − r)/(2 − r)` with `r = b/w`.
pub fn eta_optimal(r: f64) -> Result<f64> {
    check_ratio(r)?;
    Ok((1.0 - r) / (2.0 - r))
}

/// Efficiency of the Mach–Zehnder bomb tester with beam-splitter reflectivity
/// `R`: `(1 − R)/(2 − R)`.
pub fn elitzur_vaidman_efficiency(reflectivity: f64) -> Result<f64> {
    if !(reflectivity > 0.0 && reflectivity < 1.0) {
        return Err(Error::Domain("reflectivity must lie in (0, 1)"));
    }
    Ok((1.0 - reflectivity) / (2.0 - reflectivity))
}

/// Outcome probabilities of the optimal measurement for a photon that reached
/// the open slit.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct OptimalOutcomes {
    pub ratio: f64,
    /// `(1 − r)²`
    pub p_bright: f64,
    /// `(1 − r)·r`
    pub p_dark: f64,
    /// `r`
    pub p_explosion: f64,
    /// `1 − r`, given no explosion.
    pub p_bright_given_survival: f64,
    /// `r`, given no explosion.
    pub p_dark_given_survival: f64,
}

impl OptimalOutcomes {
    pub fn eta(&self) -> f64 {
        self.p_dark / (self.p_dark + self.p_explosion)
    }
}

pub fn optimal_outcome_probabilities(r: f64) -> Result<OptimalOutcomes> {
    check_ratio(r)?;
    let survive = 1.0 - r;
    Ok(OptimalOutcomes {
        ratio: r,
        p_bright: survive * survive,
        p_dark: survive * r,
        p_explosion: r,
        p_bright_given_survival: survive,
        p_dark_given_survival: r,
    })
}
