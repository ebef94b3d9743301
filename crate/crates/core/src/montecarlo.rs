//! Seeded single-photon trials and the slit classification experiment.
//!
//! Every trial draws from its own ChaCha8 stream keyed by `(seed, class,
//! trial index)`, so outcomes do not depend on how trials are scheduled.
//! Screen positions are drawn by inverse-CDF sampling over the bins of the
//! screen pattern (the same binning the classifier and `η̃` use).

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::apertures::{ApparatusGeometry, SlitHypothesis};
use crate::exec::map_indices;
use crate::inference::{label_for, posterior_table, ClassifierConfig, Label, LikelihoodMode};
use crate::screen::{pattern, survival_probability, Normalization, SampledPattern, Window, DEFAULT_BIN_WIDTH};
use crate::{Diagnosed, Error, Result};

/// Inverse-CDF sampler over the bins of a pattern.
#[derive(Debug, Clone)]
pub struct BinSampler {
    x_lo: f64,
    bin_width: f64,
    cumulative: Vec<f64>,
}

impl BinSampler {
    /// Accepts `UnitMass` or `FluxMass` patterns; the total is renormalized.
    pub fn new(p: &SampledPattern) -> Result<Self> {
        if !matches!(p.normalization, Normalization::UnitMass | Normalization::FluxMass) {
            return Err(Error::Domain("sampler needs a UnitMass or FluxMass pattern"));
        }
        let mut running = 0.0;
        let cumulative: Vec<f64> = p
            .bin_masses()
            .map(|m| {
                running += m;
                running
            })
            .collect();
        if !(running > 0.0 && running.is_finite()) {
            return Err(Error::ZeroMass);
        }
        Ok(Self { x_lo: p.x_lo, bin_width: p.bin_width, cumulative })
    }

    pub fn len(&self) -> usize {
        self.cumulative.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cumulative.is_empty()
    }

    /// Bin whose cumulative interval contains `u·total`, for `u ∈ [0, 1)`.
    pub fn bin_for(&self, u: f64) -> usize {
        let total = self.cumulative[self.cumulative.len() - 1];
        let target = u * total;
        self.cumulative.partition_point(|&c| c <= target).min(self.cumulative.len() - 1)
    }

    pub fn bin_center(&self, i: usize) -> f64 {
        crate::screen::bin_center(self.x_lo, self.bin_width, i)
    }

    /// Draws a bin index.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        self.bin_for(rng.gen::<f64>())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum TrialOutcome {
    Explosion,
    Detection { bin: usize, bin_center: f64 },
}

/// Random stream of one trial.
pub fn trial_rng(seed: u64, h: SlitHypothesis, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let class_bit = match h {
        SlitHypothesis::NoBomb => 0,
        SlitHypothesis::Bomb => 1 << 63,
    };
    rng.set_stream(class_bit | index);
    rng
}

/// Photon source for both hypotheses, conditioned on reaching the open slit.
#[derive(Debug, Clone)]
pub struct TrialSimulator {
    explosion_probability: f64,
    no_bomb: BinSampler,
    bomb: BinSampler,
}

impl TrialSimulator {
    pub fn new(g: &ApparatusGeometry, window: Window, bin_width: f64) -> Result<Diagnosed<Self>> {
        let none = pattern(SlitHypothesis::NoBomb, g, window, bin_width, Normalization::FluxMass)?;
        let bomb = pattern(SlitHypothesis::Bomb, g, window, bin_width, Normalization::FluxMass)?;
        let mut warnings = none.warnings;
        warnings.extend(bomb.warnings);
        Ok(Diagnosed {
            value: Self {
                explosion_probability: 1.0 - survival_probability(SlitHypothesis::Bomb, g),
                no_bomb: BinSampler::new(&none.value)?,
                bomb: BinSampler::new(&bomb.value)?,
            },
            warnings,
        })
    }

    pub fn sampler(&self, h: SlitHypothesis) -> &BinSampler {
        match h {
            SlitHypothesis::NoBomb => &self.no_bomb,
            SlitHypothesis::Bomb => &self.bomb,
        }
    }

    /// One photon: under the bomb hypothesis it is absorbed with probability
    /// `b/w`, otherwise it lands in a bin drawn from the renormalized pattern.
    pub fn simulate_trial<R: Rng + ?Sized>(&self, h: SlitHypothesis, rng: &mut R) -> TrialOutcome {
        if h == SlitHypothesis::Bomb && rng.gen::<f64>() < self.explosion_probability {
            return TrialOutcome::Explosion;
        }
        let sampler = self.sampler(h);
        let bin = sampler.sample(rng);
        TrialOutcome::Detection { bin, bin_center: sampler.bin_center(bin) }
    }
}

/// Everything that determines an experiment besides the seed.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ExperimentConfig {
    pub geometry: ApparatusGeometry,
    pub classifier: ClassifierConfig,
    pub window: Window,
    pub bin_width: f64,
    pub n_bomb: u64,
    pub n_empty: u64,
}

impl ExperimentConfig {
    pub fn new(geometry: ApparatusGeometry, classifier: ClassifierConfig, n_bomb: u64, n_empty: u64) -> Self {
        Self { geometry, classifier, window: Window::default(), bin_width: DEFAULT_BIN_WIDTH, n_bomb, n_empty }
    }
}

/// One line of the per-trial log.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TrialRecord {
    pub trial: u64,
    pub true_class: SlitHypothesis,
    pub outcome: TrialOutcome,
    /// Posterior and label; absent for explosions.
    pub classification: Option<(f64, Label)>,
}

/// Tallies for slits of one true class.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ClassTally {
    pub n_total: u64,
    pub n_explosions: u64,
    /// Trials whose photon reached the screen.
    pub n_detections: u64,
    pub n_correct: u64,
    pub n_incorrect: u64,
    pub n_inconclusive: u64,
}

impl ClassTally {
    fn add(&mut self, truth: SlitHypothesis, record: &TrialRecord) {
        self.n_total += 1;
        match record.classification {
            None => self.n_explosions += 1,
            Some((_, label)) => {
                self.n_detections += 1;
                match (truth, label) {
                    (_, Label::Inconclusive) => self.n_inconclusive += 1,
                    (SlitHypothesis::Bomb, Label::BombPresent) | (SlitHypothesis::NoBomb, Label::BombAbsent) => {
                        self.n_correct += 1
                    }
                    _ => self.n_incorrect += 1,
                }
            }
        }
    }

    /// Correct classifications per screen detection.
    pub fn correct_fraction(&self) -> Option<f64> {
        ratio(self.n_correct, self.n_detections)
    }

    /// Wrong classifications per screen detection.
    pub fn incorrect_fraction(&self) -> Option<f64> {
        ratio(self.n_incorrect, self.n_detections)
    }

    /// Share of conclusive verdicts on these slits that were right.
    pub fn claim_accuracy(&self) -> Option<f64> {
        ratio(self.n_correct, self.n_correct + self.n_incorrect)
    }
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ExperimentReport {
    pub seed: u64,
    pub config: ExperimentConfig,
    pub bomb: ClassTally,
    pub empty: ClassTally,
    /// Correct "bomb present" verdicts per screen detection on bomb slits.
    pub conclusive_bomb_fraction: Option<f64>,
    /// Correct "bomb absent" verdicts per screen detection on empty slits.
    pub conclusive_empty_fraction: Option<f64>,
    /// Correct "bomb present" claims over all "bomb present" claims.
    pub claim_accuracy_bomb: Option<f64>,
    /// Correct "bomb absent" claims over all "bomb absent" claims.
    pub claim_accuracy_empty: Option<f64>,
    /// Bomb-claim accuracy if both classes had produced equally many
    /// detections (from per-detection rates).
    pub projected_claim_accuracy_bomb: Option<f64>,
    pub projected_claim_accuracy_empty: Option<f64>,
    /// Monte Carlo estimate of `η̃`: confident bomb detections over those plus
    /// explosions.
    pub eta_tilde_estimate: Option<f64>,
}

impl ExperimentReport {
    fn from_tallies(seed: u64, config: ExperimentConfig, bomb: ClassTally, empty: ClassTally) -> Self {
        let projected = |right: Option<f64>, wrong: Option<f64>| match (right, wrong) {
            (Some(r), Some(w)) if r + w > 0.0 => Some(r / (r + w)),
            _ => None,
        };
        Self {
            seed,
            config,
            conclusive_bomb_fraction: bomb.correct_fraction(),
            conclusive_empty_fraction: empty.correct_fraction(),
            claim_accuracy_bomb: ratio(bomb.n_correct, bomb.n_correct + empty.n_incorrect),
            claim_accuracy_empty: ratio(empty.n_correct, empty.n_correct + bomb.n_incorrect),
            projected_claim_accuracy_bomb: projected(bomb.correct_fraction(), empty.incorrect_fraction()),
            projected_claim_accuracy_empty: projected(empty.correct_fraction(), bomb.incorrect_fraction()),
            eta_tilde_estimate: ratio(bomb.n_correct, bomb.n_correct + bomb.n_explosions),
            bomb,
            empty,
        }
    }
}

/// Runs `n_bomb` bomb-slit and `n_empty` empty-slit trials and classifies
/// every detection. Returns the per-trial records (bomb slits first).
pub fn run_trials(config: &ExperimentConfig, seed: u64) -> Result<Diagnosed<Vec<TrialRecord>>> {
    let g = &config.geometry;
    let cfg = &config.classifier;
    let simulator = TrialSimulator::new(g, config.window, config.bin_width)?;
    let posteriors = posterior_table(g, cfg.prior_bomb(), cfg.likelihood_mode(), config.window, config.bin_width)?;
    let sim = &simulator.value;
    let threshold = cfg.threshold();

    let run_class = |h: SlitHypothesis, n: u64| {
        map_indices(n as usize, |i| {
            let mut rng = trial_rng(seed, h, i as u64);
            let outcome = sim.simulate_trial(h, &mut rng);
            let classification = match outcome {
                TrialOutcome::Explosion => None,
                // Sampled bins have positive density, so the posterior is defined.
                TrialOutcome::Detection { bin, .. } => {
                    let p = posteriors[bin].unwrap_or(0.5);
                    Some((p, label_for(p, threshold)))
                }
            };
            TrialRecord { trial: i as u64, true_class: h, outcome, classification }
        })
    };
    let mut records = run_class(SlitHypothesis::Bomb, config.n_bomb);
    records.extend(run_class(SlitHypothesis::NoBomb, config.n_empty));
    Ok(Diagnosed { value: records, warnings: simulator.warnings })
}

/// Aggregates trial records into a report.
pub fn summarize(config: &ExperimentConfig, seed: u64, records: &[TrialRecord]) -> ExperimentReport {
    let (mut bomb, mut empty) = (ClassTally::default(), ClassTally::default());
    for r in records {
        match r.true_class {
            SlitHypothesis::Bomb => bomb.add(SlitHypothesis::Bomb, r),
            SlitHypothesis::NoBomb => empty.add(SlitHypothesis::NoBomb, r),
        }
    }
    ExperimentReport::from_tallies(seed, *config, bomb, empty)
}

/// The full classification experiment.
pub fn run_experiment(config: &ExperimentConfig, seed: u64) -> Result<Diagnosed<ExperimentReport>> {
    Ok(run_trials(config, seed)?.map(|records| summarize(config, seed, &records)))
}

/// Convenience entry point with the default window and binning.
pub fn run_experiment_default(
    n_bomb: u64,
    n_empty: u64,
    g: &ApparatusGeometry,
    cfg: &ClassifierConfig,
    seed: u64,
) -> Result<Diagnosed<ExperimentReport>> {
    run_experiment(&ExperimentConfig::new(*g, *cfg, n_bomb, n_empty), seed)
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self::new(
            ApparatusGeometry::reference(),
            ClassifierConfig::new(0.5, 0.99, LikelihoodMode::FluxAware).expect("valid defaults"),
            100_000,
            100_000,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_bins(a: f64, b: f64) -> SampledPattern {
        SampledPattern::from_physical(
            crate::Axis::Position,
            Window::new(0.0, 2.0).unwrap(),
            1.0,
            alloc::vec![a, b],
            Normalization::UnitMass,
            1.0,
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn sampler_rejects_bad_patterns() {
        let mut p = two_bins(1.0, 1.0);
        p.normalization = Normalization::PeakOne;
        assert!(BinSampler::new(&p).is_err());
        assert!(matches!(
            SampledPattern::from_physical(
                crate::Axis::Position,
                Window::new(0.0, 2.0).unwrap(),
                1.0,
                alloc::vec![0.0, 0.0],
                Normalization::UnitMass,
                1.0,
                1.0
            ),
            Err(Error::ZeroMass)
        ));
    }

    #[test]
    fn sampler_skips_empty_bins() {
        let s = BinSampler::new(&two_bins(0.0, 3.0)).unwrap();
        assert_eq!(s.bin_for(0.0), 1);
        assert_eq!(s.bin_for(0.999_999), 1);
        let s = BinSampler::new(&two_bins(3.0, 0.0)).unwrap();
        assert_eq!(s.bin_for(0.999_999_999), 0);
    }

    #[test]
    fn single_bin_always_drawn() {
        let p = SampledPattern::from_physical(
            crate::Axis::Position,
            Window::new(-5.0, 5.0).unwrap(),
            10.0,
            alloc::vec![0.3],
            Normalization::UnitMass,
            1.0,
            1.0,
        )
        .unwrap();
        let s = BinSampler::new(&p).unwrap();
        let mut rng = trial_rng(1, SlitHypothesis::NoBomb, 0);
        for _ in 0..1000 {
            let i = s.sample(&mut rng);
            assert_eq!((i, s.bin_center(i)), (0, 0.0));
        }
    }

    #[test]
    fn streams_are_distinct_and_repeatable() {
        let a: u64 = trial_rng(7, SlitHypothesis::Bomb, 3).gen();
        let b: u64 = trial_rng(7, SlitHypothesis::Bomb, 3).gen();
        let c: u64 = trial_rng(7, SlitHypothesis::NoBomb, 3).gen();
        let d: u64 = trial_rng(7, SlitHypothesis::Bomb, 4).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn tally_accounting() {
        let truth = SlitHypothesis::Bomb;
        let mut t = ClassTally::default();
        let rec = |c| TrialRecord {
            trial: 0,
            true_class: truth,
            outcome: TrialOutcome::Detection { bin: 0, bin_center: 0.0 },
            classification: c,
        };
        t.add(truth, &rec(None));
        t.add(truth, &rec(Some((0.995, Label::BombPresent))));
        t.add(truth, &rec(Some((0.001, Label::BombAbsent))));
        t.add(truth, &rec(Some((0.5, Label::Inconclusive))));
        assert_eq!(t.n_total, 4);
        assert_eq!(t.n_explosions + t.n_correct + t.n_incorrect + t.n_inconclusive, t.n_total);
        assert_eq!(t.claim_accuracy(), Some(0.5));
        assert_eq!(ClassTally::default().claim_accuracy(), None);
    }
}
