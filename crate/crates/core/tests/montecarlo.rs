mod common;

use ifm_core::inference::{eta_tilde, posterior_table};
use ifm_core::montecarlo::{run_experiment, run_trials, trial_rng, BinSampler, ExperimentConfig, TrialSimulator};
use ifm_core::screen::pattern;
use ifm_core::{
    ApparatusGeometry, Axis, ClassifierConfig, Label, Normalization, SampledPattern, SlitHypothesis, TrialOutcome,
    Window,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn two_bins(a: f64, b: f64) -> SampledPattern {
    SampledPattern::from_physical(
        Axis::Position,
        Window::new(0.0, 2.0).unwrap(),
        1.0,
        vec![a, b],
        Normalization::UnitMass,
        1.0,
        1.0,
    )
    .unwrap()
}

#[test]
fn fair_two_bin_pattern() {
    let s = BinSampler::new(&two_bins(0.5, 0.5)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let first = (0..1_000_000).filter(|_| s.sample(&mut rng) == 0).count() as f64;
    assert!((first - 500_000.0).abs() <= 4.0 * 250_000f64.sqrt(), "{first}");
}

#[test]
fn single_bin_pattern() {
    let p = SampledPattern::from_physical(
        Axis::Position,
        Window::new(-5.0, 5.0).unwrap(),
        10.0,
        vec![0.3],
        Normalization::FluxMass,
        0.5,
        1.0,
    )
    .unwrap();
    let s = BinSampler::new(&p).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    assert!((0..1000).all(|_| s.sample(&mut rng) == 0));
    assert_eq!(s.bin_center(0), 0.0);
}

#[test]
fn unsampleable_patterns_rejected() {
    let mut empty = two_bins(1.0, 1.0);
    empty.densities = vec![0.0, 0.0];
    empty.mass = 0.0;
    assert!(BinSampler::new(&empty).is_err());
    let peak = two_bins(1.0, 2.0).renormalized(Normalization::PeakOne, 1.0).unwrap();
    assert!(BinSampler::new(&peak).is_err());
}

#[test]
fn chi_square_against_no_bomb_pattern() {
    let g = ApparatusGeometry::reference();
    let p = pattern(SlitHypothesis::NoBomb, &g, Window::default(), 10.0, Normalization::UnitMass).unwrap().value;
    let s = BinSampler::new(&p).unwrap();
    let draws = 1_000_000usize;
    let mut counts = vec![0u64; p.len()];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..draws {
        counts[s.sample(&mut rng)] += 1;
    }
    // pool neighbouring bins until each cell expects at least 50 draws
    let (mut stat, mut cells) = (0.0, 0usize);
    let (mut expected, mut observed) = (0.0, 0.0);
    for (m, &c) in p.bin_masses().zip(&counts) {
        expected += m * draws as f64;
        observed += c as f64;
        if expected >= 50.0 {
            stat += (observed - expected).powi(2) / expected;
            cells += 1;
            expected = 0.0;
            observed = 0.0;
        }
    }
    stat += if expected > 0.0 { (observed - expected).powi(2) / expected } else { 0.0 };
    cells += usize::from(expected > 0.0);
    let critical = common::chi_square_critical((cells - 1) as f64, 3.090_232);
    assert!(stat < critical, "χ² = {stat} over {cells} cells, critical {critical}");
}

#[test]
fn explosions_only_with_the_bomb() {
    let g = ApparatusGeometry::reference();
    let sim = TrialSimulator::new(&g, Window::default(), 10.0).unwrap().value;
    let window = Window::default();
    let n = 100_000u64;
    let mut explosions = 0u64;
    for i in 0..n {
        let none = sim.simulate_trial(SlitHypothesis::NoBomb, &mut trial_rng(9, SlitHypothesis::NoBomb, i));
        match none {
            TrialOutcome::Explosion => panic!("explosion without a bomb"),
            TrialOutcome::Detection { bin_center, .. } => assert!(bin_center > window.lo && bin_center < window.hi),
        }
        if sim.simulate_trial(SlitHypothesis::Bomb, &mut trial_rng(9, SlitHypothesis::Bomb, i)) == TrialOutcome::Explosion {
            explosions += 1;
        }
    }
    assert!((explosions as f64 / n as f64 - 0.5).abs() < 0.01);
}

#[test]
fn trial_streams_are_reproducible() {
    let a = trial_rng(5, SlitHypothesis::Bomb, 17);
    let b = trial_rng(5, SlitHypothesis::Bomb, 17);
    assert_eq!(a, b);
    assert_ne!(a, trial_rng(5, SlitHypothesis::NoBomb, 17));
    assert_ne!(a, trial_rng(6, SlitHypothesis::Bomb, 17));
}

#[test]
fn identical_across_thread_counts() {
    let cfg = ExperimentConfig { n_bomb: 20_000, n_empty: 20_000, ..ExperimentConfig::default() };
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_trials(&cfg, 11).unwrap().value)
    };
    let one = run(1);
    assert_eq!(one, run(3));
    assert_eq!(one, run(8));
}

#[test]
fn experiment_reproduces_efficiency_and_respects_thresholds() {
    let cfg = ExperimentConfig::default();
    let g = cfg.geometry;
    let records = run_trials(&cfg, 2024).unwrap().value;
    let report = run_experiment(&cfg, 2024).unwrap().value;

    for tally in [&report.bomb, &report.empty] {
        assert_eq!(tally.n_total, tally.n_explosions + tally.n_correct + tally.n_incorrect + tally.n_inconclusive);
    }
    assert_eq!(report.empty.n_explosions, 0);

    let eta = eta_tilde(&g, &cfg.classifier, cfg.window, cfg.bin_width).unwrap().value.eta_tilde;
    let estimate = report.eta_tilde_estimate.unwrap();
    let n = (report.bomb.n_correct + report.bomb.n_explosions) as f64;
    let sigma = (eta * (1.0 - eta) / n).sqrt();
    assert!((estimate - eta).abs() < 3.0 * sigma, "{estimate} vs {eta} ± {sigma}");

    let posteriors = posterior_table(
        &g,
        cfg.classifier.prior_bomb(),
        cfg.classifier.likelihood_mode(),
        cfg.window,
        cfg.bin_width,
    )
    .unwrap();
    for r in &records {
        if let TrialOutcome::Detection { bin, .. } = r.outcome {
            let (p, label) = r.classification.unwrap();
            assert_eq!(Some(p), posteriors[bin]);
            if p >= cfg.classifier.threshold() {
                assert_eq!(label, Label::BombPresent);
            }
        }
    }
}

#[test]
fn claim_accuracies_are_label_based() {
    let mut cfg = ExperimentConfig::default();
    cfg.classifier = ClassifierConfig::new(0.5, 0.95, cfg.classifier.likelihood_mode()).unwrap();
    cfg.n_bomb = 30_000;
    cfg.n_empty = 30_000;
    let r = run_experiment(&cfg, 77).unwrap().value;
    let bomb_claims = r.bomb.n_correct + r.empty.n_incorrect;
    assert_eq!(r.claim_accuracy_bomb, Some(r.bomb.n_correct as f64 / bomb_claims as f64));
    let empty_claims = r.empty.n_correct + r.bomb.n_incorrect;
    assert_eq!(r.claim_accuracy_empty, Some(r.empty.n_correct as f64 / empty_claims as f64));
}
