use marginbound::bounds::{BoundParams, Family};
use marginbound::complexity::FatDimParams;
use marginbound::distribution::SyntheticDistribution;
use marginbound::hypothesis::{dot, l2_norm, Linear};
use marginbound::risk::empirical_risk;
use marginbound::Hypothesis;
use marginbound_harness::boundmin::{objective, train_bound_min, BoundMinSettings};
use marginbound_harness::config::{ClassKind, ClassSpec, ComplexitySettings, ExperimentConfig, ValidationMode};
use marginbound_harness::generate::{generate, xor_layout};
use marginbound_harness::tightness::{compare_tightness, crossover_emp, new_form, old_form, TightnessConfig};
use marginbound_harness::train::{train, TrainerSpec};
use marginbound_harness::validate_bounds;

fn separable(gap: f64, noise: f64) -> SyntheticDistribution {
    SyntheticDistribution::MarginSeparable {
        w_star: vec![0.6, 0.8],
        gap,
        radius: 1.0,
        noise_rate: noise,
    }
}

#[test]
fn generation_is_reproducible() {
    let d = separable(0.3, 0.0);
    let a = generate(&d, 50, 9).unwrap();
    let b = generate(&d, 50, 9).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, generate(&d, 50, 10).unwrap());
}

#[test]
fn planted_gap_holds_without_noise() {
    let s = generate(&separable(0.3, 0.0), 2000, 1).unwrap();
    for i in 0..s.len() {
        let u = s.label(i) * dot(&[0.6, 0.8], s.point(i));
        assert!(u >= 0.3 - 1e-12, "margin {u}");
        assert!(l2_norm(s.point(i)) <= 1.0 + 1e-12);
    }
}

#[test]
fn label_noise_rate_is_respected() {
    let m = 100_000;
    let s = generate(&separable(0.1, 0.1), m, 3).unwrap();
    let flipped = (0..m)
        .filter(|&i| s.label(i) * dot(&[0.6, 0.8], s.point(i)) < 0.0)
        .count() as f64
        / m as f64;
    let se = (0.1f64 * 0.9 / m as f64).sqrt();
    assert!((flipped - 0.1).abs() <= 3.0 * se, "flipped {flipped}");
}

#[test]
fn hinge_trainer_separates_separable_data() {
    let s = generate(&separable(0.2, 0.0), 300, 4).unwrap();
    let spec = TrainerSpec::HingeSubgradientLinear {
        iterations: 2000,
        norm_cap: 10.0,
        step: 1.0,
    };
    let h = train(&spec, &s, 5).unwrap();
    assert_eq!(empirical_risk(&h, &s).unwrap(), 0.0);
    let min_margin = h.margins(&s).unwrap().into_iter().fold(f64::INFINITY, f64::min);
    assert!(min_margin > 0.0);
    let Hypothesis::Linear(l) = &h else { panic!("expected a linear predictor") };
    assert!(l2_norm(l.weights()) <= 10.0 + 1e-9);
}

#[test]
fn one_round_of_boosting_is_one_stump() {
    let s = generate(&separable(0.2, 0.05), 200, 6).unwrap();
    let h = train(&TrainerSpec::BoostStumps { rounds: 1 }, &s, 0).unwrap();
    let Hypothesis::Ensemble(e) = &h else { panic!("expected an ensemble") };
    assert_eq!(e.stumps().len(), 1);
    assert_eq!(e.weights(), &[1.0]);
}

#[test]
fn tiny_mlp_learns_xor() {
    let s = xor_layout(200, 0.2, 7).unwrap();
    let spec = TrainerSpec::TinyMlp {
        width: 4,
        iterations: 10_000,
        step: 0.5,
        row_l1_cap: 20.0,
        init_scale: 0.5,
    };
    let h = train(&spec, &s, 8).unwrap();
    let err = empirical_risk(&h, &s).unwrap();
    assert!(err <= 0.1, "training error {err}");
}

#[test]
fn bound_min_reaches_zero_on_planted_separator() {
    let s = generate(&separable(0.3, 0.0), 500, 11).unwrap();
    let grid = [0.05, 0.1, 0.2, 0.3];
    let r = train_bound_min(&s, &grid, &BoundMinSettings::default(), 12).unwrap();
    assert_eq!(r.objective, 0.0);
    assert!(l2_norm(&r.w) <= 1.0 + 1e-9);
    assert_eq!(objective(&r.w, &s, r.rho, 0.01), r.objective);
    assert!(r.best_so_far.windows(2).all(|w| w[1] <= w[0]));
    assert!(r.initial_objectives.iter().all(|&o| r.objective <= o));
}

#[test]
fn bound_min_with_zero_lambda_is_ramp_minimization() {
    let s = generate(&separable(0.05, 0.1), 200, 13).unwrap();
    let cfg = BoundMinSettings {
        lambda: 0.0,
        restarts: 4,
        iterations: 200,
        ..BoundMinSettings::default()
    };
    let r = train_bound_min(&s, &[0.2], &cfg, 14).unwrap();
    let ramp = (0..s.len())
        .map(|i| marginbound_harness::boundmin::ramp(s.label(i) * dot(&r.w, s.point(i)), 0.2))
        .sum::<f64>()
        / s.len() as f64;
    assert_eq!(r.objective, ramp);
    assert!(l2_norm(&r.w) <= 1.0 + 1e-9);
    assert!(r.best_so_far.windows(2).all(|w| w[1] <= w[0]));
}

#[test]
fn tightness_examples() {
    assert!((new_form(0.0, 0.01) - 0.01).abs() < 1e-15);
    assert!((old_form(0.0, 0.01, 1.0) - 0.1).abs() < 1e-15);
    // both forms carry the empirical term: 0.16 against 0.19
    assert!((new_form(0.09, 0.01) - 0.16).abs() < 1e-12);
    assert!((old_form(0.09, 0.01, 1.0) - 0.19).abs() < 1e-12);
    // at β = 1 the new form can only tie the old one, at emp = 0
    assert_eq!(new_form(0.0, 1.0), old_form(0.0, 1.0, 1.0));
    assert!(new_form(0.25, 1.0) > old_form(0.25, 1.0, 1.0));
    assert_eq!(crossover_emp(1.0, 1.0, 1.0), None);
    let x = crossover_emp(0.01, 0.01, 1.0).unwrap();
    assert!((x - 0.2025).abs() < 1e-12);
}

#[test]
fn tightness_table_matches_closed_forms() {
    let cfg = TightnessConfig {
        classes: vec![FatDimParams::Linear { radius: 1.0, rho: 0.1 }],
        m_grid: vec![1000, 100_000],
        rho_grid: vec![0.1, 0.5],
        beta_grid: vec![0.0, 0.01, 0.25, 1.0],
        emp_grid: vec![0.0, 0.01, 0.09, 0.3],
        c_prime: 1.0,
        beta_ratio: 1.0,
    };
    let rep = compare_tightness(&cfg).unwrap();
    assert_eq!(rep.rows.len(), (4 + 4) * 4);
    assert!(rep.zero_emp_new_not_larger);
    for r in &rep.rows {
        assert_eq!(r.new_value, new_form(r.emp, r.beta));
        assert_eq!(r.old_value, old_form(r.emp, r.beta_prime, 1.0));
        let lhs = 2.0 * (r.emp * r.beta).sqrt() + r.beta;
        assert_eq!(r.new_smaller, lhs < r.beta_prime.sqrt() || r.new_value < r.old_value);
    }
}

fn campaign(m: u64, delta: f64, families: Vec<Family>) -> ExperimentConfig {
    ExperimentConfig {
        schema: marginbound_harness::config::EXPERIMENT_SCHEMA.to_string(),
        distribution: SyntheticDistribution::TwoGaussianMixture {
            mean: vec![1.0, 0.5],
            sigma: 1.0,
            noise_rate: 0.05,
            radius: 4.0,
        },
        class: ClassSpec {
            kind: ClassKind::Linear,
            pool_size: 10,
            norm_cap: 1.0,
        },
        mode: ValidationMode::Pool,
        trainer: None,
        families,
        params: BoundParams::new(2.0, 0.2, delta, m).unwrap(),
        trials: 40,
        seed: 21,
        complexity: ComplexitySettings {
            cover_trials: 4,
            peeling_outer: 8,
            n_sigma: 64,
            holdout: 20_000,
            ..ComplexitySettings::default()
        },
        unbounded: Default::default(),
        output: Default::default(),
    }
}

#[test]
fn tiny_sample_campaign_is_vacuous_and_never_violates() {
    let cfg = campaign(5, 0.05, vec![Family::CovAlpha2, Family::CovFat]);
    let rep = validate_bounds(&cfg).unwrap();
    for f in &rep.families {
        assert_eq!(f.violations, 0);
        assert_eq!(f.violation_rate, 0.0);
        // every trial is either vacuous or outside the formula's domain
        assert!(f.vacuous_trials + f.inapplicable_trials >= cfg.trials);
    }
}

#[test]
fn delta_one_still_runs() {
    let cfg = campaign(50, 1.0, vec![Family::CovAlpha2, Family::Rad, Family::Unbounded]);
    let rep = validate_bounds(&cfg).unwrap();
    assert_eq!(rep.families.len(), 3);
    for f in &rep.families {
        assert_eq!(f.trials, cfg.trials);
        assert!((0.0..=1.0).contains(&f.violation_rate));
        assert!(f.ci_low <= f.violation_rate && f.violation_rate <= f.ci_high);
    }
}

#[test]
fn campaign_is_reproducible_and_covers_every_family() {
    let mut cfg = campaign(100, 0.05, Family::ALL.to_vec());
    cfg.trials = 12;
    let a = validate_bounds(&cfg).unwrap();
    let b = validate_bounds(&cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.event, "uniform-over-pool");
    for f in &a.families {
        assert_eq!(f.trials, 12);
        assert!(f.violation_rate <= 1.0);
    }
    assert_eq!(a.csv_rows(12), b.csv_rows(12));
}

#[test]
fn trained_campaign_labels_its_event() {
    let mut cfg = campaign(100, 0.05, vec![Family::CovFat, Family::RadSmooth]);
    cfg.mode = ValidationMode::Trained;
    cfg.trainer = Some(TrainerSpec::HingeSubgradientLinear {
        iterations: 100,
        norm_cap: 1.0,
        step: 1.0,
    });
    cfg.trials = 10;
    let rep = validate_bounds(&cfg).unwrap();
    assert_eq!(rep.event, "single-trained-hypothesis");
    assert_eq!(rep.family(Family::RadSmooth).unwrap().rows.len(), 10);
    // a trainer allowed a larger norm than the class would break the complexity input
    cfg.trainer = Some(TrainerSpec::HingeSubgradientLinear {
        iterations: 100,
        norm_cap: 2.0,
        step: 1.0,
    });
    assert!(validate_bounds(&cfg).is_err());
}

#[test]
fn linear_helpers_are_consistent() {
    let h = Linear::new(vec![3.0, 4.0], 5.0).unwrap();
    assert_eq!(h.eval(&[1.0, 1.0]), 7.0);
}
