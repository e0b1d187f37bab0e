use proptest::prelude::*;
use unlearn::algorithms::{
    comparison_threshold, random_removal_certificate, random_removal_fit,
    selective_removal_certificate, selective_removal_fit, Algorithm, CertificateInput, DataModel,
    Estimator, SampleSet, Variant,
};
use unlearn::concentration::{dkw, dkw_half_budget, f1_cdf, gamma_gaussian};
use unlearn::tof_core::NoiseModel;
use unlearn::verify::{run_trials, TrialConfig, TrialModel};

fn input(
    n1: u64,
    n2: u64,
    n_r: u64,
    delta: f64,
    separation: f64,
    model: DataModel,
) -> CertificateInput {
    CertificateInput {
        n1,
        n2,
        n_r,
        delta,
        separation,
        model,
        estimator: Estimator::WeightedMean,
    }
}

fn sizes() -> impl Strategy<Value = (u64, u64, u64)> {
    (10u64..5000, 10u64..5000).prop_flat_map(|(n1, n2)| (Just(n1), Just(n2), 0..n1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn gaussian_radius_is_monotone(n in 1u64..10_000, d in 1u64..50, delta in 0.001f64..0.5) {
        let g = gamma_gaussian(n, d, delta).unwrap();
        prop_assert!(gamma_gaussian(n + 1, d, delta).unwrap() < g);
        prop_assert!(gamma_gaussian(n, d + 1, delta).unwrap() > g);
        prop_assert!(gamma_gaussian(n, d, 0.5 * delta).unwrap() > g);
    }

    #[test]
    fn distance_cdf_is_monotone(t in 0.01f64..10.0, step in 0.01f64..1.0, sep in 0.0f64..5.0, d in 1u64..12) {
        let f = f1_cdf(t, sep, 1.0, d).unwrap();
        let later = f1_cdf(t + step, sep, 1.0, d).unwrap();
        prop_assert!(later >= f);
        if f > 1e-12 && later < 1.0 - 1e-12 {
            prop_assert!(later > f);
        }
        prop_assert!(f1_cdf(t, sep + step, 1.0, d).unwrap() <= f + 4.0 * f64::EPSILON);
    }

    #[test]
    fn dkw_conventions_agree(n in 1u64..100_000, delta in 1e-6f64..0.99) {
        prop_assert_eq!(dkw_half_budget(n, delta).unwrap(), dkw(n, 0.5 * delta).unwrap());
        let selective_form = ((4.0 / delta).ln() / (2.0 * n as f64)).sqrt();
        prop_assert!((dkw_half_budget(n, delta).unwrap() - selective_form).abs() <= 1e-15 * selective_form.max(1.0));
    }

    #[test]
    fn certificates_split_the_separation((n1, n2, n_r) in sizes(), delta in 0.01f64..0.5, sep in 0.0f64..10.0, d in 1u64..6) {
        let inp = input(n1, n2, n_r, delta, sep, DataModel::Gaussian { sigma: 1.0, d });
        let random = random_removal_certificate(&inp).unwrap();
        prop_assert_eq!(random.alpha_max, sep - random.epsilon_min);
        prop_assert!((random.alpha_max + random.epsilon_min - sep).abs() <= 4.0 * f64::EPSILON * sep.max(1.0));
        if let Ok(selective) = selective_removal_certificate(&inp) {
            for cert in [selective.displayed, selective.tight] {
                prop_assert_eq!(cert.alpha_max, sep - cert.epsilon_min);
                prop_assert_eq!(cert.algorithm, Algorithm::Selective);
            }
        }
    }

    #[test]
    fn selective_wins_beyond_the_threshold(n1 in 100u64..5000, n2 in 100u64..5000, frac in 0.3f64..0.999, delta in 0.01f64..0.3, extra in 0.0f64..5.0) {
        let n_r = ((n1 as f64 * frac) as u64).min(n1 - 1);
        let cmp = comparison_threshold(n1, n2, n_r, delta).unwrap();
        prop_assert_eq!(cmp.feasible, n_r as f64 > cmp.n_r_threshold);
        prop_assume!(cmp.feasible);
        let sep = cmp.delta_m.unwrap().max(0.0) + extra;
        let inp = input(n1, n2, n_r, delta, sep, DataModel::Gaussian { sigma: 1.0, d: 1 });
        let random = random_removal_certificate(&inp).unwrap();
        let selective = selective_removal_certificate(&inp).unwrap();
        prop_assert!(selective.tight.epsilon_min <= random.epsilon_min + 1e-12);
    }

    #[test]
    fn exact_gaussian_quantile_never_exceeds_the_chi_square_radius((n1, n2, n_r) in sizes(), delta in 0.01f64..0.5, sep in 0.0f64..10.0, sigma in 0.2f64..3.0) {
        // With Gaussian noise the location radius is the exact two-sided
        // quantile, so it can only undercut the Gaussian-model radius.
        let gaussian = random_removal_certificate(&input(n1, n2, n_r, delta, sep, DataModel::Gaussian { sigma, d: 1 })).unwrap();
        let location = random_removal_certificate(&input(n1, n2, n_r, delta, sep * sigma, DataModel::Location { noise: NoiseModel::Gaussian { sigma } })).unwrap();
        prop_assert!(location.epsilon_min <= gaussian.epsilon_min * sigma * (1.0 + 1e-12));
    }

    #[test]
    fn selective_fit_is_deterministic(s1 in prop::collection::vec(-10.0f64..10.0, 1..60), s2 in prop::collection::vec(-10.0f64..10.0, 1..60), frac in 0.0f64..=1.0) {
        let n_r = (s1.len() as f64 * frac) as usize;
        let (a, b) = (SampleSet::scalar(&s1).unwrap(), SampleSet::scalar(&s2).unwrap());
        let first = selective_removal_fit(&a, &b, n_r, Estimator::WeightedMean, None).unwrap();
        let second = selective_removal_fit(&a, &b, n_r, Estimator::WeightedMean, None).unwrap();
        prop_assert_eq!(first[0].to_bits(), second[0].to_bits());
    }

    #[test]
    fn removing_everything_returns_the_desired_estimate(s1 in prop::collection::vec(-10.0f64..10.0, 1..60), s2 in prop::collection::vec(-10.0f64..10.0, 1..60), seed in any::<u64>()) {
        let (a, b) = (SampleSet::scalar(&s1).unwrap(), SampleSet::scalar(&s2).unwrap());
        let desired_mean = s2.iter().sum::<f64>() / s2.len() as f64;
        for mu in [
            random_removal_fit(&a, &b, s1.len(), Estimator::WeightedMean, seed).unwrap(),
            selective_removal_fit(&a, &b, s1.len(), Estimator::WeightedMean, None).unwrap(),
        ] {
            prop_assert!((mu[0] - desired_mean).abs() <= 1e-12 * desired_mean.abs().max(1.0));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn trial_reports_are_reproducible(seed in any::<u64>(), selective in any::<bool>()) {
        let config = TrialConfig {
            model: TrialModel::Gaussian { unwanted: vec![4.0, 0.0], desired: vec![0.0, 0.0], sigma: 1.0 },
            n1: 100,
            n2: 100,
            n_r: 95,
            delta: 0.1,
            algorithm: if selective { Algorithm::Selective } else { Algorithm::Random },
            variant: Variant::Tight,
            estimator: Estimator::WeightedMean,
            trials: 30,
            seed,
        };
        let (a, b) = (run_trials(&config).unwrap(), run_trials(&config).unwrap());
        prop_assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }
}

#[test]
fn selective_slack_is_non_negative_where_selection_wins() {
    let (n1, n2, n_r, delta) = (2000, 2000, 1900, 0.05);
    let cmp = comparison_threshold(n1, n2, n_r, delta).unwrap();
    assert!(cmp.feasible);
    for sep in [cmp.delta_m.unwrap().max(0.0) + 0.5, 3.0, 5.0] {
        let config = TrialConfig {
            model: TrialModel::Gaussian {
                unwanted: vec![sep],
                desired: vec![0.0],
                sigma: 1.0,
            },
            n1,
            n2,
            n_r,
            delta,
            algorithm: Algorithm::Selective,
            variant: Variant::Tight,
            estimator: Estimator::WeightedMean,
            trials: 400,
            seed: 21,
        };
        let report = run_trials(&config).unwrap();
        // q95 of ‖μ − ν₁‖ is the empirical 1 − δ quantile at δ = 0.05.
        assert!(
            report.preservation_threshold - report.preservation_distance.q95 >= 0.0,
            "{report:?}"
        );
        let random = random_removal_certificate(&input(
            n1,
            n2,
            n_r,
            delta,
            sep,
            DataModel::Gaussian { sigma: 1.0, d: 1 },
        ))
        .unwrap();
        assert!(report.certificate.epsilon_min <= random.epsilon_min);
    }
}
