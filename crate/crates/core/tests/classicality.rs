use proptest::prelude::*;

use photocount::classicality::{
    boundary_curve, classify, classify_with, third_moment_boundary, third_moment_surface,
    ClassifyOptions, Overall, Verdict,
};
use photocount::moments::{bootstrap_errors, PhotonStats};
use photocount::sampler::{sample_quadratures, PhaseMode, StateSpec};

proptest! {
    #[test]
    fn poisson_margins_are_exactly_zero(n in 0.0f64..50.0) {
        let r = classify(&PhotonStats::new(n, n, n), 0.0).unwrap();
        prop_assert_eq!(r.cond_variance.margin, Some(0.0));
        prop_assert_eq!(r.cond_third.margin, Some(0.0));
        prop_assert_eq!(r.overall, Overall::Classical);
    }

    #[test]
    fn exact_verdicts_are_deterministic(n in 0.0f64..5.0, var in 0.0f64..5.0, third in -5.0f64..20.0) {
        let s = PhotonStats::new(n, var, third);
        let a = classify(&s, 0.0).unwrap();
        let b = classify(&s, 0.0).unwrap();
        prop_assert_eq!(&a, &b);
        let expect = if var < n { Verdict::Violated } else { Verdict::Pass };
        prop_assert_eq!(a.cond_variance.verdict, expect);
    }

    #[test]
    fn thermal_inputs_pass_every_condition(n in 0.0f64..30.0) {
        let r = classify(&PhotonStats::new(n, n * (n + 1.0), n * (n + 1.0) * (2.0 * n + 1.0)), 0.0).unwrap();
        prop_assert_eq!(r.cond_variance.verdict, Verdict::Pass);
        prop_assert_eq!(r.cond_limit.verdict, Verdict::Pass);
        prop_assert_eq!(r.cond_third.verdict, Verdict::Pass);
    }

    #[test]
    fn surface_matches_pointwise_boundary(n in 0.0f64..3.0, var in 0.0f64..3.0) {
        let s = third_moment_surface(&[n], &[var]).unwrap();
        prop_assert_eq!(s, vec![[n, var, third_moment_boundary(n, var)]]);
    }
}

#[test]
fn sampled_controls_are_never_flagged() {
    let specs = [
        StateSpec::thermal(0.05),
        StateSpec::thermal(0.5),
        StateSpec::thermal(3.0),
        StateSpec::coherent(0.05),
        StateSpec::coherent(0.5),
        StateSpec::coherent(2.0),
        StateSpec::vacuum().with_noise(0.3),
    ];
    for (i, spec) in specs.iter().enumerate() {
        let batch = sample_quadratures(spec, PhaseMode::Averaged, 400_000, 700 + i as u64).unwrap();
        let stats = bootstrap_errors(&batch, 200, 3).unwrap();
        let r = classify(&stats, 3.0).unwrap();
        assert_ne!(r.overall, Overall::Nonclassical, "{spec:?}: {r:?}");
    }
}

#[test]
fn sampled_squeezing_is_flagged() {
    let batch = sample_quadratures(&StateSpec::squeezed_vacuum(0.3, 0.0), PhaseMode::Averaged, 400_000, 9)
        .unwrap();
    let stats = bootstrap_errors(&batch, 200, 3).unwrap();
    let r = classify(&stats, 3.0).unwrap();
    assert_eq!(r.cond_limit.verdict, Verdict::Violated, "{r:?}");
    assert_eq!(r.overall, Overall::Nonclassical);
}

#[test]
fn n_small_is_configurable() {
    // Fano 1.5 at n = 0.2: above the default scale, so condition 2 is not applied.
    let s = PhotonStats::new(0.2, 0.3, 0.5);
    let default = classify(&s, 0.0).unwrap();
    assert!(default.cond_limit.margin.is_none());
    let wide = classify_with(&s, &ClassifyOptions { k_sigma: 0.0, n_small: 0.3 }).unwrap();
    assert_eq!(wide.cond_limit.verdict, Verdict::Violated);
}

#[test]
fn boundary_rejects_bad_grids() {
    assert!(boundary_curve(&[0.0, 1.0, 0.5]).is_err());
    assert!(boundary_curve(&[-1.0, 0.0]).is_err());
    assert!(third_moment_surface(&[0.0, 1.0], &[f64::NAN]).is_err());
}
