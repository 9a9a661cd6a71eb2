use num_rational::BigRational;
use proptest::prelude::*;

use photocount::error::OracleError;
use photocount::fock::{
    exact_photon_stats, make_ladder, symmetric_sum_closed, symmetric_sum_enumerated,
    DensityMatrix, ExactOperator, FloatOperator, Ladder, Surd,
};
use photocount::verify::{check_closed_loop, loop_stats};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn enumerated_matches_closed_form_exactly(k in 1usize..=4, extra in 0usize..6) {
        let dim = 4 * k + 4 + extra;
        let e: ExactOperator = symmetric_sum_enumerated(k, dim).unwrap();
        let c: ExactOperator = symmetric_sum_closed(k, dim).unwrap();
        prop_assert!(e.agrees_on_trusted(&c));
        prop_assert!(e.trusted_dim() >= 2 * k + 4);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_loop_thermal(mean in 0.0f64..3.0) {
        let r = check_closed_loop("thermal", &DensityMatrix::thermal(mean, 160).unwrap());
        prop_assert!(r.passed, "{}", r.detail);
    }

    #[test]
    fn closed_loop_poisson(mean in 0.0f64..2.0) {
        let r = check_closed_loop("poisson", &DensityMatrix::poisson(mean, 160).unwrap());
        prop_assert!(r.passed, "{}", r.detail);
    }
}

#[test]
fn float_mode_matches_exact_mode() {
    for k in 1..=3 {
        let exact: ExactOperator = symmetric_sum_enumerated(k, 20).unwrap();
        let float: FloatOperator = symmetric_sum_enumerated(k, 20).unwrap();
        let exact = exact.to_float();
        for r in 0..float.trusted_dim() {
            for c in 0..float.trusted_dim() {
                let (a, b) = (*exact.raw(r, c), *float.raw(r, c));
                assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0), "k={k} ({r},{c}) {a} vs {b}");
            }
        }
    }
}

#[test]
fn closed_form_is_diagonal_and_positive() {
    for k in 1..=6 {
        let s: ExactOperator = symmetric_sum_closed(k, 30).unwrap();
        assert!(s.is_diagonal());
        for (m, v) in s.trusted_diagonal().iter().enumerate() {
            let q = v.as_rational().expect("diagonal is rational");
            assert!(q > BigRational::from_integer(0.into()), "k={k} m={m}");
        }
    }
}

#[test]
fn commutator_is_identity_on_trusted_block() {
    let a: ExactOperator = make_ladder(12, Ladder::Annihilation).unwrap();
    let ad: ExactOperator = make_ladder(12, Ladder::Creation).unwrap();
    let aad = a.matmul(&ad).unwrap();
    let ada = ad.matmul(&a).unwrap();
    let n: ExactOperator = make_ladder(12, Ladder::Number).unwrap();
    assert!(ada.agrees_on_trusted(&n));
    for m in 0..aad.trusted_dim() {
        let diff = aad.entry(m, m).unwrap() + &(-ada.entry(m, m).unwrap().clone());
        assert_eq!(diff, Surd::integer(1));
    }
}

#[test]
fn guarded_entries_cannot_be_read() {
    let s: ExactOperator = symmetric_sum_enumerated(2, 12).unwrap();
    let top = s.trusted_dim();
    assert!(s.entry(top - 1, top - 1).is_ok());
    assert!(matches!(
        s.entry(top, top),
        Err(OracleError::GuardedEntry { .. })
    ));
    assert!(matches!(
        s.entry(0, s.dim() - 1),
        Err(OracleError::GuardedEntry { .. })
    ));
}

#[test]
fn squeezed_loop_matches_fock_populations() {
    for (r, n, var, skew3) in [
        (0.5, 0.2715403174076219, 0.6905489227709078, 2.1311453402406304),
        (0.1, 0.010033377809537924, 0.020268092959613706, 0.04134961565579797),
    ] {
        let rho = DensityMatrix::squeezed_vacuum(r, 0.3, 120).unwrap().phase_averaged();
        let via = loop_stats(&rho).unwrap();
        let direct = exact_photon_stats(&rho).unwrap().as_array();
        for (i, want) in [n, var, skew3].into_iter().enumerate() {
            assert!((via[i] - want).abs() < 1e-10, "r={r} stat {i}: {}", via[i]);
            assert!((direct[i] - want).abs() < 1e-10, "r={r} stat {i}: {}", direct[i]);
        }
    }
}
